"""Exact computations with SL2/GL2 over truncated tame local rings:
group enumeration, orbit-method characters, Lang maps and twisted
fixed-point counts for generalized Deligne-Lusztig style varieties."""

__version__ = "0.1.0"
