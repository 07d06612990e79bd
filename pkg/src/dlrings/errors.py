"""Exception types shared across the package."""


class DLRingsError(Exception):
    pass


class ParameterMismatch(DLRingsError):
    """Operands belong to different rings/fields/groups."""


class NonUnit(DLRingsError):
    """Inversion of a non-unit ring element."""


class NonzeroTrace(DLRingsError):
    """Hilbert-90 target has nonzero sigma-trace."""


class BudgetExceeded(DLRingsError):
    """An enumeration or search would exceed the configured budget."""


class NonSplit(DLRingsError):
    """Characteristic polynomial has no full root set in the ring."""


class LevelTooLow(DLRingsError):
    """Congruence level i violates 2i >= r."""


class NotExtendable(DLRingsError):
    """Character does not extend to the requested subgroup."""


class NonIntegral(DLRingsError):
    """Decomposition produced a non-integer multiplicity."""


class UnsupportedConnectedComponent(DLRingsError):
    """No certified rule for the connected component of S(lambda)."""


class CheckFailed(DLRingsError):
    """A verification found a concrete counterexample."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
