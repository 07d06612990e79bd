"""Identity-stable reduced-ring lookup (Mat ops require `ring is ring`)."""

from __future__ import annotations

from .ring import Ring

_CACHE: dict = {}


def reduced_ring(R: Ring, r_target: int) -> Ring:
    if r_target == R.r:
        return R
    key = (id(R), r_target)
    got = _CACHE.get(key)
    if got is None:
        sub = Ring(R.field, R.f, r_target, R.e, R.zeta if R.e > 1 else None)
        got = (sub, R)  # keep R alive so id() stays unique
        _CACHE[key] = got
    return got[0]
