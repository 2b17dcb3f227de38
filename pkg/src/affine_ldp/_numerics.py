"""Bracketed bisection run to the resolution of double precision."""

from __future__ import annotations

from typing import Callable


def bisect_to_precision(fn: Callable[[float], float], lo: float, hi: float) -> float:
    """Root of ``fn`` in [lo, hi] given opposite signs at the ends.

    Halves until the midpoint coincides with an endpoint, then returns the
    end with the smaller residual.  No derivatives, so it is safe next to
    the singular edges of the domains used here.
    """
    f_lo = fn(lo)
    f_hi = fn(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    while True:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f_mid = fn(mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return lo if abs(f_lo) <= abs(f_hi) else hi
