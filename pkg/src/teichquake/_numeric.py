"""Scalar backend: plain floats by default, mpmath inside ``working_precision``.

Earthquakes of large amplitude squeeze image points closer together than a
double can resolve (the gap shrinks like ``exp(-t)``), so every scalar
function here dispatches on the active precision context.  Values are lifted
to the active type at construction time by the geometric types.
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from contextvars import ContextVar

import mpmath

_DPS: ContextVar[int | None] = ContextVar("teichquake_dps", default=None)

TWO_PI = 2.0 * math.pi


def active_dps() -> int | None:
    return _DPS.get()


@contextmanager
def working_precision(dps: int | None):
    """Run the enclosed computations with ``dps`` decimal digits.

    ``None`` means ordinary double precision.  mpmath keeps a single global
    precision, so high-precision blocks must not run concurrently in threads.
    """
    if dps is None:
        token = _DPS.set(None)
        try:
            yield
        finally:
            _DPS.reset(token)
        return
    token = _DPS.set(int(dps))
    try:
        with mpmath.workdps(int(dps)):
            yield
    finally:
        _DPS.reset(token)


def dps_for_amplitude(amplitude: float, base: int = 30) -> int:
    """Digits needed for a composite earthquake of total amplitude A = t * sum(weights).

    An outer leaf squeezes the images of nested leaves to within about e^{-A};
    the translation along such an image then has entries of size e^{A/2}
    divided by that gap, and normalizing its determinant cancels about
    3A / ln 10 digits.
    """
    return base + int(math.ceil(3.0 * abs(float(amplitude)) / math.log(10.0)))


def lift(x):
    if _DPS.get() is None:
        return float(x)
    return mpmath.mpf(x)


def pi():
    return math.pi if _DPS.get() is None else +mpmath.pi


def two_pi():
    return TWO_PI if _DPS.get() is None else 2 * mpmath.pi


def sin(x):
    return math.sin(x) if _DPS.get() is None else mpmath.sin(x)


def cos(x):
    return math.cos(x) if _DPS.get() is None else mpmath.cos(x)


def tan(x):
    return math.tan(x) if _DPS.get() is None else mpmath.tan(x)


def atan2(y, x):
    return math.atan2(y, x) if _DPS.get() is None else mpmath.atan2(y, x)


def exp(x):
    return math.exp(x) if _DPS.get() is None else mpmath.exp(x)


def log(x):
    return math.log(x) if _DPS.get() is None else mpmath.log(x)


def sqrt(x):
    return math.sqrt(x) if _DPS.get() is None else mpmath.sqrt(x)


def mod_two_pi(x):
    """Reduce an angle to [0, 2pi)."""
    tp = two_pi()
    r = x % tp
    if r >= tp or r < 0:
        r = lift(0)
    return r
