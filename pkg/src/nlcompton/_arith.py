"""Pick float or extended-precision elementary functions by argument type.

Physics routines call ``fn(x)`` to get either :mod:`math` or :mod:`mpmath`
so that the same formulas run in double precision or, when handed
``mpmath.mpf`` values, at the current ``mpmath.mp.dps``.
"""

import math

import mpmath

_MP_TYPES = (mpmath.mpf, mpmath.mpc)


def is_mp(*values):
    return any(isinstance(v, _MP_TYPES) for v in values)


def fn(*values):
    return mpmath if is_mp(*values) else math


def sin_cos(theta):
    """Return (sin, cos), exact at 0 and at the double nearest pi.

    The double ``math.pi`` stands for pi itself in every precision.
    """
    if theta == 0:
        return 0 * theta, 1 + 0 * theta
    if theta == math.pi:
        return 0 * theta, -1 + 0 * theta
    f = fn(theta)
    return f.sin(theta), f.cos(theta)


def one_minus_cos(theta):
    s = fn(theta).sin(theta / 2)
    return 2 * s * s


def one_plus_cos(theta):
    if theta == math.pi:
        return 0 * theta
    c = fn(theta).cos(theta / 2)
    return 2 * c * c
