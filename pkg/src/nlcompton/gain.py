"""Stimulated-emission growth of a gamma-ray photon population along a tube.

The photon number obeys ``dN/dl = (N + 1) a / lambda_c`` with ``N(0) = 0``,
so for constant gain ``N(l) = exp(a l / lambda_c) - 1``.  Exponents of
realistic scenarios run far past the double range; results therefore carry
``log10(N + 1)`` alongside ``N`` and drop ``N`` itself once the exponent
exceeds :data:`LOG_SPACE_THRESHOLD`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import COMPTON_WAVELENGTH_M
from .errors import ValidationError

#: Exponents above this are reported in log space only.
LOG_SPACE_THRESHOLD = 700.0
MIN_STEPS = 10


def _positive(name, value, allow_zero=False):
    if not math.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        raise ValidationError(f"{name} must be {'>= 0' if allow_zero else '> 0'} and finite, "
                              f"got {value!r}")


@dataclass(frozen=True)
class TubeScenario:
    """A burst of ``n_electrons`` crossing the laser over ``length_m``.

    ``xsec_per_volume`` is the averaged differential cross section per
    laser volume (Compton wavelength squared per steradian per
    ``lambda_c^3``), evaluated at ``n_occ``.  Only a constant gain along
    the tube is modeled (``constant_gain``).
    """

    length_m: float
    n_electrons: float
    xsec_per_volume: float
    lambda_c_m: float = COMPTON_WAVELENGTH_M
    n_occ: int = 0
    constant_gain: bool = True

    def __post_init__(self):
        for name in ("length_m", "n_electrons", "xsec_per_volume", "lambda_c_m"):
            _positive(name, getattr(self, name))
        if int(self.n_occ) != self.n_occ or self.n_occ < 0:
            raise ValidationError("n_occ must be a nonnegative integer")
        if not self.constant_gain:
            raise ValidationError("only constant gain along the tube is modeled")

    @property
    def gain(self):
        return gain_parameter(self.n_electrons, self.xsec_per_volume, self.n_occ)

    def photon_number(self):
        return photon_number_closed(self.gain, self.length_m, self.lambda_c_m)


def gain_parameter(n_electrons, xsec, n_occ=0):
    """Occupation-independent gain ``a = n xsec / (N_occ + 1)``.

    ``xsec`` carries the stimulated factor ``N_occ + 1`` it was evaluated
    with; dividing it out leaves a constant.
    """
    _positive("n_electrons", n_electrons)
    _positive("xsec", xsec)
    if int(n_occ) != n_occ or n_occ < 0:
        raise ValidationError("n_occ must be a nonnegative integer")
    return n_electrons * xsec / (n_occ + 1)


@dataclass(frozen=True)
class PhotonCount:
    """Photon number after a run.

    ``n`` is None when ``log_space`` is set, in which case only
    ``log10_n_plus_1`` (always present) is meaningful.
    """

    exponent: float
    n: float | None
    log10_n_plus_1: float
    log_space: bool


def _count(exponent):
    if exponent > LOG_SPACE_THRESHOLD:
        return PhotonCount(exponent, None, exponent / math.log(10.0), True)
    return PhotonCount(exponent, math.expm1(exponent), exponent / math.log(10.0), False)


def photon_number_closed(a, l_m, lambda_c_m=COMPTON_WAVELENGTH_M):
    """``N(l) = exp(a l / lambda_c) - 1``, in log space for large exponents."""
    _positive("a", a, allow_zero=True)
    _positive("l_m", l_m, allow_zero=True)
    _positive("lambda_c_m", lambda_c_m)
    return _count(a * l_m / lambda_c_m)


def _gain_function(a):
    if callable(a):
        return a
    _positive("a", a, allow_zero=True)
    return lambda _l: a


def photon_number_trajectory(a, l_m, lambda_c_m=COMPTON_WAVELENGTH_M, step_count=1000):
    """Classical RK4 for ``y = log(N + 1)``, ``dy/dl = a(l) / lambda_c``.

    Parameters
    ----------
    a : float or callable
        Constant gain or a profile ``a(l)`` with ``l`` in meters.
    l_m : float
        Tube length in meters.
    lambda_c_m : float
        Compton wavelength in meters.
    step_count : int
        Number of equal steps, at least :data:`MIN_STEPS`.

    Returns
    -------
    list of (float, PhotonCount)
        The state at ``l = 0`` and after every step.
    """
    _positive("l_m", l_m, allow_zero=True)
    _positive("lambda_c_m", lambda_c_m)
    if int(step_count) != step_count or step_count < MIN_STEPS:
        raise ValidationError(f"step_count must be an integer >= {MIN_STEPS}")
    rate = _gain_function(a)
    h = l_m / step_count
    y = 0.0
    out = [(0.0, _count(0.0))]
    for i in range(step_count):
        l0 = i * h
        k1 = rate(l0)
        k2 = rate(l0 + h / 2)
        k4 = rate(l0 + h)
        # k3 equals k2: the right-hand side does not depend on y
        y += h * (k1 + 4 * k2 + k4) / (6 * lambda_c_m)
        out.append(((i + 1) * h, _count(y)))
    return out


def photon_number_ode(a, l_m, lambda_c_m=COMPTON_WAVELENGTH_M, step_count=1000):
    """Final state of :func:`photon_number_trajectory`."""
    return photon_number_trajectory(a, l_m, lambda_c_m, step_count)[-1][1]
