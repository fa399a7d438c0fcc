"""Scattered-state kinematics for electron collisions with a circular laser.

Natural units throughout (hbar = c = m = 1).  The laser propagates along +z
with dimensionless amplitude ``a0 = eA/m`` and photon energy ``k``; a
head-on electron has ``p_z < 0``.  The light-cone momentum ``E - p_z`` is
conserved apart from the recoil ``k'(1 - cos theta)`` of the emitted photon,
which gives the closed forms used here.

Near theta = pi with E >> 1 the combination ``E - p_z cos(theta)`` cancels
catastrophically.  It is always assembled from non-negative pieces::

    p_z < 0:   E - p_z cos(theta) = (E + p_z) + |p_z| (1 + cos theta)
    p_z >= 0:  E - p_z cos(theta) = (E - p_z) + p_z (1 - cos theta)

with ``E + p_z = 1/(E - p_z)`` from the mass shell and ``1 +- cos`` from
half-angle identities.

Every function also accepts ``mpmath.mpf`` inputs and then computes at the
current mpmath working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _arith
from .constants import FLUX_CONSTANT_W_M2
from .errors import DomainError, ValidationError

#: Allowed relative mass-shell defect of an incident electron, |E^2 - p_z^2 - 1| / E^2.
MASS_SHELL_TOL = 1e-9


def _finite(name, value):
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class LaserParams:
    """Circularly polarized plane-wave laser.

    Parameters
    ----------
    a0 : float
        Dimensionless amplitude eA/m, ``a0 >= 0``.
    k : float
        Photon energy in units of the electron mass, ``k > 0``.
    """

    a0: float
    k: float

    def __post_init__(self):
        _finite("a0", self.a0)
        _finite("k", self.k)
        if self.a0 < 0:
            raise ValidationError(f"a0 must be >= 0, got {self.a0!r}")
        if self.k <= 0:
            raise ValidationError(f"k must be > 0, got {self.k!r}")


@dataclass(frozen=True)
class ElectronIn:
    """Incident electron with zero transverse momentum.

    ``p_z`` defaults to the head-on value ``-sqrt(E^2 - 1)``.  An explicit
    ``p_z`` must lie on the mass shell to relative accuracy ``MASS_SHELL_TOL``.
    """

    E: float
    p_z: float = None
    sigma: int = 1

    def __post_init__(self):
        _finite("E", self.E)
        if self.E < 1:
            raise ValidationError(f"E must be >= 1, got {self.E!r}")
        if self.sigma not in (1, -1):
            raise ValidationError(f"sigma must be +1 or -1, got {self.sigma!r}")
        if self.p_z is None:
            f = _arith.fn(self.E)
            object.__setattr__(self, "p_z", -f.sqrt((self.E - 1) * (self.E + 1)))
        _finite("p_z", self.p_z)
        defect = (self.E - self.p_z) * (self.E + self.p_z) - 1
        if abs(defect) > MASS_SHELL_TOL * self.E * self.E:
            raise ValidationError(
                f"incident electron must satisfy E^2 - p_z^2 = 1 (p_perp = 0); "
                f"E={self.E!r}, p_z={self.p_z!r}")
        if self.E - self.p_z <= 0:
            raise DomainError("E - p_z must be positive")

    @property
    def light_cone(self):
        """E - p_z."""
        return self.E - self.p_z

    @property
    def plus(self):
        """E + p_z, taken from the mass shell when that avoids cancellation."""
        if self.p_z < 0:
            return 1 / (self.E - self.p_z)
        return self.E + self.p_z


@dataclass(frozen=True)
class Channel:
    """Emission channel: harmonic N, polar angle theta, prior occupation N_occ."""

    harmonic: int
    theta: float
    n_occ: int = 0
    phi_kprime: float = 0.0

    def __post_init__(self):
        if int(self.harmonic) != self.harmonic or self.harmonic < 1:
            raise ValidationError(f"harmonic must be an integer >= 1, got {self.harmonic!r}")
        _finite("theta", self.theta)
        if not (0 <= self.theta <= math.pi):
            raise ValidationError(f"theta must lie in [0, pi], got {self.theta!r}")
        if int(self.n_occ) != self.n_occ or self.n_occ < 0:
            raise ValidationError(f"n_occ must be an integer >= 0, got {self.n_occ!r}")
        _finite("phi_kprime", self.phi_kprime)


@dataclass(frozen=True)
class ScatterKinematics:
    """Closed scattered state for one channel.

    ``lightcone_in`` and ``lightcone_out`` hold E - p_z and E' - p'_z as
    computed (without cancellation); ``a0`` and ``k`` record the laser; the
    remaining fields follow the module conventions.
    """

    a0: float
    k: float
    harmonic: int
    theta: float
    kprime: float
    Eprime: float
    pprime_z: float
    pprime_perp: float
    R: float
    Rprime: float
    pondero: float
    S: float
    lightcone_in: float
    lightcone_out: float

    @property
    def bessel_argument(self):
        """p'_perp R', the common Bessel argument of the channel."""
        return self.pprime_perp * self.Rprime


def _require_light_cone(E, p_z):
    d = E - p_z
    if not d > 0:
        raise DomainError(f"E - p_z must be positive (got {d!r}); co-propagating limit")
    return d


def r_parameter(laser, E, p_z):
    """Return R = a0 / (k (E - p_z))."""
    return laser.a0 / (laser.k * _require_light_cone(E, p_z))


def ponderomotive_shift(laser, E, p_z):
    """Return a0^2 / (2 (E - p_z)), equal to (a0/2) R k."""
    return laser.a0 * laser.a0 / (2 * _require_light_cone(E, p_z))


def _e_minus_pz_cos(electron, theta):
    """E - p_z cos(theta) without cancellation."""
    if electron.p_z < 0:
        return electron.plus + (-electron.p_z) * _arith.one_plus_cos(theta)
    return electron.light_cone + electron.p_z * _arith.one_minus_cos(theta)


def _check_theta(theta):
    if not (0 <= theta <= math.pi):
        raise ValidationError(f"theta must lie in [0, pi], got {theta!r}")


def emitted_photon_energy(laser, electron, harmonic, theta):
    """Photon energy k' of harmonic N emitted at polar angle theta.

    Returns ``N k (E - p_z) / [E + N k + c - (p_z + N k + c) cos(theta)]``
    where ``c`` is the ponderomotive shift.
    """
    if int(harmonic) != harmonic or harmonic < 1:
        raise ValidationError("harmonic must be an integer >= 1")
    _check_theta(theta)
    d = electron.light_cone
    c = ponderomotive_shift(laser, electron.E, electron.p_z)
    nk = harmonic * laser.k
    den = _e_minus_pz_cos(electron, theta) + (nk + c) * _arith.one_minus_cos(theta)
    if not den > 0:
        raise DomainError("non-positive photon-energy denominator")
    return nk * d / den


def bessel_argument_s(laser, electron, theta):
    """Return S = a0 sin(theta) / [E + c (1 - cos theta) - p_z cos theta].

    The Bessel argument of harmonic N is ``S * N``.
    """
    _check_theta(theta)
    c = ponderomotive_shift(laser, electron.E, electron.p_z)
    den = _e_minus_pz_cos(electron, theta) + c * _arith.one_minus_cos(theta)
    if not den > 0:
        raise DomainError("non-positive denominator in S")
    return laser.a0 * _arith.sin_cos(theta)[0] / den


def scattered_state(laser, electron, channel):
    """Close the scattered state of one channel.

    Parameters
    ----------
    laser : LaserParams
    electron : ElectronIn
    channel : Channel

    Returns
    -------
    ScatterKinematics

    Notes
    -----
    ``E' - p'_z = (E - p_z) - k'(1 - cos theta)`` is evaluated as
    ``(E - p_z) * den0 / denN`` (same value, no subtraction), where
    ``den0`` and ``denN`` are the S and k' denominators.  ``E'`` and ``p'_z``
    then follow from the mass shell with ``p'_perp = k' sin(theta)``.
    """
    theta = channel.theta
    n = channel.harmonic
    d = electron.light_cone
    c = ponderomotive_shift(laser, electron.E, electron.p_z)
    base = _e_minus_pz_cos(electron, theta)
    u = _arith.one_minus_cos(theta)
    den0 = base + c * u
    den_n = den0 + n * laser.k * u
    if not (den0 > 0 and den_n > 0):
        raise DomainError("non-positive kinematic denominator")
    kprime = n * laser.k * d / den_n
    d_out = d * (den0 / den_n)
    if not d_out > 0:
        raise DomainError("kinematically closed channel: E' - p'_z <= 0")
    sin_t = _arith.sin_cos(theta)[0]
    pperp = kprime * sin_t
    transverse = (1 + pperp * pperp) / d_out
    e_out = (d_out + transverse) / 2
    pz_out = (transverse - d_out) / 2
    return ScatterKinematics(
        a0=laser.a0,
        k=laser.k,
        harmonic=n,
        theta=theta,
        kprime=kprime,
        Eprime=e_out,
        pprime_z=pz_out,
        pprime_perp=pperp,
        R=laser.a0 / (laser.k * d),
        Rprime=laser.a0 / (laser.k * d_out),
        pondero=c,
        S=laser.a0 * sin_t / den0,
        lightcone_in=d,
        lightcone_out=d_out,
    )


def kinematic_residuals(laser, electron, kin):
    """Residuals of the conservation rules for a closed state.

    Returns a dict with the mass-shell, transverse, light-cone and energy
    residuals, each already divided by its documented scale.
    """
    theta = kin.theta
    sin_t, _ = _arith.sin_cos(theta)
    mass = (kin.Eprime - kin.pprime_z) * (kin.Eprime + kin.pprime_z) - kin.pprime_perp**2 - 1
    light = (kin.Eprime - kin.pprime_z) - (
        electron.light_cone - kin.kprime * _arith.one_minus_cos(theta))
    c_out = laser.a0 * kin.Rprime * laser.k / 2
    energy = kin.Eprime + kin.kprime - electron.E - kin.harmonic * laser.k + (c_out - kin.pondero)
    return {
        "mass_shell": abs(mass) / kin.Eprime**2,
        "transverse": abs(kin.pprime_perp - kin.kprime * sin_t) / max(1, kin.kprime),
        "light_cone": abs(light) / electron.light_cone,
        "energy": abs(energy) / electron.E,
    }


def laser_flux_si(laser):
    """Laser intensity in W/m^2: ``(a0 k)^2 / (4 pi alpha)`` natural units.

    See :mod:`nlcompton.constants` for the derivation of the conversion.
    """
    return FLUX_CONSTANT_W_M2 * (laser.a0 * laser.k) ** 2


def compton_limit_energy(k, E, p_z, theta):
    """Linear Compton photon energy via a boost to the electron rest frame.

    Kept separate from :func:`emitted_photon_energy` so that each can check
    the other.  With ``gamma = E`` and ``beta = p_z/E`` the incoming photon
    has rest-frame energy ``k_r = k (E - p_z)``; the rest-frame angle obeys
    ``1 - cos(theta_r) = (1 + beta)(1 - cos theta) / (1 - beta cos theta)``;
    the Compton shift gives ``k'_r = k_r / (1 + k_r (1 - cos theta_r))`` and
    the return boost gives ``k' = k'_r / (gamma (1 - beta cos theta))``.
    """
    if not (k > 0 and E >= 1):
        raise ValidationError("need k > 0 and E >= 1")
    _check_theta(theta)
    f = _arith.fn(k, E, p_z, theta)
    beta = p_z / E
    half_s = f.sin(theta / 2)
    half_c = f.cos(theta / 2) if theta != math.pi else 0 * theta
    s2, c2 = 2 * half_s * half_s, 2 * half_c * half_c
    if beta < 0:
        # 1 - beta cos = (1 - |beta|) + |beta| (1 + cos); 1 - |beta| from the mass shell
        one_minus_abs_beta = 1 / (E * (E - p_z))
        doppler_out = one_minus_abs_beta + (-beta) * c2
        one_plus_beta = one_minus_abs_beta
    else:
        one_minus_beta = (E - p_z) / E
        doppler_out = one_minus_beta + beta * s2
        one_plus_beta = 1 + beta
    if not doppler_out > 0:
        raise DomainError("non-positive Doppler factor")
    k_rest = k * (E - p_z)
    one_minus_cos_rest = one_plus_beta * s2 / doppler_out
    k_rest_out = k_rest / (1 + k_rest * one_minus_cos_rest)
    return k_rest_out / (E * doppler_out)
