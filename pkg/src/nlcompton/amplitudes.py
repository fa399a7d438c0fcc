"""Emission amplitudes: polarization bases, F/G coefficients and channel vectors.

The coefficient index ``nu`` is the Bessel-order shift: a coefficient stored
under ``nu`` multiplies ``J_{N - nu}(p'_perp R')``.  With spin ``sigma`` the
three slots are ``nu = 0`` (order N), ``nu = sigma`` (order N - sigma) and
``nu = -sigma`` (order N + sigma).

Coefficients with ``i = 1`` are real and those with ``i = 2`` purely
imaginary.  Vectors are numpy arrays of Cartesian components; under
extended precision they are object arrays of ``mpmath`` numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from . import _arith
from .bessel import bessel_j
from .errors import DomainError, ValidationError

#: Circular laser polarization e = (x - i y)/sqrt(2).
LASER_POLARIZATION = np.array([1.0, -1.0j, 0.0]) / math.sqrt(2.0)


def _cx(value):
    return mpmath.mpc(value) if _arith.is_mp(value) else complex(value)


def _vec(components, mp):
    return np.array(components, dtype=object if mp else complex)


def polarization_basis(theta, phi_kprime=0.0):
    """Real orthonormal polarization vectors transverse to k'.

    ``e1 = cos(theta)(cos phi, sin phi, 0) - sin(theta) z`` and
    ``e2 = (-sin phi, cos phi, 0)``.
    """
    if not (0 <= theta <= math.pi):
        raise ValidationError(f"theta must lie in [0, pi], got {theta!r}")
    st, ct = _arith.sin_cos(theta)
    sp, cp = _arith.sin_cos(phi_kprime) if phi_kprime != 0 else (0 * theta, 1 + 0 * theta)
    mp = _arith.is_mp(theta, phi_kprime)
    e1 = np.array([ct * cp, ct * sp, -st], dtype=object if mp else float)
    e2 = np.array([-sp, cp, 0 * st], dtype=object if mp else float)
    return e1, e2


def photon_direction(theta, phi_kprime=0.0):
    st, ct = _arith.sin_cos(theta)
    sp, cp = _arith.sin_cos(phi_kprime)
    return np.array([st * cp, st * sp, ct])


@dataclass(frozen=True)
class AmplitudeSet:
    """The twelve coefficients ``F[i][nu]`` and ``G[i][nu]``.

    ``F`` and ``G`` map ``i in (1, 2)`` to dicts keyed by ``nu in (0, sigma,
    -sigma)``.
    """

    F: dict
    G: dict
    sigma: int
    kin: object

    def orders(self, harmonic=None):
        """Bessel order paired with each slot, keyed by nu."""
        n = self.kin.harmonic if harmonic is None else harmonic
        return {nu: n - nu for nu in (0, self.sigma, -self.sigma)}


def fg_coefficients(kin, electron, theta=None):
    """Transcribe the F/G coefficient blocks for spin ``electron.sigma``.

    Parameters
    ----------
    kin : ScatterKinematics
        Closed scattered state; supplies E', p'_z, p'_perp, R, R'.
    electron : ElectronIn
        Incident electron (E, p_z, sigma).
    theta : float, optional
        Emission angle; defaults to ``kin.theta``.

    Returns
    -------
    AmplitudeSet

    Notes
    -----
    With m = 1, ``A = p_z - E - 1`` and ``B = p'_z - E' - 1``.  The bracket
    in the ``(sigma)`` slot of F_1 closes after ``p_z``, so the whole
    ``sin(theta)`` term multiplies ``p'_perp [(R + R')(E + 1) - (R - R') p_z]``.

    Combinations that cancel for ultrarelativistic electrons are evaluated
    through exact light-cone identities (D = E - p_z, P = E + p_z and the
    primed analogues)::

        p_z(E'+1) - p'_z(E+1) = [P(D'+1) - P'(D+1) + (D' - D)] / 2
        R - R' = -R k'(1 - cos theta) / D'
    """
    theta = kin.theta if theta is None else theta
    s = electron.sigma
    E, pz = electron.E, electron.p_z
    Ep, pzp, pp = kin.Eprime, kin.pprime_z, kin.pprime_perp
    R, Rp = kin.R, kin.Rprime
    k = kin.k
    sn, c = _arith.sin_cos(theta)
    m = 1
    D, P = electron.light_cone, electron.plus
    Dp = kin.lightcone_out
    Pp = (1 + pp * pp) / Dp
    recoil = kin.kprime * _arith.one_minus_cos(theta)
    A = -(D + m)
    B = -(Dp + m)
    cross = (P * (Dp + m) - Pp * (D + m) - recoil) / 2
    r_diff = -R * recoil / Dp
    half_k = k / 2
    f1 = {
        0: -c * pp * (E + m) - sn * ((Ep + m) * pz + (E + m) * pzp + half_k * k * R * Rp * A * B),
        s: half_k * (c * R * A * B + sn * pp * ((R + Rp) * (E + m) - r_diff * pz)),
        -s: half_k * c * Rp * A * B,
    }
    g1 = {
        0: s * (c * cross + sn * pp * (half_k * k * R * Rp * A + E + m)),
        s: -s * half_k * (c * R * pp * A + sn * (R * A * (Pp + m) - Rp * (P + m) * B)),
        -s: -s * half_k * c * Rp * pp * A,
    }
    f2 = {
        0: -1j * s * pp * (E + m),
        s: -1j * s * half_k * R * A * B,
        -s: 1j * s * half_k * Rp * A * B,
    }
    g2 = {
        0: 1j * cross,
        s: 1j * half_k * R * pp * A,
        -s: -1j * half_k * Rp * pp * A,
    }
    F = {1: {nu: _cx(v) for nu, v in f1.items()}, 2: {nu: _cx(v) for nu, v in f2.items()}}
    G = {1: {nu: _cx(v) for nu, v in g1.items()}, 2: {nu: _cx(v) for nu, v in g2.items()}}
    return AmplitudeSet(F=F, G=G, sigma=s, kin=kin)


@dataclass(frozen=True)
class ChannelVectors:
    """Bessel-weighted amplitude vectors of one harmonic and spin.

    ``f_comp`` and ``g_comp`` hold the components along (e1, e2); the
    Cartesian vectors are ``script_F`` and ``script_G``.
    """

    script_F: np.ndarray
    script_G: np.ndarray
    f_comp: tuple
    g_comp: tuple
    harmonic: int
    sigma: int
    kin: object
    phi_kprime: float = 0.0


def channel_vectors(kin, amps, harmonic=None, phi_kprime=0.0):
    """Assemble ``script_F = sum_i sum_nu F_i^nu J_{N-nu}(p'_perp R') e'_i``.

    ``script_G`` is built the same way from the G coefficients.
    """
    n = kin.harmonic if harmonic is None else harmonic
    if int(n) != n or n < 1:
        raise ValidationError("harmonic must be an integer >= 1")
    x = kin.bessel_argument
    bess = {nu: bessel_j(order, x) for nu, order in amps.orders(n).items()}
    f_comp = tuple(sum(amps.F[i][nu] * bess[nu] for nu in bess) for i in (1, 2))
    g_comp = tuple(sum(amps.G[i][nu] * bess[nu] for nu in bess) for i in (1, 2))
    e1, e2 = polarization_basis(kin.theta, phi_kprime)
    mp = _arith.is_mp(x)
    script_f = _vec([f_comp[0] * a + f_comp[1] * b for a, b in zip(e1, e2)], mp)
    script_g = _vec([g_comp[0] * a + g_comp[1] * b for a, b in zip(e1, e2)], mp)
    return ChannelVectors(script_f, script_g, f_comp, g_comp, n, amps.sigma, kin, phi_kprime)


def _norm(v):
    return math.sqrt(float(np.sum(np.abs(v) ** 2)))


def script_h(vecs, a1, a2, sigma=None, phi_kprime=None):
    """Superposition vector ``H = conj(a1) F + conj(a2) G e^{i sigma phi}``.

    Returns
    -------
    H : ndarray
    e_sigma : ndarray or None
        ``H / |H|`` when ``|H| > 0``.
    """
    if abs(abs(a1) ** 2 + abs(a2) ** 2 - 1.0) > 1e-10:
        raise ValidationError("spin superposition (a1, a2) must satisfy |a1|^2 + |a2|^2 = 1")
    sigma = vecs.sigma if sigma is None else sigma
    phi = vecs.phi_kprime if phi_kprime is None else phi_kprime
    phase = complex(math.cos(sigma * phi), math.sin(sigma * phi))
    h = np.conj(a1) * vecs.script_F + np.conj(a2) * vecs.script_G * phase
    size = _norm(h)
    return h, (h / size if size > 0 else None)


def orthogonal_polarization(h, theta, phi_kprime=0.0):
    """Unit transverse vector e with ``conj(e) . h = 0``."""
    e1, e2 = polarization_basis(theta, phi_kprime)
    h1, h2 = np.dot(e1, h), np.dot(e2, h)
    size = math.hypot(abs(h1), abs(h2))
    if size == 0:
        raise DomainError("zero vector has no orthogonal polarization")
    return (np.conj(h2) * e1 - np.conj(h1) * e2) / size


def _same_kinematics(a, b):
    return a.harmonic == b.harmonic and a.kin == b.kin


def z_tensor(vecs_by_sigma):
    """Hermitian tensor ``Z = sum_sigma (F F^dagger + G G^dagger)``.

    Parameters
    ----------
    vecs_by_sigma : sequence of ChannelVectors
        One entry per spin sigma = +1 and -1, at identical kinematics.
    """
    vecs = list(vecs_by_sigma)
    if sorted(v.sigma for v in vecs) != [-1, 1]:
        raise ValidationError("z_tensor needs exactly the sigma = +1 and -1 channels")
    if not _same_kinematics(vecs[0], vecs[1]):
        raise ValidationError("z_tensor inputs must share kinematics")
    z = np.zeros((3, 3), dtype=complex)
    for v in vecs:
        f = v.script_F.astype(complex)
        g = v.script_G.astype(complex)
        z += np.outer(f, f.conj()) + np.outer(g, g.conj())
    return z


def transverse_block(z, theta, phi_kprime=0.0):
    """2x2 block of a tensor in the (e1, e2) basis."""
    e1, e2 = polarization_basis(theta, phi_kprime)
    basis = np.array([e1, e2], dtype=float)
    return basis @ z @ basis.T
