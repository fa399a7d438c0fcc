"""Differential cross sections per unit solid angle and per laser volume.

Values are in natural units (Compton wavelength squared per steradian for
a laser volume of one Compton wavelength cubed).  One record is produced per
harmonic; :func:`sum_harmonics` adds harmonics for integrated quantities.

For fixed spins the cross section is ::

    P * |sum_nu J_{N-nu}(p'_perp R') [d(s,s') F_i^nu + d(s,-s') G_i^nu]|^2

    P = alpha k'^2 (N_occ + 1) / [8 pi N k |p_z| (E - p_z)(E + 1)(E' + 1)]

The Klein-Nishina comparison is provided twice: :func:`klein_nishina_baseline`
uses the lab-frame overlap ``|e.e'_1|^2 = cos^2(theta)/2``, and
:func:`klein_nishina_covariant` uses the gauge-covariant rest-frame overlap
``|e.e'_1|^2 = ((E cos theta - p_z)/(E - p_z cos theta))^2 / 2`` (the two
agree only for an electron at rest).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import _arith
from .amplitudes import channel_vectors, fg_coefficients, polarization_basis, script_h
from .constants import ALPHA
from .errors import DomainError, ValidationError
from .kinematics import Channel, ElectronIn, LaserParams, _e_minus_pz_cos, scattered_state

#: Working precision (decimal digits) of the extended Y(X) computation.
Y_CURVE_DPS = 40


@dataclass(frozen=True)
class XSecContext:
    """Everything a single cross-section evaluation depends on."""

    laser: LaserParams
    electron: ElectronIn
    channel: Channel
    alpha: float = ALPHA


@dataclass(frozen=True)
class XSecRecord:
    """One cross-section evaluation with its channel labels.

    ``sigma_out`` is None for spin-summed or averaged values; ``pol`` is 1 or
    2 for a basis polarization, ``"e'"`` for an arbitrary vector and
    ``"unpolarized"`` for the sum over polarizations.
    """

    value: float
    harmonic: int
    theta: float
    sigma: object
    sigma_out: object
    pol: object
    n_occ: int
    kinematics: object = field(repr=False)
    laser: LaserParams = field(repr=False)
    electron: ElectronIn = field(repr=False)


def _with_spin(ctx, sigma):
    return dataclasses.replace(ctx, electron=dataclasses.replace(ctx.electron, sigma=sigma))


def _check_pol(pol_index):
    if pol_index not in (1, 2):
        raise ValidationError(f"pol_index must be 1 or 2, got {pol_index!r}")


def _check_spin(s, name):
    if s not in (1, -1):
        raise ValidationError(f"{name} must be +1 or -1, got {s!r}")


def prefactor(ctx, kin):
    """Flux and phase-space prefactor P of the fixed-spin cross section."""
    e = ctx.electron
    if e.p_z == 0:
        raise DomainError("p_z = 0: the incident flux normalization needs a moving electron")
    f = _arith.fn(kin.kprime)
    n = ctx.channel.harmonic
    return (ctx.alpha * kin.kprime**2 * (ctx.channel.n_occ + 1)
            / (8 * f.pi * n * ctx.laser.k * abs(e.p_z) * e.light_cone
               * (e.E + 1) * (kin.Eprime + 1)))


def _vectors(ctx, sigma=None):
    c = ctx if sigma is None else _with_spin(ctx, sigma)
    kin = scattered_state(c.laser, c.electron, c.channel)
    amps = fg_coefficients(kin, c.electron)
    return kin, channel_vectors(kin, amps, phi_kprime=c.channel.phi_kprime)


def _record(ctx, kin, value, sigma, sigma_out, pol):
    return XSecRecord(value, ctx.channel.harmonic, ctx.channel.theta, sigma, sigma_out, pol,
                      ctx.channel.n_occ, kin, ctx.laser, ctx.electron)


def _abs2(z):
    return z.real * z.real + z.imag * z.imag


def dsigma_fixed_spins(ctx, sigma_out, pol_index):
    """Cross section for incident spin ``ctx.electron.sigma``, outgoing spin
    ``sigma_out`` and photon polarization ``e'_{pol_index}``."""
    _check_pol(pol_index)
    _check_spin(sigma_out, "sigma_out")
    kin, vecs = _vectors(ctx)
    comp = vecs.f_comp if sigma_out == ctx.electron.sigma else vecs.g_comp
    value = prefactor(ctx, kin) * _abs2(comp[pol_index - 1])
    return _record(ctx, kin, value, ctx.electron.sigma, sigma_out, pol_index)


def dsigma_spin_averaged(ctx, pol_index):
    """Spin-averaged cross section ``(1/2) sum_sigma sum_sigma'``."""
    _check_pol(pol_index)
    total = 0
    kin = None
    for s in (1, -1):
        c = _with_spin(ctx, s)
        for s_out in (1, -1):
            rec = dsigma_fixed_spins(c, s_out, pol_index)
            total += rec.value
            kin = rec.kinematics
    return _record(ctx, kin, total / 2, "avg", "sum", pol_index)


def _transverse_unit(e_prime, theta, phi):
    e = np.asarray(e_prime, dtype=complex)
    norm = math.sqrt(float(np.sum(np.abs(e) ** 2)))
    if abs(norm - 1.0) > 1e-10:
        raise ValidationError("polarization vector must be unit norm")
    st, ct = math.sin(theta), math.cos(theta)
    khat = np.array([st * math.cos(phi), st * math.sin(phi), ct])
    if abs(np.dot(khat, e)) > 1e-10:
        raise ValidationError("polarization vector must be transverse to k'")
    return e


def dsigma_polarization(ctx, e_prime, spins=None, superposition=None):
    """Cross section for an arbitrary transverse polarization vector.

    Give either ``spins=(sigma, sigma_out)`` or ``superposition=(a1, a2)``
    (an incident spin state ``a1 |+> + a2 |->``, using the spin
    ``ctx.electron.sigma`` channel vectors for H).
    """
    if (spins is None) == (superposition is None):
        raise ValidationError("give exactly one of spins or superposition")
    ch = ctx.channel
    e = _transverse_unit(e_prime, float(ch.theta), float(ch.phi_kprime))
    if spins is not None:
        sigma, sigma_out = spins
        _check_spin(sigma, "sigma")
        _check_spin(sigma_out, "sigma_out")
        kin, vecs = _vectors(ctx, sigma)
        vec = vecs.script_F if sigma_out == sigma else vecs.script_G
        amp = np.vdot(e, vec)
        return _record(ctx, kin, prefactor(ctx, kin) * _abs2(amp), sigma, sigma_out, "e'")
    a1, a2 = superposition
    kin, vecs = _vectors(ctx)
    h, _ = script_h(vecs, a1, a2)
    value = prefactor(ctx, kin) * _abs2(np.vdot(e, h))
    return _record(ctx, kin, value, "superposition", None, "e'")


def dsigma_unpolarized(ctx, averaged=True):
    """Cross section summed over photon polarization and outgoing spin.

    ``averaged=True`` also averages over the incident spin; otherwise the
    incident spin is ``ctx.electron.sigma``.
    """
    spins = (1, -1) if averaged else (ctx.electron.sigma,)
    total = 0
    kin = None
    for s in spins:
        kin, vecs = _vectors(ctx, s)
        total += sum(_abs2(c) for c in vecs.f_comp + vecs.g_comp)
    value = prefactor(ctx, kin) * total / len(spins)
    return _record(ctx, kin, value, "avg" if averaged else ctx.electron.sigma, "sum",
                   "unpolarized")


def outgoing_polarization(ctx, sigma, sigma_out):
    """Unit polarization vector of the emitted photon for fixed spins.

    ``F/|F|`` when the spin is kept and ``G/|G|`` when it flips.
    """
    _check_spin(sigma, "sigma")
    _check_spin(sigma_out, "sigma_out")
    _, vecs = _vectors(ctx, sigma)
    vec = vecs.script_F if sigma_out == sigma else vecs.script_G
    size = math.sqrt(float(np.sum(np.abs(vec.astype(complex)) ** 2)))
    if size == 0:
        raise DomainError("degenerate channel: amplitude vector vanishes")
    return vec.astype(complex) / size


def _kn_common(ctx):
    if ctx.channel.harmonic != 1:
        raise ValidationError("the Klein-Nishina comparison is defined for harmonic 1")
    e = ctx.electron
    if e.p_z == 0:
        raise DomainError("p_z = 0: the incident flux normalization needs a moving electron")
    kin = scattered_state(ctx.laser, e, ctx.channel)
    theta = ctx.channel.theta
    base = _e_minus_pz_cos(e, theta)
    d = e.light_cone
    k, kp = ctx.laser.k, kin.kprime
    f = _arith.fn(kp)
    pre = ctx.alpha * (ctx.laser.a0 * kp) ** 2 / (16 * f.pi * k * abs(e.p_z) * d)
    ratio = d * k / (base * kp)
    return kin, pre, ratio, base


def _kn_value(pre, ratio, overlap):
    return pre * (ratio + 1 / ratio - 2 + 4 * overlap)


def klein_nishina_baseline(ctx, pol_index):
    """Klein-Nishina baseline per laser volume with the lab-frame overlap.

    ``alpha (a0 k')^2 / [16 pi k |p_z| (E - p_z)] * [X + 1/X - 2 + 4 |e.e'_i|^2]``
    with ``X = (E - p_z) k / ((E - p_z cos theta) k')``,
    ``|e.e'_1|^2 = cos^2(theta)/2`` and ``|e.e'_2|^2 = 1/2``.
    """
    _check_pol(pol_index)
    kin, pre, ratio, _ = _kn_common(ctx)
    if pol_index == 1:
        overlap = _arith.sin_cos(ctx.channel.theta)[1] ** 2 / 2
    else:
        overlap = 1 / (2 + 0 * pre)
    return _record(ctx, kin, _kn_value(pre, ratio, overlap), "avg", "sum", pol_index)


def klein_nishina_covariant(ctx, pol_index):
    """Klein-Nishina baseline with the rest-frame polarization overlap.

    Identical to :func:`klein_nishina_baseline` except that for ``i = 1``
    the overlap is ``((E cos theta - p_z)/(E - p_z cos theta))^2 / 2``,
    the value of ``cos^2`` of the rest-frame emission angle over two.
    """
    _check_pol(pol_index)
    kin, pre, ratio, base = _kn_common(ctx)
    if pol_index == 1:
        e = ctx.electron
        theta = ctx.channel.theta
        # E cos(theta) - p_z = (E - p_z) - E (1 - cos theta), rewritten without cancellation
        if e.p_z < 0:
            num = e.E * _arith.one_plus_cos(theta) - e.plus
        else:
            num = e.light_cone - e.E * _arith.one_minus_cos(theta)
        overlap = (num / base) ** 2 / 2
    else:
        overlap = 1 / (2 + 0 * pre)
    return _record(ctx, kin, _kn_value(pre, ratio, overlap), "avg", "sum", pol_index)


_BASELINES = {"lab": klein_nishina_baseline, "covariant": klein_nishina_covariant}


@dataclass(frozen=True)
class YPoint:
    """One point of a Y(X) curve; ``Y`` is None when the point was skipped."""

    X: float
    Y: object
    w3: float
    kn: float
    note: str = ""


def y_of_x_curve(E, k, theta, pol_index, a0_grid, *, baseline="lab", dps=Y_CURVE_DPS):
    """Relative Klein-Nishina gap ``Y = log10((KN - w3)/KN)`` versus ``X = log10(a0)``.

    ``w3`` is the spin-averaged harmonic-1 cross section.  The gap is of
    order ``a0^2``, far below double precision for small ``a0``, so every
    point is computed at ``dps`` decimal digits.

    Parameters
    ----------
    E, k, theta : float
        Head-on electron energy, laser photon energy, emission angle.
    pol_index : {1, 2}
    a0_grid : sequence of float
        Positive, ascending amplitudes.
    baseline : {"lab", "covariant"}
        Which Klein-Nishina form to compare against.

    Returns
    -------
    list of YPoint
        ``Y`` is None (with a note) where ``KN <= 0`` or ``KN <= w3``.
    """
    _check_pol(pol_index)
    if baseline not in _BASELINES:
        raise ValidationError(f"baseline must be one of {sorted(_BASELINES)}")
    grid = [float(a) for a in a0_grid]
    if not grid or any(a <= 0 for a in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError("a0_grid must be positive and strictly ascending")
    kn_fn = _BASELINES[baseline]
    out = []
    with mpmath.workdps(dps):
        electron = ElectronIn(mpmath.mpf(E))
        theta_mp = mpmath.mpf(theta)
        for a0 in grid:
            ctx = XSecContext(LaserParams(mpmath.mpf(a0), mpmath.mpf(k)), electron,
                              Channel(1, theta_mp), alpha=mpmath.mpf(ALPHA))
            w3 = dsigma_spin_averaged(ctx, pol_index).value
            kn = kn_fn(ctx, pol_index).value
            x = math.log10(a0)
            if kn <= 0:
                out.append(YPoint(x, None, float(w3), float(kn), "KN <= 0"))
            elif kn <= w3:
                out.append(YPoint(x, None, float(w3), float(kn), "KN <= w3"))
            else:
                y = float(mpmath.log10((kn - w3) / kn))
                out.append(YPoint(x, y, float(w3), float(kn)))
    return out


def ratio_to_baseline(ctx, pol_index, *, baseline="lab", dps=Y_CURVE_DPS):
    """``w3 / KN`` evaluated at extended precision, returned as a float."""
    kn_fn = _BASELINES[baseline]
    with mpmath.workdps(dps):
        mp_ctx = XSecContext(
            LaserParams(mpmath.mpf(ctx.laser.a0), mpmath.mpf(ctx.laser.k)),
            ElectronIn(mpmath.mpf(ctx.electron.E), mpmath.mpf(ctx.electron.p_z)),
            Channel(1, mpmath.mpf(ctx.channel.theta)), alpha=mpmath.mpf(ctx.alpha))
        return float(dsigma_spin_averaged(mp_ctx, pol_index).value
                     / kn_fn(mp_ctx, pol_index).value)


def sum_harmonics(ctx, harmonics, quantity="unpolarized", pol_index=1):
    """Add per-harmonic cross sections over ``harmonics``.

    ``quantity`` is ``"unpolarized"`` (spin-averaged, polarization summed)
    or ``"averaged"`` (spin-averaged at ``pol_index``).
    """
    total = 0.0
    for n in harmonics:
        c = dataclasses.replace(ctx, channel=dataclasses.replace(ctx.channel, harmonic=int(n)))
        if quantity == "unpolarized":
            total += dsigma_unpolarized(c).value
        elif quantity == "averaged":
            total += dsigma_spin_averaged(c, pol_index).value
        else:
            raise ValidationError("quantity must be 'unpolarized' or 'averaged'")
    return total


def random_transverse_basis(theta, phi_kprime, angle, phase=0.0):
    """Orthonormal transverse pair rotated by ``angle`` with a relative phase."""
    e1, e2 = polarization_basis(theta, phi_kprime)
    ea = math.cos(angle) * e1 + math.sin(angle) * np.exp(1j * phase) * e2
    eb = -math.sin(angle) * np.exp(-1j * phase) * e1 + math.cos(angle) * e2
    return ea.astype(complex), eb.astype(complex)
