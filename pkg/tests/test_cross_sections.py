import dataclasses
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _oracles
import nlcompton.cross_sections as xs
from nlcompton.amplitudes import photon_direction, polarization_basis
from nlcompton.errors import DomainError, ValidationError
from nlcompton.kinematics import Channel, ElectronIn, LaserParams

# Spin-averaged i = 1 values from tests/_oracles.py at 50 digits.
FROZEN_AVERAGED = [
    ((0.015, 3.09e-6, 7000.0, 1, 3.14), 4.8745313682974459918e-9),
    ((0.015, 3.09e-6, 7000.0, 2, 3.14), 6.9375216616430014918e-14),
    ((0.015, 3.09e-6, 7000.0, 3, 3.14), 9.3722235764592890918e-19),
    ((10.5, 4.43e-9, 7000.0, 1, 3.14), 2.3865207463843060563e-9),
    ((10.5, 4.43e-9, 7000.0, 2, 3.14), 3.0487900161934291029e-9),
    ((10.5, 4.43e-9, 7000.0, 3, 3.14), 3.4897042179319440392e-9),
    ((10.5, 4.43e-9, 7000.0, 523, 3.14), 8.6504599672252843818e-9),
]


def ctx_for(a0, k, E, N, theta, sigma=1, n_occ=0, p_z=None):
    return xs.XSecContext(LaserParams(a0, k), ElectronIn(E, p_z, sigma), Channel(N, theta, n_occ))


MID = dict(a0=0.4, k=2e-5, E=40.0, N=2, theta=2.2)


@pytest.mark.parametrize("point,expected", FROZEN_AVERAGED,
                         ids=[f"a0={p[0]}-N={p[3]}" for p, _ in FROZEN_AVERAGED])
def test_frozen_spin_averaged(point, expected):
    got = xs.dsigma_spin_averaged(ctx_for(*point), 1).value
    assert got == pytest.approx(expected, rel=1e-11)


def test_oracle_second_polarization():
    point = (0.015, 3.09e-6, 7000.0, 2, 3.0)
    with mpmath.workdps(40):
        ref = _oracles.spin_averaged(*point, pol=2)
    got = xs.dsigma_spin_averaged(ctx_for(*point), 2).value
    assert got == pytest.approx(float(ref), rel=1e-11)


def test_record_labels():
    rec = xs.dsigma_fixed_spins(ctx_for(**MID, sigma=-1), 1, 2)
    assert (rec.harmonic, rec.sigma, rec.sigma_out, rec.pol, rec.n_occ) == (2, -1, 1, 2, 0)
    assert rec.kinematics.harmonic == 2


def test_no_laser_zero():
    c = ctx_for(0.0, 3.09e-6, 300.0, 1, 2.5)
    assert xs.dsigma_spin_averaged(c, 1).value == 0
    assert xs.dsigma_unpolarized(c).value == 0
    assert xs.klein_nishina_baseline(c, 1).value == 0


@pytest.mark.parametrize("n_occ", [1, 7, 1000])
def test_occupation_linearity(n_occ):
    base = xs.dsigma_fixed_spins(ctx_for(**MID), 1, 1).value
    more = xs.dsigma_fixed_spins(ctx_for(**MID, n_occ=n_occ), 1, 1).value
    assert more == (n_occ + 1) * base


def test_spin_average_definition():
    c = ctx_for(**MID)
    parts = [xs.dsigma_fixed_spins(dataclasses.replace(c, electron=ElectronIn(40.0, sigma=s)),
                                   so, 2).value
             for s in (1, -1) for so in (1, -1)]
    assert xs.dsigma_spin_averaged(c, 2).value == pytest.approx(sum(parts) / 2, rel=1e-15)


def test_completeness():
    c = ctx_for(**MID)
    unpol = xs.dsigma_unpolarized(c).value
    parts = xs.dsigma_spin_averaged(c, 1).value + xs.dsigma_spin_averaged(c, 2).value
    assert abs(unpol - parts) <= 1e-12 * unpol


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi), st.floats(-math.pi, math.pi))
def test_random_basis_invariance(angle, phase, phi):
    c = ctx_for(**MID)
    c = dataclasses.replace(c, channel=dataclasses.replace(c.channel, phi_kprime=phi))
    unpol = xs.dsigma_unpolarized(c).value
    ea, eb = xs.random_transverse_basis(MID["theta"], phi, angle, phase)
    total = sum(xs.dsigma_polarization(c, e, spins=(s, so)).value
                for e in (ea, eb) for s in (1, -1) for so in (1, -1)) / 2
    assert abs(total - unpol) <= 1e-12 * unpol


@pytest.mark.parametrize("sigma", [1, -1])
@pytest.mark.parametrize("pol", [1, 2])
def test_basis_vector_reduction(sigma, pol):
    c = ctx_for(**MID, sigma=sigma)
    e = polarization_basis(MID["theta"])[pol - 1]
    for so in (1, -1):
        a = xs.dsigma_polarization(c, e, spins=(sigma, so)).value
        b = xs.dsigma_fixed_spins(c, so, pol).value
        assert a == pytest.approx(b, rel=1e-13)


def test_spin_flip_uses_only_g(monkeypatch):
    c = ctx_for(**MID)
    keep = xs.dsigma_fixed_spins(c, 1, 1).value
    flip = xs.dsigma_fixed_spins(c, -1, 1).value
    real = xs.fg_coefficients

    def zero(block):
        return {i: {nu: 0j for nu in block[i]} for i in block}

    monkeypatch.setattr(xs, "fg_coefficients",
                        lambda kin, el: dataclasses.replace(real(kin, el), G=zero(real(kin, el).G)))
    assert xs.dsigma_fixed_spins(c, 1, 1).value == keep
    assert xs.dsigma_fixed_spins(c, -1, 1).value == 0
    monkeypatch.setattr(xs, "fg_coefficients",
                        lambda kin, el: dataclasses.replace(real(kin, el), F=zero(real(kin, el).F)))
    assert xs.dsigma_fixed_spins(c, 1, 1).value == 0
    assert xs.dsigma_fixed_spins(c, -1, 1).value == flip


def test_superposition_pure_states():
    c = ctx_for(**MID)
    e = polarization_basis(MID["theta"])[0]
    a = xs.dsigma_polarization(c, e, superposition=(1.0, 0.0)).value
    assert a == pytest.approx(xs.dsigma_fixed_spins(c, 1, 1).value, rel=1e-13)


@pytest.mark.parametrize("sigma,sigma_out", [(1, 1), (1, -1), (-1, -1), (-1, 1)])
def test_outgoing_polarization_is_maximal(sigma, sigma_out):
    c = ctx_for(**MID)
    e_f = xs.outgoing_polarization(c, sigma, sigma_out)
    assert abs(np.linalg.norm(e_f) - 1) < 1e-14
    best = xs.dsigma_polarization(c, e_f, spins=(sigma, sigma_out)).value
    e1, e2 = polarization_basis(MID["theta"])
    rng = np.random.default_rng(11)
    for _ in range(100):
        a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
        e = (a * e1 + b * e2) / math.hypot(abs(a), abs(b))
        assert xs.dsigma_polarization(c, e, spins=(sigma, sigma_out)).value <= best * (1 + 1e-12)


def test_outgoing_polarization_degenerate():
    with pytest.raises(DomainError):
        xs.outgoing_polarization(ctx_for(0.0, 3.09e-6, 300.0, 1, 2.5), 1, 1)


def test_extinction_cross_section():
    c = ctx_for(**MID)
    e_f = xs.outgoing_polarization(c, 1, 1)
    e1, e2 = polarization_basis(MID["theta"])
    f1, f2 = np.vdot(e1, e_f), np.vdot(e2, e_f)
    e_perp = np.conj(f2) * e1 - np.conj(f1) * e2
    par = xs.dsigma_polarization(c, e_f, spins=(1, 1)).value
    perp = xs.dsigma_polarization(c, e_perp, spins=(1, 1)).value
    assert perp <= 1e-12 * par


def test_unpolarized_trace():
    from nlcompton.amplitudes import channel_vectors, fg_coefficients, z_tensor
    from nlcompton.kinematics import scattered_state
    c = ctx_for(**MID)
    vecs = []
    for s in (1, -1):
        el = ElectronIn(MID["E"], sigma=s)
        kin = scattered_state(c.laser, el, c.channel)
        vecs.append(channel_vectors(kin, fg_coefficients(kin, el)))
    trace = np.trace(z_tensor(vecs)).real
    expected = xs.prefactor(c, vecs[0].kin) * trace / 2
    assert xs.dsigma_unpolarized(c).value == pytest.approx(expected, rel=1e-12)


def test_polarization_vector_checks():
    c = ctx_for(**MID)
    with pytest.raises(ValidationError):
        xs.dsigma_polarization(c, photon_direction(MID["theta"]), spins=(1, 1))
    with pytest.raises(ValidationError):
        xs.dsigma_polarization(c, [2.0, 0, 0], spins=(1, 1))
    with pytest.raises(ValidationError):
        xs.dsigma_polarization(c, polarization_basis(MID["theta"])[1])


def test_argument_checks():
    c = ctx_for(**MID)
    with pytest.raises(ValidationError):
        xs.dsigma_fixed_spins(c, 1, 3)
    with pytest.raises(ValidationError):
        xs.dsigma_fixed_spins(c, 0, 1)
    with pytest.raises(ValidationError):
        xs.klein_nishina_baseline(c, 1)


def test_resting_electron_rejected():
    c = ctx_for(0.1, 1e-5, 1.0, 1, 2.0, p_z=0.0)
    with pytest.raises(DomainError):
        xs.dsigma_spin_averaged(c, 1)
    with pytest.raises(DomainError):
        xs.klein_nishina_baseline(c, 1)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-3, 5.0), st.floats(1e-8, 1e-3), st.floats(1.5, 1e4),
       st.integers(1, 6), st.floats(0.0, math.pi))
def test_nonnegative_finite(a0, k, E, n, theta):
    for pol in (1, 2):
        v = xs.dsigma_spin_averaged(ctx_for(a0, k, E, n, theta), pol).value
        assert math.isfinite(v) and v >= 0


def test_sum_harmonics():
    c = ctx_for(**MID)
    each = [xs.dsigma_unpolarized(dataclasses.replace(
        c, channel=dataclasses.replace(c.channel, harmonic=n))).value for n in (1, 2, 3)]
    assert xs.sum_harmonics(c, range(1, 4)) == pytest.approx(sum(each), rel=1e-15)
    with pytest.raises(ValidationError):
        xs.sum_harmonics(c, [1], quantity="bogus")


# --- Klein-Nishina comparison ------------------------------------------------------

KN_E, KN_K = 300.0, 3.09e-6


@pytest.mark.parametrize("pol", [1, 2])
def test_kn_quadratic_in_amplitude(pol):
    a = xs.klein_nishina_baseline(ctx_for(1e-6, KN_K, KN_E, 1, 3.0), pol).value
    b = xs.klein_nishina_baseline(ctx_for(1e-5, KN_K, KN_E, 1, 3.0), pol).value
    assert b / a == pytest.approx(100.0, rel=1e-9)


def test_kn_forms_agree_for_second_polarization():
    c = ctx_for(1e-3, KN_K, KN_E, 1, 2.8)
    assert xs.klein_nishina_baseline(c, 2).value == xs.klein_nishina_covariant(c, 2).value


@pytest.mark.parametrize("theta", [2.8, 3.0, 3.13, 3.14])
@pytest.mark.parametrize("pol", [1, 2])
def test_covariant_kn_limit(theta, pol):
    c = ctx_for(1e-6, KN_K, KN_E, 1, theta)
    ratio = xs.ratio_to_baseline(c, pol, baseline="covariant")
    assert abs(ratio - 1) <= 1e-9


@pytest.mark.parametrize("theta", [2.8, 3.0, 3.13, 3.14])
def test_lab_kn_limit_second_polarization(theta):
    ratio = xs.ratio_to_baseline(ctx_for(1e-6, KN_K, KN_E, 1, theta), 2)
    assert abs(ratio - 1) <= 1e-9


def test_y_curve_shape():
    grid = np.logspace(-6, -3, 7)
    pts = xs.y_of_x_curve(KN_E, KN_K, 3.13, 2, grid)
    ys = [p.Y for p in pts]
    assert all(y is not None and math.isfinite(y) and y < 0 for y in ys)
    assert all(b > a for a, b in zip(ys, ys[1:]))
    slope = (ys[-1] - ys[0]) / 3
    assert slope == pytest.approx(2.0, abs=0.01)


def test_y_curve_theta_continuity():
    a = xs.y_of_x_curve(KN_E, KN_K, 3.13, 2, [1e-4])[0].Y
    b = xs.y_of_x_curve(KN_E, KN_K, 3.14, 2, [1e-4])[0].Y
    assert abs(a - b) < 1.0


def test_y_curve_skips_with_note():
    pts = xs.y_of_x_curve(KN_E, KN_K, 2.8, 1, [1e-6, 1e-5])
    assert all(p.Y is None and p.note == "KN <= w3" for p in pts)


def test_y_curve_validates_grid():
    with pytest.raises(ValidationError):
        xs.y_of_x_curve(KN_E, KN_K, 3.0, 1, [1e-3, 1e-4])
    with pytest.raises(ValidationError):
        xs.y_of_x_curve(KN_E, KN_K, 3.0, 1, [1e-3], baseline="other")
