import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _oracles
from nlcompton.amplitudes import (
    LASER_POLARIZATION,
    channel_vectors,
    fg_coefficients,
    orthogonal_polarization,
    photon_direction,
    polarization_basis,
    script_h,
    transverse_block,
    z_tensor,
)
from nlcompton.errors import ValidationError
from nlcompton.kinematics import Channel, ElectronIn, LaserParams, scattered_state

T1 = dict(a0=0.015, k=3.09e-6, E=7000.0, N=1, theta=3.14)
T2 = dict(a0=10.5, k=4.43e-9, E=7000.0, N=523, theta=3.14)


def _setup(a0, k, E, N, theta, sigma=1, mp=False):
    cv = mpmath.mpf if mp else float
    laser = LaserParams(cv(a0), cv(k))
    electron = ElectronIn(cv(E), sigma=sigma)
    kin = scattered_state(laser, electron, Channel(N, cv(theta)))
    return kin, electron


def _vecs(a0, k, E, N, theta, sigma):
    kin, el = _setup(a0, k, E, N, theta, sigma)
    return channel_vectors(kin, fg_coefficients(kin, el))


# --- polarization basis -------------------------------------------------------

def test_basis_forward():
    e1, e2 = polarization_basis(0.0, 0.0)
    assert np.array_equal(e1, [1.0, 0.0, 0.0])
    assert np.array_equal(e2, [0.0, 1.0, 0.0])


@given(st.floats(0.0, math.pi), st.floats(-math.pi, math.pi))
def test_basis_orthonormal_transverse(theta, phi):
    e1, e2 = polarization_basis(theta, phi)
    khat = photon_direction(theta, phi)
    for v in (e1, e2):
        assert abs(np.dot(v, v) - 1.0) < 1e-14
        assert abs(np.dot(v, khat)) < 1e-14
    assert abs(np.dot(e1, e2)) < 1e-14


@given(st.floats(0.0, math.pi))
def test_circular_overlaps(theta):
    e1, e2 = polarization_basis(theta)
    assert abs(np.vdot(LASER_POLARIZATION, LASER_POLARIZATION) - 1) < 1e-15
    assert abs(abs(np.dot(LASER_POLARIZATION, e1)) ** 2 - math.cos(theta) ** 2 / 2) < 1e-15
    assert abs(abs(np.dot(LASER_POLARIZATION, e2)) ** 2 - 0.5) < 1e-15


def test_basis_rejects_theta():
    with pytest.raises(ValidationError):
        polarization_basis(-0.1)


# --- coefficients -------------------------------------------------------------

@pytest.mark.parametrize("point", [T1, T2, dict(T1, N=2, theta=3.0)], ids=["t1", "t2", "n2"])
@pytest.mark.parametrize("sigma", [1, -1])
@pytest.mark.parametrize("mp", [True, False], ids=["extended", "double"])
def test_double_entry_transcription(point, sigma, mp):
    tol = 1e-12 if mp else 1e-11
    with mpmath.workdps(50):
        ref_kin = _oracles.kinematics(point["a0"], point["k"], point["E"], point["N"],
                                      point["theta"])
        F_ref, G_ref = _oracles.fg_from_w(ref_kin, sigma)
        kin, el = _setup(**point, sigma=sigma, mp=mp)
        amps = fg_coefficients(kin, el)
        for got, ref in ((amps.F, F_ref), (amps.G, G_ref)):
            for i in (1, 2):
                for nu in (0, 1, -1):
                    r = ref[i][nu]
                    assert abs(got[i][nu] - r) <= tol * abs(r), (i, nu)


@pytest.mark.parametrize("sigma", [1, -1])
def test_realness_pattern(sigma):
    kin, el = _setup(**T1, sigma=sigma)
    amps = fg_coefficients(kin, el)
    for block in (amps.F, amps.G):
        for nu in (0, sigma, -sigma):
            assert block[1][nu].imag == 0
            assert block[2][nu].real == 0


@pytest.mark.parametrize("sigma", [1, -1])
def test_zero_amplitude_forward(sigma):
    kin, el = _setup(0.0, 3.09e-6, 7000.0, 1, 0.0, sigma)
    amps = fg_coefficients(kin, el)
    for block in (amps.F, amps.G):
        for i in (1, 2):
            for nu in (0, 1, -1):
                assert abs(block[i][nu]) <= 1e-9


@pytest.mark.parametrize("sigma", [1, -1])
def test_zero_amplitude_kills_shift_slots(sigma):
    kin, el = _setup(0.0, 3.09e-6, 300.0, 1, 2.0, sigma)
    amps = fg_coefficients(kin, el)
    for block in (amps.F, amps.G):
        for i in (1, 2):
            assert block[i][sigma] == 0
            assert block[i][-sigma] == 0


@pytest.mark.parametrize("sigma", [1, -1])
def test_f2_ratio(sigma):
    kin, el = _setup(**T2, sigma=sigma)
    amps = fg_coefficients(kin, el)
    ratio = amps.F[2][sigma] / amps.F[2][-sigma]
    assert abs(ratio - (-kin.R / kin.Rprime)) <= 1e-14 * abs(ratio)


def test_orders_mapping():
    kin, el = _setup(**T1, sigma=-1)
    amps = fg_coefficients(kin, el)
    assert amps.orders() == {0: 1, -1: 2, 1: 0}
    kin, el = _setup(**T1, sigma=1)
    assert fg_coefficients(kin, el).orders() == {0: 1, 1: 0, -1: 2}


# --- channel vectors ------------------------------------------------------------

@pytest.mark.parametrize("point", [T1, T2], ids=["t1", "t2"])
@pytest.mark.parametrize("sigma", [1, -1])
def test_vectors_transverse(point, sigma):
    v = _vecs(**point, sigma=sigma)
    khat = photon_direction(point["theta"])
    for vec in (v.script_F, v.script_G):
        norm = np.linalg.norm(vec)
        assert np.all(np.isfinite(vec))
        assert norm > 0
        assert abs(np.dot(khat, vec)) <= 1e-12 * norm


@pytest.mark.parametrize("sigma", [1, -1])
def test_vector_norm_matches_components(sigma):
    v = _vecs(**T1, sigma=sigma)
    for vec, comp in ((v.script_F, v.f_comp), (v.script_G, v.g_comp)):
        lhs = float(np.sum(np.abs(vec) ** 2))
        rhs = sum(abs(c) ** 2 for c in comp)
        assert abs(lhs - rhs) <= 1e-12 * rhs


def test_no_laser_no_emission():
    v = _vecs(0.0, 3.09e-6, 300.0, 1, 2.5, 1)
    assert np.all(v.script_F == 0)
    assert np.linalg.norm(v.script_G) == 0


def test_large_harmonic_vectors_finite():
    v = _vecs(**T2, sigma=1)
    assert 500 < v.kin.bessel_argument < 523
    assert all(math.isfinite(abs(c)) and abs(c) > 0 for c in v.f_comp)


def test_rejects_bad_harmonic():
    kin, el = _setup(**T1)
    with pytest.raises(ValidationError):
        channel_vectors(kin, fg_coefficients(kin, el), harmonic=0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_small_amplitude_scaling(n):
    a0s = np.logspace(-6, -4, 5)
    norms = {"F": [], "G": []}
    for a0 in a0s:
        v = _vecs(a0, 3.09e-6, 300.0, n, 2.5, 1)
        norms["F"].append(np.linalg.norm(v.script_F))
        norms["G"].append(np.linalg.norm(v.script_G))
    for key, vals in norms.items():
        slope = np.polyfit(np.log(a0s), np.log(vals), 1)[0]
        assert abs(slope - n) <= 0.02 * n, (key, slope)


# --- H, Z ---------------------------------------------------------------------------

def test_script_h_reductions():
    v = _vecs(**T1, sigma=1)
    h, e = script_h(v, 1.0, 0.0)
    assert np.array_equal(h, v.script_F)
    assert abs(np.linalg.norm(e) - 1) < 1e-15
    h, _ = script_h(v, 0.0, 1.0, phi_kprime=0.0)
    assert np.array_equal(h, v.script_G)


def test_script_h_requires_normalized():
    v = _vecs(**T1, sigma=1)
    with pytest.raises(ValidationError):
        script_h(v, 1.0, 1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_orthogonal_polarization_extinction(mix, phase):
    v = _vecs(0.5, 3.09e-6, 300.0, 2, 2.9, 1)
    a1 = math.cos(mix)
    a2 = math.sin(mix) * complex(math.cos(phase), math.sin(phase))
    h, _ = script_h(v, a1, a2)
    e_perp = orthogonal_polarization(h, 2.9)
    assert abs(np.dot(photon_direction(2.9), e_perp)) < 1e-14
    assert abs(np.vdot(e_perp, h)) ** 2 <= 1e-12 * np.vdot(h, h).real


def _z_pair(**point):
    return z_tensor([_vecs(**point, sigma=1), _vecs(**point, sigma=-1)])


@pytest.mark.parametrize("point", [T1, T2, dict(a0=0.3, k=1e-5, E=50.0, N=3, theta=2.0)],
                         ids=["t1", "t2", "n3"])
def test_z_hermitian_psd_trace(point):
    vp, vm = _vecs(**point, sigma=1), _vecs(**point, sigma=-1)
    z = z_tensor([vp, vm])
    scale = np.trace(z).real
    assert np.max(np.abs(z - z.conj().T)) <= 1e-12 * scale
    expected = sum(np.linalg.norm(x) ** 2 for v in (vp, vm) for x in (v.script_F, v.script_G))
    assert abs(scale - expected) <= 1e-12 * expected
    block = transverse_block(z, point["theta"])
    assert np.all(np.linalg.eigvalsh(block) >= -1e-12 * scale)


def test_z_contraction():
    point = dict(a0=0.3, k=1e-5, E=50.0, N=2, theta=2.0)
    vp, vm = _vecs(**point, sigma=1), _vecs(**point, sigma=-1)
    z = z_tensor([vp, vm])
    e1, e2 = polarization_basis(2.0)
    rng = np.random.default_rng(7)
    for _ in range(20):
        a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
        e = (a * e1 + b * e2) / math.hypot(abs(a), abs(b))
        lhs = np.vdot(e, z @ e).real
        rhs = sum(abs(np.vdot(e, x)) ** 2 for v in (vp, vm) for x in (v.script_F, v.script_G))
        assert abs(lhs - rhs) <= 1e-12 * rhs


def test_z_requires_both_spins():
    v = _vecs(**T1, sigma=1)
    with pytest.raises(ValidationError):
        z_tensor([v, v])


def test_z_requires_same_kinematics():
    a = _vecs(**T1, sigma=1)
    b = _vecs(**dict(T1, theta=3.0), sigma=-1)
    with pytest.raises(ValidationError):
        z_tensor([a, b])


def test_z_zero_inputs():
    point = dict(a0=0.0, k=3.09e-6, E=300.0, N=1, theta=2.5)
    assert np.all(_z_pair(**point) == 0)
