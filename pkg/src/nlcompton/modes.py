"""Numerical checks of the laser-dressed electron eigenmodes.

The modes ``U_n`` solve the stationary equation ::

    {alpha.(-i grad) + a0 [alpha_x cos kz + alpha_y sin kz] + beta + k j_z} U_n
        = eps_n U_n,    j_z = -i d/dphi + Sigma_z / 2,

with ``eps_n = E + a0^2/(2(E - p_z)) + (sigma/2 - n) k``.  This module
evaluates ``U_n`` and the rotating-frame Volkov wave pointwise and provides
residual, mode-sum and orthogonality checks.  Matrices use the standard
Dirac representation and the constant phases of the Volkov wave are zero.

Positions are Cartesian arrays with a trailing axis of length 3 and
spinors carry a trailing axis of length 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_j_array
from .errors import DomainError, ValidationError

_I2 = np.eye(2, dtype=complex)
_O2 = np.zeros((2, 2), dtype=complex)
PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _off(m):
    return np.block([[_O2, m], [m, _O2]])


def _diag(m):
    return np.block([[m, _O2], [_O2, m]])


ALPHA_X, ALPHA_Y, ALPHA_Z = (_off(s) for s in PAULI)
SIGMA_X, SIGMA_Y, SIGMA_Z = (_diag(s) for s in PAULI)
BETA = np.block([[_I2, _O2], [_O2, -_I2]])
GAMMA5 = _off(_I2)

#: Sigma_z eigenvalue of each Dirac component.
_SZ = np.array([1.0, -1.0, 1.0, -1.0])


def dirac_self_test():
    """Largest violation of the Dirac-representation algebra.

    Checks ``{alpha_i, alpha_j} = 2 delta_ij``, ``{alpha_i, beta} = 0``,
    ``beta^2 = 1``, ``[Sigma_x, Sigma_y] = 2i Sigma_z`` and
    ``Sigma_z = -i alpha_x alpha_y``.
    """
    alphas = (ALPHA_X, ALPHA_Y, ALPHA_Z)
    eye = np.eye(4)
    errs = []
    for i, a in enumerate(alphas):
        errs.append(np.abs(a @ BETA + BETA @ a).max())
        for j, b in enumerate(alphas):
            errs.append(np.abs(a @ b + b @ a - 2 * (i == j) * eye).max())
    errs.append(np.abs(BETA @ BETA - eye).max())
    errs.append(np.abs(SIGMA_X @ SIGMA_Y - SIGMA_Y @ SIGMA_X - 2j * SIGMA_Z).max())
    errs.append(np.abs(-1j * ALPHA_X @ ALPHA_Y - SIGMA_Z).max())
    errs.append(np.abs(GAMMA5 @ GAMMA5 - eye).max())
    return float(max(errs))


@dataclass(frozen=True)
class ModeQuantumNumbers:
    """Labels of one eigenmode; ``tau = +1`` selects positive energy."""

    n: int
    sigma: int
    p_z: float
    p_perp: float
    tau: int = 1

    def __post_init__(self):
        if int(self.n) != self.n:
            raise ValidationError("n must be an integer")
        if self.sigma not in (1, -1):
            raise ValidationError("sigma must be +1 or -1")
        if self.tau not in (1, -1):
            raise ValidationError("tau must be +1 or -1")
        if not (math.isfinite(self.p_z) and math.isfinite(self.p_perp)):
            raise ValidationError("momenta must be finite")
        if self.p_perp < 0:
            raise ValidationError("p_perp must be >= 0")

    @property
    def energy(self):
        return self.tau * math.sqrt(self.p_z**2 + self.p_perp**2 + 1.0)


@dataclass(frozen=True)
class GridSpec:
    """Sampling and quadrature layout in cylindrical coordinates.

    Residual checks sample ``n_rho`` radii in ``(0, rho_max]`` (the axis is
    excluded), ``n_phi`` angles and ``n_z`` planes in ``[0, z_max)``, and
    difference with spacing ``h``.  Orthogonality checks use ``n_rho``
    Gauss-Legendre radii on ``[0, rho_max]`` and trapezoid rules with
    ``n_phi`` angles and ``n_z`` planes over one laser period.
    ``n_max`` truncates mode sums.
    """

    rho_max: float
    h: float = 0.01
    z_max: float = 1.0
    n_rho: int = 6
    n_phi: int = 6
    n_z: int = 4
    n_max: int = 40

    def __post_init__(self):
        if not (self.h > 0 and self.rho_max > 0 and self.z_max > 0):
            raise ValidationError("h, rho_max and z_max must be positive")
        if min(self.n_rho, self.n_phi, self.n_z) < 1 or self.n_max < 0:
            raise ValidationError("point counts must be >= 1 and n_max >= 0")

    def check_truncation(self, p_perp, R):
        """Require ``n_max >= p_perp (rho_max + R) + 20``."""
        need = p_perp * (self.rho_max + abs(R)) + 20
        if self.n_max < need:
            raise ValidationError(f"n_max = {self.n_max} is below the Bessel tail bound {need:.1f}")

    def sample_points(self):
        rho = self.rho_max * (np.arange(self.n_rho) + 0.5) / self.n_rho
        phi = 2 * math.pi * np.arange(self.n_phi) / self.n_phi
        z = self.z_max * np.arange(self.n_z) / self.n_z
        r, p, zz = np.meshgrid(rho, phi, z, indexing="ij")
        return np.stack([r * np.cos(p), r * np.sin(p), zz], axis=-1).reshape(-1, 3)


def _light_cone(E, p_z):
    d = E - p_z
    if not d > 0:
        raise DomainError("E - p_z must be positive")
    return d


def eigenvalue_epsilon(q, laser, E=None):
    """Mode eigenvalue ``E + a0^2/(2(E - p_z)) + (sigma/2 - n) k``."""
    energy = q.energy
    if E is not None:
        if abs(E - energy) > 1e-12 * abs(energy):
            raise ValidationError("E is inconsistent with (p_z, p_perp, tau)")
        energy = E
    d = _light_cone(energy, q.p_z)
    return energy + laser.a0**2 / (2 * d) + (q.sigma / 2 - q.n) * laser.k


def _spinor_parts(p_z, p_perp, sigma, E):
    f = math.sqrt((E + 1) / (2 * E))
    up = np.zeros(4, dtype=complex)
    um = np.zeros(4, dtype=complex)
    same, flip = (0, 1) if sigma == 1 else (1, 0)
    up[same] = f
    up[2 + same] = f * p_z * sigma / (E + 1)
    um[2 + flip] = f * p_perp / (E + 1)
    return up, um


def free_spinor(p_z, p_perp, sigma, phi_p=0.0):
    """Positive-energy bispinor ``u = u_+ + u_- exp(i sigma phi_p)``.

    ``u_+ = sqrt((E+1)/2E) [chi_sigma, p_z sigma/(E+1) chi_sigma]`` and
    ``u_- = sqrt((E+1)/2E) [0, p_perp/(E+1) chi_{-sigma}]``.
    """
    if sigma not in (1, -1):
        raise ValidationError("sigma must be +1 or -1")
    if p_perp < 0:
        raise ValidationError("p_perp must be >= 0")
    E = math.sqrt(p_z**2 + p_perp**2 + 1.0)
    up, um = _spinor_parts(p_z, p_perp, sigma, E)
    return up + um * complex(math.cos(sigma * phi_p), math.sin(sigma * phi_p))


def _dressing(z, a0, E, p_z, k):
    """Matrix ``1 - a0/(2(p_z - E)) [alpha_x cos kz + alpha_y sin kz + i(Sigma_y cos kz - Sigma_x sin kz)]``."""
    c, s = np.cos(k * z)[..., None, None], np.sin(k * z)[..., None, None]
    g = a0 / (2 * (p_z - E))
    return np.eye(4) - g * (ALPHA_X * c + ALPHA_Y * s + 1j * (SIGMA_Y * c - SIGMA_X * s))


def _shifted(x, R, k):
    """Primed transverse coordinates ``x + R sin kz`` and ``y - R cos kz``."""
    z = x[..., 2]
    return x[..., 0] + R * np.sin(k * z), x[..., 1] - R * np.cos(k * z)


def _apply(m, v):
    return np.einsum("...ij,...j->...i", m, v)


def _positions(x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 3:
        raise ValidationError("positions need a trailing axis of length 3")
    return x


def mode_u_n(x, q, laser, *, normalized=True):
    """Evaluate the eigenmode ``U_n`` (times ``1/(2 pi)`` when normalized).

    ``U_n = exp(i (p_z + c) z) M(z) [i^n J_n(p_perp rho') e^{-i n phi'} P_+
    + i^(n-sigma) J_(n-sigma)(p_perp rho') e^{-i (n-sigma) phi'} P_-] u(0)``
    with ``c = a0^2/(2(E - p_z))`` and ``P_+ u(0) = u_+``, ``P_- u(0) = u_-``.
    """
    x = _positions(x)
    E = q.energy
    d = _light_cone(E, q.p_z)
    a0, k = laser.a0, laser.k
    c = a0**2 / (2 * d)
    R = a0 / (k * d)
    xp, yp = _shifted(x, R, k)
    rho_p = np.hypot(xp, yp)
    phi_p = np.arctan2(yp, xp)
    up, um = _spinor_parts(q.p_z, q.p_perp, q.sigma, E)
    n, m = q.n, q.n - q.sigma
    arg = q.p_perp * rho_p
    a = (1j**n) * bessel_j_array(n, arg) * np.exp(-1j * n * phi_p)
    b = (1j**m) * bessel_j_array(m, arg) * np.exp(-1j * m * phi_p)
    v = a[..., None] * up + b[..., None] * um
    z = x[..., 2]
    out = np.exp(1j * (q.p_z + c) * z)[..., None] * _apply(_dressing(z, a0, E, q.p_z, k), v)
    return out / (2 * math.pi) if normalized else out


def _momentum(p):
    px, py, pz = (float(v) for v in p)
    return math.hypot(px, py), math.atan2(py, px), pz


def wolkow_psi_r(x, t, p, sigma, laser):
    """Rotating-frame Volkov wave in closed form.

    ``exp(i(p_z z - E t)) M(z) exp(i p_perp [x' cos(kt + phi_p) + y' sin(kt + phi_p)])
    exp(i c (z - t)) exp(-i k t Sigma_z / 2) u``.
    """
    x = _positions(x)
    pp, phi, pz = _momentum(p)
    E = math.sqrt(pp * pp + pz * pz + 1.0)
    d = _light_cone(E, pz)
    a0, k = laser.a0, laser.k
    c = a0**2 / (2 * d)
    R = a0 / (k * d)
    xp, yp = _shifted(x, R, k)
    z = x[..., 2]
    u = free_spinor(pz, pp, sigma, phi)
    rotated = u * np.exp(-0.5j * k * t * _SZ)
    phase = (pz * z - E * t + pp * (xp * math.cos(k * t + phi) + yp * math.sin(k * t + phi))
             + c * (z - t))
    return np.exp(1j * phase)[..., None] * _apply(_dressing(z, a0, E, pz, k), rotated)


def mode_sum_reconstruction(x, t, p, sigma, laser, n_max):
    """``sum_{|n| <= n_max} e^{i n phi_p} e^{-i eps_n t} U_n(x)`` (unnormalized modes)."""
    x = _positions(x)
    pp, phi, pz = _momentum(p)
    E = math.sqrt(pp * pp + pz * pz + 1.0)
    R = laser.a0 / (laser.k * _light_cone(E, pz))
    xp, yp = _shifted(x, R, laser.k)
    need = pp * float(np.max(np.hypot(xp, yp))) + 30
    if n_max < need:
        raise ValidationError(f"n_max = {n_max} is below p_perp max(rho') + 30 = {need:.1f}")
    total = np.zeros(x.shape[:-1] + (4,), dtype=complex)
    for n in range(-n_max, n_max + 1):
        q = ModeQuantumNumbers(n, sigma, pz, pp)
        eps = eigenvalue_epsilon(q, laser)
        total += np.exp(1j * (n * phi - eps * t)) * mode_u_n(x, q, laser, normalized=False)
    return total


def _hamiltonian_minus_eps(u, q, laser, x, h):
    """Central-difference ``(H - eps_n) U`` at positions ``x``."""
    a0, k = laser.a0, laser.k
    d = []
    for axis in range(3):
        step = np.zeros(3)
        step[axis] = h
        d.append((u(x + step) - u(x - step)) / (2 * h))
    u0 = u(x)
    z = x[..., 2]
    out = -1j * (_apply(ALPHA_X, d[0]) + _apply(ALPHA_Y, d[1]) + _apply(ALPHA_Z, d[2]))
    out += a0 * (np.cos(k * z)[..., None] * _apply(ALPHA_X, u0)
                 + np.sin(k * z)[..., None] * _apply(ALPHA_Y, u0))
    out += _apply(BETA, u0)
    dphi = x[..., 0:1] * d[1] - x[..., 1:2] * d[0]
    out += k * (-1j * dphi + 0.5 * _SZ * u0)
    eps = eigenvalue_epsilon(q, laser)
    return out - eps * u0, eps * u0


def eigen_residual(q, laser, grid):
    """Relative residual ``||(H - eps_n) U_n|| / ||eps_n U_n||`` on the grid.

    Derivatives are second-order central differences in Cartesian
    coordinates (``-i d/dphi = -i (x d/dy - y d/dx)``), so the residual of an
    exact eigenmode falls as ``h^2``.

    Raises
    ------
    ValidationError
        If ``h`` exceeds ``0.1 / max(p_perp, |p_z + c|, k)``.
    """
    c = laser.a0**2 / (2 * _light_cone(q.energy, q.p_z))
    scale = max(q.p_perp, abs(q.p_z + c), laser.k)
    if grid.h > 0.1 / scale:
        raise ValidationError(f"grid spacing h = {grid.h} does not resolve the scale 1/{scale:.4g}")
    x = grid.sample_points()
    res, ref = _hamiltonian_minus_eps(lambda pts: mode_u_n(pts, q, laser), q, laser, x, grid.h)
    return float(np.linalg.norm(res) / np.linalg.norm(ref))


def residual_convergence(q, laser, grid, levels=4):
    """Residuals under repeated halving of ``h``.

    Returns a list of ``(h, residual, ratio)`` rows where ``ratio`` is the
    previous residual over the current one (None on the first row).
    """
    rows = []
    prev = None
    h = grid.h
    for _ in range(levels):
        r = eigen_residual(q, laser, _replace_h(grid, h))
        rows.append((h, r, None if prev is None else prev / r))
        prev = r
        h /= 2
    return rows


def _replace_h(grid, h):
    return GridSpec(grid.rho_max, h, grid.z_max, grid.n_rho, grid.n_phi, grid.n_z, grid.n_max)


def _check_quadrature(q1, q2, laser, quad):
    if (q1.p_z, q1.p_perp, q1.tau) != (q2.p_z, q2.p_perp, q2.tau):
        raise ValidationError("orthogonality is checked only at shared p_z, p_perp and tau")
    pp = q1.p_perp
    R = laser.a0 / (laser.k * _light_cone(q1.energy, q1.p_z))
    if pp > 0 and quad.rho_max < 8 * 2 * math.pi / pp:
        raise ValidationError("rho_max must span at least 8 Bessel oscillation periods")
    need = 2 * (pp * (quad.rho_max + R) + abs(q1.n) + abs(q2.n)) + 16
    if quad.n_phi < need:
        raise ValidationError(f"angular quadrature needs at least {math.ceil(need)} points")
    shift = abs(q1.n - q2.n) + 1
    if quad.n_z <= 2 * shift or quad.n_phi % quad.n_z:
        raise ValidationError(f"n_z must exceed {2 * shift} and divide n_phi")


def orthonormality_check(q1, q2, laser, quad):
    """Quadrature of ``psi_{q1}^dagger psi_{q2}`` over a cylinder.

    The cylinder is ``rho <= rho_max`` and one laser period in z.  Radial
    nodes are Gauss-Legendre; angle and z use the trapezoid rule.

    The integrand is helically covariant: a rotation by ``a`` combined with
    a shift ``a/k`` in z multiplies it by ``exp(i d a)`` where
    ``d = (n2 - n1) + (sigma1 - sigma2)/2``.  With ``n_z`` dividing
    ``n_phi`` every z plane reproduces the same angular sum up to that
    phase, so the z sum cancels it exactly for ``d != 0``.  Pairs with
    ``d = 0`` and distinct labels share an eigenvalue and are separated
    only by the radial continuum normalization, which a finite cylinder
    resolves slowly.
    """
    _check_quadrature(q1, q2, laser, quad)
    nodes, weights = np.polynomial.legendre.leggauss(quad.n_rho)
    rho = 0.5 * quad.rho_max * (nodes + 1)
    w_rho = 0.5 * quad.rho_max * weights * rho
    phi = 2 * math.pi * np.arange(quad.n_phi) / quad.n_phi
    period = 2 * math.pi / laser.k
    z = period * np.arange(quad.n_z) / quad.n_z
    r, p, zz = np.meshgrid(rho, phi, z, indexing="ij")
    x = np.stack([r * np.cos(p), r * np.sin(p), zz], axis=-1)
    dens = np.einsum("...i,...i->...", np.conj(mode_u_n(x, q1, laser)), mode_u_n(x, q2, laser))
    w = w_rho[:, None, None] * (2 * math.pi / quad.n_phi) * (period / quad.n_z)
    return complex(np.sum(dens * w))


def orthonormality_ratio(q1, q2, laser, quad):
    """``|<q1|q2>| / sqrt(<q1|q1> <q2|q2>)`` on the same quadrature."""
    off = orthonormality_check(q1, q2, laser, quad)
    n1 = orthonormality_check(q1, q1, laser, quad).real
    n2 = orthonormality_check(q2, q2, laser, quad).real
    return abs(off) / math.sqrt(n1 * n2)
