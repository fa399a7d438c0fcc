"""Integer-order Bessel functions of the first kind.

Evaluation strategy for ``J_n(x)`` with ``x >= 0``:

* ``x < SERIES_MAX_ARG``: ascending power series, log-scaled so that very
  high orders do not underflow before the final exponentiation.
* ``n >= DEBYE_MIN_ORDER`` and ``x`` well below the turning point: Debye's
  expansion in ``1/n`` (four correction terms), accepted only when its last
  term is below ``1e-13``.
* otherwise: Miller's downward recurrence normalized with
  ``J_0 + 2 sum J_2k = 1``.  The start index sits ``RECURRENCE_OFFSET`` plus a
  turning-point margin proportional to ``x**(1/3)`` above ``max(n, x)``.

Every evaluator tracks the logarithm of the magnitude, so values below the
double-precision range come back as a ``(sign, log|J|)`` pair with the
``underflow`` flag set.

Extended-precision (``mpmath.mpf``) arguments are passed straight to
``mpmath.besselj``; that path exists only so callers can run whole
computations at higher working precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DomainError, ValidationError

SERIES_MAX_ARG = 12.0
SERIES_TERMS = 60
RECURRENCE_OFFSET = 40
TURNING_MARGIN = 8.0
DEBYE_MIN_ORDER = 50
ASYMPTOTIC_MIN_ORDER = 50
MAX_ORDER = 100_000
UNDERFLOW_THRESHOLD = 1e-280

_LOG_UNDERFLOW = math.log(UNDERFLOW_THRESHOLD)
_BIG = 1e250
_LOG_BIG = math.log(_BIG)
_MIN_RECURRENCE_ARG = 1e-50
_DEBYE_TOL = 1e-13

METHODS = ("auto", "series", "recurrence", "asymptotic")


@dataclass(frozen=True)
class BesselEval:
    """Result of one Bessel evaluation.

    Attributes
    ----------
    order, argument : int, float
        Inputs.
    value : float
        ``J_order(argument)``; a signed subnormal or zero when ``underflow``.
    log_scaled : tuple of (int, float)
        ``(sign, log|J|)`` with natural logarithm; ``(0, -inf)`` for an
        exact zero.
    underflow : bool
        True when ``|J| < UNDERFLOW_THRESHOLD``.
    method : str
        Evaluator that produced the value.
    """

    order: int
    argument: float
    value: float
    log_scaled: tuple
    underflow: bool
    method: str


def _check_inputs(order, argument):
    if not isinstance(order, (int, np.integer)):
        raise ValidationError(f"Bessel order must be an integer, got {order!r}")
    if abs(int(order)) > MAX_ORDER:
        raise ValidationError(f"|order| must not exceed {MAX_ORDER}, got {order}")
    if not math.isfinite(argument):
        raise DomainError(f"Bessel argument must be finite, got {argument!r}")
    if argument < 0:
        raise ValidationError(f"Bessel argument must be >= 0, got {argument!r}")


def _finish(order, x, sign, logmag, method):
    """Build a BesselEval from a sign and a natural-log magnitude."""
    if sign == 0 or logmag == -math.inf:
        return BesselEval(order, x, 0.0, (0, -math.inf), False, method)
    under = logmag < _LOG_UNDERFLOW
    value = math.copysign(math.exp(logmag), sign)
    return BesselEval(order, x, value, (sign, logmag), under, method)


def _series_log(n, x, terms=SERIES_TERMS):
    """Power series for n >= 0, x > 0; returns (sign, log|J_n(x)|)."""
    lead = n * (math.log(x) - math.log(2.0)) - math.lgamma(n + 1)
    q = -0.25 * x * x
    term = 1.0
    total = 1.0
    for k in range(1, terms + 1):
        term *= q / (k * (n + k))
        total += term
        if abs(term) <= 1e-17 * abs(total) and k > 0.5 * x:
            break
    if total == 0.0:
        return 0, -math.inf
    return (1 if total > 0 else -1), lead + math.log(abs(total))


def _start_index(n, x, offset=RECURRENCE_OFFSET):
    m = max(n, math.ceil(x)) + offset + math.ceil(TURNING_MARGIN * x ** (1.0 / 3.0))
    return m + (m % 2)


def _miller_log(n, x, offset=RECURRENCE_OFFSET):
    """Downward recurrence for n >= 0, x > 0; returns (sign, log|J_n(x)|)."""
    if x < _MIN_RECURRENCE_ARG:
        raise DomainError(f"recurrence needs argument >= {_MIN_RECURRENCE_ARG}, got {x!r}")
    top = _start_index(n, x, offset)
    f_up, f = 0.0, 1.0
    norm = 0.0
    scale = 0
    target, target_scale = (f, 0) if n == top else (None, 0)
    two_over_x = 2.0 / x
    for k in range(top, 0, -1):
        if k % 2 == 0:
            norm += 2.0 * f
        f_up, f = f, k * two_over_x * f - f_up
        if k - 1 == n:
            target, target_scale = f, scale
        if abs(f) > _BIG:
            f /= _BIG
            f_up /= _BIG
            norm /= _BIG
            scale += 1
    norm += f
    if target == 0.0:
        return 0, -math.inf
    sign = 1 if (target > 0) == (norm > 0) else -1
    logmag = math.log(abs(target)) - (scale - target_scale) * _LOG_BIG - math.log(abs(norm))
    return sign, logmag


# Debye polynomials u_k(t), DLMF 10.41.10, coefficients in ascending powers.
_DEBYE_U = (
    (1.0,),
    (0.0, 3.0 / 24.0, 0.0, -5.0 / 24.0),
    (0.0, 0.0, 81.0 / 1152.0, 0.0, -462.0 / 1152.0, 0.0, 385.0 / 1152.0),
    (0.0, 0.0, 0.0, 30375.0 / 414720.0, 0.0, -369603.0 / 414720.0, 0.0,
     765765.0 / 414720.0, 0.0, -425425.0 / 414720.0),
    (0.0, 0.0, 0.0, 0.0, 4465125.0 / 39813120.0, 0.0, -94121676.0 / 39813120.0,
     0.0, 349922430.0 / 39813120.0, 0.0, -446185740.0 / 39813120.0, 0.0,
     185910725.0 / 39813120.0),
)


def _poly(coeffs, t):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _alpha_minus_tanh(t):
    """atanh(t) - t without cancellation for small t."""
    if t < 0.2:
        t2 = t * t
        term = t * t2
        total = 0.0
        j = 3
        while True:
            inc = term / j
            total += inc
            if inc < 1e-18 * total:
                return total
            term *= t2
            j += 2
    return math.atanh(t) - t


def _debye_log(n, x):
    """Debye expansion for n >= 1, 0 < x < n.

    Returns ``(sign, log|J|, last_term)`` where ``last_term`` estimates the
    truncation error relative to the result.
    """
    tanh_a = math.sqrt((n - x) * (n + x)) / n
    coth_a = 1.0 / tanh_a
    total = 0.0
    last = 0.0
    for k, coeffs in enumerate(_DEBYE_U):
        last = _poly(coeffs, coth_a) / n**k
        total += last
    logmag = -n * _alpha_minus_tanh(tanh_a) - 0.5 * math.log(2.0 * math.pi * n * tanh_a)
    if total <= 0.0:
        return 1, -math.inf, math.inf
    return 1, logmag + math.log(total), abs(last / total)


def _eval_nonneg(n, x, method, offset):
    """Evaluate J_n(x) for n >= 0, x > 0 as (sign, logmag, method)."""
    if method == "series":
        return (*_series_log(n, x), "series")
    if method == "recurrence":
        return (*_miller_log(n, x, offset), "recurrence")
    if method == "asymptotic":
        if n < 1 or x >= n:
            raise DomainError("asymptotic method needs order >= 1 and argument < order")
        sign, logmag, _ = _debye_log(n, x)
        return sign, logmag, "asymptotic"
    if x < SERIES_MAX_ARG:
        return (*_series_log(n, x), "series")
    if n >= DEBYE_MIN_ORDER and x < n:
        sign, logmag, err = _debye_log(n, x)
        if err < _DEBYE_TOL:
            return sign, logmag, "asymptotic"
    return (*_miller_log(n, x, offset), "recurrence")


def bessel_j_eval(order, argument, method="auto", *, offset=RECURRENCE_OFFSET):
    """Evaluate ``J_order(argument)`` with full diagnostics.

    Parameters
    ----------
    order : int
        Integer order, ``|order| <= 1e5``.
    argument : float
        Non-negative finite argument.
    method : {"auto", "series", "recurrence", "asymptotic"}
        Force one evaluator; ``"auto"`` picks per the module docstring.
    offset : int
        Extra start-index offset for the recurrence.

    Returns
    -------
    BesselEval
    """
    if method not in METHODS:
        raise ValidationError(f"unknown Bessel method {method!r}; choose from {METHODS}")
    _check_inputs(order, argument)
    n = abs(int(order))
    x = float(argument)
    flip = -1 if (order < 0 and n % 2) else 1
    if x == 0.0:
        return BesselEval(int(order), x, 1.0 if n == 0 else 0.0,
                          (1, 0.0) if n == 0 else (0, -math.inf), False, "exact")
    sign, logmag, used = _eval_nonneg(n, x, method, offset)
    return _finish(int(order), x, sign * flip, logmag, used)


def bessel_j(order, argument, method="auto"):
    """Return ``J_order(argument)`` for integer order and ``argument >= 0``.

    Relative accuracy is ``1e-10`` or better whenever ``|J| >= 1e-280``;
    smaller magnitudes return a correctly signed subnormal or zero (see
    :func:`bessel_j_eval` for the underflow flag and log-scaled value).

    Examples
    --------
    >>> round(bessel_j(3, 2.0), 12)
    0.128943249474
    """
    if isinstance(argument, mpmath.mpf):
        return mpmath.besselj(int(order), argument)
    return bessel_j_eval(order, argument, method).value


def bessel_j_sequence(n_max, x, *, offset=RECURRENCE_OFFSET):
    """Return ``[J_0(x), ..., J_{n_max}(x)]`` from one downward recurrence.

    Entries below the double range come back as zero.
    """
    if n_max < 0:
        raise ValidationError("n_max must be >= 0")
    _check_inputs(n_max, x)
    out = np.zeros(n_max + 1)
    if x == 0.0:
        out[0] = 1.0
        return out
    if x < _MIN_RECURRENCE_ARG:
        for n in range(n_max + 1):
            s, lg = _series_log(n, x)
            out[n] = s * math.exp(lg) if lg > -745.0 else 0.0
        return out
    top = _start_index(n_max, x, offset)
    f_up, f = 0.0, 1.0
    norm = 0.0
    scale = 0
    stored = np.zeros(n_max + 1)
    stored_scale = np.zeros(n_max + 1, dtype=np.int64)
    two_over_x = 2.0 / x
    for k in range(top, 0, -1):
        if k % 2 == 0:
            norm += 2.0 * f
        f_up, f = f, k * two_over_x * f - f_up
        if k - 1 <= n_max:
            stored[k - 1] = f
            stored_scale[k - 1] = scale
        if abs(f) > _BIG:
            f /= _BIG
            f_up /= _BIG
            norm /= _BIG
            scale += 1
    norm += f
    with np.errstate(under="ignore"):
        factor = np.exp(-(scale - stored_scale) * _LOG_BIG)
        return stored * factor / norm


def _signed_sequence(n_max, x):
    """J_0..J_{n_max} at a signed argument, using J_n(-x) = (-1)^n J_n(x)."""
    seq = bessel_j_sequence(n_max, abs(x))
    if x < 0:
        seq[1::2] *= -1.0
    return seq


def _signed_order(seq, n):
    """Look up J_n from a nonnegative-order sequence, n may be negative."""
    v = seq[abs(n)]
    return -v if (n < 0 and n % 2) else v


def bessel_j_array(order, x, *, offset=RECURRENCE_OFFSET):
    """Vectorized ``J_order(x)`` over a numpy array of nonnegative arguments.

    Used for grid evaluations; values below the double range become zero.
    """
    x = np.asarray(x, dtype=float)
    n = abs(int(order))
    if abs(int(order)) > MAX_ORDER:
        raise ValidationError(f"|order| must not exceed {MAX_ORDER}")
    if not np.all(np.isfinite(x)):
        raise DomainError("Bessel arguments must be finite")
    if np.any(x < 0):
        raise ValidationError("Bessel arguments must be >= 0")
    out = np.zeros_like(x)
    small = x < 1e-3
    if np.any(small):
        xs = x[small]
        q = -0.25 * xs * xs
        series = 1.0 + q / (n + 1) * (1.0 + q / (2 * (n + 2)) * (1.0 + q / (3 * (n + 3))))
        with np.errstate(under="ignore"):
            out[small] = np.exp(n * np.log(np.where(xs > 0, 0.5 * xs, 1.0))
                                - math.lgamma(n + 1)) * series
        out[small & (x == 0)] = 1.0 if n == 0 else 0.0
    big = ~small
    if np.any(big):
        xb = x[big]
        top = _start_index(n, float(xb.max()), offset)
        two_over_x = 2.0 / xb
        f_up = np.zeros_like(xb)
        f = np.ones_like(xb)
        norm = np.zeros_like(xb)
        scale = np.zeros(xb.shape, dtype=np.int64)
        target = f.copy() if n == top else np.zeros_like(xb)
        target_scale = np.zeros_like(scale)
        for k in range(top, 0, -1):
            if k % 2 == 0:
                norm += 2.0 * f
            f_up, f = f, k * two_over_x * f - f_up
            if k - 1 == n:
                target = f.copy()
                target_scale = scale.copy()
            over = np.abs(f) > _BIG
            if over.any():
                f[over] /= _BIG
                f_up[over] /= _BIG
                norm[over] /= _BIG
                scale[over] += 1
        norm += f
        with np.errstate(under="ignore"):
            out[big] = target * np.exp(-(scale - target_scale) * _LOG_BIG) / norm
    if order < 0 and n % 2:
        out = -out
    return out


def _xi_from_sech(sech_xi):
    return math.acosh(1.0 / sech_xi)


def bessel_j_two_term_asymptotic(order, sech_xi, *, min_order=ASYMPTOTIC_MIN_ORDER,
                                 log_scaled=False):
    """Two-term large-order form of ``J_N(N sech xi)`` in closed form.

    Evaluates::

        exp(N (tanh xi - xi)) / sqrt(2 N pi tanh xi)
            * [1 - (1/8 - (5/24) coth^2 xi) / (N tanh xi)]

    The standard Debye series has the opposite sign in front of the
    correction.  This form is kept as written so that it can be compared
    against :func:`bessel_j`; production evaluation does not use it.

    With ``log_scaled=True`` the result is returned as ``(sign, log|value|)``
    so that it can be compared with :func:`bessel_j_eval` where the value
    itself underflows.
    """
    if not isinstance(order, (int, np.integer)) or order < 1:
        raise ValidationError("order must be an integer >= 1")
    if order < min_order:
        raise ValidationError(f"order must be >= {min_order} for the large-order form")
    if not (0.0 < sech_xi < 1.0):
        raise DomainError(f"sech_xi must lie in (0, 1), got {sech_xi!r}")
    n = int(order)
    xi = _xi_from_sech(sech_xi)
    th = math.tanh(xi)
    coth2 = 1.0 / (th * th)
    log_lead = n * (th - xi) - 0.5 * math.log(2.0 * n * math.pi * th)
    bracket = 1.0 - (1.0 / 8.0 - (5.0 / 24.0) * coth2) / (n * th)
    if log_scaled:
        if bracket == 0.0:
            return 0, -math.inf
        return (1 if bracket > 0 else -1), log_lead + math.log(abs(bracket))
    return math.exp(log_lead) * bracket


_I_POWERS = (1.0, 1j, -1.0, -1j)


def jacobi_anger_partial_sum(a, theta, n_max):
    """Return ``sum_{|n| <= n_max} i^n J_n(a) e^{i n theta}``.

    Converges to ``exp(i a cos(theta))``.
    """
    if n_max < 0:
        raise ValidationError("n_max must be >= 0")
    if not (math.isfinite(a) and math.isfinite(theta)):
        raise DomainError("inputs must be finite")
    seq = _signed_sequence(n_max, a)
    total = complex(seq[0])
    for n in range(1, n_max + 1):
        jn = seq[n]
        jm = -jn if n % 2 else jn
        total += _I_POWERS[n % 4] * jn * cmath.exp(1j * n * theta)
        total += _I_POWERS[(-n) % 4] * jm * cmath.exp(-1j * n * theta)
    return total


def graf_partial_sum(n, p_perp, rho, R, phi, k_z_phase, nu_max):
    """Truncated addition-theorem sum for a shifted cylindrical wave.

    Returns::

        sum_{|nu| <= nu_max} J_{n-nu}(p R) J_nu(p rho) e^{-i nu phi}
                             e^{-i (n - nu)(k_z_phase - pi/2)}

    which converges to ``J_n(p rho') e^{-i n phi'}`` for the coordinates
    ``x' = rho cos(phi) + R sin(k_z_phase)``,
    ``y' = rho sin(phi) - R cos(k_z_phase)``.
    """
    if nu_max < 0:
        raise ValidationError("nu_max must be >= 0")
    vals = (p_perp, rho, R, phi, k_z_phase)
    if not all(math.isfinite(v) for v in vals):
        raise DomainError("inputs must be finite")
    n = int(n)
    seq_r = _signed_sequence(abs(n) + nu_max, p_perp * R)
    seq_rho = _signed_sequence(nu_max, p_perp * rho)
    beta = k_z_phase - 0.5 * math.pi
    total = 0.0j
    for nu in range(-nu_max, nu_max + 1):
        m = n - nu
        total += (_signed_order(seq_r, m) * _signed_order(seq_rho, nu)
                  * cmath.exp(-1j * (nu * phi + m * beta)))
    return total
