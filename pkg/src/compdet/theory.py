"""Closed-form error exponents and finite-M probability bound evaluators.

All exponents are in nats, normalized by the hypothesis count M, and are
functions of the transmission rate beta = T/M, the compression rate
alpha = N/M, and SNR:

    matched filter:  (beta/2)       * log(1 + SNR/2)
    compressed ML:   ((beta-1+alpha)/2) * log(1 + alpha*SNR/2)
    modified RDD:    ((beta-1)/2)   * log(1 + alpha*SNR/2)

The finite-M evaluators compute the non-asymptotic upper/lower bounds whose
normalized logarithms converge to these exponents: a union/Gallager bound
integrated against the chi-squared law of the whitened column distances for
the upper side, and a Gaussian-tail lower bound with an explicit constant
c(eps) for the lower side.  Upper values above 1 are vacuous but valid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

from .errors import DomainError

DEFAULT_EPSILON = 0.1


def _require(cond: bool, msg: str):
    if not cond:
        raise DomainError(msg)


# ---------------------------------------------------------------------------
# Asymptotic exponents


def exponent_mf(beta: float, snr: float) -> float:
    """Matched-filter (and optimal-decoder) error exponent."""
    _require(beta >= 1, f"beta must be >= 1, got {beta}")
    _require(snr >= 0, f"snr must be >= 0, got {snr}")
    return (beta / 2) * math.log1p(snr / 2)


def exponent_ml(beta: float, alpha: float, snr: float) -> float:
    """Compressed-statistic ML error exponent; equals exponent_mf at alpha=1."""
    _require(beta >= 1, f"beta must be >= 1, got {beta}")
    _require(0 < alpha <= 1, f"alpha must be in (0, 1], got {alpha}")
    _require(snr >= 0, f"snr must be >= 0, got {snr}")
    return ((beta - 1 + alpha) / 2) * math.log1p(alpha * snr / 2)


def exponent_mrdd(beta: float, alpha: float, snr: float) -> float:
    """Modified-RDD error exponent; strictly below exponent_ml for alpha > 0."""
    _require(beta >= 1, f"beta must be >= 1, got {beta}")
    _require(0 < alpha <= 1, f"alpha must be in (0, 1], got {alpha}")
    _require(snr >= 0, f"snr must be >= 0, got {snr}")
    return ((beta - 1) / 2) * math.log1p(alpha * snr / 2)


@dataclass(frozen=True)
class TheoryPoint:
    """The three exponents evaluated at one (beta, alpha, snr) triple."""

    beta: float
    alpha: float
    snr: float
    exponent_mf: float = field(init=False)
    exponent_ml: float = field(init=False)
    exponent_mrdd: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "exponent_mf", exponent_mf(self.beta, self.snr))
        object.__setattr__(self, "exponent_ml", exponent_ml(self.beta, self.alpha, self.snr))
        object.__setattr__(self, "exponent_mrdd", exponent_mrdd(self.beta, self.alpha, self.snr))


# ---------------------------------------------------------------------------
# Gaussian tail bounds


def q_function(x):
    """Standard normal tail probability Q(x); accepts scalars or arrays."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2))


def q_lower_constant(epsilon: float) -> float:
    """The constant c(eps) in the exponential lower bound on Q.

    c(eps) = e^{1/(pi*eps+2)} / (2(1+eps)) * sqrt(eps*(pi*eps+2)/pi); it is
    below 1/2 for every eps > 0 and approaches 1/2 as eps grows.
    """
    _require(epsilon > 0, f"epsilon must be positive, got {epsilon}")
    pe = math.pi * epsilon + 2
    return math.exp(1 / pe) / (2 * (1 + epsilon)) * math.sqrt(epsilon * pe / math.pi)


def q_lower(x: float, epsilon: float) -> float:
    """Lower bound c(eps) * exp(-(1+eps) x^2 / 2), valid for x >= 0."""
    _require(x >= 0, f"lower bound needs x >= 0, got {x}")
    return q_lower_constant(epsilon) * math.exp(-(1 + epsilon) * x * x / 2)


def q_upper(x: float) -> float:
    """Upper bound exp(-x^2/2) / (x sqrt(2 pi)), valid for x > 0."""
    if x <= 0:
        raise DomainError(f"upper bound needs x > 0, got {x}")
    return math.exp(-x * x / 2) / (x * math.sqrt(2 * math.pi))


def q_bounds(x: float, epsilon: float) -> tuple:
    """(lower, Q(x), upper) sandwich; requires x > 0 for the upper bound."""
    if x <= 0:
        raise DomainError(f"q_bounds needs x > 0 (the upper bound diverges), got {x}")
    return q_lower(x, epsilon), float(q_function(x)), q_upper(x)


# ---------------------------------------------------------------------------
# Finite-M bounds


def gallager_pairwise_bound(dist2: float, norm2: float, m: int, sigma2: float, rho: float = 1.0) -> float:
    """Union-style upper bound on the conditional error probability.

    For whitened geometry with squared pair distance dist2 and squared
    column norm norm2, the bound is
    (M-1)^rho * exp(-rho * [dist2 - (1-rho) norm2] / (2 sigma^2 (1+rho)^2));
    at rho = 1 it reduces to (M-1) exp(-dist2 / (8 sigma^2)).
    """
    _require(0 <= rho <= 1, f"rho must be in [0, 1], got {rho}")
    _require(sigma2 > 0, f"sigma2 must be positive, got {sigma2}")
    _require(m >= 2, f"need at least two hypotheses, got {m}")
    _require(dist2 >= 0, f"squared distance must be nonnegative, got {dist2}")
    expo = -rho * (dist2 - (1 - rho) * norm2) / (2 * sigma2 * (1 + rho) ** 2)
    return (m - 1) ** rho * math.exp(expo)


def gamma_half_ratio(k: int) -> float:
    """Gamma(k/2) / Gamma((k+1)/2) for integer k >= 0, by exact recursion.

    R(1) = sqrt(pi), R(2) = 2/sqrt(pi), R(k) = R(k-2) * (k-2)/(k-1); R(0) is
    infinite (Gamma(0) diverges).
    """
    _require(k >= 0, f"need k >= 0, got {k}")
    if k == 0:
        return math.inf
    if k % 2:
        r, start = math.sqrt(math.pi), 1
    else:
        r, start = 2 / math.sqrt(math.pi), 2
    for i in range(start, k, 2):
        r *= i / (i + 1)
    return r


def gautschi_ratio_bounds(k: int) -> tuple:
    """Two-sided bound sqrt(2/k) <= R(k) <= sqrt(2/(k-1)) for k >= 2."""
    _require(k >= 2, f"need k >= 2, got {k}")
    return math.sqrt(2 / k), math.sqrt(2 / (k - 1))


def _check_bound_args(m: int, t: int, snr: float, epsilon: float):
    _require(m >= 2, f"need at least two hypotheses, got {m}")
    _require(t >= m, f"need t >= m, got t={t}, m={m}")
    _require(snr >= 0, f"snr must be >= 0, got {snr}")
    _require(epsilon > 0, f"epsilon must be positive, got {epsilon}")


def finite_bounds_mf(m: int, t: int, snr: float, epsilon: float = DEFAULT_EPSILON) -> tuple:
    """(upper, lower) on the matched-filter error probability at finite M.

    upper = (M-1) (1 + SNR/2)^{-T/2}
    lower = c(eps) (1 + (1+eps) SNR/2)^{-T/2}
    """
    _check_bound_args(m, t, snr, epsilon)
    upper = (m - 1) * (1 + snr / 2) ** (-t / 2)
    lower = q_lower_constant(epsilon) * (1 + (1 + epsilon) * snr / 2) ** (-t / 2)
    return upper, lower


def finite_bounds_ml(m: int, n: int, t: int, mu: float, snr: float, epsilon: float = DEFAULT_EPSILON) -> tuple:
    """(upper, lower) on the compressed-ML error probability at finite M.

    With alpha = N/M and T - M + N chi-squared degrees of freedom:
    upper = M (1 + alpha SNR (1-mu)/2)^{-(T-M+N)/2}
    lower = c(eps) (1 + (1+eps) alpha SNR (1+mu)/2)^{-(T-M+N)/2}
    """
    _check_bound_args(m, t, snr, epsilon)
    _require(1 <= n <= m, f"need 1 <= n <= m, got n={n}, m={m}")
    _require(0 <= mu < 1, f"coherence must be in [0, 1), got {mu}")
    alpha = n / m
    half_dof = (t - m + n) / 2
    upper = m * (1 + alpha * snr * (1 - mu) / 2) ** -half_dof
    lower = q_lower_constant(epsilon) * (1 + (1 + epsilon) * alpha * snr * (1 + mu) / 2) ** -half_dof
    return upper, lower


def finite_bounds_mrdd(m: int, n: int, t: int, mu: float, snr: float, epsilon: float = DEFAULT_EPSILON) -> tuple:
    """(upper, lower) on the modified-RDD error probability at finite M.

    The chi-squared reduction here has only T - M degrees of freedom, and the
    upper bound carries the prefactor
    f(M) = M sqrt(1/(2 pi alpha (1-mu) SNR)) * Gamma((T-M)/2)/Gamma((T-M+1)/2).
    At T = M the prefactor diverges and the bound is vacuous (exponent 0).
    """
    _check_bound_args(m, t, snr, epsilon)
    _require(1 <= n <= m, f"need 1 <= n <= m, got n={n}, m={m}")
    _require(0 <= mu < 1, f"coherence must be in [0, 1), got {mu}")
    alpha = n / m
    half_dof = (t - m) / 2
    if snr == 0:
        prefactor = math.inf
    else:
        prefactor = (
            m
            * math.sqrt(1 / (2 * math.pi * alpha * (1 - mu) * snr))
            * gamma_half_ratio(t - m)
        )
    upper = prefactor * (1 + (1 - mu) * alpha * snr / 2) ** -half_dof
    lower = q_lower_constant(epsilon) * (1 + (1 + epsilon) * (1 + mu) * alpha * snr / 2) ** -half_dof
    return upper, lower


@dataclass(frozen=True)
class BoundPoint:
    """All six finite-M bounds evaluated at one configuration."""

    m: int
    n: int
    t: int
    mu: float
    snr: float
    upper_ml: float
    lower_ml: float
    upper_mrdd: float
    lower_mrdd: float
    upper_mf: float
    lower_mf: float
    epsilon: float
    rho: float = 1.0


def bound_point(m: int, n: int, t: int, mu: float, snr: float, epsilon: float = DEFAULT_EPSILON) -> BoundPoint:
    """Evaluate every finite-M bound at one configuration."""
    upper_ml, lower_ml = finite_bounds_ml(m, n, t, mu, snr, epsilon)
    upper_mrdd, lower_mrdd = finite_bounds_mrdd(m, n, t, mu, snr, epsilon)
    upper_mf, lower_mf = finite_bounds_mf(m, t, snr, epsilon)
    return BoundPoint(
        m=m, n=n, t=t, mu=mu, snr=snr,
        upper_ml=upper_ml, lower_ml=lower_ml,
        upper_mrdd=upper_mrdd, lower_mrdd=lower_mrdd,
        upper_mf=upper_mf, lower_mf=lower_mf,
        epsilon=epsilon,
    )


# ---------------------------------------------------------------------------
# Limiting behavior of the exponents


@dataclass(frozen=True)
class AsymptoticsReport:
    """Finite-difference diagnostics of how the exponents scale.

    - ml_per_alpha / mrdd_per_alpha: E(alpha)/alpha on a dyadic alpha grid
      (bounded ratios witness the linear small-alpha behavior).
    - beta margin: the exponents are exactly affine in beta; the measured
      per-unit-beta increment is compared against (1/2) log(1 + alpha SNR/2).
    - quadratic fit: log-log slope of E at (alpha, beta) = (eps, 1+eps),
      which approaches 2 as eps shrinks.
    - snr slopes: E/SNR on a small-SNR grid; the Taylor coefficients of the
      closed forms are alpha*(beta-1+alpha)/4 and alpha*(beta-1)/4.
    """

    point: TheoryPoint
    alpha_grid: tuple
    ml_per_alpha: tuple
    mrdd_per_alpha: tuple
    beta_increment_measured: float
    beta_increment_closed_form: float
    eps_grid: tuple
    ml_quadratic_slope: float
    mrdd_quadratic_slope: float
    snr_grid: tuple
    ml_snr_slopes: tuple
    mrdd_snr_slopes: tuple
    ml_snr_slope_taylor: float
    mrdd_snr_slope_taylor: float


def _loglog_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def exponent_scaling(point: TheoryPoint) -> AsymptoticsReport:
    """Measure how the exponents scale in alpha, beta, and SNR near a point."""
    beta, alpha, snr = point.beta, point.alpha, point.snr

    alpha_grid = (0.5, 0.25, 0.125)
    ml_per_alpha = tuple(exponent_ml(beta, a, snr) / a for a in alpha_grid)
    mrdd_per_alpha = tuple(exponent_mrdd(beta, a, snr) / a for a in alpha_grid)

    d_beta = 1e-3
    beta_inc = (exponent_ml(1 + d_beta, alpha, snr) - exponent_ml(1, alpha, snr)) / d_beta
    beta_closed = 0.5 * math.log1p(alpha * snr / 2)

    eps_grid = (0.25, 0.125, 0.0625)
    ml_quad = _loglog_slope(eps_grid, [exponent_ml(1 + e, e, snr) for e in eps_grid])
    mrdd_quad = _loglog_slope(eps_grid, [exponent_mrdd(1 + e, e, snr) for e in eps_grid])

    snr_grid = (1e-2, 1e-3)
    ml_snr = tuple(exponent_ml(beta, alpha, s) / s for s in snr_grid)
    mrdd_snr = tuple(exponent_mrdd(beta, alpha, s) / s for s in snr_grid)

    return AsymptoticsReport(
        point=point,
        alpha_grid=alpha_grid,
        ml_per_alpha=ml_per_alpha,
        mrdd_per_alpha=mrdd_per_alpha,
        beta_increment_measured=beta_inc,
        beta_increment_closed_form=beta_closed,
        eps_grid=eps_grid,
        ml_quadratic_slope=ml_quad,
        mrdd_quadratic_slope=mrdd_quad,
        snr_grid=snr_grid,
        ml_snr_slopes=ml_snr,
        mrdd_snr_slopes=mrdd_snr,
        ml_snr_slope_taylor=alpha * (beta - 1 + alpha) / 4,
        mrdd_snr_slope_taylor=alpha * (beta - 1) / 4,
    )
