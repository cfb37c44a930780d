"""Independent numerical ground truth for the closed forms.

* :func:`quad_alpha_divergence` integrates p^alpha q^(1-alpha) directly.
* :func:`brute_force_rdpf` grid-searches (rho^2, theta) over the jointly
  Gaussian family; it locates the perception-feasible variance window with
  its own scalar root finder on the divergence, not with the polynomial.
* :func:`kl_rdpf_rate` solves the KL-constrained problem (the alpha -> 1
  limit) from :func:`kl_gaussian` alone.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, stats

from .divergence import AlphaSpec, GaussianParams, as_alpha, kl_gaussian, perception_sup
from .exceptions import DomainError, Infeasible, NonConvergent
from .solver import RdpfQuery, RdpfSolution, Regime, classical_rd


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature settings.

    ``max_depth`` caps the number of adaptive subintervals; ``half_width`` is
    measured in standard deviations of the widest of p, q and the Gaussian
    shape of the integrand itself.
    """

    abs_tol: float = 1e-10
    max_depth: int = 200
    half_width: float = 10.0

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be a positive integer")
        if self.half_width < 10.0:
            raise ValueError("half_width must be at least 10 standard deviations")


@dataclass(frozen=True)
class GridSearchSpec:
    rho2_points: int = 129
    theta_points: int = 129
    rounds: int = 8

    def __post_init__(self):
        if self.rho2_points < 64 or self.theta_points < 64:
            raise ValueError("grid resolutions must be >= 64")
        if self.rounds < 2:
            raise ValueError("at least 2 refinement rounds are required")


def quad_alpha_divergence(
    p: GaussianParams,
    q: GaussianParams,
    a: float | AlphaSpec,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """(int p^alpha q^(1-alpha) dx - 1) / (alpha (alpha - 1)) by adaptive quadrature.

    Raises:
        DomainError: the integral diverges (nonpositive validity margin).
        NonConvergent: QUADPACK could not reach ``abs_tol`` within ``max_depth``
            subintervals.
    """
    alpha = as_alpha(a)
    sp, sq = math.sqrt(p.variance), math.sqrt(q.variance)
    precision = alpha / p.variance + (1.0 - alpha) / q.variance
    if not precision > 0:
        raise DomainError("integral diverges: alpha/var_p + (1-alpha)/var_q <= 0")
    center = (alpha * p.mean / p.variance + (1.0 - alpha) * q.mean / q.variance) / precision
    width = spec.half_width * max(sp, sq, 1.0 / math.sqrt(precision))
    lo = min(p.mean, q.mean, center) - width
    hi = max(p.mean, q.mean, center) + width

    def integrand(x):
        return math.exp(
            alpha * stats.norm.logpdf(x, p.mean, sp) + (1.0 - alpha) * stats.norm.logpdf(x, q.mean, sq)
        )

    scale = abs(alpha * (alpha - 1.0))
    # Tolerance on the integral so that the divergence itself meets abs_tol.
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(
                integrand, lo, hi, points=[center], epsabs=spec.abs_tol * scale, epsrel=1e-13,
                limit=max(spec.max_depth, 2),
            )
        except integrate.IntegrationWarning as exc:
            raise NonConvergent(str(exc)) from exc
    if err > spec.abs_tol * scale and err > 1e-13 * abs(value):
        raise NonConvergent(f"quadrature error estimate {err:.3g} above tolerance")
    return (value - 1.0) / (alpha * (alpha - 1.0))


def _divergence_ratio_array(x: np.ndarray, alpha: float) -> np.ndarray:
    """D_alpha(N(0,1) || N(0,x)) elementwise, inf where the margin is not positive."""
    x = np.asarray(x, dtype=float)
    margin = 1.0 + alpha * (x - 1.0)
    out = np.full(x.shape, np.inf)
    ok = (margin > 0) & (x > 0)
    log_h = 0.5 * alpha * np.log(x[ok]) - 0.5 * np.log(margin[ok])
    out[ok] = -np.expm1(log_h) / (alpha * (1.0 - alpha))
    return out


def _crossing(phi, edge: float) -> float:
    """Root of ``phi`` between 1 (where phi < 0) and ``edge`` (where phi > 0).

    ``edge`` may be +inf; the search then doubles outward.
    """
    inside = 1.0
    for k in range(1, 400):
        if math.isinf(edge):
            cand = 2.0**k
        else:
            cand = edge + (1.0 - edge) * 2.0**-k
        if phi(cand) > 0:
            return optimize.brentq(phi, min(inside, cand), max(inside, cand), xtol=1e-300, rtol=1e-15, maxiter=500)
        inside = cand
    return inside


def perception_window(P: float, a: float | AlphaSpec) -> tuple[float, float]:
    """Variance-ratio interval on which D_alpha(N(0,1) || N(0,x)) <= P.

    Found with Brent's method on the divergence on either side of x = 1.
    When the budget is at the supremum (alpha in (0, 1)) every ratio is
    admissible and ``(0, inf)`` is returned.
    """
    alpha = as_alpha(a)
    if P == 0:
        return 1.0, 1.0
    if 0 < alpha < 1 and P >= perception_sup(alpha):
        return 0.0, math.inf

    def phi(x):
        return float(_divergence_ratio_array(np.array([x]), alpha)[0]) - P

    if alpha > 1:
        left_edge, right_edge = (alpha - 1.0) / alpha, math.inf
    elif alpha < 0:
        left_edge, right_edge = 0.0, (alpha - 1.0) / alpha
    else:
        left_edge, right_edge = 0.0, math.inf
    return _crossing(phi, left_edge), _crossing(phi, right_edge)


def _grid_round(s2, D, P, alpha, x_lo, x_hi, t_lo, t_hi, spec):
    x = np.linspace(x_lo, x_hi, spec.rho2_points)
    t = np.linspace(t_lo, t_hi, spec.theta_points)
    div = _divergence_ratio_array(x, alpha)
    rho2 = s2 * x
    theta = t[None, :] * np.sqrt(s2 * rho2)[:, None]
    dist = s2 + rho2[:, None] - 2.0 * theta
    feasible = (dist <= D * (1 + 1e-12)) & (div[:, None] <= P + 1e-12)
    # t = 1 has infinite rate; a large finite surrogate keeps it rankable.
    rate_t = -0.5 * np.log(np.maximum(1.0 - t * t, 1e-300))
    rate = np.where(feasible, rate_t[None, :], np.inf)
    return x, t, div, rate, rate_t


def brute_force_rdpf(q: RdpfQuery, spec: GridSearchSpec = GridSearchSpec()) -> RdpfSolution:
    """Minimise the mutual information over a refined (rho^2, theta) grid.

    theta is parametrised as t sigma rho with t in [0, 1]. Each refinement
    keeps every rho^2 column whose best feasible rate is within one theta
    step of the incumbent, so a coarse grid cannot lock onto the wrong part
    of the distortion boundary. The reported regime is read off the
    incumbent: zero rate means PerceptionOnly, a slack perception constraint
    DistortionOnly, otherwise BothActive.

    Raises:
        Infeasible: no grid point meets both budgets.
    """
    s2, D, P, alpha = q.sigma2, q.D, q.P, q.alpha
    if math.isinf(P):
        rho2 = max(s2 - D, 0.0)
        return RdpfSolution(classical_rd(s2, D), rho2, rho2, Regime.DISTORTION_ONLY)

    lo, hi = perception_window(P, alpha)
    # t <= 1 needs (sigma - rho)^2 <= D; theta = 0 needs rho^2 <= D - sigma^2. Both bound rho.
    hi = min(hi, (1.0 + math.sqrt(D / s2)) ** 2)
    lo = max(lo, 1e-300)
    if lo > hi:
        raise Infeasible("perception window and distortion budget do not intersect")
    # The window edges are the perception boundary itself; the 1e-12 slack in
    # the feasibility test keeps them on the feasible side.
    x_lo, x_hi = lo, hi
    t_lo, t_hi = 0.0, 1.0
    best = None
    for _ in range(spec.rounds):
        x, t, div, rate, rate_t = _grid_round(s2, D, P, alpha, x_lo, x_hi, t_lo, t_hi, spec)
        if not np.isfinite(rate).any():  # nothing feasible
            if best is None:
                raise Infeasible(f"no feasible grid point for {q}")
            break
        i, j = np.unravel_index(np.argmin(rate), rate.shape)
        if best is None or rate[i, j] <= best[0]:
            best = (float(rate[i, j]), float(x[i]), float(t[j]), float(div[i]))
        step = rate_t[min(j + 1, len(t) - 1)] - rate_t[max(j - 1, 0)]
        per_x = rate.min(axis=1)
        keep = np.flatnonzero(per_x <= rate[i, j] + step + 1e-15)
        t_keep = t[np.argmin(rate[keep], axis=1)]
        dx = x[1] - x[0]
        dt = t[1] - t[0]
        x_lo, x_hi = max(x[keep[0]] - dx, lo), min(x[keep[-1]] + dx, hi)
        t_lo, t_hi = max(t_keep.min() - 2 * dt, 0.0), min(t_keep.max() + dt, 1.0)

    rate, x, t, div = best
    rho2 = s2 * x
    theta = t * math.sqrt(s2 * rho2)
    if t >= 1.0:
        rate = math.inf
    if rate <= 1e-12:
        regime = Regime.PERCEPTION_ONLY
    elif div < P - 1e-4 * max(P, 1e-2):
        regime = Regime.DISTORTION_ONLY
    else:
        regime = Regime.BOTH_ACTIVE
    return RdpfSolution(rate, rho2, theta, regime)


def kl_rdpf_rate(sigma2: float, D: float, P: float) -> float:
    """JG-RDPF rate under the perception constraint KL(N(0,s^2) || N(0,rho^2)) <= P.

    The smallest admissible rho^2 below sigma^2 is found by bisection on
    ``kl_gaussian``; the rate then follows from minimising the correlation
    (sigma^2 + rho^2 - D) / (2 sigma rho) over the admissible rho.
    """
    if math.isinf(P):
        return classical_rd(sigma2, D)
    p = GaussianParams(0.0, sigma2)

    def excess(rho2):
        return kl_gaussian(p, GaussianParams(0.0, rho2)) - P

    if P == 0:
        rho2_min = sigma2
    else:
        lo = sigma2
        while excess(lo) <= 0:
            lo *= 0.5
        rho2_min = optimize.bisect(excess, lo, sigma2, xtol=1e-15 * sigma2, maxiter=400)
    if D < sigma2 and sigma2 - D >= rho2_min:
        return classical_rd(sigma2, D)
    theta = 0.5 * (sigma2 + rho2_min - D)
    if theta <= 0:
        return 0.0
    return -0.5 * math.log1p(-theta * theta / (sigma2 * rho2_min))
