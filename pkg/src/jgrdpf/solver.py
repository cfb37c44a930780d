"""Parametric jointly Gaussian RDPF for a scalar Gaussian source.

Within the jointly Gaussian family the problem reduces to choosing the
reconstruction variance rho^2 and the covariance theta = E[X Xhat]:

    rate        I = 1/2 ln(rho^2 sigma^2 / (rho^2 sigma^2 - theta^2))
    distortion  E[(X - Xhat)^2] = sigma^2 + rho^2 - 2 theta <= D
    perception  D_alpha(N(0, sigma^2) || N(0, rho^2)) <= P

The perception set in ratio space is [r0, r1] (roots of the reduced
polynomial), so one of three regimes applies:

* DistortionOnly: the classical reconstruction rho^2 = sigma^2 - D already
  meets the perception budget.
* PerceptionOnly: theta = 0 is feasible with rho^2 = sigma^2 r0, rate 0.
* BothActive: both constraints hold with equality at rho^2 = sigma^2 r0 and
  theta = (sigma^2 + rho^2 - D) / 2.

Rates are in nats.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .divergence import AlphaSpec, alpha_divergence_ratio, as_alpha, perception_sup
from .exceptions import DomainError, Infeasible
from .polynomial import RootPair, solve_roots

# Bracket width used by the solver; tighter than the polynomial default so that
# rate curves stay monotone to ~1e-12 across regime boundaries.
SOLVER_TOL = 1e-13


class Regime(str, enum.Enum):
    DISTORTION_ONLY = "DistortionOnly"
    PERCEPTION_ONLY = "PerceptionOnly"
    BOTH_ACTIVE = "BothActive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RdpfQuery:
    sigma2: float
    D: float
    P: float
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        if not (self.sigma2 > 0 and math.isfinite(self.sigma2)):
            raise DomainError(f"sigma2 must be positive and finite, got {self.sigma2}")
        if not (self.D > 0 and math.isfinite(self.D)):
            raise DomainError(f"D must be positive and finite, got {self.D}")
        if math.isnan(self.P) or self.P < 0:
            raise DomainError(f"P must be >= 0, got {self.P}")


@dataclass(frozen=True)
class RdpfSolution:
    rate: float
    rho2: float
    theta: float
    regime: Regime

    def distortion(self, sigma2: float) -> float:
        return sigma2 + self.rho2 - 2.0 * self.theta


def classical_rd(sigma2: float, D: float) -> float:
    """Gaussian rate-distortion function max(1/2 ln(sigma^2 / D), 0) in nats."""
    if not (sigma2 > 0 and D > 0):
        raise DomainError(f"sigma2 and D must be positive, got {sigma2}, {D}")
    if D >= sigma2:
        return 0.0
    return 0.5 * math.log(sigma2 / D)


def g_boundary(D: float, sigma2: float, a: float | AlphaSpec) -> float:
    """Divergence of the classical RD reconstruction N(0, |sigma^2 - D|).

    A perception budget above this value leaves the perception constraint
    slack. Returns ``inf`` where the divergence integral does not converge;
    at D = sigma^2 the reconstruction degenerates and the rho -> 0 limit is
    used.
    """
    alpha = as_alpha(a)
    if not (D > 0 and sigma2 > 0):
        raise DomainError(f"sigma2 and D must be positive, got {sigma2}, {D}")
    return alpha_divergence_ratio(abs(sigma2 - D) / sigma2, alpha)


def _mutual_information(sigma2: float, rho2: float, theta: float) -> float:
    prod = sigma2 * rho2
    if theta * theta >= prod:
        return math.inf
    return -0.5 * math.log1p(-theta * theta / prod)


def classify(q: RdpfQuery, roots: RootPair | None) -> Regime:
    """Active-constraint regime of ``q``; ``roots`` may be None when P is infinite."""
    if math.isinf(q.P):
        return Regime.DISTORTION_ONLY
    if q.D < q.sigma2 and g_boundary(q.D, q.sigma2, q.alpha) < q.P:
        return Regime.DISTORTION_ONLY
    if q.D >= q.sigma2 * (1.0 + roots.r0):
        return Regime.PERCEPTION_ONLY
    return Regime.BOTH_ACTIVE


def _solve(q: RdpfQuery, tol: float) -> tuple[RdpfSolution, RootPair | None]:
    if math.isinf(q.P):
        rho2 = max(q.sigma2 - q.D, 0.0)
        return RdpfSolution(classical_rd(q.sigma2, q.D), rho2, rho2, Regime.DISTORTION_ONLY), None

    roots = solve_roots(q.P, q.alpha, tol=tol)
    regime = classify(q, roots)
    s2 = q.sigma2
    if regime is Regime.DISTORTION_ONLY:
        rho2 = s2 - q.D
        return RdpfSolution(classical_rd(s2, q.D), rho2, rho2, regime), roots
    if regime is Regime.PERCEPTION_ONLY:
        return RdpfSolution(0.0, s2 * roots.r0, 0.0, regime), roots

    # Smallest reconstruction variance first; the larger root is only a fallback.
    for r in sorted((roots.r0, roots.r1)):
        rho2 = s2 * r
        if not math.isfinite(alpha_divergence_ratio(r, q.alpha)):
            continue
        theta = 0.5 * (s2 + rho2 - q.D)
        if theta < 0:
            return RdpfSolution(0.0, rho2, 0.0, Regime.PERCEPTION_ONLY), roots
        if theta * theta <= s2 * rho2:
            return RdpfSolution(_mutual_information(s2, rho2, theta), rho2, theta, regime), roots
    raise Infeasible(
        f"no jointly Gaussian reconstruction meets D={q.D} at P={q.P} (alpha={q.alpha}, sigma2={s2})"
    )


def jg_rdpf(q: RdpfQuery, tol: float = SOLVER_TOL) -> RdpfSolution:
    """Solve the jointly Gaussian RDPF for one query.

    Raises:
        RangeError: P above the supremum of D_alpha (alpha in (0, 1)).
        Infeasible: neither root admits |theta| <= sigma rho.
    """
    return _solve(q, tol)[0]


def rdpf(sigma2: float, D: float, P: float, alpha: float, tol: float = SOLVER_TOL) -> RdpfSolution:
    """Convenience wrapper around :func:`jg_rdpf`."""
    return jg_rdpf(RdpfQuery(sigma2, D, P, alpha), tol=tol)


def min_distortion_at_perception(sigma2: float, P: float, a: float | AlphaSpec) -> float:
    """Smallest D for which the perception equality still admits theta <= sigma rho.

    That is min over the roots of (sigma - sigma sqrt(r))^2; below it the
    closed form would need a correlation above one.
    """
    alpha = as_alpha(a)
    if math.isinf(P) or P >= perception_sup(alpha):
        return 0.0
    roots = solve_roots(P, alpha)
    return min(sigma2 * (1.0 - math.sqrt(r)) ** 2 for r in (roots.r0, roots.r1))
