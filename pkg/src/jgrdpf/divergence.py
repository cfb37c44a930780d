"""Closed-form alpha-divergence between two scalar Gaussians.

The convention throughout is

    D_alpha(p || q) = (int p^alpha q^(1 - alpha) dx - 1) / (alpha (alpha - 1)),

defined for alpha outside {0, 1}. The alpha -> 1 and alpha -> 0 limits are
the forward and reverse KL divergences, available through :func:`kl_gaussian`.
All logarithms are natural.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import DomainError


@dataclass(frozen=True)
class GaussianParams:
    """Scalar Gaussian N(mean, variance)."""

    mean: float
    variance: float

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.variance)):
            raise DomainError(f"non-finite Gaussian parameters {self!r}")
        if self.variance <= 0:
            raise DomainError(f"variance must be positive, got {self.variance}")


@dataclass(frozen=True)
class AlphaSpec:
    """Order of the alpha-divergence. 0 and 1 are excluded (KL limits)."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a):
            raise DomainError(f"alpha must be finite, got {a}")
        if a == 0.0 or a == 1.0:
            raise DomainError("alpha must not be 0 or 1; use kl_gaussian for the limits")
        object.__setattr__(self, "alpha", a)

    def __float__(self):
        return self.alpha

    @property
    def interpolating(self) -> bool:
        """True for alpha in (0, 1), where the divergence is bounded."""
        return 0.0 < self.alpha < 1.0


def as_alpha(a: float | AlphaSpec) -> float:
    """Validate ``a`` and return it as a plain float."""
    if isinstance(a, AlphaSpec):
        return a.alpha
    return AlphaSpec(a).alpha


@dataclass(frozen=True)
class DivergenceValue:
    """Divergence together with the Hellinger-type integral it was built from.

    Attributes:
        value: D_alpha(p || q), nonnegative.
        h_alpha: int p^alpha q^(1 - alpha) dx, positive.
    """

    value: float
    h_alpha: float

    def __float__(self):
        return self.value


def validity_margin(p: GaussianParams, q: GaussianParams, a: float | AlphaSpec) -> float:
    """Return ``alpha * var(q) + (1 - alpha) * var(p)``.

    The alpha-divergence integral between the two Gaussians converges iff the
    margin is strictly positive.
    """
    alpha = as_alpha(a)
    return alpha * q.variance + (1.0 - alpha) * p.variance


def _log_h(alpha: float, ratio: float, margin_ratio: float, gap2_over_var: float) -> float:
    # ratio = var(q)/var(p), margin_ratio = margin/var(p), gap2_over_var = (mu-nu)^2/var(p)
    return (
        0.5 * alpha * math.log(ratio)
        - 0.5 * math.log(margin_ratio)
        - alpha * (1.0 - alpha) * gap2_over_var / (2.0 * margin_ratio)
    )


def alpha_divergence(
    p: GaussianParams, q: GaussianParams, a: float | AlphaSpec
) -> DivergenceValue:
    """Closed-form D_alpha(p || q) for p = N(mu, sigma^2), q = N(nu, rho^2).

    Uses

        H = rho^alpha sigma^(1-alpha) / sqrt(m) * exp(-alpha (1-alpha) (mu-nu)^2 / (2 m)),
        m = alpha rho^2 + (1 - alpha) sigma^2,
        D = (1 - H) / (alpha (1 - alpha)).

    ``1 - H`` is formed with ``expm1`` so that orders close to 0 or 1 do not
    lose the leading digits.

    Raises:
        DomainError: if the validity margin is not positive (divergent integral).
    """
    alpha = as_alpha(a)
    ratio = q.variance / p.variance
    # 1 + alpha (ratio - 1) is exactly 1 when the variances coincide.
    margin_ratio = 1.0 + alpha * (ratio - 1.0)
    if not margin_ratio > 0:
        raise DomainError(
            f"alpha-divergence diverges: margin {margin_ratio * p.variance:.6g} <= 0 "
            f"(alpha={alpha}, var_p={p.variance}, var_q={q.variance})"
        )
    gap = p.mean - q.mean
    log_h = _log_h(alpha, ratio, margin_ratio, gap * gap / p.variance)
    one_minus_h = -math.expm1(log_h)
    value = one_minus_h / (alpha * (1.0 - alpha))
    # Round-off can produce -1e-17 for identical inputs.
    return DivergenceValue(value=max(value, 0.0), h_alpha=math.exp(log_h))


def alpha_divergence_ratio(ratio: float, a: float | AlphaSpec) -> float:
    """D_alpha(N(0, 1) || N(0, ratio)), or ``inf`` outside the validity domain.

    Zero-mean helper used by the solver: the divergence only depends on the
    variance ratio there. ``ratio == 0`` is handled as the limit rho -> 0.
    """
    alpha = as_alpha(a)
    if ratio == 0.0:
        return perception_sup(alpha)
    if ratio < 0 or not math.isfinite(ratio):
        raise DomainError(f"variance ratio must be positive and finite, got {ratio}")
    margin_ratio = 1.0 + alpha * (ratio - 1.0)
    if not margin_ratio > 0:
        return math.inf
    log_h = 0.5 * alpha * math.log(ratio) - 0.5 * math.log(margin_ratio)
    return max(-math.expm1(log_h) / (alpha * (1.0 - alpha)), 0.0)


def kl_gaussian(p: GaussianParams, q: GaussianParams) -> float:
    """KL(p || q) = 1/2 (s^2/r^2 + (mu - nu)^2 / r^2 - 1 + ln(r^2 / s^2))."""
    ratio = p.variance / q.variance
    gap = p.mean - q.mean
    return 0.5 * (ratio - 1.0 - math.log(ratio) + gap * gap / q.variance)


def perception_sup(a: float | AlphaSpec) -> float:
    """Supremum of D_alpha over Gaussian pairs.

    Finite only for alpha in (0, 1), where H >= 0 caps the divergence at
    1 / (alpha (1 - alpha)). This is how the upper end of the admissible
    perception range is interpreted.
    """
    alpha = as_alpha(a)
    if 0.0 < alpha < 1.0:
        return 1.0 / (alpha * (1.0 - alpha))
    return math.inf
