"""Reduced exponential polynomial behind the perception equality.

For p = N(0, sigma^2), q = N(0, rho^2) and x = rho^2 / sigma^2, the equality
D_alpha(p || q) = P is equivalent to f(x) = 0 with

    f(x) = x^alpha - alpha C x - (1 - alpha) C,    C = (1 - alpha (1 - alpha) P)^2.

f has a single stationary point x0 = C^(1/(alpha-1)); it is convex for
alpha outside [0, 1] and concave inside, so for P > 0 it has exactly one root
on each side of x0. The lower root sits in [0, x0] and the upper one between
x0 and the zero of a tangent line drawn slightly to the right of x0; both
intervals are handed to plain bisection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .divergence import AlphaSpec, alpha_divergence_ratio, as_alpha, perception_sup
from .exceptions import (
    DegenerateError,
    DomainError,
    NoSignChange,
    RangeError,
    SpuriousRoot,
    TangentError,
)

DEFAULT_TOL = 1e-10
BACKSUB_TOL = 1e-6
MAX_EPS_DOUBLINGS = 60
MAX_FLOOR_SHRINKS = 300


@dataclass(frozen=True)
class PolynomialInstance:
    alpha: float
    C: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        if not (self.C >= 0 and math.isfinite(self.C)):
            raise DomainError(f"C must be finite and nonnegative, got {self.C}")

    @classmethod
    def from_perception(cls, P: float, a: float | AlphaSpec) -> "PolynomialInstance":
        alpha = as_alpha(a)
        return cls(alpha, coefficient_c(P, alpha))

    @property
    def x0(self) -> float:
        """Stationary point, 0 when C = 0."""
        if self.C == 0:
            return 0.0
        return stationary_point(self)


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty bracket [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class RootPair:
    """Both roots of f in variance-ratio space.

    ``lower``/``upper`` are the bisection brackets and ``x0`` the stationary
    point; they are ``None`` when the pair was obtained analytically.
    """

    r0: float
    r1: float
    residual0: float = 0.0
    residual1: float = 0.0
    lower: Bracket | None = None
    upper: Bracket | None = None
    x0: float | None = None

    @property
    def y0(self) -> float | None:
        return None if self.upper is None else self.upper.hi


def _check_perception(P: float, alpha: float) -> None:
    if math.isnan(P) or P < 0:
        raise DomainError(f"perception budget must be >= 0, got {P}")
    if not math.isfinite(P):
        raise DomainError("perception budget must be finite here")
    sup = perception_sup(alpha)
    if P > sup:
        raise RangeError(f"P={P} exceeds the largest attainable divergence {sup:.6g} for alpha={alpha}")


def coefficient_c(P: float, a: float | AlphaSpec) -> float:
    """C = (1 - alpha (1 - alpha) P)^2.

    Raises:
        RangeError: for alpha in (0, 1) and P above 1 / (alpha (1 - alpha)).
    """
    alpha = as_alpha(a)
    _check_perception(P, alpha)
    base = 1.0 - alpha * (1.0 - alpha) * P
    # P == perception_sup up to rounding: snap to the degenerate polynomial.
    if abs(base) <= 4 * 2.220446049250313e-16:
        return 0.0
    return base * base


def eval_f(x: float, inst: PolynomialInstance) -> float:
    a, C = inst.alpha, inst.C
    if x < 0:
        raise DomainError(f"f is defined for x >= 0, got {x}")
    if x == 0:
        if a < 0:
            raise DomainError("f is unbounded at x = 0 for negative alpha")
        return -(1.0 - a) * C
    return x**a - C * (a * x + (1.0 - a))


def eval_f1(x: float, inst: PolynomialInstance) -> float:
    """f'(x) = alpha (x^(alpha-1) - C)."""
    a = inst.alpha
    if x < 0 or (x == 0 and a < 1):
        raise DomainError(f"f' undefined at x={x} for alpha={a}")
    return a * (x ** (a - 1.0) - inst.C)


def eval_f2(x: float, inst: PolynomialInstance) -> float:
    """f''(x) = alpha (alpha - 1) x^(alpha-2); positive iff alpha is outside [0, 1]."""
    a = inst.alpha
    if x < 0 or (x == 0 and a < 2):
        raise DomainError(f"f'' undefined at x={x} for alpha={a}")
    return a * (a - 1.0) * x ** (a - 2.0)


def stationary_point(inst: PolynomialInstance) -> float:
    """x0 = C^(1/(alpha-1)): global minimum for convex f, global maximum for concave f.

    Raises:
        DegenerateError: if C = 0 (then 0 is the unique root).
    """
    if inst.C == 0:
        raise DegenerateError("C = 0: x0 = 0 is the unique root of f")
    return inst.C ** (1.0 / (inst.alpha - 1.0))


def _sign(v: float) -> int:
    v = float(v)
    return (v > 0) - (v < 0)


def brackets(inst: PolynomialInstance, eps: float | None = None) -> tuple[Bracket, Bracket]:
    """Return the brackets ``([0, x0], [x0, y0])`` isolating the two roots.

    For negative alpha f blows up at 0, so the lower end is a positive floor,
    shrunk by factors of 10 until f(floor) has the opposite sign of f(x0).
    ``y0`` is the zero of the tangent to f at ``x0 + eps``; ``eps`` starts at
    ``max(1e-6, 1e-6 x0)`` unless given and is doubled until the tangent zero
    lies right of x0 with a verified sign change.

    Raises:
        TangentError: f(x0) = 0, i.e. a double root (P = 0).
        NoSignChange: no verified bracket after the allowed doublings.
    """
    x0 = stationary_point(inst)
    f0 = eval_f(x0, inst)
    if abs(f0) <= 1e-14 * max(inst.C, 1.0):
        raise TangentError(f"f(x0) = {f0:.3g} at x0 = {x0:.6g}: double root")
    s0 = _sign(f0)

    if inst.alpha < 0:
        lo = x0 / 10.0
        for _ in range(MAX_FLOOR_SHRINKS):
            if _sign(eval_f(lo, inst)) == -s0:
                break
            lo /= 10.0
        else:
            raise NoSignChange("no positive floor with a sign change below x0")
    else:
        lo = 0.0
        if _sign(eval_f(lo, inst)) != -s0:
            raise NoSignChange("f(0) and f(x0) share a sign")
    lower = Bracket(lo, x0)

    if eps is None:
        eps = max(1e-6, 1e-6 * x0)
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    for _ in range(MAX_EPS_DOUBLINGS + 1):
        t = x0 + eps
        ft = eval_f(t, inst)
        slope = eval_f1(t, inst)
        if ft != 0 and slope != 0:
            y0 = t - ft / slope
            if math.isfinite(y0) and y0 > x0 and _sign(eval_f(y0, inst)) != s0:
                return lower, Bracket(x0, y0)
        eps *= 2.0
    raise NoSignChange(f"tangent bound failed to bracket the upper root (alpha={inst.alpha}, C={inst.C})")


def bisect(inst: PolynomialInstance, b: Bracket, tol: float = DEFAULT_TOL) -> float:
    """Bisect f on ``b`` until the bracket is narrower than ``tol``.

    The stopping width is also scaled by the midpoint when it is below 1 so
    that very small roots keep relative accuracy. Stops early if the midpoint
    can no longer be separated from an endpoint in floating point.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    lo, hi = b.lo, b.hi
    flo, fhi = eval_f(lo, inst), eval_f(hi, inst)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if _sign(flo) == _sign(fhi):
        raise NoSignChange(f"f({lo})={flo:.3g} and f({hi})={fhi:.3g} share a sign")
    slo = _sign(flo)
    while True:
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol * min(1.0, mid) or not lo < mid < hi:
            return mid
        fm = eval_f(mid, inst)
        if fm == 0:
            return mid
        if _sign(fm) == slo:
            lo = mid
        else:
            hi = mid


def solve_roots(
    P: float,
    a: float | AlphaSpec,
    tol: float = DEFAULT_TOL,
    backsub_tol: float = BACKSUB_TOL,
) -> RootPair:
    """Roots r0 <= r1 of f for the perception budget ``P``.

    P = 0 (or a P so small that f(x0) rounds to zero) returns the double
    root 1 and C = 0 (P at the supremum for alpha in
    (0, 1)) returns 0 twice, both without iterating. Otherwise every root is
    checked by plugging rho^2 = r sigma^2 back into the divergence.

    Raises:
        RangeError: P above the supremum.
        SpuriousRoot: a root whose divergence misses P by more than ``backsub_tol``.
    """
    alpha = as_alpha(a)
    C = coefficient_c(P, alpha)
    if P == 0:
        return RootPair(1.0, 1.0, x0=1.0)
    if C == 0:
        return RootPair(0.0, 0.0, x0=0.0)
    inst = PolynomialInstance(alpha, C)
    try:
        lower, upper = brackets(inst)
    except TangentError:
        # P so small that f(x0) rounds to zero; the roots are 1 +/- O(sqrt(P)).
        if not alpha_divergence_ratio(1.0, alpha) <= P + backsub_tol:
            raise
        return RootPair(1.0, 1.0, residual0=abs(eval_f(1.0, inst)), residual1=abs(eval_f(1.0, inst)), x0=1.0)
    r0 = bisect(inst, lower, tol)
    r1 = bisect(inst, upper, tol)
    for r in (r0, r1):
        d = alpha_divergence_ratio(r, alpha)
        if not abs(d - P) <= backsub_tol * max(1.0, P):
            raise SpuriousRoot(f"root {r:.12g} gives D={d:.12g}, expected P={P} (alpha={alpha})")
    return RootPair(
        r0,
        r1,
        residual0=abs(eval_f(r0, inst)),
        residual1=abs(eval_f(r1, inst)),
        lower=lower,
        upper=upper,
        x0=lower.hi,
    )


def pearson_roots(P: float) -> RootPair:
    """Closed-form roots for alpha = 2: (1 + 2P)(1 + 2P -/+ 2 sqrt(P + P^2)).

    The smaller root is written as (1 + 2P) / (1 + 2P + 2 sqrt(P + P^2)),
    which is the same number without the cancellation.
    """
    if math.isnan(P) or P < 0 or not math.isfinite(P):
        raise DomainError(f"perception budget must be finite and >= 0, got {P}")
    k = 1.0 + 2.0 * P
    s = 2.0 * math.sqrt(P + P * P)
    return RootPair(k / (k + s), k * (k + s))


def hellinger_roots(P: float) -> RootPair:
    """Closed-form roots for alpha = 1/2.

    f is a quadratic in u = sqrt(x): u^2 - (2/C) u + 1 = 0, so
    sqrt(x) = (1 -/+ sqrt(1 - C^2)) / C with C = (1 - P/4)^2.

    Raises:
        RangeError: for P > 4.
    """
    if math.isnan(P) or P < 0:
        raise DomainError(f"perception budget must be >= 0, got {P}")
    if P > 4.0:
        raise RangeError(f"Hellinger perception budget must be <= 4, got {P}")
    C = (1.0 - P / 4.0) ** 2
    if C == 0:
        return RootPair(0.0, 0.0)
    s = math.sqrt(1.0 - C * C)
    u0 = C / (1.0 + s)
    u1 = (1.0 + s) / C
    return RootPair(u0 * u0, u1 * u1)


def valid_ratio_domain(a: float | AlphaSpec) -> tuple[float, float]:
    """Open interval of ratios x with x > 0 and alpha x + 1 - alpha > 0."""
    alpha = as_alpha(a)
    edge = (alpha - 1.0) / alpha
    if alpha > 1:
        return edge, math.inf
    if alpha < 0:
        return 0.0, edge
    return 0.0, math.inf


def trace(inst: PolynomialInstance, n: int = 200, x_max: float | None = None) -> list[tuple[float, float]]:
    """Sample (x, f(x)) at ``n`` interior points of the valid ratio domain.

    Unbounded domains are cut at ``x_max``, ``max(2, 2 x0)`` by default.
    """
    if n < 2:
        raise ValueError("need at least two trace points")
    lo, hi = valid_ratio_domain(inst.alpha)
    if math.isinf(hi):
        hi = x_max if x_max is not None else max(2.0, 2.0 * inst.x0)
    step = (hi - lo) / (n + 1)
    xs = [lo + step * (k + 1) for k in range(n)]
    return [(x, eval_f(x, inst)) for x in xs]


def sign_changes(values) -> int:
    signs = [_sign(v) for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)
