"""scikit-learn style front end.

:class:`GaussianRDPF` learns the source variance from samples in ``fit`` and
maps rows of ``(D, P)`` budgets to rates in ``predict``. It follows the
estimator conventions (constructor stores hyper-parameters verbatim, fitted
attributes carry a trailing underscore), so it can be cloned, grid-searched
and dropped into pipelines.
"""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .divergence import AlphaSpec, perception_sup
from .exceptions import DomainError, RangeError
from .solver import SOLVER_TOL, RdpfQuery, RdpfSolution, jg_rdpf

LN2 = math.log(2.0)


def check_alpha(alpha) -> float:
    """Return ``alpha`` as a float, rejecting 0, 1 and non-finite values."""
    try:
        return AlphaSpec(float(alpha)).alpha
    except (TypeError, ValueError) as exc:
        raise DomainError(f"invalid alpha {alpha!r}: {exc}") from exc


def check_source(X) -> np.ndarray:
    """Flatten source samples of shape (n,) or (n, 1) into a 1-D float array."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    X = check_array(X, ensure_min_samples=2)
    if X.shape[1] != 1:
        raise ValueError(f"expected a scalar source, got {X.shape[1]} features")
    return X[:, 0]


def check_queries(X, alpha: float | None = None) -> np.ndarray:
    """Validate a (n, 2) array of ``(D, P)`` rows; P may be ``inf``.

    With ``alpha`` given, P is also checked against the perception supremum.
    """
    X = check_array(X, dtype=float, ensure_all_finite=False)
    if X.shape[1] != 2:
        raise ValueError(f"expected columns (D, P), got {X.shape[1]} columns")
    D, P = X[:, 0], X[:, 1]
    if np.isnan(X).any():
        raise DomainError("NaN in query array")
    if not (np.isfinite(D).all() and (D > 0).all()):
        raise DomainError("distortion budgets must be positive and finite")
    if (P < 0).any():
        raise DomainError("perception budgets must be nonnegative")
    if alpha is not None and ((P > perception_sup(alpha)) & np.isfinite(P)).any():
        raise RangeError(f"perception budget above {perception_sup(alpha):.6g} for alpha={alpha}")
    return X


class GaussianRDPF(BaseEstimator):
    """Jointly Gaussian rate-distortion-perception function.

    Parameters
    ----------
    alpha : float
        Order of the alpha-divergence perception measure (not 0 or 1).
    sigma2 : float or None
        Source variance. If None, ``fit`` estimates it from samples.
    bits : bool
        Report rates in bits instead of nats.
    tol : float
        Bisection bracket width for the perception roots.
    """

    def __init__(self, alpha=2.0, sigma2=None, bits=False, tol=SOLVER_TOL):
        self.alpha = alpha
        self.sigma2 = sigma2
        self.bits = bits
        self.tol = tol

    def fit(self, X=None, y=None):
        """Estimate the source variance from samples ``X`` (ignored if ``sigma2`` is set)."""
        self.alpha_ = check_alpha(self.alpha)
        if self.sigma2 is not None:
            sigma2 = float(self.sigma2)
            mean = 0.0 if X is None else float(np.mean(check_source(X)))
        else:
            if X is None:
                raise ValueError("fit needs source samples when sigma2 is None")
            x = check_source(X)
            mean, sigma2 = float(x.mean()), float(x.var())
        if not (sigma2 > 0 and math.isfinite(sigma2)):
            raise DomainError(f"source variance must be positive, got {sigma2}")
        self.sigma2_ = sigma2
        self.mean_ = mean
        return self

    def solve(self, X) -> list[RdpfSolution]:
        check_is_fitted(self, "sigma2_")
        X = check_queries(X, self.alpha_)
        return [jg_rdpf(RdpfQuery(self.sigma2_, D, P, self.alpha_), tol=self.tol) for D, P in X]

    def predict(self, X) -> np.ndarray:
        """Rates for each ``(D, P)`` row."""
        rates = np.array([s.rate for s in self.solve(X)], dtype=float)
        return rates / LN2 if self.bits else rates

    def transform(self, X) -> np.ndarray:
        """``(rate, rho2, theta)`` per row."""
        sols = self.solve(X)
        out = np.array([[s.rate, s.rho2, s.theta] for s in sols], dtype=float).reshape(-1, 3)
        if self.bits:
            out[:, 0] /= LN2
        return out
