import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from jgrdpf.estimator import GaussianRDPF, check_alpha, check_queries, check_source
from jgrdpf.exceptions import DomainError, RangeError
from jgrdpf.solver import RdpfQuery, jg_rdpf

QUERIES = np.array([[0.3, 0.2], [0.3, 0.01], [1.6, 0.2], [0.25, np.inf]])


def test_predict_matches_solver():
    est = GaussianRDPF(alpha=2.0, sigma2=1.0).fit()
    want = [jg_rdpf(RdpfQuery(1.0, D, P, 2.0)).rate for D, P in QUERIES]
    np.testing.assert_allclose(est.predict(QUERIES), want, rtol=0, atol=1e-15)
    bits = GaussianRDPF(alpha=2.0, sigma2=1.0, bits=True).fit()
    np.testing.assert_allclose(bits.predict(QUERIES), np.array(want) / math.log(2), atol=1e-15)


def test_transform_shape():
    out = GaussianRDPF(alpha=2.0, sigma2=1.0).fit().transform(QUERIES)
    assert out.shape == (4, 3)
    assert out[2, 0] == 0.0 and out[2, 2] == 0.0


def test_fit_estimates_variance():
    x = np.random.default_rng(0).normal(3.0, 2.0, size=4000)
    est = GaussianRDPF(alpha=0.5).fit(x)
    assert est.sigma2_ == pytest.approx(x.var())
    assert est.mean_ == pytest.approx(x.mean())
    est2 = GaussianRDPF(alpha=0.5).fit(x.reshape(-1, 1))
    assert est2.sigma2_ == est.sigma2_


def test_params_and_clone():
    est = GaussianRDPF(alpha=-1.2, sigma2=2.0, bits=True)
    assert est.get_params() == {"alpha": -1.2, "sigma2": 2.0, "bits": True, "tol": est.tol}
    c = clone(est).set_params(alpha=3.0)
    assert c.alpha == 3.0 and est.alpha == -1.2
    assert not hasattr(c, "sigma2_")


def test_not_fitted():
    with pytest.raises(NotFittedError):
        GaussianRDPF().predict(QUERIES)


def test_fit_errors():
    with pytest.raises(ValueError):
        GaussianRDPF().fit()
    with pytest.raises(DomainError):
        GaussianRDPF(alpha=1.0, sigma2=1.0).fit()
    with pytest.raises(DomainError):
        GaussianRDPF(sigma2=0.0).fit()
    with pytest.raises(DomainError):
        GaussianRDPF().fit(np.ones(10))


def test_validation_helpers():
    assert check_alpha(2) == 2.0
    for bad in (0, 1, np.nan, "x"):
        with pytest.raises(DomainError):
            check_alpha(bad)
    assert check_source([1.0, 2.0, 3.0]).shape == (3,)
    with pytest.raises(ValueError):
        check_source(np.ones((5, 2)))
    with pytest.raises(ValueError):
        check_queries(np.ones((3, 3)))
    with pytest.raises(DomainError):
        check_queries([[0.0, 0.1]])
    with pytest.raises(DomainError):
        check_queries([[0.3, -0.1]])
    with pytest.raises(DomainError):
        check_queries([[0.3, np.nan]])
    with pytest.raises(RangeError):
        check_queries([[0.3, 5.0]], alpha=0.5)
    assert check_queries([[0.3, np.inf]], alpha=0.5).shape == (1, 2)
