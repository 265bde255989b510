import numpy as np
import pytest

from portes.errors import CovarianceSingular
from portes.innovations import InnovDist, InnovationSource


def test_gaussian_covariance():
    sigma = np.array([[1.0, 0.5], [0.5, 2.0]])
    x = InnovationSource("gaussian", sigma=sigma).draw(40000, np.random.default_rng(1))
    np.testing.assert_allclose(np.cov(x, rowvar=False), sigma, atol=0.05)


def test_t_rescaled_to_sigma():
    sigma = np.array([[2.0]])
    x = InnovationSource("t", sigma=sigma, dft=6).draw(100000, np.random.default_rng(2))
    assert abs(x.var() / 2.0 - 1) < 0.05


def test_t_requires_integer_dft():
    with pytest.raises(ValueError):
        InnovationSource("t", dft=2.5)


def test_from_data_singular():
    x = np.random.default_rng(3).standard_normal(50)
    with pytest.raises(CovarianceSingular):
        InnovationSource.from_data("gaussian", np.column_stack([x, -x]))


def test_from_data_kinds():
    z = np.random.default_rng(4).standard_normal((200, 2))
    assert InnovationSource.from_data("bootstrap", z).k == 2
    assert InnovationSource.from_data("stable", z).stable.k == 2
    np.testing.assert_allclose(InnovationSource.from_data("gaussian", z).sigma, np.cov(z, rowvar=False))


def test_parse():
    assert InnovDist.parse("Gaussian") is InnovDist.GAUSSIAN
    with pytest.raises(ValueError):
        InnovDist.parse("laplace")
