"""Portmanteau statistics, squared-residual transform and generalized Durbin-Watson.

Every statistic takes residuals ``e`` (``n`` values or an ``n x k`` matrix),
a lag ``m`` and a seasonal period ``s``; lag ``l`` is replaced by ``l*s``
throughout, including the ``(n - l*s)`` finite-sample weights.

After standardization ``R_0`` is the identity, so the quadratic form
``r_l' (R_0^-1 kron R_0^-1) r_l`` reduces to the squared Frobenius norm of
``R_l``.
"""
from __future__ import annotations

from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .acf import LagCorrelationSet, as_series, block_toeplitz, standardized_corr
from .errors import NonPositiveDeterminant, ZeroDenominator
from .linalg import lu_logdet


class Method(str, Enum):
    BOX_PIERCE = "BoxPierce"
    LJUNG_BOX = "LjungBox"
    HOSKING = "Hosking"
    LI_MCLEOD = "LiMcLeod"
    MAHDI_MCLEOD = "MahdiMcLeod"
    DURBIN_WATSON = "DurbinWatson"
    CUSTOM = "Custom"

    @classmethod
    def parse(cls, value) -> "Method":
        """Accept enum members, canonical names, or dashed/underscored spellings."""
        if isinstance(value, cls):
            return value
        key = str(value).replace("-", "").replace("_", "").replace(" ", "").lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        if key == "other":
            return cls.CUSTOM
        raise ValueError(f"unknown test method {value!r}")


PORTMANTEAU_METHODS = (
    Method.BOX_PIERCE,
    Method.LJUNG_BOX,
    Method.HOSKING,
    Method.LI_MCLEOD,
    Method.MAHDI_MCLEOD,
)


def squared_transform(e) -> np.ndarray:
    """Square every residual (McLeod-Li transform); shape is preserved."""
    x = np.asarray(e, dtype=float)
    return x * x


def _frob2(cs: LagCorrelationSet, m: int) -> np.ndarray:
    return np.array([np.sum(r * r) for r in cs.corr[:m]])


def _weights(n: int, m: int, s: int) -> np.ndarray:
    return 1.0 / (n - s * np.arange(1, m + 1))


def _from_set(cs: LagCorrelationSet, m: int, method: Method) -> float:
    n, s, k = cs.n, cs.season, cs.k
    if method is Method.MAHDI_MCLEOD:
        logdet, sign = lu_logdet(block_toeplitz(cs, m))
        if sign <= 0:
            raise NonPositiveDeterminant(
                f"block-Toeplitz correlation matrix at lag {m} has non-positive determinant"
            )
        return -3.0 * n / (2 * m + 1) * logdet
    q = _frob2(cs, m)
    if method is Method.BOX_PIERCE:
        return n * float(np.sum(q))
    if method is Method.LJUNG_BOX:
        return n * (n + 2) * float(np.sum(q * _weights(n, m, s)))
    if method is Method.HOSKING:
        return n * n * float(np.sum(q * _weights(n, m, s)))
    if method is Method.LI_MCLEOD:
        return n * float(np.sum(q)) + k * k * m * (m + 1) / (2.0 * n)
    raise ValueError(f"{method} is not a portmanteau statistic")


def box_pierce(e, m: int, s: int = 1) -> float:
    return _from_set(standardized_corr(e, m, s), m, Method.BOX_PIERCE)


def ljung_box(e, m: int, s: int = 1) -> float:
    return _from_set(standardized_corr(e, m, s), m, Method.LJUNG_BOX)


def hosking(e, m: int, s: int = 1) -> float:
    return _from_set(standardized_corr(e, m, s), m, Method.HOSKING)


def li_mcleod(e, m: int, s: int = 1) -> float:
    return _from_set(standardized_corr(e, m, s), m, Method.LI_MCLEOD)


def mahdi_mcleod(e, m: int, s: int = 1) -> float:
    """Generalized variance statistic ``-3n/(2m+1) * log det R_m(s)``."""
    return _from_set(standardized_corr(e, m, s), m, Method.MAHDI_MCLEOD)


def durbin_watson(e, lag: int = 1) -> float:
    """Generalized Durbin-Watson ``sum (e_t - e_{t-lag})^2 / sum e_t^2`` for one series."""
    x = as_series(e, "residuals")
    if x.shape[1] != 1:
        raise ValueError("durbin_watson needs a single series")
    x = x[:, 0]
    if lag < 1 or lag >= x.size:
        raise ValueError(f"lag must be in [1, {x.size - 1}]")
    denom = float(x @ x)
    if denom == 0.0:
        raise ZeroDenominator("residual sum of squares is zero")
    d = x[lag:] - x[:-lag]
    return float(d @ d) / denom


def custom_statistic(e, lags: Sequence[int], fn: Callable) -> list[float]:
    """Evaluate ``fn(e, lag)`` once per lag."""
    return [float(fn(e, lag)) for lag in lags]


def _check_lags(lags) -> list[int]:
    lags = [int(v) for v in np.atleast_1d(lags)]
    if not lags:
        raise ValueError("lags must be non-empty")
    if any(v < 1 for v in lags):
        raise ValueError("lags must be positive")
    if any(b <= a for a, b in zip(lags, lags[1:])):
        raise ValueError("lags must be strictly increasing")
    return lags


def portmanteau(
    e,
    lags,
    method=Method.MAHDI_MCLEOD,
    season: int = 1,
    squared_residuals: bool = False,
    fn: Callable | None = None,
) -> np.ndarray:
    """Statistic of ``method`` at every lag in ``lags``.

    The correlation matrices are computed once up to ``max(lags)`` and shared
    across lags.  With ``squared_residuals`` the residuals are squared and
    the squares centered at their column means first.
    """
    method = Method.parse(method)
    lags = _check_lags(lags)
    x = as_series(e, "residuals")
    if squared_residuals:
        # squares have a non-zero mean, so they are centered as in the McLeod-Li test
        x = squared_transform(x)
        x = x - x.mean(axis=0)
    if method is Method.CUSTOM:
        if fn is None:
            raise ValueError("a statistic callback is required for the custom method")
        return np.asarray(custom_statistic(x, lags, fn))
    if method is Method.DURBIN_WATSON:
        return np.array([durbin_watson(x, lag) for lag in lags])
    cs = standardized_corr(x, lags[-1], season)
    return np.array([_from_set(cs, m, method) for m in lags])
