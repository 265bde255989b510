"""Residual autocovariance and standardized autocorrelation matrices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LagTooLarge, NotPositiveDefinite, SingularCovariance
from .linalg import cholesky_lower


def as_series(e, name: str = "series") -> np.ndarray:
    """Return ``e`` as an ``(n, k)`` finite float array (vectors become one column)."""
    x = np.asarray(e, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty vector or n-by-k matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains missing or non-finite values")
    return x


def autocovariance(e, lag: int, demean: bool = False) -> np.ndarray:
    """Lag ``lag`` autocovariance ``n^-1 sum_{t>lag} e_t e_{t-lag}'`` (divisor ``n``)."""
    x = as_series(e, "residuals")
    n = x.shape[0]
    if lag < 0:
        raise ValueError("lag must be non-negative")
    if lag >= n:
        raise LagTooLarge(f"lag {lag} must be smaller than the series length {n}")
    if demean:
        x = x - x.mean(axis=0)
    return x[lag:].T @ x[: n - lag] / n


@dataclass(frozen=True)
class LagCorrelationSet:
    """Standardized residual autocorrelations ``R_{s}, R_{2s}, ..., R_{ms}``.

    ``corr[i]`` holds the matrix at lag ``(i + 1) * season``.
    """

    gamma0: np.ndarray
    corr: tuple
    season: int = 1
    n: int = 0

    @property
    def k(self) -> int:
        return self.gamma0.shape[0]

    @property
    def max_lag(self) -> int:
        return len(self.corr)

    @property
    def lags_are_seasonal(self) -> bool:
        return self.season > 1


def standardized_corr(e, max_lag: int, season: int = 1, demean: bool = False) -> LagCorrelationSet:
    """Compute ``R_l = L' Gamma_l L`` for ``l = s, 2s, ..., m*s`` with ``L L' = Gamma_0^-1``.

    ``L`` is taken as ``C^-T`` where ``C`` is the lower Cholesky factor of
    ``Gamma_0``, so ``R_l = C^-1 Gamma_l C^-T``.  For a single series this is
    the ordinary lag-``l`` autocorrelation.
    """
    x = as_series(e, "residuals")
    n = x.shape[0]
    if season < 1:
        raise ValueError("season must be a positive integer")
    if max_lag < 0:
        raise ValueError("max_lag must be non-negative")
    if max_lag * season >= n:
        raise LagTooLarge(f"lag {max_lag}*{season} must be smaller than the series length {n}")
    if demean:
        x = x - x.mean(axis=0)
    gamma0 = x.T @ x / n
    try:
        c = cholesky_lower(gamma0)
    except NotPositiveDefinite as exc:
        raise SingularCovariance(f"residual covariance is not positive definite: {exc}") from exc
    cinv = np.linalg.inv(c)
    corr = []
    for ell in range(1, max_lag + 1):
        lag = ell * season
        gamma = x[lag:].T @ x[: n - lag] / n
        corr.append(cinv @ gamma @ cinv.T)
    return LagCorrelationSet(gamma0=gamma0, corr=tuple(corr), season=season, n=n)


def block_toeplitz(cs: LagCorrelationSet, m: int | None = None) -> np.ndarray:
    """Assemble the ``k(m+1)`` block-Toeplitz correlation matrix.

    Block ``(i, j)`` is ``R_{(j-i)s}`` above the diagonal, its transpose below,
    and the identity on the diagonal.  ``m`` defaults to every lag in ``cs``.
    """
    if m is None:
        m = cs.max_lag
    if m > cs.max_lag:
        raise ValueError(f"m={m} exceeds the {cs.max_lag} lags available")
    k = cs.k
    out = np.zeros((k * (m + 1), k * (m + 1)))
    eye = np.eye(k)
    for i in range(m + 1):
        out[i * k : (i + 1) * k, i * k : (i + 1) * k] = eye
        for j in range(i + 1, m + 1):
            r = cs.corr[j - i - 1]
            out[i * k : (i + 1) * k, j * k : (j + 1) * k] = r
            out[j * k : (j + 1) * k, i * k : (i + 1) * k] = r.T
    return out
