"""VAR least-squares fitting, companion matrices and the stationarity/invertibility check."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import signal

from .acf import as_series
from .errors import EmptyOrder, NonStationary, RankDeficient
from .innovations import InnovDist, InnovationSource
from .linalg import spectral_radius
from .stable import fitstable

BOUNDARY_TOL = 1e-8
BURN_IN = 200
INVERTQ_WARNING = "check stationary/invertibility condition !"


def as_coeffs(c, k: int | None = None) -> np.ndarray:
    """Normalize coefficients to an ``(order, k, k)`` array.

    Accepts ``None``/empty (order 0), a flat list of univariate coefficients,
    a single ``k x k`` matrix, or a sequence of ``k x k`` matrices.
    """
    if c is None:
        return np.zeros((0, k or 1, k or 1))
    a = np.asarray(c, dtype=float)
    if a.size == 0:
        if k is None:
            k = a.shape[-1] if a.ndim == 3 and a.shape[-1] else 1
        return np.zeros((0, k, k))
    if a.ndim == 0:
        a = a.reshape(1, 1, 1)
    elif a.ndim == 1:
        a = a.reshape(-1, 1, 1)
    elif a.ndim == 2:
        if a.shape[0] != a.shape[1]:
            raise ValueError(f"coefficient matrix must be square, got {a.shape}")
        a = a[None]
    elif a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError(f"coefficients must have shape (order, k, k), got {a.shape}")
    if k is not None and a.shape[1] != k:
        raise ValueError(f"coefficient dimension {a.shape[1]} does not match k={k}")
    if not np.all(np.isfinite(a)):
        raise ValueError("coefficients must be finite")
    return a


def companion(c) -> np.ndarray:
    """``kp x kp`` companion matrix: ``[Phi_1 ... Phi_p]`` on top, identities below."""
    c = as_coeffs(c)
    p, k = c.shape[0], c.shape[1]
    if p == 0:
        raise EmptyOrder("companion matrix of an empty coefficient array")
    out = np.zeros((k * p, k * p))
    out[:k] = np.hstack(list(c))
    if p > 1:
        out[k:, : k * (p - 1)] = np.eye(k * (p - 1))
    return out


class Admissibility(str, Enum):
    ADMISSIBLE = "Admissible"
    VIOLATED = "Violated"

    def __bool__(self) -> bool:
        return self is Admissibility.ADMISSIBLE


def invertq(c, warn: bool = False) -> Admissibility:
    """Check that every companion eigenvalue lies strictly inside the unit circle.

    Works for AR coefficients (stationarity) and MA coefficients in the
    ``I - Theta_1 B - ...`` convention (invertibility) alike.  Spectral radii
    within ``1e-8`` of one count as violations.
    """
    c = as_coeffs(c)
    if c.shape[0] == 0:
        return Admissibility.ADMISSIBLE
    if spectral_radius(companion(c)) >= 1.0 - BOUNDARY_TOL:
        if warn:
            warnings.warn(INVERTQ_WARNING, stacklevel=2)
        return Admissibility.VIOLATED
    return Admissibility.ADMISSIBLE


@dataclass(frozen=True, eq=False)
class FittedVar:
    p: int
    include_constant: bool
    include_trend: bool
    coeffs: np.ndarray
    intercept: np.ndarray
    trend_coef: np.ndarray
    residuals: np.ndarray
    sigma: np.ndarray
    n: int

    @property
    def k(self) -> int:
        return self.sigma.shape[0]

    @property
    def order(self) -> int:
        return self.p


def _design(z: np.ndarray, p: int, constant: bool, trend: bool) -> np.ndarray:
    n = z.shape[0]
    cols = []
    if constant:
        cols.append(np.ones((n - p, 1)))
    if trend:
        cols.append(np.arange(p + 1, n + 1, dtype=float)[:, None])
    for i in range(1, p + 1):
        cols.append(z[p - i : n - i])
    return np.hstack(cols)


def fit_var(z, p: int, constant: bool = True, trend: bool = False) -> FittedVar:
    """Equation-by-equation OLS of ``z_t`` on ``(1, t, z_{t-1}, ..., z_{t-p})``.

    The time index ``t`` is 1-based, so the first regression row has
    ``t = p + 1``.  ``sigma`` is ``resid' resid / (n - p)``.

    Raises
    ------
    RankDeficient
        If the regressor matrix is numerically rank deficient.
    """
    z = as_series(z, "series")
    n, k = z.shape
    if p < 1:
        raise ValueError("p must be at least 1")
    if n <= k * p + 2 + p:
        raise ValueError(f"series of length {n} is too short for a VAR({p}) with k={k}")
    x = _design(z, p, constant, trend)
    y = z[p:]
    beta, _, rank, sv = np.linalg.lstsq(x, y, rcond=None)
    if rank < x.shape[1] or sv[-1] <= 1e-10 * sv[0]:
        raise RankDeficient("regressor cross-product matrix is numerically singular")
    resid = y - x @ beta
    row = 0
    intercept = np.zeros(k)
    trend_coef = np.zeros(k)
    if constant:
        intercept = beta[row].copy()
        row += 1
    if trend:
        trend_coef = beta[row].copy()
        row += 1
    coeffs = np.stack([beta[row + i * k : row + (i + 1) * k].T for i in range(p)])
    sigma = resid.T @ resid / (n - p)
    return FittedVar(
        p=p,
        include_constant=constant,
        include_trend=trend,
        coeffs=coeffs,
        intercept=intercept,
        trend_coef=trend_coef,
        residuals=resid,
        sigma=sigma,
        n=n,
    )


def var_filter(coeffs: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Run ``z_t = u_t + sum_i Phi_i z_{t-i}`` from zero initial values."""
    p = coeffs.shape[0]
    if p == 0:
        return u.copy()
    n, k = u.shape
    if k == 1:
        a = np.concatenate([[1.0], -coeffs[:, 0, 0]])
        return signal.lfilter([1.0], a, u[:, 0])[:, None]
    stacked = np.hstack(list(coeffs))
    z = np.zeros((n + p, k))
    z[p:] = u
    for t in range(p, n + p):
        # rows t-1, ..., t-p flattened in lag order
        z[t] += stacked @ z[t - p : t][::-1].ravel()
    return z[p:]


def innovation_source_for(f: FittedVar, kind=InnovDist.GAUSSIAN, dft: int | None = None) -> InnovationSource:
    """Innovation source calibrated to a fitted model's residuals."""
    kind = InnovDist.parse(kind)
    if kind is InnovDist.BOOTSTRAP:
        return InnovationSource(kind, donor=f.residuals)
    if kind is InnovDist.STABLE:
        return InnovationSource(kind, stable=fitstable(f.residuals))
    return InnovationSource(kind, sigma=f.sigma, dft=dft)


def simulate_fitted(
    f: FittedVar,
    innov_source: InnovationSource | None,
    n_out: int,
    rng: np.random.Generator,
    burn_in: int = BURN_IN,
) -> np.ndarray:
    """Simulate ``n_out`` points from a fitted VAR after discarding ``burn_in`` points.

    The kept points carry time index ``t = 1..n_out`` for the trend term.
    """
    if not invertq(f.coeffs):
        raise NonStationary("fitted VAR coefficients are not stationary")
    if innov_source is None:
        innov_source = innovation_source_for(f)
    total = burn_in + n_out
    e = innov_source.draw(total, rng)
    t = np.arange(1 - burn_in, n_out + 1, dtype=float)[:, None]
    u = f.intercept + t * f.trend_coef + e
    return var_filter(f.coeffs, u)[burn_in:]
