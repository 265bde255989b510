"""Seasonal VARIMA simulation through a truncated infinite moving-average filter.

Both polynomials follow the convention ``I - A_1 B - A_2 B^2 - ...``; the
seasonal factors are multiplied into the regular ones before the impulse
responses are computed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonInvertible, NonStationary
from .innovations import InnovationSource
from .models import as_coeffs, invertq

DEFAULT_PERIOD = 12


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a, b = as_coeffs(a), as_coeffs(b)
    k = a.shape[1] if a.shape[0] else b.shape[1]
    return as_coeffs(a if a.shape[0] else None, k), as_coeffs(b if b.shape[0] else None, k)


def expand_seasonal(base, seasonal, s: int) -> np.ndarray:
    """Coefficients of ``(I - sum A_i B^i)(I - sum S_j B^{js})`` in the same convention.

    The result has order ``p + s * ps``; an empty input acts as the identity
    polynomial.
    """
    base, seasonal = _pair(base, seasonal)
    k = base.shape[1]
    p, ps = base.shape[0], seasonal.shape[0]
    if ps and s < 1:
        raise ValueError("seasonal period must be positive")
    if ps == 0:
        return base.copy()
    if p == 0:
        out = np.zeros((s * ps, k, k))
        out[s - 1 :: s] = seasonal
        return out
    eye = np.eye(k)
    left = np.concatenate([eye[None], -base])
    right = np.zeros((s * ps + 1, k, k))
    right[0] = eye
    right[s::s] = -seasonal
    prod = np.zeros((p + s * ps + 1, k, k))
    for i in range(p + 1):
        for j in range(0, s * ps + 1, s):
            prod[i + j] += left[i] @ right[j]
    return -prod[1:]


def impulse_vma(phi, theta, trunc: int) -> np.ndarray:
    """Impulse responses ``Psi_1..Psi_T`` of ``Phi(B)^-1 Theta(B)``.

    ``Psi_j = -Theta_j + sum_{i=1}^{min(j,p)} Phi_i Psi_{j-i}`` with
    ``Psi_0 = I``; returned with shape ``(T, k, k)``.
    """
    if trunc < 1:
        raise ValueError("trunc must be at least 1")
    phi, theta = _pair(phi, theta)
    k = phi.shape[1]
    p, q = phi.shape[0], theta.shape[0]
    psi = np.zeros((trunc + 1, k, k))
    psi[0] = np.eye(k)
    for j in range(1, trunc + 1):
        acc = -theta[j - 1] if j <= q else np.zeros((k, k))
        for i in range(1, min(j, p) + 1):
            acc = acc + phi[i - 1] @ psi[j - i]
        psi[j] = acc
    return psi[1:]


def default_trunc(n: int) -> int:
    """``min(100, ceil(n / 3))``."""
    if n < 1:
        raise ValueError("n must be positive")
    return min(100, math.ceil(n / 3))


def integrate_differences(w, d, d_season, s: int = 1) -> np.ndarray:
    """Undo ``(1-B)^d (1-B^s)^ds`` per component with zero initial conditions."""
    y = np.array(w, dtype=float)
    squeeze = y.ndim == 1
    if squeeze:
        y = y[:, None]
    k = y.shape[1]
    d = np.broadcast_to(np.asarray(d, dtype=int), (k,))
    ds = np.broadcast_to(np.asarray(d_season, dtype=int), (k,))
    if np.any(d < 0) or np.any(ds < 0):
        raise ValueError("differencing orders must be non-negative")
    for i in range(k):
        for _ in range(d[i]):
            y[:, i] = np.cumsum(y[:, i])
        if ds[i] and s < 1:
            raise ValueError("seasonal period must be positive")
        for _ in range(ds[i]):
            for t in range(s, y.shape[0]):
                y[t, i] += y[t - s, i]
    return y[:, 0] if squeeze else y


def _vector(v, k: int, name: str) -> np.ndarray:
    if v is None:
        return np.zeros(k)
    out = np.asarray(v, dtype=float).ravel()
    if out.size == 1:
        return np.full(k, out[0])
    if out.size != k:
        raise ValueError(f"{name} must have {k} entries, got {out.size}")
    return out


@dataclass(frozen=True, eq=False)
class VarimaSpec:
    """Seasonal VARIMA model description.

    ``period`` defaults to 12 when any seasonal term is present and 1
    otherwise.  ``ma_plus_convention`` negates MA coefficients of a univariate
    model written as ``1 + theta_1 B + ...``.
    """

    ar: object = None
    ma: object = None
    ar_season: object = None
    ma_season: object = None
    d: object = 0
    d_season: object = 0
    period: int | None = None
    constant: object = None
    trend: object = None
    demean: object = None
    sigma: object = None
    trunc_lag: int | None = None
    k: int | None = None
    ma_plus_convention: bool = False

    def __post_init__(self):
        k = self.k
        for c in (self.ar, self.ma, self.ar_season, self.ma_season):
            a = np.asarray(c, dtype=float) if c is not None else None
            if a is not None and a.ndim >= 2 and a.size:
                k = k or a.shape[-1]
        if k is None and self.sigma is not None:
            k = np.atleast_2d(np.asarray(self.sigma, dtype=float)).shape[0]
        if k is None:
            for v in (self.constant, self.trend, self.demean, self.d, self.d_season):
                if v is not None and np.size(v) > 1:
                    k = np.size(v)
                    break
        k = k or 1
        object.__setattr__(self, "k", k)
        for name in ("ar", "ma", "ar_season", "ma_season"):
            object.__setattr__(self, name, as_coeffs(getattr(self, name), k))
        if self.ma_plus_convention:
            if k != 1:
                raise ValueError("ma_plus_convention applies to univariate models only")
            object.__setattr__(self, "ma", -self.ma)
            object.__setattr__(self, "ma_season", -self.ma_season)
        d = np.broadcast_to(np.asarray(self.d, dtype=int), (k,)).copy()
        ds = np.broadcast_to(np.asarray(self.d_season, dtype=int), (k,)).copy()
        if np.any(d < 0) or np.any(ds < 0):
            raise ValueError("differencing orders must be non-negative")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "d_season", ds)
        seasonal = self.ar_season.shape[0] > 0 or self.ma_season.shape[0] > 0 or np.any(ds > 0)
        period = self.period
        if period is None:
            period = DEFAULT_PERIOD if seasonal else 1
        if seasonal and period < 2:
            raise ValueError("seasonal terms need a period of at least 2")
        object.__setattr__(self, "period", int(period))
        for name in ("constant", "trend", "demean"):
            object.__setattr__(self, name, _vector(getattr(self, name), k, name))
        sigma = np.eye(k) if self.sigma is None else np.atleast_2d(np.asarray(self.sigma, dtype=float))
        if sigma.shape != (k, k):
            raise ValueError(f"sigma must be {k}x{k}")
        object.__setattr__(self, "sigma", sigma)
        if self.trunc_lag is not None and self.trunc_lag < 1:
            raise ValueError("trunc_lag must be a positive integer")

    @property
    def phi_sharp(self) -> np.ndarray:
        return expand_seasonal(self.ar, self.ar_season, self.period)

    @property
    def theta_sharp(self) -> np.ndarray:
        return expand_seasonal(self.ma, self.ma_season, self.period)


def stationary_core(spec: VarimaSpec, e: np.ndarray, n: int, trunc: int) -> np.ndarray:
    """``e_t + sum_{j=1}^{T} Psi_j e_{t-j}`` for the last ``n`` rows of chronological ``e``."""
    psi = impulse_vma(spec.phi_sharp, spec.theta_sharp, trunc)
    core = e[trunc:].copy()
    for j in range(1, trunc + 1):
        core += e[trunc - j : trunc - j + n] @ psi[j - 1].T
    return core


def varima_sim(
    spec: VarimaSpec,
    n: int,
    src: InnovationSource | None = None,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Simulate ``n`` points of a seasonal VARIMA process.

    ``n + T`` innovations are drawn newest first, so a larger truncation lag
    only appends older pre-sample innovations to the same stream.  Mean,
    constant and ``trend * t`` (``t = 1..n``) are added on the differenced
    scale, then the differences are integrated.

    Raises
    ------
    NonStationary, NonInvertible
        If the expanded AR or MA polynomial fails the companion check.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if rng is None:
        rng = np.random.default_rng()
    if src is None:
        src = InnovationSource("gaussian", sigma=spec.sigma)
    if src.k != spec.k:
        raise ValueError(f"innovation dimension {src.k} does not match k={spec.k}")
    if not invertq(spec.phi_sharp):
        raise NonStationary("check stationary/invertibility condition ! (AR polynomial)")
    if not invertq(spec.theta_sharp):
        raise NonInvertible("check stationary/invertibility condition ! (MA polynomial)")
    trunc = spec.trunc_lag or default_trunc(n)
    e = src.draw(n + trunc, rng)[::-1]
    core = stationary_core(spec, e, n, trunc)
    t = np.arange(1, n + 1, dtype=float)[:, None]
    w = core + spec.demean + spec.constant + spec.trend * t
    return integrate_differences(w, spec.d, spec.d_season, spec.period)
