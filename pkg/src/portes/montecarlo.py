"""Monte Carlo significance tests and the asymptotic chi-square mode.

Replicate ``i`` always draws from the stream ``SeedSequence(seed, spawn_key=(i,))``
(retries use ``(i, attempt)``), so reports are bit-identical for any worker
count.  Exceedance counting is order independent.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Protocol, Sequence

import numpy as np
from joblib import Parallel, delayed

from .acf import as_series
from .asymptotic import DfSpec, chisq_upper_tail, degrees_of_freedom
from .errors import AdapterFitFailure
from .innovations import InnovDist, InnovationSource
from .models import FittedVar, fit_var, innovation_source_for, simulate_fitted
from .report import TestReport, TestRow
from .statistics import PORTMANTEAU_METHODS, Method, portmanteau

logger = logging.getLogger(__name__)

DEFAULT_LAGS = (5, 10, 15, 20, 25, 30)
MAX_RETRIES = 10


class FitResult(NamedTuple):
    residuals: np.ndarray
    parameters: object
    order: int = 0


class ModelAdapter(Protocol):
    """Pair of hooks used by the goodness-of-fit loop.

    ``fit`` must be deterministic; ``simulate`` must produce a series shaped
    like the fitted one and draw randomness only from ``rng``.
    """

    def fit(self, z: np.ndarray) -> FitResult: ...

    def simulate(self, parameters, rng: np.random.Generator) -> np.ndarray: ...


@dataclass(frozen=True)
class VarAdapter:
    """Built-in adapter: OLS VAR(p) refit with resimulation from the fitted model."""

    p: int = 1
    constant: bool = True
    trend: bool = False
    innov_dist: InnovDist = InnovDist.GAUSSIAN
    dft: int | None = None

    def fit(self, z) -> FitResult:
        f = fit_var(z, self.p, self.constant, self.trend)
        return FitResult(f.residuals, f, self.p)

    def simulate(self, parameters: FittedVar, rng: np.random.Generator) -> np.ndarray:
        src = innovation_source_for(parameters, self.innov_dist, self.dft)
        return simulate_fitted(parameters, src, parameters.n, rng)


@dataclass(frozen=True)
class McConfig:
    nrep: int = 1000
    seed: int = 123
    ncores: int = 1
    innov_dist: InnovDist = InnovDist.GAUSSIAN
    dft: int | None = None
    lags: tuple = DEFAULT_LAGS
    season: int = 1
    squared_residuals: bool = False
    method: Method = Method.MAHDI_MCLEOD
    fn: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.nrep < 1:
            raise ValueError("nrep must be at least 1")
        if self.ncores < 1:
            raise ValueError("ncores must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        object.__setattr__(self, "innov_dist", InnovDist.parse(self.innov_dist))
        object.__setattr__(self, "method", Method.parse(self.method))
        object.__setattr__(self, "lags", tuple(int(v) for v in np.atleast_1d(self.lags)))
        if self.innov_dist is InnovDist.T and (self.dft is None or int(self.dft) != self.dft or self.dft < 1):
            raise ValueError("t innovations need a positive integer dft")
        if self.method is Method.CUSTOM and self.fn is None:
            raise ValueError("the custom method needs a statistic callback")

    def statistic(self, e) -> np.ndarray:
        return portmanteau(e, self.lags, self.method, self.season, self.squared_residuals, self.fn)


def replicate_rng(seed: int, replicate: int, attempt: int = 0) -> np.random.Generator:
    key = (replicate,) if attempt == 0 else (replicate, attempt)
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def mc_pvalue(observed: float, simulated: Sequence[float]) -> float:
    """``(#{simulated >= observed} + 1) / (nrep + 1)``."""
    sim = np.asarray(simulated, dtype=float)
    if sim.size == 0:
        raise ValueError("need at least one simulated statistic")
    return (int(np.count_nonzero(sim >= observed)) + 1) / (sim.size + 1)


@dataclass(frozen=True, eq=False)
class _RandomnessTask:
    cfg: McConfig
    source: InnovationSource
    n: int

    def __call__(self, rng):
        return self.cfg.statistic(self.source.draw(self.n, rng))


@dataclass(frozen=True, eq=False)
class _GoodnessOfFitTask:
    cfg: McConfig
    adapter: ModelAdapter
    parameters: object

    def __call__(self, rng):
        sim = self.adapter.simulate(self.parameters, rng)
        refit = self.adapter.fit(sim)
        return self.cfg.statistic(refit.residuals)


def _replicate(task, seed: int, i: int) -> np.ndarray:
    cause = None
    for attempt in range(MAX_RETRIES + 1):
        try:
            return np.asarray(task(replicate_rng(seed, i, attempt)), dtype=float)
        except Exception as exc:  # noqa: BLE001 - adapters are user code
            cause = exc
            logger.debug("replicate %d attempt %d failed: %r", i, attempt, exc)
    raise AdapterFitFailure(i, MAX_RETRIES + 1, cause)


def _run_chunk(task, seed: int, indices) -> np.ndarray:
    return np.stack([_replicate(task, seed, int(i)) for i in indices])


def run_replicates(task, nrep: int, seed: int, ncores: int = 1) -> np.ndarray:
    """Evaluate ``task`` on ``nrep`` replicate streams; returns ``(nrep, nlags)``."""
    if ncores == 1 or nrep == 1:
        return _run_chunk(task, seed, range(nrep))
    chunks = [c for c in np.array_split(np.arange(nrep), min(nrep, 4 * ncores)) if c.size]
    parts = Parallel(n_jobs=ncores, backend="loky")(delayed(_run_chunk)(task, seed, c) for c in chunks)
    return np.concatenate(parts)


def _mc_report(observed: np.ndarray, sims: np.ndarray, cfg: McConfig) -> TestReport:
    rows = tuple(
        TestRow(lag=lag, statistic=float(obs), pvalue=mc_pvalue(obs, sims[:, j]))
        for j, (lag, obs) in enumerate(zip(cfg.lags, observed))
    )
    return TestReport(cfg.method.value, "MonteCarlo", rows, nrep=cfg.nrep, seed=cfg.seed)


def mc_randomness_test(z, cfg: McConfig = McConfig()) -> TestReport:
    """Monte Carlo test that ``z`` is white noise.

    Each replicate draws an ``n x k`` innovation panel whose law is estimated
    from ``z`` (see :meth:`InnovationSource.from_data`) and recomputes the
    statistic on it.
    """
    z = as_series(z)
    observed = cfg.statistic(z)
    source = InnovationSource.from_data(cfg.innov_dist, z, cfg.dft)
    sims = run_replicates(_RandomnessTask(cfg, source, z.shape[0]), cfg.nrep, cfg.seed, cfg.ncores)
    return _mc_report(observed, sims, cfg)


def mc_goodness_of_fit(adapter: ModelAdapter, z, cfg: McConfig = McConfig()) -> TestReport:
    """Fit, simulate from the fit, refit and compare statistics ``nrep`` times."""
    fitted = adapter.fit(z)
    observed = cfg.statistic(fitted.residuals)
    task = _GoodnessOfFitTask(cfg, adapter, fitted.parameters)
    sims = run_replicates(task, cfg.nrep, cfg.seed, cfg.ncores)
    return _mc_report(observed, sims, cfg)


def asymptotic_test(
    e_or_fit,
    lags=DEFAULT_LAGS,
    season: int = 1,
    method=Method.MAHDI_MCLEOD,
    order: int | None = None,
    squared_residuals: bool = False,
) -> TestReport:
    """Statistic, chi-square df and p-value per lag.

    ``e_or_fit`` is a residual series, a :class:`FittedVar` or a
    :class:`FitResult`; for fitted inputs the order defaults to the model's.
    P-values are ``None`` where the df is not positive.
    """
    method = Method.parse(method)
    if method not in PORTMANTEAU_METHODS:
        raise ValueError(f"no asymptotic distribution for {method.value}")
    if isinstance(e_or_fit, FittedVar):
        resid, fit_order = e_or_fit.residuals, e_or_fit.p
    elif isinstance(e_or_fit, FitResult):
        resid, fit_order = e_or_fit.residuals, e_or_fit.order
    else:
        resid, fit_order = e_or_fit, 0
    resid = as_series(resid, "residuals")
    if order is None:
        order = fit_order
    spec = DfSpec(k=resid.shape[1], order=order, method=method)
    lags = tuple(int(v) for v in np.atleast_1d(lags))
    stats = portmanteau(resid, lags, method, season, squared_residuals)
    rows = []
    for lag, stat in zip(lags, stats):
        df = degrees_of_freedom(spec, lag)
        rows.append(TestRow(lag=lag, statistic=float(stat), df=df, pvalue=chisq_upper_tail(max(stat, 0.0), df)))
    return TestReport(method.value, "Asymptotic", tuple(rows))


def portest(
    obj,
    lags=DEFAULT_LAGS,
    method=Method.MAHDI_MCLEOD,
    monte_carlo: bool = True,
    adapter: ModelAdapter | None = None,
    season: int = 1,
    order: int | None = None,
    squared_residuals: bool = False,
    fn: Callable | None = None,
    **mc_options,
) -> TestReport:
    """Dispatch to the asymptotic test, the randomness test or the goodness-of-fit loop.

    Keyword arguments in ``mc_options`` (``nrep``, ``seed``, ``ncores``,
    ``innov_dist``, ``dft``) go to :class:`McConfig`.
    """
    if not monte_carlo:
        return asymptotic_test(obj, lags, season, method, order, squared_residuals)
    cfg = McConfig(
        lags=tuple(np.atleast_1d(lags)),
        season=season,
        squared_residuals=squared_residuals,
        method=method,
        fn=fn,
        **mc_options,
    )
    if adapter is not None:
        return mc_goodness_of_fit(adapter, obj, cfg)
    return mc_randomness_test(obj, cfg)
