import json

import numpy as np
import pytest

from portes.errors import AdapterFitFailure
from portes.models import fit_var
from portes.montecarlo import (
    FitResult,
    McConfig,
    VarAdapter,
    asymptotic_test,
    mc_goodness_of_fit,
    mc_pvalue,
    mc_randomness_test,
    portest,
    replicate_rng,
    run_replicates,
)
from portes.statistics import Method
from portes.varima import VarimaSpec, varima_sim


class TestPvalue:
    def test_maximal(self):
        assert mc_pvalue(10.0, np.zeros(1000)) == pytest.approx(0.000999001, abs=1e-9)
        assert mc_pvalue(10.0, np.zeros(999)) == 0.001

    def test_two_exceedances(self):
        sims = np.r_[np.zeros(998), 11, 12]
        assert mc_pvalue(10.0, sims) == pytest.approx(0.002997003, abs=1e-9)

    def test_printed_value(self):
        sims = np.r_[np.zeros(980), np.full(20, 99.0)]
        assert mc_pvalue(10.0, sims) == pytest.approx(0.020979021, abs=1e-9)

    def test_minimal(self):
        assert mc_pvalue(-np.inf, np.zeros(99)) == 1.0

    def test_ties_count(self):
        assert mc_pvalue(1.0, [1.0, 0.0, 2.0]) == pytest.approx(3 / 4)

    def test_empty(self):
        with pytest.raises(ValueError):
            mc_pvalue(1.0, [])


class TestConfig:
    @pytest.mark.parametrize("kwargs", [{"nrep": 0}, {"ncores": 0}, {"seed": -1}, {"innov_dist": "t"}, {"innov_dist": "t", "dft": 0}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            McConfig(**kwargs)

    def test_custom_needs_fn(self):
        with pytest.raises(ValueError):
            McConfig(method="custom")


class TestStreams:
    def test_distinct_by_index_and_attempt(self):
        draws = {replicate_rng(123, i, a).random() for i in range(5) for a in range(3)}
        assert len(draws) == 15

    def test_reproducible(self):
        assert replicate_rng(7, 3).random() == replicate_rng(7, 3).random()


class TestRandomness:
    def test_nrep_one(self, rng):
        r = mc_randomness_test(rng.standard_normal(100), McConfig(nrep=1, lags=(2, 4)))
        assert set(r.pvalues) <= {0.5, 1.0}

    def test_quantization_and_metadata(self, rng):
        r = mc_randomness_test(rng.standard_normal(80), McConfig(nrep=49, lags=(1, 3)))
        assert r.mode == "MonteCarlo" and r.nrep == 49 and r.seed == 123
        for p in r.pvalues:
            assert p >= 1 / 50 and abs(p * 50 - round(p * 50)) < 1e-9

    @pytest.mark.parametrize("dist", ["gaussian", "bootstrap", "stable"])
    def test_innovation_kinds(self, rng, dist):
        r = mc_randomness_test(rng.standard_normal(120), McConfig(nrep=19, lags=(3,), innov_dist=dist))
        assert 0 < r.pvalues[0] <= 1

    def test_t_innovations(self, rng):
        r = mc_randomness_test(rng.standard_normal(120), McConfig(nrep=19, lags=(3,), innov_dist="t", dft=5))
        assert 0 < r.pvalues[0] <= 1

    def test_ncores_identical(self, rng):
        z = rng.standard_normal((100, 2))
        reports = [mc_randomness_test(z, McConfig(nrep=30, lags=(2, 4), ncores=c)).to_json() for c in (1, 2)]
        assert reports[0] == reports[1]

    def test_detects_ar(self):
        z = varima_sim(VarimaSpec(ar=[0.6]), 200, rng=np.random.default_rng(1))
        r = mc_randomness_test(z, McConfig(nrep=99, lags=(5,)))
        assert r.pvalues[0] == pytest.approx(0.01)

    @pytest.mark.slow
    def test_empirical_size(self):
        rejections = 0
        for run in range(200):
            z = np.random.default_rng(1000 + run).standard_normal(500)
            cfg = McConfig(nrep=199, lags=(5,), seed=run)
            rejections += mc_randomness_test(z, cfg).pvalues[0] <= 0.05
        assert 0.01 <= rejections / 200 <= 0.10


class _Flaky:
    """Adapter whose refits fail on the first attempt of every replicate."""

    def __init__(self):
        self.inner = VarAdapter(1)

    def fit(self, z):
        if z.shape[0] == 150 and getattr(self, "_refit", False) and z[0, 0] > 0:
            raise RuntimeError("refit failed")
        self._refit = True
        return self.inner.fit(z)

    def simulate(self, parameters, rng):
        return self.inner.simulate(parameters, rng)


class _AlwaysFails:
    def fit(self, z):
        if z.shape[0] != 100:
            raise RuntimeError("no convergence")
        return FitResult(z, None)

    def simulate(self, parameters, rng):
        return rng.standard_normal((99, 1))


class TestGoodnessOfFit:
    def test_var_adapter_shapes(self, rng):
        z = rng.standard_normal((120, 2))
        adapter = VarAdapter(1)
        fitted = adapter.fit(z)
        assert adapter.simulate(fitted.parameters, np.random.default_rng(0)).shape == z.shape

    def test_retries_recover(self, rng):
        z = rng.standard_normal((150, 1))
        r = mc_goodness_of_fit(_Flaky(), z, McConfig(nrep=20, lags=(2,)))
        assert len(r.rows) == 1

    def test_failure_after_retries(self, rng):
        with pytest.raises(AdapterFitFailure) as info:
            mc_goodness_of_fit(_AlwaysFails(), rng.standard_normal((100, 1)), McConfig(nrep=3, lags=(2,)))
        assert info.value.replicate == 0 and info.value.attempts == 11

    def test_determinism_across_cores(self):
        z = varima_sim(VarimaSpec(ar=[np.array([[0.3, 0.5], [0, 0.3]])]), 100, rng=np.random.default_rng(2))
        a = mc_goodness_of_fit(VarAdapter(1), z, McConfig(nrep=20, lags=(5,), ncores=1))
        b = mc_goodness_of_fit(VarAdapter(1), z, McConfig(nrep=20, lags=(5,), ncores=3))
        assert a.to_json() == b.to_json()

    def test_power_var3(self):
        phi = np.zeros((3, 2, 2))
        phi[2] = 0.6 * np.eye(2)
        hits = 0
        for run in range(5):
            z = varima_sim(VarimaSpec(ar=phi), 300, rng=np.random.default_rng(50 + run))
            hits += mc_goodness_of_fit(VarAdapter(1), z, McConfig(nrep=49, lags=(4,), seed=run)).pvalues[0] < 0.05
        assert hits >= 3

    @pytest.mark.slow
    def test_size_bivariate_var1(self):
        phi = np.array([[0.3, 0.5], [0, 0.3]])
        spec = VarimaSpec(ar=[phi], sigma=[[1, 0.5], [0.5, 1]])
        good = 0
        for run in range(100):
            z = varima_sim(spec, 400, rng=np.random.default_rng(300 + run))
            r = mc_goodness_of_fit(VarAdapter(1), z, McConfig(nrep=199, lags=(5, 10), seed=run))
            good += all(p > 0.05 for p in r.pvalues)
        assert good >= 90


class TestAsymptotic:
    def test_reported_row(self):
        r = asymptotic_test(np.random.default_rng(0).standard_normal(100), lags=(5,))
        assert r.dfs[0] == pytest.approx(4.090909, abs=1e-6)
        assert r.mode == "Asymptotic" and r.nrep is None

    def test_order_from_fit(self, rng):
        f = fit_var(rng.standard_normal((200, 2)), 2)
        r = asymptotic_test(f, lags=(1, 5), method="ljung-box")
        assert r.dfs == [4 * (1 - 2), 4 * (5 - 2)]
        assert r.pvalues[0] is None and 0 <= r.pvalues[1] <= 1

    def test_zero_correlation(self):
        e = np.array([1.0, 0, 0, 0, 0, 0, 0, 0])
        r = asymptotic_test(e, lags=(1, 2), method="box-pierce")
        assert r.statistics == [0, 0] and r.pvalues == [1.0, 1.0]

    def test_refuses_durbin_watson(self, rng):
        with pytest.raises(ValueError):
            asymptotic_test(rng.standard_normal(50), method=Method.DURBIN_WATSON)

    def test_json_na(self, rng):
        r = asymptotic_test(rng.standard_normal(100), lags=(1, 3), order=2, method="hosking")
        data = json.loads(r.to_json())
        assert data["rows"][0]["pvalue"] is None
        assert set(data) == {"method", "mode", "rows"}


class TestPortest:
    def test_dispatch(self, rng):
        z = rng.standard_normal((150, 1))
        assert portest(z, lags=(5,), monte_carlo=False).mode == "Asymptotic"
        assert portest(z, lags=(5,), nrep=9).mode == "MonteCarlo"
        assert portest(z, lags=(5,), nrep=9, adapter=VarAdapter(1)).nrep == 9

    def test_custom_statistic(self, rng):
        z = rng.standard_normal(100)
        r = portest(z, lags=(1, 2), method="custom", fn=lambda e, lag: float(np.abs(e[lag:] * e[:-lag]).sum()), nrep=9)
        assert len(r.rows) == 2


def test_run_replicates_order():
    def task(rng):
        return [rng.random()]

    seq = run_replicates(task, 10, 5, 1)
    par = run_replicates(task, 10, 5, 2)
    np.testing.assert_array_equal(seq, par)
    assert seq[3, 0] == replicate_rng(5, 3).random()
