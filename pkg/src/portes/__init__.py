"""Portmanteau goodness-of-fit tests for univariate and multivariate time series."""
from .acf import LagCorrelationSet, autocovariance, block_toeplitz, standardized_corr
from .asymptotic import DfSpec, chisq_upper_tail, degrees_of_freedom, log_gamma
from .errors import *  # noqa: F401,F403
from .innovations import InnovDist, InnovationSource
from .models import Admissibility, FittedVar, companion, fit_var, invertq, simulate_fitted
from .montecarlo import (
    FitResult,
    McConfig,
    ModelAdapter,
    VarAdapter,
    asymptotic_test,
    mc_goodness_of_fit,
    mc_pvalue,
    mc_randomness_test,
    portest,
)
from .report import TestReport, TestRow
from .stable import StableParams, fitstable, rstable
from .statistics import (
    Method,
    box_pierce,
    custom_statistic,
    durbin_watson,
    hosking,
    li_mcleod,
    ljung_box,
    mahdi_mcleod,
    portmanteau,
    squared_transform,
)
from .varima import VarimaSpec, expand_seasonal, impulse_vma, varima_sim

__version__ = "0.1.0"
