"""Degrees of freedom and chi-square tail probabilities for asymptotic p-values."""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special

from .errors import DomainError
from .statistics import Method, PORTMANTEAU_METHODS


@dataclass(frozen=True)
class DfSpec:
    """Series dimension ``k`` and fitted order ``o = p + q + ps + qs``."""

    k: int = 1
    order: int = 0
    method: Method = Method.MAHDI_MCLEOD

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.order < 0:
            raise ValueError("order must be non-negative")
        object.__setattr__(self, "method", Method.parse(self.method))


def degrees_of_freedom(spec: DfSpec, m: int) -> float:
    """Chi-square df at lag ``m``; may be zero or negative for over-fitted orders.

    ``k^2 (m - o)`` for the quadratic-form statistics and
    ``k^2 (1.5 m (m+1) / (2m+1) - o)`` for the generalized variance statistic.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    k2 = spec.k * spec.k
    if spec.method is Method.MAHDI_MCLEOD:
        return k2 * (1.5 * m * (m + 1) / (2 * m + 1) - spec.order)
    if spec.method in PORTMANTEAU_METHODS:
        return float(k2 * (m - spec.order))
    raise ValueError(f"no asymptotic distribution for {spec.method.value}")


def chisq_upper_tail(x: float, df: float) -> float | None:
    """``P(X >= x)`` for ``X ~ chi^2(df)``, fractional ``df`` allowed.

    Returns ``None`` (reported as NA) when ``df <= 0``.
    """
    if x < 0:
        raise ValueError("x must be non-negative")
    if not df > 0:
        return None
    return float(special.gammaincc(0.5 * df, 0.5 * x))


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"log_gamma is defined for x > 0, got {x}")
    return math.lgamma(x)
