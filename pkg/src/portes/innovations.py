"""Innovation generators: Gaussian, Student t, stable and bootstrap."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CovarianceSingular, NotPositiveDefinite
from .linalg import cholesky_lower
from .stable import StableParams, fitstable, rstable


class InnovDist(str, Enum):
    GAUSSIAN = "gaussian"
    T = "t"
    STABLE = "stable"
    BOOTSTRAP = "bootstrap"

    @classmethod
    def parse(cls, value) -> "InnovDist":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown innovation distribution {value!r}") from None


def _chol(sigma: np.ndarray) -> np.ndarray:
    try:
        return cholesky_lower(sigma)
    except NotPositiveDefinite as exc:
        raise CovarianceSingular(f"innovation covariance is not positive definite: {exc}") from exc


@dataclass(frozen=True, eq=False)
class InnovationSource:
    """Generator of ``(n, k)`` innovation panels.

    ``sigma`` colors Gaussian and t draws through its Cholesky factor.  For
    ``t`` with ``dft > 2`` the draws are rescaled to unit variance first, so
    the panel covariance is ``sigma``.  Stable draws ignore ``sigma``;
    bootstrap draws resample whole rows of ``donor``.
    """

    kind: InnovDist = InnovDist.GAUSSIAN
    sigma: np.ndarray | None = None
    dft: int | None = None
    stable: StableParams | None = None
    donor: np.ndarray | None = None
    k: int = 1

    def __post_init__(self):
        kind = InnovDist.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is InnovDist.BOOTSTRAP:
            if self.donor is None:
                raise ValueError("bootstrap innovations need a donor series")
            donor = np.asarray(self.donor, dtype=float)
            if donor.ndim == 1:
                donor = donor[:, None]
            object.__setattr__(self, "donor", donor)
            object.__setattr__(self, "k", donor.shape[1])
        elif kind is InnovDist.STABLE:
            if self.stable is None:
                raise ValueError("stable innovations need StableParams")
            object.__setattr__(self, "k", self.stable.k)
        else:
            sigma = np.eye(self.k) if self.sigma is None else np.atleast_2d(np.asarray(self.sigma, dtype=float))
            object.__setattr__(self, "sigma", sigma)
            object.__setattr__(self, "k", sigma.shape[0])
            object.__setattr__(self, "_chol", _chol(sigma))
            if kind is InnovDist.T:
                if self.dft is None or int(self.dft) != self.dft or self.dft < 1:
                    raise ValueError("t innovations need a positive integer dft")
                object.__setattr__(self, "dft", int(self.dft))

    @classmethod
    def from_data(cls, kind, z, dft: int | None = None) -> "InnovationSource":
        """Source whose law is estimated from the series ``z``.

        Gaussian and t use the sample covariance of ``z``, stable fits
        per-column parameters, and bootstrap resamples the rows of ``z``.
        """
        kind = InnovDist.parse(kind)
        z = np.asarray(z, dtype=float)
        if z.ndim == 1:
            z = z[:, None]
        if kind is InnovDist.BOOTSTRAP:
            return cls(kind, donor=z)
        if kind is InnovDist.STABLE:
            return cls(kind, stable=fitstable(z))
        sigma = np.atleast_2d(np.cov(z, rowvar=False))
        return cls(kind, sigma=sigma, dft=dft)

    def draw(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``n`` innovation rows; a longer draw on the same stream extends a shorter one."""
        if self.kind is InnovDist.BOOTSTRAP:
            return self.donor[rng.integers(0, self.donor.shape[0], size=n)]
        if self.kind is InnovDist.STABLE:
            return rstable(n, self.stable, rng)
        if self.kind is InnovDist.GAUSSIAN:
            x = rng.standard_normal((n, self.k))
        else:
            x = rng.standard_t(self.dft, size=(n, self.k))
            if self.dft > 2:
                x *= np.sqrt((self.dft - 2.0) / self.dft)
        return x @ self._chol.T
