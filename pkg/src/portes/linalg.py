"""Small dense linear-algebra kernel.

Matrices are plain 2-D ``float64`` numpy arrays; :func:`as_matrix` is the
single validation point.  Determinants are always returned as
``(log|det|, sign)`` so that the large block-Toeplitz matrices of the
generalized-variance statistic never overflow.
"""
from __future__ import annotations

import numpy as np

from .errors import NotPositiveDefinite, Singular

SYMMETRY_RTOL = 1e-10
PIVOT_FLOOR = 1e-12


def as_matrix(a, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Validate ``a`` and return it as a finite 2-D float array.

    Scalars become 1x1 and vectors become column matrices.
    """
    m = np.asarray(a, dtype=float)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    elif m.ndim == 1:
        m = m.reshape(-1, 1)
    elif m.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {m.shape}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and one column")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains NaN or infinite entries")
    if square and m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def cholesky_lower(a) -> np.ndarray:
    """Lower Cholesky factor ``L`` with ``L @ L.T == a``.

    Raises
    ------
    NotPositiveDefinite
        If a pivot falls below ``1e-12 * max(diag(a))``.
    """
    a = as_matrix(a, square=True)
    scale = max(np.max(np.abs(a)), np.finfo(float).tiny)
    if np.max(np.abs(a - a.T)) > SYMMETRY_RTOL * scale:
        raise ValueError("matrix is not symmetric")
    n = a.shape[0]
    floor = PIVOT_FLOOR * max(np.max(np.diag(a)), 0.0)
    L = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - L[j, :j] @ L[j, :j]
        if not pivot > floor:
            raise NotPositiveDefinite(f"pivot {pivot:.3e} at index {j} is not positive")
        L[j, j] = np.sqrt(pivot)
        if j + 1 < n:
            L[j + 1 :, j] = (a[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L


def lu_logdet(a) -> tuple[float, int]:
    """Return ``(log|det a|, sign)`` from an LU factorization with partial pivoting.

    ``sign`` is 0 (and the log magnitude ``-inf``) when the matrix is singular.
    """
    a = as_matrix(a, square=True)
    sign, logabs = np.linalg.slogdet(a)
    if sign == 0 or not np.isfinite(logabs):
        return -np.inf, 0
    return float(logabs), int(sign)


def kronecker(a, b) -> np.ndarray:
    """Kronecker product: block ``(i, j)`` equals ``a[i, j] * b``."""
    return np.kron(as_matrix(a, name="a"), as_matrix(b, name="b"))


def spectral_radius(a, max_squarings: int = 64) -> float:
    """Spectral radius by the Gelfand formula ``rho = lim ||A^k||^(1/k)``.

    ``A`` is squared repeatedly with renormalization, accumulating
    ``log ||A^(2^i)|| / 2^i``.  The accumulated value stops changing once the
    increment drops below double precision, which usually happens well before
    ``max_squarings``.
    """
    a = as_matrix(a, square=True)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return 0.0
    b = a / norm
    log_rho = np.log(norm)
    weight = 1.0
    for _ in range(max_squarings):
        b = b @ b
        norm = np.linalg.norm(b)
        if norm == 0.0:
            # nilpotent
            return 0.0
        weight *= 0.5
        step = weight * np.log(norm)
        log_rho += step
        b /= norm
        if abs(step) < 1e-17 * max(1.0, abs(log_rho)):
            break
    return float(np.exp(log_rho))


def solve(a, b) -> np.ndarray:
    """Solve ``a @ x = b``.

    Raises
    ------
    Singular
        If the LU factorization meets a (numerically) zero pivot.
    """
    a = as_matrix(a, square=True, name="a")
    b = as_matrix(b, name="b")
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"shape mismatch: a is {a.shape}, b is {b.shape}")
    _, sign = lu_logdet(a)
    if sign == 0:
        raise Singular("matrix is singular")
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise Singular(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise Singular("solution is not finite")
    return x
