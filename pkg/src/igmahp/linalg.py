"""Dense LU factorization, inversion, solves and power iteration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, NoConvergence, SingularMatrix, ValidationError

SINGULAR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LUFactors:
    """Combined unit-lower/upper storage with the row permutation applied.

    ``rcond_estimate`` is the smallest pivot magnitude relative to the largest
    input entry: a cheap conditioning signal, not a true condition number.
    """

    lu: np.ndarray
    perm: np.ndarray
    rcond_estimate: float

    @property
    def order(self) -> int:
        return self.lu.shape[0]

    @property
    def lower(self) -> np.ndarray:
        return np.tril(self.lu, -1) + np.eye(self.order)

    @property
    def upper(self) -> np.ndarray:
        return np.triu(self.lu)

    def solve(self, rhs) -> np.ndarray:
        b = np.asarray(rhs, dtype=np.float64)
        if b.shape[0] != self.order:
            raise DimensionMismatch(f"rhs has {b.shape[0]} rows, matrix order is {self.order}")
        if b.ndim == 1:
            return kernels.lu_solve(self.lu, self.perm, np.ascontiguousarray(b[:, None]))[:, 0]
        return kernels.lu_solve(self.lu, self.perm, np.ascontiguousarray(b))


def _square(m) -> np.ndarray:
    a = np.ascontiguousarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def lu_factor(m, rel_tol: float = SINGULAR_TOL) -> LUFactors:
    """Partial-pivoting LU; raises SingularMatrix when a pivot falls below
    ``rel_tol * max|m_ij|``."""
    a = _square(m)
    lu, perm, status, step, min_pivot = kernels.lu_factor(a, rel_tol)
    if status != kernels.LU_OK:
        raise SingularMatrix(
            f"pivot {step + 1} of {a.shape[0]} is below {rel_tol:g} x max|entry|", step=int(step)
        )
    lu.setflags(write=False)
    return LUFactors(lu=lu, perm=perm, rcond_estimate=float(min_pivot))


def invert(m, rel_tol: float = SINGULAR_TOL) -> np.ndarray:
    f = lu_factor(m, rel_tol)
    return f.solve(np.eye(f.order))


def solve(m, rhs, rel_tol: float = SINGULAR_TOL) -> np.ndarray:
    a = _square(m)
    b = np.asarray(rhs, dtype=np.float64)
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"rhs length {b.shape[0]} does not match order {a.shape[0]}")
    return lu_factor(a, rel_tol).solve(b)


def principal_eigen(m, tol: float = 1e-10, max_iter: int = 10_000):
    """Perron root and eigenvector (summing to 1) of a positive matrix."""
    a = _square(m)
    if np.any(a <= 0):
        raise ValidationError("power iteration here requires a strictly positive matrix")
    lam, vec, _, converged = kernels.power_iteration(a, tol, max_iter)
    if not converged:
        raise NoConvergence(f"power iteration did not reach tol={tol:g} in {max_iter} steps")
    return float(lam), vec
