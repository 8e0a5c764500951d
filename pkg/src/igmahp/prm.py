"""Pairwise reciprocal matrices: validation, generation, WLS objective, consistency."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import kernels
from .errors import (
    BadDiagonal,
    DimensionMismatch,
    NonPositiveEntry,
    NonSquare,
    ReciprocityViolation,
    UnsupportedOrder,
    ValidationError,
    ZeroWeight,
)

RECIPROCITY_TOL = 1e-12
WEIGHT_SUM_TOL = 1e-10

# Saaty's random consistency index for n = 3..15.
RANDOM_INDEX = {
    3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45,
    10: 1.49, 11: 1.51, 12: 1.48, 13: 1.56, 14: 1.57, 15: 1.59,
}


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PairwiseReciprocalMatrix:
    """A validated PRM.  Build through :func:`validate_prm`, :func:`ideal_prm`
    or :func:`random_prm`; the constructor itself does not check invariants."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def permuted(self, perm: Sequence[int]) -> "PairwiseReciprocalMatrix":
        p = np.asarray(perm)
        return PairwiseReciprocalMatrix(self.entries[np.ix_(p, p)])

    def __eq__(self, other):
        if not isinstance(other, PairwiseReciprocalMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class PriorityVector:
    weights: np.ndarray
    multiplier: Optional[float] = None

    def __post_init__(self):
        w = _frozen(self.weights)
        if w.ndim != 1:
            raise DimensionMismatch("priority vector must be one-dimensional")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValidationError(f"weights sum to {float(w.sum())!r}, expected 1")
        object.__setattr__(self, "weights", w)

    @classmethod
    def normalized(cls, raw, multiplier=None) -> "PriorityVector":
        raw = np.asarray(raw, dtype=np.float64)
        return cls(raw / raw.sum(), multiplier)

    def __len__(self):
        return self.weights.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.weights if dtype is None else self.weights.astype(dtype)

    def rounded(self, places: int = 3) -> tuple:
        return tuple(round(float(x), places) for x in self.weights)


@dataclass(frozen=True)
class JudgmentScale:
    """Ordered judgment values ``(1/z, ..., 1/2, 1, 2, ..., z)``."""

    points: tuple

    @classmethod
    def saaty(cls, z: int = 9) -> "JudgmentScale":
        if z < 1:
            raise ValidationError("scale size must be at least 1")
        lower = tuple(1.0 / k for k in range(z, 1, -1))
        upper = tuple(float(k) for k in range(1, z + 1))
        return cls(lower + upper)

    def __post_init__(self):
        if not self.points:
            raise ValidationError("judgment scale is empty")

    @property
    def z(self) -> int:
        return (len(self.points) + 1) // 2

    def reciprocal_index(self) -> np.ndarray:
        """``reciprocal_index()[k]`` is the position of ``1/points[k]``."""
        pts = np.asarray(self.points)
        idx = np.empty(len(pts), dtype=np.int64)
        for k, p in enumerate(pts):
            hit = np.flatnonzero(np.isclose(pts, 1.0 / p, rtol=1e-14, atol=0.0))
            if hit.size == 0:
                raise ValidationError(f"scale not closed under reciprocal: 1/{p} missing")
            idx[k] = hit[0]
        return idx


@dataclass(frozen=True)
class ConsistencyReport:
    lambda_max: float
    ci: float
    cr: Optional[float] = field(default=None)


PRMLike = Union[PairwiseReciprocalMatrix, np.ndarray, Sequence[Sequence[float]]]
WeightsLike = Union[PriorityVector, np.ndarray, Sequence[float]]


def validate_prm(raw) -> PairwiseReciprocalMatrix:
    """Check a raw square array against the PRM axioms and wrap it.

    Locations in error messages are 1-based (row, column).
    """
    a = np.asarray(raw, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n < 2:
        raise NonSquare("a PRM needs at least 2 criteria")
    bad = ~np.isfinite(a) | (a <= 0)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise NonPositiveEntry(f"entry ({i + 1},{j + 1}) = {float(a[i, j])!r} is not a positive finite number")
    for i in range(n):
        if abs(a[i, i] - 1.0) > RECIPROCITY_TOL:
            raise BadDiagonal(f"diagonal entry ({i + 1},{i + 1}) = {float(a[i, i])!r}, expected 1")
    for i in range(n):
        for j in range(i):
            if abs(a[i, j] * a[j, i] - 1.0) > RECIPROCITY_TOL:
                raise ReciprocityViolation(
                    f"entry ({i + 1},{j + 1}) = {float(a[i, j])!r} is not the reciprocal of "
                    f"({j + 1},{i + 1}) = {float(a[j, i])!r}",
                    row=i + 1,
                    col=j + 1,
                )
    return PairwiseReciprocalMatrix(a)


def as_prm(prm: PRMLike) -> PairwiseReciprocalMatrix:
    if isinstance(prm, PairwiseReciprocalMatrix):
        return prm
    return validate_prm(prm)


def _weights_array(w: WeightsLike) -> np.ndarray:
    if isinstance(w, PriorityVector):
        return w.weights
    return np.asarray(w, dtype=np.float64)


def ideal_prm(w: WeightsLike) -> PairwiseReciprocalMatrix:
    """The perfectly consistent matrix ``a_ij = w_i / w_j``."""
    w = _weights_array(w)
    if w.ndim != 1 or w.shape[0] < 2:
        raise DimensionMismatch("need a weight vector of length >= 2")
    if np.any(w <= 0) or not np.all(np.isfinite(w)):
        raise ZeroWeight("all weights must be strictly positive")
    a = w[:, None] / w[None, :]
    np.fill_diagonal(a, 1.0)
    return PairwiseReciprocalMatrix(a)


def random_prm(n: int, scale: JudgmentScale | None = None, rng_seed: int = 0) -> PairwiseReciprocalMatrix:
    """Draw every upper-triangle judgment uniformly from ``scale.points``.

    Upper cells are filled in row-major order; each lower cell takes the
    scale point reciprocal to its mirror, so entries are always exact scale
    values.
    """
    if n < 2:
        raise ValidationError("n must be at least 2")
    scale = scale or JudgmentScale.saaty(9)
    pts = np.asarray(scale.points, dtype=np.float64)
    recip = scale.reciprocal_index()
    rng = np.random.default_rng(rng_seed)
    iu, ju = np.triu_indices(n, k=1)
    picks = rng.integers(0, len(pts), size=iu.size)
    a = np.ones((n, n))
    a[iu, ju] = pts[picks]
    a[ju, iu] = pts[recip[picks]]
    return PairwiseReciprocalMatrix(a)


def wls_objective(prm: PRMLike, w: WeightsLike) -> float:
    """``sum_ij (w_i - a_ij w_j)^2``."""
    prm = as_prm(prm)
    w = _weights_array(w)
    if w.shape != (prm.n,):
        raise DimensionMismatch(f"weights of length {w.shape} for a {prm.n}x{prm.n} matrix")
    return float(kernels.wls_objective(prm.entries, np.ascontiguousarray(w)))


def consistency(prm: PRMLike, with_ratio: bool = True, tol: float = 1e-10,
                max_iter: int = 10_000) -> ConsistencyReport:
    """Principal eigenvalue, consistency index and (optionally) ratio.

    Raises UnsupportedOrder when the ratio is requested outside n = 3..15.
    """
    from .linalg import principal_eigen

    prm = as_prm(prm)
    n = prm.n
    if with_ratio and n not in RANDOM_INDEX:
        raise UnsupportedOrder(f"no random index for n = {n} (supported: 3..15)")
    lam, _ = principal_eigen(prm.entries, tol=tol, max_iter=max_iter)
    ci = (lam - n) / (n - 1)
    cr = ci / RANDOM_INDEX[n] if with_ratio else None
    return ConsistencyReport(lambda_max=lam, ci=ci, cr=cr)
