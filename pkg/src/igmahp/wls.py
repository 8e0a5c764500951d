"""Independent numerical checks on the WLS program.

``optimize_wls`` is a restarted Nelder-Mead search over the open simplex.  It
never touches Gram matrices or linear solves, so agreement with the closed
form is real evidence rather than a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import kernels
from .errors import DimensionMismatch, ValidationError
from .prm import PRMLike, PriorityVector, WeightsLike, _weights_array, as_prm


@dataclass(frozen=True)
class OptimizerConfig:
    max_evaluations: int = 500_000
    tolerance: float = 1e-6  # fractional objective tolerance
    seed: int = 0
    initial_point: Optional[WeightsLike] = None
    xtol: float = 1e-10
    step: Optional[float] = None  # initial simplex edge; defaults to 0.5 / n
    floor: float = 1e-9  # interior barrier: weights never drop below this
    max_restarts: int = 64

    def __post_init__(self):
        if self.max_evaluations < 1:
            raise ValidationError("max_evaluations must be >= 1")
        if not self.tolerance > 0:
            raise ValidationError("tolerance must be > 0")


class WLSResult(NamedTuple):
    weights: PriorityVector
    objective: float
    evaluations: int
    budget_exhausted: bool


@dataclass(frozen=True, eq=False)
class KKTResidual:
    stationarity: np.ndarray
    feasibility: float

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(self.stationarity))), abs(self.feasibility))


def optimize_wls(prm: PRMLike, cfg: OptimizerConfig | None = None) -> WLSResult:
    """Minimize ``sum (w_i - a_ij w_j)^2`` over ``sum w = 1, w > 0``.

    The search runs on the first ``n - 1`` weights; the last one is implied
    by the sum, and points are clipped to ``cfg.floor`` then renormalized.
    ``budget_exhausted`` is set instead of raising when the evaluation
    budget runs out first.
    """
    cfg = cfg or OptimizerConfig()
    prm = as_prm(prm)
    n = prm.n
    if cfg.initial_point is None:
        w0 = np.full(n, 1.0 / n)
    else:
        w0 = _weights_array(cfg.initial_point).astype(np.float64)
        if w0.shape != (n,):
            raise DimensionMismatch(f"initial point of length {w0.shape} for n = {n}")
        if np.any(w0 <= 0):
            raise ValidationError("initial point must lie in the open simplex")
        w0 = w0 / w0.sum()
    rng = np.random.default_rng(cfg.seed)
    scales = rng.uniform(0.5, 1.5, size=(cfg.max_restarts, n - 1))
    scales *= rng.choice(np.array([-1.0, 1.0]), size=scales.shape)
    step = cfg.step if cfg.step is not None else 0.5 / n
    w, f, evals, converged = kernels.nelder_mead_restarts(
        prm.entries,
        np.ascontiguousarray(w0[:-1]),
        scales,
        float(step),
        int(cfg.max_evaluations),
        float(cfg.tolerance),
        float(cfg.xtol),
        float(cfg.floor),
    )
    return WLSResult(PriorityVector(w), float(f), int(evals), not converged)


def kkt_residual(prm: PRMLike, w: WeightsLike, lam: float, shift: float = 0.0) -> KKTResidual:
    """Stationarity and feasibility of the WLS Lagrange system at ``(w, lam)``.

    stationarity_k = ((n-1) + sum_{i!=k} a_ik^2) w_k + sum_{i!=k} (-a_ik - a_ki) w_i + lam

    ``shift`` adds ``shift * sum(w)`` to every component, which is the system
    solved by the bordered matrix built on ``Gbar + shift``; its multiplier is
    the unshifted one minus ``shift``.
    """
    a = as_prm(prm).entries
    w = _weights_array(w)
    n = a.shape[0]
    if w.shape != (n,):
        raise DimensionMismatch(f"weights of length {w.shape} for n = {n}")
    off = ~np.eye(n, dtype=bool)
    diag = (n - 1) + np.where(off, a * a, 0.0).sum(axis=0)
    cross = np.where(off, -a - a.T, 0.0)
    stat = diag * w + cross.T @ w + lam + shift * w.sum()
    return KKTResidual(stationarity=stat, feasibility=float(w.sum() - 1.0))


def lagrangian(prm: PRMLike, w: WeightsLike, multiplier: float) -> float:
    """``sum (w_i - a_ij w_j)^2 + multiplier * (sum w - 1)``."""
    a = as_prm(prm).entries
    w = np.ascontiguousarray(_weights_array(w), dtype=np.float64)
    return float(kernels.wls_objective(a, w)) + multiplier * (w.sum() - 1.0)


def finite_diff_gradient(prm: PRMLike, w: WeightsLike, lam: float, h: float = 1e-6) -> np.ndarray:
    """Central differences of the Lagrangian with respect to each weight.

    ``lam`` is the multiplier in the ``kkt_residual`` convention.  Raw
    differentiation of the objective yields ``2 * (Gbar w)``, so the
    Lagrangian is evaluated with multiplier ``2 * lam`` and the result equals
    ``2 * kkt_residual(prm, w, lam).stationarity``.
    """
    if not h > 0:
        raise ValidationError("step h must be positive")
    prm = as_prm(prm)
    w = np.array(_weights_array(w), dtype=np.float64)
    mult = 2.0 * lam
    grad = np.empty_like(w)
    for k in range(w.shape[0]):
        up = w.copy()
        dn = w.copy()
        up[k] += h
        dn[k] -= h
        grad[k] = (lagrangian(prm, up, mult) - lagrangian(prm, dn, mult)) / (2.0 * h)
    return grad
