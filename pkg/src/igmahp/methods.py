"""Inverse Gram Matrix prioritization methods and the Blankmeyer closed form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import SingularMatrix, ZeroShiftOnConsistent
from .gram import gram_elementwise, gram_from_design, build_design_matrix, lagrangian_gram, reduced_gram, shifted_gram
from .linalg import invert, lu_factor
from .prm import PRMLike, PriorityVector, as_prm

ILL_CONDITIONED = 1e-10


@dataclass(frozen=True, eq=False)
class MethodResult:
    weights: PriorityVector
    method: str
    multiplier: Optional[float] = None
    row_sums: Optional[np.ndarray] = None  # unnormalized e G^-1 where applicable
    diagnostics: tuple = ()

    @property
    def w(self) -> np.ndarray:
        return self.weights.weights


def _diagnostics(w: np.ndarray, rcond: float) -> tuple:
    flags = []
    if np.any(w <= 0):
        flags.append("NonPositiveWeight")
    if rcond < ILL_CONDITIONED:
        flags.append("IllConditioned")
    return tuple(flags)


def _normalized_row_sums(g: np.ndarray, label: str) -> MethodResult:
    f = lu_factor(g)
    inv = f.solve(np.eye(f.order))
    v = inv.sum(axis=1)
    w = v / v.sum()
    return MethodResult(
        weights=PriorityVector(w),
        method=label,
        row_sums=v,
        diagnostics=_diagnostics(w, f.rcond_estimate),
    )


def pigm(prm: PRMLike, via_design: bool = False) -> MethodResult:
    """Pseudo-IGM: normalized row sums of the inverse full Gram matrix.

    ``via_design`` builds the Gram matrix as ``D^T D`` instead of from the
    element form; the weights agree to rounding.
    """
    prm = as_prm(prm)
    g = gram_from_design(build_design_matrix(prm)) if via_design else gram_elementwise(prm)
    return _normalized_row_sums(g.entries, "PIGM")


def nigm(prm: PRMLike, r: float = 1.0) -> MethodResult:
    """Normalized-IGM: normalized row sums of ``(Gbar + r)^-1``.

    ``r = 0`` is the Blankmeyer path and fails on consistent input with
    ZeroShiftOnConsistent.
    """
    prm = as_prm(prm)
    label = f"NIGM(r={r:g})"
    if r == 0:
        try:
            return _normalized_row_sums(reduced_gram(prm).entries, label)
        except SingularMatrix as exc:
            raise ZeroShiftOnConsistent(
                "r = 0 leaves the reduced Gram matrix singular (perfectly consistent PRM?)",
                step=exc.step,
            ) from exc
    return _normalized_row_sums(shifted_gram(prm, r).entries, label)


def ligm(prm: PRMLike, r_tilde: float = 0.0) -> MethodResult:
    """Lagrangian-IGM: solve the bordered system for ``(w, lambda)``.

    The weights do not depend on ``r_tilde``; the multiplier shifts by
    ``-r_tilde``.
    """
    prm = as_prm(prm)
    n = prm.n
    f = lu_factor(lagrangian_gram(prm, r_tilde).entries)
    q = np.zeros(n + 1)
    q[n] = 1.0
    sol = f.solve(q)
    w, lam = sol[:n], float(sol[n])
    return MethodResult(
        weights=PriorityVector(w, multiplier=lam),
        method="LIGM" if r_tilde == 0 else f"LIGM(r={r_tilde:g})",
        multiplier=lam,
        diagnostics=_diagnostics(w, f.rcond_estimate),
    )


def blankmeyer(prm: PRMLike) -> MethodResult:
    """``C^-1 e / (e^T C^-1 e)`` with ``C`` the reduced Gram matrix.

    Raises SingularMatrix on every perfectly consistent PRM; that is the
    documented limitation of this closed form.
    """
    prm = as_prm(prm)
    return _normalized_row_sums(reduced_gram(prm).entries, "Blankmeyer")


def pseudo_inverse_solution(prm: PRMLike) -> np.ndarray:
    """Last column of ``G^-1 D^T``, i.e. the unnormalized PIGM vector."""
    d = build_design_matrix(prm)
    g = gram_from_design(d)
    return (invert(g.entries) @ d.rows.T)[:, -1]


METHODS = {
    "pigm": pigm,
    "nigm": nigm,
    "ligm": ligm,
    "blankmeyer": blankmeyer,
}
