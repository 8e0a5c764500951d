"""Design matrix construction and the four Gram-matrix flavors.

Two independent routes produce the full Gram matrix: multiplying out the
design matrix (``gram_from_design``) and the closed element form
(``gram_elementwise``).  They share no code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .errors import ZeroShift
from .prm import PRMLike, _frozen, as_prm


class Flavor(str, Enum):
    FULL = "full"
    REDUCED = "reduced"
    SHIFTED = "shifted"
    BORDERED = "bordered"


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    rows: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rows", _frozen(self.rows))

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    @property
    def reduced(self) -> np.ndarray:
        """The pairwise-difference rows, without the unity row."""
        return self.rows[:-1]

    @property
    def unity_row(self) -> np.ndarray:
        return self.rows[-1]


@dataclass(frozen=True, eq=False)
class GramMatrix:
    flavor: Flavor
    entries: np.ndarray
    shift: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def build_design_matrix(prm: PRMLike) -> DesignMatrix:
    """Stack the equations ``w_i - a_ij w_j = 0`` for every ordered pair, then
    the all-ones row.  Rows come in pairs per ``i < j``: first
    ``(+1 at i, -a_ij at j)``, then ``(-a_ji at i, +1 at j)``."""
    a = as_prm(prm).entries
    n = a.shape[0]
    d = np.zeros((n * (n - 1) + 1, n))
    k = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            d[k, i] = 1.0
            d[k, j] = -a[i, j]
            k += 1
            d[k, i] = -a[j, i]
            d[k, j] = 1.0
            k += 1
    d[k, :] = 1.0
    return DesignMatrix(d)


def _exact_gram(rows: np.ndarray) -> np.ndarray:
    # fsum is correctly rounded, so the result does not depend on row order
    n = rows.shape[1]
    g = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            g[i, j] = g[j, i] = math.fsum(rows[:, i] * rows[:, j])
    return g


def gram_from_design(d: DesignMatrix, include_unity_row: bool = True) -> GramMatrix:
    """``D^T D`` over all rows (full flavor) or over the pairwise rows only."""
    if include_unity_row:
        return GramMatrix(Flavor.FULL, _exact_gram(d.rows))
    return GramMatrix(Flavor.REDUCED, _exact_gram(d.reduced))


def gram_elementwise(prm: PRMLike) -> GramMatrix:
    """Full Gram matrix from the closed form: diagonal ``(n-1) + sum_k a_kj^2``,
    off-diagonal ``1 - a_ij - a_ji``."""
    return GramMatrix(Flavor.FULL, kernels.full_gram(as_prm(prm).entries))


def reduced_gram(prm: PRMLike) -> GramMatrix:
    """The unity-free Gram matrix (Blankmeyer's C).  Singular exactly when the
    PRM is perfectly consistent."""
    return GramMatrix(Flavor.REDUCED, kernels.reduced_gram(as_prm(prm).entries))


def shifted_gram(prm: PRMLike, r: float) -> GramMatrix:
    if r == 0:
        raise ZeroShift("shift r must be non-zero; use reduced_gram for r = 0")
    g = kernels.reduced_gram(as_prm(prm).entries) + float(r)
    return GramMatrix(Flavor.SHIFTED, g, shift=float(r))


def bordered(block: np.ndarray) -> np.ndarray:
    n = block.shape[0]
    out = np.zeros((n + 1, n + 1))
    out[:n, :n] = block
    out[:n, n] = 1.0
    out[n, :n] = 1.0
    return out


def lagrangian_gram(prm: PRMLike, r_tilde: float = 0.0) -> GramMatrix:
    """Order ``n + 1`` KKT matrix: ``[[Gbar + r_tilde, e^T], [e, 0]]``."""
    block = kernels.reduced_gram(as_prm(prm).entries)
    if r_tilde != 0:
        block = block + float(r_tilde)
    return GramMatrix(Flavor.BORDERED, bordered(block), shift=float(r_tilde))
