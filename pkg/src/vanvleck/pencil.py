"""Band action matrices of an operator on Pol_n and rectangular-pencil rank tools.

Grid orientation (fixed once, documented here): the stored array has shape
(n+1, n+r+1); grid[i, j] is the entry for coefficient s_p at power z**q with
i = n - p and j = n + r - q.  Row 0 is the image of z**n read from power
z**(n+r) downwards, so the lower-left triangle vanishes and the main diagonal
carries the diagonal coefficients L_m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegreeTooHigh, FullRank
from .operators import LameOperator, diagonal_coefficient, require_solvable
from .poly import Polynomial, falling_factorial

__all__ = [
    "ActionMatrix",
    "PencilPoint",
    "build_action_matrix",
    "shift_matrix",
    "pencil_at",
    "corank",
    "left_kernel",
    "total_count_pencil",
]

DEFAULT_RANK_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ActionMatrix:
    """Matrix of the operator acting Pol_n -> Pol_{n+r} in the monomial basis."""

    op: LameOperator
    n: int
    r: int
    grid: np.ndarray

    def entry(self, p: int, q: int) -> complex:
        """Coefficient multiplying s_p at power z**q."""
        return complex(self.grid[self.n - p, self.n + self.r - q])

    def row_of(self, p: int) -> np.ndarray:
        """Image coefficients of z**p, from power z**(n+r) down to z**0."""
        return self.grid[self.n - p]


def _entry_Lpq(op: LameOperator, r: int, p: int, q: int) -> complex:
    """L_{p,q} = sum_i (p)_i A_{i,q-p+i} with out-of-range coefficients zero."""
    total = 0.0 + 0.0j
    for i in range(1, op.order + 1):
        a = op.Q(i).coeff(q - p + i)
        if a:
            total += falling_factorial(p, i) * a
    return total


def build_action_matrix(op: LameOperator, n: int) -> ActionMatrix:
    """Assemble the (n+1) x (n+r+1) band matrix for degree budget n."""
    r = require_solvable(op)
    if n < 0:
        raise ValueError("degree budget n must be non-negative")
    grid = np.zeros((n + 1, n + r + 1), dtype=np.complex128)
    for p in range(n + 1):
        # s_p contributes only to powers q in [max(0, p-k), p+r]
        qlo = max(0, p - op.order)
        for q in range(qlo, p + r + 1):
            grid[n - p, n + r - q] = _entry_Lpq(op, r, p, q)
    return ActionMatrix(op=op, n=n, r=r, grid=grid)


def shift_matrix(n: int, r: int, s: int) -> np.ndarray:
    """I_s: ones exactly where q - p = r - s, the direction multiplied by v_{r-s}."""
    if not 0 <= s <= r:
        raise ValueError("shift index s must lie in 0..r")
    grid = np.zeros((n + 1, n + r + 1))
    for p in range(n + 1):
        q = p + r - s
        if 0 <= q <= n + r:
            grid[n - p, n + r - q] = 1.0
    return grid


@dataclass(frozen=True, eq=False)
class PencilPoint:
    """Action matrix evaluated at one candidate spectral polynomial V."""

    base: ActionMatrix
    V: Polynomial
    grid: np.ndarray


def pencil_at(base: ActionMatrix, V: Polynomial) -> PencilPoint:
    """Add sum_m v_m I_{r-m}; diagonal becomes L_m + v_r."""
    if V.degree > base.r:
        raise DegreeTooHigh(f"deg V = {V.degree} exceeds Fuchs index r = {base.r}")
    grid = base.grid.copy()
    for m in range(V.coeffs.size):
        vm = V.coeffs[m]
        if vm:
            grid += vm * shift_matrix(base.n, base.r, base.r - m)
    return PencilPoint(base=base, V=V, grid=grid)


def _singular_values(grid: np.ndarray) -> np.ndarray:
    return np.linalg.svd(grid, compute_uv=False)


def corank(point: PencilPoint, tol: float = DEFAULT_RANK_TOL) -> int:
    """Dimension of the numerical left kernel via singular values."""
    sv = _singular_values(point.grid)
    if sv.size == 0:
        return 0
    smax = sv[0]
    if smax == 0.0:
        return point.grid.shape[0]
    return int(np.sum(sv <= tol * smax))


def left_kernel(point: PencilPoint, tol: float = DEFAULT_RANK_TOL):
    """Orthonormal left-null basis re-read as polynomials (row n-p -> s_p).

    Raises FullRank when the corank is zero.  Each returned polynomial S
    satisfies ||op(S) + V*S|| <= a few * tol * sigma_max * ||S|| empirically;
    the caller re-certifies with an explicit residual.
    """
    u, sv, _ = np.linalg.svd(point.grid)
    smax = sv[0] if sv.size else 0.0
    null_idx = [i for i in range(sv.size) if smax == 0.0 or sv[i] <= tol * smax]
    if not null_idx:
        raise FullRank("pencil point has full row rank")
    n = point.base.n
    out = []
    for i in null_idx:
        w = u[:, i].conj()
        coeffs = w[::-1].copy()  # w[n - p] multiplies row of s_p
        out.append(Polynomial(coeffs))
    return out


def total_count_pencil(op: LameOperator, n: int) -> int:
    """Theoretical number of spectral polynomials with eigenpolynomial degree <= n.

    binom(n+r+1, r+1): the degree of the positive-corank locus for the
    (n+1) x (n+r+1) band pencil, used as the counting oracle.
    """
    r = require_solvable(op)
    return math.comb(n + r + 1, r + 1)
