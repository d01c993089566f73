"""Higher Lame differential operators sum_i Q_i(z) d^i/dz^i and their invariants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOperator, LengthMismatch, NegativeFuchsIndex
from .poly import Polynomial, falling_factorial

__all__ = [
    "LameOperator",
    "ClassicalSpec",
    "fuchs_index",
    "is_nondegenerate",
    "diagonal_coefficient",
    "nonresonance",
    "apply_operator",
    "build_classical",
]


@dataclass(frozen=True, eq=False)
class LameOperator:
    """Ordered coefficient list Q_1..Q_k; Q_k must be nonzero.

    q[i-1] holds Q_i.  Lower-order coefficients may be the zero polynomial.
    """

    q: tuple

    def __post_init__(self):
        qs = tuple(p if isinstance(p, Polynomial) else Polynomial(np.asarray(p)) for p in self.q)
        if not qs:
            raise ValueError("operator needs at least one coefficient polynomial")
        if qs[-1].is_zero:
            raise ValueError("leading coefficient Q_k must be nonzero")
        object.__setattr__(self, "q", qs)

    @property
    def order(self) -> int:
        return len(self.q)

    def Q(self, i: int) -> Polynomial:
        """Coefficient of d^i/dz^i (1-based)."""
        return self.q[i - 1]

    @property
    def fuchs_index(self) -> int:
        return fuchs_index(self)

    def leading_A(self, i: int) -> complex:
        """A_i: coefficient of z**(i+r) in Q_i, zero when absent."""
        return self.Q(i).coeff(i + self.fuchs_index)

    def norm(self) -> float:
        """Max coefficient magnitude over all Q_i."""
        return max(p.norm() for p in self.q)

    def is_monic(self, tol: float = 0.0) -> bool:
        return abs(self.q[-1].leading - 1.0) <= tol

    def monic(self) -> "LameOperator":
        """Divide every Q_i by the leading coefficient of Q_k."""
        lead = self.q[-1].leading
        return LameOperator(tuple(p * (1.0 / lead) for p in self.q))

    def scaled(self, c: complex) -> "LameOperator":
        return LameOperator(tuple(p * c for p in self.q))

    def has_real_coeffs(self, tol: float = 1e-12) -> bool:
        return all(p.real_coeffs_close(tol) for p in self.q)

    def __repr__(self):
        degs = [p.degree for p in self.q]
        return f"LameOperator(k={self.order}, degrees={degs}, r={self.fuchs_index})"


def fuchs_index(op: LameOperator) -> int:
    """max over nonzero Q_i of (deg Q_i - i); may be negative."""
    vals = [p.degree - i for i, p in enumerate(op.q, start=1) if not p.is_zero]
    return max(vals)


def is_nondegenerate(op: LameOperator) -> bool:
    """True iff the Fuchs index is non-negative and deg Q_k = k + r."""
    r = fuchs_index(op)
    return r >= 0 and op.q[-1].degree == op.order + r


def require_solvable(op: LameOperator) -> int:
    """Entry guard shared by the pencil/solver layers; returns r."""
    r = fuchs_index(op)
    if r < 0:
        raise NegativeFuchsIndex(
            f"Fuchs index {r} < 0; apply the 1/z transform before solving"
        )
    if op.q[-1].degree != op.order + r:
        raise DegenerateOperator(
            f"deg Q_k = {op.q[-1].degree} != k + r = {op.order + r}"
        )
    return r


def diagonal_coefficient(op: LameOperator, n: int) -> complex:
    """n-th diagonal coefficient: sum_i (n)_i A_i.

    This is the coefficient of z**(n+r) in the image of z**n, the quantity
    whose collisions control resonance.
    """
    r = fuchs_index(op)
    total = 0.0 + 0.0j
    for i in range(1, op.order + 1):
        a = op.Q(i).coeff(i + r)
        if a:
            total += falling_factorial(n, i) * a
    return total


def nonresonance(op: LameOperator, n: int, tol: float = 1e-12):
    """Check diagonal_coefficient(n) differs from all lower levels.

    Returns (ok, witnesses): witnesses lists every j < n whose diagonal
    coefficient is within tol*(1+|L_n|) of L_n.  The paper-level condition is
    exact inequality; the relative tolerance makes the float version honest.
    """
    ln = diagonal_coefficient(op, n)
    thresh = tol * (1.0 + abs(ln))
    witnesses = [j for j in range(n) if abs(diagonal_coefficient(op, j) - ln) <= thresh]
    return (not witnesses), tuple(witnesses)


def apply_operator(op: LameOperator, s: Polynomial) -> Polynomial:
    """Image sum_i Q_i * s^(i); degree <= deg s + r for non-degenerate input."""
    out = Polynomial.zero()
    for i in range(1, op.order + 1):
        qi = op.Q(i)
        if qi.is_zero:
            continue
        ds = s.derivative(i)
        if ds.is_zero:
            continue
        out = out + qi * ds
    return out


@dataclass(frozen=True)
class ClassicalSpec:
    """Data (alphas, betas, k) for the classical two-term operator.

    Builds Q_k = prod(z - alpha_i), Q_{k-1} = sum_j beta_j prod_{i != j}(z -
    alpha_i), all lower coefficients zero.
    """

    alphas: tuple
    betas: tuple
    k: int = 2

    def __post_init__(self):
        a = tuple(complex(x) for x in self.alphas)
        b = tuple(complex(x) for x in self.betas)
        if len(a) != len(b):
            raise LengthMismatch(f"{len(a)} alphas vs {len(b)} betas")
        if not a:
            raise LengthMismatch("need at least one (alpha, beta) pair")
        if self.k < 1:
            raise ValueError("derivative order k must be positive")
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "betas", b)

    @property
    def l(self) -> int:
        return len(self.alphas)


def build_classical(spec: ClassicalSpec) -> LameOperator:
    """Classical operator from (alphas, betas, k); Fuchs index l - k."""
    if spec.k < 2:
        raise ValueError("classical form needs k >= 2 (the residue term sits at order k-1)")
    qk = Polynomial.from_roots(spec.alphas)
    qk1 = Polynomial.zero()
    for j in range(spec.l):
        others = [a for t, a in enumerate(spec.alphas) if t != j]
        qk1 = qk1 + spec.betas[j] * Polynomial.from_roots(others)
    qs = [Polynomial.zero()] * spec.k
    qs[spec.k - 1] = qk
    qs[spec.k - 2] = qk1
    return LameOperator(tuple(qs))
