"""Elimination-based solving of the spectral problem op(S) + V*S = 0.

The band system for (V, S) is lower-triangular in the s-coefficients once the
leading coefficient v_r is pinned to -L_n.  The first n equations express
s_{n-1}..s_0 as polynomials in the tail unknowns (v_{r-1},..,v_0) -- the only
divisions are by the constants L_{n-j} - L_n, which are nonzero exactly when
the level is nonresonant.  The remaining r equations form the reduced system;
its solutions, counted with multiplicity, number binom(n+r, r).

Numeric strategy per Fuchs index:
  r=0  direct triangular back-substitution (one pair per level);
  r=1  the reduced system is a single univariate polynomial in v_0;
  r=2  v_0 is eliminated between the two reduced equations by a Sylvester
       resultant (sampled on an FFT circle and interpolated), v_1 comes from
       the resultant roots and v_0 is recovered per root, Newton-polished.

Resonant levels with r <= 1 fall back to a candidate scan: v_r must equal
some -L_j, and for each candidate the remaining one-parameter rank-drop
problem is solved through square column-subpencil generalized eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    DegreeDeficient,
    FullRank,
    ResonanceError,
    RootFindingFailure,
    SpuriousRootError,
    UnsupportedFuchsIndex,
)
from .operators import (
    LameOperator,
    apply_operator,
    diagonal_coefficient,
    nonresonance,
    require_solvable,
)
from .pencil import (
    DEFAULT_RANK_TOL,
    build_action_matrix,
    left_kernel,
    pencil_at,
    shift_matrix,
)
from .poly import Polynomial, _cluster_roots, roots

__all__ = [
    "VPoly",
    "ReducedSystem",
    "SpectralPair",
    "SolveReport",
    "back_substitute",
    "eliminate",
    "validate_pair",
    "solve",
    "solve_r0",
    "solve_r1",
    "solve_r2",
    "sweep_total",
]

DEFAULT_PAIR_TOL = 1e-8
ELIMINATION_SIZE_BOUND = 10**6


# --- dense multivariate polynomials in the tail variables --------------------


class VPoly:
    """Dense polynomial in (v_{r-1}, ..., v_0); axis t is variable v_{r-1-t}.

    Only the operations needed by the elimination recurrence are provided.
    """

    __slots__ = ("a", "nvars")

    def __init__(self, a, nvars: int):
        self.a = np.asarray(a, dtype=np.complex128)
        self.nvars = nvars
        if self.a.ndim != nvars:
            raise ValueError("coefficient grid rank must equal the variable count")

    @staticmethod
    def const(value: complex, nvars: int) -> "VPoly":
        a = np.zeros((1,) * nvars, dtype=np.complex128)
        a[(0,) * nvars] = value
        return VPoly(a, nvars)

    def copy(self) -> "VPoly":
        return VPoly(self.a.copy(), self.nvars)

    @property
    def size(self) -> int:
        return self.a.size

    def __add__(self, other: "VPoly") -> "VPoly":
        shape = tuple(max(x, y) for x, y in zip(self.a.shape, other.a.shape))
        out = np.zeros(shape, dtype=np.complex128)
        out[tuple(slice(0, s) for s in self.a.shape)] += self.a
        out[tuple(slice(0, s) for s in other.a.shape)] += other.a
        return VPoly(out, self.nvars)

    def scale(self, c: complex) -> "VPoly":
        return VPoly(self.a * c, self.nvars)

    def mul_affine(self, const: complex, var_axis: int | None) -> "VPoly":
        """Multiply by (const + v) where v is the variable on var_axis (or absent)."""
        out = VPoly(self.a * const, self.nvars)
        if var_axis is not None:
            shape = list(self.a.shape)
            shape[var_axis] += 1
            shifted = np.zeros(shape, dtype=np.complex128)
            idx = [slice(0, s) for s in self.a.shape]
            idx[var_axis] = slice(1, self.a.shape[var_axis] + 1)
            shifted[tuple(idx)] = self.a
            out = out + VPoly(shifted, self.nvars)
        return out

    def diff(self, var_axis: int) -> "VPoly":
        d = self.a.shape[var_axis]
        if d <= 1:
            return VPoly.const(0.0, self.nvars)
        idx = [slice(None)] * self.nvars
        idx[var_axis] = slice(1, d)
        sliced = self.a[tuple(idx)]
        fac_shape = [1] * self.nvars
        fac_shape[var_axis] = d - 1
        fac = np.arange(1, d, dtype=np.float64).reshape(fac_shape)
        return VPoly(sliced * fac, self.nvars)

    def __call__(self, *values) -> complex:
        """Evaluate at numeric values ordered like the axes (v_{r-1} first)."""
        acc = self.a
        for v in values:
            res = acc[-1]
            for t in range(acc.shape[0] - 2, -1, -1):
                res = res * v + acc[t]
            acc = res
        return complex(acc)

    def magnitude_bound(self, *values) -> float:
        acc = np.abs(self.a)
        for v in values:
            av = abs(complex(v))
            res = acc[-1]
            for t in range(acc.shape[0] - 2, -1, -1):
                res = res * av + acc[t]
            acc = res
        return float(acc)

    def norm(self) -> float:
        return float(np.max(np.abs(self.a))) if self.a.size else 0.0


# --- reduced system / report types -------------------------------------------


@dataclass(frozen=True, eq=False)
class ReducedSystem:
    """Output of the elimination: r equations in the tail unknowns.

    equations[i] vanishes on the solution set and has quasi-homogeneous
    weighted degree <= n+1+i under the weights w(v_j) = r-j.
    """

    r: int
    n: int
    fixed_vr: complex
    equations: tuple
    weighted_degrees: tuple


@dataclass(frozen=True, eq=False)
class SpectralPair:
    """One validated solution (V, S) with its certificates."""

    V: Polynomial
    S: Polynomial
    residual: float
    multiplicity: int
    degree_certificate: int
    corank: int = 1
    family: tuple = ()

    @property
    def is_family(self) -> bool:
        return self.corank > 1

    def sort_key(self):
        key = []
        for m in range(self.V.coeffs.size):
            c = self.V.coeffs[m]
            key.extend([round(c.real, 12), round(c.imag, 12)])
        return tuple(key)


@dataclass(frozen=True, eq=False)
class SolveReport:
    """All pairs of one degree level plus counting diagnostics."""

    n: int
    r: int
    nonresonant: bool
    witnesses: tuple
    pairs: tuple
    count_with_multiplicity: int
    expected_count: int
    diagnostics: dict = field(default_factory=dict)


# --- shared band-system coefficients ------------------------------------------


def _L(op: LameOperator, p: int, q: int) -> complex:
    from .pencil import _entry_Lpq

    return _entry_Lpq(op, op.fuchs_index, p, q)


def _diagonal_gaps(op: LameOperator, n: int):
    """d_j = L_{n-j} - L_n for j = 1..n; raises on a (near-)vanishing gap."""
    ln = diagonal_coefficient(op, n)
    gaps = np.zeros(n + 1, dtype=np.complex128)
    for j in range(1, n + 1):
        gaps[j] = diagonal_coefficient(op, n - j) - ln
        if abs(gaps[j]) <= 1e-12 * (1.0 + abs(ln)):
            raise ResonanceError(
                f"diagonal collision L_{n-j} = L_{n} at level n={n}",
                level=n,
                witnesses=(n - j,),
            )
    return ln, gaps


def back_substitute(op: LameOperator, n: int, v_tail=None, symbolic: bool = False):
    """Express s_n..s_0 from the first n+1 band equations with s_n = 1, v_r = -L_n.

    Numeric mode: v_tail holds the values (v_{r-1}, ..., v_0) and the return
    value is the list [s_n, ..., s_0] of complex numbers.  Symbolic mode
    ignores v_tail and returns the same list as polynomials in the tail
    unknowns (VPoly), the fixed denominators L_{n-j} - L_n divided out.

    Raises ResonanceError naming the colliding level when a denominator
    vanishes.
    """
    r = require_solvable(op)
    ln, gaps = _diagonal_gaps(op, n)
    nv = r  # tail unknowns v_{r-1}..v_0

    if symbolic:
        s = [VPoly.const(1.0, nv)]
        budget = ELIMINATION_SIZE_BOUND
        for j in range(1, n + 1):
            acc = VPoly.const(0.0, nv)
            for i in range(j):
                m = r - j + i  # index of the v appearing with s_{n-i} here
                cst = _L(op, n - i, n + r - j)
                axis = (r - 1 - m) if 0 <= m <= r - 1 else None
                acc = acc + s[i].mul_affine(cst, axis)
            sj = acc.scale(-1.0 / gaps[j])
            budget -= sj.size
            if budget < 0:
                raise UnsupportedFuchsIndex(
                    "symbolic elimination exceeded the configured size bound"
                )
            s.append(sj)
        return s

    if v_tail is None:
        v_tail = ()
    v_tail = [complex(v) for v in v_tail]
    if len(v_tail) != r:
        raise ValueError(f"expected {r} tail values v_(r-1)..v_0, got {len(v_tail)}")
    s = np.zeros(n + 1, dtype=np.complex128)
    s[0] = 1.0
    for j in range(1, n + 1):
        acc = 0.0 + 0.0j
        for i in range(j):
            m = r - j + i
            c = _L(op, n - i, n + r - j)
            if 0 <= m <= r - 1:
                c = c + v_tail[r - 1 - m]
            acc += s[i] * c
        s[j] = -acc / gaps[j]
    return list(s)


def eliminate(op: LameOperator, n: int) -> ReducedSystem:
    """Reduced system of r polynomial equations in (v_{r-1}, ..., v_0).

    Fixes v_r = -L_n, substitutes the symbolic back-substitution into the last
    r band equations.  Requires r >= 1 and the n-th nonresonance condition.
    """
    r = require_solvable(op)
    if r < 1:
        raise UnsupportedFuchsIndex("nothing to eliminate when r = 0")
    ln = diagonal_coefficient(op, n)
    s = back_substitute(op, n, symbolic=True)
    eqs = []
    for j in range(n + 1, n + r + 1):
        acc = VPoly.const(0.0, r)
        for i in range(n + 1):
            m = r - j + i
            cst = _L(op, n - i, n + r - j)
            axis = (r - 1 - m) if 0 <= m <= r - 1 else None
            acc = acc + s[i].mul_affine(cst, axis)
        eqs.append(acc)
    return ReducedSystem(
        r=r,
        n=n,
        fixed_vr=-ln,
        equations=tuple(eqs),
        weighted_degrees=tuple(range(n + 1, n + r + 1)),
    )


# --- validation ----------------------------------------------------------------


def _residual(op: LameOperator, V: Polynomial, S: Polynomial) -> float:
    """||op(S) + V*S||_inf / (||op||_inf * ||S||_inf)."""
    img = apply_operator(op, S) + V * S
    denom = op.norm() * S.norm()
    return img.norm() / denom if denom else img.norm()


def validate_pair(
    op: LameOperator,
    V: Polynomial,
    n: int,
    tol: float = DEFAULT_PAIR_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
    multiplicity: int = 1,
) -> SpectralPair:
    """Certify one candidate V through the pencil route.

    Builds the pencil point, demands positive corank, picks the kernel member
    of maximal leading coefficient and normalizes it to s_n = 1.  The degree
    certificate is residual-based: if the leading component were numerical
    noise, dividing by it would wreck the residual.  Raises FullRank when no
    kernel exists and DegreeDeficient when the kernel holds no polynomial of
    degree exactly n.
    """
    base = build_action_matrix(op, n)
    point = pencil_at(base, V)
    kernel = left_kernel(point, tol=rank_tol)  # raises FullRank
    c = len(kernel)
    best = max(kernel, key=lambda p: abs(p.coeff(n)))
    if abs(best.coeff(n)) == 0.0:
        raise DegreeDeficient(
            f"kernel at this V contains no polynomial of degree exactly {n}"
        )
    S = Polynomial(best.coeffs / best.coeff(n))
    res = _residual(op, V, S)
    if res > tol:
        raise DegreeDeficient(
            f"no degree-{n} kernel member at this V survives the residual "
            f"check ({res:.3e} > {tol:.1e})"
        )
    return SpectralPair(
        V=V,
        S=S,
        residual=res,
        multiplicity=multiplicity,
        degree_certificate=n,
        corank=c,
        family=tuple(kernel) if c > 1 else (),
    )


def _make_pair(op, V, n, v_tail, tol, multiplicity):
    """Pair with back-substituted S, re-validated through the pencil route."""
    pencil_pair = validate_pair(op, V, n, tol=tol, multiplicity=multiplicity)
    s_desc = back_substitute(op, n, v_tail=v_tail)
    S = Polynomial(np.array(s_desc[::-1], dtype=np.complex128))
    res = _residual(op, V, S)
    if res > tol:
        # back-substitution lost accuracy; keep the kernel-route S instead
        return pencil_pair
    return SpectralPair(
        V=V,
        S=S,
        residual=res,
        multiplicity=multiplicity,
        degree_certificate=n,
        corank=pencil_pair.corank,
        family=pencil_pair.family,
    )


# --- r = 0 ----------------------------------------------------------------------


def solve_r0(op: LameOperator, n: int, tol: float = DEFAULT_PAIR_TOL) -> SolveReport:
    """Exactly solvable case: V is the constant -L_n, S by triangular solve."""
    r = require_solvable(op)
    if r != 0:
        raise ValueError("solve_r0 requires Fuchs index 0")
    ok, wit = nonresonance(op, n)
    if not ok:
        raise ResonanceError(f"level {n} is resonant", level=n, witnesses=wit)
    ln = diagonal_coefficient(op, n)
    V = Polynomial(np.array([-ln]))
    pair = _make_pair(op, V, n, v_tail=(), tol=tol, multiplicity=1)
    return SolveReport(
        n=n,
        r=0,
        nonresonant=True,
        witnesses=(),
        pairs=(pair,),
        count_with_multiplicity=1,
        expected_count=1,
    )


# --- r = 1 ----------------------------------------------------------------------


def _univariate_from_vpoly(e: VPoly) -> Polynomial:
    return Polynomial(e.a.reshape(-1))


def solve_r1(op: LameOperator, n: int, tol: float = DEFAULT_PAIR_TOL,
             cluster_tol: float | None = None) -> SolveReport:
    """All pairs at level n for Fuchs index 1 via the eliminated univariate."""
    r = require_solvable(op)
    if r != 1:
        raise ValueError("solve_r1 requires Fuchs index 1")
    ok, wit = nonresonance(op, n)
    if not ok:
        raise ResonanceError(f"level {n} is resonant", level=n, witnesses=wit)
    system = eliminate(op, n)
    E = _univariate_from_vpoly(system.equations[0])
    if E.degree != n + 1:
        raise RootFindingFailure(
            f"eliminated polynomial has degree {E.degree}, expected {n + 1}",
            poly=E.coeffs,
        )
    E = Polynomial(E.coeffs / E.norm())
    ln = diagonal_coefficient(op, n)

    def _merge_ok(center, _m):
        # multiple-root merges must correspond to an actual solution point
        try:
            validate_pair(op, Polynomial(np.array([center, -ln])), n, tol=1e-6)
            return True
        except (FullRank, DegreeDeficient, SpuriousRootError):
            return False

    rs = roots(E, cluster_tol=cluster_tol, center_validator=_merge_ok)
    pairs = []
    for v0, mult in zip(rs.roots, rs.multiplicities):
        V = Polynomial(np.array([v0, -ln]))
        pairs.append(_make_pair(op, V, n, v_tail=(v0,), tol=tol, multiplicity=mult))
    pairs.sort(key=SpectralPair.sort_key)
    count = sum(p.multiplicity for p in pairs)
    return SolveReport(
        n=n,
        r=1,
        nonresonant=True,
        witnesses=(),
        pairs=tuple(pairs),
        count_with_multiplicity=count,
        expected_count=math.comb(n + 1, 1),
        diagnostics={"eliminated_degree": E.degree},
    )


# --- r = 2 ----------------------------------------------------------------------


def _v0_degree(e: VPoly) -> int:
    """Actual degree in v_0 (axis 1), ignoring exactly-zero top slices."""
    a = e.a
    mx = np.max(np.abs(a)) if a.size else 0.0
    if mx == 0.0:
        return 0
    for d in range(a.shape[1] - 1, -1, -1):
        if np.max(np.abs(a[:, d])) > 1e-14 * mx:
            return d
    return 0


def _eval_v1_slices(e: VPoly, samples: np.ndarray, d0: int) -> np.ndarray:
    """E(v1=t, v0) coefficients for all samples t: shape (N, d0+1)."""
    a = e.a[:, : d0 + 1]
    out = np.zeros((samples.size, d0 + 1), dtype=np.complex128)
    for c0 in range(d0 + 1):
        col = a[:, c0]
        acc = np.full(samples.shape, col[-1], dtype=np.complex128)
        for t in range(col.size - 2, -1, -1):
            acc = acc * samples + col[t]
        out[:, c0] = acc
    return out


def _sylvester_dets(p_rows: np.ndarray, q_rows: np.ndarray, dp: int, dq: int) -> np.ndarray:
    """Batched Sylvester determinants for samples of p (deg dp) and q (deg dq)."""
    nsamp = p_rows.shape[0]
    size = dp + dq
    if size == 0:
        return np.ones(nsamp, dtype=np.complex128)
    mats = np.zeros((nsamp, size, size), dtype=np.complex128)
    # dq rows carry p's coefficients (descending), dp rows carry q's
    for row in range(dq):
        mats[:, row, row : row + dp + 1] = p_rows[:, ::-1]
    for row in range(dp):
        mats[:, dq + row, row : row + dq + 1] = q_rows[:, ::-1]
    return np.linalg.det(mats)


def _resultant_v0(e1: VPoly, e2: VPoly, radius: float) -> Polynomial:
    """Resultant of the two reduced equations w.r.t. v_0 as a polynomial in v_1.

    Sampled on a circle of the given radius and interpolated by inverse FFT.
    Coefficients below the determinant-evaluation noise floor at that radius
    (~eps * max|det| / radius^d) are zeroed before the relative trim, so a
    badly scaled radius cannot inflate the apparent degree.
    """
    d1 = _v0_degree(e1)
    d2 = _v0_degree(e2)
    du1 = e1.a.shape[0] - 1
    du2 = e2.a.shape[0] - 1
    bound = du1 * d2 + du2 * d1
    if bound == 0:
        raise RootFindingFailure("reduced system has no v_0 dependence to eliminate")
    # extra samples past the degree bound measure the actual noise level
    nsamp = 1 << max(4, int(math.ceil(math.log2(bound + 9))))
    samples = radius * np.exp(2j * np.pi * (np.arange(nsamp) + 0.2937) / nsamp)
    p_rows = _eval_v1_slices(e1, samples, d1)
    q_rows = _eval_v1_slices(e2, samples, d2)
    dets = _sylvester_dets(p_rows, q_rows, d1, d2)
    # forward FFT/N projects sample values onto coefficient d at index d;
    # the phase offset of the sample ring is divided back out below
    phase = np.exp(2j * np.pi * 0.2937 / nsamp)
    raw = np.fft.fft(dets) / nsamp
    floor = 8.0 * float(np.max(np.abs(raw[bound + 1 :])))
    floor = max(floor, 16.0 * np.finfo(float).eps * float(np.max(np.abs(dets))))
    coeffs = np.zeros(bound + 1, dtype=np.complex128)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        for d in range(bound + 1):
            denom = radius ** d
            if not np.isfinite(denom) or denom == 0.0:
                break
            if abs(raw[d]) > floor:
                coeffs[d] = raw[d] / denom / (phase ** d)
    R = Polynomial(coeffs)
    if R.is_zero:
        return R
    return R.trim(1e-10)


def _fujiwara_bound(coeffs: np.ndarray) -> float:
    """Classical upper bound on root magnitudes, used as a sampling scale."""
    lead = abs(coeffs[-1])
    deg = coeffs.size - 1
    vals = [
        abs(coeffs[i]) / lead for i in range(deg)
    ]
    return 1e-6 + 2.0 * max(
        (v ** (1.0 / (deg - i)) for i, v in enumerate(vals) if v > 0), default=0.0
    )


def _sylvester_matrix_poly(e1: VPoly, e2: VPoly, d1: int, d2: int) -> np.ndarray:
    """Sylvester matrix of the pair as a matrix polynomial in v_1.

    Returns C of shape (D+1, s, s) with S(v1) = sum_d C[d] v1^d, s = d1+d2.
    """
    s = d1 + d2
    D = max(e1.a.shape[0], e2.a.shape[0]) - 1
    C = np.zeros((D + 1, s, s), dtype=np.complex128)
    for row in range(d2):
        for t in range(d1 + 1):
            prof = e1.a[:, d1 - t]  # coefficient of v0^(d1-t), profile in v1
            C[: prof.size, row, row + t] = prof
    for row in range(d1):
        for t in range(d2 + 1):
            prof = e2.a[:, d2 - t]
            C[: prof.size, d2 + row, row + t] = prof
    # drop exactly-zero top matrices
    while C.shape[0] > 1 and not np.any(C[-1]):
        C = C[:-1]
    return C


def _v1_roots_polyeig(e1: VPoly, e2: VPoly, d1: int, d2: int, cap: float) -> np.ndarray:
    """Finite v_1 roots of det(Sylvester(v1)) via companion linearization + QZ.

    Pointwise backward-stable, unlike interpolating the determinant globally,
    whose coefficients drown in dynamic range for root constellations on
    rings.  Eigenvalues beyond cap are the infinity artifacts of the
    linearization and are discarded.
    """
    C = _sylvester_matrix_poly(e1, e2, d1, d2)
    D = C.shape[0] - 1
    s = C.shape[1]
    if D == 0:
        return np.zeros(0, dtype=np.complex128)
    # balance the coefficient matrices through the substitution v1 = gamma*mu,
    # else far-apart ||C_0||, ||C_D|| push genuine eigenvalues to infinity
    n0 = float(np.max(np.abs(C[0])))
    nD = float(np.max(np.abs(C[D])))
    gamma = (n0 / nD) ** (1.0 / D) if n0 > 0 and nD > 0 else 1.0
    gamma = min(max(gamma, 1e-8), 1e8)
    Cs = np.array([C[d] * gamma**d for d in range(D + 1)])
    Cs /= max(float(np.max(np.abs(Cs))), 1e-300)
    N = s * D
    A = np.zeros((N, N), dtype=np.complex128)
    B = np.eye(N, dtype=np.complex128)
    A[: N - s, s:] = np.eye(N - s)
    for d in range(D):
        A[N - s :, d * s : (d + 1) * s] = -Cs[d]
    B[N - s :, N - s :] = Cs[D]
    vals = gamma * scipy.linalg.eigvals(A, B)
    finite = vals[np.isfinite(vals)]
    return finite[np.abs(finite) <= cap]


def _newton_polish_pair(e1: VPoly, e2: VPoly, v1: complex, v0: complex, sweeps: int = 12):
    """Joint Newton iteration on the 2x2 reduced system."""
    d11, d10 = e1.diff(0), e1.diff(1)
    d21, d20 = e2.diff(0), e2.diff(1)
    for _ in range(sweeps):
        f = np.array([e1(v1, v0), e2(v1, v0)])
        J = np.array(
            [[d11(v1, v0), d10(v1, v0)], [d21(v1, v0), d20(v1, v0)]],
            dtype=np.complex128,
        )
        try:
            step = np.linalg.solve(J, f)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        if abs(step[0]) > 0.5 * (1 + abs(v1)) or abs(step[1]) > 0.5 * (1 + abs(v0)):
            break
        v1, v0 = v1 - step[0], v0 - step[1]
        if abs(step[0]) <= 1e-15 * (1 + abs(v1)) and abs(step[1]) <= 1e-15 * (1 + abs(v0)):
            break
    return complex(v1), complex(v0)


def _slice_at_v1(e: VPoly, v1: complex):
    """Univariate coefficients (in v_0) of E(v1, .) plus their magnitude bounds."""
    powers = v1 ** np.arange(e.a.shape[0])
    coeffs = e.a.T @ powers
    bounds = np.abs(e.a.T) @ np.abs(powers)
    return coeffs, bounds


def _joint_error(e1: VPoly, e2: VPoly, v1: complex, v0: complex) -> float:
    g1 = e1.magnitude_bound(v1, v0)
    g2 = e2.magnitude_bound(v1, v0)
    r1 = abs(e1(v1, v0)) / g1 if g1 else 0.0
    r2 = abs(e2(v1, v0)) / g2 if g2 else 0.0
    return max(r1, r2)


def _recover_v0(e1: VPoly, e2: VPoly, v1: complex, joint_tol: float = 3e-2):
    """Candidate common v_0 roots of the two equations at a fixed v_1.

    The joint-residual filter here is deliberately loose: v_1 itself carries
    interpolation error, so candidates are polished jointly afterwards and
    re-filtered tightly.  A slice whose coefficients all cancel below its own
    magnitude bound is numerically the zero polynomial and is skipped as a
    root source.
    """
    c1, b1 = _slice_at_v1(e1, v1)
    c2, b2 = _slice_at_v1(e2, v1)
    srcs = []
    for c, b in ((c1, b1), (c2, b2)):
        p = Polynomial(c).trim(1e-13)
        live = np.max(np.abs(c)) > 1e-10 * (np.max(b) + 1e-300)
        if live and p.degree >= 1:
            srcs.append(p)
    if not srcs:
        return []
    out = []
    for src in srcs:
        cand = roots(Polynomial(src.coeffs / src.norm()))
        for x in cand.roots:
            err = _joint_error(e1, e2, v1, x)
            if err <= joint_tol:
                out.append((complex(x), err))
    out.sort(key=lambda t: t[1])
    return out


def solve_r2(op: LameOperator, n: int, tol: float = DEFAULT_PAIR_TOL,
             cluster_tol: float | None = None) -> SolveReport:
    """All pairs at level n for Fuchs index 2 via resultant elimination of v_0."""
    r = require_solvable(op)
    if r != 2:
        raise ValueError("solve_r2 requires Fuchs index 2")
    ok, wit = nonresonance(op, n)
    if not ok:
        raise ResonanceError(f"level {n} is resonant", level=n, witnesses=wit)
    system = eliminate(op, n)
    e1, e2 = system.equations
    ln = diagonal_coefficient(op, n)
    expected = math.comb(n + 2, 2)
    d1 = _v0_degree(e1)
    d2 = _v0_degree(e2)

    # v_1 roots from the QZ-linearized Sylvester matrix polynomial: pointwise
    # backward-stable where the interpolated resultant's coefficients are not
    raw = _v1_roots_polyeig(e1, e2, d1, d2, cap=1e9 * (1.0 + abs(ln)))
    if raw.size == 0:
        raise RootFindingFailure("Sylvester pencil produced no finite eigenvalues")

    # the explicit resultant still anchors multiple-root certification; its
    # FFT circle must sit near the root-magnitude scale or high-degree
    # coefficients drown in dynamic range, hence the radius search
    r0 = 1.0 + abs(ln)
    R = None
    for radius in (r0, 8.0 * r0, r0 / 8.0):
        cand = _resultant_v0(e1, e2, radius)
        if R is None or cand.degree > R.degree:
            R = cand
    if R.degree >= 1:
        est = _fujiwara_bound(R.coeffs)
        if est > 4 * r0 or est < r0 / 4:
            cand = _resultant_v0(e1, e2, max(est, 1e-6))
            if cand.degree >= R.degree:
                R = cand
    if R.degree < 1:
        raise RootFindingFailure("resultant degenerated to a constant", poly=R.coeffs)

    def _merge_ok(center, _m):
        # a v_1 merge centre must itself sit on a solution of the reduced system
        for v0c, _joint in _recover_v0(e1, e2, center)[:4]:
            v1p, v0p = _newton_polish_pair(e1, e2, center, v0c)
            if _joint_error(e1, e2, v1p, v0p) > 1e-8:
                continue
            if abs(v1p - center) > 1e-2 * (1.0 + abs(center)):
                continue
            try:
                validate_pair(op, Polynomial(np.array([v0p, v1p, -ln])), n, tol=1e-6)
                return True
            except (FullRank, DegreeDeficient, SpuriousRootError):
                continue
        return False

    if cluster_tol is None:
        cluster_tol = 1e-6 * (1.0 + float(np.max(np.abs(raw))))
    Rn = Polynomial(R.coeffs / R.norm())
    cl_roots, cl_mults, _cl_errs = _cluster_roots(Rn, raw, cluster_tol, 1e-7, _merge_ok)

    pairs = []
    leftovers = []
    for v1c, mult in zip(cl_roots, cl_mults):
        found = []
        for v0c, _joint in _recover_v0(e1, e2, v1c):
            v1p, v0p = _newton_polish_pair(e1, e2, v1c, v0c)
            if _joint_error(e1, e2, v1p, v0p) > 1e-8:
                continue
            if abs(v1p - v1c) > 0.2 * (1.0 + abs(v1c)):
                continue  # polished away from this cluster entirely
            found.append((v1p, v0p, Polynomial(np.array([v0p, v1p, -ln]))))
        # dedupe v0 candidates that polished to the same point
        uniq = []
        for v1p, v0p, V in found:
            if all(abs(v0p - u[1]) + abs(v1p - u[0]) > 1e-7 * (1 + abs(v0p) + abs(v1p)) for u in uniq):
                uniq.append((v1p, v0p, V))
        validated = []
        for v1p, v0p, V in uniq:
            try:
                pair = _make_pair(op, V, n, v_tail=(v1p, v0p), tol=tol, multiplicity=1)
            except (FullRank, DegreeDeficient, SpuriousRootError):
                continue
            validated.append(pair)
        if not validated:
            leftovers.append((v1c, mult))
            continue
        if len(validated) == 1:
            pairs.append(
                SpectralPair(
                    V=validated[0].V,
                    S=validated[0].S,
                    residual=validated[0].residual,
                    multiplicity=mult,
                    degree_certificate=n,
                    corank=validated[0].corank,
                    family=validated[0].family,
                )
            )
        else:
            # several v_0 branches over one v_1 cluster: split the multiplicity
            base, extra = divmod(mult, len(validated))
            for t, pr in enumerate(validated):
                m_t = base + (1 if t < extra else 0)
                if m_t == 0:
                    continue
                pairs.append(
                    SpectralPair(
                        V=pr.V, S=pr.S, residual=pr.residual, multiplicity=m_t,
                        degree_certificate=n, corank=pr.corank, family=pr.family,
                    )
                )
    # quasi-infinite eigenvalues of the linearization (nearly singular leading
    # block) show up far outside the genuine root constellation and never
    # recover a v_0; they are artifacts, not missed solutions
    artifacts = 0
    if leftovers:
        max_rec = max((p.V.coeffs[1].real ** 2 + p.V.coeffs[1].imag ** 2) ** 0.5 for p in pairs) if pairs else 0.0
        genuine_missing = [v for v, _ in leftovers if abs(v) <= 8.0 * (1.0 + max_rec)]
        artifacts = len(leftovers) - len(genuine_missing)
        if genuine_missing:
            raise SpuriousRootError(
                f"{len(genuine_missing)} resultant roots yielded no validated pair",
                candidates=tuple(genuine_missing),
            )
    # inaccurate resultant roots from different clusters may polish onto the
    # same solution; merge coincident V's, summing multiplicities
    merged = []
    for p in sorted(pairs, key=SpectralPair.sort_key):
        hit = None
        for idx, q in enumerate(merged):
            d = p.V - q.V
            dist = 0.0 if d.is_zero else float(np.max(np.abs(d.coeffs)))
            if dist <= 1e-7 * (1.0 + p.V.norm()):
                hit = idx
                break
        if hit is None:
            merged.append(p)
        else:
            q = merged[hit]
            merged[hit] = SpectralPair(
                V=q.V, S=q.S, residual=q.residual,
                multiplicity=q.multiplicity + p.multiplicity,
                degree_certificate=n, corank=q.corank, family=q.family,
            )
    pairs = merged
    count = sum(p.multiplicity for p in pairs)
    return SolveReport(
        n=n,
        r=2,
        nonresonant=True,
        witnesses=(),
        pairs=tuple(pairs),
        count_with_multiplicity=count,
        expected_count=expected,
        diagnostics={
            "resultant_degree": R.degree,
            "finite_eigenvalues": int(raw.size),
            "discarded_infinity_artifacts": artifacts,
        },
    )


# --- resonant fallback ------------------------------------------------------------


def _scan_candidates_r1(op, n, vr):
    """v_0 candidates for a fixed v_r: eigenvalues of square column subpencils."""
    base = build_action_matrix(op, n)
    B = base.grid + vr * shift_matrix(n, 1, 0)
    C = shift_matrix(n, 1, 1)
    cands = []
    for cols in (slice(0, n + 1), slice(1, n + 2)):
        Bs, Cs = B[:, cols], C[:, cols]
        try:
            vals = scipy.linalg.eigvals(Bs, -Cs)
        except Exception:
            continue
        cands.extend(v for v in vals if np.isfinite(v))
    uniq = []
    for v in cands:
        if all(abs(v - u) > 1e-8 * (1 + abs(v)) for u in uniq):
            uniq.append(complex(v))
    return uniq


def _resonant_scan(op: LameOperator, n: int, witnesses, tol: float) -> SolveReport:
    """Candidate scan for resonant levels, r <= 1 only.

    Any admissible V must have v_r = -L_j for some j <= n (a diagonal entry of
    the pencil has to vanish).  Kernel dimension stands in for multiplicity.
    """
    r = require_solvable(op)
    if r > 1:
        raise ResonanceError(
            f"level {n} is resonant and r = {r} > 1 has no scan fallback",
            level=n,
            witnesses=witnesses,
        )
    lvals = [diagonal_coefficient(op, j) for j in range(n + 1)]
    vr_cands = []
    for lv in lvals:
        if all(abs(-lv - u) > 1e-10 * (1 + abs(lv)) for u in vr_cands):
            vr_cands.append(-lv)
    pairs = []

    def _vdist(a: Polynomial, b: Polynomial) -> float:
        diff = a - b
        return 0.0 if diff.is_zero else float(np.max(np.abs(diff.coeffs)))

    for vr in vr_cands:
        if r == 0:
            candidates = [Polynomial(np.array([vr]))]
        else:
            candidates = [
                Polynomial(np.array([v0, vr])) for v0 in _scan_candidates_r1(op, n, vr)
            ]
        for V in candidates:
            try:
                pair = validate_pair(op, V, n, tol=tol)
            except (FullRank, DegreeDeficient, SpuriousRootError):
                continue
            pair = SpectralPair(
                V=pair.V, S=pair.S, residual=pair.residual,
                multiplicity=pair.corank, degree_certificate=n,
                corank=pair.corank, family=pair.family,
            )
            if all(_vdist(pair.V, q.V) > 1e-7 * (1 + pair.V.norm()) for q in pairs):
                pairs.append(pair)
    pairs.sort(key=SpectralPair.sort_key)
    count = sum(p.multiplicity for p in pairs)
    return SolveReport(
        n=n,
        r=r,
        nonresonant=False,
        witnesses=tuple(witnesses),
        pairs=tuple(pairs),
        count_with_multiplicity=count,
        expected_count=math.comb(n + r, r),
        diagnostics={"fallback": "corank-scan", "multiplicity_is_kernel_dim": True},
    )


# --- dispatch and sweeping ----------------------------------------------------------


def solve(op: LameOperator, n: int, tol: float = DEFAULT_PAIR_TOL,
          cluster_tol: float | None = None) -> SolveReport:
    """Solve one degree level, routing on the Fuchs index and resonance."""
    r = require_solvable(op)
    if r > 2:
        raise UnsupportedFuchsIndex(f"numeric solving supports r <= 2, got r = {r}")
    ok, wit = nonresonance(op, n)
    if not ok:
        return _resonant_scan(op, n, wit, tol)
    if r == 0:
        return solve_r0(op, n, tol=tol)
    if r == 1:
        return solve_r1(op, n, tol=tol, cluster_tol=cluster_tol)
    return solve_r2(op, n, tol=tol, cluster_tol=cluster_tol)


def sweep_total(op: LameOperator, n_max: int, tol: float = DEFAULT_PAIR_TOL):
    """Solve every level 0..n_max and compare the running total with the
    hockey-stick count binom(n_max+r+1, r+1).

    Returns (total, levels, expected_total) where levels is the per-level
    report list.  Failures other than handled resonance propagate annotated
    with the level index.
    """
    r = require_solvable(op)
    levels = []
    total = 0
    for m in range(n_max + 1):
        try:
            rep = solve(op, m, tol=tol)
        except (ResonanceError, UnsupportedFuchsIndex):
            raise
        except Exception as exc:  # annotate with the failing level
            raise type(exc)(f"level {m}: {exc}") from exc
        levels.append(rep)
        total += rep.count_with_multiplicity
    return total, levels, math.comb(n_max + r + 1, r + 1)
