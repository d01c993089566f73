"""Dense complex univariate polynomials, root extraction, multiplicity clustering.

Coefficients are stored in ascending power order throughout the package; this
matches the natural indexing of the band recurrences in the solver. The zero
polynomial is canonically the empty coefficient array (degree -1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.cluster.hierarchy import linkage

from .errors import DegreeZero, RootFindingFailure

__all__ = [
    "Polynomial",
    "RootSet",
    "falling_factorial",
    "roots",
    "is_hyperbolic",
]

_MACHEPS = float(np.finfo(np.float64).eps)


def falling_factorial(j: int, i: int) -> int:
    """Falling factorial (j)_i = j(j-1)...(j-i+1) as an exact integer.

    (j)_j = j! and (j)_i = 0 whenever j < i.  i = 0 gives the empty product 1.
    """
    if j < 0 or i < 0:
        raise ValueError("falling_factorial expects non-negative arguments")
    if i > j:
        return 0
    out = 1
    for t in range(i):
        out *= j - t
    return out


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Immutable dense polynomial with complex coefficients, ascending powers."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.ascontiguousarray(np.atleast_1d(self.coeffs), dtype=np.complex128)
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        if c.size and not (np.all(np.isfinite(c.real)) and np.all(np.isfinite(c.imag))):
            raise ValueError("coefficients must be finite")
        # canonical form: strip exactly-zero leading (highest power) terms
        nz = np.nonzero(c)[0]
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # --- construction -------------------------------------------------------

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial(np.zeros(0, dtype=np.complex128))

    @staticmethod
    def one() -> "Polynomial":
        return Polynomial(np.ones(1, dtype=np.complex128))

    @staticmethod
    def monomial(power: int, coeff: complex = 1.0) -> "Polynomial":
        c = np.zeros(power + 1, dtype=np.complex128)
        c[power] = coeff
        return Polynomial(c)

    @staticmethod
    def from_roots(root_list) -> "Polynomial":
        """Monic polynomial with the given roots (with repetition)."""
        c = np.ones(1, dtype=np.complex128)
        for r in root_list:
            c = np.convolve(c, np.array([-complex(r), 1.0], dtype=np.complex128))
        return Polynomial(c)

    # --- basic queries --------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def coeff(self, power: int) -> complex:
        """Coefficient of z**power (0 outside the stored range)."""
        if 0 <= power < self.coeffs.size:
            return complex(self.coeffs[power])
        return 0.0 + 0.0j

    @property
    def leading(self) -> complex:
        if self.is_zero:
            return 0.0 + 0.0j
        return complex(self.coeffs[-1])

    def norm(self) -> float:
        """Max coefficient magnitude (the package's working norm)."""
        if self.is_zero:
            return 0.0
        return float(np.max(np.abs(self.coeffs)))

    # --- evaluation -----------------------------------------------------------

    def __call__(self, z):
        """Horner evaluation; accepts scalars or numpy arrays."""
        if self.is_zero:
            return np.zeros_like(np.asarray(z, dtype=np.complex128)) if np.ndim(z) else 0j
        zc = np.asarray(z, dtype=np.complex128)
        acc = np.full_like(zc, self.coeffs[-1])
        for c in self.coeffs[-2::-1]:
            acc = acc * zc + c
        return acc if zc.ndim else complex(acc)

    def eval_magnitude_bound(self, z) -> float:
        """Sum of |c_i| |z|**i, the natural backward-error scale at z."""
        az = abs(complex(z))
        acc = 0.0
        for c in np.abs(self.coeffs[::-1]):
            acc = acc * az + c
        return float(acc)

    # --- calculus / arithmetic -------------------------------------------------

    def derivative(self, order: int = 1) -> "Polynomial":
        """order-th derivative; coefficient j becomes (j+order)_order * c_{j+order}."""
        if order < 0:
            raise ValueError("derivative order must be non-negative")
        if order == 0:
            return self
        if self.degree < order:
            return Polynomial.zero()
        n_out = self.coeffs.size - order
        fac = np.array(
            [falling_factorial(j + order, order) for j in range(n_out)],
            dtype=np.float64,
        )
        return Polynomial(self.coeffs[order:] * fac)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if a.size < b.size:
            a, b = b, a
        out = a.copy()
        out[: b.size] += b
        return Polynomial(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (other * -1.0)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial.zero()
            return Polynomial(np.convolve(self.coeffs, other.coeffs))
        return Polynomial(self.coeffs * complex(other))

    __rmul__ = __mul__

    def shift_up(self, powers: int) -> "Polynomial":
        """Multiply by z**powers."""
        if self.is_zero:
            return self
        return Polynomial(np.concatenate([np.zeros(powers, dtype=np.complex128), self.coeffs]))

    def monic(self) -> "Polynomial":
        if self.is_zero:
            raise ValueError("zero polynomial cannot be made monic")
        return Polynomial(self.coeffs / self.coeffs[-1])

    def trim(self, tol: float) -> "Polynomial":
        """Drop leading coefficients below tol * max|coeff|."""
        if self.is_zero:
            return self
        mags = np.abs(self.coeffs)
        keep = np.nonzero(mags > tol * mags.max())[0]
        return Polynomial(self.coeffs[: keep[-1] + 1]) if keep.size else Polynomial.zero()

    def real_coeffs_close(self, tol: float = 1e-12) -> bool:
        if self.is_zero:
            return True
        return bool(np.max(np.abs(self.coeffs.imag)) <= tol * (1.0 + np.max(np.abs(self.coeffs))))

    def __repr__(self):
        return f"Polynomial(degree={self.degree}, coeffs={np.array2string(self.coeffs, precision=6)})"


@dataclass(frozen=True, eq=False)
class RootSet:
    """Distinct roots with certified multiplicities.

    Sum of multiplicities equals the source degree.  backward_errors[i] is
    |P(root_i)| / sum_j |c_j||root_i|**j, the pointwise backward error; for
    simple well-conditioned roots it sits near machine epsilon, and for a
    certified m-fold cluster centre it is bounded by the certification
    tolerance used during clustering (default 1e-7).
    """

    roots: tuple
    multiplicities: tuple
    cluster_tol: float
    backward_errors: tuple = field(default=())

    def with_repetition(self):
        out = []
        for r, m in zip(self.roots, self.multiplicities):
            out.extend([r] * m)
        return out

    def max_magnitude(self) -> float:
        return max((abs(r) for r in self.roots), default=0.0)


# --- root finding -----------------------------------------------------------


def _aberth(coeffs: np.ndarray, maxiter: int = 220, rtol: float = 1e-14):
    """Aberth-Ehrlich simultaneous iteration on a normalized coefficient array.

    Returns (roots, converged).  coeffs must have nonzero first and last entry.
    """
    n = coeffs.size - 1
    P = Polynomial(coeffs)
    dP = P.derivative()

    # initial guesses on a slightly eccentric circle inside the Cauchy bound
    lead = abs(coeffs[-1])
    radius = 0.5 + 0.5 * max(np.abs(coeffs[:-1]) / lead) ** (1.0 / n)
    low = abs(coeffs[0]) / max(abs(coeffs[0]) + max(np.abs(coeffs[1:])), _MACHEPS)
    radius = max(radius * 0.8, low, 1e-3)
    angles = 2.0 * np.pi * (np.arange(n) + 0.35) / n + 0.6
    x = radius * np.exp(1j * angles)

    converged = np.zeros(n, dtype=bool)
    for _ in range(maxiter):
        px = P(x)
        # Adams-style stopping scale: evaluation magnitude bound at each point
        ax = np.abs(x)
        scale = np.zeros(n)
        for c in np.abs(coeffs[::-1]):
            scale = scale * ax + c
        converged |= np.abs(px) <= 8.0 * _MACHEPS * scale
        if converged.all():
            return x, True
        dpx = dP(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dpx != 0, px / dpx, 0.0)
            diff = x[:, None] - x[None, :]
            np.fill_diagonal(diff, np.inf)
            sums = np.sum(1.0 / diff, axis=1)
            denom = 1.0 - newton * sums
            step = np.where(np.abs(denom) > 1e-30, newton / denom, newton)
        step = np.where(converged, 0.0, step)
        bad = ~np.isfinite(step)
        if bad.any():
            step = np.where(bad, 0.0, step)
            x = np.where(bad, x * (1.0 + 0.05j), x)
        x = x - step
        max_step = float(np.max(np.abs(step[~converged])))
        if max_step <= rtol * max(1.0, float(np.max(np.abs(x)))):
            # stagnated below floating noise: accept if residuals are near scale
            return x, bool(np.all(np.abs(P(x)) <= 1e4 * _MACHEPS * scale))
    return x, False


def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    """Eigenvalues of the companion matrix (fallback path)."""
    c = coeffs / coeffs[-1]
    n = c.size - 1
    if n == 1:
        return np.array([-c[0]])
    m = np.zeros((n, n), dtype=np.complex128)
    m[1:, :-1] = np.eye(n - 1)
    m[:, -1] = -c[:-1]
    return np.linalg.eigvals(m)


def _newton_polish(P: Polynomial, x: np.ndarray, sweeps: int = 3) -> np.ndarray:
    dP = P.derivative()
    for _ in range(sweeps):
        px = P(x)
        dpx = dP(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(np.abs(dpx) > 1e-300, px / dpx, 0.0)
        step = np.where(np.isfinite(step), step, 0.0)
        ok = np.abs(step) < 0.5 * (1.0 + np.abs(x))
        x = np.where(ok, x - step, x)
    return x


def _raw_roots(P: Polynomial) -> np.ndarray:
    """All roots with repetition, unclustered."""
    coeffs = P.coeffs / P.norm()
    # exact zero roots split off first
    k0 = int(np.nonzero(coeffs != 0)[0][0])
    zeros = np.zeros(k0, dtype=np.complex128)
    core = coeffs[k0:]
    if core.size == 1:
        return zeros
    x, ok = _aberth(core)
    if not ok:
        x = _companion_roots(core)
        x = _newton_polish(Polynomial(core), x)
    return np.concatenate([zeros, x])


def _single_linkage_tree(points: np.ndarray):
    """scipy single-linkage tree over complex points; None for < 2 points."""
    if points.size < 2:
        return None
    xy = np.column_stack([points.real, points.imag])
    # tiny jitter-free: linkage handles duplicate points fine
    return linkage(xy, method="single")


def _certify_cluster(P: Polynomial, members: np.ndarray, m: int, certify_rel: float):
    """Try to certify an m-fold root near the given cluster members.

    Polishes the centre with Newton on P^(m-1) and demands every lower
    derivative vanish to within certify_rel of its evaluation bound.
    Returns (centre, backward_error) or None.
    """
    mu = complex(np.mean(members))
    spread = float(np.max(np.abs(members - mu))) if members.size else 0.0
    dPm = P.derivative(m - 1)
    if dPm.is_zero:
        return None
    dd = dPm.derivative()
    for _ in range(30):
        f = dPm(mu)
        g = dd(mu) if not dd.is_zero else 0.0
        if g == 0:
            break
        step = f / g
        if abs(step) > 4.0 * (spread + 1e-3 * (1.0 + abs(mu))):
            break
        mu -= step
        if abs(step) <= 1e-15 * (1.0 + abs(mu)):
            break
    if abs(mu - complex(np.mean(members))) > 8.0 * (spread + 1e-12 * (1 + abs(mu))) and m > 1:
        return None
    worst = 0.0
    for j in range(m):
        dj = P.derivative(j)
        bound = dj.eval_magnitude_bound(mu)
        if bound == 0.0:
            continue
        rel = abs(dj(mu)) / bound
        worst = max(worst, rel)
        if rel > certify_rel:
            return None
    return mu, worst


def _newton_resolution(P: Polynomial, raw: np.ndarray) -> np.ndarray:
    """Per-root indistinguishability radius |P(x)/P'(x)|.

    For a simple well-conditioned root this is ~machine noise; members of a
    noise-split multiple root get a radius comparable to the splitting ring,
    which is exactly what makes them mergeable.
    """
    dP = P.derivative()
    px = np.abs(P(raw))
    dpx = np.abs(dP(raw))
    out = np.empty(raw.size)
    for i in range(raw.size):
        if dpx[i] == 0.0:
            out[i] = 0.0 if px[i] == 0.0 else np.inf
        else:
            out[i] = px[i] / dpx[i]
    return out


def _cluster_roots(P: Polynomial, raw: np.ndarray, cluster_tol: float, certify_rel: float,
                   center_validator=None):
    """Group raw roots into certified multiplicity clusters.

    Walks the single-linkage dendrogram top-down.  A node is accepted as one
    multiple root when (a) its merge distance is within the members' own
    Newton resolution (or cluster_tol), (b) the polished centre passes the
    derivative-smallness certification, and (c) the optional external
    center_validator agrees.  Rejected nodes fall through to their children.
    """
    n = raw.size
    newton_res = _newton_resolution(P, raw)

    out_roots, out_mults, out_errs = [], [], []

    def accept_simple(z):
        z = complex(z)
        bound = P.eval_magnitude_bound(z)
        err = abs(P(z)) / bound if bound else 0.0
        out_roots.append(z)
        out_mults.append(1)
        out_errs.append(err)

    tree = _single_linkage_tree(raw)
    if tree is None:
        for z in raw:
            accept_simple(z)
        return out_roots, out_mults, out_errs

    # reconstruct node membership from the linkage matrix
    members = {i: [i] for i in range(n)}
    dists = {}
    for t, (a, b, d, _) in enumerate(tree):
        node = n + t
        members[node] = members[int(a)] + members[int(b)]
        dists[node] = float(d)
    children = {n + t: (int(row[0]), int(row[1])) for t, row in enumerate(tree)}

    def walk(node):
        idx = members[node]
        s = len(idx)
        if s == 1:
            accept_simple(raw[idx[0]])
            return
        res = float(np.max(newton_res[idx]))
        admissible = dists[node] <= max(cluster_tol, 16.0 * res)
        if admissible:
            cert = _certify_cluster(P, raw[idx], s, certify_rel)
            if cert is not None and (center_validator is None or center_validator(cert[0], s)):
                mu, err = cert
                out_roots.append(mu)
                out_mults.append(s)
                out_errs.append(err)
                return
        a, b = children[node]
        walk(a)
        walk(b)

    walk(n + len(tree) - 1)
    return out_roots, out_mults, out_errs


def roots(P: Polynomial, cluster_tol: float | None = None, certify_rel: float = 1e-7,
          center_validator=None) -> RootSet:
    """All complex roots of P, clustered into certified multiplicities.

    cluster_tol defaults to 1e-6 * (1 + max root magnitude).  Clusters wider
    than cluster_tol are only merged when consistent with the backward-error
    perturbation radius of a genuine multiple root (see _cluster_roots);
    center_validator, when given, independently adjudicates such merges.

    Raises DegreeZero for nonzero constants and ValueError for the zero
    polynomial.
    """
    if P.is_zero:
        raise ValueError("zero polynomial has no well-defined root set")
    if P.degree == 0:
        raise DegreeZero("constant polynomial has no roots")
    raw = _raw_roots(P)
    raw = _newton_polish(P, raw)
    if not np.all(np.isfinite(raw)):
        raise RootFindingFailure("non-finite iterates in root extraction", poly=P.coeffs)
    if cluster_tol is None:
        cluster_tol = 1e-6 * (1.0 + float(np.max(np.abs(raw))))
    rts, mults, errs = _cluster_roots(P, raw, cluster_tol, certify_rel, center_validator)
    order = np.lexsort((np.imag(rts), np.real(rts)))
    return RootSet(
        roots=tuple(complex(rts[i]) for i in order),
        multiplicities=tuple(int(mults[i]) for i in order),
        cluster_tol=float(cluster_tol),
        backward_errors=tuple(float(errs[i]) for i in order),
    )


def is_hyperbolic(P: Polynomial, imag_tol: float | None = None, sep_tol: float | None = None) -> bool:
    """True iff all roots are (numerically) real and simple.

    imag_tol defaults to 1e-8 * (1 + max|coeff|); sep_tol to 1e-7 times the
    root magnitude scale.  Constants are vacuously hyperbolic.
    """
    if P.is_zero:
        raise ValueError("zero polynomial")
    if P.degree == 0:
        return True
    rs = roots(P)
    if any(m > 1 for m in rs.multiplicities):
        return False
    pts = np.array(rs.roots)
    scale = 1.0 + float(np.max(np.abs(pts)))
    if imag_tol is None:
        imag_tol = 1e-8 * (1.0 + P.norm())
    if sep_tol is None:
        sep_tol = 1e-7 * scale
    if np.max(np.abs(pts.imag)) > imag_tol:
        return False
    xs = np.sort(pts.real)
    if xs.size >= 2 and np.min(np.diff(xs)) <= sep_tol:
        return False
    return True
