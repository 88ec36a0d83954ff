"""Lorentzian linear algebra over R^{1,n}.

Vectors are sequences (x_0, x_1, ..., x_n) with index 0 the time
coordinate; the inner product has signature -++...+:

    <x, y> = -x_0 y_0 + x_1 y_1 + ... + x_n y_n

Every operation runs in one of two scalar regimes:

* exact  -- entries are ints / fractions.Fraction; likeness and rank
  decisions are exact (congruence diagonalization, fraction-free
  elimination).  Light-likeness is a measure-zero condition, so exact
  input is the only way to certify it.
* float  -- entries are floats; the same algorithms run with a pivot
  tolerance (PIVOT_TOL) and verdicts that hinge on a pivot smaller
  than BORDERLINE_TOL are flagged borderline.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

# Zero threshold for float pivots / singular values.
PIVOT_TOL = 1e-10
# Float verdicts relying on anything smaller than this are suspect.
BORDERLINE_TOL = 1e-9


class Likeness(enum.Enum):
    """Trichotomy for nonzero vectors and nonzero subspaces."""

    TIMELIKE = "timelike"
    SPACELIKE = "spacelike"
    LIGHTLIKE = "lightlike"


class Inertia(NamedTuple):
    """Signature of a symmetric matrix under congruence."""

    positive: int
    zero: int
    negative: int
    borderline: bool


def is_exact_scalar(value) -> bool:
    """True for scalars that carry no rounding (int or Fraction)."""
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def is_exact_rows(rows) -> bool:
    return all(is_exact_scalar(v) for row in rows for v in row)


def minkowski_metric(n: int) -> np.ndarray:
    """diag(-1, 1, ..., 1) of size (n+1) x (n+1)."""
    j = np.eye(n + 1)
    j[0, 0] = -1.0
    return j


def lorentz_inner(x: Sequence, y: Sequence):
    """<x, y> = -x_0 y_0 + sum_{i>=1} x_i y_i.  Exact on exact input."""
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("vectors must have length >= 2 (n >= 1)")
    acc = -x[0] * y[0]
    for a, b in zip(x[1:], y[1:]):
        acc += a * b
    return acc


def euclid_inner(x: Sequence, y: Sequence):
    """Ordinary dot product, same dimension checks as lorentz_inner."""
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    acc = x[0] * y[0]
    for a, b in zip(x[1:], y[1:]):
        acc += a * b
    return acc


def vector_likeness(v: Sequence) -> Likeness:
    """Classify a nonzero vector by the sign of <v, v>."""
    if all(c == 0 for c in v):
        raise ValueError("likeness undefined for zero vector")
    q = lorentz_inner(v, v)
    if not is_exact_scalar(q):
        if abs(q) <= PIVOT_TOL:
            return Likeness.LIGHTLIKE
    if q > 0:
        return Likeness.SPACELIKE
    if q < 0:
        return Likeness.TIMELIKE
    return Likeness.LIGHTLIKE


def gram_matrix(basis: Sequence[Sequence]) -> list:
    """Matrix of pairwise Lorentzian inner products of the basis vectors."""
    if not basis:
        raise ValueError("empty basis")
    m = len(basis)
    g = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            g[i][j] = g[j][i] = lorentz_inner(basis[i], basis[j])
    return g


def symmetric_inertia(g, pivot_tol: float = PIVOT_TOL) -> Inertia:
    """Counts of positive / zero / negative squares of a symmetric matrix.

    Computed by congruence (symmetric Gaussian) diagonalization, which by
    Sylvester's law yields the eigenvalue sign counts.  Exact when all
    entries are exact; otherwise pivots below ``pivot_tol`` count as zero
    and the result is flagged borderline when any pivot decision was
    closer than BORDERLINE_TOL to the boundary.
    """
    rows = [list(r) for r in g]
    m = len(rows)
    if any(len(r) != m for r in rows):
        raise ValueError("matrix is not square")
    if is_exact_rows(rows):
        return _inertia_exact([[Fraction(v) for v in r] for r in rows])
    return _inertia_float(np.array(rows, dtype=float), pivot_tol)


def _inertia_exact(g: list) -> Inertia:
    m = len(g)
    active = list(range(m))
    pos = neg = zero = 0
    while active:
        p = next((i for i in active if g[i][i] != 0), None)
        if p is None:
            pair = next(
                ((i, j) for ai, i in enumerate(active) for j in active[ai + 1:] if g[i][j] != 0),
                None,
            )
            if pair is None:
                zero += len(active)
                break
            i, j = pair
            # congruence x_i <- x_i + x_j turns the off-diagonal into a pivot
            for c in active:
                g[i][c] += g[j][c]
            for r in active:
                g[r][i] += g[r][j]
            p = i
        d = g[p][p]
        if d > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in active if i != p]
        for r in rest:
            f = g[r][p]
            if f:
                for c in rest:
                    g[r][c] -= f * g[p][c] / d
        active = rest
    return Inertia(pos, zero, neg, False)


def _inertia_float(g: np.ndarray, pivot_tol: float) -> Inertia:
    m = g.shape[0]
    active = list(range(m))
    pos = neg = zero = 0
    borderline = False
    while active:
        diag = [(abs(g[i, i]), i) for i in active]
        dmax, p = max(diag)
        if dmax <= pivot_tol:
            off = 0.0
            oi = oj = active[0]
            for ai, i in enumerate(active):
                for j in active[ai + 1:]:
                    if abs(g[i, j]) > off:
                        off, oi, oj = abs(g[i, j]), i, j
            if off <= pivot_tol:
                zero += len(active)
                borderline = True
                break
            for c in active:
                g[oi, c] += g[oj, c]
            for r in active:
                g[r, oi] += g[r, oj]
            p = oi
        d = g[p, p]
        if abs(d) < BORDERLINE_TOL:
            borderline = True
        if d > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in active if i != p]
        for r in rest:
            f = g[r, p] / d
            if f:
                for c in rest:
                    g[r, c] -= f * g[p, c]
        active = rest
    return Inertia(pos, zero, neg, borderline)


def subspace_likeness(basis: Sequence[Sequence]) -> Likeness:
    """Likeness of the span of linearly independent vectors.

    Timelike iff the restricted form has a negative square, spacelike iff
    it is positive definite, lightlike iff positive semidefinite and
    degenerate.  Raises on an empty or dependent basis (inertia zeros
    would then be ambiguous).
    """
    return _subspace_likeness_inertia(basis)[0]


def _subspace_likeness_inertia(basis) -> tuple[Likeness, Inertia]:
    if not basis:
        raise ValueError("empty basis")
    m = len(basis)
    if matrix_rank(basis) != m:
        raise ValueError("basis is rank-deficient")
    inertia = symmetric_inertia(gram_matrix(basis))
    if inertia.negative > 0:
        return Likeness.TIMELIKE, inertia
    if inertia.zero > 0:
        return Likeness.LIGHTLIKE, inertia
    return Likeness.SPACELIKE, inertia


def hyperplane_likeness(alpha: Sequence) -> Likeness:
    """Likeness of the hyperplane -x_0 + alpha_1 x_1 + ... + alpha_n x_n = 0.

    Decided by comparing sum(alpha_i^2) with 1; exact when the
    coefficients are exact.
    """
    s = sum((Fraction(a) if is_exact_scalar(a) else a) ** 2 for a in alpha)
    if not is_exact_scalar(s) and abs(s - 1) <= PIVOT_TOL:
        return Likeness.LIGHTLIKE
    if s > 1:
        return Likeness.TIMELIKE
    if s < 1:
        return Likeness.SPACELIKE
    return Likeness.LIGHTLIKE


def rank_exact(matrix: Sequence[Sequence]) -> int:
    """Exact rank of a matrix with int/Fraction entries.

    Denominators are cleared row by row, then fraction-free (Bareiss)
    elimination runs over the integers.
    """
    rows = []
    for row in matrix:
        ints = []
        lcm = 1
        for v in row:
            f = Fraction(v)
            lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
        for v in row:
            f = Fraction(v)
            ints.append(int(f * lcm))
        rows.append(ints)
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    rank = 0
    prev = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            for j in range(c + 1, ncols):
                rows[i][j] = (rows[i][j] * rows[r][c] - rows[i][c] * rows[r][j]) // prev
            rows[i][c] = 0
        prev = rows[r][c]
        rank += 1
        r += 1
        if r == len(rows):
            break
    return rank


def rank_numeric(matrix, tol: float = PIVOT_TOL) -> int:
    """Float rank via singular values above an absolute threshold."""
    a = np.asarray(matrix, dtype=float)
    if a.size == 0:
        return 0
    return int(np.sum(np.linalg.svd(a, compute_uv=False) > tol))


def matrix_rank(rows) -> int:
    """Rank in the regime the entries call for (exact or float)."""
    if is_exact_rows(rows):
        return rank_exact(rows)
    return rank_numeric(rows)


def greedy_independent(vectors: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal independent subset, scanned first to last."""
    if not vectors:
        return []
    if is_exact_rows(vectors):
        return _greedy_independent_exact(vectors)
    return _greedy_independent_float(vectors)


def _greedy_independent_exact(vectors) -> list[int]:
    picked = []
    echelon = []  # (pivot column, reduced row)
    for idx, vec in enumerate(vectors):
        w = [Fraction(v) for v in vec]
        for pcol, prow in echelon:
            if w[pcol]:
                f = w[pcol] / prow[pcol]
                for c in range(len(w)):
                    w[c] -= f * prow[c]
        pcol = next((c for c, v in enumerate(w) if v != 0), None)
        if pcol is not None:
            picked.append(idx)
            echelon.append((pcol, w))
    return picked


def _greedy_independent_float(vectors, tol: float = PIVOT_TOL) -> list[int]:
    picked = []
    ortho = []
    for idx, vec in enumerate(vectors):
        w = np.asarray(vec, dtype=float).copy()
        for q in ortho:
            w -= (q @ w) * q
        nrm = np.linalg.norm(w)
        if nrm > tol:
            picked.append(idx)
            ortho.append(w / nrm)
    return picked


def solve_rational(a, b) -> list[Fraction]:
    """Exact solution of a square system with Fraction entries."""
    m = len(a)
    aug = [[Fraction(v) for v in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    for c in range(m):
        piv = next((r for r in range(c, m) if aug[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        aug[c], aug[piv] = aug[piv], aug[c]
        for r in range(m):
            if r != c and aug[r][c]:
                f = aug[r][c] / aug[c][c]
                for j in range(c, m + 1):
                    aug[r][j] -= f * aug[c][j]
    return [aug[r][m] / aug[r][r] for r in range(m)]


def boost_matrix(n: int, axis: int, rapidity: float) -> np.ndarray:
    """Hyperbolic rotation in the (x_0, x_axis) plane, 1 <= axis <= n."""
    if not 1 <= axis <= n:
        raise ValueError(f"boost axis must be in 1..{n}")
    g = np.eye(n + 1)
    ch, sh = math.cosh(rapidity), math.sinh(rapidity)
    g[0, 0] = g[axis, axis] = ch
    g[0, axis] = g[axis, 0] = sh
    return g


def rotation_matrix(n: int, i: int, j: int, angle: float) -> np.ndarray:
    """Rotation in the space plane (x_i, x_j), 1 <= i < j <= n."""
    if not (1 <= i < j <= n):
        raise ValueError("rotation needs two distinct space axes")
    g = np.eye(n + 1)
    c, s = math.cos(angle), math.sin(angle)
    g[i, i] = g[j, j] = c
    g[i, j] = -s
    g[j, i] = s
    return g


def random_lorentz_transform(n: int, seed: int) -> np.ndarray:
    """Seeded random product of space rotations and boosts.

    Satisfies G^T J G = J up to rounding.  Rapidities are drawn from
    [-1.5, 1.5] to keep the conditioning of downstream tests tame.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    rng = np.random.default_rng(seed)
    g = np.eye(n + 1)
    for _ in range(max(2, n)):
        if n >= 2:
            i, j = sorted(rng.choice(np.arange(1, n + 1), size=2, replace=False))
            g = rotation_matrix(n, int(i), int(j), rng.uniform(0.0, 2.0 * math.pi)) @ g
        axis = int(rng.integers(1, n + 1))
        g = boost_matrix(n, axis, rng.uniform(-1.5, 1.5)) @ g
    return g
