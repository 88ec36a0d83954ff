"""Construction of explicit coordinate-change witnesses.

A witness realizes target_chain(L(h(x))) = normal_form(x) with h a
single affine map of the source and the target chain an ordered list of
elementary diffeomorphisms (affine maps and quadratic shears of one
coordinate).  Matrices act in the column convention y = M x + b; the
chain is applied first element first.

The construction proceeds in four stages:

1. a target affine map strips the redundant quadratic terms from all
   but the last component (every component of L shares the same
   quadratic part);
2. a source affine map centers p_0 and flips the time sign, so the
   last component becomes -x_0^2 + sum x_i^2 exactly;
3. the k linear components are rotated into alpha_i x_0 + x_i form via
   a target mixing matrix (orthonormalizing the space parts of the
   difference vectors) and a source isometry fixing the time axis;
4. completing the square in x_0 (or the bilinear pivot trick in the
   light-like case) reduces the last component to the normal-form
   quadratic.

Rank-deficient configurations embed the construction for the maximal
independent subset and zero out the dependent target slots; spanning
and single-point configurations short-circuit to direct compositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .core import PIVOT_TOL, Likeness, matrix_rank
from .mappings import (
    INCLUSION,
    SAME_POINT,
    ClassificationReport,
    NormalForm,
    PointConfig,
    classify_euclid,
    classify_lorentz,
    eval_euclid_dsq,
    eval_lorentz_dsq,
    recognition_subspace,
)

# Divisors produced by the branch logic are only *logically* bounded away
# from zero; anything below this aborts with the offending stage named.
GUARD_TOL = 1e-12


class StageGuardError(RuntimeError):
    """A pipeline stage hit a numerically unusable quantity."""


@dataclass(frozen=True)
class AffineMap:
    """Invertible affine map x -> matrix @ x + offset."""

    matrix: np.ndarray
    offset: np.ndarray

    @classmethod
    def build(cls, matrix, offset=None) -> "AffineMap":
        m = np.asarray(matrix, dtype=float)
        b = np.zeros(m.shape[0]) if offset is None else np.asarray(offset, dtype=float)
        return cls(m, b)

    @classmethod
    def identity(cls, dim: int) -> "AffineMap":
        return cls(np.eye(dim), np.zeros(dim))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    def __call__(self, x) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=float) + self.offset

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self after inner: (self.compose(inner))(x) = self(inner(x))."""
        return AffineMap(self.matrix @ inner.matrix, self.matrix @ inner.offset + self.offset)

    def inverse(self) -> "AffineMap":
        minv = np.linalg.inv(self.matrix)
        return AffineMap(minv, -minv @ self.offset)


@dataclass(frozen=True)
class TargetAffine:
    """Target elementary map of affine kind."""

    stage: str
    matrix: np.ndarray
    offset: np.ndarray

    @classmethod
    def build(cls, stage, matrix, offset=None) -> "TargetAffine":
        m = np.asarray(matrix, dtype=float)
        b = np.zeros(m.shape[0]) if offset is None else np.asarray(offset, dtype=float)
        return cls(stage, m, b)

    kind = "affine"

    def apply(self, y: np.ndarray) -> np.ndarray:
        return self.matrix @ y + self.offset

    def invert(self, y: np.ndarray) -> np.ndarray:
        return np.linalg.solve(self.matrix, y - self.offset)


@dataclass(frozen=True)
class TargetQuadShear:
    """X_t <- sign * X_t + q(other coordinates), all others fixed.

    ``quad`` is a symmetric matrix with zero row/column t, so the shear
    self-inverts: X_t <- sign * (X_t - q).
    """

    stage: str
    index: int
    sign: int
    quad: np.ndarray

    kind = "quad_shear"

    def apply(self, y: np.ndarray) -> np.ndarray:
        out = y.copy()
        out[self.index] = self.sign * y[self.index] + y @ self.quad @ y
        return out

    def invert(self, y: np.ndarray) -> np.ndarray:
        out = y.copy()
        out[self.index] = self.sign * (y[self.index] - y @ self.quad @ y)
        return out


TargetElementary = Union[TargetAffine, TargetQuadShear]


@dataclass(frozen=True)
class Checkpoint:
    """Expected intermediate shape of a partially applied witness.

    After composing ``source`` on the right and the first
    ``target_prefix`` chain elements on the left of the distance-squared
    mapping, component m < k must equal row m of ``linear`` applied to x
    and the last component the metric's quadratic form of x.
    """

    stage: str
    source: AffineMap
    target_prefix: int
    linear: np.ndarray     # k x (n+1)
    metric: str

    def expected(self, x: np.ndarray) -> np.ndarray:
        if self.metric == "lorentz":
            quad = -x[0] * x[0] + float(x[1:] @ x[1:])
        else:
            quad = float(x @ x)
        return np.concatenate([self.linear @ x, [quad]])


@dataclass(frozen=True)
class Witness:
    """Source affine map plus ordered target chain realizing a normal form."""

    source: AffineMap
    source_factors: tuple     # ((stage, AffineMap), ...) outermost first
    target: tuple             # TargetElementary chain, applied first element first
    normal_form: NormalForm
    case: str
    metric: str = "lorentz"
    checkpoints: tuple = ()

    @property
    def n(self) -> int:
        return self.source.dim - 1

    @property
    def k(self) -> int:
        return self.normal_form.k


def apply_target_chain(witness: Witness, y, prefix: Optional[int] = None) -> np.ndarray:
    out = np.asarray(y, dtype=float).copy()
    chain = witness.target if prefix is None else witness.target[:prefix]
    for elem in chain:
        out = elem.apply(out)
    return out


def _eval_metric(witness: Witness, config: PointConfig, x) -> np.ndarray:
    if witness.metric == "euclid":
        return np.asarray(eval_euclid_dsq(config, tuple(float(v) for v in x)), dtype=float)
    return np.asarray(eval_lorentz_dsq(config, tuple(float(v) for v in x)), dtype=float)


def apply_witness(witness: Witness, config: PointConfig, x) -> np.ndarray:
    """target_chain(L(source(x))): must equal the normal form at x."""
    return apply_target_chain(witness, _eval_metric(witness, config, witness.source(x)))


def invert_source(witness: Witness) -> AffineMap:
    return witness.source.inverse()


def invert_target_point(witness: Witness, y) -> np.ndarray:
    """Pull y back through the target chain, last element first."""
    out = np.asarray(y, dtype=float).copy()
    for elem in reversed(witness.target):
        out = elem.invert(out)
    return out


# ---------------------------------------------------------------------------
# stage constructors


def _metric_square(vec, metric: str) -> float:
    if metric == "euclid":
        return float(sum(float(c) * float(c) for c in vec))
    return float(-float(vec[0]) * float(vec[0]) + sum(float(c) * float(c) for c in vec[1:]))


def step1_target(config: PointConfig, metric: str = "lorentz") -> TargetAffine:
    """Target affine map cancelling the shared quadratic part.

    Component m becomes (X_0 - X_m + q(p_0 - p_m)) / 2, the last
    component stays X_0; composed with the mapping this leaves
    bilinear-in-(x, p) components plus the base distance square.
    """
    k, n = config.k, config.n
    p0 = config.points[0]
    m = np.zeros((k + 1, k + 1))
    b = np.zeros(k + 1)
    for i in range(1, k + 1):
        m[i - 1, 0] = 0.5
        m[i - 1, i] = -0.5
        d = tuple(a - c for a, c in zip(p0, config.points[i]))
        b[i - 1] = 0.5 * _metric_square(d, metric)
    m[k, 0] = 1.0
    return TargetAffine("H1", m, b)


def step2_source(config: PointConfig, metric: str = "lorentz") -> AffineMap:
    """Source affine map centering p_0 (and flipping time for the Lorentz case)."""
    n = config.n
    m = np.eye(n + 1)
    if metric == "lorentz":
        m[0, 0] = -1.0
    return AffineMap(m, np.asarray([float(c) for c in config.points[0]]))


def _diff_matrix(config: PointConfig, count: Optional[int] = None) -> np.ndarray:
    """Columns p_i - p_0 (i = 1..count) as floats, shape (n+1) x count."""
    diffs = config.diffs()[: count if count is not None else config.k]
    return np.array([[float(c) for c in d] for d in diffs], dtype=float).T


def _pivoted_mgs(cols: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormalize columns with largest-remaining-norm pivoting.

    Returns (Q, B) with cols @ B = Q, Q orthonormal.  Raises if the
    columns are numerically dependent (callers guarantee full rank).
    """
    work = cols.astype(float).copy()
    rows, j = work.shape
    q = np.zeros((rows, j))
    remaining = list(range(j))
    for step in range(j):
        norms = [np.linalg.norm(work[:, c]) for c in remaining]
        pick = remaining[int(np.argmax(norms))]
        v = work[:, pick].copy()
        nrm = np.linalg.norm(v)
        if nrm <= PIVOT_TOL:
            raise StageGuardError("H3: dependent columns reached the orthonormalizer")
        qv = v / nrm
        q[:, step] = qv
        remaining.remove(pick)
        for c in remaining:
            work[:, c] -= (qv @ work[:, c]) * qv
    b = np.linalg.lstsq(cols, q, rcond=None)[0]
    return q, b


def _complete_orthonormal(q: np.ndarray, dim: int) -> np.ndarray:
    """Extend orthonormal columns q to an orthonormal basis of R^dim."""
    cols = [q[:, i] for i in range(q.shape[1])]
    candidates = list(range(dim))
    eye = np.eye(dim)
    while len(cols) < dim:
        best, best_r, best_n = None, None, -1.0
        for c in candidates:
            r = eye[:, c].copy()
            for u in cols:
                r -= (u @ r) * u
            nr = np.linalg.norm(r)
            if nr > best_n:
                best, best_r, best_n = c, r, nr
        for u in cols:           # second pass tightens orthogonality
            best_r -= (u @ best_r) * u
        cols.append(best_r / np.linalg.norm(best_r))
        candidates.remove(best)
    return np.column_stack(cols)


def _contains_time_axis(config: PointConfig, basis: Sequence[Sequence]) -> bool:
    """Exact-when-possible membership test of the time direction in the span."""
    e0 = [1] + [0] * config.n
    rows = [list(v) for v in basis]
    return matrix_rank(rows + [e0]) == len(rows)


@dataclass(frozen=True)
class Step3Result:
    """Orthonormalization data: mixing matrix, source isometry, time row."""

    case: str                  # "generic" (span misses the time axis) or "special"
    j: int
    k: int
    n: int
    b_matrix: np.ndarray       # j x j regular mixing block of H3
    columns: np.ndarray        # (n+1) x j orthonormalized difference columns
    completion: np.ndarray     # n x n orthogonal space block of H4
    h3: TargetAffine
    h4: AffineMap
    alpha: Optional[np.ndarray]   # time row of `columns` (None in the special case)


def step3_orthonormalize(config: PointConfig) -> Step3Result:
    """Build the target mixing map H3 and the source isometry H4.

    Requires the first j difference vectors to be independent (the
    witness builder reorders points to guarantee this).  In the generic
    case the space parts of the difference columns are orthonormalized
    and alpha is the resulting time row; when the span contains the
    time axis the first column is rotated onto it instead.
    """
    rec = recognition_subspace(config)
    j, k, n = rec.dim, config.k, config.n
    if j < 1:
        raise ValueError("all points coincide; no orthonormalization to do")
    if rec.independent != tuple(range(1, j + 1)):
        raise ValueError("independent prefix required (reorder the points first)")
    abar = _diff_matrix(config, j)

    if _contains_time_axis(config, rec.basis()):
        case = "special"
        alpha = None
        if j > 1:
            _, _, vh = np.linalg.svd(abar[0:1, :])
            null = vh[1:, :].T                       # j x (j-1), row-0 annihilator
            spatial = (abar @ null)[1:, :]
            qmat, _ = _pivoted_mgs(spatial)
        else:
            qmat = np.zeros((n, 0))
        u = _complete_orthonormal(qmat, n)
        targets = np.zeros((n + 1, j))
        targets[0, 0] = 1.0
        if j > 1:
            targets[1:, 1:] = qmat
        b = np.linalg.lstsq(abar, targets, rcond=None)[0]
        columns = targets
    else:
        case = "generic"
        qmat, b = _pivoted_mgs(abar[1:, :])
        u = _complete_orthonormal(qmat, n)
        alpha = abar[0, :] @ b
        columns = np.vstack([alpha, qmat])

    h3m = np.eye(k + 1)
    h3m[:j, :j] = b.T
    h4m = np.eye(n + 1)
    h4m[1:, 1:] = u
    return Step3Result(
        case=case, j=j, k=k, n=n, b_matrix=b, columns=columns, completion=u,
        h3=TargetAffine("H3", h3m, np.zeros(k + 1)),
        h4=AffineMap(h4m, np.zeros(n + 1)),
        alpha=alpha,
    )


def lemma4_quantity(alpha) -> float:
    """sum(alpha_i^2); its position relative to 1 mirrors the likeness."""
    a = np.asarray(alpha, dtype=float)
    return float(a @ a)


def _dependent_elimination(config: PointConfig, s3: Step3Result) -> TargetAffine:
    """Zero the target slots of difference vectors inside the span."""
    j, k = s3.j, s3.k
    dep = _diff_matrix(config)[:, j:]
    coeff = np.linalg.lstsq(s3.columns, dep, rcond=None)[0]     # j x (k-j)
    m = np.eye(k + 1)
    m[j:k, :j] = -coeff.T
    return TargetAffine("Btilde", m, np.zeros(k + 1))


@dataclass(frozen=True)
class Step4Result:
    targets: tuple            # elements appended after H3 (and Btilde)
    sources: tuple            # (stage, AffineMap) factors appended after H4


def step4_reduce(s3: Step3Result, likeness: Likeness) -> Step4Result:
    """Reduce the last component to the normal-form quadratic.

    Time/space-like: complete the square in x_0 (quadratic shear H6 on
    the target, scaling map H7 on the source), with a final sign flip
    when j = n forces the definite form.  Light-like: shear away the
    plain squares, pivot a nonzero alpha into slot one, and rescale to
    the x_0 x_1 form (H6', H7', H8').  Span containing the time axis:
    shear plus a source coordinate cycle suffice.
    """
    j, k, n = s3.j, s3.k, s3.n

    if s3.case == "special":
        if likeness is not Likeness.TIMELIKE:
            raise StageGuardError("H5~: span contains the time axis but is not timelike")
        quad = np.zeros((k + 1, k + 1))
        quad[0, 0] = 1.0
        for i in range(1, k):
            quad[i, i] = -1.0
        h5t = TargetQuadShear("H5~", k, 1, quad)
        perm = np.zeros((n + 1, n + 1))
        for m in range(j):
            perm[m, m + 1] = 1.0
        perm[j, 0] = 1.0
        for m in range(j + 1, n + 1):
            perm[m, m] = 1.0
        h6t = AffineMap(perm, np.zeros(n + 1))
        return Step4Result(targets=(h5t,), sources=(("H6~", h6t),))

    alpha = s3.alpha
    h5m = np.eye(n + 1)
    h5m[1:j + 1, 0] = -alpha
    h5 = AffineMap(h5m, np.zeros(n + 1))

    if likeness is Likeness.LIGHTLIKE:
        quad = np.zeros((k + 1, k + 1))
        for i in range(j):
            quad[i, i] = -1.0
        h6p = TargetQuadShear("H6'", k, 1, quad)
        targets: list = [h6p]
        sources: list = [("H5", h5)]

        pivot = int(np.argmax(np.abs(alpha)))
        a2 = alpha.copy()
        if pivot != 0:
            a2[0], a2[pivot] = a2[pivot], a2[0]
            sperm = np.eye(n + 1)
            sperm[[1, pivot + 1]] = sperm[[pivot + 1, 1]]
            tperm = np.eye(k + 1)
            tperm[[0, pivot]] = tperm[[pivot, 0]]
            targets.append(TargetAffine("pivot'", tperm, np.zeros(k + 1)))
            sources.append(("pivot", AffineMap(sperm, np.zeros(n + 1))))
        if abs(a2[0]) <= GUARD_TOL:
            raise StageGuardError("H7': leading alpha vanished in the light-like branch")

        h7m = np.eye(n + 1)
        h7m[1, 1] = -1.0 / (2.0 * a2[0])
        for i in range(1, j):
            h7m[1, i + 1] = -a2[i] / a2[0]
        sources.append(("H7'", AffineMap(h7m, np.zeros(n + 1))))

        h8m = np.eye(k + 1)
        h8m[0, :j] = -2.0 * a2
        targets.append(TargetAffine("H8'", h8m, np.zeros(k + 1)))
        return Step4Result(targets=tuple(targets), sources=tuple(sources))

    s = lemma4_quantity(alpha)
    denom = s - 1.0
    if abs(denom) <= GUARD_TOL:
        raise StageGuardError("H6: |sum(alpha^2) - 1| below guard tolerance")
    c = np.zeros(k + 1)
    c[:j] = alpha
    quad = np.outer(c, c) / denom
    for i in range(j):
        quad[i, i] -= 1.0
    h6 = TargetQuadShear("H6", k, 1, quad)

    h7m = np.eye(n + 1)
    h7m[0, 0] = 1.0 / math.sqrt(abs(denom))
    h7m[0, 1:j + 1] = alpha / denom
    h7 = AffineMap(h7m, np.zeros(n + 1))

    targets = [h6]
    sources = [("H5", h5), ("H7", h7)]
    if likeness is Likeness.SPACELIKE and j == n:
        flip = np.eye(k + 1)
        flip[k, k] = -1.0
        targets.append(TargetAffine("flip", flip, np.zeros(k + 1)))
    return Step4Result(targets=tuple(targets), sources=tuple(sources))


# ---------------------------------------------------------------------------
# whole-witness assembly


def _reorder(config: PointConfig, independent: tuple) -> tuple[PointConfig, Optional[TargetAffine]]:
    k = config.k
    order = list(independent) + [i for i in range(1, k + 1) if i not in independent]
    if order == list(range(1, k + 1)):
        return config, None
    pts = [config.points[0]] + [config.points[i] for i in order]
    perm = np.zeros((k + 1, k + 1))
    perm[0, 0] = 1.0
    for m, i in enumerate(order, start=1):
        perm[m, i] = 1.0
    return PointConfig(config.n, pts), TargetAffine("reorder", perm, np.zeros(k + 1))


def _checkpoint_step2(rconfig: PointConfig, h2: AffineMap, prefix: int, metric: str) -> Checkpoint:
    linear = _diff_matrix(rconfig).T
    return Checkpoint("step2", h2, prefix, linear, metric)


def _compose_sources(factors: Sequence[tuple]) -> AffineMap:
    composed = factors[0][1]
    for _, inner in factors[1:]:
        composed = composed.compose(inner)
    return composed


def _same_point_witness(config: PointConfig, report: ClassificationReport) -> Witness:
    k, n = config.k, config.n
    collapse = np.eye(k + 1)
    collapse[1:, 0] = -1.0
    target = TargetAffine("collapse", collapse, np.zeros(k + 1))
    source = AffineMap(np.eye(n + 1), np.asarray([float(c) for c in config.points[0]]))
    return Witness(
        source=source, source_factors=(("translate", source),), target=(target,),
        normal_form=report.normal_form, case=report.theorem_case,
    )


def _inclusion_witness(config: PointConfig, report: ClassificationReport, metric: str) -> Witness:
    k, n = config.k, config.n
    h1 = step1_target(config, metric)
    h2 = step2_source(config, metric)
    a = _diff_matrix(config)
    right = np.linalg.pinv(a)                       # k x (n+1), a @ right = I
    _, _, vh = np.linalg.svd(a)
    null = vh[n + 1:, :].T                          # k x (k-n-1)
    b = np.hstack([right, null])
    h3m = np.eye(k + 1)
    h3m[:k, :k] = b.T
    h3 = TargetAffine("H3", h3m, np.zeros(k + 1))

    quad = np.zeros((k + 1, k + 1))
    if metric == "lorentz":
        quad[0, 0] = 1.0
        for i in range(1, k):
            quad[i, i] = -1.0
    else:
        for i in range(k):
            quad[i, i] = -1.0
    shear = TargetQuadShear("H5~" if metric == "lorentz" else "E5", k, 1, quad)

    linear3 = np.zeros((k, n + 1))
    linear3[: n + 1, : n + 1] = np.eye(n + 1)
    checkpoints = (
        _checkpoint_step2(config, h2, 1, metric),
        Checkpoint("step3", h2, 2, linear3, metric),
    )
    return Witness(
        source=h2, source_factors=(("H2", h2),), target=(h1, h3, shear),
        normal_form=report.normal_form, case=report.theorem_case, metric=metric,
        checkpoints=checkpoints,
    )


def _step3_checkpoint_linear(s3: Step3Result) -> np.ndarray:
    linear = np.zeros((s3.k, s3.n + 1))
    if s3.case == "special":
        linear[0, 0] = 1.0
        for m in range(1, s3.j):
            linear[m, m] = 1.0
    else:
        for m in range(s3.j):
            linear[m, 0] = s3.alpha[m]
            linear[m, m + 1] = 1.0
    return linear


def build_witness(config: PointConfig) -> Witness:
    """Witness for the Lorentzian mapping of any configuration."""
    report = classify_lorentz(config)
    nf = report.normal_form

    if nf.tag == SAME_POINT:
        return _same_point_witness(config, report)
    if nf.tag == INCLUSION:
        return _inclusion_witness(config, report, "lorentz")

    rconfig, perm = _reorder(config, report.independent)
    h1 = step1_target(rconfig)
    h2 = step2_source(rconfig)
    s3 = step3_orthonormalize(rconfig)
    j, k = s3.j, s3.k

    targets: list = ([] if perm is None else [perm]) + [h1, s3.h3]
    if j < k:
        targets.append(_dependent_elimination(rconfig, s3))
    prefix3 = len(targets)

    s4 = step4_reduce(s3, report.likeness)
    targets.extend(s4.targets)
    if j < k:
        out = np.zeros((k + 1, k + 1))
        for m in range(j):
            out[m, m] = 1.0
        out[j, k] = 1.0
        for m in range(j + 1, k + 1):
            out[m, m - 1] = 1.0
        targets.append(TargetAffine("reorder'", out, np.zeros(k + 1)))

    factors = [("H2", h2), ("H4", s3.h4)] + list(s4.sources)
    checkpoints = (
        _checkpoint_step2(rconfig, h2, prefix3 - 1 - (1 if j < k else 0), "lorentz"),
        Checkpoint("step3", h2.compose(s3.h4), prefix3, _step3_checkpoint_linear(s3), "lorentz"),
    )
    return Witness(
        source=_compose_sources(factors), source_factors=tuple(factors),
        target=tuple(targets), normal_form=nf, case=report.theorem_case,
        checkpoints=checkpoints,
    )


def build_euclidean_witness(config: PointConfig) -> Witness:
    """Witness for the Euclidean mapping (definite fold or inclusion only)."""
    report = classify_euclid(config)
    nf = report.normal_form
    if nf.tag == INCLUSION:
        return _inclusion_witness(config, report, "euclid")

    k, n = config.k, config.n
    h1 = step1_target(config, "euclid")
    h2 = step2_source(config, "euclid")
    a = _diff_matrix(config)
    qmat, b = _pivoted_mgs(a)
    full = _complete_orthonormal(qmat, n + 1)
    extra = full[:, k:]
    u = np.column_stack([extra[:, 0], qmat, extra[:, 1:]])
    h3m = np.eye(k + 1)
    h3m[:k, :k] = b.T
    h3 = TargetAffine("H3", h3m, np.zeros(k + 1))
    h4 = AffineMap(u, np.zeros(n + 1))

    quad = np.zeros((k + 1, k + 1))
    for i in range(k):
        quad[i, i] = -1.0
    shear = TargetQuadShear("E6", k, 1, quad)

    linear3 = np.zeros((k, n + 1))
    for m in range(k):
        linear3[m, m + 1] = 1.0
    factors = (("H2", h2), ("H4", h4))
    checkpoints = (
        _checkpoint_step2(config, h2, 1, "euclid"),
        Checkpoint("step3", h2.compose(h4), 2, linear3, "euclid"),
    )
    return Witness(
        source=_compose_sources(factors), source_factors=factors,
        target=(h1, h3, shear), normal_form=nf, case=report.theorem_case,
        metric="euclid", checkpoints=checkpoints,
    )
