"""Distance-squared mappings, their normal forms, and the classification.

A mapping is determined by k+1 base points p_0, ..., p_k in R^{1,n};
component i sends x to the Lorentzian square <x - p_i, x - p_i> (or the
Euclidean square for the comparison mapping).  Up to smooth coordinate
changes of source and target the mapping is pinned down by two integers
(k and the dimension j of the recognition subspace spanned by the
difference vectors p_i - p_0) together with the likeness of that
subspace.  ``classify_lorentz`` implements the complete dispatch; the
companion ``classify_euclid`` / ``equivalent_to_euclidean`` cover the
Euclidean side of the story.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (
    Likeness,
    _subspace_likeness_inertia,
    euclid_inner,
    greedy_independent,
    is_exact_scalar,
    lorentz_inner,
)

# Normal-form tags (wire-format stable).
DEFINITE_FOLD = "definite_fold"
INDEFINITE_FOLD = "indefinite_fold"
LIGHTLIKE_FOLD = "lightlike_fold"
INCLUSION = "inclusion"
DEGENERATE_DEFINITE = "degenerate_definite_fold"
DEGENERATE_INDEFINITE = "degenerate_indefinite_fold"
DEGENERATE_LIGHTLIKE = "degenerate_lightlike_fold"
SAME_POINT = "same_point"

FOLD_TAGS = (DEFINITE_FOLD, INDEFINITE_FOLD, LIGHTLIKE_FOLD)
DEGENERATE_TAGS = (DEGENERATE_DEFINITE, DEGENERATE_INDEFINITE, DEGENERATE_LIGHTLIKE)


def _as_scalar(value):
    """Normalize integer-like coordinates (numpy ints stay exact)."""
    if isinstance(value, bool):
        raise ValueError(f"not a coordinate: {value!r}")
    try:
        return operator.index(value)
    except TypeError:
        return value


@dataclass(frozen=True)
class PointConfig:
    """k+1 base points in R^{1,n} (index 0 of each point is the time slot)."""

    n: int
    points: tuple

    def __init__(self, n: int, points: Sequence[Sequence]):
        if n < 1:
            raise ValueError("ambient index n must be >= 1")
        pts = tuple(tuple(_as_scalar(c) for c in p) for p in points)
        if len(pts) < 2:
            raise ValueError("need at least two points (k >= 1)")
        for p in pts:
            if len(p) != n + 1:
                raise ValueError(f"point of length {len(p)}, expected {n + 1}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "points", pts)

    @property
    def k(self) -> int:
        return len(self.points) - 1

    @property
    def is_exact(self) -> bool:
        return all(is_exact_scalar(c) for p in self.points for c in p)

    def diffs(self) -> list[tuple]:
        """Difference vectors p_i - p_0 for i = 1..k."""
        p0 = self.points[0]
        return [tuple(c - d for c, d in zip(p, p0)) for p in self.points[1:]]


@dataclass(frozen=True)
class RecognitionSubspace:
    """Span data of the difference vectors p_i - p_0."""

    vectors: tuple        # all k difference vectors, in point order
    dim: int              # exact dimension j of the span
    independent: tuple    # point indices (1-based) of a greedy maximal independent subset

    def basis(self) -> list[tuple]:
        return [self.vectors[i - 1] for i in self.independent]


@dataclass(frozen=True)
class NormalForm:
    """Tagged normal-form identity with its parameters.

    ``k`` fixes the target dimension k+1 and ``n`` the source R^{1,n}.
    Degenerate tags carry the fold rank ``j`` separately; the trailing
    k - j target components of those forms are identically zero.
    """

    tag: str
    n: int
    k: int
    j: Optional[int] = None

    def __post_init__(self):
        n, k, j = self.n, self.k, self.j
        if n < 1 or k < 1:
            raise ValueError("invalid normal-form parameters")
        if self.tag in FOLD_TAGS:
            if j is not None and j != k:
                raise ValueError("fold forms take j = k")
            if k > n or (self.tag == INDEFINITE_FOLD and k == n):
                raise ValueError(f"{self.tag} requires k {'<' if self.tag == INDEFINITE_FOLD else '<='} n")
        elif self.tag in DEGENERATE_TAGS:
            if j is None or not 1 <= j < k:
                raise ValueError("degenerate forms require 1 <= j < k")
            if j > n or (self.tag == DEGENERATE_INDEFINITE and j == n):
                raise ValueError("degenerate fold rank exceeds ambient bound")
        elif self.tag == INCLUSION:
            if k <= n:
                raise ValueError("inclusion requires k > n")
        elif self.tag == SAME_POINT:
            pass
        else:
            raise ValueError(f"unknown normal-form tag {self.tag!r}")

    @property
    def fold_rank(self) -> Optional[int]:
        """Number of bare coordinate components (j for degenerate, k for folds)."""
        if self.tag in FOLD_TAGS:
            return self.k
        if self.tag in DEGENERATE_TAGS:
            return self.j
        return None


@dataclass(frozen=True)
class ClassificationReport:
    k: int
    n: int
    recognition_dim: int
    general_position: bool
    likeness: Optional[Likeness]      # None when undefined (same-point case)
    normal_form: NormalForm
    theorem_case: str
    borderline: bool
    independent: tuple = ()           # greedy independent point indices, for witness reuse


def eval_lorentz_dsq(config: PointConfig, x: Sequence):
    """(l^2_{p_0}(x), ..., l^2_{p_k}(x)) with l^2_p(x) = <x-p, x-p>."""
    if len(x) != config.n + 1:
        raise ValueError(f"point of length {len(x)}, expected {config.n + 1}")
    out = []
    for p in config.points:
        d = tuple(a - b for a, b in zip(x, p))
        out.append(lorentz_inner(d, d))
    return tuple(out)


def eval_euclid_dsq(config: PointConfig, x: Sequence):
    """Euclidean counterpart of eval_lorentz_dsq."""
    if len(x) != config.n + 1:
        raise ValueError(f"point of length {len(x)}, expected {config.n + 1}")
    out = []
    for p in config.points:
        d = tuple(a - b for a, b in zip(x, p))
        out.append(euclid_inner(d, d))
    return tuple(out)


def recognition_subspace(config: PointConfig) -> RecognitionSubspace:
    """Difference vectors, their exact span dimension, and a greedy basis."""
    diffs = config.diffs()
    picked = greedy_independent(diffs)
    return RecognitionSubspace(
        vectors=tuple(diffs),
        dim=len(picked),
        independent=tuple(i + 1 for i in picked),
    )


def is_general_position(config: PointConfig) -> bool:
    return recognition_subspace(config).dim == config.k


def eval_normal_form(nf: NormalForm, x: Sequence):
    """Evaluate the tagged normal form at a source point of length n+1."""
    if len(x) != nf.n + 1:
        raise ValueError(f"point of length {len(x)}, expected {nf.n + 1}")
    n, k = nf.n, nf.k
    zero = x[0] * 0
    if nf.tag == SAME_POINT:
        head = [-x[0] * x[0] + sum(c * c for c in x[1:])]
        return tuple(head + [zero] * k)
    if nf.tag == INCLUSION:
        return tuple(list(x) + [zero] * (k - n))
    j = nf.fold_rank
    tail = sum((c * c for c in x[j + 1: n + 1]), zero)
    if nf.tag in (DEFINITE_FOLD, DEGENERATE_DEFINITE):
        quad = x[0] * x[0] + tail
    elif nf.tag in (INDEFINITE_FOLD, DEGENERATE_INDEFINITE):
        quad = -x[0] * x[0] + tail
    else:
        quad = x[0] * x[1] + tail
    return tuple(list(x[1: j + 1]) + [quad] + [zero] * (k - j))


def classify_lorentz(config: PointConfig) -> ClassificationReport:
    """Complete classification of the Lorentzian distance-squared mapping.

    Total on all configurations; dispatches on the recognition dimension
    j, the point count k, the ambient index n, and the likeness of the
    recognition subspace.
    """
    rec = recognition_subspace(config)
    j, k, n = rec.dim, config.k, config.n

    if j == 0:
        return ClassificationReport(
            k=k, n=n, recognition_dim=0, general_position=False, likeness=None,
            normal_form=NormalForm(SAME_POINT, n, k),
            theorem_case="Appendix (3)", borderline=False, independent=(),
        )

    likeness, inertia = _subspace_likeness_inertia(rec.basis())
    borderline = inertia.borderline

    if j == n + 1:
        nf, case = NormalForm(INCLUSION, n, k), "Theorem 1(3)"
    elif j == k:
        if k < n:
            tag, sub = {
                Likeness.TIMELIKE: (DEFINITE_FOLD, "a"),
                Likeness.SPACELIKE: (INDEFINITE_FOLD, "b"),
                Likeness.LIGHTLIKE: (LIGHTLIKE_FOLD, "c"),
            }[likeness]
            nf, case = NormalForm(tag, n, k), f"Theorem 1(1{sub})"
        else:  # k == n
            if likeness is Likeness.LIGHTLIKE:
                nf, case = NormalForm(LIGHTLIKE_FOLD, n, n), "Theorem 1(2b)"
            else:
                nf, case = NormalForm(DEFINITE_FOLD, n, n), "Theorem 1(2a)"
    elif j < n:
        tag, sub = {
            Likeness.TIMELIKE: (DEGENERATE_DEFINITE, "a"),
            Likeness.SPACELIKE: (DEGENERATE_INDEFINITE, "b"),
            Likeness.LIGHTLIKE: (DEGENERATE_LIGHTLIKE, "c"),
        }[likeness]
        nf, case = NormalForm(tag, n, k, j), f"Appendix (1{sub})"
    else:  # j == n < k
        if likeness is Likeness.LIGHTLIKE:
            nf, case = NormalForm(DEGENERATE_LIGHTLIKE, n, k, n), "Appendix (2b)"
        else:
            nf, case = NormalForm(DEGENERATE_DEFINITE, n, k, n), "Appendix (2a)"

    return ClassificationReport(
        k=k, n=n, recognition_dim=j, general_position=(j == k), likeness=likeness,
        normal_form=nf, theorem_case=case, borderline=borderline,
        independent=rec.independent,
    )


def classify_euclid(config: PointConfig) -> ClassificationReport:
    """Classification of the Euclidean distance-squared mapping.

    Only two shapes are covered: k+1 points in general position with
    k <= n (definite fold), and spanning configurations (inclusion).
    Anything else raises.
    """
    rec = recognition_subspace(config)
    j, k, n = rec.dim, config.k, config.n
    if j == k and k <= n:
        nf, case = NormalForm(DEFINITE_FOLD, n, k), "Proposition 1(1)"
    elif j == n + 1:
        nf, case = NormalForm(INCLUSION, n, k), "Proposition 1(2)"
    else:
        raise ValueError("Euclidean classification not covered by Proposition 1")
    return ClassificationReport(
        k=k, n=n, recognition_dim=j, general_position=(j == k), likeness=None,
        normal_form=nf, theorem_case=case, borderline=False,
        independent=rec.independent,
    )


def equivalent_to_euclidean(config: PointConfig) -> bool:
    """Whether the Lorentzian mapping is equivalent to its Euclidean twin.

    For k points short of the ambient dimension this holds exactly when
    the recognition subspace is timelike; at k = n timelike or spacelike
    suffices; spanning configurations always agree.
    """
    report = classify_lorentz(config)
    j, k, n = report.recognition_dim, config.k, config.n
    if j == n + 1:
        return True
    if j == k < n:
        return report.likeness is Likeness.TIMELIKE
    if j == k == n:
        return report.likeness in (Likeness.TIMELIKE, Likeness.SPACELIKE)
    raise ValueError("not covered by the Euclidean comparison")
