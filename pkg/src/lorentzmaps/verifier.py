"""Independent numerical validation of witnesses and likeness verdicts.

The witness identity target_chain(L(h(x))) = normal_form(x) is an
equality of polynomial maps, so agreement on randomly sampled points of
an open box certifies it (a mismatch of fixed-degree polynomials escapes
a zero-measure set).  Likeness verdicts are cross-checked through three
routes that share no code path: Gram-matrix inertia, the sum-of-squares
quantity produced by the orthonormalization stage, and the hyperplane
criterion; a brute-force search over small integer combinations serves
as a one-sided oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .core import (
    PIVOT_TOL,
    Likeness,
    hyperplane_likeness,
    minkowski_metric,
    solve_rational,
    vector_likeness,
)
from .mappings import (
    PointConfig,
    classify_lorentz,
    eval_euclid_dsq,
    eval_lorentz_dsq,
    eval_normal_form,
    recognition_subspace,
)
from .normalizer import (
    GUARD_TOL,
    Witness,
    apply_target_chain,
    apply_witness,
    invert_target_point,
    step3_orthonormalize,
    _contains_time_axis,
)


@dataclass(frozen=True)
class VerificationReport:
    samples: int
    tol: float
    seed: int
    max_residual: float
    mean_residual: float
    source_det: float
    target_roundtrip_max: float
    lorentz_defect_h4: float
    checkpoint_residuals: dict
    verdict: str                    # "pass" | "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def verify_witness(
    config: PointConfig,
    witness: Witness,
    samples: int = 100,
    tol: float = 1e-8,
    seed: int = 42,
) -> VerificationReport:
    """Sample the witness identity on seeded uniform points of [-1, 1]^{n+1}.

    The verdict is pass iff the worst identity residual and the full
    target-chain round-trip stay below ``tol`` and the source map is
    invertible.  Deterministic in (config, witness, seed).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = config.n
    if witness.source.dim != n + 1:
        raise ValueError("witness/source dimension mismatch")
    rng = np.random.default_rng(seed)
    points = rng.uniform(-1.0, 1.0, size=(samples, n + 1))

    residuals = np.empty(samples)
    roundtrip = 0.0
    evaluate = eval_euclid_dsq if witness.metric == "euclid" else eval_lorentz_dsq
    for i, x in enumerate(points):
        got = apply_witness(witness, config, x)
        want = np.asarray(eval_normal_form(witness.normal_form, tuple(float(v) for v in x)))
        residuals[i] = float(np.max(np.abs(got - want)))
        y = np.asarray(evaluate(config, tuple(float(v) for v in witness.source(x))))
        back = invert_target_point(witness, apply_target_chain(witness, y))
        roundtrip = max(roundtrip, float(np.max(np.abs(back - y))))

    defect = 0.0
    jmat = minkowski_metric(n)
    for stage, factor in witness.source_factors:
        if stage == "H4":
            defect = max(defect, float(np.max(np.abs(factor.matrix.T @ jmat @ factor.matrix - jmat))))

    checkpoint_residuals = {}
    for cp in witness.checkpoints:
        worst = 0.0
        for x in points:
            y = np.asarray(evaluate(config, tuple(float(v) for v in cp.source(x))))
            got = apply_target_chain(witness, y, prefix=cp.target_prefix)
            worst = max(worst, float(np.max(np.abs(got - cp.expected(x)))))
        checkpoint_residuals[cp.stage] = worst

    det = witness.source.det
    ok = residuals.max() < tol and roundtrip < tol and abs(det) > GUARD_TOL
    return VerificationReport(
        samples=samples, tol=tol, seed=seed,
        max_residual=float(residuals.max()), mean_residual=float(residuals.mean()),
        source_det=det, target_roundtrip_max=roundtrip, lorentz_defect_h4=defect,
        checkpoint_residuals=checkpoint_residuals,
        verdict="pass" if ok else "fail",
    )


@dataclass(frozen=True)
class LikenessCrosscheck:
    inertia: Likeness
    lemma4: Likeness
    hyperplane: Likeness
    quantity: object              # sum of squares (Fraction when exact, else float)
    agreement: bool


def orthonormalization_quantity(config: PointConfig):
    """The sum of squares compared against 1, exactly when the input allows.

    For any mixing matrix B with orthonormalized space parts the quantity
    a0^T B B^T a0 equals a0^T (A~^T A~)^{-1} a0, where a0 is the time row
    and A~ the space block of the difference matrix; the right-hand side
    needs no orthonormalization, so rational configurations get an exact
    rational value.
    """
    rec = recognition_subspace(config)
    diffs = rec.basis()
    if config.is_exact:
        a0 = [Fraction(d[0]) for d in diffs]
        spatial = [[Fraction(c) for c in d[1:]] for d in diffs]
        j = len(diffs)
        gram = [[sum(spatial[a][i] * spatial[b][i] for i in range(config.n)) for b in range(j)]
                for a in range(j)]
        y = solve_rational(gram, a0)
        return sum(a0[i] * y[i] for i in range(j))
    s3 = step3_orthonormalize(config)
    if s3.alpha is None:
        raise ValueError("quantity undefined when the span contains the time axis")
    return float(s3.alpha @ s3.alpha)


def crosscheck_likeness(config: PointConfig) -> LikenessCrosscheck:
    """Compare three independent likeness criteria on a generic configuration.

    Requires k+1 points in general position whose span misses the time
    axis (the branch where the orthonormalization quantity is defined).
    """
    report = classify_lorentz(config)
    rec = recognition_subspace(config)
    if rec.dim != config.k or rec.dim > config.n:
        raise ValueError("crosscheck requires general position with k <= n")
    if _contains_time_axis(config, rec.basis()):
        raise ValueError("crosscheck requires the span to miss the time axis")

    s = orthonormalization_quantity(config)
    if isinstance(s, Fraction):
        if s > 1:
            lemma4 = Likeness.TIMELIKE
        elif s < 1:
            lemma4 = Likeness.SPACELIKE
        else:
            lemma4 = Likeness.LIGHTLIKE
    else:
        if abs(s - 1.0) <= PIVOT_TOL:
            lemma4 = Likeness.LIGHTLIKE
        elif s > 1.0:
            lemma4 = Likeness.TIMELIKE
        else:
            lemma4 = Likeness.SPACELIKE

    alpha = step3_orthonormalize(config).alpha
    padded = list(alpha) + [0.0] * (config.n - len(alpha))
    hyper = hyperplane_likeness(padded)

    return LikenessCrosscheck(
        inertia=report.likeness, lemma4=lemma4, hyperplane=hyper, quantity=s,
        agreement=(report.likeness == lemma4 == hyper),
    )


@dataclass(frozen=True)
class OracleEvidence:
    found_timelike: bool
    found_lightlike: bool
    timelike_combo: Optional[tuple]
    lightlike_combo: Optional[tuple]


def brute_force_likeness_oracle(basis: Sequence[Sequence], grid_radius: int) -> OracleEvidence:
    """Search integer combinations of the basis for non-spacelike vectors.

    One-sided evidence: a timelike hit forces the timelike verdict, and a
    spacelike verdict forbids any non-spacelike hit.  The converse
    directions need the full grid to be lucky, so they are not claims.
    """
    if grid_radius < 1:
        raise ValueError("grid_radius must be >= 1")
    m = len(basis)
    timelike = lightlike = None
    for combo in itertools.product(range(-grid_radius, grid_radius + 1), repeat=m):
        if all(c == 0 for c in combo):
            continue
        vec = [sum(combo[i] * basis[i][d] for i in range(m)) for d in range(len(basis[0]))]
        if all(v == 0 for v in vec):
            continue
        cls = vector_likeness(vec)
        if cls is Likeness.TIMELIKE and timelike is None:
            timelike = combo
        elif cls is Likeness.LIGHTLIKE and lightlike is None:
            lightlike = combo
        if timelike is not None and lightlike is not None:
            break
    return OracleEvidence(
        found_timelike=timelike is not None,
        found_lightlike=lightlike is not None,
        timelike_combo=timelike,
        lightlike_combo=lightlike,
    )
