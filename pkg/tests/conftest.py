"""Shared test fixtures: exact random configurations for every branch.

Configurations are generated over the rationals so classifications are
exact.  Each generator starts from a basis whose likeness is certified
by construction (a timelike vector, pure-space vectors, or a null vector
plus its spatial orthocomplement), then mixes it with exact unimodular
combinations and rational Lorentz factors, which preserve likeness and
span while hiding the axis alignment.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

import lorentzmaps as lm
from lorentzmaps.mappings import PointConfig, classify_lorentz
from lorentzmaps.normalizer import build_witness

F = Fraction

BRANCHES = (
    "1a", "1b", "1c", "special",
    "2a_time", "2a_space", "2b", "3",
    "app1a", "app1b", "app1c", "app2a", "app2b", "app3",
)

EXPECTED_CASE = {
    "1a": ("Theorem 1(1a)",), "1b": ("Theorem 1(1b)",), "1c": ("Theorem 1(1c)",),
    "special": ("Theorem 1(1a)", "Theorem 1(2a)"),
    "2a_time": ("Theorem 1(2a)",), "2a_space": ("Theorem 1(2a)",),
    "2b": ("Theorem 1(2b)",), "3": ("Theorem 1(3)",),
    "app1a": ("Appendix (1a)",), "app1b": ("Appendix (1b)",), "app1c": ("Appendix (1c)",),
    "app2a": ("Appendix (2a)",), "app2b": ("Appendix (2b)",), "app3": ("Appendix (3)",),
}


def rand_frac(rng, lo=-2, hi=2, dens=(1, 1, 2, 3)):
    d = int(rng.choice(dens))
    return F(int(rng.integers(lo * d, hi * d + 1)), d)


def mat_vec(m, v):
    return tuple(sum(m[r][c] * v[c] for c in range(len(v))) for r in range(len(m)))


def mat_mul(a, b):
    return [[sum(a[r][i] * b[i][c] for i in range(len(b))) for c in range(len(b[0]))]
            for r in range(len(a))]


def _eye(d):
    return [[F(1) if r == c else F(0) for c in range(d)] for r in range(d)]


def rational_rotation(n, i, j, t):
    """Exact rotation in the (x_i, x_j) space plane from a rational tangent."""
    c = (1 - t * t) / (1 + t * t)
    s = 2 * t / (1 + t * t)
    g = _eye(n + 1)
    g[i][i] = g[j][j] = c
    g[i][j] = -s
    g[j][i] = s
    return g


def rational_boost(n, axis, t):
    """Exact boost in the (x_0, x_axis) plane; t plays the role of e^phi."""
    ch = (t + 1 / t) / 2
    sh = (t - 1 / t) / 2
    g = _eye(n + 1)
    g[0][0] = g[axis][axis] = ch
    g[0][axis] = g[axis][0] = sh
    return g


def rational_lorentz(n, rng, factors=2, spatial_only=False):
    """Exact rational product of rotations (and boosts unless spatial_only)."""
    g = _eye(n + 1)
    for _ in range(factors):
        if n >= 2:
            i, j = sorted(rng.choice(np.arange(1, n + 1), size=2, replace=False))
            t = F(int(rng.integers(-2, 3)), int(rng.integers(2, 5)))
            g = mat_mul(rational_rotation(n, int(i), int(j), t), g)
        if not spatial_only:
            axis = int(rng.integers(1, n + 1))
            t = F(int(rng.integers(2, 7)), int(rng.integers(2, 5)))
            g = mat_mul(rational_boost(n, axis, t), g)
    return g


def _unimodular_mix(vectors, rng, rounds=4):
    vecs = [list(v) for v in vectors]
    m = len(vecs)
    if m < 2:
        return [tuple(v) for v in vecs]
    for _ in range(rounds):
        i, j = rng.integers(0, m, size=2)
        if i == j:
            continue
        c = int(rng.integers(-2, 3))
        vecs[i] = [a + c * b for a, b in zip(vecs[i], vecs[j])]
    return [tuple(v) for v in vecs]


def _spatial_int_vectors(count, n, rng):
    """`count` independent integer vectors of {0} x Z^n."""
    while True:
        rows = [[F(0)] + [F(int(rng.integers(-2, 3))) for _ in range(n)] for _ in range(count)]
        if lm.rank_exact(rows) == count:
            return [tuple(r) for r in rows]


def _pythagorean_unit(n, rng):
    """Exact rational unit vector of R^n (spatial part only)."""
    u = [F(0)] * (n + 1)
    u[1] = F(1)
    for _ in range(int(rng.integers(1, 3))):
        if n < 2:
            break
        i, j = sorted(rng.choice(np.arange(1, n + 1), size=2, replace=False))
        t = F(int(rng.integers(-2, 3)), int(rng.integers(2, 4)))
        u = list(mat_vec(rational_rotation(n, int(i), int(j), t), u))
    return tuple(u[1:])


def _orthocomplement(u):
    """Exact basis of the spatial vectors orthogonal to spatial unit u."""
    n = len(u)
    p = next(i for i, v in enumerate(u) if v != 0)
    basis = []
    for q in range(n):
        if q == p:
            continue
        vec = [F(0)] * (n + 1)
        vec[q + 1] = F(1)
        vec[p + 1] = -u[q] / u[p]
        basis.append(tuple(vec))
    return basis


def basis_with_likeness(likeness, m, n, rng, contain_time_axis=False):
    """m independent exact vectors spanning a subspace of given likeness."""
    if contain_time_axis:
        assert likeness is lm.Likeness.TIMELIKE
        e0 = tuple([F(1)] + [F(0)] * n)
        vecs = [e0] + (_spatial_int_vectors(m - 1, n, rng) if m > 1 else [])
    elif likeness is lm.Likeness.SPACELIKE:
        vecs = _spatial_int_vectors(m, n, rng)
    elif likeness is lm.Likeness.TIMELIKE:
        head = tuple([F(2), F(1)] + [F(0)] * (n - 1))
        while True:
            vecs = [head] + (_spatial_int_vectors(m - 1, n, rng) if m > 1 else [])
            if lm.rank_exact([list(v) for v in vecs]) == m:
                break
    else:
        u = _pythagorean_unit(n, rng)
        null = tuple([F(1)] + list(u))
        comp = _orthocomplement(u)
        while True:
            picks = rng.choice(len(comp), size=m - 1, replace=False) if m > 1 else []
            rest = [comp[int(i)] for i in picks]
            vecs = [null] + rest
            if lm.rank_exact([list(v) for v in vecs]) == m:
                break
    vecs = _unimodular_mix(vecs, rng)
    # boosts would move the time axis out of the span, so keep those cases spatial
    g = rational_lorentz(n, rng, spatial_only=contain_time_axis)
    return [mat_vec(g, v) for v in vecs]


def _scale_into_box(vectors, bound=2):
    top = max((abs(c) for v in vectors for c in v), default=F(0))
    if top <= bound:
        return vectors
    scale = F(bound) / top
    return [tuple(scale * c for c in v) for v in vectors]


def assemble_config(n, diffs, rng):
    diffs = _scale_into_box(list(diffs))
    p0 = tuple(rand_frac(rng, -1, 1, dens=(1, 2)) for _ in range(n + 1))
    points = [p0] + [tuple(a + b for a, b in zip(p0, d)) for d in diffs]
    return PointConfig(n, points)


def _with_dependents(basis, extra, rng):
    """Append `extra` integer combinations of the basis, shuffled in."""
    diffs = list(basis)
    for _ in range(extra):
        coeffs = [int(rng.integers(-1, 2)) for _ in basis]
        if all(c == 0 for c in coeffs):
            coeffs[int(rng.integers(0, len(basis)))] = 1
        diffs.append(tuple(sum(c * v[i] for c, v in zip(coeffs, basis)) for i in range(len(basis[0]))))
    order = rng.permutation(len(diffs))
    return [diffs[int(i)] for i in order]


LIKENESS_OF = {"a": lm.Likeness.TIMELIKE, "b": lm.Likeness.SPACELIKE, "c": lm.Likeness.LIGHTLIKE}


def config_for_branch(branch, rng) -> PointConfig:
    if branch == "app3":
        n = int(rng.integers(1, 5))
        k = int(rng.integers(1, 4))
        p = tuple(rand_frac(rng) for _ in range(n + 1))
        return PointConfig(n, [p] * (k + 1))

    if branch == "3":
        n = int(rng.integers(1, 4))
        k = n + 1 + int(rng.integers(0, 2))
        while True:
            diffs = [tuple(F(int(rng.integers(-2, 3))) for _ in range(n + 1)) for _ in range(k)]
            if lm.rank_exact([list(d) for d in diffs]) == n + 1:
                return assemble_config(n, diffs, rng)

    if branch in ("1a", "1b", "1c"):
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, n))
        basis = basis_with_likeness(LIKENESS_OF[branch[-1]], k, n, rng)
        cfg = assemble_config(n, basis, rng)
    elif branch == "special":
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, n + 1))
        basis = basis_with_likeness(lm.Likeness.TIMELIKE, k, n, rng, contain_time_axis=True)
        cfg = assemble_config(n, basis, rng)
    elif branch in ("2a_time", "2a_space", "2b"):
        n = int(rng.integers(2, 7))
        like = {"2a_time": lm.Likeness.TIMELIKE, "2a_space": lm.Likeness.SPACELIKE,
                "2b": lm.Likeness.LIGHTLIKE}[branch]
        basis = basis_with_likeness(like, n, n, rng)
        cfg = assemble_config(n, basis, rng)
    elif branch in ("app1a", "app1b", "app1c"):
        n = int(rng.integers(2, 7))
        j = int(rng.integers(1, n))
        k = j + int(rng.integers(1, 3))
        special = branch == "app1a" and bool(rng.integers(0, 2))
        basis = basis_with_likeness(LIKENESS_OF[branch[-1]], j, n, rng, contain_time_axis=special)
        cfg = assemble_config(n, _with_dependents(basis, k - j, rng), rng)
    elif branch in ("app2a", "app2b"):
        n = int(rng.integers(2, 6))
        k = n + int(rng.integers(1, 3))
        if branch == "app2a":
            special = bool(rng.integers(0, 2))
            like = lm.Likeness.TIMELIKE if special or rng.integers(0, 2) else lm.Likeness.SPACELIKE
            basis = basis_with_likeness(like, n, n, rng, contain_time_axis=special)
        else:
            basis = basis_with_likeness(lm.Likeness.LIGHTLIKE, n, n, rng)
        cfg = assemble_config(n, _with_dependents(basis, k - n, rng), rng)
    else:
        raise ValueError(branch)

    report = classify_lorentz(cfg)
    if report.theorem_case not in EXPECTED_CASE[branch]:
        raise AssertionError(
            f"generator for {branch} produced {report.theorem_case} "
            f"(j={report.recognition_dim}, k={cfg.k}, n={cfg.n}, {report.likeness})"
        )
    return cfg


@pytest.fixture(scope="session")
def branch_corpus():
    """20 exact configurations per branch with their witnesses and reports."""
    corpus = {}
    for b, branch in enumerate(BRANCHES):
        rng = np.random.default_rng(1000 + b)
        entries = []
        for _ in range(20):
            cfg = config_for_branch(branch, rng)
            entries.append((cfg, classify_lorentz(cfg), build_witness(cfg)))
        corpus[branch] = entries
    return corpus
