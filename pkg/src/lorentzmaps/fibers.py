"""Non-singular fibers of n-point configurations.

For n points in general position in R^{1,n} the mapping lands in R^n
and its regular fibers are curves.  Pulled through the witness they are
affine images of the plane conics cut out by the normal-form quadratic
in the two free coordinates (x_0, x_n): a circle, an equilateral
hyperbola, or a parabola, matching the likeness of the recognition
subspace one for one.
"""

from __future__ import annotations

import enum
import math
from typing import Optional, Sequence

import numpy as np

from .core import Likeness
from .mappings import (
    DEFINITE_FOLD,
    INDEFINITE_FOLD,
    PointConfig,
    classify_lorentz,
    recognition_subspace,
)
from .normalizer import Witness, apply_target_chain, build_witness


class ConicType(enum.Enum):
    CIRCLE = "circle"
    EQUILATERAL_HYPERBOLA = "equilateral_hyperbola"
    PARABOLA = "parabola"


CONIC_BY_LIKENESS = {
    Likeness.TIMELIKE: ConicType.CIRCLE,
    Likeness.SPACELIKE: ConicType.EQUILATERAL_HYPERBOLA,
    Likeness.LIGHTLIKE: ConicType.PARABOLA,
}


class SingularFiberError(ValueError):
    """The requested target value is not a regular value of the mapping."""


def _require_fiber_config(config: PointConfig) -> None:
    if config.k != config.n - 1 or config.n < 2:
        raise ValueError("fiber analysis requires n points in R^{1,n} (k = n-1 >= 1)")
    if recognition_subspace(config).dim != config.k:
        raise ValueError("fiber analysis requires points in general position")


def fiber_conic_type(config: PointConfig) -> ConicType:
    """Conic class of every non-singular fiber of the configuration."""
    _require_fiber_config(config)
    return CONIC_BY_LIKENESS[classify_lorentz(config).likeness]


def sample_fiber(
    config: PointConfig,
    y: Sequence,
    count: int = 16,
    window: float = 3.0,
    witness: Optional[Witness] = None,
) -> np.ndarray:
    """Points of the fiber over y, pulled back through the witness.

    The target value is pushed through the witness chain into normal
    coordinates, the plane conic there is parametrized (angles for the
    circle, rapidity on both branches for the hyperbola within
    ``window``, the free coordinate in [-window, window] for the
    parabola), and the samples are mapped back by the source map.
    Raises SingularFiberError when y is not a regular value.
    """
    _require_fiber_config(config)
    if count < 1:
        raise ValueError("count must be >= 1")
    if len(y) != config.k + 1:
        raise ValueError(f"target value of length {len(y)}, expected {config.k + 1}")
    w = witness if witness is not None else build_witness(config)
    z = apply_target_chain(w, [float(v) for v in y])
    n = config.n
    fixed = z[: n - 1]
    c = float(z[n - 1])

    x0 = np.empty(count)
    xn = np.empty(count)
    if w.normal_form.tag == DEFINITE_FOLD:
        if c <= 0.0:
            raise SingularFiberError("singular or empty fiber")
        r = math.sqrt(c)
        theta = 2.0 * math.pi * np.arange(count) / count
        x0, xn = r * np.cos(theta), r * np.sin(theta)
    elif w.normal_form.tag == INDEFINITE_FOLD:
        if c == 0.0:
            raise SingularFiberError("singular or empty fiber")
        ts = np.linspace(-window, window, (count + 1) // 2)
        r = math.sqrt(abs(c))
        for i in range(count):
            sign = 1.0 if i % 2 == 0 else -1.0
            t = ts[i // 2]
            if c > 0.0:
                x0[i], xn[i] = r * math.sinh(t), sign * r * math.cosh(t)
            else:
                x0[i], xn[i] = sign * r * math.cosh(t), r * math.sinh(t)
    else:
        x1 = float(fixed[0])
        if x1 == 0.0:
            raise SingularFiberError("singular or empty fiber")
        xn = np.linspace(-window, window, count)
        x0 = (c - xn * xn) / x1

    out = np.empty((count, n + 1))
    for i in range(count):
        u = np.concatenate([[x0[i]], fixed, [xn[i]]])
        out[i] = w.source(u)
    return out
