"""Lorentzian distance-squared mappings: classification, witnesses, fibers."""

from .core import (
    Likeness,
    boost_matrix,
    gram_matrix,
    hyperplane_likeness,
    lorentz_inner,
    minkowski_metric,
    random_lorentz_transform,
    rank_exact,
    rotation_matrix,
    subspace_likeness,
    symmetric_inertia,
    vector_likeness,
)
from .mappings import (
    ClassificationReport,
    NormalForm,
    PointConfig,
    classify_euclid,
    classify_lorentz,
    equivalent_to_euclidean,
    eval_euclid_dsq,
    eval_lorentz_dsq,
    eval_normal_form,
    is_general_position,
    recognition_subspace,
)
from .normalizer import (
    AffineMap,
    StageGuardError,
    TargetAffine,
    TargetQuadShear,
    Witness,
    apply_witness,
    build_euclidean_witness,
    build_witness,
    invert_source,
    invert_target_point,
)
from .verifier import (
    VerificationReport,
    brute_force_likeness_oracle,
    crosscheck_likeness,
    verify_witness,
)
from .fibers import ConicType, SingularFiberError, fiber_conic_type, sample_fiber

__all__ = [name for name in dir() if not name.startswith("_")]
