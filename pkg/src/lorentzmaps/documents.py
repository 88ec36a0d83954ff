"""JSON document schemas and canonical serialization.

Scalars travel as JSON integers (exact), "p/q" strings (exact
rationals), or plain numbers (floats).  On output floats are rounded to
12 significant digits and objects are dumped with sorted keys, so a
given document has exactly one byte representation.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .mappings import DEGENERATE_TAGS, NormalForm, PointConfig, ClassificationReport
from .normalizer import (
    AffineMap,
    Checkpoint,
    TargetAffine,
    TargetQuadShear,
    Witness,
)
from .verifier import VerificationReport


class DocumentError(ValueError):
    """Malformed input document."""


def parse_scalar(value, exact: bool = False):
    if isinstance(value, bool):
        raise DocumentError(f"not a scalar: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if exact:
            raise DocumentError(f"float {value!r} rejected in exact mode; use \"p/q\"")
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as err:
            raise DocumentError(f"bad rational {value!r}: {err}") from None
    raise DocumentError(f"not a scalar: {value!r}")


def format_scalar(value):
    if isinstance(value, bool):
        raise DocumentError(f"not a scalar: {value!r}")
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return f"{value.numerator}/{value.denominator}"
    return float(f"{float(value):.12g}")


def canonical(obj):
    """Recursively normalize scalars for stable serialization."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [canonical(v) for v in obj.tolist()]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    return format_scalar(obj)


def dump_json(obj) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# configurations


def config_from_doc(doc, exact: bool = False) -> PointConfig:
    if not isinstance(doc, dict):
        raise DocumentError("top-level document must be an object")
    try:
        n = doc["n"]
        rows = doc["points"]
    except KeyError as err:
        raise DocumentError(f"missing key {err}") from None
    if not isinstance(n, int) or isinstance(n, bool):
        raise DocumentError("n must be an integer")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise DocumentError("points must be an array of arrays")
    points = [[parse_scalar(v, exact) for v in row] for row in rows]
    try:
        return PointConfig(n, points)
    except ValueError as err:
        raise DocumentError(str(err)) from None


def config_to_doc(config: PointConfig) -> dict:
    return {"n": config.n, "points": [[format_scalar(v) for v in p] for p in config.points]}


# ---------------------------------------------------------------------------
# classification reports


def normal_form_to_doc(nf: NormalForm) -> dict:
    params = {"k": nf.k, "n": nf.n}
    if nf.tag in DEGENERATE_TAGS:
        params["j"] = nf.j
    return {"tag": nf.tag, "params": params}


def normal_form_from_doc(doc) -> NormalForm:
    try:
        params = doc["params"]
        return NormalForm(doc["tag"], params["n"], params["k"], params.get("j"))
    except (KeyError, TypeError, ValueError) as err:
        raise DocumentError(f"bad normal form: {err}") from None


def report_to_doc(report: ClassificationReport) -> dict:
    return {
        "k": report.k,
        "n": report.n,
        "recognition_dim": report.recognition_dim,
        "general_position": report.general_position,
        "likeness": report.likeness.value if report.likeness else "undefined",
        "normal_form": normal_form_to_doc(report.normal_form),
        "theorem_case": report.theorem_case,
        "borderline": report.borderline,
    }


# ---------------------------------------------------------------------------
# witnesses


def _affine_doc(stage, mapping) -> dict:
    return {
        "stage": stage,
        "matrix": mapping.matrix,
        "offset": mapping.offset,
    }


def witness_to_doc(config: PointConfig, witness: Witness) -> dict:
    target = []
    for elem in witness.target:
        if elem.kind == "affine":
            target.append({**_affine_doc(elem.stage, elem), "kind": "affine"})
        else:
            target.append({
                "stage": elem.stage, "kind": "quad_shear",
                "index": elem.index, "sign": elem.sign, "quad": elem.quad,
            })
    return {
        "config": config_to_doc(config),
        "case": witness.case,
        "metric": witness.metric,
        "normal_form": normal_form_to_doc(witness.normal_form),
        "source": {"matrix": witness.source.matrix, "offset": witness.source.offset},
        "source_factors": [_affine_doc(stage, m) for stage, m in witness.source_factors],
        "target": target,
        "checkpoints": [
            {
                "stage": cp.stage,
                "target_prefix": cp.target_prefix,
                "metric": cp.metric,
                "linear": cp.linear,
                "source": {"matrix": cp.source.matrix, "offset": cp.source.offset},
            }
            for cp in witness.checkpoints
        ],
    }


def _affine_from_doc(doc) -> AffineMap:
    return AffineMap.build(doc["matrix"], doc["offset"])


def witness_from_doc(doc, exact: bool = False) -> tuple[PointConfig, Witness]:
    try:
        config = config_from_doc(doc["config"], exact)
        nf = normal_form_from_doc(doc["normal_form"])
        source = _affine_from_doc(doc["source"])
        factors = tuple((f["stage"], _affine_from_doc(f)) for f in doc["source_factors"])
        target = []
        for elem in doc["target"]:
            if elem["kind"] == "affine":
                target.append(TargetAffine.build(elem["stage"], elem["matrix"], elem["offset"]))
            elif elem["kind"] == "quad_shear":
                target.append(TargetQuadShear(
                    elem["stage"], int(elem["index"]), int(elem["sign"]),
                    np.asarray(elem["quad"], dtype=float),
                ))
            else:
                raise DocumentError(f"unknown target kind {elem['kind']!r}")
        checkpoints = tuple(
            Checkpoint(
                cp["stage"], _affine_from_doc(cp["source"]), int(cp["target_prefix"]),
                np.asarray(cp["linear"], dtype=float), cp["metric"],
            )
            for cp in doc.get("checkpoints", [])
        )
        witness = Witness(
            source=source, source_factors=factors, target=tuple(target),
            normal_form=nf, case=doc["case"], metric=doc.get("metric", "lorentz"),
            checkpoints=checkpoints,
        )
    except (KeyError, TypeError, ValueError) as err:
        if isinstance(err, DocumentError):
            raise
        raise DocumentError(f"bad witness document: {err}") from None
    return config, witness


# ---------------------------------------------------------------------------
# verification and fiber output


def verification_to_doc(report: VerificationReport) -> dict:
    return {
        "samples": report.samples,
        "tol": report.tol,
        "seed": report.seed,
        "max_residual": report.max_residual,
        "mean_residual": report.mean_residual,
        "source_det": report.source_det,
        "target_roundtrip_max": report.target_roundtrip_max,
        "lorentz_defect_h4": report.lorentz_defect_h4,
        "checkpoint_residuals": report.checkpoint_residuals,
        "verdict": report.verdict,
    }


def fiber_to_doc(config: PointConfig, y, conic, points: np.ndarray) -> dict:
    return {
        "n": config.n,
        "conic_type": conic.value,
        "y": [format_scalar(v) for v in y],
        "count": int(points.shape[0]),
        "points": points,
    }


def fiber_to_csv(config: PointConfig, points: np.ndarray) -> str:
    header = ",".join(f"x{i}" for i in range(config.n + 1))
    lines = [header]
    for row in points:
        lines.append(",".join(f"{float(v):.12g}" for v in row))
    return "\n".join(lines) + "\n"
