"""Command-line front end: JSON in, canonical JSON (or CSV) out.

Exit codes: 0 success (and verification pass), 1 verification failure,
2 usage errors, malformed documents, or configurations outside an
operation's hypotheses.
"""

from __future__ import annotations

import json
import sys

import click

from . import documents as docs
from .fibers import SingularFiberError, fiber_conic_type, sample_fiber
from .mappings import classify_lorentz
from .normalizer import StageGuardError, build_witness
from .verifier import verify_witness

_INPUT_ERRORS = (docs.DocumentError, StageGuardError, ValueError, TypeError, KeyError)


def _load(path: str):
    try:
        raw = sys.stdin.read() if path == "-" else open(path, "r", encoding="utf-8").read()
    except OSError as err:
        _usage_error(str(err))
    try:
        return json.loads(raw)
    except json.JSONDecodeError as err:
        _usage_error(f"malformed JSON: {err}")


def _usage_error(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _setting(doc, option_value, key, default):
    if option_value is not None:
        return option_value
    value = doc.get(key, default) if isinstance(doc, dict) else default
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        _usage_error(f"bad value for {key!r}")
    return value


@click.group()
def main():
    """Classify, normalize, verify, and sample Lorentzian distance-squared mappings."""


@main.command()
@click.argument("input", default="-")
@click.option("--exact", is_flag=True, help="Reject float scalars; require ints or p/q strings.")
def classify(input, exact):
    """Report the equivalence class of the configuration in INPUT."""
    doc = _load(input)
    try:
        config = docs.config_from_doc(doc, exact)
        report = classify_lorentz(config)
    except _INPUT_ERRORS as err:
        _usage_error(str(err))
    click.echo(docs.dump_json(docs.report_to_doc(report)), nl=False)


@main.command()
@click.argument("input", default="-")
@click.option("--exact", is_flag=True, help="Reject float scalars; require ints or p/q strings.")
def witness(input, exact):
    """Construct the coordinate-change witness for the configuration in INPUT."""
    doc = _load(input)
    try:
        config = docs.config_from_doc(doc, exact)
        built = build_witness(config)
    except _INPUT_ERRORS as err:
        _usage_error(str(err))
    click.echo(docs.dump_json(docs.witness_to_doc(config, built)), nl=False)


@main.command()
@click.argument("input", default="-")
@click.option("--tol", type=float, default=None, help="Residual tolerance (default 1e-8).")
@click.option("--samples", type=int, default=None, help="Sample count (default 100).")
@click.option("--seed", type=int, default=None, help="Sampling seed (default 42).")
def verify(input, tol, samples, seed):
    """Check a witness document (as emitted by `witness`) numerically."""
    doc = _load(input)
    try:
        config, built = docs.witness_from_doc(doc)
        report = verify_witness(
            config, built,
            samples=int(_setting(doc, samples, "samples", 100)),
            tol=float(_setting(doc, tol, "tol", 1e-8)),
            seed=int(_setting(doc, seed, "seed", 42)),
        )
    except _INPUT_ERRORS as err:
        _usage_error(str(err))
    click.echo(docs.dump_json(docs.verification_to_doc(report)), nl=False)
    if not report.passed:
        sys.exit(1)


@main.command()
@click.argument("input", default="-")
@click.option("--y", "y_text", default=None, help="Target value as a JSON array.")
@click.option("--count", type=int, default=None, help="Number of fiber points (default 16).")
@click.option("--window", type=float, default=3.0, show_default=True,
              help="Parameter window for unbounded conics.")
@click.option("--csv", "as_csv", is_flag=True, help="Emit CSV instead of JSON.")
@click.option("--exact", is_flag=True, help="Reject float scalars; require ints or p/q strings.")
def fiber(input, y_text, count, window, as_csv, exact):
    """Sample the fiber of the configuration in INPUT over a target value."""
    doc = _load(input)
    if y_text is not None:
        try:
            y_raw = json.loads(y_text)
        except json.JSONDecodeError as err:
            _usage_error(f"malformed --y: {err}")
    else:
        y_raw = doc.get("y") if isinstance(doc, dict) else None
    if not isinstance(y_raw, list):
        _usage_error("missing target value: pass --y or a \"y\" array in the document")
    try:
        config = docs.config_from_doc(doc, exact)
        y = [docs.parse_scalar(v, exact) for v in y_raw]
        if len(y) != config.k + 1:
            raise ValueError(f"target value of length {len(y)}, expected {config.k + 1}")
        conic = fiber_conic_type(config)
        points = sample_fiber(
            config, y, count=int(_setting(doc, count, "count", 16)), window=window,
        )
    except SingularFiberError as err:
        _usage_error(str(err))
    except _INPUT_ERRORS as err:
        _usage_error(str(err))
    if as_csv:
        click.echo(docs.fiber_to_csv(config, points), nl=False)
    else:
        click.echo(docs.dump_json(docs.fiber_to_doc(config, y, conic, points)), nl=False)


if __name__ == "__main__":
    main()
