"""Python access to the projective semi-symmetric connection toolkit."""

import json

from ._core import (
    CatalogError,
    EvalError,
    GateError,
    GeometryError,
    ParseError,
    SpecError,
    catalog_names,
    check_ids,
    diff,
    eval_expr,
    manifold_document,
    simplify,
    tensor_ids,
)
from ._core import evaluate as _evaluate
from ._core import verify_json as _verify_json

__all__ = [
    "CatalogError",
    "EvalError",
    "GateError",
    "GeometryError",
    "ParseError",
    "SpecError",
    "catalog_names",
    "check_ids",
    "diff",
    "eval_expr",
    "evaluate",
    "manifold_document",
    "simplify",
    "tensor_ids",
    "verify",
]


def evaluate(tensor, point, manifold=None, file=None):
    """Component array of `tensor` at `point` (0-based numpy indexing).

    Returns (array, index_names, variance)."""
    return _evaluate(tensor, list(point), manifold=manifold, file=file)


def verify(manifold=None, file=None, samples=200, seed=42, checks=(), tolerances=None):
    """Runs the verification checks and returns one dict per report."""
    lines = _verify_json(
        manifold=manifold,
        file=None if file is None else str(file),
        samples=samples,
        seed=seed,
        checks=list(checks),
        tolerances=dict(tolerances or {}),
    )
    return [json.loads(line) for line in lines]
