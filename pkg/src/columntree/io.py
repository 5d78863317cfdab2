"""Deterministic JSON I/O for instances and embeddings.

Heights travel as exact rational strings ("7/3") or plain integers, so a
parse/serialize round trip is lossless. Serialization is canonical:
sorted keys, no whitespace, arrays in vertex-id order, one trailing
newline. Identical inputs therefore produce byte-identical files, which
the CLI determinism guarantees lean on.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping, Optional

from .model import (
    ColumnTree,
    Embedding,
    VertexRecord,
    embedding_structure_errors,
    validate,
)

INSTANCE_FORMAT = "columntree-instance"
EMBEDDING_FORMAT = "columntree-embedding"
FORMAT_VERSION = 1


class ParseError(ValueError):
    """Malformed or invalid document; the message names the first problem."""


def _height_to_json(h: Fraction) -> Any:
    if h.denominator == 1:
        return int(h)
    return f"{h.numerator}/{h.denominator}"


def _height_from_json(raw: Any, where: str) -> Fraction:
    if isinstance(raw, bool):
        raise ParseError(f"{where}: height must be an integer or 'p/q' string")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"{where}: bad rational {raw!r}") from exc
    raise ParseError(f"{where}: height must be an integer or 'p/q' string, got {raw!r}")


def _canonical_bytes(doc: Any) -> bytes:
    return (json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n").encode(
        "utf-8"
    )


def _require(doc: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in doc:
        raise ParseError(f"{where}: missing field {key!r}")
    return doc[key]


def parse_instance(data: bytes | str) -> ColumnTree:
    """Parse an instance document and return a tree that validates.

    Raises ParseError on malformed JSON or on the first violated
    invariant (all violations are listed in the message).
    """
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    if doc.get("format") != INSTANCE_FORMAT:
        raise ParseError(f"format must be {INSTANCE_FORMAT!r}")
    column_count = _require(doc, "column_count", "instance")
    if not isinstance(column_count, int) or isinstance(column_count, bool):
        raise ParseError("column_count must be an integer")
    raw_vertices = _require(doc, "vertices", "instance")
    if not isinstance(raw_vertices, list) or not raw_vertices:
        raise ParseError("vertices must be a non-empty array")
    records = []
    for i, rv in enumerate(raw_vertices):
        where = f"vertices[{i}]"
        if not isinstance(rv, dict):
            raise ParseError(f"{where}: must be an object")
        vid = _require(rv, "id", where)
        if not isinstance(vid, int) or isinstance(vid, bool):
            raise ParseError(f"{where}: id must be an integer")
        parent = rv.get("parent")
        if parent is not None and (not isinstance(parent, int) or isinstance(parent, bool)):
            raise ParseError(f"{where}: parent must be an integer or null")
        column = _require(rv, "column", where)
        if not isinstance(column, int) or isinstance(column, bool):
            raise ParseError(f"{where}: column must be an integer")
        height = _height_from_json(_require(rv, "height", where), where)
        records.append(VertexRecord(vid, parent, height, column))
    tree = ColumnTree(records, column_count)
    report = validate(tree)
    if not report.ok:
        lines = "; ".join(f"{v.code}: {v.detail}" for v in report.violations)
        raise ParseError(f"instance does not validate: {lines}")
    return tree


def serialize_instance(tree: ColumnTree) -> bytes:
    doc = {
        "format": INSTANCE_FORMAT,
        "version": FORMAT_VERSION,
        "column_count": tree.column_count,
        "vertices": [
            {
                "id": rec.id,
                "parent": rec.parent,
                "height": _height_to_json(rec.height),
                "column": rec.column,
            }
            for rec in tree.vertices
        ],
    }
    return _canonical_bytes(doc)


def serialize_embedding(
    tree: ColumnTree,
    embedding: Embedding,
    report: Optional[Mapping[str, int]] = None,
) -> bytes:
    """Canonical embedding document; raises ParseError on a mismatch."""
    errs = embedding_structure_errors(tree, embedding)
    if errs:
        raise ParseError(f"embedding does not fit the tree: {errs[0]}")
    doc: dict[str, Any] = {
        "format": EMBEDDING_FORMAT,
        "version": FORMAT_VERSION,
        "column_order": list(embedding.column_order),
        "child_order": {
            str(v): list(order)
            for v, order in sorted(embedding.child_order.items())
        },
        "arrangements": {
            str(col): list(tokens)
            for col, tokens in sorted(embedding.arrangements.items())
        },
    }
    if report is not None:
        doc["report"] = {
            "k_subtree": int(report["k_subtree"]),
            "k_column": int(report["k_column"]),
            "k_inter": int(report["k_inter"]),
            "total": int(report["total"]),
        }
    return _canonical_bytes(doc)


def parse_embedding(data: bytes | str, tree: ColumnTree) -> Embedding:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != EMBEDDING_FORMAT:
        raise ParseError(f"format must be {EMBEDDING_FORMAT!r}")
    raw_order = _require(doc, "column_order", "embedding")
    raw_children = _require(doc, "child_order", "embedding")
    raw_arr = _require(doc, "arrangements", "embedding")
    try:
        child_order = {
            int(v): tuple(int(c) for c in order)
            for v, order in raw_children.items()
        }
        arrangements = {
            int(col): tuple(int(t) for t in tokens)
            for col, tokens in raw_arr.items()
        }
        column_order = tuple(int(c) for c in raw_order)
    except (TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"malformed embedding fields: {exc}") from exc
    emb = Embedding(child_order, arrangements, column_order)
    errs = embedding_structure_errors(tree, emb)
    if errs:
        raise ParseError(f"embedding does not fit the tree: {errs[0]}")
    return emb
