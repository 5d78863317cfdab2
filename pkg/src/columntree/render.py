"""Coordinate assignment and SVG output.

The layout realizes a combinatorial embedding on an exact grid: every
drawing leaf of a column gets one integer slot, inner vertices sit at
the rational midpoint of their first and last child, and y is the exact
vertex height. Columns are separated by a fixed 2-unit gap. All
geometry stays in Fractions; only the SVG writer converts to decimals,
with a fixed format so output is byte-deterministic.

Every edge is drawn with at most one bend: a horizontal segment at the
parent's height (absent when parent and child share an x) followed by a
vertical drop to the child. Horizontal runs of siblings sharing their
source overlap by construction and are never counted as crossings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .model import (
    ColumnSubtree,
    ColumnTree,
    Embedding,
    column_subtrees,
    embedding_structure_errors,
)

COLUMN_GAP = 2  # grid units of padding between adjacent column strips


class LayoutError(ValueError):
    """The embedding cannot be realized (signals a bug upstream)."""


@dataclass(frozen=True)
class Layout:
    """Exact coordinates for one embedding."""

    x: dict[int, Fraction]
    y: dict[int, Fraction]
    column_spans: dict[int, tuple[Fraction, Fraction]]  # column -> [x_left, x_right]
    column_positions: dict[int, int]  # column -> 0-based left-to-right position


def subtree_leaf_order(
    tree: ColumnTree, sub: ColumnSubtree, emb: Embedding
) -> list[int]:
    """Drawing leaves of one column subtree, left to right per child order."""
    leaves: list[int] = []
    stack = [sub.root]
    while stack:
        v = stack.pop()
        kids = [c for c in emb.order_of(v) if tree.column(c) == sub.column]
        if not tree.intra_children(v):
            leaves.append(v)
        else:
            stack.extend(reversed(kids))
    return leaves


def assign_coordinates(tree: ColumnTree, emb: Embedding) -> Layout:
    errs = embedding_structure_errors(tree, emb)
    if errs:
        raise LayoutError(errs[0])

    subs = {s.root: s for s in column_subtrees(tree)}
    x: dict[int, Fraction] = {}
    y = {v: tree.height(v) for v in tree.by_id}
    column_spans: dict[int, tuple[Fraction, Fraction]] = {}
    column_positions: dict[int, int] = {}

    offset = Fraction(0)
    for pos, col in enumerate(emb.column_order):
        column_positions[col] = pos
        tokens = emb.arrangements[col]
        width = max(len(tokens), 1)
        column_spans[col] = (offset, offset + width - 1)

        # hand each subtree the slot indices its tokens occupy
        slots_of: dict[int, list[int]] = {}
        for slot, root in enumerate(tokens):
            slots_of.setdefault(root, []).append(slot)
        for root, slots in slots_of.items():
            leaves = subtree_leaf_order(tree, subs[root], emb)
            assert len(leaves) == len(slots)
            for leaf, slot in zip(leaves, slots):
                x[leaf] = offset + slot

        # inner vertices bottom-up: midpoint of first and last ordered child
        for root in slots_of:
            order = []
            stack = [subs[root].root]
            while stack:
                v = stack.pop()
                order.append(v)
                stack.extend(tree.intra_children(v))
            for v in reversed(order):
                kids = [c for c in emb.order_of(v) if c in tree.by_id and tree.column(c) == col]
                if kids:
                    x[v] = (x[kids[0]] + x[kids[-1]]) / 2

        offset += width - 1 + COLUMN_GAP + 1

    return Layout(x, y, column_spans, column_positions)


@dataclass(frozen=True)
class _Seg:
    """One edge drawing: optional horizontal piece plus the vertical drop."""

    edge: tuple[int, int]  # (parent, child)
    hx1: Optional[Fraction]
    hx2: Optional[Fraction]
    hy: Fraction
    vx: Fraction
    vy1: Fraction
    vy2: Fraction


def edge_segments(tree: ColumnTree, layout: Layout) -> list[_Seg]:
    segs = []
    for rec in tree.vertices:
        if rec.parent is None:
            continue
        u, v = rec.parent, rec.id
        xu, xv = layout.x[u], layout.x[v]
        yu, yv = layout.y[u], layout.y[v]
        if xu == xv:
            segs.append(_Seg((u, v), None, None, yu, xv, yv, yu))
        else:
            segs.append(_Seg((u, v), min(xu, xv), max(xu, xv), yu, xv, yv, yu))
    return segs


_DEFAULT_STRIPS = ("#eef2f7", "#ffffff")


def emit_svg(
    tree: ColumnTree,
    layout: Layout,
    *,
    scale: int = 16,
    mark_crossings: bool = False,
    crossing_points: Optional[Sequence[tuple[Fraction, Fraction]]] = None,
    strip_colors: Sequence[str] = _DEFAULT_STRIPS,
) -> bytes:
    """Standalone SVG 1.1 bytes; same inputs give identical bytes."""
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    pts = list(crossing_points or [])
    if mark_crossings and crossing_points is None:
        raise ValueError("mark_crossings needs crossing_points")

    xs = list(layout.x.values())
    ys = list(layout.y.values())
    x_min, x_max = min(xs), max(xs)
    y_min, y_max = min(ys), max(ys)
    margin = Fraction(3, 2)

    def sx(x: Fraction) -> str:
        return f"{float((x - x_min + margin) * scale):.2f}"

    def sy(y: Fraction) -> str:
        # SVG grows downward; vertex heights grow upward
        return f"{float((y_max - y + margin) * scale):.2f}"

    width = f"{float((x_max - x_min + 2 * margin) * scale):.2f}"
    height = f"{float((y_max - y_min + 2 * margin) * scale):.2f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]

    strips = list(strip_colors) or list(_DEFAULT_STRIPS)
    ordered = sorted(layout.column_positions, key=layout.column_positions.get)
    for col in ordered:
        x0, x1 = layout.column_spans[col]
        color = strips[layout.column_positions[col] % len(strips)]
        rx = f"{float((x0 - x_min + margin - Fraction(1, 2)) * scale):.2f}"
        rw = f"{float((x1 - x0 + 1) * scale):.2f}"
        out.append(
            f'<rect x="{rx}" y="0" width="{rw}" height="{height}" '
            f'fill="{color}" data-column="{col}"/>'
        )

    for seg in edge_segments(tree, layout):
        u, v = seg.edge
        if seg.hx1 is None:
            out.append(
                f'<polyline fill="none" stroke="#2f363d" stroke-width="1.5" '
                f'points="{sx(seg.vx)},{sy(seg.vy2)} {sx(seg.vx)},{sy(seg.vy1)}" '
                f'data-edge="{u}-{v}"/>'
            )
        else:
            xu = layout.x[u]
            out.append(
                f'<polyline fill="none" stroke="#2f363d" stroke-width="1.5" '
                f'points="{sx(xu)},{sy(seg.hy)} {sx(seg.vx)},{sy(seg.hy)} '
                f'{sx(seg.vx)},{sy(seg.vy1)}" data-edge="{u}-{v}"/>'
            )

    for rec in tree.vertices:
        out.append(
            f'<circle cx="{sx(layout.x[rec.id])}" cy="{sy(layout.y[rec.id])}" '
            f'r="3" fill="#0550ae"><title>{rec.id}</title></circle>'
        )

    if mark_crossings:
        for px, py in pts:
            out.append(
                f'<circle cx="{sx(px)}" cy="{sy(py)}" r="4" fill="none" '
                f'stroke="#cf222e" stroke-width="1.5" data-crossing="1"/>'
            )

    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")
