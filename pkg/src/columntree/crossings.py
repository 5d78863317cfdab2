"""Crossing counting, validity checking, and the brute-force oracle.

Counting semantics
------------------
A crossing is a proper interior intersection of two edge drawings: a
horizontal piece of one edge strictly straddled by the vertical piece of
another, all comparisons strict. Pairs of edges sharing a vertex never
cross properly (sibling horizontals overlap by sanction, parent/child
pieces only touch), and collinear overlaps of parallel segments are
never crossings.

Every crossing lives in the column of the vertical's target vertex and
is classified there:

* the horizontal's edge passes over a strictly intermediate column ->
  ``k_inter`` (independent of all embedding choices),
* both edges attach to the same column subtree -> ``k_subtree``,
* otherwise -> ``k_column``.

Two implementations are kept deliberately. :func:`count_crossings`
realizes the full drawing via :mod:`columntree.render` and counts
pairwise with numpy; it is the reference definition. The oracle and the
heuristics use a per-column evaluator (:func:`column_cost`) that
abstracts foreign columns to open-ended rays, which charges exactly the
same crossings column by column. The test suite pins the two to each
other and to a naive float checker.

The brute-force oracle exploits that the total decomposes per column:
each crossing is charged to one column, and the local count depends only
on that column's child orders and arrangement, so columns are minimized
independently. Within a column, child orders are enumerated up to
interchangeable-branch symmetry (branches with equal shape, heights and
stub profile), orders that provably cannot influence any count are
frozen, and arrangements are enumerated as block permutations (V1/V2) or
by a tallest-first nesting insertion search (V3). Columns with too many
blocks to permute naively fall back to an exact prefix-set dynamic
program over pairwise block interaction costs; interactions between two
blocks depend only on their relative side, so the pairwise sum is exact,
and the DP result is verified against a direct evaluation of the chosen
arrangement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .model import (
    ColumnSubtree,
    ColumnTree,
    EdgeKind,
    Embedding,
    Variant,
    classify_edges,
    column_subtrees,
    embedding_structure_errors,
    subtree_leaf_count,
    subtree_lookup,
)
from .render import assign_coordinates, edge_segments


class InvalidEmbeddingError(ValueError):
    pass


class InfeasibleVariantError(RuntimeError):
    """No embedding satisfies the drawing convention (possible under V1)."""


class SearchSpaceError(RuntimeError):
    """The brute-force search space exceeds the configured limit."""


@dataclass(frozen=True)
class CrossingReport:
    k_subtree: int
    k_column: int
    k_inter: int

    @property
    def total(self) -> int:
        return self.k_subtree + self.k_column + self.k_inter

    def as_dict(self) -> dict[str, int]:
        return {
            "k_subtree": self.k_subtree,
            "k_column": self.k_column,
            "k_inter": self.k_inter,
            "total": self.total,
        }


def merge_child_order(
    tree: ColumnTree, intra_orders: Mapping[int, Sequence[int]]
) -> dict[int, tuple[int, ...]]:
    """Full child_order map: chosen intra order, inter children appended."""
    out: dict[int, tuple[int, ...]] = {}
    for v in tree.by_id:
        kids = tree.children[v]
        if not kids:
            continue
        intra = tuple(intra_orders.get(v, tree.intra_children(v)))
        out[v] = intra + tree.inter_children(v)
    return out


# ---------------------------------------------------------------------------
# reference implementation: count on the fully realized layout
# ---------------------------------------------------------------------------


def _rank(values: Iterable[Fraction]) -> dict[Fraction, int]:
    return {v: i for i, v in enumerate(sorted(set(values)))}


@dataclass
class _FullCount:
    report: CrossingReport
    per_column: dict[int, CrossingReport]
    intra_intra: int
    v1_violations: int
    points: list[tuple[Fraction, Fraction]]


def _count_on_layout(tree: ColumnTree, emb: Embedding, want_points: bool) -> _FullCount:
    layout = assign_coordinates(tree, emb)
    segs = edge_segments(tree, layout)
    owner = subtree_lookup(tree)
    pos = layout.column_positions

    empty_cols = {c: CrossingReport(0, 0, 0) for c in range(1, tree.column_count + 1)}
    hs = [s for s in segs if s.hx1 is not None]
    vs = segs  # every edge has a vertical piece
    if not hs or not vs:
        return _FullCount(CrossingReport(0, 0, 0), empty_cols, 0, 0, [])

    xr = _rank(layout.x.values())
    yr = _rank(layout.y.values())

    h_y = np.array([yr[s.hy] for s in hs])
    h_x1 = np.array([xr[s.hx1] for s in hs])
    h_x2 = np.array([xr[s.hx2] for s in hs])
    h_u = np.array([s.edge[0] for s in hs])
    h_v = np.array([s.edge[1] for s in hs])
    h_pu = np.array([pos[tree.column(s.edge[0])] for s in hs])
    h_pv = np.array([pos[tree.column(s.edge[1])] for s in hs])
    h_att_src = np.array([owner[s.edge[0]] for s in hs])
    h_att_tgt = np.array([owner[s.edge[1]] for s in hs])
    h_intra = np.array([tree.column(s.edge[0]) == tree.column(s.edge[1]) for s in hs])

    v_x = np.array([xr[s.vx] for s in vs])
    v_y1 = np.array([yr[s.vy1] for s in vs])
    v_y2 = np.array([yr[s.vy2] for s in vs])
    v_u = np.array([s.edge[0] for s in vs])
    v_v = np.array([s.edge[1] for s in vs])
    v_gpos = np.array([pos[tree.column(s.edge[1])] for s in vs])
    v_att = np.array([owner[s.edge[1]] for s in vs])
    v_intra = np.array([tree.column(s.edge[0]) == tree.column(s.edge[1]) for s in vs])

    straddle = (h_x1[:, None] < v_x[None, :]) & (v_x[None, :] < h_x2[:, None])
    span = (v_y1[None, :] < h_y[:, None]) & (h_y[:, None] < v_y2[None, :])
    share = (
        (h_u[:, None] == v_u[None, :])
        | (h_u[:, None] == v_v[None, :])
        | (h_v[:, None] == v_u[None, :])
        | (h_v[:, None] == v_v[None, :])
    )
    pairs = straddle & span & ~share

    lo = np.minimum(h_pu, h_pv)[:, None]
    hi = np.maximum(h_pu, h_pv)[:, None]
    inter_mask = pairs & (lo < v_gpos[None, :]) & (v_gpos[None, :] < hi)

    # attachment subtree of the horizontal's edge in the crossing column
    h_att = np.where(
        h_pv[:, None] == v_gpos[None, :], h_att_tgt[:, None], h_att_src[:, None]
    )
    rest = pairs & ~inter_mask
    same = h_att == v_att[None, :]
    sub_mask = rest & same
    col_mask = rest & ~same

    ii = pairs & h_intra[:, None] & v_intra[None, :]
    v1bad = pairs & (
        (~h_intra[:, None] & v_intra[None, :] & (h_pv[:, None] == v_gpos[None, :]))
        | (h_intra[:, None] & ~v_intra[None, :])
    )

    per_column = dict(empty_cols)
    for col in per_column:
        sel = v_gpos[None, :] == pos[col]
        per_column[col] = CrossingReport(
            int((sub_mask & sel).sum()),
            int((col_mask & sel).sum()),
            int((inter_mask & sel).sum()),
        )

    report = CrossingReport(
        int(sub_mask.sum()), int(col_mask.sum()), int(inter_mask.sum())
    )
    points: list[tuple[Fraction, Fraction]] = []
    if want_points:
        hi_idx, vi_idx = np.nonzero(pairs)
        for i, j in zip(hi_idx.tolist(), vi_idx.tolist()):
            points.append((vs[j].vx, hs[i].hy))
        points.sort()
    return _FullCount(report, per_column, int(ii.sum()), int(v1bad.sum()), points)


def count_crossings(
    tree: ColumnTree, emb: Embedding, variant: Optional[Variant] = None
) -> CrossingReport:
    """Count and classify all crossings of the realized drawing.

    When a variant is given the embedding is first checked against it
    and an InvalidEmbeddingError carries the violations.
    """
    if variant is not None:
        ok, why = check_validity(tree, emb, variant)
        if not ok:
            raise InvalidEmbeddingError("; ".join(why))
    return _count_on_layout(tree, emb, want_points=False).report


def column_breakdown(tree: ColumnTree, emb: Embedding) -> dict[int, CrossingReport]:
    """Per-column crossing reports (a crossing lives in its vertical's column)."""
    return _count_on_layout(tree, emb, want_points=False).per_column


def crossing_points(tree: ColumnTree, emb: Embedding) -> list[tuple[Fraction, Fraction]]:
    """Exact (x, y) of every counted crossing, for SVG markers."""
    return _count_on_layout(tree, emb, want_points=True).points


def count_inter(tree: ColumnTree, column_order: Optional[Sequence[int]] = None) -> int:
    """Crossings inside strictly intermediate columns.

    These depend only on the tree and the column order: an inter-edge at
    source height y crosses, in each column it passes over, exactly the
    edges whose vertical drop strictly spans y.
    """
    order = tuple(column_order or range(1, tree.column_count + 1))
    pos = {c: i for i, c in enumerate(order)}
    edges = classify_edges(tree)
    drops = [
        (pos[tree.column(e.target)], tree.height(e.target), tree.height(e.source))
        for e in edges
    ]
    total = 0
    for e in edges:
        if e.kind is not EdgeKind.INTER:
            continue
        y = tree.height(e.source)
        a, b = pos[tree.column(e.source)], pos[tree.column(e.target)]
        lo, hi = min(a, b), max(a, b)
        for p, dy1, dy2 in drops:
            if lo < p < hi and dy1 < y < dy2:
                total += 1
    return total


# ---------------------------------------------------------------------------
# validity
# ---------------------------------------------------------------------------


def check_validity(
    tree: ColumnTree, emb: Embedding, variant: Variant
) -> tuple[bool, list[str]]:
    """Structural checks plus the geometric clauses of the variant.

    All variants forbid intra-edge/intra-edge crossings (column subtrees
    are drawn planar and must not cross each other). V1 additionally
    forbids an inter-edge from crossing intra-edges of its target
    column; V1 and V2 forbid interleaved column subtrees; V3 allows
    interleaving through nesting.
    """
    errs = embedding_structure_errors(tree, emb)
    if errs:
        return False, errs
    full = _count_on_layout(tree, emb, want_points=False)
    why: list[str] = []
    if full.intra_intra:
        why.append(f"{full.intra_intra} intra-edge pairs cross")
    if variant is Variant.V1 and full.v1_violations:
        why.append(
            f"{full.v1_violations} inter-edge crossings with intra-edges "
            "of the target column"
        )
    if variant in (Variant.V1, Variant.V2):
        why.extend(_interleavings(tree, emb))
    return (not why), why


def _interleavings(tree: ColumnTree, emb: Embedding) -> list[str]:
    """Pairs of column subtrees some horizontal line meets as A, B, A.

    Geometry per subtree is its vertices plus intra-edges; the sweep
    samples every vertex height of the column and the midpoints between
    consecutive ones, and flags B whenever it has a point strictly
    inside the horizontal extent of A at that height.
    """
    layout = assign_coordinates(tree, emb)
    owner = subtree_lookup(tree)
    found: dict[tuple[int, int, int], Fraction] = {}
    for col, tokens in emb.arrangements.items():
        roots = sorted(set(tokens))
        if len(roots) < 2:
            continue
        geo: dict[int, list[tuple[Fraction, Fraction, Fraction, Fraction]]] = {
            r: [] for r in roots
        }
        heights: set[Fraction] = set()
        for rec in tree.vertices:
            if tree.column(rec.id) != col:
                continue
            heights.add(rec.height)
            r = owner[rec.id]
            x = layout.x[rec.id]
            geo[r].append((x, x, rec.height, rec.height))  # the vertex point
            p = rec.parent
            if p is not None and tree.column(p) == col:
                xp, hp = layout.x[p], tree.height(p)
                if xp != x:
                    geo[r].append((min(xp, x), max(xp, x), hp, hp))
                geo[r].append((x, x, rec.height, hp))
        hs = sorted(heights)
        samples = list(hs)
        for a, b in zip(hs, hs[1:]):
            samples.append((a + b) / 2)
        for eta in samples:
            spans: dict[int, list[tuple[Fraction, Fraction]]] = {}
            for r in roots:
                xs = [(x1, x2) for x1, x2, y1, y2 in geo[r] if y1 <= eta <= y2]
                if xs:
                    spans[r] = xs
            for a in spans:
                lo = min(x for x, _ in spans[a])
                hi = max(x for _, x in spans[a])
                if lo == hi:
                    continue
                for b in spans:
                    if b == a or (col, a, b) in found:
                        continue
                    if any(x2 > lo and x1 < hi for x1, x2 in spans[b]):
                        found[(col, a, b)] = eta
    return [
        f"column {c}: subtree {b} has points inside subtree {a} at height {eta}"
        for (c, a, b), eta in sorted(found.items())
    ]


# ---------------------------------------------------------------------------
# per-column evaluator (fast path shared by the oracle and heuristics)
# ---------------------------------------------------------------------------


_NEG = -1
_POS = 1 << 30


@dataclass
class ColumnContext:
    """Precomputed per-column data for one (tree, column order)."""

    tree: ColumnTree
    column_order: tuple[int, ...]
    pos: dict[int, int]
    subs: dict[int, ColumnSubtree]
    by_col: dict[int, list[ColumnSubtree]]
    owner: dict[int, int]
    leaf_count: dict[int, int]
    yrank: dict[int, dict[Fraction, int]]
    passover: dict[int, list[Fraction]]
    intra_edges: dict[int, list[tuple[int, int]]]
    stubs: dict[int, list[tuple[int, int, int]]]
    entry: dict[int, Optional[tuple[int, int, int]]]


def build_column_context(
    tree: ColumnTree, column_order: Optional[Sequence[int]] = None
) -> ColumnContext:
    order = tuple(column_order or range(1, tree.column_count + 1))
    pos = {c: i for i, c in enumerate(order)}
    subs = {s.root: s for s in column_subtrees(tree)}
    by_col: dict[int, list[ColumnSubtree]] = {c: [] for c in order}
    for s in subs.values():
        by_col[s.column].append(s)
    for col in by_col:
        by_col[col].sort(key=lambda s: s.root)
    owner = subtree_lookup(tree)
    leaf_count = {r: subtree_leaf_count(tree, s) for r, s in subs.items()}

    intra: dict[int, list[tuple[int, int]]] = {r: [] for r in subs}
    stubs: dict[int, list[tuple[int, int, int]]] = {r: [] for r in subs}
    entry: dict[int, Optional[tuple[int, int, int]]] = {r: None for r in subs}
    passover: dict[int, list[Fraction]] = {c: [] for c in order}
    for e in classify_edges(tree):
        cu, cv = tree.column(e.source), tree.column(e.target)
        if e.kind is EdgeKind.INTRA:
            intra[owner[e.target]].append((e.source, e.target))
        else:
            side_out = 1 if pos[cv] > pos[cu] else -1
            stubs[owner[e.source]].append((e.source, e.target, side_out))
            entry[owner[e.target]] = (e.source, e.target, -side_out)
            plo, phi = sorted((pos[cu], pos[cv]))
            for c in order:
                if plo < pos[c] < phi:
                    passover[c].append(tree.height(e.source))

    yrank: dict[int, dict[Fraction, int]] = {}
    for col in order:
        heights: set[Fraction] = set()
        for s in by_col[col]:
            for v in s.vertices:
                heights.add(tree.height(v))
            if entry[s.root] is not None:
                heights.add(tree.height(entry[s.root][0]))
        yrank[col] = {h: i for i, h in enumerate(sorted(heights))}
    return ColumnContext(
        tree, order, pos, subs, by_col, owner, leaf_count,
        yrank, passover, intra, stubs, entry,
    )


@dataclass(frozen=True)
class ColumnCost:
    k_subtree: int
    k_column: int
    k_inter: int
    intra_intra: int
    v1_violations: int

    @property
    def total(self) -> int:
        return self.k_subtree + self.k_column + self.k_inter


def _intra_order_of(
    tree: ColumnTree, col: int, v: int, child_order: Mapping[int, Sequence[int]]
) -> list[int]:
    kids = child_order.get(v)
    if kids is None:
        return list(tree.intra_children(v))
    return [c for c in kids if tree.column(c) == col]


def _column_x(
    ctx: ColumnContext,
    col: int,
    tokens: Sequence[int],
    child_order: Mapping[int, Sequence[int]],
) -> dict[int, int]:
    """Integer x (doubled grid) for the vertices of the placed subtrees."""
    tree = ctx.tree
    slots_of: dict[int, list[int]] = {}
    for slot, r in enumerate(tokens):
        slots_of.setdefault(r, []).append(slot)
    x: dict[int, int] = {}
    for r, slots in slots_of.items():
        leaves: list[int] = []
        order: list[int] = []
        stack = [r]
        while stack:
            v = stack.pop()
            order.append(v)
            intra = _intra_order_of(tree, col, v, child_order)
            if not intra:
                leaves.append(v)
            else:
                stack.extend(reversed(intra))
        if len(leaves) != len(slots):
            raise InvalidEmbeddingError(
                f"subtree {r} has {len(leaves)} drawing leaves, {len(slots)} slots"
            )
        for leaf, slot in zip(leaves, slots):
            x[leaf] = 2 * slot
        for v in reversed(order):
            intra = _intra_order_of(tree, col, v, child_order)
            if intra:
                x[v] = (x[intra[0]] + x[intra[-1]]) // 2
    return x


def column_cost(
    ctx: ColumnContext,
    col: int,
    tokens: Sequence[int],
    child_order: Mapping[int, Sequence[int]],
    include_passover: bool = True,
    ghost_roots: frozenset[int] = frozenset(),
) -> ColumnCost:
    """Crossings charged to ``col`` for the given (partial) arrangement.

    ``tokens`` may cover any subset of the column's subtrees; foreign
    columns are abstracted to open-ended rays, which yields exactly the
    full drawing's charge restricted to the placed subtrees. Subtrees in
    ``ghost_roots`` keep their slots (so everyone else's coordinates are
    unchanged) but contribute no geometry; subtracting a ghosted count
    from the real one isolates the crossings involving those subtrees.
    """
    tree = ctx.tree
    placed = sorted(set(tokens) - ghost_roots)
    if not placed:
        return ColumnCost(0, 0, 0, 0, 0)
    x = _column_x(ctx, col, tokens, child_order)
    yr = ctx.yrank[col]

    V: list[tuple[int, int, int, int, int, int]] = []  # x, y1, y2, u, v, owner
    v_intra_flags: list[bool] = []
    H: list[tuple[int, int, int, int, int, int]] = []  # y, x1, x2, u, v, owner
    h_intra_flags: list[bool] = []
    h_enter_flags: list[bool] = []
    for r in placed:
        for u, v in ctx.intra_edges[r]:
            hu, hv = yr[tree.height(u)], yr[tree.height(v)]
            V.append((x[v], hv, hu, u, v, r))
            v_intra_flags.append(True)
            if x[u] != x[v]:
                H.append((hu, min(x[u], x[v]), max(x[u], x[v]), u, v, r))
                h_intra_flags.append(True)
                h_enter_flags.append(False)
        ent = ctx.entry[r]
        if ent is not None:
            p, rt, side_in = ent
            hp = yr[tree.height(p)]
            V.append((x[rt], yr[tree.height(rt)], hp, p, rt, r))
            v_intra_flags.append(False)
            if side_in < 0:
                H.append((hp, _NEG, x[rt], p, rt, r))
            else:
                H.append((hp, x[rt], _POS, p, rt, r))
            h_intra_flags.append(False)
            h_enter_flags.append(True)
        for sig, tgt, side_out in ctx.stubs[r]:
            hsig = yr[tree.height(sig)]
            if side_out < 0:
                H.append((hsig, _NEG, x[sig], sig, tgt, r))
            else:
                H.append((hsig, x[sig], _POS, sig, tgt, r))
            h_intra_flags.append(False)
            h_enter_flags.append(False)

    k_sub = k_col = ii = v1bad = 0
    if H and V:
        h = np.array(H)
        v = np.array(V)
        h_intra = np.array(h_intra_flags)
        h_enter = np.array(h_enter_flags)
        v_intra = np.array(v_intra_flags)
        straddle = (h[:, 1:2] < v[None, :, 0]) & (v[None, :, 0] < h[:, 2:3])
        span = (v[None, :, 1] < h[:, 0:1]) & (h[:, 0:1] < v[None, :, 2])
        share = (
            (h[:, 3:4] == v[None, :, 3])
            | (h[:, 3:4] == v[None, :, 4])
            | (h[:, 4:5] == v[None, :, 3])
            | (h[:, 4:5] == v[None, :, 4])
        )
        pairs = straddle & span & ~share
        same = h[:, 5:6] == v[None, :, 5]
        k_sub = int((pairs & same).sum())
        k_col = int((pairs & ~same).sum())
        ii = int((pairs & h_intra[:, None] & v_intra[None, :]).sum())
        v1bad = int(
            (
                pairs
                & (
                    (h_enter[:, None] & v_intra[None, :])
                    | (h_intra[:, None] & ~v_intra[None, :])
                )
            ).sum()
        )

    k_inter = 0
    if include_passover:
        for r in placed:
            k_inter += _passover_cost(ctx, col, r)
    return ColumnCost(k_sub, k_col, k_inter, ii, v1bad)


def _passover_cost(ctx: ColumnContext, col: int, r: int) -> int:
    """Crossings of pass-over horizontals with subtree r's verticals."""
    tree = ctx.tree
    spans = [(tree.height(v), tree.height(u)) for u, v in ctx.intra_edges[r]]
    ent = ctx.entry[r]
    if ent is not None:
        spans.append((tree.height(ent[1]), tree.height(ent[0])))
    total = 0
    for y in ctx.passover[col]:
        for lo, hi in spans:
            if lo < y < hi:
                total += 1
    return total


# ---------------------------------------------------------------------------
# child-order enumeration with symmetry reduction
# ---------------------------------------------------------------------------


def _branch_signature(tree: ColumnTree, pos: Mapping[int, int], v: int):
    col = tree.column(v)
    intra = tuple(
        sorted(_branch_signature(tree, pos, c) for c in tree.intra_children(v))
    )
    stubs = tuple(
        sorted(
            (1 if pos[tree.column(c)] > pos[col] else -1, tree.height(c))
            for c in tree.inter_children(v)
        )
    )
    return (tree.height(v), stubs, intra)


def _stubs_below(tree: ColumnTree, v: int) -> bool:
    return any(
        tree.inter_children(c) or _stubs_below(tree, c)
        for c in tree.intra_children(v)
    )


def _distinct_orders(
    children: Sequence[int], sigs: Mapping[int, object]
) -> list[tuple[int, ...]]:
    """All orders of ``children`` distinct up to equal branch signatures.

    Children with identical signatures are interchangeable in every
    count this package computes (equal-signature branches carry no
    inter-edge sources, whose heights are globally unique), so one
    representative per multiset order suffices; within a signature class
    ids stay ascending left to right.
    """
    classes: dict[object, list[int]] = {}
    for c in sorted(children):
        classes.setdefault(sigs[c], []).append(c)
    keys = sorted(classes, key=repr)
    counts = [len(classes[k]) for k in keys]
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int]) -> None:
        if len(prefix) == len(children):
            queues = [list(classes[k]) for k in keys]
            out.append(tuple(queues[i].pop(0) for i in prefix))
            return
        for i in range(len(keys)):
            if counts[i]:
                counts[i] -= 1
                prefix.append(i)
                rec(prefix)
                prefix.pop()
                counts[i] += 1

    rec([])
    return out


def _count_distinct_orders(children: Sequence[int], sigs: Mapping[int, object]) -> int:
    classes: dict[object, int] = {}
    for c in children:
        classes[sigs[c]] = classes.get(sigs[c], 0) + 1
    total, n = 1, 0
    for cnt in classes.values():
        for i in range(1, cnt + 1):
            n += 1
            total = total * n // i
    return total


def _order_slots(
    ctx: ColumnContext, col: int, variant: Variant, count_only: bool = False
) -> tuple[list[tuple[int, list[tuple[int, ...]]]], int]:
    """Vertices of the column whose intra order can matter, with candidates.

    A vertex with no inter-edge source strictly below it is frozen under
    V1/V2 (every foreign horizontal then traverses its branch fully, so
    only order-invariant widths matter); under V3 it additionally stays
    free while some other subtree of the column roots strictly below it,
    since nesting under its span could depend on the order.
    """
    tree = ctx.tree
    sigs = {
        v: _branch_signature(tree, ctx.pos, v)
        for s in ctx.by_col[col]
        for v in s.vertices
    }
    roots_h = {s.root: tree.height(s.root) for s in ctx.by_col[col]}
    slots: list[tuple[int, list[tuple[int, ...]]]] = []
    space = 1
    for s in ctx.by_col[col]:
        for v in sorted(s.vertices):
            intra = tree.intra_children(v)
            if len(intra) < 2:
                continue
            if not _stubs_below(tree, v):
                if variant is not Variant.V3:
                    continue
                others_min = min(
                    (h for r, h in roots_h.items() if r != s.root), default=None
                )
                if others_min is None or others_min >= tree.height(v):
                    continue
            n = _count_distinct_orders(intra, sigs)
            if n <= 1:
                continue
            space *= n
            if not count_only:
                slots.append((v, _distinct_orders(intra, sigs)))
    return slots, space


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

_NAIVE_PERM_LIMIT = 7  # up to 7! block permutations are enumerated naively


def _block_tokens(ctx: ColumnContext, perm: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for r in perm:
        out.extend([r] * ctx.leaf_count[r])
    return tuple(out)


def _v3_arrangements(
    ctx: ColumnContext, col: int, child_order: Mapping[int, Sequence[int]]
) -> Iterator[tuple[int, ...]]:
    """All nesting arrangements: tallest-first contiguous insertion.

    Each subtree is inserted, in descending root-height order, as a
    contiguous token run into any gap of the sequence built so far;
    insertions whose partial drawing crosses intra-edges are pruned.
    Restricting a valid arrangement to its i tallest subtrees keeps each
    of them contiguous and valid, so this walks the whole space.
    """
    tree = ctx.tree
    order = sorted(ctx.by_col[col], key=lambda s: (-tree.height(s.root), s.root))

    def rec(i: int, tokens: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if i == len(order):
            yield tokens
            return
        r = order[i].root
        run = (r,) * ctx.leaf_count[r]
        for gap in range(len(tokens) + 1):
            cand = tokens[:gap] + run + tokens[gap:]
            cost = column_cost(ctx, col, cand, child_order, include_passover=False)
            if cost.intra_intra:
                continue
            yield from rec(i + 1, cand)

    yield from rec(0, ())


def _v3_arrangement_bound(ctx: ColumnContext, col: int) -> int:
    total, placed = 1, 0
    for s in sorted(ctx.by_col[col], key=lambda s: (-ctx.tree.height(s.root), s.root)):
        total *= placed + 1
        placed += ctx.leaf_count[s.root]
    return total


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def estimate_search_space(
    tree: ColumnTree,
    variant: Variant,
    column_order: Optional[Sequence[int]] = None,
) -> int:
    """Upper bound on oracle work units, compared against the space limit."""
    ctx = build_column_context(tree, column_order)
    total = 0
    for col in ctx.column_order:
        _, orders = _order_slots(ctx, col, variant, count_only=True)
        r = len(ctx.by_col[col])
        if variant is Variant.V3:
            arr = _v3_arrangement_bound(ctx, col)
        elif r <= _NAIVE_PERM_LIMIT:
            arr = _factorial(r)
        else:
            arr = (1 << r) * r * r
        total += orders * arr
    return total


def _pairwise_block_data(
    ctx: ColumnContext,
    col: int,
    roots: Sequence[int],
    child_order: Mapping[int, Sequence[int]],
) -> tuple[dict[int, ColumnCost], dict[tuple[int, int], tuple[int, int]]]:
    """Single-block costs and ordered-pair interaction (cost, v1bad) deltas.

    Interactions between two blocks depend only on which is left of
    which: a block's finite horizontals never leave its slab, and its
    rays reach every other block on their side regardless of distance.
    The deltas therefore sum exactly to any full arrangement's cost.
    """
    single = {
        r: column_cost(
            ctx, col, (r,) * ctx.leaf_count[r], child_order, include_passover=False
        )
        for r in roots
    }
    pair: dict[tuple[int, int], tuple[int, int]] = {}
    for a, b in itertools.permutations(roots, 2):
        both = column_cost(
            ctx,
            col,
            (a,) * ctx.leaf_count[a] + (b,) * ctx.leaf_count[b],
            child_order,
            include_passover=False,
        )
        pair[(a, b)] = (
            both.total - single[a].total - single[b].total,
            both.v1_violations - single[a].v1_violations - single[b].v1_violations,
        )
    return single, pair


def _best_block_order_dp(
    ctx: ColumnContext,
    col: int,
    child_order: Mapping[int, Sequence[int]],
    variant: Variant,
) -> Optional[tuple[int, tuple[int, ...]]]:
    """Exact minimum block order by prefix-set DP over pairwise deltas.

    Returns (total cost without pass-overs, block sequence), the
    sequence being the lexicographically smallest optimum; None when no
    valid order exists (possible under V1).
    """
    roots = [s.root for s in ctx.by_col[col]]
    single, pair = _pairwise_block_data(ctx, col, roots, child_order)
    idx = {r: i for i, r in enumerate(roots)}
    n = len(roots)
    full = (1 << n) - 1
    INF = float("inf")

    def append_cost(mask: int, r: int) -> Optional[int]:
        # cost of appending block r to the right of the prefix set `mask`
        add = 0
        for q in roots:
            if mask & (1 << idx[q]):
                d, bad = pair[(q, r)]
                if variant is Variant.V1 and bad > 0:
                    return None
                add += d
        return add

    best: list[float] = [INF] * (1 << n)
    best[full] = 0.0
    for mask in range(full - 1, -1, -1):
        acc = INF
        for r in roots:
            j = idx[r]
            if mask & (1 << j):
                continue
            add = append_cost(mask, r)
            if add is not None and best[mask | (1 << j)] + add < acc:
                acc = best[mask | (1 << j)] + add
        best[mask] = acc
    if best[0] == INF:
        return None

    seq: list[int] = []
    mask = 0
    while mask != full:
        for r in roots:  # ascending root id: lexicographically smallest optimum
            j = idx[r]
            if mask & (1 << j):
                continue
            add = append_cost(mask, r)
            if add is not None and best[mask | (1 << j)] + add == best[mask]:
                seq.append(r)
                mask |= 1 << j
                break
        else:
            raise RuntimeError("block order reconstruction failed")
    base = sum(single[r].total for r in roots)
    return int(best[0]) + base, tuple(seq)


def best_arrangement(
    ctx: ColumnContext,
    col: int,
    child_order: Mapping[int, Sequence[int]],
    variant: Variant,
) -> Optional[tuple[ColumnCost, tuple[int, ...]]]:
    """Minimum-cost valid arrangement of one column for fixed child orders."""
    if variant is not Variant.V3:
        roots = [s.root for s in ctx.by_col[col]]
        if len(roots) > _NAIVE_PERM_LIMIT:
            got = _best_block_order_dp(ctx, col, child_order, variant)
            if got is None:
                return None
            predicted, seq = got
            tokens = _block_tokens(ctx, seq)
            cost = column_cost(ctx, col, tokens, child_order)
            if cost.total - cost.k_inter != predicted:
                raise RuntimeError(
                    "pairwise block decomposition disagrees with direct count"
                )
            return cost, tokens
        candidates: Iterable[tuple[int, ...]] = (
            _block_tokens(ctx, perm) for perm in itertools.permutations(sorted(roots))
        )
    else:
        candidates = _v3_arrangements(ctx, col, child_order)
    best: Optional[tuple[tuple, ColumnCost, tuple[int, ...]]] = None
    for tokens in candidates:
        cost = column_cost(ctx, col, tokens, child_order)
        if cost.intra_intra:
            continue
        if variant is Variant.V1 and cost.v1_violations:
            continue
        key = (cost.total, tokens)
        if best is None or key < best[0]:
            best = (key, cost, tokens)
    if best is None:
        return None
    return best[1], best[2]


def brute_force_optimum(
    tree: ColumnTree,
    variant: Variant,
    column_order: Optional[Sequence[int]] = None,
    space_limit: int = 10_000_000,
) -> tuple[Embedding, CrossingReport]:
    """Exhaustive minimum over child orders and variant-valid arrangements.

    Columns are independent (each crossing is charged to exactly one
    column and depends only on that column's choices), so each column is
    minimized separately; ties fall to the lexicographically smallest
    (cost, tokens, orders) key, making the result canonical. Raises
    SearchSpaceError above ``space_limit`` estimated work units and
    InfeasibleVariantError when a column admits no valid arrangement.
    """
    order = tuple(column_order or range(1, tree.column_count + 1))
    space = estimate_search_space(tree, variant, order)
    if space > space_limit:
        raise SearchSpaceError(
            f"estimated search space {space} exceeds the limit of {space_limit}"
        )
    ctx = build_column_context(tree, order)

    base_intra = {v: tree.intra_children(v) for v in tree.by_id}
    chosen_orders: dict[int, tuple[int, ...]] = dict(base_intra)
    chosen_tokens: dict[int, tuple[int, ...]] = {}
    parts: list[ColumnCost] = []

    for col in ctx.column_order:
        slots, _ = _order_slots(ctx, col, variant)
        best: Optional[tuple[tuple, ColumnCost, tuple[int, ...], dict]] = None
        for combo in itertools.product(*(orders for _, orders in slots)):
            local = dict(base_intra)
            for (v, _), chosen in zip(slots, combo):
                local[v] = chosen
            got = best_arrangement(ctx, col, local, variant)
            if got is None:
                continue
            cost, tokens = got
            key = (cost.total, tokens, combo)
            if best is None or key < best[0]:
                best = (key, cost, tokens, local)
        if best is None:
            raise InfeasibleVariantError(
                f"column {col} admits no valid {variant.value} arrangement"
            )
        _, cost, tokens, local = best
        chosen_tokens[col] = tokens
        for s in ctx.by_col[col]:
            for v in s.vertices:
                chosen_orders[v] = tuple(local[v])
        parts.append(cost)

    report = CrossingReport(
        sum(c.k_subtree for c in parts),
        sum(c.k_column for c in parts),
        sum(c.k_inter for c in parts),
    )
    emb = Embedding(merge_child_order(tree, chosen_orders), chosen_tokens, order)
    return emb, report
