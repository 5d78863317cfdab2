"""Greedy insertion heuristic for V3 drawings.

V3 drops the side-by-side restriction of V2: a column subtree may sit
inside a gap of another one, as long as no two tree edges of the column
cross each other. The heuristic embeds every subtree optimally in
isolation, then fills each column by inserting subtrees in descending
root-height order, each at the slot of the current arrangement where it
adds the fewest crossings (leftmost on ties). Finding that slot is the
part the exact theory leaves open; here a candidate is any gap of the
current leaf-token sequence, including gaps strictly inside an already
placed subtree, and its cost is re-counted from the tentative layout,
restricted to crossings that involve the inserted subtree's edges.

The same candidate machinery backs the brute-force oracle's V3
arrangement enumeration, which explores every insertion choice instead
of committing greedily.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from .crossings import (
    ColumnContext,
    CrossingReport,
    build_column_context,
    column_cost,
    count_crossings,
    merge_child_order,
)
from .embedder import embed_subtree, subtree_stubs
from .model import ColumnTree, Embedding, Variant, column_subtrees

DISJOINT = "disjoint"
LEFT_OF = "left"
RIGHT_OF = "right"
SPLIT = "split"


@dataclass(frozen=True)
class InsertionPosition:
    """One combinatorially distinct slot for a subtree entering a column.

    ``gap`` is the token index where the subtree's leaf run would start
    (leftmost representative of its class); ``relations`` records, per
    already placed subtree in left-to-right order, how the newcomer
    would sit relative to it, with vertically disjoint subtrees
    collapsed to a single relation since no edge of one can reach the
    other.
    """

    column: int
    gap: int
    relations: tuple[str, ...]
    delta: int
    valid: bool


def _extent(ctx: ColumnContext, root: int):
    hs = [ctx.tree.height(v) for v in ctx.subs[root].vertices]
    return min(hs), max(hs)


def candidate_positions(
    ctx: ColumnContext,
    col: int,
    tokens: Sequence[int],
    child_order: Mapping[int, Sequence[int]],
    new_root: int,
) -> list[InsertionPosition]:
    """Distinct insertion slots for ``new_root`` given a partial column.

    Every gap of the token sequence is tried; gaps whose relation
    profile, crossing delta, and validity all coincide are one class.
    ``delta`` counts the crossings involving the inserted subtree's
    edges (intra, stubs, entry) in the tentative layout, obtained by
    re-counting the column with and without that subtree's geometry;
    ``valid`` says the column's tree edges stay mutually crossing-free.
    """
    tokens = tuple(tokens)
    cnt = ctx.leaf_count[new_root]
    run = (new_root,) * cnt
    placed_order: list[int] = []
    positions: dict[int, list[int]] = {}
    for i, r in enumerate(tokens):
        if r not in positions:
            placed_order.append(r)
            positions[r] = []
        positions[r].append(i)
    lo_n, hi_n = _extent(ctx, new_root)
    overlaps: dict[int, bool] = {}
    for r in placed_order:
        lo, hi = _extent(ctx, r)
        overlaps[r] = min(hi, hi_n) > max(lo, lo_n)

    ghost = frozenset({new_root})
    out: list[InsertionPosition] = []
    seen: set[tuple] = set()
    for g in range(len(tokens) + 1):
        rel: list[str] = []
        for r in placed_order:
            if not overlaps[r]:
                rel.append(DISJOINT)
            elif all(p < g for p in positions[r]):
                rel.append(RIGHT_OF)
            elif all(p >= g for p in positions[r]):
                rel.append(LEFT_OF)
            else:
                rel.append(SPLIT)
        trial = tokens[:g] + run + tokens[g:]
        after = column_cost(ctx, col, trial, child_order, include_passover=False)
        rest = column_cost(
            ctx, col, trial, child_order, include_passover=False, ghost_roots=ghost
        )
        key = (tuple(rel), after.total - rest.total, after.intra_intra == 0)
        if key in seen:
            continue
        seen.add(key)
        out.append(InsertionPosition(col, g, *key))
    return out


def solve_v3_greedy(
    tree: ColumnTree,
    column_order: Optional[Sequence[int]] = None,
    refine: Optional[
        Callable[[ColumnContext, int, tuple[int, ...]], tuple[int, ...]]
    ] = None,
) -> tuple[Embedding, CrossingReport]:
    """Greedy V3 embedding: per-subtree optimal orders, then insertion.

    Subtrees of a column enter in descending root-height order (ties by
    id), each at the valid candidate position of minimum delta, leftmost
    when tied. ``refine`` is a hook for a post-insertion improvement
    pass over a finished column's tokens; none ships by default.
    """
    order = tuple(column_order or range(1, tree.column_count + 1))
    ctx = build_column_context(tree, order)
    intra: dict[int, tuple[int, ...]] = {}
    for sub in column_subtrees(tree):
        got, _ = embed_subtree(tree, sub, subtree_stubs(tree, sub, order))
        intra.update(got)
    full = merge_child_order(tree, intra)

    tokens: dict[int, tuple[int, ...]] = {}
    for col in order:
        cur: tuple[int, ...] = ()
        roots = sorted(
            (s.root for s in ctx.by_col[col]),
            key=lambda r: (-tree.height(r), r),
        )
        for r in roots:
            cands = [
                c
                for c in candidate_positions(ctx, col, cur, full, r)
                if c.valid
            ]
            if not cands:
                raise RuntimeError(
                    f"no crossing-free slot for subtree {r} in column {col}"
                )
            best = min(cands, key=lambda c: (c.delta, c.gap))
            cur = cur[: best.gap] + (r,) * ctx.leaf_count[r] + cur[best.gap :]
        if refine is not None:
            cur = refine(ctx, col, cur)
        tokens[col] = cur
    emb = Embedding(full, tokens, order)
    return emb, count_crossings(tree, emb, Variant.V3)
