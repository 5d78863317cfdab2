"""Sweep-line subtree embedder and the V1 solver built on it.

One column subtree at a time: outgoing inter-edges (stubs) are the only
reason an intra order matters, because a stub leaving a vertex deep in
the subtree has to pass over the sibling branches lying on its exit
side at every ancestor. Sweeping vertices bottom to top, each stub
charges every permutation of every ancestor's children with the widths
of the branches it would cross under that permutation; when the sweep
reaches a vertex its cheapest child order is fixed. Counter tables are
allocated lazily, only for ancestors of some stub source, so wide
stub-free vertices (stars) cost nothing.

The V1 solver embeds every column subtree this way and then picks, per
column, the cheapest valid left-to-right order of the resulting blocks.
Intra orders never influence the between-block cost (a foreign
horizontal either traverses a block completely or not at all), so the
two phases compose to a global minimum.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .crossings import (
    CrossingReport,
    InfeasibleVariantError,
    best_arrangement,
    build_column_context,
    count_crossings,
    merge_child_order,
)
from .model import ColumnSubtree, ColumnTree, Embedding, Variant, column_subtrees

LEFT = -1
RIGHT = 1

MAX_COUNTER_DEGREE = 10  # d! counter tables refuse to materialize above this


class DegreeLimitError(RuntimeError):
    """A vertex on a stub path has too many children for a counter table."""


@dataclass(frozen=True)
class InterEdgeStub:
    """An outgoing inter-edge as seen from inside its source's subtree."""

    source: int
    direction: int  # LEFT or RIGHT, the side of the target column
    height: Fraction


@dataclass
class ChildOrderCounters:
    """Crossing counters for every permutation of one vertex's children.

    ``perms`` lists all d! permutations of child positions in
    lexicographic order, so index 0 is the identity; ``counters[k]`` is
    the number of stub crossings charged to permutation ``perms[k]`` so
    far. Counters only ever increase.
    """

    children: tuple[int, ...]
    perms: list[tuple[int, ...]]
    counters: np.ndarray

    @classmethod
    def fresh(cls, children: Sequence[int]) -> "ChildOrderCounters":
        d = len(children)
        if d > MAX_COUNTER_DEGREE:
            raise DegreeLimitError(
                f"vertex with {d} children on a stub path needs {d}! counters; "
                f"the limit is {MAX_COUNTER_DEGREE}"
            )
        perms = list(itertools.permutations(range(d)))
        return cls(tuple(children), perms, np.zeros(len(perms), dtype=np.int64))

    def charge(self, path_idx: int, side: int, branch_widths: Sequence[int]) -> None:
        """Add, per permutation, the widths of branches crossed by a stub.

        The stub rises through child ``path_idx`` and exits towards
        ``side``; under a permutation it crosses exactly the sibling
        branches placed on that side of the path child.
        """
        for k, perm in enumerate(self.perms):
            at = perm.index(path_idx)
            crossed = perm[:at] if side == LEFT else perm[at + 1 :]
            self.counters[k] += sum(branch_widths[j] for j in crossed)

    def fix(self) -> tuple[tuple[int, ...], int]:
        """Cheapest child order; identity wins ties, then lexicographic."""
        k = int(np.argmin(self.counters))  # first minimum in lex order
        return tuple(self.children[j] for j in self.perms[k]), int(self.counters[k])


def width_at(tree: ColumnTree, subtree: ColumnSubtree, eta: Fraction) -> int:
    """Edges of the subtree with one endpoint strictly above eta, the
    other on or below it."""
    eta = Fraction(eta)
    n = 0
    for v in subtree.vertices:
        p = tree.parent(v)
        if p is None or tree.column(p) != subtree.column:
            continue  # the root's incoming edge is not a subtree edge
        if tree.height(v) <= eta < tree.height(p):
            n += 1
    return n


def subtree_stubs(
    tree: ColumnTree,
    subtree: ColumnSubtree,
    column_order: Optional[Sequence[int]] = None,
) -> list[InterEdgeStub]:
    """The subtree's outgoing inter-edges with their exit sides.

    Sides follow positions in ``column_order`` (identity by default, in
    which case they equal the sign of the column index difference).
    """
    order = tuple(column_order or range(1, tree.column_count + 1))
    pos = {c: i for i, c in enumerate(order)}
    out = []
    for v in subtree.vertices:
        for c in tree.inter_children(v):
            side = RIGHT if pos[tree.column(c)] > pos[subtree.column] else LEFT
            out.append(InterEdgeStub(v, side, tree.height(v)))
    out.sort(key=lambda s: s.height)
    return out


def embed_subtree(
    tree: ColumnTree, subtree: ColumnSubtree, stubs: Sequence[InterEdgeStub]
) -> tuple[dict[int, tuple[int, ...]], int]:
    """Minimum-crossing intra orders for one column subtree.

    Returns (child orders for every vertex with intra children, number
    of stub/intra crossings inside the subtree). Counter updates use the
    strictly-between width (a vertical whose lower endpoint sits exactly
    at the stub height is touched, not crossed), so the returned count
    matches the realized drawing.
    """
    members = set(subtree.vertices)
    for s in stubs:
        if s.source not in members:
            raise ValueError(f"stub source {s.source} is not in subtree {subtree.root}")

    # incoming-edge spans per branch: branch c covers (h(v'), h(parent v'))
    # for every v' in it, including c's own attaching edge
    spans: dict[int, list[tuple[Fraction, Fraction]]] = {}

    def branch_spans(c: int) -> list[tuple[Fraction, Fraction]]:
        if c not in spans:
            got = [(tree.height(c), tree.height(tree.parent(c)))]
            for k in tree.intra_children(c):
                got.extend(branch_spans(k))
            spans[c] = got
        return spans[c]

    def strict_width(c: int, eta: Fraction) -> int:
        return sum(1 for lo, hi in branch_spans(c) if lo < eta < hi)

    by_source: dict[int, list[InterEdgeStub]] = {}
    for s in stubs:
        by_source.setdefault(s.source, []).append(s)

    counters: dict[int, ChildOrderCounters] = {}
    orders: dict[int, tuple[int, ...]] = {}
    k_subtree = 0
    for v in sorted(members, key=lambda v: (tree.height(v), v)):
        kids = tree.intra_children(v)
        if kids:
            if v in counters:
                orders[v], cost = counters[v].fix()
                k_subtree += cost
            else:
                orders[v] = kids
        for s in by_source.get(v, ()):  # charge the ancestors of each stub
            prev, up = v, tree.parent(v)
            while up in members:
                ups = tree.intra_children(up)
                if len(ups) > 1:
                    if up not in counters:
                        counters[up] = ChildOrderCounters.fresh(ups)
                    widths = [
                        0 if c == prev else strict_width(c, s.height) for c in ups
                    ]
                    counters[up].charge(ups.index(prev), s.direction, widths)
                prev, up = up, tree.parent(up)
    return orders, k_subtree


def solve_v1(
    tree: ColumnTree, column_order: Optional[Sequence[int]] = None
) -> tuple[Embedding, CrossingReport]:
    """Minimum-crossing V1 embedding.

    Each column subtree is embedded independently (stubs are the only
    coupling between intra orders and anything else), then each column's
    block order is minimized exactly among V1-valid orders. Raises
    InfeasibleVariantError when some column admits no valid order.
    """
    ctx = build_column_context(tree, column_order)
    intra_orders: dict[int, tuple[int, ...]] = {}
    for sub in column_subtrees(tree):
        orders, _ = embed_subtree(tree, sub, subtree_stubs(tree, sub, ctx.column_order))
        intra_orders.update(orders)
    full = merge_child_order(tree, intra_orders)
    tokens: dict[int, tuple[int, ...]] = {}
    for col in ctx.column_order:
        got = best_arrangement(ctx, col, full, Variant.V1)
        if got is None:
            raise InfeasibleVariantError(
                f"column {col} admits no valid v1 arrangement"
            )
        tokens[col] = got[1]
    emb = Embedding(full, tokens, ctx.column_order)
    return emb, count_crossings(tree, emb, Variant.V1)
