"""Shared fixtures: seeded corpora, random embeddings, and an
independent O(E^2) geometric crossing counter used as the ground-truth
oracle for the production counting code."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from columntree.gadgets import RandomParams, random_instance
from columntree.model import (
    ColumnTree,
    Embedding,
    VertexRecord,
    column_subtrees,
    subtree_leaf_count,
    subtree_lookup,
)
from columntree.render import assign_coordinates


def tree_from(rows, columns: int) -> ColumnTree:
    """rows: (id, parent, height, column) tuples."""
    return ColumnTree(
        [VertexRecord(i, p, Fraction(h), c) for i, p, h, c in rows], columns
    )


def random_embedding(tree: ColumnTree, rng: random.Random) -> Embedding:
    """Uniformly shuffled child orders and slot tokens; structure-valid
    by construction, geometric validity not guaranteed."""
    child_order = {}
    for v in tree.by_id:
        kids = list(tree.children[v])
        if kids:
            rng.shuffle(kids)
            child_order[v] = tuple(kids)
    by_col: dict[int, list] = {}
    for s in column_subtrees(tree):
        by_col.setdefault(s.column, []).append(s)
    arrangements = {}
    for col in range(1, tree.column_count + 1):
        toks: list[int] = []
        for s in by_col.get(col, []):
            toks.extend([s.root] * subtree_leaf_count(tree, s))
        rng.shuffle(toks)
        arrangements[col] = tuple(toks)
    return Embedding(child_order, arrangements, tuple(range(1, tree.column_count + 1)))


def block_embedding(tree: ColumnTree, rng: random.Random) -> Embedding:
    """Identity child orders, contiguous blocks in random left-to-right
    order: always V2-valid."""
    child_order = {v: tree.children[v] for v in tree.by_id if tree.children[v]}
    by_col: dict[int, list] = {}
    for s in column_subtrees(tree):
        by_col.setdefault(s.column, []).append(s)
    arrangements = {}
    for col in range(1, tree.column_count + 1):
        subs = list(by_col.get(col, []))
        rng.shuffle(subs)
        toks: list[int] = []
        for s in subs:
            toks.extend([s.root] * subtree_leaf_count(tree, s))
        arrangements[col] = tuple(toks)
    return Embedding(child_order, arrangements, tuple(range(1, tree.column_count + 1)))


def identity_blocks(tree: ColumnTree) -> dict[int, tuple[int, ...]]:
    """Deterministic contiguous-block arrangements, subtrees in root order."""
    by_col: dict[int, list] = {}
    for s in column_subtrees(tree):
        by_col.setdefault(s.column, []).append(s)
    arrangements = {}
    for col in range(1, tree.column_count + 1):
        toks: list[int] = []
        for s in by_col.get(col, []):
            toks.extend([s.root] * subtree_leaf_count(tree, s))
        arrangements[col] = tuple(toks)
    return arrangements


def naive_crossing_counts(tree: ColumnTree, emb: Embedding) -> dict[str, int]:
    """Pairwise proper-intersection count over the realized layout.

    Walks every (horizontal piece, vertical piece) pair with exact
    Fraction comparisons: a crossing is a strict interior intersection
    between segments of edges sharing no endpoint. Classification
    follows the definitions: the crossing lives in the column of the
    vertical's child vertex; strictly between the horizontal edge's
    endpoint columns it is inter-column; otherwise it is intra-subtree
    when the horizontal's attachment subtree in that column matches the
    vertical's subtree, else intra-column.
    """
    layout = assign_coordinates(tree, emb)
    x, y = layout.x, layout.y
    owner = subtree_lookup(tree)
    pos = layout.column_positions

    hs = []
    vs = []
    for v_id in tree.by_id:
        p = tree.parent(v_id)
        if p is None:
            continue
        x1, x2 = sorted((x[p], x[v_id]))
        if x1 != x2:
            hs.append((y[p], x1, x2, p, v_id))
        vs.append((x[v_id], y[v_id], y[p], p, v_id))

    k_sub = k_col = k_inter = intra_intra = 0
    for hy, x1, x2, hu, hv in hs:
        h_intra = tree.column(hu) == tree.column(hv)
        for vx, y1, y2, vu, vv in vs:
            if not (x1 < vx < x2 and y1 < hy < y2):
                continue
            if hu in (vu, vv) or hv in (vu, vv):
                continue
            ccol_pos = pos[tree.column(vv)]
            a, b = pos[tree.column(hu)], pos[tree.column(hv)]
            if min(a, b) < ccol_pos < max(a, b):
                k_inter += 1
            else:
                h_att = owner[hv] if pos[tree.column(hv)] == ccol_pos else owner[hu]
                if h_att == owner[vv]:
                    k_sub += 1
                else:
                    k_col += 1
            if h_intra and tree.column(vu) == tree.column(vv):
                intra_intra += 1
    return {
        "k_subtree": k_sub,
        "k_column": k_col,
        "k_inter": k_inter,
        "total": k_sub + k_col + k_inter,
        "intra_intra": intra_intra,
    }


def make_oracle_corpus(count: int, base_seed: int) -> list[ColumnTree]:
    """Seeded instances with n <= 10, 2 <= columns <= 3, degree <= 3."""
    out = []
    for i in range(count):
        out.append(
            random_instance(
                RandomParams(
                    n=4 + i % 7,
                    columns=2 + i % 2,
                    max_degree=2 + i % 2,
                    seed=base_seed + i,
                )
            )
        )
    return out


@pytest.fixture(scope="session")
def oracle_corpus() -> list[ColumnTree]:
    return make_oracle_corpus(200, base_seed=1000)


def make_stub_subtree_instance(rng: random.Random):
    """A 3-column tree whose middle column holds one random binary
    column subtree with at most 4 inter-edge stubs; every other column
    vertex is a singleton target. Returns (tree, subtree_root).

    The global k_subtree of such a tree is exactly the middle subtree's
    intra-subtree crossing count, which makes exhaustive child-order
    enumeration an oracle for embed_subtree.
    """
    size = rng.randint(2, 9)
    heights = list(range(1, 40))
    rng.shuffle(heights)
    heights = sorted(heights[:size], reverse=True)

    rows = [(0, None, heights[0] + 10, 1)]  # surjectivity anchor, column 1
    parent_of = {1: 0}
    rows.append((1, 0, heights[0], 2))
    attach = [1]
    for i in range(1, size):
        vid = i + 1
        options = [
            a for a in attach
            if sum(1 for w, p in parent_of.items() if p == a and rows[w][3] == 2) < 2
        ]
        par = rng.choice(options)
        parent_of[vid] = par
        rows.append((vid, par, heights[i], 2))
        attach.append(vid)

    stub_count = rng.randint(0, 4)
    used_sources = set()
    next_id = size + 1
    stubs_made = 0
    candidates = list(range(1, size + 1))
    rng.shuffle(candidates)
    three_cols = False
    for src in candidates:
        if stubs_made == stub_count:
            break
        if src in used_sources:
            continue
        used_sources.add(src)
        col = rng.choice((1, 3))
        three_cols = three_cols or col == 3
        src_h = rows[src][2]
        rows.append((next_id, src, Fraction(2 * src_h - 1, 2) - stubs_made, col))
        next_id += 1
        stubs_made += 1
    if not three_cols:
        rows.append((next_id, 0, Fraction(1, 3), 3))
    return tree_from(rows, 3), 1
