"""Insertion-position classes and the greedy V3 solver."""

from __future__ import annotations

import random

from columntree.arrangement import solve_v2
from columntree.crossings import (
    brute_force_optimum,
    build_column_context,
    check_validity,
    column_cost,
)
from columntree.model import Variant
from columntree.v3heur import (
    DISJOINT,
    LEFT_OF,
    RIGHT_OF,
    SPLIT,
    candidate_positions,
    solve_v3_greedy,
)
from conftest import make_oracle_corpus, tree_from


def disjoint_instance():
    # two singleton subtrees in column 2 with disjoint vertical extents
    return tree_from(
        [(0, None, 10, 1), (1, 0, 8, 2), (2, 0, 4, 1), (3, 2, 2, 2)], 2
    )


def overlap_instance():
    # subtree 1 = {1, 3, 4} has two slots; subtree 5 = {5, 6} spans
    # heights 3..7, inside 1's extent
    return tree_from(
        [
            (0, None, 20, 1),
            (1, 0, 10, 2),
            (3, 1, 6, 2),
            (4, 1, 2, 2),
            (2, 0, 9, 1),
            (5, 2, 7, 2),
            (6, 5, 3, 2),
        ],
        2,
    )


def base_orders(tree):
    return {v: tree.children[v] for v in tree.by_id if tree.children[v]}


class TestCandidatePositions:
    def test_empty_column_has_one_slot(self):
        t = disjoint_instance()
        ctx = build_column_context(t)
        got = candidate_positions(ctx, 2, (), base_orders(t), 1)
        assert len(got) == 1
        assert got[0].gap == 0 and got[0].valid and got[0].relations == ()

    def test_disjoint_extents_collapse(self):
        t = disjoint_instance()
        ctx = build_column_context(t)
        got = candidate_positions(ctx, 2, (1,), base_orders(t), 3)
        assert len(got) == 1
        assert got[0].relations == (DISJOINT,)

    def test_overlapping_two_slot_block_gives_three_classes(self):
        t = overlap_instance()
        ctx = build_column_context(t)
        got = candidate_positions(ctx, 2, (1, 1), base_orders(t), 5)
        rels = {c.relations for c in got}
        assert rels == {(LEFT_OF,), (SPLIT,), (RIGHT_OF,)}
        assert len(got) == 3

    def test_leftmost_gap_is_always_valid(self):
        rng = random.Random(51)
        for t in make_oracle_corpus(10, base_seed=9000):
            ctx = build_column_context(t)
            orders = base_orders(t)
            for col in range(1, t.column_count + 1):
                cur: tuple[int, ...] = ()
                roots = sorted(
                    (s.root for s in ctx.by_col[col]),
                    key=lambda r: (-t.height(r), r),
                )
                for r in roots:
                    cands = candidate_positions(ctx, col, cur, orders, r)
                    first = next(c for c in cands if c.gap == 0)
                    assert first.valid
                    pick = min(
                        (c for c in cands if c.valid),
                        key=lambda c: (c.delta, c.gap),
                    )
                    cur = (
                        cur[: pick.gap]
                        + (r,) * ctx.leaf_count[r]
                        + cur[pick.gap :]
                    )

    def test_delta_matches_recount(self):
        t = overlap_instance()
        ctx = build_column_context(t)
        orders = base_orders(t)
        before = column_cost(ctx, 2, (1, 1), orders, include_passover=False)
        for c in candidate_positions(ctx, 2, (1, 1), orders, 5):
            trial = (1, 1)[: c.gap] + (5,) + (1, 1)[c.gap :]
            after = column_cost(ctx, 2, trial, orders, include_passover=False)
            assert after.total == before.total + c.delta


class TestSolveV3Greedy:
    def test_single_subtree_per_column_matches_exact(self):
        blobs = [
            tree_from(
                [
                    (0, None, 30, 1),
                    (1, 0, 29, 1),
                    (2, 1, 20, 2),
                    (3, 2, 19, 2),
                    (4, 3, 10, 3),
                ],
                3,
            ),
            tree_from(
                [
                    (0, None, 12, 2),
                    (1, 0, 11, 2),
                    (2, 1, 8, 1),
                    (3, 2, 7, 1),
                    (4, 1, 5, 3),
                    (5, 4, 3, 3),
                ],
                3,
            ),
            tree_from(
                [(0, None, 9, 1), (1, 0, 6, 2), (2, 1, 4, 2), (3, 1, 3, 2)], 2
            ),
        ]
        for t in blobs:
            _, got = solve_v3_greedy(t)
            _, want = solve_v2(t)
            assert got.total == want.total

    def test_output_is_v3_valid(self):
        for t in make_oracle_corpus(20, base_seed=9100):
            emb, rep = solve_v3_greedy(t)
            ok, why = check_validity(t, emb, Variant.V3)
            assert ok, why
            assert rep.total >= brute_force_optimum(t, Variant.V3)[1].total

    def test_identity_refine_hook_changes_nothing(self):
        t = make_oracle_corpus(1, base_seed=9200)[0]
        plain = solve_v3_greedy(t)
        hooked = solve_v3_greedy(t, refine=lambda ctx, col, cur: cur)
        assert plain == hooked

    def test_deterministic(self):
        for t in make_oracle_corpus(5, base_seed=9300):
            assert solve_v3_greedy(t) == solve_v3_greedy(t)
