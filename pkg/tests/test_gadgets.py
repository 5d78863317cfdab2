"""Hardness gadgets, the FAS oracle, and the instance generators."""

from __future__ import annotations

import itertools
import random

import pytest

from columntree.arrangement import Digraph
from columntree.crossings import brute_force_optimum
from columntree.gadgets import (
    GadgetFlavor,
    GadgetParams,
    RandomParams,
    adversarial_v3_instance,
    crossings_to_fas_size,
    fas_to_columntree,
    is_biconnected,
    min_fas_size,
    parse_digraph,
    random_instance,
    serialize_digraph,
)
from columntree.model import Variant, validate
from columntree.v3heur import solve_v3_greedy


def dg(*edges, vertices=()):
    verts = set(vertices)
    for u, v in edges:
        verts.update((u, v))
    return Digraph(tuple(sorted(verts)), tuple(edges))


def exhaustive_fas(g: Digraph) -> int:
    from columntree.arrangement import _digraph_is_acyclic

    edges = list(g.edges)
    for size in range(len(edges) + 1):
        for drop in itertools.combinations(range(len(edges)), size):
            kept = [e for i, e in enumerate(edges) if i not in drop]
            if _digraph_is_acyclic(g.vertices, kept):
                return size
    return len(edges)


TWO_CYCLE = dg((1, 2), (2, 1))
TRIANGLE = dg((1, 2), (2, 3), (3, 1))


class TestDigraphText:
    def test_round_trip(self):
        text = serialize_digraph(TRIANGLE)
        assert parse_digraph(text) == TRIANGLE

    def test_comments_and_blanks(self):
        got = parse_digraph("# a triangle\n1 2\n\n2 3\n  # done\n3 1\n")
        assert got == TRIANGLE

    def test_malformed_line(self):
        with pytest.raises(ValueError, match="expected 'u v'"):
            parse_digraph("1 2 3\n")

    def test_vertices_are_sorted_union(self):
        g = parse_digraph("5 1\n1 5\n")
        assert g.vertices == (1, 5)


class TestBiconnected:
    def test_two_cycle(self):
        assert is_biconnected(TWO_CYCLE)

    def test_triangle(self):
        assert is_biconnected(TRIANGLE)

    def test_path_is_not(self):
        assert not is_biconnected(dg((1, 2), (2, 3)))

    def test_cut_vertex(self):
        g = dg((1, 2), (2, 1), (2, 3), (3, 2))
        assert not is_biconnected(g)

    def test_disconnected(self):
        g = dg((1, 2), (2, 1), (3, 4), (4, 3))
        assert not is_biconnected(g)


class TestMinFasSize:
    def test_frozen_values(self):
        assert min_fas_size(TWO_CYCLE) == 1
        assert min_fas_size(TRIANGLE) == 1
        assert min_fas_size(dg((1, 2), (2, 3))) == 0
        # complete digraph on 3 vertices: 3 disjoint-ish 2-cycles
        k3 = dg(*itertools.permutations((1, 2, 3), 2))
        assert min_fas_size(k3) == 3

    def test_chain_suppression_counterexample(self):
        # v has one in- and one out-edge; naive one-sided contraction
        # would force 2 removals, the true optimum is the single (u, v)
        g = dg((1, 2), (2, 3), (2, 4), (3, 1), (4, 1))
        assert min_fas_size(g) == 1

    def test_matches_exhaustive_on_random_digraphs(self):
        rng = random.Random(61)
        for _ in range(40):
            n = rng.randint(2, 5)
            pool = list(itertools.permutations(range(1, n + 1), 2))
            rng.shuffle(pool)
            edges = pool[: rng.randint(1, min(10, len(pool)))]
            g = dg(*edges, vertices=range(1, n + 1))
            assert min_fas_size(g) == exhaustive_fas(g)

    def test_large_split_graph_stays_fast(self):
        # weight-4 edges split into parallel midpoint paths: the chain
        # rule must kernelize all midpoints away
        rng = random.Random(62)
        verts = list(range(1, 7))
        edges = []
        nxt = 10
        for u, v in itertools.permutations(verts, 2):
            if u < v and rng.random() < 0.7:
                for _ in range(4):
                    edges += [(u, nxt), (nxt, v)]
                    nxt += 1
                edges += [(v, u)]
        g = dg(*edges, vertices=verts)
        assert min_fas_size(g) >= 0  # completes without blowing up


class TestGadgets:
    def test_frozen_two_cycle_sizes(self):
        t1 = fas_to_columntree(TWO_CYCLE, GadgetFlavor.V1_UNBOUNDED)
        t2 = fas_to_columntree(TWO_CYCLE, GadgetFlavor.V2V3_BINARY)
        assert t1.n == 30
        assert t2.n == 43

    def test_gadgets_validate(self):
        for g in (TWO_CYCLE, TRIANGLE):
            for flavor in GadgetFlavor:
                t = fas_to_columntree(g, flavor)
                assert validate(t).ok
                assert t.column_count == 2

    def test_binary_flavor_is_binary(self):
        t = fas_to_columntree(TRIANGLE, GadgetFlavor.V2V3_BINARY)
        assert t.max_degree <= 2

    def test_unbounded_flavor_has_a_big_star(self):
        g = TRIANGLE
        t = fas_to_columntree(g, GadgetFlavor.V1_UNBOUNDED)
        assert t.max_degree >= GadgetParams(g, GadgetFlavor.V1_UNBOUNDED).star_size

    def test_input_guards(self):
        with pytest.raises(ValueError, match="at least two"):
            fas_to_columntree(Digraph((1,), ()), GadgetFlavor.V1_UNBOUNDED)
        with pytest.raises(ValueError, match="self-loop"):
            fas_to_columntree(
                dg((1, 1), (1, 2), (2, 1)), GadgetFlavor.V1_UNBOUNDED
            )
        with pytest.raises(ValueError, match="parallel"):
            fas_to_columntree(
                Digraph((1, 2), ((1, 2), (1, 2), (2, 1))),
                GadgetFlavor.V1_UNBOUNDED,
            )
        with pytest.raises(ValueError, match="biconnected"):
            fas_to_columntree(dg((1, 2), (2, 3)), GadgetFlavor.V1_UNBOUNDED)

    def test_two_cycle_oracle_totals(self):
        t1 = fas_to_columntree(TWO_CYCLE, GadgetFlavor.V1_UNBOUNDED)
        assert brute_force_optimum(t1, Variant.V1)[1].total == 9
        t2 = fas_to_columntree(TWO_CYCLE, GadgetFlavor.V2V3_BINARY)
        assert brute_force_optimum(t2, Variant.V2)[1].total == 9
        assert brute_force_optimum(t2, Variant.V3)[1].total == 9

    def test_round_trip_recovers_fas(self):
        for g in (TWO_CYCLE, TRIANGLE):
            want = min_fas_size(g)
            n = len(g.vertices)
            t1 = fas_to_columntree(g, GadgetFlavor.V1_UNBOUNDED)
            k = brute_force_optimum(t1, Variant.V1)[1].total
            assert crossings_to_fas_size(k, n) == want


class TestCrossingsToFasSize:
    def test_floor_division(self):
        assert crossings_to_fas_size(9, 2) == 1
        assert crossings_to_fas_size(7, 2) == 0
        assert crossings_to_fas_size(54, 3) == 2

    def test_guards(self):
        with pytest.raises(ValueError, match="n >= 2"):
            crossings_to_fas_size(9, 1)
        with pytest.raises(ValueError, match="nonnegative"):
            crossings_to_fas_size(-1, 2)


class TestRandomInstance:
    def test_valid_and_deterministic(self):
        for seed in range(20):
            p = RandomParams(n=9, columns=3, max_degree=3, seed=seed)
            t = random_instance(p)
            assert validate(t).ok
            same = random_instance(p)
            assert [(r.id, r.parent, r.height, r.column) for r in t.vertices] == [
                (r.id, r.parent, r.height, r.column) for r in same.vertices
            ]

    def test_respects_bounds(self):
        p = RandomParams(n=14, columns=4, max_degree=2, seed=7)
        t = random_instance(p)
        assert t.n == 14 and t.column_count == 4 and t.max_degree <= 2

    def test_infeasible_params(self):
        with pytest.raises(ValueError, match="at least two"):
            random_instance(RandomParams(1, 2, 2, seed=0))
        with pytest.raises(ValueError, match="between 2"):
            random_instance(RandomParams(5, 1, 2, seed=0))
        with pytest.raises(ValueError, match="between 2"):
            random_instance(RandomParams(5, 6, 2, seed=0))
        with pytest.raises(ValueError, match="degree 0"):
            random_instance(RandomParams(5, 2, 0, seed=0))


class TestAdversarialFamily:
    def test_instances_validate(self):
        for x in (3, 5, 9):
            t = adversarial_v3_instance(x)
            assert validate(t).ok
            assert t.n == 2 * x + 13

    def test_x_too_small(self):
        with pytest.raises(ValueError, match="x >= 3"):
            adversarial_v3_instance(2)

    def test_frozen_gap(self):
        for x in (5, 6):
            t = adversarial_v3_instance(x)
            opt = brute_force_optimum(t, Variant.V3)[1].total
            greedy = solve_v3_greedy(t)[1].total
            assert opt == 4
            assert greedy == x + 2
