"""Subtree arrangement as weighted feedback arc set, and the V2 solver.

Once all intra orders are fixed, the only remaining choice under V2 is
the left-to-right order of each column's subtree blocks, and the cost of
an order is a sum of pairwise terms: placing T_i left of T_j costs
k_ij, the crossings between the pair's stubs/entries and the other
one's edges. Per column, paying min(k_ij, k_ji) for every pair is
unavoidable (lower bound L), so minimizing the order is an instance of
weighted minimum feedback arc set on a digraph with an edge towards the
cheaper side and the cost difference as its weight. The weighted
problem reduces further to unweighted FAS by splitting an edge of
weight w into w parallel length-two paths.

The exact IFAS solver is a per-component subset DP over vertex orders;
the heuristic one is a weighted two-ended greedy (sources to the front,
sinks to the back, best out-minus-in score in between) that removes
nothing on acyclic inputs.
"""

from __future__ import annotations

import heapq
import itertools
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .crossings import (
    CrossingReport,
    InfeasibleVariantError,
    build_column_context,
    count_crossings,
    merge_child_order,
)
from .embedder import LEFT, RIGHT, embed_subtree, subtree_stubs
from .model import ColumnTree, Embedding, Variant, column_subtrees


class ComponentTooLargeError(RuntimeError):
    """An IFAS component exceeds the exact-DP guard; heuristic mode works."""


class TooManyColumnsError(RuntimeError):
    pass


MAX_EXACT_COMPONENT = 22
MAX_VARIABLE_COLUMNS = 8


class SolveMode(Enum):
    EXACT = "exact"
    HEURISTIC = "heuristic"


@dataclass(frozen=True)
class PairCrossingTable:
    """k[i, j]: intra-column crossings involving subtrees i and j when
    i is placed left of j (stubs and entries against the other's
    geometry; everything else is independent of their relative order)."""

    column: int
    roots: tuple[int, ...]
    k: Mapping[tuple[int, int], int]

    @property
    def r(self) -> int:
        return len(self.roots)


@dataclass(frozen=True)
class WeightedDigraph:
    vertices: tuple[int, ...]
    column_of: Mapping[int, int]
    edges: Mapping[tuple[int, int], int]  # (u, v) -> weight >= 1

    @property
    def w_max(self) -> int:
        return max(self.edges.values(), default=0)


@dataclass(frozen=True)
class Digraph:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ReductionOffset:
    t: int
    lower_bounds: Mapping[int, int]  # column -> L


# ---------------------------------------------------------------------------
# pairwise tables (sweep over stub and entry events)
# ---------------------------------------------------------------------------


def _crossable_spans(tree: ColumnTree, sub) -> tuple[list[Fraction], list[Fraction]]:
    """Sorted (lows, highs) of the subtree's vertical pieces, entry included."""
    los: list[Fraction] = []
    his: list[Fraction] = []
    for v in sub.vertices:
        p = tree.parent(v)
        if p is None:
            continue
        los.append(tree.height(v))
        his.append(tree.height(p))
    return sorted(los), sorted(his)


def _spanning(lohis: tuple[list[Fraction], list[Fraction]], eta: Fraction) -> int:
    los, his = lohis
    return bisect_left(los, eta) - bisect_right(his, eta)


def pairwise_crossing_counts(
    tree: ColumnTree,
    column: int,
    child_orders: Optional[Mapping[int, Sequence[int]]] = None,
    column_order: Optional[Sequence[int]] = None,
) -> PairCrossingTable:
    """The k_ij table of one column.

    Widths count edges cut at a height, so the table is independent of
    the child orders; the parameter is accepted for pipeline symmetry.
    An event is an inter-edge endpoint in the column: a stub of T_i at
    height y crosses, in every subtree on its exit side, the verticals
    strictly spanning y, and the entry of T_j does the same towards its
    source side. The entry vertical of a subtree is crossable geometry
    and is included in its spans.
    """
    del child_orders
    order = tuple(column_order or range(1, tree.column_count + 1))
    subs = [s for s in column_subtrees(tree) if s.column == column]
    spans = {s.root: _crossable_spans(tree, s) for s in subs}
    stub_list = {s.root: subtree_stubs(tree, s, order) for s in subs}
    entries: dict[int, Optional[tuple[int, Fraction]]] = {}
    pos = {c: i for i, c in enumerate(order)}
    for s in subs:
        p = tree.parent(s.root)
        if p is None:
            entries[s.root] = None
        else:
            side = RIGHT if pos[tree.column(p)] > pos[column] else LEFT
            entries[s.root] = (side, tree.height(p))

    k: dict[tuple[int, int], int] = {}
    for a, b in itertools.permutations([s.root for s in subs], 2):
        total = 0  # a left of b
        for st in stub_list[a]:
            if st.direction == RIGHT:
                total += _spanning(spans[b], st.height)
        for st in stub_list[b]:
            if st.direction == LEFT:
                total += _spanning(spans[a], st.height)
        ent = entries[b]
        if ent is not None and ent[0] == LEFT:
            total += _spanning(spans[a], ent[1])
        ent = entries[a]
        if ent is not None and ent[0] == RIGHT:
            total += _spanning(spans[b], ent[1])
        k[(a, b)] = total
    return PairCrossingTable(column, tuple(s.root for s in subs), k)


def build_ifas(
    tree: ColumnTree,
    child_orders: Optional[Mapping[int, Sequence[int]]] = None,
    column_order: Optional[Sequence[int]] = None,
) -> tuple[WeightedDigraph, ReductionOffset]:
    """One weighted digraph over all columns' subtrees, plus the offset.

    Per pair, min(k_ij, k_ji) is paid by every arrangement (summed into
    the lower bounds L and their total t); the digraph records only the
    differences: an edge towards the cheaper side, weighted by what
    disobeying it costs extra. Subtrees of different columns are never
    adjacent, so each column contributes its own components.
    """
    order = tuple(column_order or range(1, tree.column_count + 1))
    vertices: list[int] = []
    column_of: dict[int, int] = {}
    edges: dict[tuple[int, int], int] = {}
    lower: dict[int, int] = {}
    for col in order:
        table = pairwise_crossing_counts(tree, col, child_orders, order)
        vertices.extend(table.roots)
        column_of.update({r: col for r in table.roots})
        bound = 0
        for a, b in itertools.combinations(table.roots, 2):
            kab, kba = table.k[(a, b)], table.k[(b, a)]
            bound += min(kab, kba)
            if kab < kba:
                edges[(a, b)] = kba - kab
            elif kba < kab:
                edges[(b, a)] = kab - kba
        lower[col] = bound
    off = ReductionOffset(sum(lower.values()), lower)
    return WeightedDigraph(tuple(sorted(vertices)), column_of, edges), off


# ---------------------------------------------------------------------------
# weighted -> unweighted feedback arc set
# ---------------------------------------------------------------------------


def ifas_to_fas(g: WeightedDigraph) -> tuple[Digraph, dict[int, tuple[int, int]]]:
    """Split each weight-w edge into w length-two paths via fresh midpoints.

    Returns the unweighted digraph and a provenance map from each
    midpoint (which identifies its path) to the originating edge.
    """
    fresh = max(g.vertices, default=0) + 1
    vertices = list(g.vertices)
    edges: list[tuple[int, int]] = []
    provenance: dict[int, tuple[int, int]] = {}
    for (u, v), w in sorted(g.edges.items()):
        for _ in range(w):
            m = fresh
            fresh += 1
            vertices.append(m)
            edges.append((u, m))
            edges.append((m, v))
            provenance[m] = (u, v)
    return Digraph(tuple(vertices), tuple(edges)), provenance


def _digraph_is_acyclic(vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> bool:
    out: dict[int, list[int]] = {v: [] for v in vertices}
    indeg: dict[int, int] = {v: 0 for v in vertices}
    for u, v in edges:
        out[u].append(v)
        indeg[v] += 1
    queue = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == len(out)


def fas_solution_back(
    g_prime: Digraph,
    solution: Iterable[tuple[int, int]],
    provenance: Mapping[int, tuple[int, int]],
) -> set[tuple[int, int]]:
    """Map a FAS solution on the split graph back to weighted edges.

    An original edge joins the solution when every one of its paths is
    hit; a fully untouched path keeps its edge effectively present, and
    acyclicity then carries over from the split graph.
    """
    sol = set(solution)
    if not _digraph_is_acyclic(
        g_prime.vertices, [e for e in g_prime.edges if e not in sol]
    ):
        raise ValueError("not a feedback arc set of the split graph")
    path_count: dict[tuple[int, int], int] = {}
    for orig in provenance.values():
        path_count[orig] = path_count.get(orig, 0) + 1
    hit: dict[tuple[int, int], set[int]] = {}
    for u, v in sol:
        m = u if u in provenance else v
        hit.setdefault(provenance[m], set()).add(m)
    return {orig for orig, ms in hit.items() if len(ms) == path_count[orig]}


# ---------------------------------------------------------------------------
# IFAS solvers
# ---------------------------------------------------------------------------


def _components(g: WeightedDigraph) -> list[list[int]]:
    adj: dict[int, set[int]] = {v: set() for v in g.vertices}
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    seen: set[int] = set()
    comps: list[list[int]] = []
    for v in sorted(g.vertices):
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _backward_weight(g: WeightedDigraph, order: Sequence[int]) -> int:
    rank = {v: i for i, v in enumerate(order)}
    return sum(w for (u, v), w in g.edges.items() if rank[u] > rank[v])


def solve_ifas_exact(g: WeightedDigraph) -> tuple[tuple[int, ...], int]:
    """Minimum-backward-weight vertex order by subset DP per component.

    h(S) is the cheapest completion after placing the set S as a
    prefix: appending v next pays the weight of v's edges back into S.
    Components are independent and concatenated by smallest vertex; ties
    resolve to the lexicographically smallest order.
    """
    order: list[int] = []
    for comp in _components(g):
        n = len(comp)
        if n > MAX_EXACT_COMPONENT:
            raise ComponentTooLargeError(
                f"component with {n} subtrees exceeds the exact limit of "
                f"{MAX_EXACT_COMPONENT}; use heuristic mode"
            )
        idx = {v: i for i, v in enumerate(comp)}
        into: list[list[tuple[int, int]]] = [[] for _ in comp]  # v -> (mask bit of u, w)
        for (u, v), w in g.edges.items():
            if u in idx and v in idx:
                into[idx[u]].append((1 << idx[v], w))
        full = (1 << n) - 1

        def append_cost(mask: int, j: int) -> int:
            return sum(w for bit, w in into[j] if mask & bit)

        best = [0] * (1 << n)
        for mask in range(full - 1, -1, -1):
            acc = None
            for j in range(n):
                if mask & (1 << j):
                    continue
                c = append_cost(mask, j) + best[mask | (1 << j)]
                if acc is None or c < acc:
                    acc = c
            best[mask] = acc if acc is not None else 0
        mask = 0
        while mask != full:
            for j in range(n):  # ascending vertex: lexicographically smallest
                if mask & (1 << j):
                    continue
                if append_cost(mask, j) + best[mask | (1 << j)] == best[mask]:
                    order.append(comp[j])
                    mask |= 1 << j
                    break
    s = _backward_weight(g, order)
    return tuple(order), s


def solve_ifas_greedy(g: WeightedDigraph) -> tuple[tuple[int, ...], int]:
    """Weighted two-ended greedy ordering (no optimality claim).

    Sinks go to the back and sources to the front as long as they
    exist, otherwise the vertex with the best out-weight minus
    in-weight score goes to the front; acyclic graphs therefore lose
    nothing. Ties pick the smallest vertex id.
    """
    remaining = set(g.vertices)
    out_w = {v: 0 for v in g.vertices}
    in_w = {v: 0 for v in g.vertices}
    for (u, v), w in g.edges.items():
        out_w[u] += w
        in_w[v] += w

    def drop(v: int) -> None:
        remaining.discard(v)
        for (a, b), w in g.edges.items():
            if a == v and b in remaining:
                in_w[b] -= w
            elif b == v and a in remaining:
                out_w[a] -= w

    front: list[int] = []
    back: list[int] = []
    while remaining:
        sinks = sorted(v for v in remaining if out_w[v] == 0)
        if sinks:
            drop(sinks[0])
            back.append(sinks[0])
            continue
        sources = sorted(v for v in remaining if in_w[v] == 0)
        if sources:
            drop(sources[0])
            front.append(sources[0])
            continue
        v = min(remaining, key=lambda v: (in_w[v] - out_w[v], v))
        drop(v)
        front.append(v)
    order = tuple(front + back[::-1])
    return order, _backward_weight(g, order)


def topological_order(
    vertices: Iterable[int],
    edges: Iterable[tuple[int, int]],
    priority: Optional[Mapping[int, int]] = None,
) -> tuple[int, ...]:
    """Deterministic topological order, smallest priority (default: id) first."""
    vs = list(vertices)
    rank = dict(priority) if priority is not None else {v: v for v in vs}
    out: dict[int, list[int]] = {v: [] for v in vs}
    indeg = {v: 0 for v in vs}
    for u, v in edges:
        out[u].append(v)
        indeg[v] += 1
    heap = [(rank[v], v) for v in vs if indeg[v] == 0]
    heapq.heapify(heap)
    result: list[int] = []
    while heap:
        _, v = heapq.heappop(heap)
        result.append(v)
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, (rank[w], w))
    if len(result) != len(vs):
        raise ValueError("graph has a cycle")
    return tuple(result)


# ---------------------------------------------------------------------------
# V2 solver and the variable-column-order wrapper
# ---------------------------------------------------------------------------


def solve_v2(
    tree: ColumnTree,
    mode: SolveMode = SolveMode.EXACT,
    column_order: Optional[Sequence[int]] = None,
) -> tuple[Embedding, CrossingReport]:
    """Minimum-crossing (Exact) or greedily arranged (Heuristic) V2 embedding.

    Child orders come from the subtree embedder, the block order per
    column from the IFAS order: backward edges are removed and the
    remaining digraph is ordered topologically with the solver order as
    priority. The identity k_column == s + t is re-checked on the
    realized drawing.
    """
    order = tuple(column_order or range(1, tree.column_count + 1))
    ctx = build_column_context(tree, order)
    intra: dict[int, tuple[int, ...]] = {}
    for sub in column_subtrees(tree):
        got, _ = embed_subtree(tree, sub, subtree_stubs(tree, sub, order))
        intra.update(got)
    full = merge_child_order(tree, intra)

    g, off = build_ifas(tree, full, order)
    if mode is SolveMode.EXACT:
        pi, s = solve_ifas_exact(g)
    else:
        pi, s = solve_ifas_greedy(g)
    rank = {v: i for i, v in enumerate(pi)}
    kept = [(u, v) for (u, v) in g.edges if rank[u] < rank[v]]
    topo = topological_order(g.vertices, kept, rank)

    tokens: dict[int, tuple[int, ...]] = {}
    for col in order:
        roots = [r for r in topo if g.column_of[r] == col]
        tokens[col] = tuple(r for r in roots for _ in range(ctx.leaf_count[r]))
    emb = Embedding(full, tokens, order)
    report = count_crossings(tree, emb, Variant.V2)
    if report.k_column != s + off.t:
        raise RuntimeError(
            f"arrangement identity violated: k_column {report.k_column} != "
            f"{s} + {off.t}"
        )
    return emb, report


def solve_variable_column_order(
    tree: ColumnTree,
    variant: Variant,
    solver: Optional[Callable[..., tuple[Embedding, CrossingReport]]] = None,
) -> tuple[Embedding, CrossingReport]:
    """Best solver result over all column permutations (lex-first ties).

    ``solver`` is called as solver(tree, column_order=perm); by default
    it is the variant's solver (V1 embedder, exact V2, greedy V3).
    Orders a variant cannot realize are skipped; if none works the
    infeasibility is raised.
    """
    ell = tree.column_count
    if ell > MAX_VARIABLE_COLUMNS:
        raise TooManyColumnsError(
            f"{ell} columns means {ell}! inner solves; the limit is "
            f"{MAX_VARIABLE_COLUMNS}"
        )
    if solver is None:
        if variant is Variant.V1:
            from .embedder import solve_v1 as solver
        elif variant is Variant.V2:
            solver = solve_v2
        else:
            from .v3heur import solve_v3_greedy as solver
    best: Optional[tuple[int, Embedding, CrossingReport]] = None
    for perm in itertools.permutations(range(1, ell + 1)):
        try:
            emb, report = solver(tree, column_order=perm)
        except InfeasibleVariantError:
            continue
        if best is None or report.total < best[0]:
            best = (report.total, emb, report)
    if best is None:
        raise InfeasibleVariantError(
            f"no column order admits a valid {variant.value} embedding"
        )
    return best[1], best[2]
