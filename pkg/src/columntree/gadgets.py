"""Instance generators: hardness gadgets, random and adversarial trees.

The hardness construction encodes a feedback arc set instance as a
two-column tree. Each digraph vertex becomes a tall vertex-gadget
subtree in the right column; each digraph edge owns a private
three-unit horizontal strip holding a stub on the tail's gadget and an
n-cubed-leaf bundle on the head's gadget. Placing the head's gadget
left of the tail's makes the stub sweep the whole bundle, so the
crossing count reports the number of order-violating edges in units of
n^3 while all incidental crossings stay strictly below n^3; dividing
and rounding down recovers the feedback arc set size exactly. The
unbounded flavor hangs every entry edge off one high vertex; the binary
flavor replaces that vertex with a path of sources and the leaf bundles
with caterpillars, keeping every degree at most two.

`min_fas_size` is an independent exhaustive feedback arc set solver
used to confront gadget optima (and the weighted reduction) with ground
truth on small digraphs.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .arrangement import Digraph
from .model import ColumnTree, VertexRecord


class GadgetFlavor(Enum):
    V1_UNBOUNDED = "v1-unbounded"
    V2V3_BINARY = "v2v3-binary"


@dataclass(frozen=True)
class GadgetParams:
    """Derived measurements of the reduction for one digraph."""

    digraph: Digraph
    flavor: GadgetFlavor

    @property
    def n(self) -> int:
        return len(self.digraph.vertices)

    @property
    def m(self) -> int:
        return len(self.digraph.edges)

    @property
    def total_height(self) -> int:
        return 3 * (self.m + 1)

    @property
    def star_size(self) -> int:
        return self.n**3

    def strip_top(self, t: int) -> int:
        """Top height b of the strip of the t-th edge (1-based); the
        strip spans [b - 2, b]."""
        return self.total_height - 3 * t


def parse_digraph(text: str) -> Digraph:
    """Edge-list text, one ``u v`` pair per line, vertices 0-indexed.

    Blank lines and lines starting with ``#`` are skipped.
    """
    edges: list[tuple[int, int]] = []
    verts: set[int] = set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"expected 'u v' per line, got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        edges.append((u, v))
        verts.update((u, v))
    return Digraph(tuple(sorted(verts)), tuple(edges))


def serialize_digraph(g: Digraph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges)


def is_biconnected(g: Digraph) -> bool:
    """Underlying undirected biconnectivity; a connected pair counts."""
    verts = list(g.vertices)
    if len(verts) < 2:
        return False
    adj: dict[int, set[int]] = {v: set() for v in verts}
    for u, v in g.edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(verts):
        return False
    if len(verts) == 2:
        return True

    # articulation vertices by DFS low-links, iterative to be safe
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    parent: dict[int, int | None] = {verts[0]: None}
    stack2 = [(verts[0], iter(adj[verts[0]]))]
    index[verts[0]] = low[verts[0]] = 0
    counter = 1
    root_children = 0
    while stack2:
        v, it = stack2[-1]
        advanced = False
        for w in it:
            if w not in index:
                parent[w] = v
                index[w] = low[w] = counter
                counter += 1
                if v == verts[0]:
                    root_children += 1
                stack2.append((w, iter(adj[w])))
                advanced = True
                break
            elif w != parent[v]:
                low[v] = min(low[v], index[w])
        if not advanced:
            stack2.pop()
            p = parent[v]
            if p is not None:
                low[p] = min(low[p], low[v])
                if p != verts[0] and low[v] >= index[p]:
                    return False
    return root_children <= 1


def _check_fas_input(g: Digraph) -> None:
    if len(g.vertices) < 2:
        raise ValueError("the reduction needs at least two digraph vertices")
    seen: set[tuple[int, int]] = set()
    for u, v in g.edges:
        if u == v:
            raise ValueError(f"self-loop {u}->{v} has no gadget")
        if (u, v) in seen:
            raise ValueError(f"parallel edge {u}->{v}; use a simple digraph")
        seen.add((u, v))
    if not is_biconnected(g):
        raise ValueError("digraph must be biconnected")


def fas_to_columntree(g: Digraph, flavor: GadgetFlavor) -> ColumnTree:
    """The two-column tree whose optimal crossings encode min FAS of g.

    Left column: the root subtree sourcing one entry per vertex gadget,
    plus one singleton stub target per digraph edge at its strip's
    floor. Right column: per digraph vertex a gadget whose root hangs
    just below the entry sources, followed by a chain with one vertex
    per incident edge (the tail side carries the stub source at b - 1,
    the head side carries the n^3-leaf bundle spanning [b - 2, b]) and
    a final leaf at height 0 so every gadget crosses every strip.
    """
    _check_fas_input(g)
    params = GadgetParams(g, flavor)
    n, m, a, cube = params.n, params.m, params.total_height, params.star_size

    recs: list[VertexRecord] = []
    next_id = 0

    def add(parent: int | None, height, column: int) -> int:
        nonlocal next_id
        recs.append(VertexRecord(next_id, parent, Fraction(height), column))
        next_id += 1
        return next_id - 1

    # left-column root structure and the per-vertex entry sources
    entry_source: dict[int, int] = {}
    if flavor is GadgetFlavor.V1_UNBOUNDED:
        root = add(None, a, 1)
        hub = add(root, a - 1, 1)
        for gv in g.vertices:
            entry_source[gv] = hub
    else:
        prev = None
        for k, gv in enumerate(g.vertices):
            prev = add(prev, Fraction(a - 1) - Fraction(k, n), 1)
            entry_source[gv] = prev
        add(prev, 0, 1)

    incident: dict[int, list[int]] = {gv: [] for gv in g.vertices}
    for t, (u, v) in enumerate(g.edges, start=1):
        incident[u].append(t)
        incident[v].append(t)

    stub_target: dict[int, int] = {}  # strip -> reserved left-column target id

    for i, gv in enumerate(g.vertices, start=1):
        top = add(entry_source[gv], Fraction(a - 1) - Fraction(i, n + 1), 2)
        prev = top
        for t in incident[gv]:
            b = params.strip_top(t)
            tail = g.edges[t - 1][0]
            if tail == gv:
                prev = add(prev, b - 1, 2)
                stub_target[t] = add(prev, b - 2, 1)
            else:
                prev = add(prev, Fraction(2 * b + 1, 2), 2)
                if flavor is GadgetFlavor.V1_UNBOUNDED:
                    s = add(prev, b, 2)
                    for _ in range(cube):
                        add(s, b - 2, 2)
                else:
                    d = add(prev, b, 2)
                    for j in range(1, cube - 1):
                        add(d, b - 2, 2)
                        d = add(d, Fraction(b) - Fraction(j, cube), 2)
                    add(d, b - 2, 2)
                    add(d, b - 2, 2)
        add(prev, 0, 2)

    backbone = sum(len(ts) + 1 for ts in incident.values())
    bundle = cube + 1 if flavor is GadgetFlavor.V1_UNBOUNDED else 2 * cube - 1
    root_part = 2 if flavor is GadgetFlavor.V1_UNBOUNDED else n + 1
    assert len(recs) == root_part + n + backbone + m * bundle + m
    return ColumnTree(recs, 2)


def crossings_to_fas_size(k: int, n: int) -> int:
    """Feedback arc set size implied by a gadget embedding's crossings."""
    if n < 2:
        raise ValueError("gadgets exist only for n >= 2")
    if k < 0:
        raise ValueError("crossing counts are nonnegative")
    return k // n**3


def min_fas_size(g: Digraph) -> int:
    """Exact minimum feedback arc set size, by exhaustive search.

    Sound reductions shrink the input first: self-loops are forced
    removals, vertices missing in- or out-edges lie on no cycle, and a
    vertex with a single in-copy and a single out-copy sits on a path
    every cycle through it uses whole, so the two edges collapse into
    one. Strongly connected components are solved separately. Small cores
    fall to a dynamic program over vertex orders (a removal set is
    minimal exactly when it is the backward edges of some order);
    larger cores use iterative deepening that branches on the edges of
    a shortest cycle, which is complete because every solution must
    hit that cycle somewhere. Independent of the reduction machinery
    on purpose: this is the ground-truth oracle it is confronted with.
    """
    mult: dict[tuple[int, int], int] = {}
    for e in g.edges:
        mult[e] = mult.get(e, 0) + 1
    return _fas_multigraph(set(g.vertices), mult)


def _fas_multigraph(verts: set[int], mult: dict[tuple[int, int], int]) -> int:
    total = 0
    changed = True
    while changed:
        changed = False
        for e in [e for e in mult if e[0] == e[1]]:
            total += mult.pop(e)
            changed = True
        indeg = {v: 0 for v in verts}
        outdeg = {v: 0 for v in verts}
        for (u, v), w in mult.items():
            outdeg[u] += w
            indeg[v] += w
        dead = {v for v in verts if indeg[v] == 0 or outdeg[v] == 0}
        if dead:
            verts -= dead
            mult = {
                e: w
                for e, w in mult.items()
                if e[0] in verts and e[1] in verts
            }
            changed = True
            continue
        # chain suppression: a vertex with one in-copy and one out-copy
        # sits on a path every cycle through it must use whole, so the
        # pair collapses to a single edge (possibly a self-loop)
        for v in sorted(verts):
            ins = [e for e in mult if e[1] == v]
            outs = [e for e in mult if e[0] == v]
            if (
                len(ins) == 1
                and mult[ins[0]] == 1
                and len(outs) == 1
                and mult[outs[0]] == 1
            ):
                key = (ins[0][0], outs[0][1])
                del mult[ins[0]]
                del mult[outs[0]]
                mult[key] = mult.get(key, 0) + 1
                verts.discard(v)
                changed = True
                break

    for comp in _strong_components(verts, mult):
        if len(comp) < 2:
            continue
        inner = {
            e: w for e, w in mult.items() if e[0] in comp and e[1] in comp
        }
        if not inner:
            continue
        if len(comp) <= 22:
            total += _fas_order_dp(sorted(comp), inner)
        else:
            total += _fas_cycle_branching(inner)
    return total


def _strong_components(
    verts: set[int], mult: dict[tuple[int, int], int]
) -> list[set[int]]:
    out: dict[int, list[int]] = {v: [] for v in verts}
    rev: dict[int, list[int]] = {v: [] for v in verts}
    for u, v in mult:
        out[u].append(v)
        rev[v].append(u)
    seen: set[int] = set()
    finish: list[int] = []
    for s in sorted(verts):
        if s in seen:
            continue
        stack = [(s, iter(out[s]))]
        seen.add(s)
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if w not in seen:
                    seen.add(w)
                    stack.append((w, iter(out[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                finish.append(v)
    comps: list[set[int]] = []
    assigned: set[int] = set()
    for s in reversed(finish):
        if s in assigned:
            continue
        comp = {s}
        stack2 = [s]
        assigned.add(s)
        while stack2:
            v = stack2.pop()
            for w in rev[v]:
                if w not in assigned:
                    assigned.add(w)
                    comp.add(w)
                    stack2.append(w)
        comps.append(comp)
    return comps


def _fas_order_dp(comp: list[int], mult: dict[tuple[int, int], int]) -> int:
    idx = {v: i for i, v in enumerate(comp)}
    k = len(comp)
    back = [[] for _ in range(k)]  # appending j makes its out-edges backward
    for (u, v), w in mult.items():
        back[idx[u]].append((1 << idx[v], w))
    inf = float("inf")
    best = [inf] * (1 << k)
    best[0] = 0
    for mask in range(1 << k):
        b = best[mask]
        if b is inf:
            continue
        for j in range(k):
            if mask >> j & 1:
                continue
            cost = b + sum(w for bit, w in back[j] if mask & bit)
            nm = mask | 1 << j
            if cost < best[nm]:
                best[nm] = cost
    return int(best[-1])


def _fas_cycle_branching(mult: dict[tuple[int, int], int]) -> int:
    """Iterative deepening on total removal weight; an optimal set
    drops all copies of a pair or none, so pairs are the branch unit."""
    out: dict[int, list[tuple[int, int]]] = {}
    for u, v in mult:
        out.setdefault(u, []).append((u, v))
        out.setdefault(v, [])

    def shortest_cycle(removed: frozenset) -> tuple | None:
        best: list | None = None
        for s in out:
            came: dict[int, tuple[int, int]] = {}
            queue = deque([s])
            hit = None
            while queue and hit is None:
                u = queue.popleft()
                for e in out[u]:
                    if e in removed:
                        continue
                    w = e[1]
                    if w == s:
                        hit = e
                        break
                    if w not in came and w != s:
                        came[w] = e
                        queue.append(w)
            if hit is None:
                continue
            cyc = [hit]
            u = hit[0]
            while u != s:
                e = came[u]
                cyc.append(e)
                u = e[0]
            if best is None or len(cyc) < len(best):
                best = cyc
        return tuple(best) if best is not None else None

    failed: dict[frozenset, int] = {}

    def search(removed: frozenset, budget: int) -> bool:
        if failed.get(removed, -1) >= budget:
            return False
        cyc = shortest_cycle(removed)
        if cyc is None:
            return True
        if budget <= 0:
            return False
        ok = False
        for e in cyc:
            if mult[e] <= budget and search(removed | {e}, budget - mult[e]):
                ok = True
                break
        if not ok:
            failed[removed] = budget
        return ok

    cap = sum(mult.values())
    for size in range(cap + 1):
        if search(frozenset(), size):
            return size
    return cap


@dataclass(frozen=True)
class RandomParams:
    """Knobs for seeded random instances; the seed fixes everything."""

    n: int
    columns: int
    max_degree: int
    seed: int


def random_instance(p: RandomParams) -> ColumnTree:
    """Random valid column tree, deterministic in the seed.

    Shapes come from a random-parent process capped at the degree
    bound; heights are distinct and strictly decreasing along a
    shuffled preorder, so inter-edge sources never clash; the column
    map follows parents with some drift and is patched to stay
    surjective.
    """
    if p.n < 2:
        raise ValueError("need at least two vertices")
    if not 2 <= p.columns <= p.n:
        raise ValueError("column count must be between 2 and the vertex count")
    if p.max_degree < 1 and p.n > 1:
        raise ValueError("max degree 0 admits no edges")
    rng = random.Random(p.seed)

    parent: list[int | None] = [None]
    degree = [0] * p.n
    for v in range(1, p.n):
        options = [u for u in range(v) if degree[u] < p.max_degree]
        u = rng.choice(options)
        parent.append(u)
        degree[u] += 1

    column = [0] * p.n
    column[0] = rng.randint(1, p.columns)
    for v in range(1, p.n):
        if rng.random() < 0.6:
            column[v] = column[parent[v]]
        else:
            column[v] = rng.randint(1, p.columns)
    # patch to surjective without orphaning any column already in use
    counts = Counter(column)
    patch = p.n - 1
    for c in (c for c in range(1, p.columns + 1) if counts[c] == 0):
        while counts[column[patch]] <= 1:
            patch -= 1
        counts[column[patch]] -= 1
        column[patch] = c
        counts[c] += 1
        patch -= 1

    kids: list[list[int]] = [[] for _ in range(p.n)]
    for v in range(1, p.n):
        kids[parent[v]].append(v)
    for lst in kids:
        rng.shuffle(lst)
    height: dict[int, Fraction] = {}
    level = Fraction(3 * p.n)
    stack = [0]
    while stack:
        v = stack.pop()
        height[v] = level
        level -= rng.randint(1, 3)
        stack.extend(reversed(kids[v]))
    if rng.random() < 0.5:
        height = {v: h / 2 for v, h in height.items()}

    recs = [
        VertexRecord(v, parent[v], height[v], column[v]) for v in range(p.n)
    ]
    return ColumnTree(recs, p.columns)


def adversarial_v3_instance(x: int) -> ColumnTree:
    """Two-column family where greedy insertion pays linearly more.

    The right column holds a host subtree with two stub-bearing wall
    branches around a high thin crown, and a broom subtree of width x
    that must go somewhere. Both walls' stubs sweep everything to their
    left, so every slot the greedy likes at insertion time is swept for
    about x crossings, while parking the broom between the walls (the
    gap the optimum uses) costs a flat 4: two crossings for its entry
    and two for its own stub's exit. The greedy's first-subtree
    embedding keeps the crown between the walls, hiding that gap.
    """
    if x < 3:
        raise ValueError("the family needs x >= 3")
    recs: list[VertexRecord] = []

    def add(vid: int, parent: int | None, height: int, column: int) -> int:
        recs.append(VertexRecord(vid, parent, Fraction(height), column))
        return vid

    rho = add(0, None, 104, 1)
    v82 = add(1, rho, 82, 1)
    add(2, v82, 0, 1)

    h0 = add(3, rho, 100, 2)
    sig_w2 = add(4, h0, 73, 2)
    add(5, sig_w2, 39, 2)
    crown = add(6, h0, 95, 2)
    nid = 7
    for _ in range(x - 2):
        add(nid, crown, 75, 2)
        nid += 1
    sig_h = add(nid, h0, 30, 2)
    add(nid + 1, sig_h, 5, 2)
    nid += 2

    n0 = add(nid, v82, 80, 2)
    mid = add(nid + 1, n0, 78, 2)
    sig_n = add(nid + 2, mid, 41, 2)
    add(nid + 3, sig_n, 10, 2)
    nid += 4
    for _ in range(x - 1):
        add(nid, mid, 10, 2)
        nid += 1

    add(nid, sig_w2, 3, 1)
    add(nid + 1, sig_h, 2, 1)
    add(nid + 2, sig_n, 1, 1)
    return ColumnTree(recs, 2)
