"""How the v2 solver arranges the subtrees inside each column.

Once every subtree is embedded, only pairwise choices remain: putting
subtree a left of b costs k[(a, b)] crossings between them, putting b
left costs k[(b, a)]. The cheaper direction of each pair is
unavoidable, so the solver pays t = sum of min(k_ab, k_ba) up front and
keeps one arc per asymmetric pair, weighted by the surplus of its
expensive direction. Ordering the column is then a minimum feedback arc
set problem on that digraph: only arcs pointing against the chosen
order still cost anything.

    python3 demos/03_arrangement_reduction.py
"""

from columntree.arrangement import (
    SolveMode,
    build_ifas,
    pairwise_crossing_counts,
    solve_ifas_exact,
    solve_v2,
)
from columntree.gadgets import GadgetFlavor, fas_to_columntree, parse_digraph

# The hardness gadget for a directed triangle: its big column holds
# subtrees that conflict in a cycle, so no order satisfies everyone.
tree = fas_to_columntree(parse_digraph("1 2\n2 3\n3 1\n"), GadgetFlavor.V1_UNBOUNDED)
print(f"instance: {len(tree.vertices)} vertices, {tree.column_count} columns\n")

for col in range(1, tree.column_count + 1):
    tab = pairwise_crossing_counts(tree, col)
    busy = {pair: w for pair, w in tab.k.items() if w}
    print(f"column {col}: {tab.r} subtrees, nonzero pair costs {busy or '{}'}")

g, offset = build_ifas(tree)
print(f"\nsurplus digraph: {len(g.vertices)} subtrees, arcs {dict(sorted(g.edges.items()))}")
print(f"unavoidable cost t = {offset.t}")

# The three heavy arcs form a directed cycle, so any order must leave
# at least one of them pointing backwards: s is one full arc weight.
order, s = solve_ifas_exact(g)
print(f"best order {order} pays s = {s} on top")

emb, rep = solve_v2(tree, SolveMode.EXACT)
print(f"\nsolve_v2 report: {rep.as_dict()}")
assert rep.k_column == s + offset.t
print(f"identity holds: k_column {rep.k_column} == s {s} + t {offset.t}")

# The greedy arrangement mode trades exactness for speed; here the
# cycle is symmetric enough that it lands on the same count.
_, cheap = solve_v2(tree, SolveMode.HEURISTIC)
print(f"heuristic arrangement total: {cheap.total} (exact {rep.total})")
