"""Why the solvers are shaped the way they are.

Minimizing crossings in these drawings is as hard as minimum feedback
arc set: any biconnected digraph can be compiled into an instance whose
optimal crossing count encodes the FAS size. And the natural greedy for
v3 can be made to pay arbitrarily more than the optimum.

    python3 demos/04_hardness_and_adversaries.py
"""

from columntree.crossings import brute_force_optimum
from columntree.gadgets import (
    GadgetFlavor,
    adversarial_v3_instance,
    crossings_to_fas_size,
    fas_to_columntree,
    min_fas_size,
    parse_digraph,
)
from columntree.model import Variant
from columntree.v3heur import solve_v3_greedy

# A directed triangle: removing any single arc leaves it acyclic.
g = parse_digraph("1 2\n2 3\n3 1\n")
print(f"digraph: {len(g.vertices)} vertices, edges {list(g.edges)}")
print(f"exhaustive min feedback arc set size: {min_fas_size(g)}")

tree = fas_to_columntree(g, GadgetFlavor.V1_UNBOUNDED)
print(f"gadget instance: {len(tree.vertices)} vertices")
_, rep = brute_force_optimum(tree, Variant.V1)
n = len(g.vertices)
print(
    f"optimum {rep.total} crossings -> floor({rep.total} / {n}^3) = "
    f"{crossings_to_fas_size(rep.total, n)} arcs\n"
)

# The v3 greedy inserts subtrees left to right into the cheapest gap.
# This family makes every locally cheapest gap the wrong one: the
# optimum stays at 4 while the greedy grows linearly with x.
print("x  optimum  greedy")
for x in range(3, 8):
    t = adversarial_v3_instance(x)
    opt = brute_force_optimum(t, Variant.V3)[1].total
    greedy = solve_v3_greedy(t)[1].total
    print(f"{x}  {opt:7d}  {greedy:6d}")
