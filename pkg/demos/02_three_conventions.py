"""One instance, three drawing conventions, three different optima.

The conventions only differ in how the subtrees sharing a column may
interleave: v1 keeps each subtree in its own contiguous block, v2 lets
arms reach between blocks as long as no subtree sits strictly inside a
gap of another, v3 allows arbitrary interleaving.

    python3 demos/02_three_conventions.py
"""

from columntree.crossings import brute_force_optimum, check_validity
from columntree.gadgets import adversarial_v3_instance
from columntree.model import Variant

# A member of the family built to punish greedy v3 solvers; it also
# happens to separate the three conventions strictly.
tree = adversarial_v3_instance(4)
print(f"instance: {len(tree.vertices)} vertices, {tree.column_count} columns\n")

best = {}
for variant in Variant:
    emb, rep = brute_force_optimum(tree, variant)
    best[variant] = emb
    print(f"{variant.value}: optimum {rep.total:2d}  {rep.as_dict()}")

# Each relaxation genuinely buys crossings here: the v3 optimum is not
# even a legal v2 drawing, and the v2 optimum is not a legal v1 one.
ok, why = check_validity(tree, best[Variant.V3], Variant.V2)
print(f"\nv3 optimum valid under v2? {ok} ({why[0]})")
ok, why = check_validity(tree, best[Variant.V2], Variant.V1)
print(f"v2 optimum valid under v1? {ok} ({why[0]})")
