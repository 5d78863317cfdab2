"""Crossing-minimal embeddings of column trees.

Exact and heuristic solvers for arranging the column subtrees of a
height-fixed tree drawing under three conventions (V1/V2/V3), plus the
hardness-gadget generators, a brute-force oracle, and SVG rendering.
"""

from .arrangement import (
    Digraph,
    ReductionOffset,
    SolveMode,
    WeightedDigraph,
    build_ifas,
    fas_solution_back,
    ifas_to_fas,
    solve_ifas_exact,
    solve_ifas_greedy,
    solve_v2,
    solve_variable_column_order,
)
from .crossings import (
    CrossingReport,
    InfeasibleVariantError,
    InvalidEmbeddingError,
    SearchSpaceError,
    brute_force_optimum,
    check_validity,
    count_crossings,
    count_inter,
)
from .embedder import embed_subtree, solve_v1, subtree_stubs, width_at
from .gadgets import (
    GadgetFlavor,
    GadgetParams,
    RandomParams,
    adversarial_v3_instance,
    crossings_to_fas_size,
    fas_to_columntree,
    min_fas_size,
    parse_digraph,
    random_instance,
)
from .io import (
    ParseError,
    parse_embedding,
    parse_instance,
    serialize_embedding,
    serialize_instance,
)
from .model import (
    ColumnSubtree,
    ColumnTree,
    EdgeKind,
    EdgeRef,
    Embedding,
    ValidationReport,
    Variant,
    VertexRecord,
    classify_edges,
    column_subtrees,
    validate,
)
from .render import assign_coordinates, emit_svg
from .v3heur import InsertionPosition, candidate_positions, solve_v3_greedy

__all__ = [
    "ColumnSubtree",
    "ColumnTree",
    "CrossingReport",
    "Digraph",
    "EdgeKind",
    "EdgeRef",
    "Embedding",
    "GadgetFlavor",
    "GadgetParams",
    "InfeasibleVariantError",
    "InsertionPosition",
    "InvalidEmbeddingError",
    "ParseError",
    "RandomParams",
    "ReductionOffset",
    "SearchSpaceError",
    "SolveMode",
    "ValidationReport",
    "Variant",
    "VertexRecord",
    "WeightedDigraph",
    "adversarial_v3_instance",
    "assign_coordinates",
    "brute_force_optimum",
    "build_ifas",
    "candidate_positions",
    "check_validity",
    "classify_edges",
    "column_subtrees",
    "count_crossings",
    "count_inter",
    "crossings_to_fas_size",
    "embed_subtree",
    "emit_svg",
    "fas_solution_back",
    "fas_to_columntree",
    "ifas_to_fas",
    "min_fas_size",
    "parse_digraph",
    "parse_embedding",
    "parse_instance",
    "random_instance",
    "serialize_embedding",
    "serialize_instance",
    "solve_ifas_exact",
    "solve_ifas_greedy",
    "solve_v1",
    "solve_v2",
    "solve_v3_greedy",
    "solve_variable_column_order",
    "subtree_stubs",
    "validate",
    "width_at",
]

__version__ = "0.1.0"
