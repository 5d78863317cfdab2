"""Column trees: rooted trees with exact vertex heights and a column map.

A column tree is a rooted tree T together with a height h(v) for every
vertex (parents strictly above children) and a surjective assignment of
vertices to columns 1..column_count. Everything downstream (embedding,
counting, solving) is derived from these three ingredients, so this
module keeps the representation flat and immutable: a tuple of vertex
records plus lookup maps built once in the constructor.

Heights are :class:`fractions.Fraction` throughout. Sweep events, width
queries and crossing tests all compare heights exactly; no float ever
enters the pipeline.

Validation is data, not exceptions: :func:`validate` returns the list of
violated invariants so callers (parser, CLI) can report all of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

HeightLike = Union[int, Fraction]


class Variant(Enum):
    """Drawing conventions, from most to least restrictive."""

    V1 = "v1"
    V2 = "v2"
    V3 = "v3"


class EdgeKind(Enum):
    INTRA = "intra"
    INTER = "inter"


@dataclass(frozen=True)
class VertexRecord:
    """One vertex: id, parent id (None for the root), height, column."""

    id: int
    parent: Optional[int]
    height: Fraction
    column: int

    def __post_init__(self) -> None:
        # normalize ints and float-free rationals to Fraction exactly once
        if not isinstance(self.height, Fraction):
            object.__setattr__(self, "height", Fraction(self.height))


@dataclass(frozen=True)
class EdgeRef:
    """A tree edge, oriented parent -> child."""

    source: int
    target: int
    kind: EdgeKind


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class ColumnSubtree:
    """A maximal connected same-column subtree.

    ``entry`` is the unique inter-edge pointing into ``root`` (None for
    the subtree containing the tree root).
    """

    root: int
    column: int
    vertices: tuple[int, ...]
    entry: Optional[EdgeRef]


class ColumnTree:
    """Immutable column-tree instance.

    The constructor tolerates structurally broken input (duplicate ids,
    missing or cyclic parents, bad columns) so that :func:`validate` can
    report the problems; algorithms assume a tree that validates.
    """

    __slots__ = (
        "vertices",
        "column_count",
        "by_id",
        "children",
        "root",
        "_height",
        "_column",
        "_parent",
    )

    def __init__(self, vertices: Iterable[VertexRecord], column_count: int):
        self.vertices: tuple[VertexRecord, ...] = tuple(
            sorted(vertices, key=lambda v: v.id)
        )
        self.column_count = int(column_count)
        by_id: dict[int, VertexRecord] = {}
        for rec in self.vertices:
            by_id.setdefault(rec.id, rec)  # first wins; validate reports dupes
        self.by_id: Mapping[int, VertexRecord] = by_id
        children: dict[int, list[int]] = {v: [] for v in by_id}
        roots = []
        for rec in by_id.values():
            if rec.parent is None:
                roots.append(rec.id)
            elif rec.parent in children:
                children[rec.parent].append(rec.id)
        self.children: Mapping[int, tuple[int, ...]] = {
            v: tuple(sorted(cs)) for v, cs in children.items()
        }
        self.root: Optional[int] = roots[0] if len(roots) == 1 else None
        self._height = {v: rec.height for v, rec in by_id.items()}
        self._column = {v: rec.column for v, rec in by_id.items()}
        self._parent = {v: rec.parent for v, rec in by_id.items()}

    # -- small accessors used everywhere -------------------------------

    @property
    def n(self) -> int:
        return len(self.by_id)

    @property
    def max_degree(self) -> int:
        return max((len(c) for c in self.children.values()), default=0)

    def height(self, v: int) -> Fraction:
        return self._height[v]

    def column(self, v: int) -> int:
        return self._column[v]

    def parent(self, v: int) -> Optional[int]:
        return self._parent[v]

    def intra_children(self, v: int) -> tuple[int, ...]:
        col = self._column[v]
        return tuple(c for c in self.children[v] if self._column[c] == col)

    def inter_children(self, v: int) -> tuple[int, ...]:
        col = self._column[v]
        return tuple(c for c in self.children[v] if self._column[c] != col)

    def edges(self) -> tuple[EdgeRef, ...]:
        return classify_edges(self)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"ColumnTree(n={self.n}, columns={self.column_count})"


def classify_edges(tree: ColumnTree) -> tuple[EdgeRef, ...]:
    """Every edge (parent -> child) labeled intra or inter, by child id."""
    out = []
    for rec in tree.vertices:
        if rec.parent is None or rec.parent not in tree.by_id:
            continue
        kind = (
            EdgeKind.INTRA
            if tree.column(rec.parent) == rec.column
            else EdgeKind.INTER
        )
        out.append(EdgeRef(rec.parent, rec.id, kind))
    return tuple(out)


def inter_edges(tree: ColumnTree) -> tuple[EdgeRef, ...]:
    return tuple(e for e in classify_edges(tree) if e.kind is EdgeKind.INTER)


def validate(tree: ColumnTree) -> ValidationReport:
    """Check every structural invariant; violations are data, not errors."""
    bad: list[Violation] = []

    ids = [rec.id for rec in tree.vertices]
    seen: set[int] = set()
    for i in ids:
        if i in seen:
            bad.append(Violation("duplicate-id", f"vertex id {i} appears twice"))
        seen.add(i)

    roots = [rec.id for rec in tree.vertices if rec.parent is None]
    if len(roots) != 1:
        bad.append(
            Violation("root-count", f"expected exactly 1 root, found {len(roots)}")
        )
    for rec in tree.vertices:
        if rec.parent is not None and rec.parent not in tree.by_id:
            bad.append(
                Violation(
                    "missing-parent", f"vertex {rec.id} refers to unknown {rec.parent}"
                )
            )

    if len(roots) == 1:
        # reachability from the root ensures the parent links form a tree
        reached = {roots[0]}
        stack = [roots[0]]
        while stack:
            v = stack.pop()
            for c in tree.children.get(v, ()):
                if c not in reached:
                    reached.add(c)
                    stack.append(c)
        if len(reached) != len(tree.by_id):
            stray = sorted(set(tree.by_id) - reached)
            bad.append(
                Violation(
                    "not-a-tree",
                    f"vertices {stray} are not reachable from the root",
                )
            )

    for rec in tree.vertices:
        p = rec.parent
        if p is not None and p in tree.by_id:
            if tree.height(p) <= rec.height:
                bad.append(
                    Violation(
                        "parent-below-child",
                        f"h({p})={tree.height(p)} must exceed h({rec.id})={rec.height}",
                    )
                )

    if tree.column_count < 2:
        bad.append(
            Violation("column-count", f"need at least 2 columns, got {tree.column_count}")
        )
    used = set()
    for rec in tree.vertices:
        if not (1 <= rec.column <= tree.column_count):
            bad.append(
                Violation(
                    "column-range",
                    f"vertex {rec.id} has column {rec.column} outside 1..{tree.column_count}",
                )
            )
        else:
            used.add(rec.column)
    missing = [c for c in range(1, tree.column_count + 1) if c not in used]
    if missing:
        bad.append(
            Violation("column-surjective", f"columns {missing} are unused")
        )

    # every inter-edge source must have a height shared by no other vertex
    sources = {
        e.source for e in classify_edges(tree) if e.kind is EdgeKind.INTER
    }
    for s in sorted(sources):
        clashes = [
            rec.id
            for rec in tree.vertices
            if rec.id != s and rec.height == tree.height(s)
        ]
        if clashes:
            bad.append(
                Violation(
                    "source-height-clash",
                    f"inter-edge source {s} shares height {tree.height(s)} with {clashes}",
                )
            )

    return ValidationReport(tuple(bad))


def column_subtrees(tree: ColumnTree) -> tuple[ColumnSubtree, ...]:
    """Partition the vertices into maximal same-column connected subtrees.

    Cutting every inter-edge leaves exactly these components; each
    non-root component records the inter-edge through which it hangs.
    Result is ordered by (column, root id).
    """
    assert tree.root is not None, "column_subtrees needs a validated tree"
    subtrees: list[ColumnSubtree] = []
    stack: list[tuple[int, Optional[EdgeRef]]] = [(tree.root, None)]
    while stack:
        sub_root, entry = stack.pop()
        col = tree.column(sub_root)
        members = []
        inner = [sub_root]
        while inner:
            v = inner.pop()
            members.append(v)
            for c in tree.children[v]:
                if tree.column(c) == col:
                    inner.append(c)
                else:
                    stack.append((c, EdgeRef(v, c, EdgeKind.INTER)))
        subtrees.append(
            ColumnSubtree(sub_root, col, tuple(sorted(members)), entry)
        )
    subtrees.sort(key=lambda s: (s.column, s.root))
    return tuple(subtrees)


def subtree_lookup(tree: ColumnTree) -> dict[int, int]:
    """vertex id -> root id of its column subtree."""
    owner: dict[int, int] = {}
    for sub in column_subtrees(tree):
        for v in sub.vertices:
            owner[v] = sub.root
    return owner


@dataclass(frozen=True)
class Embedding:
    """A combinatorial embedding of a column tree.

    child_order
        per vertex with children: a permutation of *all* its children.
        Only the relative order of same-column children influences the
        drawing; inter children ride along so the record stays a true
        permutation.
    arrangements
        per column: the left-to-right sequence of leaf slots, written as
        one subtree-root token per slot. Contiguous runs are plain
        side-by-side blocks; interleaved runs encode nesting. A subtree
        with L drawing leaves contributes exactly L tokens.
    column_order
        left-to-right permutation of the columns 1..column_count.
    """

    child_order: Mapping[int, tuple[int, ...]]
    arrangements: Mapping[int, tuple[int, ...]]
    column_order: tuple[int, ...]

    def order_of(self, v: int) -> tuple[int, ...]:
        return self.child_order.get(v, ())


def drawing_leaves(tree: ColumnTree, v: int) -> int:
    """Number of leaf slots the branch at v occupies inside its subtree.

    A vertex with no same-column children is one slot, whatever its
    inter-edge fan-out.
    """
    kids = tree.intra_children(v)
    if not kids:
        return 1
    return sum(drawing_leaves(tree, c) for c in kids)


def subtree_leaf_count(tree: ColumnTree, sub: ColumnSubtree) -> int:
    return drawing_leaves(tree, sub.root)


def embedding_structure_errors(tree: ColumnTree, emb: Embedding) -> list[str]:
    """Cheap structural checks shared by io parsing and check_validity."""
    errs: list[str] = []
    if tuple(sorted(emb.column_order)) != tuple(range(1, tree.column_count + 1)):
        errs.append(
            f"column_order {emb.column_order} is not a permutation of 1..{tree.column_count}"
        )
    for v, order in emb.child_order.items():
        if v not in tree.by_id:
            errs.append(f"child_order refers to unknown vertex {v}")
            continue
        if tuple(sorted(order)) != tree.children[v]:
            errs.append(
                f"child_order[{v}]={order} is not a permutation of {tree.children[v]}"
            )
    for v in tree.by_id:
        if tree.children[v] and v not in emb.child_order:
            errs.append(f"vertex {v} has children but no child_order entry")
    subs = {s.root: s for s in column_subtrees(tree)} if tree.root is not None else {}
    by_col: dict[int, list[ColumnSubtree]] = {}
    for s in subs.values():
        by_col.setdefault(s.column, []).append(s)
    for col in range(1, tree.column_count + 1):
        tokens = emb.arrangements.get(col)
        if tokens is None:
            errs.append(f"column {col} has no arrangement")
            continue
        want: dict[int, int] = {}
        for s in by_col.get(col, []):
            want[s.root] = subtree_leaf_count(tree, s)
        have: dict[int, int] = {}
        for t in tokens:
            have[t] = have.get(t, 0) + 1
        if want != have:
            errs.append(
                f"column {col} tokens {dict(sorted(have.items()))} "
                f"!= expected slot counts {dict(sorted(want.items()))}"
            )
    return errs


def identity_child_order(tree: ColumnTree) -> dict[int, tuple[int, ...]]:
    """Children in id order for every inner vertex."""
    return {v: tree.children[v] for v in tree.by_id if tree.children[v]}
