"""VE-labeled plane trees, their unordered forms, and regular graphs.

An ordered tree is a nest of :class:`Node` objects; edges hang off their
ending vertex as ``(edge label, child)`` pairs, left to right.  Unordered
trees and regular graphs are stored as parent functions, with edge labels
recovered from the coding of the root (or the standard coding for graphs).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Optional

from .coding import Singleton, VertexLabel, build_coding, class_map, congruence_classes, vertex_key
from .core import MultisetSpec, check_guard, cyclic_stats, word_stats


@dataclass(frozen=True)
class Node:
    label: VertexLabel
    children: tuple[tuple[int, "Node"], ...] = ()

    def groups(self) -> list[tuple[int, list[tuple[int, "Node"]]]]:
        """Children split into maximal runs of equal edge labels."""
        out: list[tuple[int, list]] = []
        for e, child in self.children:
            if out and out[-1][0] == e:
                out[-1][1].append((e, child))
            else:
                out.append((e, [(e, child)]))
        return out


@dataclass(frozen=True)
class VETree:
    multiset: MultisetSpec
    root: Node

    @property
    def root_label(self) -> VertexLabel:
        return self.root.label

    def nodes(self) -> Iterator[tuple[Node, Optional[int]]]:
        """Preorder (node, label of the edge above it)."""
        stack: list[tuple[Node, Optional[int]]] = [(self.root, None)]
        while stack:
            node, e = stack.pop()
            yield node, e
            stack.extend((c, ce) for ce, c in reversed(node.children))

    def parent_map(self) -> dict[VertexLabel, VertexLabel]:
        out = {}
        for node, _ in self.nodes():
            for _e, child in node.children:
                out[child.label] = node.label
        return out

    def __str__(self) -> str:
        return format_node(self.root)


def format_node(node: Node) -> str:
    """Bracket form: ``0[7:1[...] 7:3]`` lists ``edge:child`` left to right."""
    if not node.children:
        return repr(node.label)
    return f"{node.label!r}[" + " ".join(f"{e}:{format_node(c)}" for e, c in node.children) + "]"


@dataclass(frozen=True)
class Violation:
    condition: int  # 1-4 for the labeling conditions, 0 for malformed input
    message: str


def _expected_labels(m: MultisetSpec) -> set:
    return set(range(m.M - m.n + 1)) | {Singleton(i) for i in m.singletons}


def validate_tree(t, m: Optional[MultisetSpec] = None) -> list[Violation]:
    """Every violated labeling condition; an empty list means t is valid."""
    try:
        return _validate(t, m)
    except Exception as exc:  # malformed structures are reported, not raised
        return [Violation(0, f"malformed tree: {exc!r}")]


def _validate(t, m) -> list[Violation]:
    if isinstance(t, VETree):
        m = m or t.multiset
        root = t.root
    else:
        root = t
    if m is None:
        return [Violation(0, "no multiset given")]
    if not isinstance(root, Node):
        return [Violation(0, "root is not a Node")]
    bad: list[Violation] = []

    labels = []
    edges = []  # (edge, start label, end label, sibling index)
    stack = [root]
    while stack:
        node = stack.pop()
        labels.append(node.label)
        for idx, (e, child) in enumerate(node.children):
            if not isinstance(child, Node) or not isinstance(e, int):
                return [Violation(0, "children must be (int, Node) pairs")]
            edges.append((e, child, node, idx))
            stack.append(child)

    # condition 1
    if not isinstance(root.label, int) or isinstance(root.label, bool):
        bad.append(Violation(1, f"root label {root.label!r} is not an integer"))
    if len(labels) != len(set(labels)):
        bad.append(Violation(1, "vertex labels are not distinct"))
    if set(labels) != _expected_labels(m):
        bad.append(Violation(1, "vertex labels differ from [M-n]_0 plus singletons"))

    # condition 2
    for e, child, _parent, _idx in edges:
        if isinstance(child.label, Singleton):
            if child.children or child.label.value != e:
                bad.append(Violation(2, f"{child.label!r} must be a leaf starting an edge labeled {child.label.value}"))
        elif 1 <= e <= m.n and m.mult(e) == 1:
            bad.append(Violation(2, f"edge {e} of a singleton starts at integer vertex {child.label}"))

    # condition 3
    want = Counter({v: (m.mult(v) - 1 if m.mult(v) > 1 else 1) for v in m.values()})
    got = Counter(e for e, *_ in edges)
    if got != want:
        bad.append(Violation(3, f"edge labels {dict(got)} differ from the required multiset {dict(want)}"))
    runs: Counter = Counter()
    for node in labels_and_nodes(root):
        for e, _grp in node.groups():
            runs[e] += 1
    for e, c in runs.items():
        if c > 1:
            bad.append(Violation(3, f"edges labeled {e} are not adjacent siblings"))

    # condition 4
    for node in labels_and_nodes(root):
        for e, grp in node.groups():
            starts = [c.label for _, c in grp]
            if len(starts) > 1 and any(isinstance(s, Singleton) for s in starts):
                continue  # already reported under condition 2/3
            if starts != sorted(starts, key=vertex_key):
                bad.append(Violation(4, f"edges labeled {e} start at non-increasing labels {starts}"))
    int_edges = [(e, c.label) for e, c, _p, _i in edges if not isinstance(c.label, Singleton)]
    for (e1, v1), (e2, v2) in itertools.combinations(int_edges, 2):
        if e1 != e2 and (e1 < e2) != (v1 < v2):
            bad.append(Violation(4, f"edge {e1} at vertex {v1} and edge {e2} at vertex {v2} are not compatible"))
            break
    return bad


def labels_and_nodes(root: Node) -> Iterator[Node]:
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(c for _, c in node.children)


def is_valid_tree(t, m: Optional[MultisetSpec] = None) -> bool:
    return not validate_tree(t, m)


class TreeStats(NamedTuple):
    cdes: int
    casc: int
    leaf_star: int


def tree_stats(t: VETree) -> TreeStats:
    cdes = casc = leaves = 0
    for node, above in t.nodes():
        word = [e for e, _ in node.children]
        if above is None:
            s = word_stats(word)
            cdes += s.des
            casc += s.asc
        else:
            d, a = cyclic_stats([above, *word])
            cdes += d
            casc += a
            if not word and not isinstance(node.label, Singleton):
                leaves += 1
    return TreeStats(cdes, casc, leaves)


def edge_words(t: VETree) -> dict[int, tuple[int, ...]]:
    """Integer vertex -> distinct labels of the edges ending there, left to right."""
    out = {}
    for node, _ in t.nodes():
        if not isinstance(node.label, Singleton):
            out[node.label] = tuple(e for e, _ in node.groups())
    return out


# -- generator ------------------------------------------------------------
#
# A forest is a tuple of groups (value, slots); slots is () for a singleton
# value and otherwise a tuple of m_v - 1 child forests.


def _forests(m: MultisetSpec):
    @lru_cache(maxsize=None)
    def forests(values: frozenset) -> tuple:
        if not values:
            return ((),)
        out = []
        pool = sorted(values)
        for size in range(1, len(pool) + 1):
            for top in itertools.combinations(pool, size):
                rest = sorted(values - set(top))
                nslots = sum(m.mult(v) - 1 for v in top if m.mult(v) > 1)
                if rest and nslots == 0:
                    continue
                for order in itertools.permutations(top):
                    for assign in itertools.product(range(nslots), repeat=len(rest)):
                        parts = [frozenset(v for v, s in zip(rest, assign) if s == i)
                                 for i in range(nslots)]
                        for subs in itertools.product(*(forests(p) for p in parts)):
                            groups, it = [], iter(subs)
                            for v in order:
                                if m.mult(v) == 1:
                                    groups.append((v, ()))
                                else:
                                    groups.append((v, tuple(next(it) for _ in range(m.mult(v) - 1))))
                            out.append(tuple(groups))
        return tuple(out)

    return forests


def _label_forest(m: MultisetSpec, forest, r: int) -> Node:
    # Condition 4: integer-started edges, sorted by (edge label, left-to-right
    # position inside the group), receive [M-n]_0 minus {r} increasingly.
    free = [c for c in range(m.M - m.n + 1) if c != r]
    rank = {}
    i = 0
    for v in m.values():
        if m.mult(v) > 1:
            for j in range(m.mult(v) - 1):
                rank[(v, j)] = free[i]
                i += 1

    def build(label, fr) -> Node:
        kids = []
        for v, slots in fr:
            if not slots:
                kids.append((v, Node(Singleton(v))))
            else:
                for j, sub in enumerate(slots):
                    kids.append((v, build(rank[(v, j)], sub)))
        return Node(label, tuple(kids))

    return build(r, forest)


def enumerate_trees(m: MultisetSpec, max_M: Optional[int] = None) -> Iterator[VETree]:
    """All VE-labeled trees over m, built directly from the labeling rules.

    Ordered by root label, then depth first on (edge label, subtree).
    """
    check_guard(m.M, max_M)
    shapes = sorted(_forests(m)(frozenset(m.values())))
    for r in range(m.M - m.n + 1):
        for shape in shapes:
            yield VETree(m, _label_forest(m, shape, r))


# -- equivalence classes ----------------------------------------------------


def _variants(node: Node) -> Iterator[Node]:
    groups = node.groups()
    per_group = []
    for e, grp in groups:
        choices = itertools.product(*(_variants(c) for _, c in grp))
        per_group.append([tuple((e, c) for c in combo) for combo in choices])
    for combo in itertools.product(*per_group):
        for order in itertools.permutations(combo):
            yield Node(node.label, tuple(pair for grp in order for pair in grp))


def class_of(t: VETree) -> Iterator[VETree]:
    """Every tree obtained by rearranging the edges ending at each vertex."""
    for root in _variants(t.root):
        yield VETree(t.multiset, root)


def class_size(t: VETree) -> int:
    out = 1
    for node, _ in t.nodes():
        out *= math.factorial(len(node.groups()))
    return out


# -- unordered trees and regular graphs --------------------------------------


def _freeze(parent: dict) -> tuple:
    return tuple(sorted(parent.items(), key=lambda kv: vertex_key(kv[0])))


@dataclass(frozen=True)
class UnorderedVETree:
    """A VE-tree with sibling order forgotten: root label plus parent function."""

    multiset: MultisetSpec
    root: int
    parent: tuple[tuple[VertexLabel, int], ...]

    @classmethod
    def from_parents(cls, m: MultisetSpec, root: int, parent: dict) -> "UnorderedVETree":
        return cls(m, root, _freeze(parent))

    def parent_dict(self) -> dict[VertexLabel, int]:
        return dict(self.parent)

    def __str__(self) -> str:
        return f"root {self.root}: " + " ".join(f"{v!r}->{p}" for v, p in self.parent)

    def coding(self):
        return build_coding(self.multiset, self.root)

    def edge_label(self, v: VertexLabel) -> int:
        return self.coding().value_of(v)

    def children(self) -> dict[int, list[VertexLabel]]:
        out: dict[int, list] = {}
        for v, p in self.parent:
            out.setdefault(p, []).append(v)
        return out

    def distinct_in_labels(self) -> dict[int, int]:
        """Integer vertex -> number of distinct labels on edges ending there."""
        kids = self.children()
        return {i: len({self.edge_label(v) for v in kids.get(i, [])})
                for i in range(self.multiset.M - self.multiset.n + 1)}

    def to_tree(self, order: Optional[dict[int, tuple[int, ...]]] = None) -> VETree:
        """An ordered representative.

        ``order`` maps a vertex to the left-to-right sequence of distinct edge
        labels below it; vertices not listed get increasing label order.
        """
        order = order or {}
        kids = self.children()

        def build(label) -> Node:
            by_label: dict[int, list] = {}
            for v in kids.get(label, []):
                by_label.setdefault(self.edge_label(v), []).append(v)
            seq = order.get(label, tuple(sorted(by_label)))
            if sorted(seq) != sorted(by_label):
                raise ValueError(f"order {seq} at vertex {label} does not match edges {sorted(by_label)}")
            out = []
            for e in seq:
                for v in sorted(by_label[e], key=vertex_key):
                    out.append((e, build(v)))
            return Node(label, tuple(out))

        return VETree(self.multiset, build(self.root))


def forget_order(t: VETree) -> UnorderedVETree:
    return UnorderedVETree.from_parents(t.multiset, t.root_label, t.parent_map())


def _reaches(parent: dict, start, target, limit: int) -> bool:
    x = start
    for _ in range(limit + 1):
        if x == target:
            return True
        if x not in parent:
            return False
        x = parent[x]
    return False


def validate_unordered(ut: UnorderedVETree) -> list[Violation]:
    m = ut.multiset
    top = m.M - m.n
    bad = []
    if not 0 <= ut.root <= top:
        return [Violation(1, f"root {ut.root} outside [0, {top}]")]
    p = ut.parent_dict()
    if set(p) | {ut.root} != _expected_labels(m) or ut.root in p:
        bad.append(Violation(1, "vertex set differs from [M-n]_0 plus singletons"))
    if any(not isinstance(q, int) or not 0 <= q <= top for q in p.values()):
        bad.append(Violation(2, "a parent is not an integer vertex"))
    for v in p:
        if not _reaches(p, v, ut.root, len(p)):
            bad.append(Violation(0, f"vertex {v!r} does not reach the root"))
            break
    coding = ut.coding()
    for cls in congruence_classes(coding):
        if len({p.get(x) for x in cls}) > 1:
            bad.append(Violation(3, f"congruent vertices {cls} are not siblings"))
    return bad


@dataclass(frozen=True)
class RegularGraph:
    """Functional graph on [M-n] plus singletons into [M-n]_0; 0 is the only sink."""

    multiset: MultisetSpec
    parent: tuple[tuple[VertexLabel, int], ...]

    @classmethod
    def from_parents(cls, m: MultisetSpec, parent: dict) -> "RegularGraph":
        return cls(m, _freeze(parent))

    def parent_dict(self) -> dict[VertexLabel, int]:
        return dict(self.parent)

    def __str__(self) -> str:
        return " ".join(f"{v!r}->{p}" for v, p in self.parent)

    def edge_label(self, v: VertexLabel) -> int:
        return build_coding(self.multiset, 0).value_of(v)

    def children(self) -> dict[int, list[VertexLabel]]:
        out: dict[int, list] = {}
        for v, p in self.parent:
            out.setdefault(p, []).append(v)
        return out

    def distinct_in_labels(self) -> dict[int, int]:
        kids = self.children()
        return {i: len({self.edge_label(v) for v in kids.get(i, [])})
                for i in range(self.multiset.M - self.multiset.n + 1)}

    def is_tree(self) -> bool:
        p = self.parent_dict()
        return all(_reaches(p, v, 0, len(p)) for v in p)


def validate_graph(g: RegularGraph) -> list[Violation]:
    m = g.multiset
    top = m.M - m.n
    p = g.parent_dict()
    bad = []
    if set(p) | {0} != _expected_labels(m) or 0 in p:
        bad.append(Violation(1, "vertex set must be [M-n] plus singletons, with 0 as sink"))
    if any(not isinstance(q, int) or not 0 <= q <= top for q in p.values()):
        bad.append(Violation(2, "a parent is not an integer vertex"))
    for cls in congruence_classes(build_coding(m, 0)):
        if len({p.get(x) for x in cls}) > 1:
            bad.append(Violation(3, f"congruent vertices {cls} do not share a parent"))
    return bad


def zero_classes(m: MultisetSpec) -> dict[int, tuple[int, ...]]:
    """Integer vertex -> its congruence class under the standard coding."""
    return class_map(build_coding(m, 0))


def enumerate_regular_graphs(m: MultisetSpec, max_M: Optional[int] = None) -> Iterator[RegularGraph]:
    """Every regular graph: one parent in [M-n]_0 per class of the standard coding."""
    check_guard(m.M, max_M)
    coding = build_coding(m, 0)
    classes = [cls for cls in congruence_classes(coding) if cls != (0,)]
    units = [list(cls) for cls in classes] + [[Singleton(i)] for i in sorted(m.singletons)]
    for targets in itertools.product(range(m.M - m.n + 1), repeat=len(units)):
        yield RegularGraph.from_parents(m, {v: t for unit, t in zip(units, targets) for v in unit})
