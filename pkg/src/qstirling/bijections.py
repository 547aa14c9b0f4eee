"""Bijections between trees, rooted words, regular graphs and partitions.

``phi``/``phi_inverse``: VE-trees <-> rooted quasi-Stirling words.
``psi1``/``psi1_inverse``: unordered VE-trees <-> regular graphs.
``psi2``/``psi2_inverse``: regular graphs <-> unordered block partitions.
``Psi``/``Psi_inverse``: the lift of psi2 . psi1 to ordered objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .coding import Singleton, build_coding, congruence_classes, root_entry, vertex_key
from .core import MultisetSpec, RootedWord, copy_indices, is_quasi_stirling, reduce_word
from .partitions import OrderedBlockPartition
from .trees import (Node, RegularGraph, UnorderedVETree, VETree, edge_words, forget_order,
                    validate_graph, validate_tree, validate_unordered, zero_classes)


class BijectionError(ValueError):
    """Input outside the domain of a bijection, or an internal invariant broke."""


# -- phi ----------------------------------------------------------------------


def phi(t: VETree) -> RootedWord:
    """Traverse the tree depth first, left to right, recording edge labels.

    Every edge is recorded on the way down.  On the way up it is recorded
    unless it starts at a singleton leaf or the next edge walked is a sibling
    with the same label.
    """
    bad = validate_tree(t)
    if bad:
        raise BijectionError(f"invalid tree: {bad[0].message}")
    out: list[int] = []

    def walk(node: Node):
        kids = node.children
        for idx, (e, child) in enumerate(kids):
            out.append(e)
            walk(child)
            if isinstance(child.label, Singleton):
                continue
            if idx + 1 < len(kids) and kids[idx + 1][0] == e:
                continue
            out.append(e)

    walk(t.root)
    word = tuple(out)
    r = t.root_label
    if r == 0:
        return RootedWord(word, None)
    value, copy = root_entry(t.multiset, r)
    copies = copy_indices(word)
    pos = next(i for i, (v, j) in enumerate(zip(word, copies), 1) if v == value and j == copy)
    return RootedWord(word, pos)


def phi_by_pair_adjustment(t: VETree) -> tuple[int, ...]:
    """The word of phi(t) built from the raw traversal by pair rewriting.

    Consecutive equal letters coming from two different edges, or from one
    edge at a singleton leaf, are merged into one letter; the same edge
    walked down and up at an integer leaf stays doubled.
    """
    raw = []  # (label, edge id, starts at singleton)
    counter = [0]

    def walk(node):
        for e, child in node.children:
            counter[0] += 1
            eid = counter[0]
            single = isinstance(child.label, Singleton)
            raw.append((e, eid, single))
            walk(child)
            raw.append((e, eid, single))

    walk(t.root)
    drop = set()
    for i in range(len(raw) - 1):
        (a, ea, sa), (b, eb, _) = raw[i], raw[i + 1]
        if a != b:
            continue
        if ea != eb or sa:
            drop.add(i + 1)
    return tuple(lab for i, (lab, _, _) in enumerate(raw) if i not in drop)


def _parse_groups(w: Sequence[int], m: MultisetSpec, lo: int, hi: int, positions):
    groups = []
    i = lo
    while i < hi:
        v = w[i]
        pos = positions[v]
        if pos[0] != i or pos[-1] >= hi:
            raise BijectionError(f"letter {v} is not nested inside its segment")
        if m.mult(v) == 1:
            groups.append((v, ()))
        else:
            slots = tuple(_parse_groups(w, m, a + 1, b, positions) for a, b in zip(pos, pos[1:]))
            groups.append((v, slots))
        i = pos[-1] + 1
    return groups


def phi_inverse(rw: RootedWord, m: Optional[MultisetSpec] = None) -> VETree:
    w = rw.word
    if m is None:
        m = MultisetSpec.from_word(w)
    elif not m.is_content_of(w):
        raise BijectionError(f"{w} is not a permutation of {m}")
    if not is_quasi_stirling(w):
        raise BijectionError(f"{w} is not quasi-Stirling")
    positions: dict[int, list[int]] = {}
    for i, v in enumerate(w):
        positions.setdefault(v, []).append(i)
    forest = _parse_groups(w, m, 0, len(w), positions)

    entry = rw.entry
    r = 0 if entry is None else build_coding(m, 0).code(*entry)
    coding = build_coding(m, r)

    def build(label, groups) -> Node:
        kids = []
        for v, slots in groups:
            if not slots:
                kids.append((v, Node(Singleton(v))))
            else:
                for lab, sub in zip(coding.labels_of(v), slots):
                    kids.append((v, build(lab, sub)))
        return Node(label, tuple(kids))

    return VETree(m, build(r, forest))


# -- psi2 ---------------------------------------------------------------------

UnorderedBlocks = tuple[tuple[int, ...], ...]


def psi2(g: RegularGraph) -> UnorderedBlocks:
    """Block i holds the values of the vertices whose parent is i."""
    m = g.multiset
    coding = build_coding(m, 0)
    blocks: list[set[int]] = [set() for _ in range(m.k)]
    for v, p in g.parent:
        blocks[p].add(coding.value_of(v))
    return tuple(tuple(sorted(b)) for b in blocks)


def psi2_inverse(blocks: Sequence[Sequence[int]], m: MultisetSpec) -> RegularGraph:
    if len(blocks) != m.k:
        raise BijectionError(f"expected {m.k} blocks, got {len(blocks)}")
    flat = [v for b in blocks for v in b]
    if sorted(flat) != list(m.values()):
        raise BijectionError(f"blocks {blocks} do not partition [1..{m.n}]")
    coding = build_coding(m, 0)
    parent = {}
    for i, block in enumerate(blocks):
        for v in block:
            for lab in coding.labels_of(v):
                parent[lab] = i
    return RegularGraph.from_parents(m, parent)


# -- psi1 ---------------------------------------------------------------------


@dataclass(frozen=True)
class PathDecomposition:
    path: tuple[int, ...]
    minima: tuple[int, ...]  # right-to-left minima, increasing
    cycles: tuple[tuple[int, ...], ...]  # each ends at its minimum


def right_to_left_minima(path: Sequence[int]) -> list[int]:
    out = []
    best = None
    for v in reversed(path):
        if best is None or v < best:
            out.append(v)
            best = v
    return out[::-1]


def decompose_path(path: Sequence[int]) -> PathDecomposition:
    """Cut a path starting at 0 after each right-to-left minimum."""
    mins = right_to_left_minima(path)
    if path[0] != mins[0]:
        raise BijectionError("path must start at its smallest vertex")
    cycles = []
    cur: list[int] = []
    it = iter(mins[1:])
    nxt = next(it, None)
    for v in path[1:]:
        cur.append(v)
        if v == nxt:
            cycles.append(tuple(cur))
            cur = []
            nxt = next(it, None)
    return PathDecomposition(tuple(path), tuple(mins), tuple(cycles))


def path_from_cycles(first: int, cycles: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Inverse of :func:`decompose_path`: order cycles by minimum, cut after it."""
    path = [first]
    for cyc in sorted(cycles, key=min):
        k = cyc.index(min(cyc))
        path.extend(cyc[k + 1:] + cyc[:k + 1])
    return tuple(path)


def _walk_to_sink(parent: dict, start) -> list:
    path = [start]
    seen = {start}
    while path[-1] in parent:
        nxt = parent[path[-1]]
        if nxt in seen:
            raise BijectionError(f"cycle through {nxt} where a path to a sink was expected")
        seen.add(nxt)
        path.append(nxt)
    return path


def anchors(ut: UnorderedVETree) -> set:
    """Smallest member of each congruence class of the root's coding, plus singletons."""
    classes = congruence_classes(build_coding(ut.multiset, ut.root))
    return {min(c) for c in classes} | {Singleton(i) for i in ut.multiset.singletons}


def psi1_intermediate(ut: UnorderedVETree) -> dict:
    """The intermediate graph: each standard-coding class takes its anchor's parent.

    The class of the root under the standard coding is left without parents.
    """
    m = ut.multiset
    r = ut.root
    pT = ut.parent_dict()
    A = anchors(ut)
    zc = zero_classes(m)
    gt = {s: pT[s] for s in (Singleton(i) for i in m.singletons)}
    gt[0] = pT[0]
    root_cls = zc[r]
    for cls in set(zc.values()):
        if cls == root_cls or cls == (0,):
            continue
        js = [j for j in cls if j in A]
        if len(js) != 1:
            raise BijectionError(f"class {cls} holds anchors {js}, expected exactly one")
        for i in cls:
            gt[i] = pT[js[0]]
    return gt


def _reach(parent: dict, start):
    """The sink reached from ``start``, or None if the walk enters a cycle."""
    x = start
    for _ in range(len(parent) + 1):
        if x not in parent:
            return x
        x = parent[x]
    return None


def _cycles(parent: dict) -> list[tuple]:
    state: dict = {}
    out = []
    for start in parent:
        if start in state:
            continue
        trail = []
        x = start
        while x in parent and x not in state:
            state[x] = start
            trail.append(x)
            x = parent[x]
        if x in parent and state.get(x) == start:
            out.append(tuple(trail[trail.index(x):]))
    return out


def _anchor_inverse(gt: dict, m: MultisetSpec) -> Optional[UnorderedVETree]:
    """Undo the anchor step, or None when the result is not a preimage of ``gt``.

    The root is the sink reached from one below the smallest sink; every class
    of the root's coding copies the parent of its reverse anchor (the largest
    member of a standard class, or 0).
    """
    zc = zero_classes(m)
    sinks = tuple(sorted(x for x in zc if x not in gt))
    r = _reach(gt, sinks[0] - 1)
    if r is None or r not in sinks:
        return None
    reverse_anchors = {max(c) for c in set(zc.values()) if c != sinks} | {0}
    pT = {Singleton(i): gt[Singleton(i)] for i in m.singletons}
    for cls in congruence_classes(build_coding(m, r)):
        if cls == (r,):
            continue
        js = [j for j in cls if j in reverse_anchors]
        if len(js) != 1:
            return None
        for i in cls:
            pT[i] = gt[js[0]]
    ut = UnorderedVETree.from_parents(m, r, pT)
    if validate_unordered(ut) or psi1_intermediate(ut) != gt:
        return None
    return ut


def _acyclic(parent: dict) -> bool:
    return all(_reach(parent, v) is not None for v in parent)


def _profile(parent: dict, units, k: int) -> tuple[int, ...]:
    out = [0] * k
    for unit in units:
        out[parent[unit[0]]] += 1
    return tuple(out)


def _tree_units(m: MultisetSpec, r: int) -> list[list]:
    classes = [c for c in congruence_classes(build_coding(m, r)) if c != (r,)]
    return [list(c) for c in classes] + [[Singleton(i)] for i in sorted(m.singletons)]


def _graph_units(m: MultisetSpec, sinks: tuple[int, ...]) -> list[list]:
    classes = sorted(c for c in set(zero_classes(m).values()) if c != sinks)
    return [list(c) for c in classes] + [[Singleton(i)] for i in sorted(m.singletons)]


def _arrangements(counts: Sequence[int]):
    """Distinct sequences with ``counts[i]`` copies of i, in lex order."""
    counts = list(counts)
    total = sum(counts)
    seq: list[int] = []

    def rec():
        if len(seq) == total:
            yield tuple(seq)
            return
        for i, c in enumerate(counts):
            if c:
                counts[i] -= 1
                seq.append(i)
                yield from rec()
                seq.pop()
                counts[i] += 1

    yield from rec()


def _spread(units, targets) -> dict:
    return {v: t for unit, t in zip(units, targets) for v in unit}


def _in_anchor_domain(ut: UnorderedVETree) -> bool:
    gt = psi1_intermediate(ut)
    return _acyclic(gt) and _anchor_inverse(gt, ut.multiset) == ut


@lru_cache(maxsize=None)
def _completion(m: MultisetSpec, sinks: tuple[int, ...], profile: tuple[int, ...]):
    """Trees rooted in ``sinks`` outside the anchor domain, and the acyclic
    intermediate graphs with those sinks that the anchor step misses.

    Both lists share a parent profile and are sorted, so index i pairs them.
    """
    trees = []
    for r in sinks:
        units = _tree_units(m, r)
        for targets in _arrangements(profile):
            ut = UnorderedVETree.from_parents(m, r, _spread(units, targets))
            if not validate_unordered(ut) and not _in_anchor_domain(ut):
                trees.append(ut)
    units = _graph_units(m, sinks)
    graphs = []
    for targets in _arrangements(profile):
        gt = _spread(units, targets)
        if _acyclic(gt) and _anchor_inverse(gt, m) is None:
            graphs.append(_freeze_graph(gt))
    trees.sort(key=lambda t: (t.root, _freeze_graph(t.parent_dict())))
    graphs.sort()
    if len(trees) != len(graphs):
        raise BijectionError(f"completion sizes differ for {m} sinks {sinks}: "
                             f"{len(trees)} trees, {len(graphs)} graphs")
    return tuple(trees), tuple(graphs)


def _freeze_graph(parent: dict) -> tuple:
    return tuple(sorted(((vertex_key(v), p) for v, p in parent.items())))


def _thaw_graph(frozen: tuple) -> dict:
    return {(Singleton(v) if kind else v): p for (kind, v), p in frozen}


def _foata(gt: dict, m: MultisetSpec) -> dict:
    """Cut the path from 0 at its right-to-left minima and close each piece."""
    zc = zero_classes(m)
    path = _walk_to_sink(gt, 0)
    mins = right_to_left_minima(path)
    g = dict(gt)
    del g[0]
    for prev, u in zip(mins, mins[1:]):
        for x in zc[u]:
            g[x] = gt[prev]
    return g


def _unfoata(g: dict, cycles, m: MultisetSpec) -> dict:
    zc = zero_classes(m)
    path = path_from_cycles(0, cycles)
    mins = right_to_left_minima(path)
    nxt = {v: path[i + 1] for i, v in enumerate(path[:-1])}
    gt = dict(g)
    gt[0] = nxt[0]
    for u in mins[1:-1]:
        for x in zc[u]:
            gt[x] = nxt[u]
    for x in zc[mins[-1]]:
        del gt[x]
    return gt


def psi1(ut: UnorderedVETree) -> RegularGraph:
    """Unordered tree -> regular graph.

    Root 0 is the identity. Otherwise classes take their anchor's parent,
    giving a graph whose sinks are the root's standard class, and the path from
    0 is closed into cycles. Trees where the anchor step is not invertible are
    paired by sorted position with the intermediate graphs it misses.
    """
    bad = validate_unordered(ut)
    if bad:
        raise BijectionError(f"invalid unordered tree: {bad[0].message}")
    m = ut.multiset
    if ut.root == 0:
        return RegularGraph(m, ut.parent)
    if _in_anchor_domain(ut):
        gt = psi1_intermediate(ut)
    else:
        sinks = zero_classes(m)[ut.root]
        prof = _profile(ut.parent_dict(), _tree_units(m, ut.root), m.M - m.n + 1)
        trees, graphs = _completion(m, sinks, prof)
        gt = _thaw_graph(graphs[trees.index(ut)])
    return RegularGraph.from_parents(m, _foata(gt, m))


def psi1_inverse(g: RegularGraph) -> UnorderedVETree:
    bad = validate_graph(g)
    if bad:
        raise BijectionError(f"invalid regular graph: {bad[0].message}")
    m = g.multiset
    p = g.parent_dict()
    cycles = _cycles(p)
    if not cycles:
        return UnorderedVETree(m, 0, g.parent)
    gt = _unfoata(p, cycles, m)
    ut = _anchor_inverse(gt, m)
    if ut is not None:
        return ut
    sinks = tuple(sorted(x for x in zero_classes(m) if x not in gt))
    prof = _profile(gt, _graph_units(m, sinks), m.M - m.n + 1)
    trees, graphs = _completion(m, sinks, prof)
    return trees[graphs.index(_freeze_graph(gt))]


# -- Psi ----------------------------------------------------------------------


def order_like(values, pattern) -> tuple[int, ...]:
    """Arrange ``values`` to be order isomorphic to the distinct letters ``pattern``."""
    if len(values) != len(pattern):
        raise BijectionError(f"cannot arrange {values} like {pattern}")
    ranks = reduce_word(pattern)
    sv = sorted(values)
    return tuple(sv[i - 1] for i in ranks)


def Psi(t: VETree) -> OrderedBlockPartition:
    blocks = psi2(psi1(forget_order(t)))
    words = edge_words(t)
    return OrderedBlockPartition(tuple(order_like(b, words[i]) for i, b in enumerate(blocks)))


def Psi_inverse(p: OrderedBlockPartition, m: MultisetSpec) -> VETree:
    if p.n != m.n or p.k != m.k:
        raise BijectionError(f"partition shape (n={p.n}, k={p.k}) does not fit {m}")
    unordered = tuple(tuple(sorted(b)) for b in p.blocks)
    ut = psi1_inverse(psi2_inverse(unordered, m))
    labels = {}
    kids = ut.children()
    for i, block in enumerate(p.blocks):
        present = sorted({ut.edge_label(v) for v in kids.get(i, [])})
        labels[i] = order_like(present, block)
    return ut.to_tree(labels)


def phi_of_partition(p: OrderedBlockPartition, m: MultisetSpec) -> RootedWord:
    """The composite phi . Psi^{-1} from partitions to rooted words."""
    return phi(Psi_inverse(p, m))
