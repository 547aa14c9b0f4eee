"""JSON forms of every object, and a reader that recognises them by their keys."""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .algebra import SparsePolynomial
from .coding import Coding, Singleton, VertexLabel, vertex_key
from .core import MultisetSpec, RootedWord
from .partitions import BarredPartition, OrderedBlockPartition
from .trees import Node, RegularGraph, UnorderedVETree, VETree


def multiset_to_json(m: MultisetSpec) -> dict:
    return {"multiplicities": list(m.multiplicities)}


def multiset_from_json(d: dict) -> MultisetSpec:
    return MultisetSpec(tuple(d["multiplicities"]))


def word_to_json(w) -> dict:
    return {"word": list(w)}


def rooted_to_json(rw: RootedWord) -> dict:
    return {"word": list(rw.word), "root": rw.root}


def rooted_from_json(d: dict) -> RootedWord:
    return RootedWord(tuple(d["word"]), d.get("root"))


def vlabel_to_json(v: VertexLabel) -> dict:
    return {"s": v.value} if isinstance(v, Singleton) else {"int": v}


def vlabel_from_json(d: dict) -> VertexLabel:
    if "s" in d:
        return Singleton(int(d["s"]))
    return int(d["int"])


def coding_to_json(c: Coding) -> list[dict]:
    rows = []
    for v, j, lab in c.table():
        if lab is None:
            continue
        rows.append({"value": v, "copy": j,
                     "code": {"s": lab.value} if isinstance(lab, Singleton) else lab})
    return rows


def _node_children(node: Node) -> list[dict]:
    return [{"edge": e, "node": {"label": vlabel_to_json(c.label), "children": _node_children(c)}}
            for e, c in node.children]


def tree_to_json(t: VETree) -> dict:
    return {**multiset_to_json(t.multiset), "root": vlabel_to_json(t.root_label),
            "children": _node_children(t.root)}


def _node_from_json(label: dict, children: list) -> Node:
    return Node(vlabel_from_json(label),
                tuple((int(c["edge"]), _node_from_json(c["node"]["label"], c["node"].get("children", [])))
                      for c in children))


def tree_from_json(d: dict) -> VETree:
    return VETree(multiset_from_json(d), _node_from_json(d["root"], d.get("children", [])))


def _parents_to_json(parent) -> list[dict]:
    items = sorted(parent, key=lambda kv: vertex_key(kv[0]))
    return [{"v": vlabel_to_json(v), "p": p} for v, p in items]


def _parents_from_json(rows) -> dict:
    return {vlabel_from_json(r["v"]): int(r["p"]) for r in rows}


def unordered_to_json(ut: UnorderedVETree) -> dict:
    return {**multiset_to_json(ut.multiset), "root": ut.root, "parent": _parents_to_json(ut.parent)}


def unordered_from_json(d: dict) -> UnorderedVETree:
    return UnorderedVETree.from_parents(multiset_from_json(d), int(d["root"]),
                                        _parents_from_json(d["parent"]))


def graph_to_json(g: RegularGraph) -> dict:
    return {**multiset_to_json(g.multiset), "parent": _parents_to_json(g.parent)}


def graph_from_json(d: dict) -> RegularGraph:
    return RegularGraph.from_parents(multiset_from_json(d), _parents_from_json(d["parent"]))


def partition_to_json(p) -> dict:
    blocks = p.blocks if isinstance(p, OrderedBlockPartition) else p
    return {"blocks": [list(b) for b in blocks]}


def partition_from_json(d: dict) -> OrderedBlockPartition:
    return OrderedBlockPartition(tuple(tuple(b) for b in d["blocks"]))


def barred_to_json(b: BarredPartition) -> dict:
    return {"blocks": [{"perm": list(p), "bars": list(g)} for p, g in zip(b.blocks, b.bars)]}


def barred_from_json(d: dict) -> BarredPartition:
    return BarredPartition(tuple(tuple(b["perm"]) for b in d["blocks"]),
                           tuple(tuple(b["bars"]) for b in d["blocks"]))


def poly_to_json(p: SparsePolynomial) -> dict:
    return {"vars": list(p.vars),
            "terms": [{"exp": list(e), "coef": str(c)} for e, c in p.sorted_terms()]}


def poly_from_json(d: dict) -> SparsePolynomial:
    return SparsePolynomial(d["vars"], {tuple(t["exp"]): _number(t["coef"]) for t in d["terms"]})


def _number(text: str):
    q = Fraction(text)
    return q.numerator if q.denominator == 1 else q


def to_json(obj: Any) -> Any:
    """Best JSON form for any library object; plain data passes through."""
    if isinstance(obj, MultisetSpec):
        return multiset_to_json(obj)
    if isinstance(obj, RootedWord):
        return rooted_to_json(obj)
    if isinstance(obj, VETree):
        return tree_to_json(obj)
    if isinstance(obj, UnorderedVETree):
        return unordered_to_json(obj)
    if isinstance(obj, RegularGraph):
        return graph_to_json(obj)
    if isinstance(obj, OrderedBlockPartition):
        return partition_to_json(obj)
    if isinstance(obj, BarredPartition):
        return barred_to_json(obj)
    if isinstance(obj, SparsePolynomial):
        return poly_to_json(obj)
    if isinstance(obj, Singleton):
        return vlabel_to_json(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    return obj


def kind_of(d: dict) -> str:
    """Which object a JSON dict encodes."""
    if "terms" in d:
        return "polynomial"
    if "blocks" in d:
        first = next(iter(d["blocks"]), None)
        return "barred" if isinstance(first, dict) else "partition"
    if "children" in d:
        return "tree"
    if "parent" in d:
        return "unordered" if "root" in d else "graph"
    if "word" in d:
        return "rooted"
    if "multiplicities" in d:
        return "multiset"
    raise ValueError(f"unrecognised JSON object with keys {sorted(d)}")


_READERS = {
    "polynomial": poly_from_json,
    "barred": barred_from_json,
    "partition": partition_from_json,
    "tree": tree_from_json,
    "unordered": unordered_from_json,
    "graph": graph_from_json,
    "rooted": rooted_from_json,
    "multiset": multiset_from_json,
}


def from_json(d: dict):
    return _READERS[kind_of(d)](d)
