import json
from fractions import Fraction

import pytest

from qstirling.algebra import SparsePolynomial
from qstirling.bijections import psi1
from qstirling.coding import Singleton as S, build_coding
from qstirling.core import MultisetSpec, RootedWord
from qstirling.jsonio import (coding_to_json, from_json, kind_of, poly_to_json, to_json,
                              tree_to_json, vlabel_from_json, vlabel_to_json)
from qstirling.partitions import OrderedBlockPartition, parse_barred
from qstirling.trees import forget_order


def roundtrip(obj):
    d = json.loads(json.dumps(to_json(obj)))
    return from_json(d)


def test_vertex_labels():
    assert vlabel_to_json(3) == {"int": 3}
    assert vlabel_to_json(S(4)) == {"s": 4}
    assert vlabel_from_json({"s": 4}) == S(4)


def test_roundtrips(big_tree, small_graph, rooted_tree):
    objects = [
        MultisetSpec((1, 2, 2)),
        RootedWord((1, 2, 2, 1), 3),
        RootedWord((1,), None),
        big_tree,
        forget_order(big_tree),
        rooted_tree,
        small_graph,
        psi1(rooted_tree),
        OrderedBlockPartition(((2, 1), (), (3,))),
        parse_barred("({/3//14/},{///},{2///5//})"),
        SparsePolynomial(("x", "y"), {(1, 2): 3, (0, 0): Fraction(1, 2)}),
    ]
    for obj in objects:
        assert roundtrip(obj) == obj, obj


def test_kinds(big_tree, small_graph):
    assert kind_of(to_json(big_tree)) == "tree"
    assert kind_of(to_json(forget_order(big_tree))) == "unordered"
    assert kind_of(to_json(small_graph)) == "graph"
    assert kind_of({"blocks": []}) == "partition"
    with pytest.raises(ValueError):
        kind_of({"nonsense": 1})


def test_tree_schema(big_tree):
    d = tree_to_json(big_tree)
    assert d["multiplicities"] == list(big_tree.multiset.multiplicities)
    assert d["root"] == {"int": 0}
    child = d["children"][0]
    assert set(child) == {"edge", "node"} and set(child["node"]) == {"label", "children"}


def test_polynomial_schema():
    p = SparsePolynomial(("x", "y", "z"), {(2, 0, 1): 5, (0, 1, 0): -2, (1, 1, 0): 10 ** 30})
    d = poly_to_json(p)
    assert d["vars"] == ["x", "y", "z"]
    assert [t["exp"] for t in d["terms"]] == [[0, 1, 0], [1, 1, 0], [2, 0, 1]]
    assert d["terms"][1]["coef"] == str(10 ** 30)
    assert all(isinstance(t["coef"], str) for t in d["terms"])


def test_barred_schema():
    d = to_json(parse_barred("({/3//14/},{///},{2///5//})"))
    assert d["blocks"][0] == {"perm": [3, 1, 4], "bars": [1, 2, 0, 1]}
    assert all(len(b["bars"]) == len(b["perm"]) + 1 for b in d["blocks"])


def test_coding_rows():
    rows = coding_to_json(build_coding(MultisetSpec((2, 1)), 0))
    assert {"value": 1, "copy": 2, "code": 1} in rows
    assert {"value": 2, "copy": 1, "code": {"s": 2}} in rows


def test_plain_data_passes_through():
    assert to_json({"a": (1, Fraction(2, 3))}) == {"a": [1, "2/3"]}
