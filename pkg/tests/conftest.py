import pytest

from qstirling.coding import Singleton as S
from qstirling.core import MultisetSpec
from qstirling.trees import Node, RegularGraph, UnorderedVETree, VETree

BIG_WORD = (7, 8, 2, 1, 2, 8, 6, 7, 4, 4, 7, 9, 9, 3, 3, 5, 5, 3, 9, 7)
BIG_MULTISET = MultisetSpec((1, 2, 3, 2, 2, 1, 4, 2, 3))
ROOTED_MULTISET = MultisetSpec((2, 3, 2, 1, 3, 2, 4, 1))
GRAPH_MULTISET = MultisetSpec((3, 1, 2))


def leaf(label):
    return Node(label)


def make_big_tree() -> VETree:
    v9 = Node(9, ((2, Node(1, ((1, leaf(S(1))),))),))
    v6 = Node(6, ((8, v9), (6, leaf(S(6)))))
    v7 = Node(7, ((4, leaf(4)),))
    v11 = Node(11, ((3, leaf(2)), (3, Node(3, ((5, leaf(5)),)))))
    v8 = Node(8, ((9, leaf(10)), (9, v11)))
    return VETree(BIG_MULTISET, Node(0, ((7, v6), (7, v7), (7, v8))))


def make_rooted_tree() -> UnorderedVETree:
    parent = {1: 7, 2: 7, 7: 5, S(8): 4, 4: 8, 8: 5, 3: 6, S(4): 6, 6: 8, 9: 5, 0: 10, 10: 5}
    return UnorderedVETree.from_parents(ROOTED_MULTISET, 5, parent)


def make_small_graph() -> RegularGraph:
    return RegularGraph.from_parents(GRAPH_MULTISET, {1: 0, 2: 0, 3: 3, S(2): 3})


@pytest.fixture
def big_tree():
    return make_big_tree()


@pytest.fixture
def rooted_tree():
    return make_rooted_tree()


@pytest.fixture
def small_graph():
    return make_small_graph()
