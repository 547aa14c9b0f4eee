import pytest
from hypothesis import given, strategies as st

from qstirling.coding import Singleton as S, build_coding, class_map, congruence_classes, root_entry
from qstirling.core import MultisetSpec

from conftest import BIG_MULTISET, ROOTED_MULTISET

multisets = st.lists(st.integers(1, 4), min_size=1, max_size=5).map(lambda x: MultisetSpec(tuple(x)))


def test_standard_coding_table():
    c = build_coding(BIG_MULTISET, 0)
    expected = {(1, 1): S(1), (2, 2): 1, (3, 2): 2, (3, 3): 3, (4, 2): 4, (5, 2): 5, (6, 1): S(6),
                (7, 2): 6, (7, 3): 7, (7, 4): 8, (8, 2): 9, (9, 2): 10, (9, 3): 11}
    for (v, j), code in expected.items():
        assert c.code(v, j) == code
    assert c.code(2, 1) is None


def test_shifted_coding_table():
    c = build_coding(ROOTED_MULTISET, 5)
    expected = {(1, 2): 0, (2, 2): 1, (2, 3): 2, (3, 2): 3, (5, 2): 4, (5, 3): 6, (6, 2): 7,
                (7, 2): 8, (7, 3): 9, (7, 4): 10, (4, 1): S(4), (8, 1): S(8)}
    for (v, j), code in expected.items():
        assert c.code(v, j) == code
    assert c.entry(5) is None


def test_all_singletons_have_no_integer_codes():
    c = build_coding(MultisetSpec((1, 1, 1)), 0)
    assert all(isinstance(lab, S) for _, _, lab in c.table())


def test_rejects_r_out_of_range():
    with pytest.raises(ValueError):
        build_coding(MultisetSpec((2, 2)), 3)


def test_congruence_class_examples():
    assert (6, 7, 8) in congruence_classes(build_coding(BIG_MULTISET, 0))
    classes = congruence_classes(build_coding(ROOTED_MULTISET, 5))
    assert (8, 9, 10) in classes and (5,) in classes
    assert congruence_classes(build_coding(MultisetSpec((2,)), 0)) == [(0,), (1,)]


def test_root_entry_examples():
    assert root_entry(ROOTED_MULTISET, 5) == (5, 2)
    assert root_entry(MultisetSpec((2,)), 1) == (1, 2)
    assert root_entry(BIG_MULTISET, 4) == (4, 2)
    assert root_entry(BIG_MULTISET, 0) is None
    with pytest.raises(ValueError):
        root_entry(MultisetSpec((2,)), 2)


@given(multisets, st.data())
def test_codes_used_are_everything_but_r(m, data):
    r = data.draw(st.integers(0, m.M - m.n))
    c = build_coding(m, r)
    codes = [lab for _, _, lab in c.table() if isinstance(lab, int)]
    assert sorted(codes) == [i for i in range(m.M - m.n + 1) if i != r]


@given(multisets, st.data())
def test_classes_are_intervals_of_the_right_size(m, data):
    r = data.draw(st.integers(0, m.M - m.n))
    c = build_coding(m, r)
    for v in m.values():
        if m.mult(v) == 1:
            continue
        labels = c.labels_of(v)
        assert len(labels) == m.mult(v) - 1
        cls = class_map(c)[labels[0]]
        assert cls == tuple(sorted(labels))
        # consecutive apart from the skipped root code
        span = [x for x in range(cls[0], cls[-1] + 1) if x != r]
        assert list(cls) == span


@given(multisets, st.data())
def test_codings_differ_only_across_the_skip(m, data):
    r = data.draw(st.integers(0, m.M - m.n))
    c0, cr = build_coding(m, 0), build_coding(m, r)
    for (v, j, a), (_, _, b) in zip(c0.table(), cr.table()):
        if isinstance(a, int):
            assert b == (a - 1 if a <= r else a)
        else:
            assert a == b
