import math
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from qstirling.algebra import SparsePolynomial
from qstirling.core import GuardExceeded, MultisetSpec
from qstirling.partitions import (BarredPartition, OrderedBlockPartition, barred_count_formula,
                                  class_of_partition, count_barred, enumerate_barred,
                                  enumerate_partitions, gamma_count, gamma_counts, is_valid_barred,
                                  parse_barred, partition_class_size, partition_stats,
                                  rising_factorial)
from qstirling.polynomials import rhs_multiset_eulerian

XYZ = ("x", "y", "z")


def P(*blocks):
    return OrderedBlockPartition(tuple(tuple(b) for b in blocks))


def test_partition_stats_examples():
    assert tuple(partition_stats(P((2, 1), (), ()))) == (2, 1, 2, 1)
    assert tuple(partition_stats(P((), (), ()))) == (0, 0, 3, 0)


def test_partition_rejects_bad_blocks():
    with pytest.raises(ValueError):
        P((1, 1))
    with pytest.raises(ValueError):
        P((1,), (3,))


@pytest.mark.parametrize("n,k,count", [(1, 2, 2), (2, 1, 2), (2, 3, 12), (0, 2, 1)])
def test_enumerate_counts(n, k, count):
    parts = list(enumerate_partitions(n, k))
    assert len(parts) == count == rising_factorial(k, n)
    assert len(set(parts)) == count


def test_enumerate_small_lists():
    assert sorted(p.blocks for p in enumerate_partitions(1, 2)) == [((), (1,)), ((1,), ())]
    assert sorted(p.blocks for p in enumerate_partitions(2, 1)) == [((1, 2),), ((2, 1),)]


def test_enumerate_is_deterministic():
    assert list(enumerate_partitions(3, 2)) == list(enumerate_partitions(3, 2))


def test_enumerate_guard():
    with pytest.raises(GuardExceeded):
        list(enumerate_partitions(5, 5, max_M=6))


def test_class_examples():
    cls = list(class_of_partition(P((1, 2), ())))
    assert sorted(p.blocks for p in cls) == [((1, 2), ()), ((2, 1), ())]
    assert partition_class_size(P((1,), (2,), (3,))) == 1
    assert partition_class_size(P((1, 2, 3), (4, 5))) == 12
    assert len(list(class_of_partition(P((1, 2, 3), (4, 5))))) == 12


def test_stat_sum_invariant():
    for n in range(0, 5):
        for k in range(1, 5):
            for p in enumerate_partitions(n, k):
                s = partition_stats(p)
                assert s.des + s.asc + s.emp == n + k


def test_partition_gf_matches_multinomial_sum():
    for n in range(1, 7):
        for k in range(1, 7):
            gf = Counter()
            for p in enumerate_partitions(n, k):
                s = partition_stats(p)
                gf[(s.des, s.asc, s.emp)] += 1
            lhs = SparsePolynomial(XYZ, gf)
            m = MultisetSpec((k,) + (1,) * (n - 1))
            assert (m.n, m.k) == (n, k)
            assert lhs == rhs_multiset_eulerian(m), (n, k)


# -- barred partitions ------------------------------------------------------------


def test_barred_examples():
    good = parse_barred("({/3//14/},{///},{2///5//})")
    assert good.blocks == ((3, 1, 4), (), (2, 5))
    assert good.bars == ((1, 2, 0, 1), (3,), (0, 3, 2))
    assert is_valid_barred(good)
    assert sum(len(g) for g in good.bars) == 5 + 3
    assert not is_valid_barred(parse_barred("({/3//14/},{///},{2///5})"))


def test_barred_count_small():
    assert count_barred(1, 1, 1) == 1 == barred_count_formula(1, 1, 1)
    assert [str(b) for b in enumerate_barred(1, 1, 1)] == [str(BarredPartition(((1,),), ((0, 1),)))]


def test_barred_enumeration_matches_formula():
    for n in range(0, 4):
        for k in range(1, 4):
            for m in range(0, 5):
                listed = list(enumerate_barred(n, k, m))
                assert all(is_valid_barred(b) and b.bar_count == m for b in listed)
                assert len(set(listed)) == len(listed)
                assert len(listed) == barred_count_formula(n, k, m) == \
                    math.comb(k - 1 + m, m) * m ** n


def test_barred_gf_matches_descent_series():
    # sum_m count_barred t^m == (sum_P t^des P) / (1 - t)^(n + k)
    for n in range(1, 4):
        for k in range(1, 4):
            des = Counter(partition_stats(p).des for p in enumerate_partitions(n, k))
            order = 6
            series = [0] * (order + 1)
            for d, c in des.items():
                for m in range(order + 1 - d):
                    series[d + m] += c * math.comb(n + k - 1 + m, m)
            assert series == [count_barred(n, k, m) for m in range(order + 1)]


# -- Gamma counts --------------------------------------------------------------------


def test_gamma_count_examples():
    assert gamma_count(2, 3, 2, 1) == 3
    assert gamma_count(2, 3, 1, 2) == 6
    assert all(i < 3 for (i, j) in gamma_counts(2, 3))
    assert gamma_count(3, 2, 2, 1) == 0


def test_gamma_counts_match_filter():
    for n in range(1, 5):
        for k in range(1, 4):
            ref = Counter()
            for p in enumerate_partitions(n, k):
                s = partition_stats(p)
                if s.dd == 0:
                    ref[(s.emp, s.des)] += 1
            assert gamma_counts(n, k) == ref


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_class_members_share_emp(n, k, data):
    parts = list(enumerate_partitions(n, k))
    p = data.draw(st.sampled_from(parts))
    cls = list(class_of_partition(p))
    assert len(cls) == partition_class_size(p)
    assert {partition_stats(q).emp for q in cls} == {partition_stats(p).emp}
