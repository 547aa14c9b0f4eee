"""Partitions of [n] into k ordered (possibly empty) blocks, and barred versions."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence

from .core import check_guard, double_descents, word_stats


@dataclass(frozen=True)
class OrderedBlockPartition:
    """k blocks, each a permutation of its contents; together they cover [n]."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(int(x) for x in b) for b in self.blocks)
        flat = [x for b in blocks for x in b]
        if sorted(flat) != list(range(1, len(flat) + 1)):
            raise ValueError(f"blocks {blocks} do not partition [1..{len(flat)}]")
        if not blocks:
            raise ValueError("need at least one block")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def k(self) -> int:
        return len(self.blocks)

    def unordered(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(b)) for b in self.blocks)

    def __str__(self) -> str:
        return format_blocks(self.blocks)


def format_blocks(blocks: Sequence[Sequence[int]]) -> str:
    return "/".join(",".join(map(str, b)) if b else "ε" for b in blocks)


class PartitionStats(NamedTuple):
    des: int
    asc: int
    emp: int
    dd: int


def partition_stats(p: OrderedBlockPartition) -> PartitionStats:
    des = asc = emp = dd = 0
    for b in p.blocks:
        s = word_stats(b)
        des += s.des
        asc += s.asc
        emp += 1 if not b else 0
        dd += double_descents(b)
    return PartitionStats(des, asc, emp, dd)


def rising_factorial(k: int, n: int) -> int:
    out = 1
    for i in range(n):
        out *= k + i
    return out


def enumerate_partitions(n: int, k: int, max_M: Optional[int] = None) -> Iterator[OrderedBlockPartition]:
    """All of B_{n,k}: block assignment in lex order, then block permutations."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    check_guard(n + k - 1, max_M)
    for assign in itertools.product(range(k), repeat=n):
        contents = [[v for v, a in zip(range(1, n + 1), assign) if a == i] for i in range(k)]
        for perms in itertools.product(*(itertools.permutations(c) for c in contents)):
            yield OrderedBlockPartition(tuple(perms))


def class_of_partition(p: OrderedBlockPartition) -> Iterator[OrderedBlockPartition]:
    for perms in itertools.product(*(itertools.permutations(b) for b in p.blocks)):
        yield OrderedBlockPartition(tuple(perms))


def partition_class_size(p: OrderedBlockPartition) -> int:
    return math.prod(math.factorial(len(b)) for b in p.blocks)


# -- barred partitions --------------------------------------------------------


@dataclass(frozen=True)
class BarredPartition:
    """An ordered-block partition with bar counts in every gap of every block.

    ``bars[i]`` has ``len(blocks[i]) + 1`` entries: before the first letter,
    between letters, and after the last letter.
    """

    blocks: tuple[tuple[int, ...], ...]
    bars: tuple[tuple[int, ...], ...]

    @property
    def bar_count(self) -> int:
        return sum(sum(b) for b in self.bars)

    def partition(self) -> OrderedBlockPartition:
        return OrderedBlockPartition(self.blocks)

    def __str__(self) -> str:
        parts = []
        for perm, bars in zip(self.blocks, self.bars):
            s = "/" * bars[0]
            for x, b in zip(perm, bars[1:]):
                s += str(x) + "/" * b
            parts.append("{" + s + "}")
        return "(" + ",".join(parts) + ")"


def descent_gaps(perm: Sequence[int]) -> list[int]:
    """Gap indices (1..len) that follow a descent, counting the final one."""
    padded = [*perm, 0]
    return [i + 1 for i in range(len(perm)) if padded[i] > padded[i + 1]]


def is_valid_barred(b: BarredPartition) -> bool:
    try:
        OrderedBlockPartition(b.blocks)
    except ValueError:
        return False
    if len(b.blocks) != len(b.bars):
        return False
    for perm, bars in zip(b.blocks, b.bars):
        if len(bars) != len(perm) + 1 or any(x < 0 for x in bars):
            return False
        if any(bars[g] < 1 for g in descent_gaps(perm)):
            return False
    return True


def parse_barred(text: str) -> BarredPartition:
    """Parse the bracket notation ``({/3//14/},{///},{2///5//})``; letters are digits."""
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    blocks, bars = [], []
    for chunk in text.split("}"):
        chunk = chunk.strip().lstrip(",").strip()
        if not chunk:
            continue
        if not chunk.startswith("{"):
            raise ValueError(f"bad block {chunk!r}")
        perm, gaps = [], [0]
        for ch in chunk[1:]:
            if ch == "/":
                gaps[-1] += 1
            elif ch.isdigit():
                perm.append(int(ch))
                gaps.append(0)
            elif not ch.isspace():
                raise ValueError(f"unexpected {ch!r}")
        blocks.append(tuple(perm))
        bars.append(tuple(gaps))
    return BarredPartition(tuple(blocks), tuple(bars))


def _weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first, *rest)


def enumerate_barred(n: int, k: int, m: int, max_M: Optional[int] = None) -> Iterator[BarredPartition]:
    """Barred partitions of [n] into k blocks with exactly m bars.

    Each descent gap receives its mandatory bar up front; the remaining bars
    are spread over all n + k gaps.
    """
    for p in enumerate_partitions(n, k, max_M):
        need = [set(descent_gaps(b)) for b in p.blocks]
        spare = m - sum(len(s) for s in need)
        if spare < 0:
            continue
        sizes = [len(b) + 1 for b in p.blocks]
        for extra in _weak_compositions(spare, n + k):
            it = iter(extra)
            bars = []
            for size, req in zip(sizes, need):
                bars.append(tuple(next(it) + (1 if g in req else 0) for g in range(size)))
            yield BarredPartition(p.blocks, tuple(bars))


def count_barred(n: int, k: int, m: int, max_M: Optional[int] = None) -> int:
    """Count barred partitions with m bars by summing bar placements over B_{n,k}."""
    gaps = n + k
    total = 0
    for p in enumerate_partitions(n, k, max_M):
        spare = m - partition_stats(p).des
        if spare >= 0:
            total += math.comb(spare + gaps - 1, gaps - 1)
    return total


def barred_count_formula(n: int, k: int, m: int) -> int:
    """Bars into blocks, then the n letters into the m bar-delimited boxes."""
    return math.comb(k - 1 + m, m) * m ** n


def gamma_counts(n: int, k: int, max_M: Optional[int] = None) -> Counter:
    """(emp, des) -> number of partitions in B_{n,k} with no double descent."""
    out: Counter = Counter()
    for p in enumerate_partitions(n, k, max_M):
        s = partition_stats(p)
        if s.dd == 0:
            out[(s.emp, s.des)] += 1
    return out


def gamma_count(n: int, k: int, i: int, j: int, max_M: Optional[int] = None) -> int:
    return gamma_counts(n, k, max_M)[(i, j)]
