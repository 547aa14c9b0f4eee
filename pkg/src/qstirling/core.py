"""Multisets, words, word statistics and the quasi-Stirling enumerators.

Words are plain tuples of positive integers.  Every statistic pads a word
with a virtual ``0`` on both sides; the padding is never stored.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

DEFAULT_MAX_M = 12

_settings = {"max_M": DEFAULT_MAX_M}


class GuardExceeded(ValueError):
    """An enumeration was asked for objects larger than the size guard."""


def set_max_M(value: int) -> None:
    _settings["max_M"] = int(value)


def get_max_M() -> int:
    return _settings["max_M"]


def check_guard(size: int, max_M: Optional[int] = None) -> None:
    limit = get_max_M() if max_M is None else max_M
    if size > limit:
        raise GuardExceeded(f"size {size} exceeds guard max_M={limit}")


@dataclass(frozen=True)
class MultisetSpec:
    """The multiset {1^m1, ..., n^mn} given by its multiplicity vector."""

    multiplicities: tuple[int, ...]

    def __post_init__(self):
        mult = tuple(int(x) for x in self.multiplicities)
        if any(x < 1 for x in mult):
            raise ValueError(f"multiplicities must be >= 1, got {mult}")
        object.__setattr__(self, "multiplicities", mult)

    @classmethod
    def of(cls, *multiplicities: int) -> "MultisetSpec":
        return cls(tuple(multiplicities))

    @classmethod
    def parse(cls, text: str) -> "MultisetSpec":
        """Parse ``"1,2,2"`` (a comma separated multiplicity vector)."""
        parts = [p for p in text.replace(" ", "").split(",") if p]
        return cls(tuple(int(p) for p in parts))

    @classmethod
    def from_word(cls, w: Sequence[int]) -> "MultisetSpec":
        """Content of a word whose letters are exactly 1..n."""
        counts = Counter(w)
        n = max(counts) if counts else 0
        if set(counts) != set(range(1, n + 1)):
            raise ValueError("word letters must be exactly 1..n; reduce it first")
        return cls(tuple(counts[v] for v in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.multiplicities)

    @property
    def M(self) -> int:
        return sum(self.multiplicities)

    @property
    def k(self) -> int:
        """Number of blocks M - n + 1 on the partition side."""
        return self.M - self.n + 1

    @property
    def singletons(self) -> frozenset[int]:
        return frozenset(v for v, m in enumerate(self.multiplicities, 1) if m == 1)

    def mult(self, value: int) -> int:
        return self.multiplicities[value - 1]

    def values(self) -> range:
        return range(1, self.n + 1)

    def letters(self) -> tuple[int, ...]:
        """The multiset written increasingly, e.g. (1, 2, 2)."""
        return tuple(v for v in self.values() for _ in range(self.mult(v)))

    def entries(self) -> Iterator[tuple[int, int]]:
        """(value, copy) pairs in increasing order."""
        for v in self.values():
            for j in range(1, self.mult(v) + 1):
                yield v, j

    def is_content_of(self, w: Sequence[int]) -> bool:
        return Counter(w) == Counter(self.letters())

    def __str__(self) -> str:
        parts = []
        for v, m in enumerate(self.multiplicities, 1):
            parts.append(str(v) if m == 1 else f"{v}^{m}")
        return "{" + ",".join(parts) + "}"


def all_multisets(M: int) -> list[MultisetSpec]:
    """Every multiset of total size M (one per composition of M), in lex order."""
    if M < 1:
        return []
    out = []

    def rec(rest, prefix):
        if rest == 0:
            out.append(MultisetSpec(tuple(prefix)))
            return
        for part in range(1, rest + 1):
            rec(rest - part, prefix + [part])

    rec(M, [])
    return out


def multisets_up_to(max_M: int) -> list[MultisetSpec]:
    return [m for M in range(1, max_M + 1) for m in all_multisets(M)]


class StatTriple(NamedTuple):
    des: int
    asc: int
    plat: int


def reduce_word(w: Sequence[int]) -> tuple[int, ...]:
    """Replace the i-th smallest letter by i."""
    rank = {v: i for i, v in enumerate(sorted(set(w)), 1)}
    return tuple(rank[v] for v in w)


def word_stats(w: Sequence[int]) -> StatTriple:
    des = asc = plat = 0
    prev = 0
    for cur in list(w) + [0]:
        if prev > cur:
            des += 1
        elif prev < cur:
            asc += 1
        else:
            plat += 1
        prev = cur
    return StatTriple(des, asc, plat)


def des(w: Sequence[int]) -> int:
    return word_stats(w).des


def cyclic_stats(s: Sequence[int]) -> tuple[int, int]:
    """(cdes, casc) with the wrap-around convention s_{r+1} = s_1."""
    if len(s) == 0:
        raise ValueError("cyclic statistics need a nonempty sequence")
    cdes = casc = 0
    for i, a in enumerate(s):
        b = s[(i + 1) % len(s)]
        if a > b:
            cdes += 1
        elif a < b:
            casc += 1
    return cdes, casc


def double_descents(w: Sequence[int]) -> int:
    padded = [0, *w, 0]
    return sum(1 for i in range(1, len(w) + 1)
               if padded[i - 1] > padded[i] > padded[i + 1])


def is_quasi_stirling(w: Sequence[int]) -> bool:
    """Stack check: a repeated letter must be the innermost still-open value."""
    remaining = Counter(w)
    seen: set[int] = set()
    stack: list[int] = []
    for v in w:
        if v in seen:
            if not stack or stack[-1] != v:
                return False
        else:
            seen.add(v)
            stack.append(v)
        remaining[v] -= 1
        if remaining[v] == 0:
            stack.pop()
    return True


def _has_abab(w: Sequence[int], a: int, b: int) -> bool:
    target = (a, b, a, b)
    i = 0
    for v in w:
        if v == target[i]:
            i += 1
            if i == 4:
                return True
    return False


def is_quasi_stirling_naive(w: Sequence[int]) -> bool:
    """Pairwise scan for a subsequence a..b..a..b with a != b."""
    values = sorted(set(w))
    for a in values:
        for b in values:
            if a != b and _has_abab(w, a, b):
                return False
    return True


def is_stirling(w: Sequence[int]) -> bool:
    """No i < j < k with w_i = w_k > w_j."""
    last: dict[int, int] = {}
    for k, v in enumerate(w):
        if v in last and min(w[last[v] + 1:k], default=v + 1) < v:
            return False
        last[v] = k
    return True


def copy_indices(w: Sequence[int]) -> list[int]:
    """The copy number (1-based, left to right) of each entry of w."""
    seen: Counter = Counter()
    out = []
    for v in w:
        seen[v] += 1
        out.append(seen[v])
    return out


@dataclass(frozen=True)
class SiblingStats:
    sd: int
    dsd: int
    # (position, "I" | "II") for every sibling descent, positions 1-based
    positions: tuple[tuple[int, str], ...]


def _sibling_descents(w: Sequence[int]) -> dict[int, str]:
    counts = Counter(w)
    copies = copy_indices(w)
    L = len(w)
    found = {}
    for i in range(1, L + 1):
        v = w[i - 1]
        if copies[i - 1] != counts[v]:
            continue
        if i == L:
            # the trailing 0 is the second copy of 0
            found[i] = "II"
        elif copies[i] > 1:
            found[i] = "II"
        elif v > w[i]:
            found[i] = "I"
    return found


def sibling_stats(w: Sequence[int]) -> SiblingStats:
    """Sibling descents and double sibling descents of a quasi-Stirling word.

    A value ``b`` is a double sibling descent when its first copy sits at
    f >= 2, position f-1 is a type I sibling descent, and the position of the
    last copy of ``b`` is a sibling descent.
    """
    w = tuple(w)
    if not is_quasi_stirling(w):
        raise ValueError(f"not quasi-Stirling: {w}")
    found = _sibling_descents(w)
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for i, v in enumerate(w, 1):
        first.setdefault(v, i)
        last[v] = i
    dsd = sum(1 for b, f in first.items()
              if f >= 2 and found.get(f - 1) == "I" and last[b] in found)
    return SiblingStats(len(found), dsd, tuple(sorted(found.items())))


def dsd_literal(w: Sequence[int]) -> int:
    """Adjacent-index reading: i-1 and i both sibling descents, i-1 of type I."""
    w = tuple(w)
    if not is_quasi_stirling(w):
        raise ValueError(f"not quasi-Stirling: {w}")
    found = _sibling_descents(w)
    return sum(1 for i in range(2, len(w) + 1)
               if i in found and found.get(i - 1) == "I")


def _nested_words(mult: Sequence[int]) -> Iterator[tuple[int, ...]]:
    # Depth-first over letters in increasing order gives lexicographic output.
    n = len(mult)
    L = sum(mult)
    left = list(mult)
    opened = [False] * (n + 1)
    stack: list[int] = []
    word: list[int] = []

    def rec():
        if len(word) == L:
            yield tuple(word)
            return
        top = stack[-1] if stack else None
        for v in range(1, n + 1):
            if left[v - 1] == 0:
                continue
            if opened[v]:
                if v != top:
                    continue
                left[v - 1] -= 1
                word.append(v)
                if left[v - 1] == 0:
                    stack.pop()
                yield from rec()
                if left[v - 1] == 0:
                    stack.append(v)
                word.pop()
                left[v - 1] += 1
            else:
                opened[v] = True
                left[v - 1] -= 1
                word.append(v)
                if left[v - 1] > 0:
                    stack.append(v)
                yield from rec()
                if left[v - 1] > 0:
                    stack.pop()
                word.pop()
                left[v - 1] += 1
                opened[v] = False

    yield from rec()


def enumerate_quasi_stirling(m: MultisetSpec, max_M: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """All quasi-Stirling permutations of m in lexicographic order."""
    check_guard(m.M, max_M)
    return _nested_words(m.multiplicities)


def enumerate_stirling(n: int, max_M: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """Stirling permutations of {1^2, ..., n^2} in lexicographic order."""
    check_guard(2 * n, max_M)
    left = [2] * (n + 1)
    word: list[int] = []
    where: dict[int, int] = {}

    def rec():
        if len(word) == 2 * n:
            yield tuple(word)
            return
        for v in range(1, n + 1):
            if left[v] == 0:
                continue
            if left[v] == 1 and any(x < v for x in word[where[v] + 1:]):
                continue
            left[v] -= 1
            if left[v] == 1:
                where[v] = len(word)
            word.append(v)
            yield from rec()
            word.pop()
            left[v] += 1

    return rec()


@dataclass(frozen=True)
class RootedWord:
    """A quasi-Stirling word with an optional root.

    ``root`` is ``None`` (rooted at the trailing 0) or a 1-based position
    holding a non-first copy of its value.
    """

    word: tuple[int, ...]
    root: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        if self.root is not None:
            if not 1 <= self.root <= len(self.word):
                raise ValueError(f"root position {self.root} out of range")
            if copy_indices(self.word)[self.root - 1] < 2:
                raise ValueError("root must be a non-first copy of its value")

    @property
    def entry(self) -> Optional[tuple[int, int]]:
        """The rooted entry as (value, copy index), or None for the 0 root."""
        if self.root is None:
            return None
        return self.word[self.root - 1], copy_indices(self.word)[self.root - 1]

    def __str__(self) -> str:
        s = "".join(str(v) if v < 10 else f"({v})" for v in self.word)
        return s if self.root is None else f"{s} @{self.root}"


def root_positions(w: Sequence[int]) -> list[int]:
    return [i for i, j in enumerate(copy_indices(w), 1) if j >= 2]


def enumerate_rooted(m: MultisetSpec, max_M: Optional[int] = None) -> Iterator[RootedWord]:
    for w in enumerate_quasi_stirling(m, max_M):
        yield RootedWord(w, None)
        for p in root_positions(w):
            yield RootedWord(w, p)


def parse_word(text: str) -> tuple[int, ...]:
    """``"31221"`` (single digits) or ``"3,1,2,2,1"``."""
    text = text.strip()
    if "," in text or " " in text:
        return tuple(int(p) for p in text.replace(",", " ").split())
    return tuple(int(c) for c in text)


def as_word(w: Iterable[int]) -> tuple[int, ...]:
    w = tuple(int(x) for x in w)
    if any(x < 1 for x in w):
        raise ValueError("word entries must be positive")
    return w
