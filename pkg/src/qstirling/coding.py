"""r-codings of a multiset: entries (value, copy) to vertex labels."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Union

from .core import MultisetSpec


@dataclass(frozen=True, order=True)
class Singleton:
    """Vertex label s_i of the singleton value i."""

    value: int

    def __repr__(self) -> str:
        return f"s{self.value}"


VertexLabel = Union[int, Singleton]
Entry = tuple[int, int]


def vertex_key(v: VertexLabel) -> tuple[int, int]:
    """Sort key putting integer labels before singleton labels."""
    if isinstance(v, Singleton):
        return (1, v.value)
    return (0, v)


@dataclass(frozen=True)
class Coding:
    multiset: MultisetSpec
    r: int
    forward: dict = field(compare=False, repr=False)
    inverse: dict = field(compare=False, repr=False)

    def code(self, value: int, copy: int) -> Optional[VertexLabel]:
        """Label of entry value_copy; None for a first copy of a repeated value."""
        return self.forward.get((value, copy))

    def entry(self, label: VertexLabel) -> Optional[Entry]:
        """Preimage of a label; None for the root label r."""
        return self.inverse.get(label)

    def value_of(self, label: VertexLabel) -> Optional[int]:
        if isinstance(label, Singleton):
            return label.value
        e = self.inverse.get(label)
        return None if e is None else e[0]

    def labels_of(self, value: int) -> tuple[VertexLabel, ...]:
        """Labels of the vertices starting edges with this value, left to right."""
        m = self.multiset
        if m.mult(value) == 1:
            return (Singleton(value),)
        return tuple(self.forward[(value, j)] for j in range(2, m.mult(value) + 1))

    def table(self) -> list[tuple[int, int, Optional[VertexLabel]]]:
        return [(v, j, self.forward.get((v, j))) for v, j in self.multiset.entries()]


@lru_cache(maxsize=4096)
def build_coding(m: MultisetSpec, r: int = 0) -> Coding:
    top = m.M - m.n
    if not 0 <= r <= top:
        raise ValueError(f"r={r} outside [0, {top}]")
    codes = iter([c for c in range(top + 1) if c != r])
    forward: dict[Entry, VertexLabel] = {}
    for v, j in m.entries():
        if m.mult(v) == 1:
            forward[(v, j)] = Singleton(v)
        elif j >= 2:
            forward[(v, j)] = next(codes)
    inverse = {lab: e for e, lab in forward.items()}
    return Coding(m, r, forward, inverse)


def congruence_classes(coding: Coding) -> list[tuple[int, ...]]:
    """Integer labels grouped by the value of their preimage, plus {r}.

    Classes come out sorted by their smallest member.
    """
    return list(_classes(coding))


@lru_cache(maxsize=4096)
def _classes(coding: Coding) -> tuple[tuple[int, ...], ...]:
    groups: dict[int, list[int]] = {}
    for (v, _j), lab in coding.forward.items():
        if not isinstance(lab, Singleton):
            groups.setdefault(v, []).append(lab)
    classes = [tuple(sorted(g)) for g in groups.values()]
    classes.append((coding.r,))
    return tuple(sorted(classes))


@lru_cache(maxsize=4096)
def class_map(coding: Coding) -> dict[int, tuple[int, ...]]:
    """Integer label -> its congruence class (shared; do not mutate)."""
    return {lab: cls for cls in _classes(coding) for lab in cls}


def root_entry(m: MultisetSpec, r: int) -> Optional[Entry]:
    """The entry c^{-1}(r) under the standard coding; None when r = 0."""
    if r == 0:
        return None
    if not 1 <= r <= m.M - m.n:
        raise ValueError(f"r={r} outside [1, {m.M - m.n}]")
    return build_coding(m, 0).entry(r)
