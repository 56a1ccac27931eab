"""Partitions of the position set and coarsest supporting partitions.

Positions are 0-based inside the library; ``parse``/``format``/JSON use the
1-based convention.  Parts are kept sorted by their minimum element so two
equal partitions always compare and print identically.

A partition P supports a set of strings A when every permutation that maps
each part of P onto itself also maps A onto itself.  Such permutations are
generated by the transpositions inside the parts, so it is enough to test
those.  Two positions i, j can share a part of some supporting partition only
if the transposition (i j) itself stabilises A; conversely the transpositions
that do stabilise A generate the full symmetric group on each connected
component of the "swap graph".  The components are therefore the unique
coarsest supporting partition.
"""
from __future__ import annotations

import re
from functools import reduce
from typing import Iterable, Iterator, Sequence

from .core import DimensionError, StringSet


class Partition:
    __slots__ = ("n", "parts", "_labels")

    def __init__(self, n: int, parts: Iterable[Iterable[int]]):
        blocks = [frozenset(p) for p in parts]
        if any(not b for b in blocks):
            raise ValueError("empty part")
        seen: set[int] = set()
        for b in blocks:
            if seen & b:
                raise ValueError("parts overlap")
            seen |= b
        if seen != set(range(n)):
            raise ValueError(f"parts do not cover 0..{n - 1}")
        self.n = n
        self.parts: tuple[frozenset[int], ...] = tuple(sorted(blocks, key=min))
        labels = [0] * n
        for idx, b in enumerate(self.parts):
            for k in b:
                labels[k] = idx
        self._labels = tuple(labels)

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(n, ([k] for k in range(n)))

    @classmethod
    def trivial(cls, n: int) -> "Partition":
        return cls(n, [range(n)])

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        groups: dict[int, list[int]] = {}
        for k, lab in enumerate(labels):
            groups.setdefault(lab, []).append(k)
        return cls(len(labels), groups.values())

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Read ``"{1,2}|{3}|{4}"`` (1-based positions)."""
        blocks = re.findall(r"\{([^{}]*)\}", text)
        if not blocks:
            raise ValueError(f"no parts in {text!r}")
        parts = [[int(tok) - 1 for tok in b.replace(",", " ").split()] for b in blocks]
        n = sum(len(p) for p in parts)
        return cls(n, parts)

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]]) -> "Partition":
        parts = [[k - 1 for k in p] for p in data]
        return cls(sum(len(p) for p in parts), parts)

    def to_json(self) -> list[list[int]]:
        return [sorted(k + 1 for k in p) for p in self.parts]

    def __str__(self) -> str:
        return "|".join("{" + ",".join(str(k) for k in p) + "}" for p in self.to_json())

    def __repr__(self) -> str:
        return f"Partition({self})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.n == other.n and self.parts == other.parts

    def __hash__(self) -> int:
        return hash((self.n, self.parts))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[frozenset[int]]:
        return iter(self.parts)

    @property
    def labels(self) -> tuple[int, ...]:
        """``labels[k]`` is the index of the part holding position ``k``."""
        return self._labels

    def part_of(self, k: int) -> frozenset[int]:
        return self.parts[self._labels[k]]

    def index_of(self, part: Iterable[int]) -> int:
        part = frozenset(part)
        idx = self._labels[min(part)]
        if self.parts[idx] != part:
            raise KeyError(f"{sorted(part)} is not a part")
        return idx


def _same_degree(p: Partition, q: Partition) -> None:
    if p.n != q.n:
        raise DimensionError(f"partition degrees differ: {p.n} vs {q.n}")


def intersect(p: Partition, q: Partition) -> Partition:
    """Part containing k is P(k) ∩ Q(k)."""
    _same_degree(p, q)
    return Partition.from_labels(list(zip(p.labels, q.labels)))


def intersect_all(partitions: Iterable[Partition], n: int) -> Partition:
    """Intersection of a family; the empty family gives the one-part partition."""
    return reduce(intersect, partitions, Partition.trivial(n))


def coarsen_join(p: Partition, q: Partition) -> Partition:
    """Finest partition coarser than both: components of the part-overlap relation."""
    _same_degree(p, q)
    parent = list(range(p.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in (*p.parts, *q.parts):
        first = min(part)
        for k in part:
            ra, rb = find(first), find(k)
            if ra != rb:
                parent[rb] = ra
    return Partition.from_labels([find(k) for k in range(p.n)])


def is_refinement(p: Partition, q: Partition) -> bool:
    """True iff every part of ``p`` lies inside a part of ``q``."""
    _same_degree(p, q)
    return all(len({q.labels[k] for k in part}) == 1 for part in p.parts)


def transpose_value(v: int, i: int, j: int) -> int:
    if (v >> i ^ v >> j) & 1:
        return v ^ (1 << i | 1 << j)
    return v


def transposition_stabilises(values: frozenset[int], i: int, j: int) -> bool:
    return all(transpose_value(v, i, j) in values for v in values)


def supports(p: Partition, a: StringSet) -> bool:
    if p.n != a.n:
        raise DimensionError(f"partition degree {p.n} vs string length {a.n}")
    # adjacent transpositions inside a part generate its symmetric group
    for part in p.parts:
        ordered = sorted(part)
        for i, j in zip(ordered, ordered[1:]):
            if not transposition_stabilises(a.values, i, j):
                return False
    return True


def swap_graph_edges(a: StringSet) -> list[tuple[int, int]]:
    return [
        (i, j)
        for i in range(a.n)
        for j in range(i + 1, a.n)
        if transposition_stabilises(a.values, i, j)
    ]


def components(n: int, edges: Iterable[tuple[int, int]]) -> Partition:
    labels = list(range(n))
    for i, j in edges:
        li, lj = labels[i], labels[j]
        if li != lj:
            labels = [li if lab == lj else lab for lab in labels]
    return Partition.from_labels(labels)


def coarsest_supporting_partition(a: StringSet) -> Partition:
    """SP(Stab(A)) via the connected components of the swap graph."""
    if not a.values:
        raise ValueError("coarsest supporting partition of an empty set is undefined")
    return components(a.n, swap_graph_edges(a))


def string_partition(value: int, n: int) -> Partition:
    """SP of a single string: its 0-positions and its 1-positions."""
    return Partition.from_labels([value >> k & 1 for k in range(n)])


def intersect_family(a: StringSet) -> Partition:
    """The intersection of SP(a) over all strings a in A."""
    if not a.values:
        raise ValueError("intersection over an empty family of strings")
    return Partition.from_labels(
        [tuple(v >> k & 1 for v in a.sorted_values()) for k in range(a.n)]
    )


def singleton_positions(p: Partition) -> frozenset[int]:
    return frozenset(min(part) for part in p.parts if len(part) == 1)


def is_pointwise_stabilised(perm: Sequence[int], p: Partition) -> bool:
    """True iff ``perm`` (image tuple) maps every part onto itself."""
    labels = p.labels
    return all(labels[perm[k]] == labels[k] for k in range(p.n))


def part_images(perm: Sequence[int], p: Partition) -> tuple[int, ...] | None:
    """Indices of the images of each part, or None if parts are not mapped to parts."""
    labels = p.labels
    out = []
    for part in p.parts:
        target = {labels[perm[k]] for k in part}
        if len(target) != 1:
            return None
        idx = target.pop()
        if len(p.parts[idx]) != len(part):
            return None
        out.append(idx)
    return tuple(out)


def is_setwise_stabilised(perm: Sequence[int], p: Partition) -> bool:
    return part_images(perm, p) is not None


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """All Bell(n) partitions of the positions, via restricted growth strings."""

    def grow(prefix: list[int], top: int) -> Iterator[list[int]]:
        if len(prefix) == n:
            yield prefix
            return
        for lab in range(top + 2):
            yield from grow(prefix + [lab], max(top, lab))

    if n == 0:
        return
    for labels in grow([0], 0):
        yield Partition.from_labels(labels)
