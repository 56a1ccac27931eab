"""Bit-strings, hypercubes and the two actions on them.

Bit-strings are packed into Python ints, LSB first: position 1 of the word
``"0110"`` is bit 0 of the packed value.  All text I/O keeps the leftmost
character as position 1 and permutations as 1-based one-line images.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

STRUCTURE_CAP = 16


class DimensionError(ValueError):
    """Objects of different dimension were combined."""


def _check_dim(n: int, cap: int = STRUCTURE_CAP) -> None:
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if n > cap:
        raise ValueError(f"dimension {n} exceeds structure cap {cap}")


def bits_to_text(value: int, n: int) -> str:
    return "".join("1" if value >> i & 1 else "0" for i in range(n))


def text_to_bits(text: str) -> int:
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"not a 0/1 word: {text!r}")
    value = 0
    for i, ch in enumerate(text):
        if ch == "1":
            value |= 1 << i
    return value


def lex_key(value: int, n: int) -> int:
    """Sort key that orders packed words like their text form."""
    key = 0
    for i in range(n):
        key = (key << 1) | (value >> i & 1)
    return key


@dataclass(frozen=True, order=True)
class BitString:
    n: int
    value: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("bit-strings need n >= 1")
        if not 0 <= self.value < 1 << self.n:
            raise ValueError(f"value {self.value} does not fit in {self.n} bits")

    @classmethod
    def parse(cls, text: str) -> "BitString":
        text = text.strip()
        return cls(len(text), text_to_bits(text))

    def __str__(self) -> str:
        return bits_to_text(self.value, self.n)

    def __getitem__(self, position: int) -> int:
        """Bit at 1-based ``position``."""
        if not 1 <= position <= self.n:
            raise IndexError(position)
        return self.value >> (position - 1) & 1

    @property
    def weight(self) -> int:
        return self.value.bit_count()

    def __xor__(self, other: "BitString") -> "BitString":
        if self.n != other.n:
            raise DimensionError("length mismatch")
        return BitString(self.n, self.value ^ other.value)


def as_bitstring(x: BitString | str) -> BitString:
    return x if isinstance(x, BitString) else BitString.parse(x)


class StringSet:
    """Immutable set of equal-length bit-strings, stored as packed values."""

    __slots__ = ("n", "values")

    def __init__(self, n: int, values: Iterable[int] = ()):
        if n < 1:
            raise ValueError("n must be >= 1")
        vals = frozenset(values)
        top = 1 << n
        for v in vals:
            if not 0 <= v < top:
                raise DimensionError(f"value {v} does not fit in {n} bits")
        self.n = n
        self.values = vals

    @classmethod
    def of(cls, words: Iterable[BitString | str], n: int | None = None) -> "StringSet":
        strings = [as_bitstring(w) for w in words]
        if n is None:
            if not strings:
                raise ValueError("cannot infer n from an empty word list")
            n = strings[0].n
        for s in strings:
            if s.n != n:
                raise DimensionError(f"word {s} has length {s.n}, expected {n}")
        return cls(n, (s.value for s in strings))

    @classmethod
    def full(cls, n: int) -> "StringSet":
        return cls(n, range(1 << n))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[BitString]:
        for v in self.sorted_values():
            yield BitString(self.n, v)

    def __contains__(self, item: object) -> bool:
        if isinstance(item, str):
            item = BitString.parse(item)
        if isinstance(item, BitString):
            return item.n == self.n and item.value in self.values
        return item in self.values

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StringSet):
            return NotImplemented
        return self.n == other.n and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.n, self.values))

    def __repr__(self) -> str:
        return f"StringSet({self.n}, {self.words()!r})"

    def sorted_values(self) -> list[int]:
        """Values in text-lexicographic order of their words."""
        return sorted(self.values, key=lambda v: lex_key(v, self.n))

    def words(self) -> list[str]:
        return [bits_to_text(v, self.n) for v in self.sorted_values()]


@dataclass(frozen=True)
class PositionPerm:
    """A permutation of positions; ``images[i]`` is the image of index ``i``.

    Indices are 0-based internally.  Constructors taking positions
    (``swap``, ``cycle``, ``from_one_line``) use 1-based positions.
    """

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a bijection: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "PositionPerm":
        return cls(tuple(range(n)))

    @classmethod
    def swap(cls, n: int, i: int, j: int) -> "PositionPerm":
        img = list(range(n))
        img[i - 1], img[j - 1] = img[j - 1], img[i - 1]
        return cls(tuple(img))

    @classmethod
    def cycle(cls, n: int, positions: Sequence[int]) -> "PositionPerm":
        """The cycle p1 -> p2 -> ... -> pk -> p1."""
        img = list(range(n))
        for a, b in zip(positions, list(positions[1:]) + [positions[0]]):
            img[a - 1] = b - 1
        return cls(tuple(img))

    @classmethod
    def from_one_line(cls, text: str) -> "PositionPerm":
        return cls(tuple(int(tok) - 1 for tok in text.split()))

    def one_line(self) -> str:
        return " ".join(str(i + 1) for i in self.images)

    def __str__(self) -> str:
        return self.one_line()

    def __call__(self, k: int) -> int:
        return self.images[k]

    def __mul__(self, other: "PositionPerm") -> "PositionPerm":
        """Composition: ``(self * other)(k) == self(other(k))``."""
        if self.n != other.n:
            raise DimensionError("degree mismatch")
        return PositionPerm(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "PositionPerm":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return PositionPerm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def apply_value(self, v: int) -> int:
        """Move bit ``i`` of the packed word to bit ``images[i]``."""
        out = 0
        for i, j in enumerate(self.images):
            if v >> i & 1:
                out |= 1 << j
        return out

    def apply_set(self, positions: Iterable[int]) -> frozenset[int]:
        return frozenset(self.images[k] for k in positions)


@dataclass(frozen=True)
class AutPair:
    """Hypercube automorphism ``v -> perm(v) XOR word``."""

    perm: PositionPerm
    word: BitString

    def __post_init__(self) -> None:
        if self.perm.n != self.word.n:
            raise DimensionError("word length must equal permutation degree")

    @property
    def n(self) -> int:
        return self.perm.n

    def apply_value(self, v: int) -> int:
        return self.perm.apply_value(v) ^ self.word.value


def hamming_distance(u: BitString | str, v: BitString | str) -> int:
    u, v = as_bitstring(u), as_bitstring(v)
    if u.n != v.n:
        raise DimensionError(f"lengths differ: {u.n} vs {v.n}")
    return (u.value ^ v.value).bit_count()


@dataclass(frozen=True)
class Hypercube:
    n: int
    vertices: tuple[int, ...]
    edges: frozenset[frozenset[int]]

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)


def hypercube(n: int) -> Hypercube:
    _check_dim(n)
    vertices = tuple(range(1 << n))
    edges = frozenset(
        frozenset((v, v | 1 << i)) for v in vertices for i in range(n) if not v >> i & 1
    )
    return Hypercube(n, vertices, edges)


def apply_position_perm(perm: PositionPerm, v: BitString | str) -> BitString:
    v = as_bitstring(v)
    if perm.n != v.n:
        raise DimensionError(f"permutation degree {perm.n} vs word length {v.n}")
    return BitString(v.n, perm.apply_value(v.value))


def apply_aut(sigma: AutPair, v: BitString | str) -> BitString:
    v = as_bitstring(v)
    if sigma.n != v.n:
        raise DimensionError(f"automorphism degree {sigma.n} vs word length {v.n}")
    return BitString(v.n, sigma.apply_value(v.value))


def is_vertex_automorphism(mapping: Sequence[int], n: int) -> bool:
    """True iff the vertex map ``v -> mapping[v]`` is an automorphism of H_n."""
    if len(mapping) != 1 << n or sorted(mapping) != list(range(1 << n)):
        return False
    for v in range(1 << n):
        mv = mapping[v]
        for i in range(n):
            if not v >> i & 1 and (mv ^ mapping[v | 1 << i]).bit_count() != 1:
                return False
    return True


def is_hypercube_automorphism(sigma: AutPair, n: int) -> bool:
    if sigma.n != n:
        raise DimensionError(f"automorphism degree {sigma.n} vs n={n}")
    return is_vertex_automorphism([sigma.apply_value(v) for v in range(1 << n)], n)


def all_aut_pairs(n: int) -> Iterator[AutPair]:
    """Every (perm, word) pair for H_n, n! * 2^n of them."""
    for images in itertools.permutations(range(n)):
        perm = PositionPerm(images)
        for w in range(1 << n):
            yield AutPair(perm, BitString(n, w))
