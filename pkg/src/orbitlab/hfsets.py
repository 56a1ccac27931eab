"""Hereditarily finite objects over bit-string atoms.

Objects are canonical on construction: children are deduplicated and sorted
(atoms before sets, atoms by packed value, sets by their children's keys),
so structural equality is extensional equality.
"""
from __future__ import annotations

import json
import re
from typing import Iterable, Sequence

from .core import AutPair, BitString, DimensionError, PositionPerm, StringSet, as_bitstring
from .groups import check_cap, enumerate_sym


class HFObject:
    __slots__ = ("atom", "children", "n", "_key")

    def __init__(self, atom: BitString | None = None, children: Iterable["HFObject"] = ()):
        self.atom = atom
        if atom is not None:
            self.children: tuple[HFObject, ...] = ()
            self.n: int | None = atom.n
            self._key: tuple = (0, atom.value)
            return
        uniq = {c._key: c for c in children}
        self.children = tuple(uniq[k] for k in sorted(uniq))
        dims = {c.n for c in self.children if c.n is not None}
        if len(dims) > 1:
            raise DimensionError(f"atoms of different lengths: {sorted(dims)}")
        self.n = dims.pop() if dims else None
        self._key = (1, tuple(sorted(uniq)))

    @classmethod
    def of_atom(cls, word: BitString | str) -> "HFObject":
        return cls(atom=as_bitstring(word))

    @classmethod
    def of_set(cls, items: Iterable["HFObject | BitString | str"]) -> "HFObject":
        return cls(children=(x if isinstance(x, HFObject) else cls.of_atom(x) for x in items))

    @classmethod
    def empty(cls) -> "HFObject":
        return cls(children=())

    @classmethod
    def of_string_set(cls, a: StringSet) -> "HFObject":
        return cls.of_set(a)

    @property
    def is_atom(self) -> bool:
        return self.atom is not None

    @property
    def key(self) -> tuple:
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HFObject):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __lt__(self, other: "HFObject") -> bool:
        return self._key < other._key

    def __len__(self) -> int:
        return len(self.children)

    def __iter__(self):
        return iter(self.children)

    def __contains__(self, item: "HFObject") -> bool:
        return any(c == item for c in self.children)

    def __str__(self) -> str:
        if self.atom is not None:
            return str(self.atom)
        return "{" + ", ".join(str(c) for c in self.children) + "}"

    def __repr__(self) -> str:
        return f"HFObject({self})"

    def to_json(self):
        if self.atom is not None:
            return str(self.atom)
        return [c.to_json() for c in self.children]

    @classmethod
    def from_json(cls, data) -> "HFObject":
        if isinstance(data, str):
            return cls.of_atom(data)
        return cls(children=(cls.from_json(d) for d in data))

    def atoms(self) -> set[int]:
        if self.atom is not None:
            return {self.atom.value}
        out: set[int] = set()
        for c in self.children:
            out |= c.atoms()
        return out


_TOKEN = re.compile(r"\s*([{},]|[01]+)")


def parse_hf(text: str) -> HFObject:
    """Read the bracketed form, e.g. ``"{01, {10, {}}}"``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"unexpected character at {pos} in {text!r}")
        tokens.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def read(i: int) -> tuple[HFObject, int]:
        tok = tokens[i]
        if tok == "{":
            items = []
            i += 1
            if tokens[i] == "}":
                return HFObject.empty(), i + 1
            while True:
                obj, i = read(i)
                items.append(obj)
                if tokens[i] == ",":
                    i += 1
                elif tokens[i] == "}":
                    return HFObject(children=items), i + 1
                else:
                    raise ValueError(f"expected ',' or '}}', got {tokens[i]!r}")
        if tok in ",}":
            raise ValueError(f"unexpected {tok!r}")
        return HFObject.of_atom(tok), i + 1

    try:
        obj, end = read(0)
    except IndexError:
        raise ValueError(f"unexpected end of input in {text!r}") from None
    if end != len(tokens):
        raise ValueError("trailing input after HF object")
    return obj


def dumps_json(x: HFObject) -> str:
    return json.dumps(x.to_json())


def transitive_closure(x: HFObject) -> set[HFObject]:
    """Members of the least transitive set containing ``x`` (x included)."""
    seen: set[HFObject] = set()
    stack = [x]
    while stack:
        y = stack.pop()
        if y in seen:
            continue
        seen.add(y)
        stack.extend(y.children)
    return seen


def transitive_closure_size(x: HFObject) -> int:
    return len(transitive_closure(x))


def _map_atoms(x: HFObject, f, memo: dict) -> HFObject:
    hit = memo.get(x._key)
    if hit is not None:
        return hit
    if x.atom is not None:
        out = HFObject(atom=BitString(x.atom.n, f(x.atom.value)))
    else:
        out = HFObject(children=[_map_atoms(c, f, memo) for c in x.children])
    memo[x._key] = out
    return out


def _degree_check(x: HFObject, n: int) -> None:
    if x.n is not None and x.n != n:
        raise DimensionError(f"object atoms have length {x.n}, action degree is {n}")


def apply_perm_hf(perm: PositionPerm, x: HFObject) -> HFObject:
    _degree_check(x, perm.n)
    return _map_atoms(x, perm.apply_value, {})


def apply_aut_hf(sigma: AutPair, x: HFObject) -> HFObject:
    _degree_check(x, sigma.n)
    return _map_atoms(x, sigma.apply_value, {})


def encode_ordered_partition(partition) -> HFObject:
    """Nested form {C_1, {C_2, {..., {C_m, {}}}}}; the innermost tail is the empty set."""
    classes = list(partition.classes)
    if not classes:
        raise ValueError("cannot encode an empty ordered partition")
    tail = HFObject.empty()
    for cls in reversed(classes):
        tail = HFObject.of_set([HFObject.of_string_set(cls), tail])
    return tail


def _is_class(x: HFObject) -> bool:
    return not x.is_atom and bool(x.children) and all(c.is_atom for c in x.children)


def decode_ordered_partition(x: HFObject) -> list[StringSet]:
    """Inverse of the nested encoding."""
    classes = []
    while x.children:
        if len(x.children) != 2:
            raise ValueError("each level must hold a class and a tail")
        a, b = x.children
        cls, tail = (a, b) if _is_class(a) else (b, a)
        if not _is_class(cls):
            raise ValueError("level without a class of atoms")
        classes.append(StringSet(cls.n, (c.atom.value for c in cls.children)))
        x = tail
    return classes


def _images(x: HFObject, n: int, full_aut: bool, cap: int | None):
    check_cap(n, cap)
    _degree_check(x, n)
    for perm in enumerate_sym(n, cap):
        if full_aut:
            for w in range(1 << n):
                yield apply_aut_hf(AutPair(perm, BitString(n, w)), x)
        else:
            yield apply_perm_hf(perm, x)


def is_symmetric(x: HFObject, n: int, full_aut: bool = False, cap: int | None = None) -> bool:
    """True iff every permutation (or every (perm, word) pair) fixes ``x``."""
    return all(y == x for y in _images(x, n, full_aut, cap))


def orbit_hf(x: HFObject, n: int, full_aut: bool = False, cap: int | None = None) -> int:
    return len(set(_images(x, n, full_aut, cap)))


def stabilizer_hf(x: HFObject, n: int, cap: int | None = None) -> list[PositionPerm]:
    check_cap(n, cap)
    _degree_check(x, n)
    return [p for p in enumerate_sym(n, cap) if apply_perm_hf(p, x) == x]


def evaluate_polynomial(coeffs: Sequence[int], m: int) -> int:
    """``coeffs[i]`` is the coefficient of m**i."""
    return sum(c * m**i for i, c in enumerate(coeffs))


def is_p_bounded(x: HFObject, coeffs: Sequence[int], universe_size: int) -> bool:
    return transitive_closure_size(x) <= evaluate_polynomial(coeffs, universe_size)

