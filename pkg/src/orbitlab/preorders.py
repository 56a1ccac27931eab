"""Ordered partitions of {0,1}^n: generators, validation, classification and file I/O."""
from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import STRUCTURE_CAP, DimensionError, StringSet, bits_to_text, lex_key, text_to_bits
from .partitions import (
    Partition,
    coarsest_supporting_partition,
    intersect_all,
    singleton_positions,
)

FAMILIES = ("hamming", "lex-block", "random-block", "singleton")


class InstanceFormatError(ValueError):
    """A serialized ordered partition could not be read."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class OrderedPartition:
    """Colour classes (C_1, ..., C_m) in order.

    Construction only checks that all classes share one dimension; cover,
    disjointness and class-size bounds are reported by :func:`validate`.
    """

    n: int
    classes: tuple[StringSet, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", tuple(self.classes))
        for idx, cls in enumerate(self.classes):
            if cls.n != self.n:
                raise DimensionError(f"class {idx + 1} has length {cls.n}, expected {self.n}")

    @classmethod
    def from_words(cls, classes: Iterable[Iterable[str]]) -> "OrderedPartition":
        sets = [StringSet.of(words) for words in classes]
        if not sets:
            raise ValueError("no classes")
        return cls(sets[0].n, tuple(sets))

    def __len__(self) -> int:
        return len(self.classes)

    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def to_text(self) -> str:
        return "".join(" ".join(c.words()) + "\n" for c in self.classes)

    def to_json(self) -> dict:
        return {"n": self.n, "classes": [c.words() for c in self.classes]}


def _lex_strings(n: int) -> list[int]:
    return sorted(range(1 << n), key=lambda v: lex_key(v, n))


def _check_generator(n: int) -> None:
    if not 1 <= n <= STRUCTURE_CAP:
        raise ValueError(f"n must be in 1..{STRUCTURE_CAP}, got {n}")


def _blocks(n: int, order: Sequence[int], size: int) -> OrderedPartition:
    classes = [StringSet(n, order[i:i + size]) for i in range(0, len(order), size)]
    return OrderedPartition(n, tuple(classes))


def hamming_preorder(n: int) -> OrderedPartition:
    """Classes by Hamming weight 0, 1, ..., n."""
    _check_generator(n)
    by_weight: list[list[int]] = [[] for _ in range(n + 1)]
    for v in range(1 << n):
        by_weight[v.bit_count()].append(v)
    return OrderedPartition(n, tuple(StringSet(n, vs) for vs in by_weight))


def _block_size(n: int, c: int) -> int:
    size = c * n
    if not 1 <= size <= 1 << n:
        raise ValueError(f"block size c*n = {size} must lie in 1..2^n")
    return size


def lex_block_preorder(n: int, c: int = 1) -> OrderedPartition:
    """Consecutive blocks of c*n words in lexicographic order; the last may be shorter."""
    _check_generator(n)
    return _blocks(n, _lex_strings(n), _block_size(n, c))


def random_block_preorder(n: int, c: int = 1, seed: int = 0) -> OrderedPartition:
    """A seeded uniform shuffle of {0,1}^n cut into blocks of c*n."""
    _check_generator(n)
    size = _block_size(n, c)
    order = _lex_strings(n)
    random.Random(seed).shuffle(order)
    return _blocks(n, order, size)


def singleton_preorder(n: int) -> OrderedPartition:
    """Every word in its own class, lexicographic order."""
    _check_generator(n)
    return _blocks(n, _lex_strings(n), 1)


def generate(family: str, n: int, c: int = 1, seed: int = 0) -> OrderedPartition:
    if family == "hamming":
        return hamming_preorder(n)
    if family == "lex-block":
        return lex_block_preorder(n, c)
    if family == "random-block":
        return random_block_preorder(n, c, seed)
    if family == "singleton":
        return singleton_preorder(n)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def random_ordered_partition(n: int, rng: random.Random, max_classes: int | None = None) -> OrderedPartition:
    """A shuffled {0,1}^n cut at random points."""
    order = list(range(1 << n))
    rng.shuffle(order)
    m = rng.randint(1, min(max_classes or len(order), len(order)))
    cuts = sorted(rng.sample(range(1, len(order)), m - 1)) if m > 1 else []
    bounds = [0, *cuts, len(order)]
    return OrderedPartition(n, tuple(StringSet(n, order[a:b]) for a, b in zip(bounds, bounds[1:])))


def random_string_set(n: int, rng: random.Random) -> StringSet:
    """A non-empty random subset of {0,1}^n, biased towards sets with symmetry.

    Three shapes are mixed: plain random subsets, unions of orbits under a
    random Young subgroup (these have non-trivial supports), and small sets.
    """
    universe = 1 << n
    kind = rng.randrange(3)
    if kind == 0:
        size = rng.randint(1, universe)
        return StringSet(n, rng.sample(range(universe), size))
    if kind == 1:
        labels = [rng.randrange(max(1, n // 2) + 1) for _ in range(n)]
        blocks: dict[int, list[int]] = {}
        for k, lab in enumerate(labels):
            blocks.setdefault(lab, []).append(k)
        # orbit of v under the block permutations = words with the same per-block weights
        def signature(v: int) -> tuple[int, ...]:
            return tuple(sum(v >> k & 1 for k in b) for b in blocks.values())

        sigs = sorted({signature(v) for v in range(universe)})
        chosen = set(rng.sample(sigs, rng.randint(1, len(sigs))))
        return StringSet(n, (v for v in range(universe) if signature(v) in chosen))
    size = rng.randint(1, min(universe, 2 * n))
    return StringSet(n, rng.sample(range(universe), size))


@dataclass
class ValidationReport:
    n: int
    c: float
    bound: float
    cover_ok: bool
    disjoint_ok: bool
    nonempty_ok: bool
    size_ok: bool
    max_class_size: int
    missing: list[str] = field(default_factory=list)
    repeated: list[str] = field(default_factory=list)
    oversized: list[int] = field(default_factory=list)

    @property
    def partition_ok(self) -> bool:
        """Cover, disjointness and non-empty classes; the size bound is separate."""
        return self.cover_ok and self.disjoint_ok and self.nonempty_ok

    @property
    def ok(self) -> bool:
        return self.partition_ok and self.size_ok

    def failures(self) -> list[str]:
        out = []
        if not self.cover_ok:
            out.append(f"cover: {len(self.missing)} word(s) missing, e.g. {self.missing[:3]}")
        if not self.disjoint_ok:
            out.append(f"disjoint: {len(self.repeated)} word(s) in several classes, e.g. {self.repeated[:3]}")
        if not self.nonempty_ok:
            out.append("nonempty: some class is empty")
        if not self.size_ok:
            out.append(f"size: classes {[i + 1 for i in self.oversized]} exceed c*n = {self.bound:g}")
        return out


def validate(partition: OrderedPartition, c: float | Fraction = 1) -> ValidationReport:
    n = partition.n
    seen: dict[int, int] = {}
    for cls in partition.classes:
        for v in cls.values:
            seen[v] = seen.get(v, 0) + 1
    missing = [bits_to_text(v, n) for v in _lex_strings(n) if v not in seen]
    repeated = [bits_to_text(v, n) for v in _lex_strings(n) if seen.get(v, 0) > 1]
    bound = c * n
    sizes = partition.class_sizes()
    oversized = [i for i, s in enumerate(sizes) if s > bound]
    return ValidationReport(
        n=n,
        c=float(c),
        bound=float(bound),
        cover_ok=not missing,
        disjoint_ok=not repeated,
        nonempty_ok=all(sizes),
        size_ok=not oversized,
        max_class_size=max(sizes, default=0),
        missing=missing,
        repeated=repeated,
        oversized=oversized,
    )


@dataclass
class CaseReport:
    n: int
    b_class_index: int
    sp_size: int
    singleton_count_global: int
    singleton_count_b: int
    max_class_size: int
    case_tag: str
    support_threshold: float
    singleton_threshold: float
    supports: list[list[list[int]]]

    def to_json(self) -> dict:
        return asdict(self)


def class_supports(partition: OrderedPartition) -> list[Partition]:
    return [coarsest_supporting_partition(c) for c in partition.classes]


def b_class_index(supports: Sequence[Partition]) -> int:
    """Class whose support has the most parts; lowest index wins ties."""
    best = 0
    for i, sp in enumerate(supports):
        if len(sp) > len(supports[best]):
            best = i
    return best


def global_singletons(partition: OrderedPartition, supports: Sequence[Partition] | None = None) -> frozenset[int]:
    """Singleton positions of the intersection of every class support."""
    sps = class_supports(partition) if supports is None else supports
    return singleton_positions(intersect_all(sps, partition.n))


def classify(partition: OrderedPartition, support_fraction: float = 0.5,
             singleton_fraction: float = 0.5) -> CaseReport:
    """Locate B_n and tag the case split with finite-n threshold proxies.

    ``sublinear-support`` when |SP(B_n)| <= support_fraction * n, otherwise
    ``linear-support-few-singletons`` when the singleton parts of SP(B_n)
    number at most singleton_fraction * n, else
    ``linear-support-many-singletons``.
    """
    n = partition.n
    if n > STRUCTURE_CAP:
        raise ValueError(f"n={n} exceeds structure cap {STRUCTURE_CAP}")
    if not partition.classes:
        raise ValueError("no classes")
    sps = class_supports(partition)
    b = b_class_index(sps)
    sp_b = sps[b]
    s_b = len(singleton_positions(sp_b))
    s_global = len(global_singletons(partition, sps))
    sup_t = support_fraction * n
    sing_t = singleton_fraction * n
    if len(sp_b) <= sup_t:
        tag = "sublinear-support"
    elif s_b <= sing_t:
        tag = "linear-support-few-singletons"
    else:
        tag = "linear-support-many-singletons"
    return CaseReport(
        n=n,
        b_class_index=b,
        sp_size=len(sp_b),
        singleton_count_global=s_global,
        singleton_count_b=s_b,
        max_class_size=max(partition.class_sizes()),
        case_tag=tag,
        support_threshold=sup_t,
        singleton_threshold=sing_t,
        supports=[sp.to_json() for sp in sps],
    )


def parse_instance(text: str) -> OrderedPartition:
    """Read the line format (one class per line) or the JSON form."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
        try:
            part = OrderedPartition.from_words(data["classes"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceFormatError(f"bad JSON instance: {exc}") from None
        if "n" in data and data["n"] != part.n:
            raise InstanceFormatError(f"declared n={data['n']} but words have length {part.n}")
        return part
    classes: list[StringSet] = []
    n: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        values = []
        for word in line.split():
            if set(word) - {"0", "1"}:
                raise InstanceFormatError(f"{word!r} is not a 0/1 word", lineno)
            if n is None:
                n = len(word)
            elif len(word) != n:
                raise InstanceFormatError(f"{word!r} has length {len(word)}, expected {n}", lineno)
            values.append(text_to_bits(word))
        if len(set(values)) != len(values):
            raise InstanceFormatError("word repeated within a class", lineno)
        classes.append(StringSet(n, values))
    if n is None:
        raise InstanceFormatError("no classes found")
    return OrderedPartition(n, tuple(classes))


def check_partition(partition: OrderedPartition, text: str | None = None) -> None:
    """Raise InstanceFormatError unless the classes partition {0,1}^n."""
    report = validate(partition)
    if report.partition_ok:
        return
    line = None
    if text is not None and report.repeated:
        target = report.repeated[0]
        for lineno, raw in enumerate(text.splitlines(), start=1):
            if target in raw.split("#", 1)[0].split():
                line = lineno
    problems = [f for f in report.failures() if not f.startswith("size")]
    raise InstanceFormatError("; ".join(problems), line)

