"""Exact orbit and stabiliser computation by enumerating Sym_n.

The heavy loops run on numpy arrays of permutations.  Sym_n is split into n
shards by the image of the first position; each shard is an independent pure
computation, so shards can run in worker processes and are merged in shard
order.  Within a shard, and therefore overall, permutations come out in
lexicographic order of their image tuples.
"""
from __future__ import annotations

import itertools
import math
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .core import DimensionError, PositionPerm, StringSet
from .partitions import (
    Partition,
    coarsest_supporting_partition,
    intersect,
    part_images,
)

DEFAULT_CAP = 10
CAP_ENV = "ORBITLAB_CAP"

PartPermTuple = tuple[tuple[int, ...], ...]


class CapExceeded(ValueError):
    """A brute-force request exceeded the enumeration cap."""


def brute_force_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_CAP


def check_cap(n: int, cap: int | None = None) -> None:
    limit = brute_force_cap() if cap is None else cap
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    if n > limit:
        raise CapExceeded(f"n={n} exceeds the brute-force cap {limit}")


def enumerate_sym(n: int, cap: int | None = None) -> Iterator[PositionPerm]:
    """Stream all n! permutations in lexicographic order of their images."""
    check_cap(n, cap)
    for images in itertools.permutations(range(n)):
        yield PositionPerm(images)


def shard_perms(n: int, first: int) -> np.ndarray:
    """All permutations sending index 0 to ``first``, as an (n-1)! x n array."""
    if n == 1:
        return np.zeros((1, 1), dtype=np.int8)
    rest = [k for k in range(n) if k != first]
    count = math.factorial(n - 1)
    tail = np.fromiter(
        itertools.chain.from_iterable(itertools.permutations(rest)),
        dtype=np.int8,
        count=count * (n - 1),
    ).reshape(count, n - 1)
    head = np.full((count, 1), first, dtype=np.int8)
    return np.hstack([head, tail])


def run_shards(fn: Callable, n: int, args: tuple, jobs: int = 1) -> list:
    """Apply ``fn(n, first, *args)`` to every shard and return results in shard order."""
    firsts = range(n)
    if jobs <= 1 or n == 1:
        return [fn(n, first, *args) for first in firsts]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(fn, n, first, *args) for first in firsts]
        return [f.result() for f in futures]


def _label_filter_shard(n: int, first: int, labels: np.ndarray, probes: np.ndarray) -> np.ndarray:
    """Permutations p of the shard with labels[p(v)] == labels[v] for every probe v."""
    perms = shard_perms(n, first)
    pow2 = (1 << np.arange(n, dtype=np.int64))
    for v in probes.tolist():
        if not len(perms):
            break
        ones = [i for i in range(n) if v >> i & 1]
        img = pow2[perms[:, ones]].sum(axis=1) if ones else np.zeros(len(perms), dtype=np.int64)
        perms = perms[labels[img] == labels[v]]
    return perms


def _setwise_mask(perms: np.ndarray, labels: np.ndarray) -> np.ndarray:
    img_labels = labels[perms]
    keep = np.ones(len(perms), dtype=bool)
    sizes = np.bincount(labels)
    reps = []
    for lab in range(len(sizes)):
        members = np.flatnonzero(labels == lab)
        block = img_labels[:, members]
        keep &= (block == block[:, :1]).all(axis=1)
        # a part may only land on a part of the same size
        keep &= sizes[block[:, 0]] == len(members)
        reps.append(block[:, 0])
    if len(reps) > 1:
        rep = np.sort(np.stack(reps, axis=1), axis=1)
        keep &= (np.diff(rep, axis=1) != 0).all(axis=1)
    return keep


def _position_filter_shard(n: int, first: int, labels: np.ndarray, setwise: bool) -> np.ndarray:
    perms = shard_perms(n, first)
    if not setwise:
        return perms[(labels[perms] == labels[None, :]).all(axis=1)]
    return perms[_setwise_mask(perms, labels)]


def _orbit_shard(n: int, first: int, labels: np.ndarray) -> set[bytes]:
    """Distinct image labellings v -> labels[p^-1(v)] over the shard."""
    perms = shard_perms(n, first)
    inv = np.argsort(perms, axis=1)
    values = np.arange(1 << n, dtype=np.int64)
    table = np.zeros((len(perms), 1 << n), dtype=np.int64)
    for i in range(n):
        table |= ((values >> i) & 1)[None, :] << inv[:, i].astype(np.int64)[:, None]
    rows = labels[table]
    return {row.tobytes() for row in rows}


class PermGroup:
    """A permutation group held as an explicit element array (order x n)."""

    def __init__(self, n: int, elements: np.ndarray | Iterable[Sequence[int]], check: bool = False):
        arr = np.asarray(
            elements if isinstance(elements, np.ndarray) else [tuple(e) for e in elements],
            dtype=np.int8,
        ).reshape(-1, n)
        self.n = n
        self._array = arr
        self._set: frozenset[tuple[int, ...]] | None = None
        if check:
            self.check_closure()

    @property
    def order(self) -> int:
        return len(self._array)

    def __len__(self) -> int:
        return self.order

    @property
    def family(self) -> str | None:
        return "sym" if self.order == math.factorial(self.n) else None

    def is_full_symmetric(self) -> bool:
        return self.family == "sym"

    def as_array(self) -> np.ndarray:
        return self._array

    def as_set(self) -> frozenset[tuple[int, ...]]:
        if self._set is None:
            self._set = frozenset(tuple(row) for row in self._array.tolist())
        return self._set

    def __iter__(self) -> Iterator[PositionPerm]:
        for row in self._array.tolist():
            yield PositionPerm(tuple(row))

    def __contains__(self, perm: object) -> bool:
        images = perm.images if isinstance(perm, PositionPerm) else tuple(perm)  # type: ignore[arg-type]
        return tuple(images) in self.as_set()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.n == other.n and self.as_set() == other.as_set()

    def __repr__(self) -> str:
        return f"PermGroup(n={self.n}, order={self.order})"

    def check_closure(self) -> None:
        elems = self.as_set()
        if tuple(range(self.n)) not in elems:
            raise ValueError("group lacks the identity")
        for a in elems:
            for b in elems:
                if tuple(a[j] for j in b) not in elems:
                    raise ValueError("element set is not closed under composition")

    def generators(self) -> list[PositionPerm]:
        """A generating set found by a simple sift."""
        n = self.n
        if self.is_full_symmetric():
            if n == 1:
                return []
            if n == 2:
                return [PositionPerm.swap(2, 1, 2)]
            return [PositionPerm.swap(n, 1, 2), PositionPerm.cycle(n, list(range(1, n + 1)))]
        ident = tuple(range(n))
        closure = {ident}
        gens: list[tuple[int, ...]] = []
        for g in sorted(self.as_set()):
            if g in closure:
                continue
            gens.append(g)
            queue = deque(closure)
            while queue:
                a = queue.popleft()
                for h in gens:
                    c = tuple(h[j] for j in a)
                    if c not in closure:
                        closure.add(c)
                        queue.append(c)
        return [PositionPerm(g) for g in gens]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "order": self.order,
            "generators": [g.one_line() for g in self.generators()],
        }


def full_symmetric_group(n: int, cap: int | None = None) -> PermGroup:
    check_cap(n, cap)
    return PermGroup(n, np.vstack([shard_perms(n, f) for f in range(n)]))


def _labels_for_classes(n: int, classes: Sequence[StringSet]) -> np.ndarray:
    labels = np.full(1 << n, -1, dtype=np.int32)
    for idx, cls in enumerate(classes):
        if cls.n != n:
            raise DimensionError(f"class {idx} has length {cls.n}, expected {n}")
        vals = np.fromiter(cls.values, dtype=np.int64, count=len(cls))
        if (labels[vals] != -1).any():
            raise ValueError("colour classes overlap")
        labels[vals] = idx
    return labels


def stabilizer_of_set(a: StringSet, cap: int | None = None, jobs: int = 1) -> PermGroup:
    """All position permutations mapping ``a`` onto itself."""
    check_cap(a.n, cap)
    labels = np.zeros(1 << a.n, dtype=np.int32)
    probes = np.array(a.sorted_values(), dtype=np.int64)
    labels[probes] = 1
    parts = run_shards(_label_filter_shard, a.n, (labels, probes), jobs)
    return PermGroup(a.n, np.vstack(parts))


def _class_list(partition) -> tuple[int, list[StringSet]]:
    return partition.n, list(partition.classes)


def stabilizer_of_ordered_partition(partition, cap: int | None = None, jobs: int = 1) -> PermGroup:
    """All permutations fixing every colour class setwise (classes keep their order)."""
    n, classes = _class_list(partition)
    check_cap(n, cap)
    labels = _labels_for_classes(n, classes)
    probes = np.flatnonzero(labels >= 0).astype(np.int64)
    parts = run_shards(_label_filter_shard, n, (labels, probes), jobs)
    return PermGroup(n, np.vstack(parts))


def stabilizer_of_partition(p: Partition, setwise: bool = True, cap: int | None = None,
                            jobs: int = 1) -> PermGroup:
    """Setwise (parts permuted among themselves) or pointwise stabiliser of a position partition."""
    check_cap(p.n, cap)
    labels = np.array(p.labels, dtype=np.int32)
    parts = run_shards(_position_filter_shard, p.n, (labels, setwise), jobs)
    return PermGroup(p.n, np.vstack(parts))


def orbit_count_ordered_partition(partition, cap: int | None = None, jobs: int = 1) -> int:
    """Size of the orbit, counted by listing every image directly."""
    n, classes = _class_list(partition)
    check_cap(n, cap)
    labels = _labels_for_classes(n, classes)
    images: set[bytes] = set()
    for shard in run_shards(_orbit_shard, n, (labels,), jobs):
        images |= shard
    return len(images)


def orbit_size_ordered_partition(partition, cap: int | None = None, jobs: int = 1) -> int:
    """n! / |Stab| by the orbit-stabiliser theorem."""
    stab = stabilizer_of_ordered_partition(partition, cap=cap, jobs=jobs)
    return math.factorial(partition.n) // stab.order


def supports_of(sets: Sequence[StringSet]) -> list[Partition]:
    return [coarsest_supporting_partition(a) for a in sets]


def induced_tuple(perm: PositionPerm, supports: Sequence[Partition]) -> PartPermTuple | None:
    """The tuple of part permutations ``perm`` induces, or None if it breaks a support."""
    out = []
    for sp in supports:
        img = part_images(perm.images, sp)
        if img is None:
            return None
        out.append(img)
    return tuple(out)


def _check_degrees(perm_n: int, sets: Sequence[StringSet]) -> None:
    for a in sets:
        if a.n != perm_n:
            raise DimensionError(f"set of length {a.n} vs degree {perm_n}")


def realizes(perm: PositionPerm, sigma: PartPermTuple, sets: Sequence[StringSet]) -> bool:
    """True iff ``perm`` maps each part P of each SP(A_i) onto sigma_i(P)."""
    _check_degrees(perm.n, sets)
    if len(sigma) != len(sets):
        raise ValueError("one part permutation per set is required")
    return induced_tuple(perm, supports_of(sets)) == tuple(tuple(s) for s in sigma)


def realizable_tuples(sets: Sequence[StringSet], cap: int | None = None) -> set[PartPermTuple]:
    """Every tuple of part permutations realised by at least one permutation."""
    if not sets:
        return {()}
    n = sets[0].n
    _check_degrees(n, sets)
    sps = supports_of(sets)
    found: set[PartPermTuple] = set()
    for perm in enumerate_sym(n, cap):
        t = induced_tuple(perm, sps)
        if t is not None:
            found.add(t)
    return found


def _tuple_shard(n: int, first: int, label_rows: np.ndarray) -> set[bytes]:
    perms = shard_perms(n, first)
    keep = np.ones(len(perms), dtype=bool)
    for labels in label_rows:
        keep &= _setwise_mask(perms, labels)
    perms = perms[keep]
    cols = []
    for labels in label_rows:
        reps = [int(np.flatnonzero(labels == lab)[0]) for lab in range(labels.max() + 1)]
        cols.append(labels[perms[:, reps]])
    rows = np.concatenate(cols, axis=1).astype(np.int8)
    return {row.tobytes() for row in rows}


def count_realizable_tuples(sets: Sequence[StringSet], cap: int | None = None, jobs: int = 1) -> int:
    """Vectorised ``len(realizable_tuples(sets))``."""
    if not sets:
        return 1
    n = sets[0].n
    _check_degrees(n, sets)
    check_cap(n, cap)
    label_rows = np.array([sp.labels for sp in supports_of(sets)], dtype=np.int64)
    found: set[bytes] = set()
    for part in run_shards(_tuple_shard, n, (label_rows,), jobs):
        found |= part
    return len(found)


def realizers(sigma: PartPermTuple, sets: Sequence[StringSet], cap: int | None = None) -> list[PositionPerm]:
    n = sets[0].n
    sps = supports_of(sets)
    target = tuple(tuple(s) for s in sigma)
    return [p for p in enumerate_sym(n, cap) if induced_tuple(p, sps) == target]


def intersection_chain(sets: Sequence[StringSet]) -> list[Partition]:
    """SP(A_1), SP(A_1) ⊓ SP(A_2), ... one entry per prefix."""
    sps = supports_of(sets)
    chain = [sps[0]]
    for sp in sps[1:]:
        chain.append(intersect(chain[-1], sp))
    return chain


def induced_theta(sigma: PartPermTuple, sets: Sequence[StringSet]) -> tuple[int, ...] | None:
    """Permutation of the parts of ⊓ SP(A_i) forced on every realiser of ``sigma``.

    Built one set at a time: a part P of the new intersection goes to
    theta'(Q_P) ∩ sigma_{m+1}(Q'_P), where Q_P and Q'_P are the parts of the
    previous intersection and of SP(A_{m+1}) that contain P.  Returns None
    when the images are empty, mis-sized or collide; no permutation can
    realise ``sigma`` then.
    """
    if not sets:
        raise ValueError("need at least one set")
    if len(sigma) != len(sets):
        raise ValueError("one part permutation per set is required")
    sps = supports_of(sets)
    for s, sp in zip(sigma, sps):
        if sorted(s) != list(range(len(sp))):
            raise ValueError(f"{s} is not a permutation of the {len(sp)} parts")
    current = sps[0]
    theta: list[frozenset[int]] = [current.parts[j] for j in sigma[0]]
    if any(len(img) != len(p) for img, p in zip(theta, current.parts)):
        return None
    for sp, s in zip(sps[1:], sigma[1:]):
        refined = intersect(current, sp)
        new_theta = []
        for part in refined.parts:
            k = min(part)
            image = theta[current.labels[k]] & sp.parts[s[sp.labels[k]]]
            if len(image) != len(part):
                return None
            new_theta.append(image)
        if len(set(new_theta)) != len(new_theta):
            return None
        current, theta = refined, new_theta
    try:
        return tuple(current.index_of(img) for img in theta)
    except KeyError:
        return None
