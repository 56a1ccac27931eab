import math
import random

import numpy as np
import pytest

from orbitlab.core import PositionPerm, StringSet
from orbitlab.groups import (
    CapExceeded,
    PermGroup,
    brute_force_cap,
    check_cap,
    count_realizable_tuples,
    enumerate_sym,
    full_symmetric_group,
    induced_theta,
    induced_tuple,
    intersection_chain,
    orbit_count_ordered_partition,
    orbit_size_ordered_partition,
    realizable_tuples,
    realizers,
    realizes,
    stabilizer_of_ordered_partition,
    stabilizer_of_partition,
    stabilizer_of_set,
    supports_of,
)
from orbitlab.partitions import Partition, part_images
from orbitlab.preorders import (
    OrderedPartition,
    hamming_preorder,
    lex_block_preorder,
    random_block_preorder,
    random_ordered_partition,
    random_string_set,
)
import oracles


def S(*words):
    return StringSet.of(words)


def OP(*classes):
    return OrderedPartition.from_words([c.split() for c in classes])


@pytest.mark.parametrize("n,count", [(1, 1), (3, 6), (8, 40320)])
def test_enumerate_sym_counts(n, count):
    perms = list(enumerate_sym(n))
    assert len(perms) == count and len(set(perms)) == count


def test_enumeration_is_lexicographic():
    imgs = [p.images for p in enumerate_sym(4)]
    assert imgs == sorted(imgs)


def test_cap(monkeypatch):
    assert brute_force_cap() == 10
    with pytest.raises(CapExceeded):
        check_cap(11)
    with pytest.raises(CapExceeded):
        next(enumerate_sym(11))
    monkeypatch.setenv("ORBITLAB_CAP", "5")
    assert brute_force_cap() == 5
    with pytest.raises(CapExceeded):
        stabilizer_of_set(StringSet.full(6))
    check_cap(6, cap=6)


def test_stabilizer_of_set_examples():
    assert stabilizer_of_set(StringSet.full(4)).is_full_symmetric
    g = stabilizer_of_set(S("01"))
    assert g.order == 1 and PositionPerm.identity(2) in g
    assert stabilizer_of_set(S("001", "010", "100")).order == 6


def test_stabilizer_of_ordered_partition_examples():
    for n in range(1, 9):
        g = stabilizer_of_ordered_partition(hamming_preorder(n))
        assert g.order == math.factorial(n) and g.family == "sym"
    assert stabilizer_of_ordered_partition(OP("01", "10", "00 11")).order == 1
    assert stabilizer_of_ordered_partition(OP("00 11", "01 10")).order == 2


def test_orbit_size_examples():
    assert orbit_size_ordered_partition(hamming_preorder(5)) == 1
    assert orbit_size_ordered_partition(OP("01", "10", "00 11")) == 2
    lb = lex_block_preorder(5, 1)
    assert orbit_size_ordered_partition(lb) == orbit_count_ordered_partition(lb) == 120


def test_random_block_frozen_orbit():
    p = random_block_preorder(4, 1, seed=7)
    assert stabilizer_of_ordered_partition(p).order == 1
    assert orbit_count_ordered_partition(p) == 24 == orbit_size_ordered_partition(p)


def test_stabilisers_match_oracle():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(1, 5)
        a = random_string_set(n, rng)
        assert stabilizer_of_set(a).as_set() == oracles.stab_words(a.words(), n)
        part = random_ordered_partition(n, rng)
        words = [c.words() for c in part.classes]
        assert stabilizer_of_ordered_partition(part).as_set() == oracles.stab_classes(words, n)
        assert orbit_count_ordered_partition(part) == oracles.orbit_classes(words, n)


def test_partition_stabilisers_match_oracle():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(1, 6)
        labels = [rng.randrange(3) for _ in range(n)]
        p = Partition.from_labels(labels)
        assert stabilizer_of_partition(p, setwise=False).as_set() == oracles.pointwise_stab(p.parts, n)
        assert stabilizer_of_partition(p, setwise=True).as_set() == oracles.setwise_stab(p.parts, n)


def test_parallel_matches_serial():
    part = lex_block_preorder(6, 1)
    a = stabilizer_of_ordered_partition(part, jobs=1)
    b = stabilizer_of_ordered_partition(part, jobs=3)
    assert np.array_equal(a.as_array(), b.as_array())
    assert orbit_count_ordered_partition(part, jobs=2) == orbit_count_ordered_partition(part)


def test_group_basics():
    g = full_symmetric_group(4)
    g.check_closure()
    gens = g.generators()
    assert len(gens) == 2
    data = g.to_json()
    assert data["order"] == 24 and data["n"] == 4
    h = stabilizer_of_set(S("0011"))
    h.check_closure()
    # generated subgroup from the reported generators must be the whole group
    closure = {PositionPerm.identity(4)}
    frontier = list(closure)
    while frontier:
        nxt = []
        for x in frontier:
            for gen in h.generators():
                y = gen * x
                if y not in closure:
                    closure.add(y)
                    nxt.append(y)
        frontier = nxt
    assert {p.images for p in closure} == h.as_set()
    with pytest.raises(ValueError):
        PermGroup(3, [(0, 1, 2), (1, 0, 2), (0, 2, 1)], check=True)


def test_realizes_examples():
    sets = [S("0011")]
    ident = PositionPerm.identity(4)
    assert realizes(ident, ((0, 1),), sets)
    assert realizes(PositionPerm.swap(4, 1, 2), ((0, 1),), sets)
    assert not realizes(PositionPerm.swap(4, 1, 3), ((0, 1),), sets)


def test_realizable_tuples_examples():
    assert realizable_tuples([]) == {()}
    assert count_realizable_tuples([]) == 1
    assert len(realizable_tuples([StringSet.full(4)])) == 1
    pair = [S("0011"), S("0101")]
    # frozen from the oracle's brute force over all 24 permutations
    assert len(realizable_tuples(pair)) == 4 == count_realizable_tuples(pair)


def test_realizable_count_lex_block_frozen():
    p = lex_block_preorder(5, 1)
    assert count_realizable_tuples(list(p.classes[:2])) == 8


def test_vectorised_tuple_count_matches_oracle():
    rng = random.Random(21)
    for _ in range(25):
        n = rng.randint(2, 5)
        sets = [random_string_set(n, rng) for _ in range(rng.randint(1, 3))]
        sps = [sp.parts for sp in supports_of(sets)]
        expected = oracles.realizable_count(sps, n)
        assert len(realizable_tuples(sets)) == expected == count_realizable_tuples(sets, jobs=2)


def test_induced_theta_examples():
    a = [S("0110")]
    sp = supports_of(a)[0]
    for t in realizable_tuples(a):
        assert induced_theta(t, a) == t[0]
    pair = [S("0011"), S("0101")]
    ident = tuple(tuple(range(len(sp))) for sp in supports_of(pair))
    assert induced_theta(ident, pair) == (0, 1, 2, 3)
    swap_both = ((1, 0), (1, 0))
    assert [r.images for r in realizers(swap_both, pair)] == [(3, 2, 1, 0)]
    assert induced_theta(swap_both, pair) == (3, 2, 1, 0)


def test_induced_theta_unrealizable_and_errors():
    sets = [S("0011"), S("0001")]
    sps = supports_of(sets)
    # SP(0001) = {1,2,3}|{4}; swapping its parts is impossible
    assert len(sps[1]) == 2
    assert induced_theta(((0, 1), (1, 0)), sets) is None
    with pytest.raises(ValueError):
        induced_theta(((0, 1),), sets)
    with pytest.raises(ValueError):
        induced_theta(((0, 0), (0, 1)), sets)
    with pytest.raises(ValueError):
        induced_theta((), [])


def test_theta_uniqueness_and_agreement():
    rng = random.Random(8)
    for _ in range(15):
        n = rng.randint(2, 5)
        sets = [random_string_set(n, rng) for _ in range(rng.randint(1, 3))]
        sps = supports_of(sets)
        final = intersection_chain(sets)[-1]
        seen = {}
        for perm in enumerate_sym(n):
            t = induced_tuple(perm, sps)
            if t is None:
                continue
            theta = part_images(perm.images, final)
            assert seen.setdefault(t, theta) == theta
            assert induced_theta(t, sets) == theta


def test_stabilizer_matches_realizer_pathway():
    rng = random.Random(13)
    for _ in range(10):
        n = rng.randint(2, 5)
        a = random_string_set(n, rng)
        via_realizers = set()
        for t in realizable_tuples([a]):
            for perm in realizers(t, [a]):
                if {perm.apply_value(v) for v in a.values} == a.values:
                    via_realizers.add(perm.images)
        assert via_realizers == stabilizer_of_set(a).as_set()


def test_subgroup_chain():
    rng = random.Random(17)
    for _ in range(10):
        n = rng.randint(2, 7)
        part = random_ordered_partition(n, rng)
        stab = stabilizer_of_ordered_partition(part).as_set()
        for cls in part.classes:
            cs = stabilizer_of_set(cls).as_set()
            sp = supports_of([cls])[0]
            assert stab <= cs <= stabilizer_of_partition(sp).as_set()
