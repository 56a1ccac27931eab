import random

import pytest

from orbitlab.core import AutPair, BitString, DimensionError, PositionPerm, StringSet
from orbitlab.groups import orbit_size_ordered_partition, stabilizer_of_ordered_partition
from orbitlab.hfsets import (
    HFObject,
    apply_aut_hf,
    apply_perm_hf,
    decode_ordered_partition,
    encode_ordered_partition,
    evaluate_polynomial,
    is_p_bounded,
    is_symmetric,
    orbit_hf,
    parse_hf,
    stabilizer_hf,
    transitive_closure_size,
)
from orbitlab.preorders import OrderedPartition, hamming_preorder, lex_block_preorder, random_ordered_partition

A = HFObject.of_atom


def OP(*classes):
    return OrderedPartition.from_words([c.split() for c in classes])


def test_tc_examples():
    assert transitive_closure_size(A("01")) == 1
    assert transitive_closure_size(HFObject.empty()) == 1
    x = HFObject.of_set([A("01"), HFObject.of_set([A("01"), A("10")])])
    assert transitive_closure_size(x) == 4


def test_canonical_form():
    x = parse_hf("{10, {01, 10}, 01, 01}")
    assert str(x) == "{10, 01, {10, 01}}"
    assert x == parse_hf(str(x)) == HFObject.from_json(x.to_json())
    assert len(x) == 3
    with pytest.raises(DimensionError):
        HFObject.of_set(["01", "011"])
    with pytest.raises(ValueError):
        parse_hf("{01,")


def test_perm_action_examples():
    sw = PositionPerm.swap(2, 1, 2)
    x = parse_hf("{01, {10}}")
    assert apply_perm_hf(PositionPerm.identity(2), x) == x
    assert apply_perm_hf(sw, A("01")) == A("10")
    assert apply_perm_hf(sw, x) == parse_hf("{10, {01}}")
    with pytest.raises(DimensionError):
        apply_perm_hf(PositionPerm.identity(3), x)


def test_encoding_examples():
    single = OP("00 01 10 11")
    assert encode_ordered_partition(single) == parse_hf("{{00, 01, 10, 11}, {}}")
    two = OP("00 11", "01 10")
    assert encode_ordered_partition(two) == parse_hf("{{00, 11}, {{01, 10}, {}}}")
    assert {p.images for p in stabilizer_hf(encode_ordered_partition(two), 2)} == \
        stabilizer_of_ordered_partition(two).as_set()
    assert decode_ordered_partition(encode_ordered_partition(two)) == list(two.classes)


def test_symmetry_examples():
    assert is_symmetric(HFObject.of_string_set(StringSet.full(3)), 3)
    assert is_symmetric(HFObject.of_string_set(StringSet.full(2)), 2, full_aut=True)
    assert not is_symmetric(A("01"), 2)
    for n in range(1, 7):
        assert is_symmetric(encode_ordered_partition(hamming_preorder(n)), n)
    assert not is_symmetric(encode_ordered_partition(hamming_preorder(3)), 3, full_aut=True)


def test_orbit_examples():
    assert orbit_hf(encode_ordered_partition(hamming_preorder(4)), 4) == 1
    assert orbit_hf(A("01"), 2) == 2
    assert orbit_hf(encode_ordered_partition(OP("01", "10", "00 11")), 2) == 2


def test_p_bounded_examples():
    assert is_p_bounded(A("01"), [0, 1], 4)
    x = HFObject.of_set([A("01"), HFObject.of_set([A("01"), A("10")])])
    assert transitive_closure_size(x) == 4
    y = HFObject.of_set([x])
    assert transitive_closure_size(y) == 5 and not is_p_bounded(y, [1], 100)
    enc = encode_ordered_partition(lex_block_preorder(4, 1))
    # 16 atoms, 4 classes, 4 tails plus the empty set, the outer object among the tails
    assert transitive_closure_size(enc) == 16 + 4 + 4 + 1
    assert is_p_bounded(enc, [0, 0, 1], 16)
    assert evaluate_polynomial([1, 2, 3], 2) == 17


def test_action_homomorphism_and_tc_invariance():
    rng = random.Random(4)

    def rand_obj(n, depth):
        if depth == 0 or rng.random() < 0.3:
            return A(BitString(n, rng.randrange(1 << n)))
        return HFObject.of_set(rand_obj(n, depth - 1) for _ in range(rng.randint(0, 3)))

    for _ in range(60):
        n = rng.randint(1, 5)
        x = rand_obj(n, 4)
        p = PositionPerm(tuple(rng.sample(range(n), n)))
        q = PositionPerm(tuple(rng.sample(range(n), n)))
        assert apply_perm_hf(p * q, x) == apply_perm_hf(p, apply_perm_hf(q, x))
        assert transitive_closure_size(apply_perm_hf(p, x)) == transitive_closure_size(x)
        w = BitString(n, rng.randrange(1 << n))
        s = AutPair(p, w)
        assert transitive_closure_size(apply_aut_hf(s, x)) == transitive_closure_size(x)
        assert HFObject(children=x.children) == x if not x.is_atom else True


def test_encoding_orbit_transfer_small():
    rng = random.Random(9)
    for _ in range(10):
        n = rng.randint(1, 4)
        part = random_ordered_partition(n, rng)
        assert orbit_hf(encode_ordered_partition(part), n) == orbit_size_ordered_partition(part)
