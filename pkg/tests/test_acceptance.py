"""Acceptance criteria 1-10.  Every test prints one PASS/FAIL line; all comparisons are exact."""
import math
import random
import subprocess
import sys
import time

import pytest

from conftest import ACCEPTANCE_LINES
from orbitlab.core import StringSet
from orbitlab.groups import (
    orbit_count_ordered_partition,
    stabilizer_of_ordered_partition,
    supports_of,
    induced_theta,
)
from orbitlab.hfsets import encode_ordered_partition, orbit_hf
from orbitlab.lemmas import build_an, stab_bound_report
from orbitlab.partitions import coarsest_supporting_partition, intersect_all, string_partition
from orbitlab.preorders import generate, hamming_preorder, random_ordered_partition, random_string_set
import oracles


def record(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_orbit_stabiliser():
    rng = random.Random(1001)
    start = time.perf_counter()
    bad = 0
    for n in range(3, 8):
        for _ in range(50):
            part = random_ordered_partition(n, rng)
            orbit = orbit_count_ordered_partition(part)
            stab = stabilizer_of_ordered_partition(part).order
            bad += orbit * stab != math.factorial(n)
    elapsed = time.perf_counter() - start
    record(1, bad == 0 and elapsed <= 120,
           f"250 instances n=3..7, {bad} mismatches, {elapsed:.1f}s (limit 120s)")


def _criterion_2_3_instances():
    rng = random.Random(1002)
    sets = [random_string_set(rng.randint(1, 5), rng) for _ in range(200)]
    sets += [StringSet(n, [v]) for n in range(1, 6) for v in range(1 << n)]
    return sets


def test_criterion_2_coarsest_support():
    start = time.perf_counter()
    cache: dict = {}
    bad = 0
    instances = _criterion_2_3_instances()
    for a in instances:
        top, _ = oracles.coarsest_support(a.words(), a.n, cache)
        bad += oracles.canon(coarsest_supporting_partition(a).parts) != top
    elapsed = time.perf_counter() - start
    record(2, bad == 0 and elapsed <= 60,
           f"{len(instances)} sets n<=5 vs all-partitions oracle, {bad} mismatches, {elapsed:.1f}s (limit 60s)")


def test_criterion_3_sandwich():
    bad = 0
    instances = _criterion_2_3_instances()
    for a in instances:
        sp = coarsest_supporting_partition(a)
        stab = oracles.stab_words(a.words(), a.n)
        inner = oracles.pointwise_stab(sp.parts, a.n)
        outer = oracles.setwise_stab(sp.parts, a.n)
        bad += not (inner <= stab <= outer)
    record(3, bad == 0, f"{len(instances)} sets, {bad} containment violations")


def test_criterion_4_single_string():
    bad = total = 0
    for n in range(1, 7):
        for word in oracles.all_words(n):
            a = StringSet.of([word])
            zeros = frozenset(k for k, ch in enumerate(word) if ch == "0")
            ones = frozenset(k for k, ch in enumerate(word) if ch == "1")
            expected = oracles.canon([b for b in (zeros, ones) if b])
            got = coarsest_supporting_partition(a)
            bad += oracles.canon(got.parts) != expected or got != string_partition(min(a.values), n)
            total += 1
    record(4, bad == 0, f"all {total} strings n<=6, {bad} mismatches")


def test_criterion_5_theta_uniqueness():
    rng = random.Random(1005)
    bad = realizable = 0
    for _ in range(100):
        n = rng.randint(2, 6)
        sets = [random_string_set(n, rng) for _ in range(rng.randint(1, 3))]
        sps = [sp.parts for sp in supports_of(sets)]
        meet = sps[0]
        for sp in sps[1:]:
            meet = oracles.meet(meet, sp, n)
        seen: dict = {}
        for perm in oracles.perms(n):
            maps = [oracles.induced_part_map(perm, sp) for sp in sps]
            if any(m is None for m in maps):
                continue
            key = tuple(tuple(sorted(m.items(), key=lambda kv: min(kv[0]))) for m in maps)
            theta = oracles.induced_part_map(perm, meet)
            if theta is None or seen.setdefault(key, theta) != theta:
                bad += 1
        realizable += len(seen)
        # the library's forced theta must agree with what every realiser does
        lib_sps = supports_of(sets)
        final = intersect_all(lib_sps, n)
        for key, theta in seen.items():
            sigma = tuple(
                tuple(sp.index_of(dict(m)[part]) for part in sp.parts)
                for sp, m in zip(lib_sps, key)
            )
            forced = induced_theta(sigma, sets)
            expected = tuple(final.index_of(theta[part]) for part in final.parts)
            bad += forced != expected
    record(5, bad == 0, f"100 families, {realizable} realisable tuples, {bad} violations")


def test_criterion_6_an_construction():
    rng = random.Random(1006)
    bad = nontrivial = 0
    for i in range(100):
        n = rng.randint(4, 7)
        if i % 2:
            b = random_string_set(n, rng)
        else:
            b = StringSet(n, rng.sample(range(1 << n), rng.randint(1, 2 * n)))
        t = build_an(b)
        chosen = [str(x) for x in t.chosen_set()]
        nontrivial += bool(chosen)
        ok = 2 * len(chosen) <= len(t.singletons)
        ok &= all(x - y >= 2 for x, y in zip(t.phi_values, t.phi_values[1:]))
        ok &= oracles.an_conditions_hold(b.words(), chosen, set(t.singletons), n)
        bad += not ok
    record(6, bad == 0, f"100 sets n=4..7 ({nontrivial} with non-empty A_n), {bad} violations")


def test_criterion_7_bound_soundness():
    rng = random.Random(1007)
    instances: list = []
    for _ in range(120):
        instances.append(random_ordered_partition(rng.randint(2, 7), rng))
    for family in ("lex-block", "random-block", "hamming", "singleton"):
        for n in range(3, 9):
            instances.append(generate(family, n, c=1, seed=n))
    for _ in range(120):
        instances.append(random_string_set(rng.randint(2, 8), rng))
    compared = flagged = 0
    violations = []
    for inst in instances:
        rep = stab_bound_report(inst)
        for key, e in rep.bounds.items():
            if e.exact is None:
                continue
            if not e.hypotheses_ok:
                flagged += 1
                continue
            compared += 1
            if e.exact > e.value:
                violations.append((key, e.exact, e.value))
    record(7, not violations,
           f"{len(instances)} instances, {compared} exact-vs-bound comparisons under hypotheses "
           f"({flagged} flagged and skipped), {len(violations)} violations")


def test_criterion_8_encoding_orbit():
    rng = random.Random(1008)
    bad = 0
    for _ in range(50):
        n = rng.randint(2, 6)
        part = random_ordered_partition(n, rng)
        bad += orbit_hf(encode_ordered_partition(part), n) != orbit_count_ordered_partition(part)
    record(8, bad == 0, f"50 ordered partitions n<=6, {bad} mismatches")


def test_criterion_9_hamming_baseline():
    bad = 0
    timing = 0.0
    for n in range(1, 9):
        start = time.perf_counter()
        part = hamming_preorder(n)
        stab = stabilizer_of_ordered_partition(part).order
        orbit = orbit_count_ordered_partition(part)
        timing = time.perf_counter() - start
        bad += stab != math.factorial(n) or orbit != 1
    record(9, bad == 0 and timing <= 60, f"n=1..8, {bad} mismatches, n=8 took {timing:.1f}s (limit 60s)")


CLI_RUNS = [
    ["gen", "--family", "hamming", "--n", "4"],
    ["gen", "--family", "lex-block", "--n", "5", "--format", "json"],
    ["gen", "--family", "random-block", "--n", "5", "--seed", "7"],
    ["analyze", "{inst}", "--format", "json"],
    ["analyze", "{inst}"],
    ["orbit", "{inst}", "--format", "json"],
    ["report", "--family", "lex-block", "--n", "3..7", "--format", "csv"],
    ["report", "--family", "random-block", "--n", "3..6", "--format", "json", "--seed", "3"],
    ["verify", "{inst}"],
]


def test_criterion_10_determinism(tmp_path):
    inst = tmp_path / "inst.txt"
    inst.write_text(generate("random-block", 6, seed=11).to_text())
    differing = []
    for argv in CLI_RUNS:
        argv = [a.replace("{inst}", str(inst)) for a in argv]
        outputs = []
        for jobs in ("1", "1", "3", "3"):
            res = subprocess.run([sys.executable, "-m", "orbitlab.cli", *argv, "--jobs", jobs],
                                 capture_output=True, check=False)
            assert res.returncode == 0, res.stderr.decode()
            outputs.append(res.stdout)
        if len(set(outputs)) != 1:
            differing.append(" ".join(argv[:1]))
    record(10, not differing,
           f"{len(CLI_RUNS)} commands x 2 reruns x jobs 1 and 3, differing: {differing or 'none'}")
