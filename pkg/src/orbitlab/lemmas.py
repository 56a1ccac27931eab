"""Executable proof constructions and closed-form stabiliser bounds.

Each bound is evaluated exactly (big integers, or Fractions when the class
size constant is not integral) and paired with the brute-forced quantity it
bounds whenever n is small enough to enumerate.  Hypothesis failures are
flagged on the entry instead of being skipped.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import BitString, DimensionError, PositionPerm, StringSet, as_bitstring, bits_to_text, lex_key
from .groups import (
    brute_force_cap,
    check_cap,
    count_realizable_tuples,
    stabilizer_of_ordered_partition,
    stabilizer_of_partition,
    stabilizer_of_set,
)
from .partitions import (
    Partition,
    coarsest_supporting_partition,
    intersect,
    intersect_all,
    intersect_family,
    singleton_positions,
    string_partition,
)
from .preorders import (
    OrderedPartition,
    b_class_index,
    class_supports,
    generate,
    global_singletons,
    validate,
)

REALIZABLE_CAP = 8


class LemmaViolation(RuntimeError):
    """A construction's guaranteed postcondition failed (an implementation bug)."""


def floor_8log2(n: int) -> int:
    """floor(8 * log2(n)), computed exactly."""
    return (n**8).bit_length() - 1


def below_8log2(count: int, n: int) -> bool:
    """count < 8 * log2(n), exactly."""
    return (1 << count) < n**8


# ---------------------------------------------------------------- J_n


@dataclass
class JnTrace:
    n: int
    indices: list[int]
    increases: list[int]
    part_counts: list[int]
    final: Partition
    singletons: frozenset[int]

    @property
    def steps(self) -> int:
        return len(self.indices)

    def to_json(self) -> dict:
        return {
            "classes": [i + 1 for i in self.indices],
            "increases": self.increases,
            "part_counts": self.part_counts,
            "final": str(self.final),
            "global_singletons": sorted(k + 1 for k in self.singletons),
        }


def build_jn(partition: OrderedPartition) -> JnTrace:
    """Greedily add classes whose support splits the running intersection.

    Stops once every globally singleton position is a singleton of the
    running intersection.  Among classes that split it, the lowest index is
    taken.
    """
    n = partition.n
    sps = class_supports(partition)
    target = global_singletons(partition, sps)
    current = Partition.trivial(n)
    indices: list[int] = []
    increases: list[int] = []
    counts = [len(current)]
    while not target <= singleton_positions(current):
        for i, sp in enumerate(sps):
            if i in indices:
                continue
            refined = intersect(current, sp)
            if len(refined) > len(current):
                indices.append(i)
                increases.append(len(refined) - len(current))
                current = refined
                counts.append(len(current))
                break
        else:
            raise LemmaViolation("no class refines the intersection but singletons remain")
    return JnTrace(n, indices, increases, counts, current, target)


@dataclass(frozen=True)
class GammaBound:
    product: int
    closed_form: int


def jn_gamma_bound(trace: JnTrace, f: int) -> GammaBound:
    """prod (min(k_i + 1, f))! and the closed form (f!)^ceil(n/(f-1)) * 2^n."""
    if f < 2:
        raise ValueError(f"f must be >= 2, got {f}")
    product = math.prod(math.factorial(min(k + 1, f)) for k in trace.increases)
    closed = math.factorial(f) ** -(-trace.n // (f - 1)) * 2**trace.n
    return GammaBound(product, closed)


# ---------------------------------------------------------------- non-singleton positions


@dataclass
class NonsingletonReport:
    n: int
    nonsingleton_count: int
    threshold: float
    holds: bool
    cover_ok: bool
    size_ok: bool

    @property
    def hypotheses_ok(self) -> bool:
        return self.cover_ok and self.size_ok

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "nonsingleton_count": self.nonsingleton_count,
            "threshold_8log2n": round(self.threshold, 12),
            "holds": self.holds,
            "hypotheses_ok": self.hypotheses_ok,
        }


def check_nonsingleton_bound(partition: OrderedPartition, c: float | Fraction = 1) -> NonsingletonReport:
    n = partition.n
    count = n - len(global_singletons(partition))
    v = validate(partition, c)
    return NonsingletonReport(
        n=n,
        nonsingleton_count=count,
        threshold=8 * math.log2(n),
        holds=below_8log2(count, n),
        cover_ok=v.cover_ok,
        size_ok=v.size_ok,
    )


# ---------------------------------------------------------------- A_n


def _constant_on(v: int, positions: Iterable[int]) -> bool:
    return len({v >> k & 1 for k in positions}) <= 1


def _imbalanced_on(v: int, positions: frozenset[int]) -> bool:
    ones = sum(v >> k & 1 for k in positions)
    return ones == 1 or ones == len(positions) - 1


def phi(p: Partition, s: frozenset[int]) -> int:
    """Potential: sum over parts of max(|P ∩ S| - 2, 0)."""
    return sum(max(len(part & s) - 2, 0) for part in p.parts)


@dataclass
class AnTrace:
    n: int
    chosen: list[int]
    phi_values: list[int]
    final: Partition
    singletons: frozenset[int]

    def chosen_set(self) -> StringSet:
        return StringSet(self.n, self.chosen)

    def to_json(self) -> dict:
        return {
            "chosen": [bits_to_text(v, self.n) for v in self.chosen],
            "phi": self.phi_values,
            "final": str(self.final),
            "singletons": sorted(k + 1 for k in self.singletons),
        }


def an_conditions(b: StringSet, chosen: Iterable[int], s: frozenset[int]) -> list[str]:
    """Parts of ⊓A that meet neither of the two closing conditions (empty = all good)."""
    chosen = set(chosen)
    meet = intersect_all((string_partition(v, b.n) for v in sorted(chosen)), b.n)
    big = [part & s for part in meet.parts if len(part & s) > 2]
    rest = [v for v in b.sorted_values() if v not in chosen]
    bad = []
    for ps in big:
        for v in rest:
            if _constant_on(v, ps):
                continue
            others_const = all(_constant_on(v, q) for q in big if q != ps)
            if not (_imbalanced_on(v, ps) and others_const):
                bad.append(f"{bits_to_text(v, b.n)} on {sorted(k + 1 for k in ps)}")
    return bad


def build_an(b: StringSet) -> AnTrace:
    """Pick strings of B until the big singleton blocks are tamed.

    S is the set of singleton positions of SP(B).  Each step looks at the
    parts of the running ⊓A meeting S in more than two positions and adds
    the lexicographically least string that either splits two such parts or
    splits one of them without being imbalanced on it.
    """
    if not b.values:
        raise ValueError("B must be non-empty")
    n = b.n
    s = singleton_positions(coarsest_supporting_partition(b))
    current = Partition.trivial(n)
    chosen: list[int] = []
    phis = [phi(current, s)]
    pool = b.sorted_values()
    while True:
        big = [part & s for part in current.parts if len(part & s) > 2]
        if not big:
            break
        candidates = []
        for v in pool:
            if v in chosen:
                continue
            split = [ps for ps in big if not _constant_on(v, ps)]
            if len(split) >= 2 or any(not _imbalanced_on(v, ps) for ps in split):
                candidates.append(v)
        if not candidates:
            break
        pick = candidates[0]
        chosen.append(pick)
        current = intersect(current, string_partition(pick, n))
        phis.append(phi(current, s))

    trace = AnTrace(n, chosen, phis, current, s)
    drops = [a - c for a, c in zip(phis, phis[1:])]
    if any(d < 2 for d in drops):
        raise LemmaViolation(f"potential dropped by less than 2: {phis}")
    if 2 * len(chosen) > len(s):
        raise LemmaViolation(f"|A_n| = {len(chosen)} exceeds |S_n|/2 = {len(s) / 2}")
    bad = an_conditions(b, chosen, s)
    if bad:
        raise LemmaViolation(f"closing conditions fail: {bad[:3]}")
    return trace


# ---------------------------------------------------------------- Q_p and Gamma_p


def _as_value_map(p: Mapping, n: int) -> dict[int, int]:
    out = {}
    for k, v in p.items():
        kb = k if isinstance(k, int) else as_bitstring(k).value
        vb = v if isinstance(v, int) else as_bitstring(v).value
        out[kb] = vb
    return out


def _check_injection(b: StringSet, a: StringSet, p: dict[int, int]) -> None:
    if a.n != b.n:
        raise DimensionError("A and B differ in length")
    if not a.values <= b.values:
        raise ValueError("A must be a subset of B")
    if set(p) != set(a.values):
        raise ValueError("p must be defined exactly on A")
    if not set(p.values()) <= b.values:
        raise ValueError("p must map into B")
    if len(set(p.values())) != len(p):
        raise ValueError("p must be injective")


def q_assignment(b: StringSet, a: StringSet, p: Mapping) -> dict[int, frozenset[int]] | None:
    """Position -> part of ⊓A that every realiser must send it into.

    Built one string at a time: k is confined to the 0-positions of a when
    p(a) has a 0 at k, otherwise to the 1-positions.  Returns None when no
    permutation can comply: a weight mismatch, an empty target, or a part of
    ⊓A that would receive the wrong number of positions.
    """
    pm = _as_value_map(p, b.n)
    _check_injection(b, a, pm)
    n = b.n
    q = {k: frozenset(range(n)) for k in range(n)}
    for av in a.sorted_values():
        pv = pm[av]
        if av.bit_count() != pv.bit_count():
            return None
        ones = frozenset(k for k in range(n) if av >> k & 1)
        zeros = frozenset(range(n)) - ones
        for k in range(n):
            q[k] &= ones if pv >> k & 1 else zeros
            if not q[k]:
                return None
    meet = intersect_family(a) if a.values else Partition.trivial(n)
    for part, hits in Counter(q.values()).items():
        if part not in meet.parts or hits != len(part):
            return None
    return q


def _images_of(perms: np.ndarray, v: int) -> np.ndarray:
    n = perms.shape[1]
    pow2 = 1 << np.arange(n, dtype=np.int64)
    ones = [i for i in range(n) if v >> i & 1]
    if not ones:
        return np.zeros(len(perms), dtype=np.int64)
    return pow2[perms[:, ones]].sum(axis=1)


def gamma_p(b: StringSet, a: StringSet, p: Mapping, cap: int | None = None, jobs: int = 1) -> list[PositionPerm]:
    """{pi in Stab(B) : pi(p(a)) = a for all a in A}, by brute force."""
    pm = _as_value_map(p, b.n)
    _check_injection(b, a, pm)
    perms = stabilizer_of_set(b, cap=cap, jobs=jobs).as_array()
    for av, pv in pm.items():
        perms = perms[_images_of(perms, pv) == av]
    return [PositionPerm(tuple(row)) for row in perms.tolist()]


def gamma_p_bound(b: StringSet) -> int:
    """2^floor(|S|/2) * (n - |S|)!, the per-p count behind the Stab(B) bound."""
    s = len(singleton_positions(coarsest_supporting_partition(b)))
    return 2 ** (s // 2) * math.factorial(b.n - s)


def big_singleton_positions(b: StringSet, a: StringSet) -> frozenset[int]:
    """P_{>2}: positions of S lying in a part of ⊓A that meets S more than twice."""
    s = singleton_positions(coarsest_supporting_partition(b))
    meet = intersect_family(a) if a.values else Partition.trivial(b.n)
    return frozenset(k for k in s if len(meet.part_of(k) & s) > 2)


def p_big2_rigidity_check(b: StringSet, a: StringSet, p: Mapping, cap: int | None = None) -> bool:
    """Members of Gamma_p that agree (as inverses) off P_{>2} also agree on P_{>2}."""
    gamma = gamma_p(b, a, p, cap=cap)
    if len(gamma) <= 1:
        return True
    big = big_singleton_positions(b, a)
    outside = [k for k in range(b.n) if k not in big]
    inside = sorted(big)
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    for perm in gamma:
        inv = perm.inverse().images
        key = tuple(inv[k] for k in outside)
        val = tuple(inv[k] for k in inside)
        if seen.setdefault(key, val) != val:
            return False
    return True


def q_soundness_check(b: StringSet, a: StringSet, p: Mapping, cap: int | None = None) -> bool:
    """Every member of Gamma_p sends k into Q_p(k) and pulls P ∩ S back to Q_p^-1(P) ∩ S."""
    gamma = gamma_p(b, a, p, cap=cap)
    q = q_assignment(b, a, p)
    if q is None:
        return not gamma
    s = singleton_positions(coarsest_supporting_partition(b))
    meet = intersect_family(a) if a.values else Partition.trivial(b.n)
    for perm in gamma:
        if any(perm(k) not in q[k] for k in range(b.n)):
            return False
        inv = perm.inverse()
        for part in meet.parts:
            pulled = inv.apply_set(part & s)
            expected = frozenset(k for k in range(b.n) if q[k] == part) & s
            if pulled != expected:
                return False
    return True


# ---------------------------------------------------------------- bound report


def _json_number(x: int | Fraction | None):
    if x is None:
        return None
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


@dataclass
class BoundEntry:
    value: int | Fraction
    quantity: str
    exact: int | None = None
    hypotheses_ok: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def sound(self) -> bool:
        return self.exact is None or self.exact <= self.value

    @property
    def violation(self) -> bool:
        """Exact exceeds the bound although every hypothesis holds."""
        return self.hypotheses_ok and not self.sound

    def to_json(self) -> dict:
        return {
            "value": _json_number(self.value),
            "quantity": self.quantity,
            "exact": self.exact,
            "hypotheses_ok": self.hypotheses_ok,
            "sound": self.sound,
            "notes": self.notes,
        }


@dataclass
class BoundReport:
    n: int
    inputs: dict
    bounds: dict[str, BoundEntry]

    @property
    def hypotheses_ok(self) -> bool:
        return all(e.hypotheses_ok for e in self.bounds.values())

    def violations(self) -> list[str]:
        return [k for k, e in self.bounds.items() if e.violation]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "inputs": self.inputs,
            "bounds": {k: e.to_json() for k, e in self.bounds.items()},
            "hypotheses_ok": self.hypotheses_ok,
        }


def lemma14_bound(n: int, s: int, t: int) -> int:
    """s! * t! * (ceil(n/t)!)^t, with the last factor 1 when t = 0."""
    if t == 0:
        return math.factorial(s)
    return math.factorial(s) * math.factorial(t) * math.factorial(-(-n // t)) ** t


def lemma16_bound(n: int, s: int, c: Fraction) -> Fraction:
    """(2cn)^floor(s/2) * (n - s)!."""
    return (2 * c * n) ** (s // 2) * math.factorial(n - s)


def cor10_bound(n: int, f: int) -> int:
    """(f!)^ceil(n/(f-1)) * 2^n * floor(8 log2 n)!."""
    return math.factorial(f) ** -(-n // (f - 1)) * 2**n * math.factorial(floor_8log2(n))


def cor15_bound(n: int, f: int, d: int) -> int:
    half = -(-n // 2)
    return math.factorial(f) * math.factorial(half) * math.factorial(d) ** half


def _support_entries(b: StringSet, c: Fraction | None, d: int | None, exact: bool,
                     cap: int, jobs: int, c_ok: bool = True) -> tuple[dict, dict[str, BoundEntry]]:
    n = b.n
    sp = coarsest_supporting_partition(b)
    s = len(singleton_positions(sp))
    t = len(sp) - s
    if c is None:
        c = Fraction(len(b), n)
    c_ok = c_ok and len(b) <= c * n
    entries: dict[str, BoundEntry] = {}
    do_exact = exact and n <= cap

    widest = max((len(p) for p in sp.parts if len(p) > 1), default=0)
    e14 = BoundEntry(lemma14_bound(n, s, t), "|Stab(SP(B_n))|")
    if t and widest > -(-n // t):
        e14.hypotheses_ok = False
        e14.notes.append(f"a non-singleton part has {widest} > ceil(n/t_n) = {-(-n // t)} positions")
    if do_exact:
        e14.exact = stabilizer_of_partition(sp, setwise=True, cap=cap, jobs=jobs).order
    entries["lemma14"] = e14

    e16 = BoundEntry(lemma16_bound(n, s, c), "|Stab(B_n)|", hypotheses_ok=c_ok)
    if not c_ok:
        e16.notes.append(f"|B_n| = {len(b)} exceeds c*n = {c * n}")
    if do_exact:
        e16.exact = stabilizer_of_set(b, cap=cap, jobs=jobs).order
    entries["lemma16"] = e16

    if d is not None:
        e15 = BoundEntry(cor15_bound(n, s, d), "|Stab(SP(B_n))|", hypotheses_ok=False)
        e15.notes.append("constant d only has asymptotic meaning; report only")
        if do_exact:
            e15.exact = e14.exact
        entries["cor15"] = e15

    inputs = {
        "n": n,
        "c": _json_number(c),
        "b_size": len(b),
        "sp_size": len(sp),
        "s_n": s,
        "t_n": t,
        "delta_s": round(s / n, 12),
    }
    return inputs, entries


def stab_bound_report(instance: OrderedPartition | StringSet, c: int | Fraction | None = None,
                      f: int | None = None, d: int | None = None, exact: bool = True,
                      cap: int | None = None, jobs: int = 1) -> BoundReport:
    """Evaluate every applicable stabiliser bound, paired with brute force when n is small.

    For a single set B only the support-based bounds apply.  For an ordered
    partition, B_n is the class with the most support parts and the
    J_n-based bounds are added.
    """
    limit = brute_force_cap() if cap is None else cap
    c_frac = None if c is None else Fraction(c)
    if isinstance(instance, StringSet):
        inputs, entries = _support_entries(instance, c_frac, d, exact, limit, jobs)
        return BoundReport(instance.n, inputs, entries)

    part = instance
    n = part.n
    sps = class_supports(part)
    b_idx = b_class_index(sps)
    b = part.classes[b_idx]
    val = validate(part, c_frac if c_frac is not None else 1)
    if c_frac is None:
        c_frac = Fraction(max(part.class_sizes()), n)
    inputs, entries = _support_entries(b, c_frac, d, exact, limit, jobs)
    do_exact = exact and n <= limit

    f_measured = max(len(sp) for sp in sps)
    f_val = f_measured if f is None else f
    trace = build_jn(part)
    nonsing = n - len(trace.singletons)
    lemma8 = below_8log2(nonsing, n)
    inputs.update({
        "b_class_index": b_idx,
        "f": f_val,
        "global_singletons": len(trace.singletons),
        "jn_steps": trace.steps,
        "nonsingleton_count": nonsing,
        "lemma8_holds": lemma8,
        "cover_ok": val.cover_ok,
        "class_size_ok": val.size_ok,
    })

    if f_val >= 2:
        j_sets = [part.classes[i] for i in trace.indices]
        f_ok = f_val >= max((len(sps[i]) for i in trace.indices), default=1)
        gb = jn_gamma_bound(trace, f_val)
        realizable = None
        if do_exact and n <= REALIZABLE_CAP:
            realizable = count_realizable_tuples(j_sets, cap=limit, jobs=jobs)
        for key, value in (("lemma9_product", gb.product), ("lemma9", gb.closed_form)):
            e = BoundEntry(value, "realisable tuples over J_n", exact=realizable, hypotheses_ok=f_ok)
            if not f_ok:
                e.notes.append("f is below the largest support size in J_n")
            entries[key] = e

        cor10_ok = f_ok and val.partition_ok and lemma8
        e10 = BoundEntry(cor10_bound(n, f_val), "|Stab(P_n)|", hypotheses_ok=cor10_ok)
        if not val.partition_ok:
            e10.notes.append("classes do not partition {0,1}^n")
        if not lemma8:
            e10.notes.append(f"{nonsing} non-singleton positions, not below 8 log2 n")
        if do_exact:
            e10.exact = stabilizer_of_ordered_partition(part, cap=limit, jobs=jobs).order
        entries["cor10"] = e10
    else:
        inputs["notes"] = "every class support has one part; J_n-based bounds need f >= 2"
    return BoundReport(n, inputs, entries)


# ---------------------------------------------------------------- growth table


@dataclass
class GrowthRow:
    n: int
    family: str
    exact_stab: int | None
    exact_orbit: int | None
    bounds: dict[str, int | Fraction]
    poly: int
    hypotheses_ok: bool

    def ratio_exact(self) -> float | None:
        if self.exact_orbit is None:
            return None
        return float(Fraction(self.exact_orbit, self.poly))

    def orbit_lower(self) -> dict[str, float]:
        """n! / bound for every stabiliser bound of P_n (trivially < 1 when loose)."""
        fact = math.factorial(self.n)
        return {k: float(Fraction(fact) / Fraction(v)) for k, v in self.bounds.items()}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "family": self.family,
            "exact_orbit": self.exact_orbit,
            "exact_stab": self.exact_stab,
            "bounds": {k: _json_number(v) for k, v in self.bounds.items()},
            "orbit_lower": {k: _fmt(v) for k, v in self.orbit_lower().items()},
            "poly_2kn": self.poly,
            "ratio_exact": _fmt(self.ratio_exact()),
            "hypotheses_ok": self.hypotheses_ok,
        }


def _fmt(x: float | None) -> str | None:
    return None if x is None else format(x, ".12g")


STAB_BOUNDS = ("cor10", "lemma14", "lemma16")


def growth_report(family: str, n_values: Sequence[int], k: int = 1, c: int = 1, seed: int = 0,
                  exact_cap: int | None = None, jobs: int = 1) -> list[GrowthRow]:
    """One row per n: exact orbit (when enumerable), stabiliser bounds and 2^(kn)."""
    limit = brute_force_cap() if exact_cap is None else exact_cap
    rows = []
    for n in n_values:
        part = generate(family, n, c=c, seed=seed)
        report = stab_bound_report(part, c=c, exact=False)
        bounds = {key: report.bounds[key].value for key in STAB_BOUNDS if key in report.bounds}
        stab = orbit = None
        if n <= limit:
            stab = stabilizer_of_ordered_partition(part, cap=limit, jobs=jobs).order
            orbit = math.factorial(n) // stab
        v = validate(part, c)
        rows.append(GrowthRow(n, family, stab, orbit, bounds, 2 ** (k * n), v.ok))
    return rows


# ---------------------------------------------------------------- instance verification


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def verify_instance(partition: OrderedPartition, c: int | Fraction | None = None,
                    cap: int | None = None, jobs: int = 1, samples: int = 5) -> list[CheckResult]:
    """Run the lemma property checks that apply to one ordered partition."""
    from .groups import (
        enumerate_sym,
        induced_theta,
        induced_tuple,
        intersection_chain,
        orbit_count_ordered_partition,
        supports_of,
    )
    from .hfsets import encode_ordered_partition, orbit_hf
    from .partitions import enumerate_partitions, is_refinement, is_pointwise_stabilised, supports

    limit = brute_force_cap() if cap is None else cap
    n = partition.n
    check_cap(n, limit)
    results: list[CheckResult] = []
    sps = class_supports(partition)

    stab = stabilizer_of_ordered_partition(partition, cap=limit, jobs=jobs)
    orbit = orbit_count_ordered_partition(partition, cap=limit, jobs=jobs)
    results.append(CheckResult(
        "orbit-stabiliser", orbit * stab.order == math.factorial(n),
        f"|orbit| = {orbit}, |Stab| = {stab.order}, n! = {math.factorial(n)}"))

    bad_sandwich = 0
    class_stabs = [stabilizer_of_set(cls, cap=limit, jobs=jobs) for cls in partition.classes]
    for cls, sp, st in zip(partition.classes, sps, class_stabs):
        if not supports(sp, cls):
            bad_sandwich += 1
            continue
        setwise = stabilizer_of_partition(sp, setwise=True, cap=limit, jobs=jobs).as_set()
        pointwise = stabilizer_of_partition(sp, setwise=False, cap=limit, jobs=jobs).as_set()
        members = st.as_set()
        if not pointwise <= members <= setwise:
            bad_sandwich += 1
    results.append(CheckResult("sandwich", bad_sandwich == 0, f"{bad_sandwich} class(es) violate"))

    chain_ok = stab.as_set() <= set.intersection(*(set(s.as_set()) for s in class_stabs))
    results.append(CheckResult("subgroup-chain", chain_ok, "Stab(P) <= every Stab(C)"))

    if n <= 6:
        parts_all = list(enumerate_partitions(n))
        bad = 0
        for cls, sp in zip(partition.classes, sps):
            ok = [p for p in parts_all if supports(p, cls)]
            if not all(is_refinement(p, sp) for p in ok) or sp not in ok:
                bad += 1
        results.append(CheckResult("coarsest-support", bad == 0, f"{bad} class(es) disagree with enumeration"))

        x = encode_ordered_partition(partition)
        hf_orbit = orbit_hf(x, n, cap=limit)
        results.append(CheckResult("encoding-orbit", hf_orbit == orbit, f"HF orbit {hf_orbit} vs {orbit}"))

    trace = build_jn(partition)
    j_sets = [partition.classes[i] for i in trace.indices]
    meet = intersect_all((sps[i] for i in trace.indices), n)
    results.append(CheckResult(
        "jn-property", trace.singletons <= singleton_positions(meet),
        f"{trace.steps} step(s), classes {[i + 1 for i in trace.indices]}"))

    if j_sets and n <= min(limit, 7):
        j_sps = supports_of(j_sets)
        final = intersection_chain(j_sets)[-1]
        seen: dict = {}
        bad = 0
        for perm in enumerate_sym(n, limit):
            t = induced_tuple(perm, j_sps)
            if t is None:
                continue
            from .partitions import part_images
            theta = part_images(perm.images, final)
            if seen.setdefault(t, theta) != theta or induced_theta(t, j_sets) != theta:
                bad += 1
        results.append(CheckResult("theta-uniqueness", bad == 0, f"{len(seen)} realisable tuple(s), {bad} conflict(s)"))

    b = partition.classes[b_class_index(sps)]
    try:
        an = build_an(b)
        results.append(CheckResult("an-construction", True, f"|A_n| = {len(an.chosen)}, phi {an.phi_values}"))
        a_set = an.chosen_set()
        b_stab = stabilizer_of_set(b, cap=limit, jobs=jobs)
        picks = list(b_stab)[:: max(1, b_stab.order // samples)][:samples]
        rigid = sound = True
        bound = gamma_p_bound(b)
        count_ok = True
        for perm in picks:
            inv = perm.inverse()
            p = {av: inv.apply_value(av) for av in a_set.values}
            rigid &= p_big2_rigidity_check(b, a_set, p, cap=limit)
            sound &= q_soundness_check(b, a_set, p, cap=limit)
            count_ok &= len(gamma_p(b, a_set, p, cap=limit)) <= bound
        results.append(CheckResult("p-big2-rigidity", rigid, f"{len(picks)} injection(s) tried"))
        results.append(CheckResult("q-soundness", sound, f"{len(picks)} injection(s) tried"))
        results.append(CheckResult("gamma-p-count", count_ok, f"bound {bound}"))
    except LemmaViolation as exc:
        results.append(CheckResult("an-construction", False, str(exc)))

    report = stab_bound_report(partition, c=c, cap=limit, jobs=jobs)
    bad = report.violations()
    results.append(CheckResult("bound-soundness", not bad, "violated: " + ", ".join(bad) if bad else "all sound"))
    return results
