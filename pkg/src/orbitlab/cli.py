"""orbitlab command line.

Exit codes: 0 success, 1 a verify check failed, 2 malformed input or invalid
parameters, 3 brute-force cap exceeded.  Reports go to stdout, logs to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from typing import Sequence

from .core import STRUCTURE_CAP
from .groups import (
    CapExceeded,
    brute_force_cap,
    check_cap,
    orbit_count_ordered_partition,
    stabilizer_of_ordered_partition,
)
from .lemmas import (
    LemmaViolation,
    build_an,
    build_jn,
    check_nonsingleton_bound,
    growth_report,
    stab_bound_report,
    verify_instance,
)
from .preorders import (
    FAMILIES,
    InstanceFormatError,
    OrderedPartition,
    b_class_index,
    check_partition,
    class_supports,
    classify,
    generate,
    parse_instance,
    validate,
)

log = logging.getLogger("orbitlab")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
DIRECT_ORBIT_MAX = 7


class UsageError(ValueError):
    pass


def parse_n_range(text: str) -> list[int]:
    """'5', '3..6' (inclusive) or '3,5,8'."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
            values = list(range(lo, hi + 1))
        else:
            values = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad n or n-range: {text!r}") from None
    if not values:
        raise UsageError(f"empty n-range: {text!r}")
    if any(v < 1 or v > STRUCTURE_CAP for v in values):
        raise UsageError(f"n must lie in 1..{STRUCTURE_CAP}")
    return values


def _dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(["" if v is None else v for v in row] for row in rows)
    return buf.getvalue()


def _read_instance(path: str) -> tuple[OrderedPartition, str]:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    part = parse_instance(text)
    check_partition(part, text)
    log.info("read %s: n=%d, %d classes", path, part.n, len(part))
    return part, text


def _cap(args) -> int:
    return args.unsafe_cap if args.unsafe_cap is not None else brute_force_cap()


# ---------------------------------------------------------------- commands


def cmd_gen(args) -> str:
    n = parse_n_range(args.n)
    if len(n) != 1:
        raise UsageError("gen takes a single n")
    part = generate(args.family, n[0], c=args.c, seed=args.seed)
    if args.format == "json":
        return _dump_json(part.to_json())
    if args.format == "csv":
        raise UsageError("gen writes text or json")
    return part.to_text()


def cmd_analyze(args) -> str:
    part, _ = _read_instance(args.instance)
    cap = _cap(args)
    check_cap(part.n, cap)
    case = classify(part)
    val = validate(part, args.c)
    jn = build_jn(part)
    b = part.classes[b_class_index(class_supports(part))]
    an = build_an(b)
    nonsing = check_nonsingleton_bound(part, args.c)
    report = stab_bound_report(part, c=args.c, f=args.f, d=args.d, cap=cap, jobs=args.jobs)
    data = {
        "case": case.to_json(),
        "validation": {"ok": val.ok, "failures": val.failures()},
        "jn": jn.to_json(),
        "an": an.to_json(),
        "nonsingleton": nonsing.to_json(),
        "report": report.to_json(),
    }
    if args.format == "json":
        return _dump_json(data)
    if args.format == "csv":
        rows = [[k, str(e.to_json()["value"]), e.quantity, e.exact, e.hypotheses_ok, e.sound]
                for k, e in report.bounds.items()]
        return _csv(rows, ["bound", "value", "quantity", "exact", "hypotheses_ok", "sound"])
    lines = [
        f"n = {part.n}, {len(part)} classes, case {case.case_tag}",
        f"B_n = class {case.b_class_index + 1}, |SP(B_n)| = {case.sp_size}, "
        f"singletons: global {case.singleton_count_global}, in SP(B_n) {case.singleton_count_b}",
        f"validation: {'ok' if val.ok else '; '.join(val.failures())}",
        f"J_n: classes {jn.to_json()['classes']}, increases {jn.increases}",
        f"A_n: {an.to_json()['chosen']}, phi {an.phi_values}",
        f"non-singleton positions: {nonsing.nonsingleton_count} "
        f"(8 log2 n = {nonsing.threshold:.4f}, {'holds' if nonsing.holds else 'fails'})",
        "bounds:",
    ]
    for k, e in report.bounds.items():
        j = e.to_json()
        flag = "" if e.hypotheses_ok else "  [hypotheses fail]"
        lines.append(f"  {k:<15} {j['value']}  vs {e.quantity} = {e.exact}{flag}")
    return "\n".join(lines) + "\n"


def cmd_orbit(args) -> str:
    part, _ = _read_instance(args.instance)
    cap = _cap(args)
    check_cap(part.n, cap)
    n = part.n
    stab = stabilizer_of_ordered_partition(part, cap=cap, jobs=args.jobs).order
    orbit = math.factorial(n) // stab
    direct = None
    if n <= DIRECT_ORBIT_MAX:
        direct = orbit_count_ordered_partition(part, cap=cap, jobs=args.jobs)
    agree = None if direct is None else direct == orbit
    data = {"n": n, "stab_order": stab, "orbit": orbit, "direct_orbit": direct, "agree": agree}
    if args.format == "json":
        return _dump_json(data)
    if args.format == "csv":
        return _csv([[n, stab, orbit, direct, agree]], ["n", "stab_order", "orbit", "direct_orbit", "agree"])
    out = f"|Stab| = {stab}\norbit = n!/|Stab| = {orbit}\n"
    if direct is not None:
        out += f"direct enumeration = {direct} ({'agrees' if agree else 'DISAGREES'})\n"
    return out


def cmd_report(args) -> str:
    ns = parse_n_range(args.n)
    log.info("growth table for %s, n in %s, k=%d, cap=%d", args.family, ns, args.k, _cap(args))
    rows = growth_report(args.family, ns, k=args.k, c=args.c, seed=args.seed,
                         exact_cap=_cap(args), jobs=args.jobs)
    if args.format == "json":
        return _dump_json([r.to_json() for r in rows])
    keys = sorted({k for r in rows for k in r.bounds})
    if args.format == "csv":
        header = ["n", "family", "exact_orbit", "exact_stab", "poly_2kn", "ratio_exact", "hypotheses_ok"]
        header += [f"bound_{k}" for k in keys] + [f"orbit_lower_{k}" for k in keys]
        out = []
        for r in rows:
            j = r.to_json()
            out.append([r.n, r.family, r.exact_orbit, r.exact_stab, r.poly, j["ratio_exact"], r.hypotheses_ok]
                       + [j["bounds"].get(k) for k in keys] + [j["orbit_lower"].get(k) for k in keys])
        return _csv(out, header)
    lines = [f"{'n':>3} {'exact_orbit':>14} {'2^(kn)':>22} {'ratio':>14}  hyp"]
    for r in rows:
        j = r.to_json()
        orbit = "-" if r.exact_orbit is None else str(r.exact_orbit)
        ratio = j["ratio_exact"] or "-"
        lines.append(f"{r.n:>3} {orbit:>14} {r.poly:>22} {ratio:>14}  {'ok' if r.hypotheses_ok else 'no'}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> tuple[str, int]:
    part, _ = _read_instance(args.instance)
    cap = _cap(args)
    check_cap(part.n, cap)
    results = verify_instance(part, c=args.c, cap=cap, jobs=args.jobs)
    failed = [r for r in results if not r.passed]
    if args.format == "json":
        out = _dump_json([{"check": r.name, "passed": r.passed, "detail": r.detail} for r in results])
    elif args.format == "csv":
        out = _csv([[r.name, r.passed, r.detail] for r in results], ["check", "passed", "detail"])
    else:
        out = "".join(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}\n" for r in results)
    return out, EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for brute force")
    common.add_argument("--unsafe-cap", type=int, metavar="N",
                        help="raise the brute-force cap (default 10, or $ORBITLAB_CAP)")
    common.add_argument("-v", "--verbose", action="store_true")

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--family", choices=FAMILIES, required=True)
    family.add_argument("--n", required=True)
    family.add_argument("--c", type=int, default=1, help="class size constant (blocks of c*n)")
    family.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="orbitlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("gen", parents=[common, family], help="write an instance")

    for name, helptext in (("analyze", "case report, traces and bounds"),
                           ("orbit", "exact stabiliser and orbit"),
                           ("verify", "run the lemma property checks")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("instance", help="instance file, or - for stdin")
        p.add_argument("--c", type=int, default=1, help="class size constant for hypothesis checks")
        if name == "analyze":
            p.add_argument("--f", type=int, help="support size bound (default: measured)")
            p.add_argument("--d", type=int, help="constant for the report-only linear-support bound")

    rep = sub.add_parser("report", parents=[common, family], help="growth table over a range of n")
    rep.add_argument("--k", type=int, default=1, help="polynomial degree: compare with 2^(kn)")
    return parser


def _setup_logging(verbose: bool) -> None:
    # rebound on every call so the handler follows the current sys.stderr
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    _setup_logging(args.verbose)
    if args.jobs < 1:
        log.error("--jobs must be at least 1")
        return EXIT_INPUT
    code = EXIT_OK
    try:
        if args.command == "verify":
            out, code = cmd_verify(args)
        else:
            out = {"gen": cmd_gen, "analyze": cmd_analyze, "orbit": cmd_orbit, "report": cmd_report}[args.command](args)
    except CapExceeded as exc:
        log.error("%s", exc)
        return EXIT_CAP
    except InstanceFormatError as exc:
        log.error("malformed instance: %s", exc)
        return EXIT_INPUT
    except (UsageError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except LemmaViolation as exc:
        log.error("internal check failed: %s", exc)
        return EXIT_FAIL
    sys.stdout.write(out)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
