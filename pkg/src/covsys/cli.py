"""``covsys`` command-line interface.

Exit status: 0 when the property holds or the operation succeeded, 1 when
the property fails (not exact, reducible, not natural, no reduction, not
vanishing), 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .cyclotomic import decompose, from_exponents, parse_exponents, vanishes
from .ecs import DEFAULT_SCAN_LIMIT, Ecs, normalize, stats, verify_crt, verify_scan
from .errors import (
    CosetNotPresent,
    CovsysError,
    EnumerationLimitExceeded,
    InvalidModulus,
    ParseError,
    ScanLimitExceeded,
    TargetNotPresent,
    TooManyPrimeFactors,
)
from .reduction import (
    MergeCandidate,
    is_irreducible,
    is_natural,
    merge,
    merge_candidates,
    reduce_step,
    reduce_to_trivial,
    split,
)
from .search import DEFAULT_ENUMERATION_LIMIT, count_ecs, enumerate_ecs, generate_natural

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Out:
    def __init__(self, args):
        self.path = getattr(args, "output", None)
        self.fmt = args.format
        self.lines: list[str] = []

    def text(self, line: str = ""):
        self.lines.append(line)

    def json(self, obj):
        self.lines.append(json.dumps(obj, sort_keys=True))

    def system(self, A: Ecs, extra: dict | None = None):
        if self.fmt == "json":
            obj = formats.ecs_to_json(A)
            obj.update(extra or {})
            self.json(obj)
        else:
            self.lines.append(formats.format_text(A).rstrip("\n"))

    def flush(self):
        body = "\n".join(self.lines)
        if body:
            body += "\n"
        if self.path:
            Path(self.path).write_text(body)
        else:
            sys.stdout.write(body)


def _read_system(args) -> Ecs:
    path = args.input
    text = sys.stdin.read() if path == "-" else _read_file(path)
    return formats.parse_ecs(text, args.input_format, source=path)


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read: {exc.strerror}", source=path) from None


def _write_trace(path, trace):
    if path:
        Path(path).write_text(json.dumps(formats.trace_to_json(trace)) + "\n")


def _int_list(text: str) -> list[int]:
    try:
        return parse_exponents(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# ---------------------------------------------------------------------------
# commands

def cmd_verify(args, out: _Out) -> int:
    A = _read_system(args)
    try:
        report = verify_scan(A, args.scan_limit)
        exact = report.is_exact
        method = "scan"
    except ScanLimitExceeded:
        report = stats(A)
        exact = verify_crt(A)
        method = "crt"
    if out.fmt == "json":
        out.json({
            "exact": exact,
            "method": method,
            "lcm": report.lcm,
            "density": str(report.density),
            "classes": len(A),
            "greatest_modulus_count": report.greatest_modulus_count,
            "maximal_moduli": sorted(report.maximal_moduli),
            "uncovered": list(report.uncovered) if report.uncovered is not None else None,
            "multiply_covered": list(report.multiply_covered) if report.multiply_covered is not None else None,
        })
    else:
        out.text(f"{'exact' if exact else 'not exact'}, N={report.lcm}, density={report.density}")
        out.text(f"classes: {len(A)}")
        out.text(f"greatest modulus {max(A.moduli)} occurs {report.greatest_modulus_count} times")
        out.text(f"maximal moduli: {' '.join(map(str, sorted(report.maximal_moduli)))}")
        if report.uncovered:
            out.text(f"uncovered: {_clip(report.uncovered)}")
        if report.multiply_covered:
            out.text(f"multiply covered: {_clip(report.multiply_covered)}")
    return EXIT_OK if exact else EXIT_FAIL


def _clip(xs, limit=20):
    shown = " ".join(map(str, xs[:limit]))
    return shown + (f" ... ({len(xs)} total)" if len(xs) > limit else "")


def cmd_reduce(args, out: _Out) -> int:
    A = _read_system(args)
    if args.step:
        B, step = reduce_step(A)
        out.system(B, {"split": {"residue": step.parent_class.residue,
                                 "modulus": step.parent_class.modulus, "prime": step.prime}})
        if out.fmt == "text":
            out.text(f"# merged back from split of {step.parent_class} by {step.prime}")
        return EXIT_OK
    trace = reduce_to_trivial(A)
    _write_trace(args.trace, trace)
    if out.fmt == "json":
        out.json(formats.trace_to_json(trace))
    else:
        out.text(f"reduced to 0(1) in {len(trace)} prime splits")
        for s in trace.steps:
            out.text(f"split {s.parent_class} by {s.prime}")
    return EXIT_OK


def cmd_irreducible(args, out: _Out) -> int:
    A = _read_system(args)
    irreducible = is_irreducible(A)
    cands = merge_candidates(A)
    if out.fmt == "json":
        out.json({"irreducible": irreducible, "trivial": A.is_trivial(),
                  "merge_candidates": [[c.modulus, c.prime, c.shift] for c in cands]})
    elif irreducible:
        out.text("irreducible")
    elif A.is_trivial():
        out.text("trivial (not irreducible)")
    else:
        out.text(f"reducible: {len(cands)} mergeable coset(s)")
        for c in cands:
            out.text(f"  {' '.join(map(str, c.members))} -> {c.merged}")
    return EXIT_OK if irreducible else EXIT_FAIL


def cmd_natural(args, out: _Out) -> int:
    A = _read_system(args)
    natural, trace = is_natural(A)
    if trace is not None:
        _write_trace(args.trace, trace)
    if out.fmt == "json":
        out.json({"natural": natural, "trace": formats.trace_to_json(trace) if trace else None})
    else:
        out.text(f"natural ({len(trace)} prime splits)" if natural else "not natural")
    return EXIT_OK if natural else EXIT_FAIL


def cmd_split(args, out: _Out) -> int:
    A = _read_system(args)
    out.system(split(A, normalize(args.residue, args.modulus), args.parts))
    return EXIT_OK


def cmd_merge(args, out: _Out) -> int:
    A = _read_system(args)
    given = [args.modulus, args.prime, args.shift]
    if all(x is None for x in given):
        cands = merge_candidates(A)
        if out.fmt == "json":
            out.json({"merge_candidates": [[c.modulus, c.prime, c.shift] for c in cands]})
        else:
            for c in cands:
                out.text(f"{c.modulus} {c.prime} {c.shift}")
        return EXIT_OK if cands else EXIT_FAIL
    if any(x is None for x in given):
        raise _Usage("merge needs all of --modulus, --prime, --shift (or none to list candidates)")
    try:
        cand = MergeCandidate(*given)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    out.system(merge(A, cand))
    return EXIT_OK


def cmd_gen(args, out: _Out) -> int:
    A, trace = generate_natural(args.seed, args.steps, args.primes, args.lcm, args.max_prime_factors)
    _write_trace(args.trace, trace)
    out.system(A)
    return EXIT_OK


def cmd_enumerate(args, out: _Out) -> int:
    if args.lcm > args.limit:
        raise _Usage(f"--lcm {args.lcm} exceeds enumeration limit {args.limit}")
    if args.count:
        n = count_ecs(args.lcm)
        out.json({"lcm": args.lcm, "count": n}) if out.fmt == "json" else out.text(str(n))
        return EXIT_OK
    systems = enumerate_ecs(args.lcm, args.limit)
    if out.fmt == "json":
        out.json({"lcm": args.lcm, "count": len(systems),
                  "systems": [formats.ecs_to_json(A) for A in systems]})
    else:
        for i, A in enumerate(systems):
            if i:
                out.text()
            out.text(f"# system {i + 1} of {len(systems)}")
            out.system(A)
    return EXIT_OK


def cmd_vanish(args, out: _Out) -> int:
    if args.modulus < 1:
        raise _Usage("--modulus must be positive")
    v = from_exponents(args.modulus, args.exponents)
    ok = vanishes(v)
    terms = None
    note = None
    if ok and args.decompose:
        try:
            terms = decompose(v)
        except TooManyPrimeFactors as exc:
            note = str(exc)
    if out.fmt == "json":
        obj = {"modulus": args.modulus, "coeffs": list(v.coeffs), "vanishes": ok}
        if terms is not None:
            obj["decomposition"] = [[t.prime, t.shift] for t in terms]
        if note:
            obj["note"] = note
        out.json(obj)
    else:
        out.text("vanishes" if ok else "does not vanish")
        if note:
            out.text(f"  no decomposition: {note}")
        for t in terms or []:
            out.text(f"  coset p={t.prime} d={t.shift}: {' '.join(map(str, t.positions()))}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_replay(args, out: _Out) -> int:
    trace = formats.parse_trace(_read_file(args.trace_file), source=args.trace_file)
    out.system(trace.replay())
    return EXIT_OK


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text", help="output format")
    common.add_argument("-o", "--output", metavar="PATH", help="write output here instead of stdout")

    with_input = argparse.ArgumentParser(add_help=False, parents=[common])
    with_input.add_argument("input", help="ECS file ('-' for stdin)")
    with_input.add_argument("--input-format", choices=["auto", "text", "json"], default="auto")

    p = argparse.ArgumentParser(prog="covsys", description="Exact covering systems toolkit")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("verify", parents=[with_input], help="check exactness")
    s.add_argument("--scan-limit", type=int, default=DEFAULT_SCAN_LIMIT, metavar="M")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("reduce", parents=[with_input], help="reduce to 0(1) by undoing prime splits")
    s.add_argument("--trace", metavar="PATH", help="write the reduction trace as JSON")
    s.add_argument("--step", action="store_true", help="undo a single prime split")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("irreducible", parents=[with_input], help="test irreducibility")
    s.set_defaults(func=cmd_irreducible)

    s = sub.add_parser("natural", parents=[with_input], help="test naturality")
    s.add_argument("--trace", metavar="PATH", help="write a witnessing trace as JSON")
    s.set_defaults(func=cmd_natural)

    s = sub.add_parser("split", parents=[with_input], help="split one class")
    s.add_argument("--residue", type=int, required=True)
    s.add_argument("--modulus", type=int, required=True)
    s.add_argument("--parts", type=int, required=True, help="number of classes to split into")
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("merge", parents=[with_input], help="merge a prime-order coset (or list candidates)")
    s.add_argument("--modulus", type=int)
    s.add_argument("--prime", type=int)
    s.add_argument("--shift", type=int)
    s.set_defaults(func=cmd_merge)

    s = sub.add_parser("gen", parents=[common], help="generate a random natural ECS")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--steps", type=int, default=5)
    s.add_argument("--primes", type=_int_list, default=[2, 3])
    s.add_argument("--lcm", type=int, default=None, help="cap on N(A)")
    s.add_argument("--max-prime-factors", type=int, default=None)
    s.add_argument("--trace", metavar="PATH")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("enumerate", parents=[common], help="all exact ECS with moduli dividing N")
    s.add_argument("--lcm", type=int, required=True, metavar="N")
    s.add_argument("--limit", type=int, default=DEFAULT_ENUMERATION_LIMIT)
    s.add_argument("--count", action="store_true", help="only print the number of systems")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("vanish", parents=[common], help="test a sum of m-th roots of unity for vanishing")
    s.add_argument("--modulus", type=int, required=True)
    s.add_argument("--exponents", type=_int_list, required=True)
    s.add_argument("--decompose", action="store_true", help="also split into prime-order cosets")
    s.set_defaults(func=cmd_vanish)

    s = sub.add_parser("replay", parents=[common], help="rebuild an ECS from a trace JSON")
    s.add_argument("trace_file")
    s.set_defaults(func=cmd_replay)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args)
    try:
        status = args.func(args, out)
    except ParseError as exc:
        print(f"covsys: {exc.format().strip()}", file=sys.stderr)
        return EXIT_USAGE
    except _Usage as exc:
        print(f"covsys {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TargetNotPresent, CosetNotPresent, EnumerationLimitExceeded, InvalidModulus) as exc:
        print(f"covsys {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CovsysError as exc:
        # property failures from the library: no eligible modulus, not vanishing, ...
        print(f"covsys {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"covsys {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
