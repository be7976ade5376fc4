"""``effsum`` command line tool.

Exit status: 0 on success, 1 when a soundness check fails (theorem and brute
force disagree, a trace does not replay, or the benchmark paths disagree),
2 on bad input.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path

from .audit import audit_all
from .bench import run_bench
from .errors import EffsumError, NotApplicable, ValidationError
from .fixtures import fixture_path, list_fixtures
from .generate import FAMILIES, generate_instance
from .groups import minkowski_sum
from .instance import Instance, parse_instance
from .proofs import derive
from .refutation import refutation_trace
from .report import Report, audit_report, efficient_report, trace_report, verdict_report
from .verdict import LazyAudit, combined_verdict, theorem_verdict

EXIT_OK, EXIT_UNSOUND, EXIT_INPUT = 0, 1, 2
TRACE_RULES = ("T7", "T8", "T9", "T10")
COMMANDS = ("verdict", "efficient", "audit", "trace", "gen", "bench")


class CommandFailed(EffsumError):
    """Input is valid but the command has nothing to produce for it."""


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="effsum", description="Efficient points of Minkowski sums.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("instance", nargs="?", help="instance JSON file")
    p.add_argument("--fixture", help="use a shipped fixture instead of a file")
    p.add_argument("--list-fixtures", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--set", dest="which", choices=("A", "B", "sum"), default="A",
                   help="set to partition for 'efficient' (B includes any extra summands)")
    p.add_argument("--depth", type=int, help="probe closure depth")
    p.add_argument("--cap", type=int, help="probe size cap")
    p.add_argument("--mult", type=int, help="largest multiplicity tried for P4/P5")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", choices=FAMILIES, help="generator family (gen, bench)")
    p.add_argument("--size-a", type=int, help="|A| for gen (default 5) or bench (default varies)")
    p.add_argument("--size-b", type=int, help="|B| for gen (default 3) or bench (default varies)")
    p.add_argument("--dim", type=int, help="vector dimension (default 2)")
    p.add_argument("--count", type=int, default=50, help="instances per family for bench")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _load(args) -> tuple[Instance, str | None]:
    if args.fixture:
        if args.instance:
            raise ValidationError("give either an instance file or --fixture, not both")
        return parse_instance(fixture_path(args.fixture)), args.fixture
    if not args.instance:
        raise ValidationError(f"'{args.command}' needs an instance file or --fixture")
    return parse_instance(args.instance), None


def _config(inst: Instance, args):
    cfg = inst.audit
    for flag, key in (("depth", "depth"), ("cap", "cap"), ("mult", "max_multiplicity")):
        value = getattr(args, flag)
        if value is not None:
            if value < 1:
                raise ValidationError(f"--{flag} must be at least 1")
            cfg = replace(cfg, **{key: value})
    return cfg


def _require_sets(inst: Instance) -> None:
    if inst.system is not None:
        raise ValidationError("this file holds a derivation system; only 'trace' accepts it")


def run(args) -> tuple[Report, int]:
    """Execute one subcommand and return its report and exit status."""
    t0 = time.perf_counter()

    def timing():
        return {"seconds": round(time.perf_counter() - t0, 6)} if args.timing else None

    if args.command == "bench":
        families = (args.family,) if args.family else FAMILIES
        rows = run_bench(families, args.count, args.seed, **_sizes(args))
        ok = all(r.agree for r in rows)
        rep = Report("bench", {"count": args.count, "seed": args.seed,
                               "rows": [r.to_dict() for r in rows]}, timing=timing())
        return rep, EXIT_OK if ok else EXIT_UNSOUND

    inst, fixture = _load(args)

    if args.command == "trace":
        if inst.system is not None:
            trace, rule = derive(inst.system), None
        else:
            B = inst.effective_B()
            lazy = LazyAudit(inst.relation, inst.group, inst.A, B, _config(inst, args))
            rule = theorem_verdict(inst.A, B, inst.group, inst.relation, lazy, inst.summands).rule
            if rule not in TRACE_RULES:
                raise CommandFailed(f"no contradiction trace: the applicable rule is {rule}, "
                                    f"not one of {', '.join(TRACE_RULES)}")
            trace = refutation_trace(rule, inst.A, B, inst.group, inst.relation)
        rep = trace_report(trace, rule, inst.name, fixture, timing())
        return rep, EXIT_OK if rep.data["replay_ok"] else EXIT_UNSOUND

    _require_sets(inst)
    g, rel = inst.group, inst.relation
    cfg = _config(inst, args)
    B = inst.effective_B()

    if args.command == "verdict":
        summands = inst.summands if inst.B_list else None
        v = combined_verdict(inst.A, B, g, rel, cfg, summands=summands)
        return verdict_report(inst, v, fixture, timing()), EXIT_OK if v.consistent else EXIT_UNSOUND
    if args.command == "efficient":
        S = {"A": inst.A, "B": B}.get(args.which) or minkowski_sum(inst.A, B, g)
        return efficient_report(inst, args.which, S, fixture, timing()), EXIT_OK
    if args.command == "audit":
        statuses = audit_all(rel, g, inst.A, B, cfg)
        resolved = cfg.resolve(len(inst.A), len(B))
        return audit_report(inst, statuses, resolved, fixture, timing()), EXIT_OK
    raise AssertionError(args.command)


def golden_outputs(name: str) -> dict[str, str]:
    """File name to expected content for a shipped fixture.

    Set-based fixtures get their verdict report; system fixtures and fixtures
    whose verdict has a contradiction trace also get the trace text.
    """
    parser = build_parser()
    inst = parse_instance(fixture_path(name))
    out: dict[str, str] = {}
    if inst.system is None:
        verdict, _ = run(parser.parse_args(["verdict", "--fixture", name]))
        out["report.golden"] = verdict.to_json()
        if verdict.data["rule"] not in TRACE_RULES:
            return out
    trace, _ = run(parser.parse_args(["trace", "--fixture", name]))
    if inst.system is not None:
        out["report.golden"] = trace.to_json()
    out["trace.golden"] = trace.to_text()
    return out


def _sizes(args) -> dict:
    given = {"size_a": args.size_a, "size_b": args.size_b, "dim": args.dim}
    return {k: v for k, v in given.items() if v is not None}


def _generate(args) -> str:
    if not args.family:
        raise ValidationError("gen needs --family")
    inst = generate_instance(args.seed, args.family, **_sizes(args))
    return inst.to_json()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="effsum: %(levelname)s: %(message)s")
    if args.list_fixtures:
        _emit("".join(n + "\n" for n in list_fixtures()), args.out)
        return EXIT_OK
    try:
        if args.command == "gen":
            _emit(_generate(args), args.out)
            return EXIT_OK
        report, status = run(args)
    except (EffsumError, NotApplicable) as exc:
        print(f"effsum: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = report.to_json() if args.fmt == "json" else report.to_text()
    _emit(text, args.out)
    if status == EXIT_UNSOUND:
        print("effsum: soundness check failed", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
