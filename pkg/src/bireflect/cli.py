"""Command-line entry point: ``bireflect {classify,witness,census,verify-paper}``."""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .errors import BireflectError, BoundExceeded, Unenumerable
from .serialize import MalformedInput, request_from_json, spec_from_json

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_INVALID = 2
EXIT_UNKNOWN = 3
EXIT_BOUND = 4
EXIT_FAILED = 5

EPILOG = """exit codes:
  0  definite verdicts / all cases pass
  1  malformed input, or no verify-paper cases selected
  2  validation failure (element not in the group, bad form ...)
  3  some verdict is Unknown
  4  enumeration bound exceeded
  5  census disagreement, or failing verify-paper cases

inputs are a file path or inline JSON, e.g.
  bireflect classify '{"spec": {"kind": "SL", "field": {"kind": "Fp", "p": 5}, "n": 2},
                       "element": {"entries": [["1", "1"], ["0", "1"]]}}'
"""


def _load(arg: str):
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        path = Path(arg)
        if not path.exists():
            raise MalformedInput(f"no such file and not JSON: {arg}")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from None


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _report(args):
    from .groups import contains
    from .reality import classify, verify_report

    spec, t, hint = request_from_json(_load(args.input))
    if spec.__class__.__name__ == "QuaternionGroup":
        from .cayley import quat_reality

        rep = quat_reality(spec.a, spec.b, t, spec.group, bound=args.bound)
    else:
        if t.field != spec.field:
            raise MalformedInput(f"element over {t.field.name}, group over {spec.field.name}")
        if spec.kind != "G2" and not contains(spec, t):
            from .errors import NotInGroup

            raise NotInGroup(f"element is not in {spec.name}")
        rep = classify(spec, t, bound=args.bound, hint=hint, rng=random.Random(args.seed))
    verify_report(rep)
    return rep


def run_classify(args) -> int:
    rep = _report(args)
    _emit(_dump(rep.to_json()), args.out)
    return EXIT_OK if rep.definite else EXIT_UNKNOWN


def run_witness(args) -> int:
    rep = _report(args)
    full = rep.to_json()
    wit = {}
    for key in ("real", "strongly_real"):
        wit[key] = {k: v for k, v in full[key].items() if k in ("conjugator", "sigma", "tau", "witness")}
    _emit(_dump(wit), args.out)
    return EXIT_OK if rep.definite else EXIT_UNKNOWN


def run_census(args) -> int:
    from .oracle import ENUM_BOUND, census, census_summary, census_tsv, orthogonal_semisimple_census

    if args.jobs < 1:
        raise MalformedInput("--jobs must be at least 1")
    spec = spec_from_json(_load(args.input))
    if not spec.field.is_finite:
        raise Unenumerable(f"{spec.field.name} is infinite")
    bound = args.bound or ENUM_BOUND
    if args.semisimple:
        if spec.kind != "SO":
            raise MalformedInput("--semisimple is available for SO only")
        rows = orthogonal_semisimple_census(spec.gram)
    else:
        rows = census(spec, bound)
    _emit(census_tsv(rows), args.out)
    summary = census_summary(rows)
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return EXIT_FAILED if any(not r.constructive_agrees for r in rows) else EXIT_OK


def run_verify_paper(args) -> int:
    from .fixtures import run_fixture, select

    cases = select(args.filter)
    if not cases:
        print(f"no cases match {args.filter!r}", file=sys.stderr)
        return EXIT_MALFORMED
    failed = []
    lines = []
    for f in cases:
        ok, msg = run_fixture(f)
        lines.append(f"{'PASS' if ok else 'FAIL'}  {f.name}: {msg}")
        if not ok:
            failed.append(f.name)
    lines.append(f"{len(cases) - len(failed)}/{len(cases)} passed")
    if failed:
        lines.append("failing: " + ", ".join(failed))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized constructions (default 0)")
    common.add_argument("--bound", type=int, default=None, help="enumeration bound (default: module default)")
    common.add_argument("--jobs", type=int, default=1, help="worker count (default 1; output is identical for any value)")
    common.add_argument("--out", default=None, help="write output here instead of standard output")

    p = argparse.ArgumentParser(
        prog="bireflect",
        description="Decide reality and strong reality of elements in classical groups and G2.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, doc in (
        ("classify", run_classify, "print the full reality report"),
        ("witness", run_witness, "print only the witnesses"),
    ):
        s = sub.add_parser(name, parents=[common], help=doc)
        s.add_argument("input", help="request JSON {spec, element[, hint]} inline or as a file")
        s.set_defaults(fn=fn)
    s = sub.add_parser("census", parents=[common], help="enumerate classes and compare against brute force")
    s.add_argument("input", help="group spec JSON inline or as a file")
    s.add_argument("--semisimple", action="store_true", help="SO only: one row per semisimple characteristic polynomial")
    s.set_defaults(fn=run_census)
    s = sub.add_parser("verify-paper", parents=[common], help="run the named worked-example corpus")
    s.add_argument("filter", nargs="?", default=None, help="glob on case names, e.g. 'sl2-*'")
    s.set_defaults(fn=run_verify_paper)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    if getattr(args, "bound", None) is None and args.command != "census":
        from .groups import DEFAULT_BOUND

        args.bound = DEFAULT_BOUND
    try:
        return args.fn(args)
    except (MalformedInput, KeyError, TypeError) as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except BoundExceeded as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (BireflectError, ValueError) as exc:
        print(f"validation failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
