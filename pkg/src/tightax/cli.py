"""``tightax`` command-line front end.

Exit codes: 0 when a report was computed (whatever the verdict), 1 for
input errors, 2 when a resource budget ran out, 3 when ``corpus`` finds an
expectation that does not hold.
"""

from __future__ import annotations

import argparse
import json
import sys

from .commands import COMMANDS, run_command
from .groebner import ResourceExhausted
from .problem import parse_problem

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_EXPECTATION = 0, 1, 2, 3


def _primes(text: str) -> list:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tightax", description="exact closure computations on problem files")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("problem", nargs="?", help="problem file (not used by corpus)")
    ap.add_argument("--e-max", type=int, dest="e_max")
    ap.add_argument("--c-deg", type=int, dest="c_deg")
    ap.add_argument("--q0-max", type=int, dest="q0_max")
    ap.add_argument("--primes", type=_primes)
    ap.add_argument("--order", help="e.g. degrevlex or lex:Z,X,Y")
    ap.add_argument("--budget", type=int, help="maximum number of S-pairs per Groebner computation")
    ap.add_argument("--case", action="append", help="corpus case id (repeatable)")
    ap.add_argument("--ideal")
    ap.add_argument("--element")
    ap.add_argument("--hom", action="append", help="hom block name (repeatable)")
    ap.add_argument("--timing", action="store_true", help="include timings in the report")
    return ap


def _emit(obj, stream=None):
    print(json.dumps(obj, sort_keys=True, indent=2), file=stream or sys.stdout)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "problem") and v is not None}
    try:
        problem = None
        if args.command != "corpus":
            if not args.problem:
                raise ValueError(f"{args.command} needs a problem file")
            with open(args.problem, encoding="utf-8") as fh:
                problem = parse_problem(fh.read())
        report = run_command(args.command, problem, flags)
    except ResourceExhausted as exc:
        _emit({"verdict": "ResourceExhausted", "evidence": {"message": str(exc)}})
        print(f"tightax: resource budget exhausted: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, KeyError, OSError) as exc:
        _emit({"verdict": "InputError", "evidence": {"message": str(exc)}})
        print(f"tightax: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(report)
    if args.command == "corpus" and report["evidence"]["comparison"]["failures"]:
        print("tightax: corpus expectations failed: " + ", ".join(report["evidence"]["comparison"]["failures"]),
              file=sys.stderr)
        return EXIT_EXPECTATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
