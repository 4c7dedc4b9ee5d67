"""Command line interface: run, verify, selftest.

Exit codes for ``run``: 0 on a completed resolution, 2 on fuel
exhaustion, 1 on any input error.  ``verify`` exits 0 on a valid trace
and 1 otherwise.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .errors import EngineError, InstanceError
from .instances import dumps_canonical, load_trace, parse_instance, trace_to_dict
from .rankone import FULL_IDEAL, PAIR_MIN
from .reduction import MODES, uniformize
from .selftest import run_selftest
from .verify import verify_dict

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_FUEL = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="locuni",
        description="Exact resolution engine for monomial valuations on "
        "localized monomial algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="resolve an instance and emit a trace")
    run_p.add_argument("instance", help="path to an instance JSON file")
    run_p.add_argument("--mode", choices=MODES, help="override the instance mode")
    run_p.add_argument(
        "--strategy", choices=(PAIR_MIN, FULL_IDEAL), help="override the strategy"
    )
    run_p.add_argument("--fuel", type=int, help="override the blowup allowance")
    run_p.add_argument("--out", help="write the trace here instead of stdout")

    ver_p = sub.add_parser("verify", help="independently verify a trace file")
    ver_p.add_argument("trace", help="path to a trace JSON file")

    self_p = sub.add_parser("selftest", help="run the built-in property suites")
    self_p.add_argument("--trials", type=int, default=25)
    return parser


def _cmd_run(args) -> int:
    try:
        inst = parse_instance(args.instance)
        if args.mode:
            inst = replace(inst, mode=args.mode)
        if args.strategy:
            inst = replace(inst, strategy=args.strategy)
        if args.fuel:
            inst = replace(inst, fuel=args.fuel)
        from .instances import validate_instance

        model = validate_instance(inst)
        trace = uniformize(model, inst.mode, inst.targets, inst.strategy_obj())
    except (InstanceError, EngineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    payload = dumps_canonical(trace_to_dict(inst, trace))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    if trace.status != "done":
        print("fuel exhausted: partial trace emitted", file=sys.stderr)
        return EXIT_FUEL
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        data = load_trace(args.trace)
    except InstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    report = verify_dict(data)
    print(report.describe())
    return EXIT_OK if report.valid else EXIT_INPUT_ERROR


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "verify":
        return _cmd_verify(args)
    return EXIT_OK if run_selftest(args.trials) else EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
