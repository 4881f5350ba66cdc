"""Command-line front end.

Exit status: 0 when a run halts, 2 when it provably never halts, 3 when a
budget ran out first, 1 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

import jsonschema

from .assembler import assemble, disassemble, program_from_dict, program_to_dict
from .leap import Budgets, Diverges, Halted, Undetermined, run
from .machine import MachineError, Oracle, Program
from .ordinal import OrdinalSyntaxError, format_ordinal, parse_ordinal
from .stdlib.census import CENSUS_BUDGETS, census
from .stdlib import classical_from_dict, compile_clock, halting_decider, wo_decider
from .stdlib.clocks import ClockError
from .tape import EPReal, decode_natural, encode_natural, encode_relation, pair, parse_pairs, unpair

EXIT = {"halted": 0, "diverges": 2, "undetermined": 3}


class UsageError(Exception):
    pass


def load_schema(name: str) -> dict:
    text = resources.files("ittm").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(obj, name: str) -> None:
    jsonschema.validate(obj, load_schema(name))


def _read_json(path: str, schema: str):
    data = json.loads(Path(path).read_text())
    try:
        validate(data, schema)
    except jsonschema.ValidationError as e:
        raise UsageError(f"{path}: {e.message}") from None
    return data


def load_program(path: str) -> Program:
    if path.endswith(".json"):
        return program_from_dict(_read_json(path, "program"))
    return assemble(Path(path).read_text(), Path(path).stem)


def _real(text: str) -> EPReal:
    try:
        return EPReal.parse(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _oracle(spec: str | None) -> Oracle:
    if not spec or spec == "empty":
        return Oracle.empty()
    kind, _, rest = spec.partition(":")
    reals = [_real(t) for t in rest.split(",") if t]
    if kind == "finite":
        return Oracle.finite(reals)
    if kind == "cofinite":
        return Oracle.cofinite(reals)
    raise UsageError(f"bad oracle {spec!r}; expected empty, finite:R,... or cofinite:R,...")


def _budgets(args, default: Budgets) -> Budgets:
    return Budgets(
        max_steps_per_block=args.budget_steps or default.max_steps_per_block,
        max_limit_depth=args.budget_depth or default.max_limit_depth,
        max_total_leaps=args.budget_leaps or default.max_total_leaps,
    )


def outcome_dict(o) -> dict:
    if isinstance(o, Halted):
        return {"kind": o.kind, "stage": format_ordinal(o.stage), "output": o.output.to_text()}
    if isinstance(o, Diverges):
        return {"kind": o.kind, "first_limit": format_ordinal(o.first_limit), "repeat_limit": format_ordinal(o.repeat_limit)}
    return {"kind": o.kind, "reason": o.reason.value, "last_stage": format_ordinal(o.last_stage), "diagnostics": o.diagnostics}


def show_real(r: EPReal) -> str:
    """Text form with at least one prefix cell, e.g. ``0|0`` for the zero real."""
    if r.prefix:
        return r.to_text()
    per = "".join(map(str, r.period))
    return per[0] + "|" + per[1:] + per[0]


def outcome_line(o) -> str:
    if isinstance(o, Halted):
        return f"Halted stage={format_ordinal(o.stage)} output={show_real(o.output)}"
    if isinstance(o, Diverges):
        return f"Diverges first={format_ordinal(o.first_limit)} repeat={format_ordinal(o.repeat_limit)}"
    return f"Undetermined reason={o.reason.value} last={format_ordinal(o.last_stage)}"


def _write_trace(result, args) -> None:
    if not args.trace:
        return
    if args.trace == "-":
        sys.stderr.write(result.trace_jsonl())
    else:
        Path(args.trace).write_text(result.trace_jsonl())


# subcommands


def cmd_assemble(args) -> int:
    p = load_program(args.source)
    if args.json:
        data = program_to_dict(p)
        validate(data, "program")
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    else:
        text = disassemble(p)
    _emit(text, args.output)
    return 0


def cmd_run(args) -> int:
    if bool(args.source) == bool(args.clock):
        raise UsageError("give exactly one of a program file or --clock")
    p = compile_clock(parse_ordinal(args.clock)) if args.clock else load_program(args.source)
    real = _real(args.input)
    result = run(
        p,
        real,
        _oracle(args.oracle),
        _budgets(args, Budgets()),
        rule=args.rule,
        trace_steps=args.trace_steps,
    )
    o = result.outcome
    if args.format == "json":
        report = {"program": p.name, "input": real.to_text(), "steps": result.steps, "outcome": outcome_dict(o)}
        validate(report, "run-report")
        print(json.dumps(report, sort_keys=True))
    else:
        print(outcome_line(o))
        if real != EPReal():
            n = decode_natural(real)
            coded = f" (codes the natural {n})" if n is not None else ""
            print(f"input={show_real(real)}{coded}")
    _write_trace(result, args)
    return EXIT[o.kind]


def cmd_clock(args) -> int:
    p = compile_clock(parse_ordinal(args.target), args.bound)
    _emit(disassemble(p), args.output)
    return 0


def cmd_census(args) -> int:
    report = census(args.states, _budgets(args, CENSUS_BUDGETS), args.workers)
    if args.json:
        data = report.to_dict()
        validate(data, "census")
        text = report.to_json()
    else:
        text = report.to_text()
    _emit(text, args.output)
    return 0


def cmd_wo(args) -> int:
    try:
        pairs = parse_pairs(args.pairs)
    except ValueError as e:
        raise UsageError(str(e)) from None
    result = run(wo_decider(), encode_relation(pairs), budgets=_budgets(args, Budgets()))
    o = result.outcome
    if isinstance(o, Halted):
        print("well-order: " + ("yes" if o.output[0] else "no"))
        print(f"stage={format_ordinal(o.stage)}")
    else:
        print("well-order: undetermined")
        print(outcome_line(o))
    _write_trace(result, args)
    return EXIT[o.kind]


def cmd_halt_decide(args) -> int:
    m = classical_from_dict(_read_json(args.machine, "classical"))
    result = run(halting_decider(m, args.n), budgets=_budgets(args, Budgets()))
    o = result.outcome
    if isinstance(o, Halted):
        print("halts: " + ("yes" if o.output[0] else "no"))
        print(f"stage={format_ordinal(o.stage)}")
    else:
        print(outcome_line(o))
    _write_trace(result, args)
    return EXIT[o.kind]


def cmd_encode(args) -> int:
    if args.natural is not None:
        print(encode_natural(args.natural).to_text())
    elif args.pairs is not None:
        print(encode_relation(parse_pairs(args.pairs)).to_text())
    elif args.pair is not None:
        print(pair(*args.pair))
    elif args.unpair is not None:
        i, j = unpair(args.unpair)
        print(f"{i} {j}")
    else:
        raise UsageError("encode needs one of --natural, --pairs, --pair, --unpair")
    return 0


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _add_budgets(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget-steps", type=int, help="successor steps allowed per omega-block")
    p.add_argument("--budget-depth", type=int, help="largest exponent e of limits w^e handled")
    p.add_argument("--budget-leaps", type=int, help="limit stages allowed in total")


def _add_trace(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trace", metavar="FILE", help="write the JSON-lines trace to FILE ('-' for stderr)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ittm", description="Infinite time Turing machine lab.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assemble", help="check a program and print its full listing or JSON form")
    p.add_argument("source")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("run", help="run a program through transfinite time")
    p.add_argument("source", nargs="?")
    p.add_argument("--clock", metavar="ORDINAL", help="run the compiled clock for ORDINAL instead of a file")
    p.add_argument("--input", default="|0", help="input real as prefix|period (default all zeros)")
    p.add_argument("--oracle", help="empty, finite:R1,R2,... or cofinite:R1,...")
    p.add_argument("--rule", choices=["limsup", "liminf"], default="limsup")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--trace-steps", type=int, default=0, help="successor steps per block to include in the trace")
    _add_budgets(p)
    _add_trace(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("clock", help="emit the clock program for an ordinal below w^3")
    p.add_argument("target")
    p.add_argument("--bound", type=int, default=16, help="largest coefficient accepted")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_clock)

    p = sub.add_parser("census", help="halting stages of every small program on input 0")
    p.add_argument("--states", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output")
    _add_budgets(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("wo", help="decide whether a finite relation is a well-order")
    p.add_argument("--pairs", required=True, help="comma-separated i<j pairs, e.g. 0<1,1<2")
    _add_budgets(p)
    _add_trace(p)
    p.set_defaults(func=cmd_wo)

    p = sub.add_parser("halt-decide", help="decide at stage w whether a classical machine halts")
    p.add_argument("machine", help="JSON file describing the classical machine")
    p.add_argument("--n", type=int, default=0, help="run on n ones")
    _add_budgets(p)
    _add_trace(p)
    p.set_defaults(func=cmd_halt_decide)

    p = sub.add_parser("encode", help="codes of naturals, relations and pairs")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--natural", type=int)
    g.add_argument("--pairs")
    g.add_argument("--pair", type=int, nargs=2, metavar=("I", "J"))
    g.add_argument("--unpair", type=int, metavar="K")
    p.set_defaults(func=cmd_encode)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, UsageError, MachineError, OrdinalSyntaxError, ClockError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
