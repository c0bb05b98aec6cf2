"""Command-line front end: ``reactsynth synth|check|sig|sim``."""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import ParseError, ResourceLimit
from .ioi import oracle_verdict, simulate
from .nba import parse_nba
from .programs import VariableSet, parse_expr, parse_program, render_program
from .signatures import engine_for
from .synthesis import SynthesisOptions, Unrealizable, synthesize

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE, EXIT_LIMIT = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="reactsynth", description="Synthesize and check reactive Boolean programs.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, nba=True, delay=True):
        p.add_argument("--vars", required=True, help="comma-separated variable names, e.g. b1,b2")
        if delay:
            p.add_argument("--delay", "-k", type=int, required=True, help="delay bound k >= 0")
        if nba:
            p.add_argument("--nba", required=True, help="specification automaton file")

    p = sub.add_parser("synth", help="synthesize a program or report UNREALIZABLE")
    common(p)
    p.add_argument("--max-height", type=int, help="stop after this statement-tree height")
    p.add_argument("--verify", action="store_true", help="re-check the result with the trace oracle")
    p.add_argument("--out", help="write the program here instead of stdout")
    p.add_argument("--exprs", help="expression pool, e.g. 'true,false,b,!b'")
    p.add_argument("--max-states", type=int, default=SynthesisOptions.max_states)

    p = sub.add_parser("check", help="print the three verdicts of a program")
    common(p)
    p.add_argument("--prog", required=True)
    p.add_argument("--oracle", action="store_true", help="cross-check against the trace oracle")

    p = sub.add_parser("sig", help="dump the signatures of a program")
    common(p)
    p.add_argument("--prog", required=True)

    p = sub.add_parser("sim", help="run a program on an input bit string")
    common(p, nba=False, delay=False)
    p.add_argument("--prog", required=True)
    p.add_argument("--inputs", default="", help="input bits consumed in order")
    p.add_argument("--max-steps", type=int, default=10_000)
    return parser


def _synth(args, vars, out):
    exprs = None
    if args.exprs is not None:
        exprs = tuple(parse_expr(e.strip(), vars) for e in args.exprs.split(",") if e.strip())
    if args.max_height is not None and args.max_height < 1:
        raise _Usage("--max-height must be at least 1")
    opts = SynthesisOptions(max_height=args.max_height, exprs=exprs, max_states=args.max_states, verify=args.verify)
    result = synthesize(vars, parse_nba(_read(args.nba)), args.delay, opts)
    if isinstance(result, Unrealizable):
        print(result, file=out)
        return EXIT_FAIL
    text = render_program(result) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _check(args, vars, out):
    nba = parse_nba(_read(args.nba))
    prog = parse_program(_read(args.prog), vars)
    engine = engine_for(vars, nba, args.delay)
    verdict = engine.verdict(engine.eval(prog))
    print(verdict, file=out)
    code = EXIT_OK if verdict.accepted else EXIT_FAIL
    if args.oracle:
        oracle = oracle_verdict(prog, nba, args.delay, vars)
        agree = tuple(verdict) == tuple(oracle)
        print(f"oracle sat={int(oracle[0])} reactive={int(oracle[1])} delay={int(oracle[2])}"
              f" {'agree' if agree else 'DISAGREE'}", file=out)
        if not agree:
            code = EXIT_FAIL
    return code


def _sig(args, vars, out):
    nba = parse_nba(_read(args.nba))
    prog = parse_program(_read(args.prog), vars)
    engine = engine_for(vars, nba, args.delay)
    out.write(engine.dump(engine.eval(prog)))
    return EXIT_OK


def _sim(args, vars, out):
    prog = parse_program(_read(args.prog), vars)
    if any(c not in "01" for c in args.inputs):
        raise _Usage("--inputs must be a string of 0 and 1")
    trace = simulate(prog, args.inputs, args.max_steps, vars)
    print(f"outputs={trace.output_word} status={trace.status.value}", file=out)
    return EXIT_OK


class _Usage(Exception):
    pass


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(message)s")
    try:
        vars = VariableSet.parse(args.vars)
        if getattr(args, "delay", 0) < 0:
            raise _Usage("--delay must be nonnegative")
        handler = {"synth": _synth, "check": _check, "sig": _sig, "sim": _sim}[args.command]
        return handler(args, vars, out)
    except (_Usage, ValueError) as exc:
        print(f"reactsynth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"reactsynth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"reactsynth: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimit as exc:
        print(f"reactsynth: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
