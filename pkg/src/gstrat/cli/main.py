"""The `strat` command: eval, repl and check subcommands.

Exit codes: 0 on success, 1 on an evaluation error, 2 on a parse error.
Results go to stdout (or --out); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import GStratError
from .dsl import ParseError, parse
from .evaluate import Evaluator

EXIT_OK, EXIT_EVAL, EXIT_PARSE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="strat", description="Evaluate stratified-space scripts.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--emit", choices=("dot", "json"), help="render printed spaces in this format")
        sp.add_argument("--out", type=Path, help="write results to this file instead of stdout")
        sp.add_argument("--samples", type=int, default=1000, help="sample budget for model checks (0 disables)")
        sp.add_argument("--seed", type=int, default=0, help="seed for deterministic sampling")

    ev = sub.add_parser("eval", help="evaluate a script file")
    ev.add_argument("file", type=Path)
    common(ev)
    repl = sub.add_parser("repl", help="read statements interactively")
    common(repl)
    check = sub.add_parser("check", help="parse a script without evaluating it")
    check.add_argument("file", type=Path)
    return p


def _read(path: Path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    return path.read_text(encoding="utf-8")


def _evaluator(args) -> Evaluator:
    return Evaluator(samples=args.samples, seed=args.seed, emit=args.emit)


def cmd_check(args, out) -> int:
    try:
        script = parse(_read(args.file))
    except ParseError as exc:
        print(f"{args.file}:{exc}", file=sys.stderr)
        return EXIT_PARSE
    print(f"ok: {len(script.statements)} statement(s)", file=out)
    return EXIT_OK


def cmd_eval(args, out) -> int:
    try:
        script = parse(_read(args.file))
    except ParseError as exc:
        print(f"{args.file}:{exc}", file=sys.stderr)
        return EXIT_PARSE
    ev = _evaluator(args)
    for stmt in script.statements:
        try:
            text = ev.statement(stmt)
        except GStratError as exc:
            print(f"{args.file}:{exc}", file=sys.stderr)
            return EXIT_EVAL
        if text is not None:
            print(text, file=out)
    return EXIT_OK


def cmd_repl(args, out, stdin=None) -> int:
    """Statements may span lines; each is evaluated once its ';' is read.

    Errors are reported and the session continues; the exit status is the
    worst one seen (parse error over evaluation error over success).
    """
    stdin = stdin or sys.stdin
    ev = _evaluator(args)
    bound: set[str] = set()
    buffer = ""
    status = EXIT_OK
    interactive = stdin.isatty()
    while True:
        if interactive:
            print("... " if buffer.strip() else "strat> ", end="", file=sys.stderr, flush=True)
        line = stdin.readline()
        if not line:
            break
        buffer += line
        if ";" not in line:
            continue
        try:
            script = parse(buffer, bound)
        except ParseError as exc:
            if "end of input" in str(exc):
                continue
            print(exc, file=sys.stderr)
            buffer, status = "", max(status, EXIT_PARSE)
            continue
        buffer = ""
        for stmt in script.statements:
            try:
                text = ev.statement(stmt)
            except GStratError as exc:
                print(exc, file=sys.stderr)
                status = max(status, EXIT_EVAL)
                continue
            if text is not None:
                print(text, file=out, flush=True)
    if buffer.strip():
        print("incomplete statement at end of input", file=sys.stderr)
        status = EXIT_PARSE
    return status


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "check":
        return cmd_check(args, sys.stdout)
    out = open(args.out, "w", encoding="utf-8") if getattr(args, "out", None) else sys.stdout
    try:
        if args.command == "eval":
            return cmd_eval(args, out)
        return cmd_repl(args, out)
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
