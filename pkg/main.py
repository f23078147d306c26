"""Command-line entry point for the iCGS verification toolkit."""

import argparse
import sys
from typing import List, Optional

from dotenv import load_dotenv

from src.coordinator import EXIT_INPUT, VerificationCoordinator
from src.exceptions import ICGSError
from src.strategies import SEMANTICS
from src.utils.helpers import format_output

load_dotenv()


def _depths(text: str) -> List[int]:
    """``4``, ``2-6`` or ``2,4,9``."""
    depths = []
    for part in text.split(","):
        low, sep, high = part.partition("-")
        try:
            if sep:
                depths.extend(range(int(low), int(high) + 1))
            else:
                depths.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad depth list {text!r}") from None
    if not depths or min(depths) < 0:
        raise argparse.ArgumentTypeError(f"bad depth list {text!r}")
    return depths


def _coalition(text: str) -> List[str]:
    return [a.strip() for a in text.split(",") if a.strip()]


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the input-error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="icgs", description="Bounded ATL checking and alternating bisimulation for iCGS.")
    parser.add_argument("--format", choices=("json", "console"), default="json", help="report layout on stdout")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = commands.add_parser("validate", help="check a model's invariants")
    p.add_argument("--model", required=True, help="model file or built-in name")

    p = commands.add_parser("check", help="bounded model checking of one formula")
    p.add_argument("--model", required=True)
    p.add_argument("--history", help="e.g. 's0 1:a,2:x s1'; defaults to the initial state")
    p.add_argument("--formula", required=True)
    p.add_argument("--semantics", choices=SEMANTICS, default="obj")
    p.add_argument("--bound", type=int, default=2)

    p = commands.add_parser("bisim", help="bounded alternating bisimulation")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--coalition", type=_coalition, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--seed", help="relation file restricting the initial relation")
    p.add_argument("--mode", choices=("refine", "game", "both"), default="both")
    p.add_argument(
        "--strict-audit", action="store_true", help="report strict-condition violations of the refined relation"
    )
    p.add_argument("--distinguish", action="store_true", help="extract a distinguishing formula on a Spoiler win")
    p.add_argument("--trace", help="write the game trace as JSON lines")
    p.add_argument("--relation-out", help="write the refined relation")

    p = commands.add_parser("encode-tm", help="encode a Turing machine as a game")
    p.add_argument("--tm", required=True, help="machine file or built-in name (table1, halting)")
    p.add_argument("--out")

    p = commands.add_parser("emit", help="write a built-in example model")
    p.add_argument("--name", required=True)
    p.add_argument("--out")

    p = commands.add_parser("reduction", help="error avoidance in the machine game per depth")
    p.add_argument("--tm", required=True)
    p.add_argument("--depths", type=_depths, default=_depths("0-9"))
    return parser


def run(args: argparse.Namespace) -> dict:
    coordinator = VerificationCoordinator()
    if args.command == "validate":
        return coordinator.cmd_validate(args.model)
    if args.command == "check":
        return coordinator.cmd_check(args.model, args.history, args.formula, args.semantics, args.bound)
    if args.command == "bisim":
        return coordinator.cmd_bisim(
            args.left,
            args.right,
            args.coalition,
            args.depth,
            seed_path=args.seed,
            mode=args.mode,
            strict_audit=args.strict_audit,
            distinguish=args.distinguish,
            trace_path=args.trace,
            relation_out=args.relation_out,
        )
    if args.command == "encode-tm":
        return coordinator.cmd_encode_tm(args.tm, args.out)
    if args.command == "emit":
        return coordinator.cmd_emit(args.name, args.out)
    return coordinator.cmd_reduction(args.tm, args.depths)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command; the report goes to stdout, diagnostics to stderr."""
    args = build_parser().parse_args(argv)
    try:
        result = run(args)
    except ICGSError as e:
        result = {"success": False, "command": args.command, "exit_code": EXIT_INPUT, "error": str(e)}
    print(format_output(result, args.format))
    if not result["success"]:
        print(f"error: {result['error']}", file=sys.stderr)
    return result["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
