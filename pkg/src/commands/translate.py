"""`translate`: LTLf formula to DFA artifacts."""

import argparse
import logging

from src.commands.common import add_source_arguments, load_task, read_formula, source_from_args
from src.exceptions import FormulaSyntaxError
from src.ltlf import Dfa, parse, to_dfa
from src.utils.reporting import ensure_dir

logger = logging.getLogger(__name__)


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("translate", help="Translate an LTLf formula into a minimal DFA")
    add_source_arguments(parser)
    parser.add_argument(
        "--propositions",
        default=None,
        help="Comma-separated propositions, used when no instance is given",
    )
    parser.add_argument("--out", default="out", help="Output directory")
    parser.set_defaults(func=run)


def cmd_translate(formula: str, out: str, propositions: list[str] | None = None) -> Dfa:
    dfa = to_dfa(parse(formula, propositions=propositions))
    out_dir = ensure_dir(out)
    (out_dir / "dfa.dot").write_text(dfa.to_dot(), encoding="utf-8")
    (out_dir / "dfa.json").write_text(dfa.to_json(), encoding="utf-8")
    logger.info(f"DFA with {dfa.num_states} states written to {out_dir}")
    return dfa


def run(args: argparse.Namespace) -> int:
    if args.instance or args.pddl_domain:
        task = load_task(source_from_args(args))
        formula = read_formula(args.formula, task)
        propositions = task.propositions
    else:
        if not args.formula:
            raise FormulaSyntaxError("translate needs --formula when no instance is given", 0)
        formula = read_formula(args.formula, None)
        propositions = args.propositions.split(",") if args.propositions else None
    cmd_translate(formula, args.out, propositions)
    return 0
