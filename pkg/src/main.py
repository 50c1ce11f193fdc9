import argparse
import logging
import sys

from src.commands import bench, rollout, synth, translate
from src.config.logging_config import setup_logging
from src.config.settings import get_settings
from src.exceptions import SynthesisError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddsynth",
        description="Reactive synthesis for human-robot manipulation over decision diagrams",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (synth, translate, bench, rollout):
        command.add_parser(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    settings = get_settings()
    setup_logging(settings.log_level, settings.log_dir)
    args = build_parser().parse_args(argv)
    logger.debug(f"Running '{args.command}' with {vars(args)}")
    try:
        return args.func(args)
    except SynthesisError as e:
        logger.error(f"{e.__class__.__name__}: {e.message}")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
