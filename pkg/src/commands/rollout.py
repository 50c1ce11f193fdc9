"""`rollout`: replay a strategy artifact against a human policy."""

import argparse
import json
import logging
from pathlib import Path

from src.commands.common import Prepared, check_digest, load_artifact, prepare, strategy_arena
from src.enums import HumanPolicyKind
from src.exceptions import SchemaViolationError
from src.schema import RolloutStep, RolloutTranscript, StrategyArtifact
from src.solvers import Arena, HumanPolicy, Play, rollout
from src.utils.reporting import dumps_canonical, ensure_dir

logger = logging.getLogger(__name__)

TRANSCRIPT_FILE = "transcripts.json"


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("rollout", help="Play a strategy artifact against a human policy")
    parser.add_argument("--strategy", required=True, help="strategy.json written by synth")
    parser.add_argument(
        "--human",
        default="adversarial",
        help="adversarial | cooperative | random:SEED | script:PATH",
    )
    parser.add_argument("-n", type=int, default=1, help="Number of plays")
    parser.add_argument("--seed", type=int, default=0, help="Base seed for random humans without one")
    parser.add_argument("--max-steps", type=int, default=None)
    parser.add_argument("--max-states", type=int, default=None)
    parser.add_argument("--out", default="out", help="Output directory")
    parser.set_defaults(func=run)


def parse_human(text: str, human_names: list[str], seed: int = 0) -> HumanPolicy:
    kind, _, arg = text.partition(":")
    if kind == HumanPolicyKind.ADVERSARIAL.value:
        return HumanPolicy.adversarial()
    if kind == HumanPolicyKind.COOPERATIVE.value:
        return HumanPolicy.cooperative()
    if kind == HumanPolicyKind.RANDOM.value:
        return HumanPolicy.random(int(arg) if arg else seed)
    if kind in ("script", HumanPolicyKind.SCRIPTED.value):
        moves = json.loads(Path(arg).read_text(encoding="utf-8"))
        if not isinstance(moves, list):
            raise SchemaViolationError("Human script must be a JSON list", pointer="/")
        script = []
        for i, move in enumerate(moves):
            if isinstance(move, int):
                script.append(move)
            elif move in human_names:
                script.append(human_names.index(move))
            else:
                raise SchemaViolationError(f"Unknown human action {move!r}", pointer=f"/{i}")
        return HumanPolicy.scripted(script)
    raise SchemaViolationError(f"Unknown human policy '{text}'")


def transcript(prepared: Prepared, arena: Arena, policy: HumanPolicy, play: Play) -> RolloutTranscript:
    robot_names = prepared.task.robot_action_names()
    human_names = prepared.task.human_action_names()
    steps = []
    for step in play.steps:
        key = arena.keys[step.state]
        steps.append(
            RolloutStep(
                state=prepared.game.state_text(key[1]),
                dfa_state=key[2],
                action=robot_names[step.action],
                human_action=human_names[step.human_action],
                cost=step.cost,
            )
        )
    return RolloutTranscript(
        human=policy.kind,
        seed=policy.seed,
        steps=steps,
        payoff=play.payoff,
        accepted=play.accepted,
    )


def cmd_rollout(
    artifact: StrategyArtifact,
    human: str,
    n: int,
    seed: int = 0,
    max_steps: int | None = None,
    max_states: int | None = None,
) -> list[RolloutTranscript]:
    prepared = prepare(artifact.source, artifact.formula, max_states)
    check_digest(prepared, artifact)
    if n <= 0:
        return []
    arena, strategy = strategy_arena(prepared, artifact, max_states=max_states)
    human_names = prepared.task.human_action_names()
    transcripts = []
    for i in range(n):
        policy = parse_human(human, human_names, seed)
        if policy.kind == HumanPolicyKind.RANDOM:
            policy = HumanPolicy.random(policy.seed + i)
        play = rollout(arena, strategy, policy, max_steps=max_steps)
        transcripts.append(transcript(prepared, arena, policy, play))
    payoffs = [t.payoff for t in transcripts]
    logger.info(
        f"{n} {human} plays: payoff min {min(payoffs)} max {max(payoffs)}, "
        f"{sum(t.accepted for t in transcripts)} accepted"
    )
    return transcripts


def run(args: argparse.Namespace) -> int:
    artifact = load_artifact(args.strategy)
    transcripts = cmd_rollout(
        artifact,
        args.human,
        args.n,
        seed=args.seed,
        max_steps=args.max_steps,
        max_states=args.max_states,
    )
    target = ensure_dir(args.out) / TRANSCRIPT_FILE
    target.write_text(dumps_canonical([t.model_dump(mode="json") for t in transcripts]), encoding="utf-8")
    logger.info(f"Wrote {len(transcripts)} transcripts to {target}")
    return 0
