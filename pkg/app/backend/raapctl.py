"""
raapctl: command-line driver of the training and audit pipeline.

    raapctl datagen   draw the training and audit sets
    raapctl train     train the model zoo (or --model KIND)
    raapctl simulate  run the vendor fleet over the audit set
    raapctl audit     metrics, attribution and the user/operator reports
    raapctl sweep     seed sweep table and summary figure
    raapctl boundary  decision-boundary figures

Exit status: 0 on success, 1 on invalid input, 2 on runtime or numerical failure. Failures
also print one JSON line on standard error.
"""

import argparse
import asyncio
import logging
import os
import sys
from typing import Optional, Sequence

from config import CONFIG_ENV_LOG_LEVEL, DEFAULT_CONFIG_FILE, DEFAULT_LOG_LEVEL, PROJECT_LOGGERS
from decorators import handle_exceptions
from error import error_response
from exceptions.customexceptions import ValidationError
from learners.trainconfig import ModelKind
from load_env import default_config_path, load_env
from pipelinelib import (
    ArtifactStore,
    AuditStage,
    BoundaryStage,
    DatagenStage,
    RunConfig,
    SimulateStage,
    Stage,
    SweepStage,
    TrainStage,
    load_run_config,
)

logger = logging.getLogger("raapctl")


async def main(stage: Stage):
    await stage.setup()
    return await stage.run()


def configure_logging(verbose: bool) -> None:
    # Keep third-party libraries at WARNING; only the project's loggers follow APP_LOG_LEVEL
    logging.basicConfig(format="%(asctime)s %(levelname)s %(name)s: %(message)s", level=logging.WARNING)
    level = "INFO" if verbose else os.getenv(CONFIG_ENV_LOG_LEVEL, DEFAULT_LOG_LEVEL)
    for name in PROJECT_LOGGERS:
        logging.getLogger(name).setLevel(level.upper())


def resolve_config(args: argparse.Namespace) -> RunConfig:
    path: Optional[str] = args.config or default_config_path()
    if args.config is None and path == DEFAULT_CONFIG_FILE and not os.path.isfile(path):
        logger.info("No %s found; using the built-in defaults", DEFAULT_CONFIG_FILE)
        path = None
    config = load_run_config(path)
    return config.with_overrides(
        seed=args.seed,
        output_dir=args.out,
        floor=getattr(args, "floor", None),
        corrupt=getattr(args, "corrupt", None),
    )


def build_stage(args: argparse.Namespace, config: RunConfig) -> Stage:
    store = ArtifactStore(config.output_dir)
    kinds = [ModelKind(args.model)] if getattr(args, "model", None) else []
    if args.command == "datagen":
        return DatagenStage(config, store)
    if args.command == "train":
        return TrainStage(config, store, kinds)
    if args.command == "simulate":
        return SimulateStage(config, store)
    if args.command == "audit":
        return AuditStage(config, store)
    if args.command == "sweep":
        return SweepStage(config, store)
    return BoundaryStage(config, store, kinds)


def run_command(args: argparse.Namespace) -> int:
    @handle_exceptions(args.command)
    def command() -> None:
        config = resolve_config(args)
        result = asyncio.run(main(build_stage(args, config)))
        if args.command == "audit" and result.score is not None:
            print(f"attribution score: {result.score:.4f}")

    return command()


class RaapArgumentParser(argparse.ArgumentParser):
    """Usage errors follow the exit status contract (1) and print the JSON error line."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.exit(error_response(ValidationError(message, field="arguments"), self.prog))


def build_parser() -> argparse.ArgumentParser:
    parser = RaapArgumentParser(
        prog="raapctl",
        description="Train fairness-robust classifiers, simulate a multivendor agent fleet and audit its SLA violations.",
        epilog="Example: raapctl datagen && raapctl train && raapctl simulate && raapctl audit",
    )
    common = RaapArgumentParser(add_help=False)
    common.add_argument("--config", help=f"Run configuration (YAML). Defaults to $RAAP_CONFIG or {DEFAULT_CONFIG_FILE}")
    common.add_argument("--seed", type=int, help="Override the data and training seed")
    common.add_argument("--out", help="Override the output directory")
    common.add_argument("--verbose", "-v", action="store_true", help="Verbose output")

    model_choices = [kind.value for kind in ModelKind]
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("datagen", parents=[common], help="Draw the training and audit sets")
    train = commands.add_parser("train", parents=[common], help="Train one model or the whole zoo")
    train.add_argument("--model", choices=model_choices, help="Train only this model")
    commands.add_parser("simulate", parents=[common], help="Run the fleet over the audit set")
    audit = commands.add_parser("audit", parents=[common], help="Compute metrics and attribution, emit reports")
    audit.add_argument("--corrupt", type=float, help="Fraction of violation records whose loss is corrupted")
    audit.add_argument("--floor", type=float, help="Worst-group accuracy floor of the SLA")
    sweep = commands.add_parser("sweep", parents=[common], help="Evaluate every model over the seed list")
    sweep.add_argument("--floor", type=float, help="Worst-group accuracy floor of the SLA")
    boundary = commands.add_parser("boundary", parents=[common], help="Plot decision boundaries")
    boundary.add_argument("--model", choices=model_choices, help="Plot only this model")
    return parser


def cli(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    load_env()
    configure_logging(args.verbose)
    return run_command(args)


if __name__ == "__main__":
    sys.exit(cli())
