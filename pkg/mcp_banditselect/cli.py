"""Command-line entry point for running experiments.

    banditselect run --experiment fig1-topleft [--horizon N] [--instances N] [--seed N]
                     [--algorithms a,b,c] [--out DIR] [--workers N] [--config FILE]
    banditselect list-experiments
    banditselect validate-config FILE

Exit codes: 0 on success, 1 on a configuration error, 2 when too many
instances failed.
"""

import argparse
import sys
from typing import List

from loguru import logger

from .core.errors import ConfigError, ExperimentRuntimeError
from .core.harness import ExperimentConfig, load_experiment_config, load_presets, run_and_write

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def build_parser() -> argparse.ArgumentParser:
    """Build the parser of the three subcommands.

    Returns:
        argparse.ArgumentParser: Parser for ``run``, ``list-experiments`` and
            ``validate-config``. Every ``run`` flag defaults to ``None`` so that
            only flags given on the command line override the config.
    """
    parser = argparse.ArgumentParser(prog="banditselect", description="Model-selection bandit experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment and write its artifacts")
    run.add_argument("--experiment", default=None, help="preset name, see list-experiments")
    run.add_argument("--config", default=None, help="flat YAML config file")
    run.add_argument("--horizon", type=int, default=None)
    run.add_argument("--instances", type=int, default=None)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--algorithms", default=None, help="comma-separated algorithm labels")
    run.add_argument("--out", default=None, help="output directory")
    run.add_argument("--workers", type=int, default=None, help="worker processes")

    sub.add_parser("list-experiments", help="list the experiment presets")

    validate = sub.add_parser("validate-config", help="check a config file and print the resolved plan")
    validate.add_argument("path")
    return parser


def describe_presets() -> List[str]:
    """One ``- <name>: <description>`` line per preset."""
    return [f"- {name}: {preset.get('description', '')}" for name, preset in load_presets().items()]


def _read_config(path: str) -> ExperimentConfig:
    """Load a config file.

    Raises:
        ConfigError: If the file is unreadable or fails validation.
    """
    try:
        return load_experiment_config(path)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e


def _run(args: argparse.Namespace) -> int:
    """Run an experiment and print its final regret.

    The function:
    1. Starts from the config file, or from an empty config
    2. Applies the command-line flags on top
    3. Resolves the plan and runs it, writing the artifacts
    4. Prints one line per algorithm and the artifact directory

    Returns:
        int: ``EXIT_OK``; errors propagate to :func:`main`.
    """
    # Config file first, flags override it
    config = _read_config(args.config) if args.config else ExperimentConfig()
    config = config.override(
        experiment=args.experiment,
        horizon=args.horizon,
        n_instances=args.instances,
        master_seed=args.seed,
        algorithms=args.algorithms,
        output_dir=args.out,
        n_workers=args.workers,
    )
    plan = config.resolve()
    outcome, paths = run_and_write(plan)

    # Final mean and standard deviation per algorithm
    for algorithm in outcome.table.algorithms:
        mean, std, n = outcome.table.final(algorithm)
        print(f"{algorithm}: final regret {mean:.4f} ± {std:.4f} over {n} instance(s)")
    print(f"artifacts: {paths['csv'].parent}")
    return EXIT_OK


def _validate(args: argparse.Namespace) -> int:
    plan = _read_config(args.path).resolve()
    for key, value in plan.to_dict().items():
        print(f"{key}: {value}")
    return EXIT_OK


def main(argv: List[str] | None = None) -> int:
    """Parse ``argv`` and dispatch to the subcommand.

    Returns:
        int: ``EXIT_OK``, ``EXIT_CONFIG`` on a configuration error or
            ``EXIT_RUNTIME`` when too many instances failed.

    Note:
        - Errors are logged through loguru, results go to stdout
    """
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-experiments":
            print("\n".join(describe_presets()))
            return EXIT_OK
        if args.command == "validate-config":
            return _validate(args)
        return _run(args)
    except ConfigError as e:
        logger.error(f"❌ config error: {e}")
        return EXIT_CONFIG
    except ExperimentRuntimeError as e:
        logger.error(f"❌ {e}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
