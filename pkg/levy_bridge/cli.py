"""
Module that provides the command line interface for the Levy Bridge library
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from levy_bridge.common import Experiment, NoiseFamily
from levy_bridge.config import get_config
from levy_bridge.exceptions import ConfigError
from levy_bridge.experiments import ExperimentRunner, default_grid
from levy_bridge.io import load_experiment_config, to_json
from levy_bridge.schemas import ExperimentConfig, Grid1D

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

EXIT_PASSED = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def _add_noise_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--kind", choices=[family.value for family in NoiseFamily], help="Noise family")
    parser.add_argument("--m", type=float, help="Relativistic mass (implies --kind relativistic)")


def build_parser() -> argparse.ArgumentParser:
    """Builds the levy-bridge parser with one subcommand per experiment plus run"""

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON or YAML experiment config; flags override its fields")
    common.add_argument("--output-dir", type=Path, dest="output_dir", help="Directory for output files")

    parser = argparse.ArgumentParser(prog="levy-bridge", description="Levy bridge experiments")
    commands = parser.add_subparsers(dest="command", required=True, metavar="experiment")

    run = commands.add_parser("run", help="Run the experiment named in a config file")
    run.add_argument("--config", type=Path, required=True, help="JSON or YAML experiment config")
    run.add_argument("--output-dir", type=Path, dest="output_dir", help="Directory for output files")

    evolve = commands.add_parser(Experiment.EVOLVE.value, parents=[common], help="Unitary evolution of psi0")
    _add_noise_flags(evolve)
    evolve.add_argument("--D", type=float, dest="D", help="Diffusion coefficient (implies --kind gaussian)")
    evolve.add_argument("--t", type=float, nargs="+", dest="times", help="Evolution times")
    evolve.add_argument("--grid-n", type=int, dest="grid_n", help="Grid points, a power of two")
    evolve.add_argument("--domain", type=float, help="Half width L of the grid [-L, L)")
    evolve.add_argument("--psi0", help="cauchy-lorentzian, gaussian or file:<csv>")

    bridge = commands.add_parser(Experiment.BRIDGE.value, parents=[common], help="Solve a bridge problem")
    bridge.add_argument("--problem", type=Path, dest="problem_file", help="JSON bridge problem file")
    bridge.add_argument("--t", type=float, nargs="+", dest="times", help="Interpolation times")

    simulate = commands.add_parser(Experiment.SIMULATE.value, parents=[common], help="Monte Carlo jump paths")
    _add_noise_flags(simulate)
    simulate.add_argument("--eps", type=float, help="Small-jump cutoff")
    simulate.add_argument("--T", type=float, dest="horizon", help="Simulation horizon")
    simulate.add_argument("--paths", type=int, help="Number of paths")
    simulate.add_argument("--seed", type=int, help="Master seed")
    simulate.add_argument("--t", type=float, nargs="+", dest="times", help="Observation times")
    simulate.add_argument("--band", type=float, nargs=2, metavar=("A", "B"), help="Jump size band")

    markov = commands.add_parser(Experiment.MARKOV_TEST.value, parents=[common], help="Non-Markov witness search")
    markov.add_argument("--s", type=float, help="Earlier time")
    markov.add_argument("--t", type=float, help="Later time")
    markov.add_argument("--p-range", type=float, nargs=2, dest="p_range", metavar=("LOW", "HIGH"), help="h(p) range")
    markov.add_argument("--seed", type=int, help="Seed of the random positive-definiteness trials")

    kernels = commands.add_parser(Experiment.KERNELS.value, parents=[common], help="Semigroup kernel tables")
    kernels.add_argument("--t", type=float, nargs="+", dest="times", help="Kernel times")
    kernels.add_argument("--m", type=float, help="Relativistic mass")

    jumprate = commands.add_parser(Experiment.JUMPRATE.value, parents=[common], help="Jump rate profiles")
    _add_noise_flags(jumprate)
    jumprate.add_argument("--eps", type=float, help="Finest small-jump cutoff")
    jumprate.add_argument("--t", type=float, dest="times", help="Time of the profiles")
    jumprate.add_argument("--interval", type=float, nargs=2, metavar=("A", "B"), help="Target interval A")

    commands.add_parser(Experiment.ACCEPTANCE.value, parents=[common], help="Full acceptance suite")
    return parser


def _noise(base: Optional[Dict[str, Any]], args: argparse.Namespace) -> Optional[Dict[str, Any]]:
    """Noise mapping with --kind, --m and --D applied over the config's noise"""

    kind, m, D = getattr(args, "kind", None), getattr(args, "m", None), getattr(args, "D", None)
    if m is not None and D is not None:
        raise ConfigError("--m and --D select different noise families")
    if kind is None and m is not None:
        kind = NoiseFamily.RELATIVISTIC.value
    if kind is None and D is not None:
        kind = NoiseFamily.GAUSSIAN.value
    if kind is None:
        return base
    noise = dict(base) if base and base.get("family") == kind else {"family": kind}
    if m is not None:
        if kind != NoiseFamily.RELATIVISTIC.value:
            raise ConfigError(f"--m requires relativistic noise: found {kind}")
        noise["m"] = m
    if D is not None:
        if kind != NoiseFamily.GAUSSIAN.value:
            raise ConfigError(f"--D requires gaussian noise: found {kind}")
        noise["D"] = D
    return noise


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Merges subcommand flags over the optional config file"""

    fields: Dict[str, Any] = {}
    if args.config is not None:
        fields = load_experiment_config(args.config).model_dump()
    if args.command != "run":
        fields["experiment"] = args.command
    if args.output_dir is not None:
        fields["output_dir"] = args.output_dir
    elif args.config is None:
        fields["output_dir"] = get_config().LEVY_BRIDGE_OUTPUT_DIR

    noise = _noise(fields.get("noise"), args)
    if noise is not None:
        fields["noise"] = noise
    for name in ("times", "problem_file", "eps", "horizon", "paths", "seed", "s", "t", "p_range", "psi0"):
        value = getattr(args, name, None)
        if value is not None:
            fields[name] = value
    if isinstance(fields.get("times"), float):
        fields["times"] = [fields["times"]]
    for flag in ("band", "interval"):
        bounds = getattr(args, flag, None)
        if bounds is not None:
            fields["interval"] = {"a": bounds[0], "b": bounds[1]}

    try:
        config = ExperimentConfig(**fields)
        grid_n, domain = getattr(args, "grid_n", None), getattr(args, "domain", None)
        if grid_n is not None or domain is not None:
            grid = config.grid or default_grid(config.noise)
            resized = Grid1D.symmetric(domain or grid.x_max, grid_n or grid.n)
            config = ExperimentConfig(**{**config.model_dump(), "grid": resized})
    except ValidationError as e:
        raise ConfigError(f"Invalid experiment config: {e.errors()[0]['msg']}") from e
    return config


def main(argv: Optional[List[str]] = None) -> int:
    """Runs one experiment and returns 0 when every check passed, 1 on a failed check and 2 on a config error"""

    args = build_parser().parse_args(argv)
    logging.basicConfig(level=get_config().LEVY_BRIDGE_LOG_LEVEL, stream=sys.stderr, format=LOG_FORMAT)

    try:
        config = config_from_args(args)
        report = ExperimentRunner().run(config)
    except ConfigError as e:
        logger.error(e.message)
        return EXIT_CONFIG

    if config.experiment == Experiment.MARKOV_TEST and "witness" in report.data:
        sys.stdout.write(to_json(report.data["witness"]))
    if not report.passed:
        logger.error("First failing check: %s", report.first_failure)
        return EXIT_FAILED
    return EXIT_PASSED
