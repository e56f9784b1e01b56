"""Command-line entry point: ``verify``, ``simulate`` and ``density``.

Exit codes: 0 success, 1 a check failed, 2 usage, configuration or output error.
"""

import argparse
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

from lentparticle import __version__
from lentparticle.bottom.measure import MeasureFactory
from lentparticle.cli import output
from lentparticle.config import LOG_LEVELS, Settings, load_settings
from lentparticle.core.errors import LentParticleError
from lentparticle.core.logging import setup_logging
from lentparticle.core.parallel import default_jobs
from lentparticle.core.streams import PathStreams
from lentparticle.functionals.catalog import FunctionalFactory, resolve_function
from lentparticle.harness.density import density_report
from lentparticle.harness.simulation import simulate_paths
from lentparticle.harness.suite import run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="TOML config file")
    common.add_argument("--seed", type=int, default=None, help="Master seed")
    common.add_argument("--paths", type=int, default=None, help="Number of simulated paths")
    common.add_argument("--marks", type=int, default=None, help="Mark draws per configuration")
    common.add_argument("--horizon", type=float, default=None, help="Time horizon T")
    common.add_argument(
        "--measure", choices=["stable", "uniform"], default=None, help="Built-in jump measure"
    )
    common.add_argument("--phi", default=None, help="Integrand name from the function catalog")
    common.add_argument(
        "--jobs", type=int, default=None, help="Worker processes (default: all cores)"
    )
    common.add_argument("--output", type=Path, default=None, help="Output directory")
    common.add_argument("--log-level", choices=LOG_LEVELS, default=None, help="Logging level")
    common.add_argument(
        "--json-logs", action="store_true", default=None, help="Emit logs as JSON lines"
    )

    parser = argparse.ArgumentParser(
        prog="lentparticle",
        description="Carré du champ and gradient of Poisson functionals by lent particles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", parents=[common], help="Run the identity checks")
    verify.add_argument(
        "--checks", default=None, help="Comma-separated check names (default: all)"
    )
    commands.add_parser(
        "simulate", parents=[common], help="Write sampled paths and functional values as CSV"
    )
    density = commands.add_parser(
        "density", parents=[common], help="Energy image density diagnostic for V"
    )
    density.add_argument("--bins", type=int, default=None, help="Histogram bins")
    return parser


def overrides_from_args(args: argparse.Namespace) -> dict[str, Any]:
    """Nested settings overrides for the flags that were given."""
    overrides: dict[str, dict[str, Any]] = {
        "measure": {},
        "experiment": {},
        "functional": {},
        "output": {},
    }
    experiment = overrides["experiment"]
    if args.seed is not None:
        experiment["seed"] = args.seed
    if args.paths is not None:
        experiment["n_paths"] = args.paths
        experiment["n_pathwise"] = args.paths
    if args.marks is not None:
        experiment["n_marks"] = args.marks
    if args.horizon is not None:
        experiment["T"] = args.horizon
    if args.jobs is not None:
        experiment["jobs"] = args.jobs
    if getattr(args, "bins", None) is not None:
        experiment["bins"] = args.bins
    if args.measure is not None:
        overrides["measure"]["name"] = args.measure
    if args.phi is not None:
        overrides["functional"]["phi_name"] = args.phi
        overrides["functional"]["phi_coeffs"] = None
    if args.output is not None:
        overrides["output"]["dir"] = args.output

    flat: dict[str, Any] = {section: values for section, values in overrides.items() if values}
    if args.log_level is not None:
        flat["log_level"] = args.log_level
    if args.json_logs:
        flat["json_logs"] = True
    return flat


def _prepare(config_path: Path | None, overrides: dict[str, Any]) -> Settings:
    settings = load_settings(config_path, overrides)
    setup_logging(settings.log_level, settings.json_logs)
    logger.debug(f"Settings: {settings.model_dump_json()}")
    return settings


def cmd_verify(
    config_path: Path | None, overrides: dict[str, Any], checks: list[str] | None = None
) -> int:
    """
    Run the selected checks, print the table and write the reports.

    Returns:
        0 if every check passes, 1 otherwise
    """
    settings = _prepare(config_path, overrides)
    reports = run_suite(settings, checks)

    formats = settings.output.formats
    if "table" in formats:
        output.print_report_table(reports)
    if "jsonl" in formats or "csv" in formats:
        out_dir = output.ensure_dir(settings.output.dir)
        if "jsonl" in formats:
            output.write_jsonl(reports, out_dir / "verify.jsonl")
        if "csv" in formats:
            output.write_csv(output.reports_frame(reports), out_dir / "verify.csv")

    failed = [report.name for report in reports if not report.passed]
    if failed:
        logger.warning(f"Failed checks: {', '.join(failed)}")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_simulate(config_path: Path | None, overrides: dict[str, Any]) -> int:
    """Write ``paths.csv`` and ``functionals.csv`` for ``n_paths`` sampled paths."""
    settings = _prepare(config_path, overrides)
    exp = settings.experiment
    spec = MeasureFactory.create(settings.measure)
    functional = FunctionalFactory.create(settings.functional, spec, exp.T)
    out_dir = output.ensure_dir(settings.output.dir)

    paths, values = simulate_paths(
        functional,
        spec,
        exp.T,
        exp.n_paths,
        PathStreams.named(exp.seed, "simulate"),
        jobs=exp.jobs or default_jobs(),
    )
    output.write_csv(paths, out_dir / "paths.csv")
    output.write_csv(values, out_dir / "functionals.csv")
    return EXIT_OK


def cmd_density(config_path: Path | None, overrides: dict[str, Any]) -> int:
    """Run the density diagnostic, write its CSV files and print the positivity fraction."""
    settings = _prepare(config_path, overrides)
    exp = settings.experiment
    spec = MeasureFactory.create(settings.measure)
    phi = resolve_function(settings.functional.phi_name, settings.functional.phi_coeffs)

    report = density_report(
        phi,
        spec,
        exp.T,
        exp.n_paths,
        PathStreams.named(exp.seed, "density"),
        bins=exp.bins,
        jobs=exp.jobs or default_jobs(),
    )
    out_dir = output.ensure_dir(settings.output.dir)
    samples, histogram = output.density_frames(report)
    output.write_csv(samples, out_dir / "density_samples.csv")
    output.write_csv(histogram, out_dir / "density_histogram.csv")
    if "jsonl" in settings.output.formats:
        output.write_jsonl([report], out_dir / "density.jsonl")
    output.print_density_summary(report)
    return EXIT_OK


def _dispatch(args: argparse.Namespace) -> Callable[[], int]:
    overrides = overrides_from_args(args)
    if args.command == "verify":
        checks = args.checks.split(",") if args.checks else None
        return lambda: cmd_verify(args.config, overrides, checks)
    if args.command == "simulate":
        return lambda: cmd_simulate(args.config, overrides)
    return lambda: cmd_density(args.config, overrides)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(args.log_level or "INFO", bool(args.json_logs))
    try:
        return _dispatch(args)()
    except LentParticleError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"Cannot write outputs: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
