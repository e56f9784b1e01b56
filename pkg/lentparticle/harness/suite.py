"""Registry of the identity checks and their default test functions."""

import logging
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass

from lentparticle.bottom import functions
from lentparticle.bottom.functions import ScalarTestFunction
from lentparticle.bottom.measure import JumpMeasureSpec, MeasureFactory
from lentparticle.config import ExperimentSettings, Settings
from lentparticle.core.errors import ConfigurationError
from lentparticle.core.parallel import default_jobs
from lentparticle.core.streams import PathStreams
from lentparticle.functionals.catalog import CATALOG, resolve_function
from lentparticle.functionals.families import LinearFunctional, StochasticIntegralFunctional
from lentparticle.harness import checks
from lentparticle.harness.kernels import (
    ParticleKernel,
    centered_kernel,
    linear_mark_kernel,
)
from lentparticle.harness.schemas import EstimateReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteContext:
    """Everything a check needs besides its own test functions."""

    spec: JumpMeasureSpec
    horizon: float
    experiment: ExperimentSettings
    phi: ScalarTestFunction
    jobs: int = 1

    def streams(self, name: str) -> PathStreams:
        return PathStreams.named(self.experiment.seed, name)


def interior_bumps(spec: JumpMeasureSpec) -> tuple[ScalarTestFunction, ScalarTestFunction]:
    """Two overlapping bumps compactly supported inside the rightmost support interval."""
    piece = spec.pieces[-1]
    length = piece.hi - piece.lo
    first = functions.bump(center=piece.lo + 0.45 * length, width=0.35 * length, amplitude=3.0)
    second = functions.bump(center=piece.lo + 0.55 * length, width=0.3 * length, amplitude=2.0)
    return first, second


def _isometry(ctx: SuiteContext) -> list[EstimateReport]:
    exp = ctx.experiment
    return [
        checks.check_isometry(
            functions.identity(),
            ctx.spec,
            ctx.horizon,
            exp.n_paths,
            ctx.streams("isometry"),
            z_max=exp.z_max,
            jobs=ctx.jobs,
        )
    ]


def _eq1(ctx: SuiteContext) -> list[EstimateReport]:
    exp = ctx.experiment
    f, h = interior_bumps(ctx.spec)
    return [
        checks.check_eq1(
            f,
            h,
            ctx.spec,
            ctx.horizon,
            exp.n_paths,
            ctx.streams("eq1"),
            z_max=exp.z_max,
            jobs=ctx.jobs,
        )
    ]


def _lemma1(ctx: SuiteContext) -> list[EstimateReport]:
    exp = ctx.experiment
    return [
        checks.check_lemma1(
            centered_kernel(),
            ctx.spec,
            ctx.horizon,
            exp.n_mark_configs,
            exp.n_marks,
            ctx.streams("lemma1"),
            z_max=exp.z_max,
            jobs=ctx.jobs,
        )
    ]


def _second_moment(ctx: SuiteContext) -> list[EstimateReport]:
    exp = ctx.experiment
    return [
        checks.check_second_moment_identity(
            linear_mark_kernel(),
            ctx.spec,
            ctx.horizon,
            exp.n_mark_configs,
            exp.n_marks,
            ctx.streams("second_moment"),
            z_max=exp.z_max,
            jobs=ctx.jobs,
        )
    ]


def _eq6(ctx: SuiteContext) -> list[EstimateReport]:
    exp = ctx.experiment
    kernel = ParticleKernel(
        name="x²(1 + Ñ(x)²)",
        size_factor=CATALOG["square"](),
        path_factor=LinearFunctional(functions.identity(), ctx.spec, ctx.horizon),
    )
    return [
        checks.check_eq6(
            kernel,
            ctx.spec,
            ctx.horizon,
            exp.n_paths,
            exp.n_inner,
            ctx.streams("eq6"),
            z_max=exp.z_max,
            jobs=ctx.jobs,
        )
    ]


def _eq7(ctx: SuiteContext) -> list[EstimateReport]:
    # V = ∫φ(Y₋)dY reads the atoms in time order.
    kernel = centered_kernel(
        path_factor=StochasticIntegralFunctional(CATALOG["sigmoid"](), ctx.spec, ctx.horizon)
    )
    return [
        checks.check_eq7(
            kernel,
            ctx.spec,
            ctx.horizon,
            ctx.experiment.n_pathwise,
            ctx.streams("eq7"),
            jobs=ctx.jobs,
        )
    ]


def _eq9_eq12(ctx: SuiteContext) -> list[EstimateReport]:
    exp = ctx.experiment
    f, g = interior_bumps(ctx.spec)
    return [
        checks.check_eq9_eq12(
            f,
            g,
            ctx.spec,
            ctx.horizon,
            exp.n_mark_configs,
            exp.n_marks,
            ctx.streams("eq9_eq12"),
            z_max=exp.z_max,
            jobs=ctx.jobs,
        )
    ]


def _eq10(ctx: SuiteContext) -> list[EstimateReport]:
    exp = ctx.experiment
    f, g = interior_bumps(ctx.spec)
    return [
        checks.check_eq10(
            f,
            g,
            ctx.spec,
            ctx.horizon,
            exp.n_paths,
            ctx.streams("eq10"),
            z_max=exp.z_max,
            jobs=ctx.jobs,
        )
    ]


def _eq11(ctx: SuiteContext) -> list[EstimateReport]:
    fs = [resolve_function(name) for name in ("identity", "square", "sigmoid", "affine")]
    fs.append(interior_bumps(ctx.spec)[0])
    return [
        checks.check_eq11(
            fs,
            ctx.spec,
            ctx.horizon,
            ctx.experiment.n_pathwise,
            ctx.streams("eq11"),
            jobs=ctx.jobs,
        )
    ]


EQ13_INTEGRANDS = ("identity", "affine", "bump", "sigmoid")


def _eq13(ctx: SuiteContext) -> list[EstimateReport]:
    phis = [ctx.phi]
    for name in EQ13_INTEGRANDS:
        phi = resolve_function(name)
        if phi.name not in {p.name for p in phis}:
            phis.append(phi)
    return [
        checks.check_eq13(
            phi,
            ctx.spec,
            ctx.horizon,
            ctx.experiment.n_pathwise,
            ctx.streams("eq13"),
            jobs=ctx.jobs,
        )
        for phi in phis
    ]


def _wiener_integral(ctx: SuiteContext) -> list[EstimateReport]:
    return [
        checks.check_wiener_integral(
            CATALOG["sigmoid"](),
            ctx.spec,
            ctx.horizon,
            ctx.experiment.n_pathwise,
            ctx.streams("wiener_integral"),
            jobs=ctx.jobs,
        )
    ]


CHECKS: dict[str, Callable[[SuiteContext], list[EstimateReport]]] = {
    "isometry": _isometry,
    "eq1": _eq1,
    "lemma1": _lemma1,
    "second_moment": _second_moment,
    "eq6": _eq6,
    "eq7": _eq7,
    "eq9_eq12": _eq9_eq12,
    "eq10": _eq10,
    "eq11": _eq11,
    "eq13": _eq13,
    "wiener_integral": _wiener_integral,
}


def resolve_checks(names: Iterable[str] | None = None) -> list[str]:
    """
    Validate check names, keeping registry order; None selects every check.

    Raises:
        ConfigurationError: If a name is not registered
    """
    if names is None:
        return list(CHECKS)
    requested = [name.strip() for name in names if name.strip()]
    unknown = [name for name in requested if name not in CHECKS]
    if unknown:
        raise ConfigurationError(
            f"Unknown check(s): {', '.join(unknown)}. Available: {', '.join(CHECKS)}"
        )
    return [name for name in CHECKS if name in requested]


def build_context(settings: Settings) -> SuiteContext:
    """Measure, horizon, integrand and parallelism from settings."""
    return SuiteContext(
        spec=MeasureFactory.create(settings.measure),
        horizon=settings.experiment.T,
        experiment=settings.experiment,
        phi=resolve_function(settings.functional.phi_name, settings.functional.phi_coeffs),
        jobs=settings.experiment.jobs or default_jobs(),
    )


def run_suite(settings: Settings, names: Iterable[str] | None = None) -> list[EstimateReport]:
    """
    Run the selected checks in registry order.

    Args:
        settings: Run settings
        names: Check names; None runs all

    Returns:
        One report per check (several for ``eq13``, one per integrand)

    Raises:
        ConfigurationError: If a check name is unknown
    """
    selected = resolve_checks(names)
    ctx = build_context(settings)
    reports: list[EstimateReport] = []
    for name in selected:
        started = time.perf_counter()
        results = CHECKS[name](ctx)
        elapsed = time.perf_counter() - started
        for report in results:
            logger.info(
                f"{report.name}: {report.verdict.value}",
                extra={"check": report.name, "n_samples": report.n_samples, "elapsed_s": elapsed},
            )
        reports.extend(results)
    return reports
