"""Energy image density diagnostic: V has a density where Γ[V] > 0 a.s."""

import logging
from dataclasses import dataclass

import numpy as np

from lentparticle.bottom.functions import ScalarTestFunction
from lentparticle.bottom.measure import JumpMeasureSpec
from lentparticle.core.parallel import map_paths
from lentparticle.core.streams import PathStreams
from lentparticle.functionals.families import StochasticIntegralFunctional
from lentparticle.harness.schemas import DensityReport
from lentparticle.lent.gamma import value_and_gamma
from lentparticle.poisson.path import sample_configuration

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _DensityTask:
    functional: StochasticIntegralFunctional
    streams: PathStreams

    def __call__(self, path_index: int) -> tuple[float, float, int]:
        config = sample_configuration(
            self.functional.spec, self.functional.horizon, self.streams.path(path_index)
        )
        value, gamma = value_and_gamma(self.functional, config)
        return float(value), gamma, len(config)


def density_report(
    phi: ScalarTestFunction,
    spec: JumpMeasureSpec,
    horizon: float,
    n: int,
    streams: PathStreams,
    bins: int = 50,
    jobs: int = 1,
) -> DensityReport:
    """
    Sample (V, Γ[V]) for V = ∫φ(Y_−)dY and summarise them.

    Positivity and duplicates are counted among paths with at least one jump;
    the empty configuration always gives the same V and Γ[V] = 0.

    Args:
        phi: Integrand
        spec: Jump measure
        horizon: Time horizon T
        n: Number of paths
        streams: Per-path streams
        bins: Histogram bins for V
        jobs: Worker processes

    Returns:
        Report carrying the samples, positivity fraction, duplicates and histogram
    """
    functional = StochasticIntegralFunctional(phi, spec, horizon)
    logger.info(f"Sampling {functional.name} for the density report", extra={"n_samples": n})
    rows = map_paths(_DensityTask(functional, streams), n, jobs)
    values = rows[:, 0]
    gammas = rows[:, 1]
    jumps = rows[:, 2].astype(int)

    jumpy = jumps > 0
    n_jumpy = int(np.count_nonzero(jumpy))
    positivity = float(np.mean(gammas[jumpy] > 0.0)) if n_jumpy else 0.0
    jumpy_values = values[jumpy]
    duplicates = int(jumpy_values.size - np.unique(jumpy_values).size)
    counts, edges = np.histogram(values, bins=bins)

    if duplicates:
        logger.warning(f"{duplicates} repeated values of V among paths with jumps")
    return DensityReport(
        name=functional.name,
        n_paths=n,
        n_jumpy=n_jumpy,
        positivity_fraction=positivity,
        duplicate_count=duplicates,
        histogram_edges=edges.tolist(),
        histogram_counts=counts.tolist(),
        values=values.tolist(),
        gammas=gammas.tolist(),
        jump_counts=jumps.tolist(),
    )
