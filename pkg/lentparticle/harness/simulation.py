"""Sampling paths with their functional, Γ and one realisation of the gradient ♯."""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from lentparticle.bottom.measure import JumpMeasureSpec
from lentparticle.core.parallel import collect_paths
from lentparticle.core.streams import PathStreams
from lentparticle.functionals.base import Functional
from lentparticle.lent.gamma import MarkLaw, sharp_realization, value_and_gamma
from lentparticle.poisson.path import attach_marks, sample_configuration

logger = logging.getLogger(__name__)

PATH_COLUMNS = ["path_id", "time", "size", "mark"]


@dataclass(frozen=True)
class _SimulateTask:
    functional: Functional
    spec: JumpMeasureSpec
    horizon: float
    streams: PathStreams
    mark_law: MarkLaw

    def __call__(self, path_index: int):
        config = sample_configuration(self.spec, self.horizon, self.streams.path(path_index))
        marks = attach_marks(config, self.streams.marks(path_index))
        value, gamma = value_and_gamma(self.functional, config)
        sharp = sharp_realization(self.functional, config, marks, self.mark_law)
        atoms = [(path_index, a.time, a.size, r) for a, r in zip(config.atoms, marks.marks)]
        return atoms, complex(value), gamma, complex(sharp)


def simulate_paths(
    functional: Functional,
    spec: JumpMeasureSpec,
    horizon: float,
    n: int,
    streams: PathStreams,
    mark_law: MarkLaw = MarkLaw.UNIFORM_ETA,
    jobs: int = 1,
) -> tuple[pd.DataFrame, pd.DataFrame]:
    """
    Sample ``n`` marked configurations and evaluate the functional on each.

    Args:
        functional: Functional to evaluate
        spec: Jump measure
        horizon: Time horizon T
        n: Number of paths
        streams: Per-path streams
        mark_law: Law of the ♯ weights
        jobs: Worker processes

    Returns:
        (paths, functionals): one row per atom with columns path_id, time,
        size, mark; one row per path with columns path_id, V, Gamma_V,
        sharp_sample (plus V_imag and sharp_sample_imag for complex functionals)
    """
    logger.info(f"Simulating {n} paths of {functional.name}", extra={"n_samples": n})
    rows = collect_paths(_SimulateTask(functional, spec, horizon, streams, mark_law), n, jobs)

    atoms = [atom for row in rows for atom in row[0]]
    paths = pd.DataFrame(atoms, columns=PATH_COLUMNS).astype(
        {"path_id": "int64", "time": "float64", "size": "float64", "mark": "float64"}
    )

    values = np.array([row[1] for row in rows], dtype=complex)
    sharps = np.array([row[3] for row in rows], dtype=complex)
    columns = {
        "path_id": np.arange(n, dtype=np.int64),
        "V": values.real,
        "Gamma_V": np.array([row[2] for row in rows], dtype=float),
        "sharp_sample": sharps.real,
    }
    if functional.complex_valued:
        columns["V_imag"] = values.imag
        columns["sharp_sample_imag"] = sharps.imag
    return paths, pd.DataFrame(columns)
