"""Poisson configurations with intensity dt×σ, their marks and the compensated path Y."""

import logging
from dataclasses import dataclass, replace

import numpy as np

from lentparticle.bottom.measure import JumpMeasureSpec, sample_jump
from lentparticle.core.errors import AlignmentError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Atom:
    """A point (time, size) charged by a configuration."""

    time: float
    size: float


@dataclass(frozen=True)
class Configuration:
    """Finite realisation of N on [0, T]: atoms sorted by strictly increasing time."""

    horizon: float
    atoms: tuple[Atom, ...]
    spec: JumpMeasureSpec

    def __post_init__(self) -> None:
        previous = -np.inf
        for atom in self.atoms:
            if not 0.0 <= atom.time <= self.horizon:
                raise DomainError(f"Atom time {atom.time} outside [0, {self.horizon}]")
            if atom.time <= previous:
                raise DomainError(
                    f"Atom times must increase strictly, got {atom.time} after {previous}"
                )
            if atom.size == 0.0 or not self.spec.contains(atom.size):
                raise DomainError(f"Atom size {atom.size} outside support {self.spec.support}")
            previous = atom.time

    @classmethod
    def from_arrays(cls, spec: JumpMeasureSpec, horizon: float, times, sizes) -> "Configuration":
        atoms = tuple(Atom(float(t), float(x)) for t, x in zip(times, sizes))
        return cls(horizon=float(horizon), atoms=atoms, spec=spec)

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def times(self) -> np.ndarray:
        return np.array([atom.time for atom in self.atoms], dtype=float)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([atom.size for atom in self.atoms], dtype=float)

    def with_size(self, index: int, size: float) -> "Configuration":
        """Same configuration with atom ``index`` resized; ordering is unchanged."""
        atoms = list(self.atoms)
        atoms[index] = Atom(atoms[index].time, float(size))
        return replace(self, atoms=tuple(atoms))

    def without_atom(self, index: int) -> "Configuration":
        """Same configuration with atom ``index`` removed."""
        return replace(self, atoms=self.atoms[:index] + self.atoms[index + 1 :])


@dataclass(frozen=True)
class MarkSet:
    """i.i.d. uniform marks, one per atom, in atom order."""

    marks: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.marks)

    @property
    def values(self) -> np.ndarray:
        return np.array(self.marks, dtype=float)

    def check_aligned(self, config: Configuration) -> None:
        """
        Raises:
            AlignmentError: If there is not exactly one mark per atom
        """
        if len(self.marks) != len(config):
            raise AlignmentError(f"{len(self.marks)} marks for {len(config)} atoms")


def _distinct_sorted_times(n: int, horizon: float, stream: np.random.Generator) -> np.ndarray:
    times = np.sort(stream.uniform(0.0, horizon, size=n))
    while n > 1 and np.any(np.diff(times) <= 0.0):
        clash = np.concatenate(([False], np.diff(times) <= 0.0))
        logger.debug(f"Redrawing {int(clash.sum())} colliding atom times")
        times[clash] = stream.uniform(0.0, horizon, size=int(clash.sum()))
        times = np.sort(times)
    return times


def sample_configuration(
    spec: JumpMeasureSpec, horizon: float, stream: np.random.Generator
) -> Configuration:
    """
    Draw N on [0, T] with intensity dt×σ.

    Args:
        spec: Jump measure σ
        horizon: T ≥ 0 (T = 0 always gives the empty configuration)
        stream: Generator owned by this path

    Returns:
        Configuration with Poisson(λT) atoms, uniform times, σ/λ sizes

    Raises:
        DomainError: If T < 0
    """
    if horizon < 0.0:
        raise DomainError(f"Horizon T={horizon} must be non-negative")
    n = int(stream.poisson(spec.total_mass * horizon))
    times = _distinct_sorted_times(n, horizon, stream)
    sizes = sample_jump(spec, stream.random(n))
    return Configuration.from_arrays(spec, horizon, times, sizes)


def attach_marks(config: Configuration, stream: np.random.Generator) -> MarkSet:
    """Uniform [0, 1] marks for every atom; the configuration is not touched."""
    return MarkSet(tuple(float(r) for r in stream.random(len(config))))


def resample_marks(config: Configuration, stream: np.random.Generator, n_draws: int) -> np.ndarray:
    """``n_draws`` independent mark vectors as an array of shape (n_draws, atoms)."""
    return stream.random((n_draws, len(config)))


def _check_time(config: Configuration, t: float, left_open: bool) -> None:
    lower_ok = t > 0.0 if left_open else t >= 0.0
    if not (lower_ok and t <= config.horizon):
        bracket = "(" if left_open else "["
        raise DomainError(f"t={t} outside {bracket}0, {config.horizon}]")


def path_value(config: Configuration, t: float) -> float:
    """Y_t = Σ_{αᵢ ≤ t} xᵢ − t·m1 (right-continuous)."""
    _check_time(config, t, left_open=False)
    return float(config.sizes[config.times <= t].sum() - t * config.spec.m1)


def path_left_limit(config: Configuration, t: float) -> float:
    """Y_{t−} = Σ_{αᵢ < t} xᵢ − t·m1."""
    _check_time(config, t, left_open=True)
    return float(config.sizes[config.times < t].sum() - t * config.spec.m1)


def quadratic_variation(config: Configuration) -> float:
    """[Y, Y]_T = Σ xᵢ²."""
    return float(np.sum(config.sizes**2))
