"""Kernels integrated against N⊙ρ and N in the Monte Carlo checks.

A :class:`MarkKernel` is F(ω, x, r) = Φ(ω)·g(x)·m(r); a :class:`ParticleKernel`
is H(ω, x) = (c + |Φ(ω)|²)·g(x) ≥ 0 when g ≥ 0. Mark factors are module-level
functions so that kernels pickle.
"""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from lentparticle.bottom.functions import ScalarTestFunction, identity
from lentparticle.bottom.structure import eta
from lentparticle.core.errors import PreconditionError
from lentparticle.functionals.base import Functional
from lentparticle.poisson.path import Configuration

# 64-point Gauss–Legendre mapped to [0, 1].
_MARK_NODES, _MARK_WEIGHTS = np.polynomial.legendre.leggauss(64)
_MARK_NODES = 0.5 * (_MARK_NODES + 1.0)
_MARK_WEIGHTS = 0.5 * _MARK_WEIGHTS

CENTERING_TOLERANCE = 1e-12


def unit_mark(r):
    return np.ones_like(np.asarray(r, dtype=float))


def linear_mark(r):
    return np.asarray(r, dtype=float)


@dataclass(frozen=True)
class MarkKernel:
    """F(ω, x, r) = Φ(ω)·g(x)·m(r)."""

    name: str
    size_factor: ScalarTestFunction
    mark_factor: Callable[[np.ndarray], np.ndarray]
    path_factor: Functional | None = None

    def atom_weights(self, config: Configuration) -> np.ndarray:
        """Φ(ω)·g(xᵢ) for every atom."""
        weights = np.asarray(self.size_factor.value(config.sizes), dtype=float)
        if self.path_factor is not None:
            weights = weights * self.path_factor.evaluate(config)
        return weights

    def values(self, config: Configuration, marks: np.ndarray) -> np.ndarray:
        """F(ω, xᵢ, rᵢ) for a (draws, atoms) or (atoms,) array of marks."""
        return self.atom_weights(config) * self.mark_factor(marks)

    def mark_moments(self) -> tuple[float, float]:
        """(∫m dρ, ∫m² dρ) by 64-point Gauss–Legendre."""
        m = self.mark_factor(_MARK_NODES)
        return float(_MARK_WEIGHTS @ m), float(_MARK_WEIGHTS @ (m * m))

    @property
    def centered(self) -> bool:
        return abs(self.mark_moments()[0]) <= CENTERING_TOLERANCE

    def require_centered(self) -> None:
        """
        Raises:
            PreconditionError: If ∫F dρ does not vanish
        """
        mean = self.mark_moments()[0]
        if abs(mean) > CENTERING_TOLERANCE:
            raise PreconditionError(f"Kernel '{self.name}' is not ρ-centered: ∫m dρ = {mean:.3g}")


def centered_kernel(
    g: ScalarTestFunction | None = None, path_factor: Functional | None = None
) -> MarkKernel:
    """g(x)·η(r), with g the identity by default."""
    g = g or identity()
    return MarkKernel(f"{g.name}·η(r)", g, eta, path_factor)


def linear_mark_kernel(g: ScalarTestFunction | None = None) -> MarkKernel:
    """g(x)·r: not ρ-centered."""
    g = g or identity()
    return MarkKernel(f"{g.name}·r", g, linear_mark)


def mark_free_kernel(g: ScalarTestFunction | None = None) -> MarkKernel:
    """g(x)·1: degenerate marks."""
    g = g or identity()
    return MarkKernel(f"{g.name}·1", g, unit_mark)


@dataclass(frozen=True)
class ParticleKernel:
    """H(ω, x) = (offset + |Φ(ω)|²)·g(x)."""

    name: str
    size_factor: ScalarTestFunction
    path_factor: Functional | None = None
    offset: float = 1.0

    def path_weight(self, config: Configuration) -> float:
        if self.path_factor is None:
            return self.offset
        return self.offset + abs(self.path_factor.evaluate(config)) ** 2

    def __call__(self, config: Configuration, x) -> np.ndarray:
        return self.path_weight(config) * np.asarray(self.size_factor.value(x), dtype=float)

    def sum_over_atoms(self, config: Configuration) -> float:
        """∫H dN = Σᵢ H(ω, xᵢ)."""
        if len(config) == 0:
            return 0.0
        return float(np.sum(self(config, config.sizes)))
