"""Poisson functionals as deterministic maps of a configuration."""

from abc import ABC, abstractmethod

import numpy as np

from lentparticle.core.errors import DomainError
from lentparticle.functionals.dual import PerturbedValue, seed_all, seed_none, seed_one
from lentparticle.poisson.path import Configuration


def _as_dual(result) -> PerturbedValue:
    if isinstance(result, PerturbedValue):
        return result
    return PerturbedValue(result, 0.0)


class Functional(ABC):
    """
    F(ω) evaluated through :meth:`compute` on a list of (possibly dual) jump sizes.

    Subclasses write ``compute`` once in dual-compatible arithmetic; plain
    evaluation, single-atom derivatives and full gradients all go through it,
    so the value part is identical in every mode.
    """

    name: str = "functional"
    # Measure moments the functional reads, e.g. ("m1",) for drift terms.
    moments: tuple[str, ...] = ()
    complex_valued: bool = False

    @abstractmethod
    def compute(self, config: Configuration, sizes: list) -> PerturbedValue | float | complex:
        """Evaluate on ``config`` with its sizes replaced by ``sizes``."""

    def evaluate(self, config: Configuration) -> float | complex:
        return _as_dual(self.compute(config, seed_none(config.sizes))).value

    def evaluate_dual(self, config: Configuration, atom_index: int) -> PerturbedValue:
        """
        Value and derivative in the size of atom ``atom_index``.

        Raises:
            DomainError: If the index does not name an atom
        """
        if not 0 <= atom_index < len(config):
            raise DomainError(
                f"Atom index {atom_index} outside a configuration of {len(config)} atoms"
            )
        result = _as_dual(self.compute(config, seed_one(config.sizes, atom_index)))
        return PerturbedValue(result.value, np.asarray(result.deriv)[()])

    def gradient(self, config: Configuration) -> PerturbedValue:
        """Value and the vector of derivatives in every atom's size."""
        n = len(config)
        result = _as_dual(self.compute(config, seed_all(config.sizes)))
        deriv = np.asarray(result.deriv)
        return PerturbedValue(result.value, np.zeros(n, dtype=deriv.dtype) + deriv)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"
