"""Carré du champ Γ and gradient ♯ upstairs.

Lending a particle at an existing atom and taking it back reduces to
differentiating in that atom's size, so with one dual pass per configuration

    Γ[F](ω) = Σᵢ xᵢ² |∂F/∂xᵢ|²,    F♯ = Σᵢ xᵢ (∂F/∂xᵢ) wᵢ,

where the weights wᵢ are η(rᵢ) or standard normals built from the marks.
"""

from enum import Enum

import numpy as np
from scipy.special import ndtri

from lentparticle.bottom.structure import eta
from lentparticle.core.errors import AlignmentError
from lentparticle.functionals.base import Functional
from lentparticle.poisson.path import Configuration, MarkSet

# Keeps ndtri finite at the ends of [0, 1).
_MARK_EPS = 2.0**-53


class MarkLaw(str, Enum):
    """How uniform marks become the weights of F♯."""

    UNIFORM_ETA = "uniform-eta"
    GAUSSIAN = "gaussian"


def mark_weights(marks, law: MarkLaw = MarkLaw.UNIFORM_ETA) -> np.ndarray:
    """Centered, unit-variance weights from uniform marks."""
    marks = np.asarray(marks, dtype=float)
    if MarkLaw(law) is MarkLaw.GAUSSIAN:
        return ndtri(np.clip(marks, _MARK_EPS, 1.0 - _MARK_EPS))
    return eta(marks)


def sharp_coefficients(F: Functional, config: Configuration) -> np.ndarray:
    """Vector xᵢ ∂F/∂xᵢ, one entry per atom."""
    if len(config) == 0:
        return np.zeros(0)
    return config.sizes * F.gradient(config).deriv


def value_and_gamma(F: Functional, config: Configuration) -> tuple[float | complex, float]:
    """F(ω) and Γ[F](ω) from a single gradient pass."""
    result = F.gradient(config)
    if len(config) == 0:
        return result.value, 0.0
    coeffs = config.sizes * np.asarray(result.deriv)
    return result.value, float(np.sum(np.abs(coeffs) ** 2))


def gamma_up(F: Functional, config: Configuration) -> float:
    """
    Γ[F](ω) = Σᵢ xᵢ² |∂F/∂xᵢ|²; the hermitian form for complex F.

    Args:
        F: Functional
        config: Configuration ω

    Returns:
        Non-negative Γ[F](ω), 0 on the empty configuration
    """
    return value_and_gamma(F, config)[1]


def sharp_realization(
    F: Functional, config: Configuration, marks: MarkSet, mark_law: MarkLaw = MarkLaw.UNIFORM_ETA
):
    """
    One realisation of F♯ = Σᵢ xᵢ (∂F/∂xᵢ) wᵢ.

    Raises:
        AlignmentError: If ``marks`` does not carry one mark per atom
    """
    marks.check_aligned(config)
    coeffs = sharp_coefficients(F, config)
    total = np.sum(coeffs * mark_weights(marks.values, mark_law))
    return total.item() if isinstance(total, np.generic) else total


def sharp_samples(
    F: Functional,
    config: Configuration,
    mark_draws: np.ndarray,
    mark_law: MarkLaw = MarkLaw.UNIFORM_ETA,
) -> np.ndarray:
    """F♯ for each row of a (draws, atoms) mark matrix, sharing one gradient pass."""
    mark_draws = np.asarray(mark_draws, dtype=float)
    if mark_draws.ndim != 2 or mark_draws.shape[1] != len(config):
        raise AlignmentError(f"Mark matrix of shape {mark_draws.shape} for {len(config)} atoms")
    return mark_weights(mark_draws, mark_law) @ sharp_coefficients(F, config)
