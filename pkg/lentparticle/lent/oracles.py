"""Independent references for Γ: the closed form for stochastic integrals and finite differences."""

import logging

import numpy as np

from lentparticle.bottom.functions import ScalarTestFunction
from lentparticle.core.errors import DomainError
from lentparticle.functionals.base import Functional
from lentparticle.functionals.families import QUADRATURE_ORDER
from lentparticle.poisson.path import Configuration

logger = logging.getLogger(__name__)

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(QUADRATURE_ORDER)

DEFAULT_FD_STEP = 1e-5


def _interval_integrals(fn, config: Configuration) -> np.ndarray:
    """∫ fn(Y_s) ds over [0, α₁], [α₁, α₂], ..., [αₙ, T], by Gauss–Legendre."""
    m1 = config.spec.m1
    bounds = np.concatenate(([0.0], config.times, [config.horizon]))
    levels = np.concatenate(([0.0], np.cumsum(config.sizes)))
    half = 0.5 * np.diff(bounds)
    mid = 0.5 * (bounds[1:] + bounds[:-1])
    s = mid[:, None] + half[:, None] * _NODES[None, :]
    y = levels[:, None] - s * m1
    return half * (fn(y) @ _WEIGHTS)


def gamma_eq13_oracle(phi: ScalarTestFunction, config: Configuration) -> float:
    """
    Closed-form Γ[V] for V = ∫₀ᵀ φ(Y_{s−}) dY_s.

    Γ[V] = Σₖ xₖ² (φ(Y_{αₖ−}) + Σ_{j>k} φ′(Y_{αⱼ−}) xⱼ − m1 ∫_{αₖ}^T φ′(Y_s) ds)².

    Args:
        phi: Integrand with a first derivative
        config: Configuration ω

    Returns:
        Γ[V](ω)
    """
    n = len(config)
    if n == 0:
        return 0.0
    m1 = config.spec.m1
    sizes = config.sizes
    left_limits = np.concatenate(([0.0], np.cumsum(sizes)[:-1])) - config.times * m1

    jump_terms = phi.deriv1(left_limits) * sizes
    # Σ_{j>k} as a reversed exclusive cumulative sum.
    later_jumps = np.concatenate((np.cumsum(jump_terms[::-1])[::-1][1:], [0.0]))
    derivative = phi.value(left_limits) + later_jumps
    if m1 != 0.0:
        pieces = _interval_integrals(phi.deriv1, config)
        derivative = derivative - m1 * np.cumsum(pieces[::-1])[::-1][1:]
    return float(np.sum(sizes**2 * derivative**2))


def _fd_step(config: Configuration, x: float, h: float) -> float:
    contains = config.spec.contains
    if contains(x + h) and contains(x - h):
        return h
    shrunk = h / 10.0
    if contains(x + shrunk) and contains(x - shrunk):
        logger.debug(f"Shrinking finite-difference step to {shrunk} at x={x}")
        return shrunk
    raise DomainError(f"Finite-difference step {shrunk} leaves the support at x={x}")


def gamma_fd_oracle(F: Functional, config: Configuration, h: float = DEFAULT_FD_STEP) -> float:
    """
    Γ[F](ω) with central finite differences in each size.

    Args:
        F: Functional
        config: Configuration ω
        h: Step; shrunk tenfold once if x ± h leaves the support

    Returns:
        Σᵢ xᵢ² |(F(xᵢ + h) − F(xᵢ − h)) / 2h|²

    Raises:
        DomainError: If even the shrunk step leaves the support
    """
    if h <= 0.0:
        raise DomainError(f"Finite-difference step h={h} must be positive")
    total = 0.0
    for i, x in enumerate(config.sizes):
        step = _fd_step(config, float(x), h)
        upper = F.evaluate(config.with_size(i, x + step))
        lower = F.evaluate(config.with_size(i, x - step))
        total += x * x * abs((upper - lower) / (2.0 * step)) ** 2
    return float(total)
