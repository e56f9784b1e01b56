"""Poisson functionals evaluable in plain and dual arithmetic."""

from lentparticle.functionals.base import Functional
from lentparticle.functionals.dual import PerturbedValue
from lentparticle.functionals.families import (
    A0Operator,
    apply_A0,
    composed_functional,
    deterministic_integral_functional,
    exponential_functional,
    exponential_sum_functional,
    linear_functional,
    stochastic_integral_functional,
)

__all__ = [
    "A0Operator",
    "Functional",
    "PerturbedValue",
    "apply_A0",
    "composed_functional",
    "deterministic_integral_functional",
    "exponential_functional",
    "exponential_sum_functional",
    "linear_functional",
    "stochastic_integral_functional",
]
