"""The lent particle method: ε⁺, Γ upstairs, F♯ and reference oracles."""

from lentparticle.lent.gamma import (
    MarkLaw,
    gamma_up,
    mark_weights,
    sharp_realization,
    sharp_samples,
    value_and_gamma,
)
from lentparticle.lent.oracles import gamma_eq13_oracle, gamma_fd_oracle
from lentparticle.lent.particle import add_particle, lent_derivative

__all__ = [
    "MarkLaw",
    "add_particle",
    "gamma_eq13_oracle",
    "gamma_fd_oracle",
    "gamma_up",
    "lent_derivative",
    "mark_weights",
    "sharp_realization",
    "sharp_samples",
    "value_and_gamma",
]
