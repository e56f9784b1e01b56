"""Bottom space: truncated Lévy measure, test functions and the structure (γ, ♭, a)."""

from lentparticle.bottom.functions import ScalarTestFunction
from lentparticle.bottom.measure import JumpMeasureSpec, MeasureFactory, sample_jump
from lentparticle.bottom.structure import eta, flat, gamma_bottom, generator_a

__all__ = [
    "JumpMeasureSpec",
    "MeasureFactory",
    "ScalarTestFunction",
    "eta",
    "flat",
    "gamma_bottom",
    "generator_a",
    "sample_jump",
]
