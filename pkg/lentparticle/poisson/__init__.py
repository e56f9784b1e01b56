"""Poisson random measure N with intensity dt×σ, its marks and the pure-jump path."""

from lentparticle.poisson.path import (
    Atom,
    Configuration,
    MarkSet,
    attach_marks,
    path_left_limit,
    path_value,
    quadratic_variation,
    resample_marks,
    sample_configuration,
)

__all__ = [
    "Atom",
    "Configuration",
    "MarkSet",
    "attach_marks",
    "path_left_limit",
    "path_value",
    "quadratic_variation",
    "resample_marks",
    "sample_configuration",
]
