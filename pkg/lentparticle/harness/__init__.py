"""Monte Carlo and pathwise verification of the lent particle identities."""

from lentparticle.harness.checks import (
    check_eq1,
    check_eq6,
    check_eq7,
    check_eq9_eq12,
    check_eq10,
    check_eq11,
    check_eq13,
    check_isometry,
    check_lemma1,
    check_second_moment_identity,
    check_wiener_integral,
)
from lentparticle.harness.density import density_report
from lentparticle.harness.schemas import DensityReport, EstimateReport, Verdict
from lentparticle.harness.suite import CHECKS, run_suite

__all__ = [
    "CHECKS",
    "DensityReport",
    "EstimateReport",
    "Verdict",
    "check_eq1",
    "check_eq6",
    "check_eq7",
    "check_eq9_eq12",
    "check_eq10",
    "check_eq11",
    "check_eq13",
    "check_isometry",
    "check_lemma1",
    "check_second_moment_identity",
    "check_wiener_integral",
    "density_report",
    "run_suite",
]
