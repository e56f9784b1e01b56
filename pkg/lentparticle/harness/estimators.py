"""Sample means, standard errors and the report builders that turn them into verdicts."""

from dataclasses import dataclass

import numpy as np

from lentparticle.harness.schemas import CheckKind, EstimateReport, Verdict

# Standard errors are floored at this multiple of max(1, |lhs|, |rhs|).
STDERR_FLOOR = 1e-12


@dataclass(frozen=True)
class Estimate:
    """Mean of real or complex samples with componentwise standard errors."""

    mean: complex
    stderr_real: float
    stderr_imag: float
    n: int

    @property
    def stderr(self) -> float:
        return float(np.hypot(self.stderr_real, self.stderr_imag))


def estimate(samples) -> Estimate:
    """
    Sample mean and standard error of the mean.

    With fewer than two samples the standard error is NaN, which fails any
    z-score comparison.
    """
    samples = np.asarray(samples)
    n = samples.size
    if n == 0:
        return Estimate(0j, float("nan"), float("nan"), 0)
    mean = complex(np.mean(samples))
    if n < 2:
        return Estimate(mean, float("nan"), float("nan"), n)
    se_real = float(np.std(samples.real, ddof=1) / np.sqrt(n))
    se_imag = float(np.std(samples.imag, ddof=1) / np.sqrt(n)) if np.iscomplexobj(samples) else 0.0
    return Estimate(mean, se_real, se_imag, n)


def exact(value: float | complex) -> Estimate:
    """A deterministic side of an identity."""
    return Estimate(complex(value), 0.0, 0.0, 0)


def z_score(
    lhs: Estimate, rhs: Estimate, difference: Estimate | None = None
) -> tuple[float, float]:
    """
    Componentwise z-score of lhs − rhs and the combined standard error.

    Args:
        lhs: Left-hand estimate
        rhs: Right-hand estimate
        difference: Estimate of paired differences; its errors replace the
            independent combination of ``lhs`` and ``rhs``

    Returns:
        (z, stderr), z being the larger of the real and imaginary z-scores
    """
    if difference is not None:
        se_re, se_im = difference.stderr_real, difference.stderr_imag
    else:
        se_re = float(np.hypot(lhs.stderr_real, rhs.stderr_real))
        se_im = float(np.hypot(lhs.stderr_imag, rhs.stderr_imag))
    floor = STDERR_FLOOR * max(1.0, abs(lhs.mean), abs(rhs.mean))
    gap = lhs.mean - rhs.mean
    z_re = abs(gap.real) / max(se_re, floor)
    z_im = abs(gap.imag) / max(se_im, floor)
    if np.isnan(z_re) or np.isnan(z_im):
        return float("nan"), float(np.hypot(se_re, se_im))
    return float(max(z_re, z_im)), float(np.hypot(se_re, se_im))


def statistical_report(
    name: str,
    lhs: Estimate,
    rhs: Estimate,
    z_max: float,
    difference: Estimate | None = None,
    notes: str = "",
    details: dict[str, float] | None = None,
) -> EstimateReport:
    """Build a z-score report; NaN z-scores fail."""
    z, stderr = z_score(lhs, rhs, difference)
    n = max(lhs.n, rhs.n, difference.n if difference is not None else 0)
    return EstimateReport(
        name=name,
        kind=CheckKind.STATISTICAL,
        lhs_real=lhs.mean.real,
        lhs_imag=lhs.mean.imag,
        rhs_real=rhs.mean.real,
        rhs_imag=rhs.mean.imag,
        stderr=stderr,
        n_samples=n,
        z_score=z,
        z_max=z_max,
        verdict=Verdict.PASS if z <= z_max else Verdict.FAIL,
        notes=notes,
        details=details or {},
    )


def relative_differences(lhs, rhs) -> np.ndarray:
    """|lhs − rhs| / max(1, |lhs|, |rhs|), elementwise."""
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    return np.abs(lhs - rhs) / scale


def pathwise_report(
    name: str,
    lhs,
    rhs,
    tolerance: float,
    notes: str = "",
    details: dict[str, float] | None = None,
) -> EstimateReport:
    """
    Build a tolerance report from per-configuration values of both sides.

    The reported sides are those of the configuration with the largest
    relative difference.
    """
    lhs = np.atleast_1d(np.asarray(lhs))
    rhs = np.atleast_1d(np.asarray(rhs))
    diffs = relative_differences(lhs, rhs)
    worst = int(np.argmax(diffs)) if diffs.size else 0
    max_diff = float(diffs[worst]) if diffs.size else 0.0
    left = complex(lhs[worst]) if lhs.size else 0j
    right = complex(rhs[worst]) if rhs.size else 0j
    return EstimateReport(
        name=name,
        kind=CheckKind.PATHWISE,
        lhs_real=left.real,
        lhs_imag=left.imag,
        rhs_real=right.real,
        rhs_imag=right.imag,
        n_samples=int(lhs.size),
        max_rel_diff=max_diff,
        tolerance=tolerance,
        verdict=Verdict.PASS if max_diff <= tolerance else Verdict.FAIL,
        notes=notes,
        details=details or {},
    )
