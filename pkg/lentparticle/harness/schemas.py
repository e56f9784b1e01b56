"""Pydantic schemas for check and diagnostic reports."""

from enum import Enum

from pydantic import BaseModel, Field


class CheckKind(str, Enum):
    """How a check decides its verdict."""

    STATISTICAL = "statistical"
    PATHWISE = "pathwise"


class Verdict(str, Enum):
    """Outcome of a check."""

    PASS = "pass"
    FAIL = "fail"


class EstimateReport(BaseModel):
    """Result of one identity check."""

    name: str = Field(..., description="Identifier of the identity")
    kind: CheckKind = Field(..., description="Statistical (z-score) or pathwise (tolerance)")
    lhs_real: float = Field(..., description="Real part of the left-hand side")
    lhs_imag: float = Field(0.0, description="Imaginary part of the left-hand side")
    rhs_real: float = Field(..., description="Real part of the right-hand side")
    rhs_imag: float = Field(0.0, description="Imaginary part of the right-hand side")
    stderr: float | None = Field(
        None, description="Combined standard error of the difference; NaN with fewer than 2 samples"
    )
    n_samples: int = Field(..., ge=0, description="Samples (or configurations) behind the estimate")
    z_score: float | None = Field(None, description="|lhs − rhs| / stderr, componentwise maximum")
    z_max: float | None = Field(None, description="Pass threshold on the z-score")
    max_rel_diff: float | None = Field(
        None, description="Largest relative difference, pathwise checks"
    )
    tolerance: float | None = Field(None, description="Pass threshold on max_rel_diff")
    verdict: Verdict = Field(..., description="pass or fail")
    notes: str = Field("", description="Free-form remarks attached to the check")
    details: dict[str, float] = Field(default_factory=dict, description="Check-specific numbers")

    @property
    def lhs(self) -> complex:
        return complex(self.lhs_real, self.lhs_imag)

    @property
    def rhs(self) -> complex:
        return complex(self.rhs_real, self.rhs_imag)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS


class DensityReport(BaseModel):
    """Energy image density diagnostic for V = ∫φ(Y_−)dY."""

    name: str = Field(..., description="Functional the samples come from")
    n_paths: int = Field(..., ge=0, description="Simulated configurations")
    n_jumpy: int = Field(..., ge=0, description="Configurations with at least one jump")
    positivity_fraction: float = Field(
        ..., ge=0.0, le=1.0, description="Fraction of jumpy paths with Γ[V] > 0"
    )
    duplicate_count: int = Field(
        ..., ge=0, description="Exactly repeated V values among jumpy paths"
    )
    histogram_edges: list[float] = Field(..., description="Bin edges of the V histogram")
    histogram_counts: list[int] = Field(..., description="Counts per bin")
    values: list[float] = Field(default_factory=list, exclude=True, repr=False)
    gammas: list[float] = Field(default_factory=list, exclude=True, repr=False)
    jump_counts: list[int] = Field(default_factory=list, exclude=True, repr=False)
