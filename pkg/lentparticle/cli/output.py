"""Report tables, JSON lines and CSV files."""

import logging
import sys
from collections.abc import Iterable
from pathlib import Path
from typing import TextIO

import pandas as pd
from pydantic import BaseModel

from lentparticle.harness.schemas import DensityReport, EstimateReport

logger = logging.getLogger(__name__)

# Round-trip exact doubles.
CSV_FLOAT_FORMAT = "%.17g"


def ensure_dir(path: Path) -> Path:
    """Create ``path`` (and parents) if needed; OSError propagates."""
    path.mkdir(parents=True, exist_ok=True)
    return path


def _fmt(value: float | complex | None) -> str:
    if value is None:
        return "-"
    if isinstance(value, complex):
        if value.imag == 0.0:
            return f"{value.real:.6g}"
        return f"{value.real:.6g}{value.imag:+.6g}i"
    return f"{value:.3g}"


def reports_frame(reports: Iterable[EstimateReport]) -> pd.DataFrame:
    """One row per report; ``details`` entries become ``details.<key>`` columns."""
    return pd.json_normalize([report.model_dump(mode="json") for report in reports])


def print_report_table(reports: list[EstimateReport], stream: TextIO | None = None) -> None:
    """Human-readable summary, one line per check."""
    stream = stream or sys.stdout
    rows = [
        {
            "check": report.name,
            "lhs": _fmt(report.lhs),
            "rhs": _fmt(report.rhs),
            "stderr": _fmt(report.stderr),
            "z": _fmt(report.z_score),
            "max_rel_diff": _fmt(report.max_rel_diff),
            "threshold": _fmt(report.z_max if report.z_max is not None else report.tolerance),
            "n": report.n_samples,
            "verdict": report.verdict.value.upper(),
        }
        for report in reports
    ]
    print(pd.DataFrame(rows).to_string(index=False), file=stream)
    failed = sum(not report.passed for report in reports)
    print(f"\n{len(reports) - failed}/{len(reports)} checks passed", file=stream)


def write_jsonl(models: Iterable[BaseModel], path: Path) -> Path:
    """One ``model_dump_json`` line per model."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for model in models:
            f.write(model.model_dump_json())
            f.write("\n")
    logger.info(f"Wrote {path}")
    return path


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {path}")
    return path


def density_frames(report: DensityReport) -> tuple[pd.DataFrame, pd.DataFrame]:
    """(samples, histogram) tables of a density report."""
    samples = pd.DataFrame(
        {
            "path_id": range(len(report.values)),
            "V": report.values,
            "Gamma_V": report.gammas,
            "n_jumps": report.jump_counts,
        }
    )
    edges = report.histogram_edges
    histogram = pd.DataFrame(
        {"bin_left": edges[:-1], "bin_right": edges[1:], "count": report.histogram_counts}
    )
    return samples, histogram


def print_density_summary(report: DensityReport, stream: TextIO | None = None) -> None:
    stream = stream or sys.stdout
    print(f"functional:          {report.name}", file=stream)
    print(f"paths:               {report.n_paths} ({report.n_jumpy} with jumps)", file=stream)
    print(f"positivity fraction: {report.positivity_fraction}", file=stream)
    print(f"duplicate values:    {report.duplicate_count}", file=stream)
