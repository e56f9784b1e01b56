"""Truncated Lévy measures on the bottom space.

A measure is a finite union of closed intervals bounded away from 0, each
carrying a density piece with a closed-form antiderivative. Sampling goes
through per-interval inverse-CDF tables.
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy import integrate

from lentparticle.config import MeasureSettings
from lentparticle.core.errors import DomainError, PreconditionError

logger = logging.getLogger(__name__)

DEFAULT_TABLE_SIZE = 4096
_BISECTION_STEPS = 96

# Integrands such as a[h] integrate to 0, where only the absolute tolerance applies.
QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-12

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DensityPiece:
    """Density p on one interval with p′/p and the mass function x ↦ σ([lo, x])."""

    lo: float
    hi: float
    density: ArrayFn
    log_derivative: ArrayFn
    mass_to: ArrayFn

    @property
    def mass(self) -> float:
        return float(self.mass_to(np.float64(self.hi)))


@dataclass(frozen=True, eq=False)
class JumpMeasureSpec:
    """The truncated Lévy measure σ: support, density, moments and sampler table."""

    name: str
    pieces: tuple[DensityPiece, ...]
    total_mass: float
    m1: float
    m2: float
    inverse_cdf_table: tuple[np.ndarray, ...]
    piece_cumulative: np.ndarray

    @classmethod
    def build(
        cls,
        name: str,
        pieces: list[DensityPiece],
        symmetric: bool = False,
        table_size: int = DEFAULT_TABLE_SIZE,
    ) -> "JumpMeasureSpec":
        """
        Assemble a measure, computing its moments and sampling tables.

        Args:
            name: Label used in logs and reports
            pieces: Density pieces on disjoint intervals, sorted left to right
            symmetric: If True, m1 is set to exactly 0
            table_size: Nodes per inverse-CDF table

        Returns:
            Immutable measure spec

        Raises:
            PreconditionError: If the support touches 0, overlaps or has no mass
        """
        ordered = sorted(pieces, key=lambda p: p.lo)
        for piece in ordered:
            if not piece.lo < piece.hi:
                raise PreconditionError(f"Empty interval [{piece.lo}, {piece.hi}]")
            if piece.lo <= 0.0 <= piece.hi:
                raise PreconditionError(f"Interval [{piece.lo}, {piece.hi}] contains 0")
        for left, right in zip(ordered, ordered[1:]):
            if left.hi >= right.lo:
                raise PreconditionError(f"Overlapping intervals at {left.hi} and {right.lo}")

        masses = np.array([piece.mass for piece in ordered])
        total_mass = float(masses.sum())
        if not np.isfinite(total_mass) or total_mass <= 0.0:
            raise PreconditionError(f"Total mass must be finite and positive, got {total_mass}")

        m1 = 0.0 if symmetric else _integrate_pieces(ordered, lambda x: x)
        m2 = _integrate_pieces(ordered, lambda x: x * x)
        tables = tuple(_inverse_cdf_table(piece, table_size) for piece in ordered)
        cumulative = np.cumsum(masses) / total_mass
        cumulative[-1] = 1.0

        logger.debug(f"Built measure '{name}': λ={total_mass:.6g}, m1={m1:.6g}, m2={m2:.6g}")
        return cls(
            name=name,
            pieces=tuple(ordered),
            total_mass=total_mass,
            m1=m1,
            m2=m2,
            inverse_cdf_table=tables,
            piece_cumulative=cumulative,
        )

    @property
    def support(self) -> tuple[tuple[float, float], ...]:
        return tuple((piece.lo, piece.hi) for piece in self.pieces)

    def contains(self, x: np.ndarray | float) -> np.ndarray | bool:
        x = np.asarray(x, dtype=float)
        inside = np.zeros(x.shape, dtype=bool)
        for piece in self.pieces:
            inside |= (x >= piece.lo) & (x <= piece.hi)
        return inside if inside.ndim else bool(inside)

    def density(self, x: np.ndarray | float) -> np.ndarray:
        """p(x), zero off the support."""
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x)
        out = np.zeros(flat.shape)
        for piece in self.pieces:
            mask = (flat >= piece.lo) & (flat <= piece.hi)
            if np.any(mask):
                out[mask] = piece.density(flat[mask])
        return out.reshape(x.shape)

    def log_derivative(self, x: np.ndarray | float) -> np.ndarray:
        """
        p′(x)/p(x).

        Raises:
            DomainError: If some x has p(x) = 0
        """
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x)
        out = np.full(flat.shape, np.nan)
        for piece in self.pieces:
            mask = (flat >= piece.lo) & (flat <= piece.hi)
            if np.any(mask):
                out[mask] = piece.log_derivative(flat[mask])
        if np.any(np.isnan(out)) or np.any(self.density(flat) <= 0.0):
            raise DomainError(f"Density vanishes at some of x={x}; support is {self.support}")
        return out.reshape(x.shape)

    def integrate(
        self, fn: Callable[[np.ndarray], np.ndarray], points: Sequence[float] = ()
    ) -> float | complex:
        """
        ∫ fn dσ by adaptive quadrature, piece by piece.

        Args:
            fn: Vectorised integrand
            points: Breakpoints of fn (e.g. support ends of a bump); those inside a
                piece are handed to the quadrature as known difficulties

        Returns:
            The integral, complex if fn is
        """
        return _integrate_pieces(self.pieces, fn, points)

    def cdf(self, x: np.ndarray | float) -> np.ndarray:
        """Normalised distribution function of σ/λ."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for piece in self.pieces:
            clipped = np.clip(x, piece.lo, piece.hi)
            out += np.where(x >= piece.lo, piece.mass_to(clipped), 0.0)
        return out / self.total_mass


def _quad(integrand, piece: DensityPiece, points: Sequence[float]) -> float:
    inner = sorted({float(p) for p in points if piece.lo < p < piece.hi})
    result = integrate.quad(
        integrand,
        piece.lo,
        piece.hi,
        points=inner or None,
        limit=200,
        epsabs=QUAD_EPSABS,
        epsrel=QUAD_EPSREL,
        full_output=1,
    )
    if len(result) > 3:
        logger.debug(
            f"Quadrature on [{piece.lo}, {piece.hi}]: {result[3]} (error {result[1]:.2g})"
        )
    return float(result[0])


def _integrate_pieces(pieces, fn, points: Sequence[float] = ()) -> float | complex:
    total: float | complex = 0.0
    for piece in pieces:
        mid = 0.5 * (piece.lo + piece.hi)
        is_complex = np.iscomplexobj(fn(np.asarray([mid])))

        def real_part(x, piece=piece):
            return float(np.real(fn(np.asarray([x]))[0]) * piece.density(np.asarray([x]))[0])

        total += _quad(real_part, piece, points)
        if is_complex:

            def imag_part(x, piece=piece):
                return float(np.imag(fn(np.asarray([x]))[0]) * piece.density(np.asarray([x]))[0])

            total += 1j * _quad(imag_part, piece, points)
    return total


def _inverse_cdf_table(piece: DensityPiece, size: int) -> np.ndarray:
    """Quantiles of one piece at ``size`` equally spaced levels, by vectorised bisection."""
    targets = np.linspace(0.0, 1.0, size) * piece.mass
    lo = np.full(size, piece.lo)
    hi = np.full(size, piece.hi)
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        below = piece.mass_to(mid) < targets
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    table = 0.5 * (lo + hi)
    table[0], table[-1] = piece.lo, piece.hi
    return np.maximum.accumulate(table)


def sample_jump(spec: JumpMeasureSpec, u: np.ndarray | float) -> np.ndarray | float:
    """
    The u-quantile of σ/λ.

    Picks the interval by its probability, then interpolates linearly in that
    interval's table, so results never fall in a gap of the support.

    Args:
        spec: Jump measure
        u: Level(s) in [0, 1)

    Returns:
        Jump size(s), same shape as ``u``
    """
    scalar = np.ndim(u) == 0
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    pieces = np.searchsorted(spec.piece_cumulative, u_arr, side="right")
    pieces = np.minimum(pieces, len(spec.pieces) - 1)
    out = np.empty(u_arr.shape)
    starts = np.concatenate(([0.0], spec.piece_cumulative[:-1]))
    for j, table in enumerate(spec.inverse_cdf_table):
        mask = pieces == j
        if not np.any(mask):
            continue
        width = spec.piece_cumulative[j] - starts[j]
        local = np.clip((u_arr[mask] - starts[j]) / width, 0.0, 1.0)
        grid = np.linspace(0.0, 1.0, table.size)
        out[mask] = np.interp(local, grid, table)
    return float(out[0]) if scalar else out


# Built-in density pieces. Module-level so that measures pickle.


def _flat_density(x: np.ndarray, height: float) -> np.ndarray:
    return np.full(np.shape(x), height)


def _flat_log_derivative(x: np.ndarray) -> np.ndarray:
    return np.zeros(np.shape(x))


def _flat_mass_to(x: np.ndarray, height: float, lo: float) -> np.ndarray:
    return height * (x - lo)


def _power_density(x: np.ndarray, scale: float, alpha: float) -> np.ndarray:
    return scale * np.abs(x) ** (-1.0 - alpha)


def _power_log_derivative(x: np.ndarray, alpha: float) -> np.ndarray:
    return -(1.0 + alpha) / x


def _power_mass_to_positive(x: np.ndarray, scale: float, alpha: float, a: float) -> np.ndarray:
    return (scale / alpha) * (a ** (-alpha) - np.abs(x) ** (-alpha))


def _power_mass_to_negative(x: np.ndarray, scale: float, alpha: float, b: float) -> np.ndarray:
    return (scale / alpha) * (np.abs(x) ** (-alpha) - b ** (-alpha))


def uniform_measure(
    a: float = 0.1, b: float = 1.0, intensity: float = 5.0, table_size: int = DEFAULT_TABLE_SIZE
) -> JumpMeasureSpec:
    """Constant density on [a, b] with total mass ``intensity``."""
    height = intensity / (b - a)
    piece = DensityPiece(
        lo=a,
        hi=b,
        density=partial(_flat_density, height=height),
        log_derivative=_flat_log_derivative,
        mass_to=partial(_flat_mass_to, height=height, lo=a),
    )
    return JumpMeasureSpec.build("uniform", [piece], table_size=table_size)


def stable_like_measure(
    alpha: float = 1.0,
    a: float = 0.1,
    b: float = 1.0,
    intensity: float = 5.0,
    table_size: int = DEFAULT_TABLE_SIZE,
) -> JumpMeasureSpec:
    """Symmetric density c|x|^(−1−α) on [−b, −a] ∪ [a, b], scaled to total mass ``intensity``."""
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"alpha={alpha} outside (0, 2)")
    scale = intensity * alpha / (2.0 * (a ** (-alpha) - b ** (-alpha)))
    negative = DensityPiece(
        lo=-b,
        hi=-a,
        density=partial(_power_density, scale=scale, alpha=alpha),
        log_derivative=partial(_power_log_derivative, alpha=alpha),
        mass_to=partial(_power_mass_to_negative, scale=scale, alpha=alpha, b=b),
    )
    positive = DensityPiece(
        lo=a,
        hi=b,
        density=partial(_power_density, scale=scale, alpha=alpha),
        log_derivative=partial(_power_log_derivative, alpha=alpha),
        mass_to=partial(_power_mass_to_positive, scale=scale, alpha=alpha, a=a),
    )
    return JumpMeasureSpec.build(
        "stable", [negative, positive], symmetric=True, table_size=table_size
    )


class MeasureFactory:
    """Factory for creating measures from settings."""

    @staticmethod
    def create(settings: MeasureSettings) -> JumpMeasureSpec:
        """
        Create the measure named in the ``[measure]`` section.

        Args:
            settings: Measure settings

        Returns:
            Configured measure
        """
        if settings.name == "uniform":
            return uniform_measure(settings.trunc_a, settings.trunc_b, settings.intensity)
        return stable_like_measure(
            settings.alpha, settings.trunc_a, settings.trunc_b, settings.intensity
        )
