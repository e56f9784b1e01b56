"""Scalar test functions on the bottom space.

A test function carries its value and its first (and optionally second)
derivative as vectorised callables. Every family here is built from
module-level callables so that functions pickle across worker processes.
"""

from collections.abc import Callable
from dataclasses import dataclass
from functools import partial

import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import expit

from lentparticle.core.errors import CapabilityError, PreconditionError

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ScalarTestFunction:
    """x ↦ f(x) with f′ and, when available, f″."""

    name: str
    value: ArrayFn
    deriv1: ArrayFn
    deriv2: ArrayFn | None = None
    # Closed interval outside of which f is constant; None if not compactly supported.
    interior_support: tuple[float, float] | None = None

    def __call__(self, x):
        return self.value(x)

    @property
    def has_deriv2(self) -> bool:
        return self.deriv2 is not None

    def second(self, x):
        """
        f″(x).

        Raises:
            CapabilityError: If the function was built without a second derivative
        """
        if self.deriv2 is None:
            raise CapabilityError(f"Test function '{self.name}' has no second derivative")
        return self.deriv2(x)


def _constant_value(x, level: float):
    return level + 0.0 * np.asarray(x, dtype=float)


def _zero(x):
    return 0.0 * np.asarray(x, dtype=float)


def constant(level: float = 0.0) -> ScalarTestFunction:
    return ScalarTestFunction(
        name=f"constant({level:g})",
        value=partial(_constant_value, level=level),
        deriv1=_zero,
        deriv2=_zero,
        interior_support=(0.0, 0.0),
    )


def polynomial(
    coeffs: list[float] | tuple[float, ...], name: str | None = None
) -> ScalarTestFunction:
    """Polynomial with coefficients listed lowest degree first."""
    p = Polynomial(np.asarray(coeffs, dtype=float))
    return ScalarTestFunction(
        name=name or f"polynomial({', '.join(f'{c:g}' for c in coeffs)})",
        value=p,
        deriv1=p.deriv(1),
        deriv2=p.deriv(2),
    )


def identity() -> ScalarTestFunction:
    return polynomial([0.0, 1.0], name="identity")


def affine(intercept: float = 0.5, slope: float = 2.0) -> ScalarTestFunction:
    return polynomial([intercept, slope], name=f"affine({intercept:g}, {slope:g})")


def _sigmoid(x, order: int, scale: float, shift: float, amplitude: float, offset: float):
    s = expit(scale * (np.asarray(x, dtype=float) - shift))
    if order == 0:
        return offset + amplitude * s
    if order == 1:
        return amplitude * scale * s * (1.0 - s)
    return amplitude * scale**2 * s * (1.0 - s) * (1.0 - 2.0 * s)


def sigmoid(
    scale: float = 3.0, shift: float = 0.0, amplitude: float = 1.0, offset: float = 0.0
) -> ScalarTestFunction:
    """offset + amplitude / (1 + exp(−scale (x − shift)))."""
    params = dict(scale=scale, shift=shift, amplitude=amplitude, offset=offset)
    return ScalarTestFunction(
        name=(
            f"sigmoid(scale={scale:g}, shift={shift:g}, "
            f"amplitude={amplitude:g}, offset={offset:g})"
        ),
        value=partial(_sigmoid, order=0, **params),
        deriv1=partial(_sigmoid, order=1, **params),
        deriv2=partial(_sigmoid, order=2, **params),
    )


# exp(−1/(1−u²)) < 1e−217 once 1−u² drops below this; treated as 0 to avoid inf·0.
_BUMP_EDGE = 2e-3


def _bump(x, order: int, center: float, width: float, amplitude: float):
    u = (np.asarray(x, dtype=float) - center) / width
    gap = 1.0 - u * u
    inside = gap > _BUMP_EDGE
    safe_gap = np.where(inside, gap, 1.0)
    base = np.where(inside, np.exp(-1.0 / safe_gap), 0.0)
    if order == 0:
        return amplitude * base
    g1 = -2.0 * u / safe_gap**2
    if order == 1:
        return amplitude * base * g1 / width
    g2 = -2.0 * (1.0 + 3.0 * u * u) / safe_gap**3
    return amplitude * base * (g2 + g1 * g1) / width**2


def bump(center: float = 0.5, width: float = 0.3, amplitude: float = 1.0) -> ScalarTestFunction:
    """Smooth bump ``amplitude·exp(−1/(1−u²))``, u = (x − center)/width, zero for |u| ≥ 1."""
    params = dict(center=center, width=width, amplitude=amplitude)
    return ScalarTestFunction(
        name=f"bump(center={center:g}, width={width:g}, amplitude={amplitude:g})",
        value=partial(_bump, order=0, **params),
        deriv1=partial(_bump, order=1, **params),
        deriv2=partial(_bump, order=2, **params),
        interior_support=(center - width, center + width),
    )


def _smootherstep(t, order: int):
    t = np.clip(t, 0.0, 1.0)
    if order == 0:
        return t**3 * (10.0 - 15.0 * t + 6.0 * t * t)
    if order == 1:
        return 30.0 * t * t * (t - 1.0) ** 2
    return 60.0 * t * (t - 1.0) * (2.0 * t - 1.0)


def _plateau(x, order: int, lo: float, hi: float, margin: float):
    x = np.asarray(x, dtype=float)
    left_t = (x - lo) / margin
    right_t = (hi - x) / margin
    left = [_smootherstep(left_t, k) * margin**-k for k in range(order + 1)]
    right = [_smootherstep(right_t, k) * (-1.0 / margin) ** k for k in range(order + 1)]
    if order == 0:
        return left[0] * right[0]
    if order == 1:
        return left[1] * right[0] + left[0] * right[1]
    return left[2] * right[0] + 2.0 * left[1] * right[1] + left[0] * right[2]


@dataclass(frozen=True)
class _Product:
    """k-th derivative of f·g by the Leibniz rule (k ≤ 2)."""

    order: int
    left: ScalarTestFunction
    right: ScalarTestFunction

    def __call__(self, x):
        f, g = self.left, self.right
        if self.order == 0:
            return f.value(x) * g.value(x)
        if self.order == 1:
            return f.deriv1(x) * g.value(x) + f.value(x) * g.deriv1(x)
        return f.second(x) * g.value(x) + 2.0 * f.deriv1(x) * g.deriv1(x) + f.value(x) * g.second(x)


def product(first: ScalarTestFunction, second: ScalarTestFunction) -> ScalarTestFunction:
    has_second = first.has_deriv2 and second.has_deriv2
    return ScalarTestFunction(
        name=f"({first.name})*({second.name})",
        value=_Product(0, first, second),
        deriv1=_Product(1, first, second),
        deriv2=_Product(2, first, second) if has_second else None,
        interior_support=first.interior_support or second.interior_support,
    )


@dataclass(frozen=True)
class _LinearCombination:
    """k-th derivative of α·f + β·g."""

    order: int
    alpha: float
    first: ScalarTestFunction
    beta: float
    second: ScalarTestFunction

    def __call__(self, x):
        if self.order == 0:
            f, g = self.first.value(x), self.second.value(x)
        elif self.order == 1:
            f, g = self.first.deriv1(x), self.second.deriv1(x)
        else:
            f, g = self.first.second(x), self.second.second(x)
        return self.alpha * f + self.beta * g


def _joint_support(
    first: tuple[float, float] | None, second: tuple[float, float] | None
) -> tuple[float, float] | None:
    if first is None or second is None:
        return None
    spans = [s for s in (first, second) if s[0] < s[1]]
    if not spans:
        return (0.0, 0.0)
    return (min(s[0] for s in spans), max(s[1] for s in spans))


def linear_combination(
    first: ScalarTestFunction,
    second: ScalarTestFunction,
    alpha: float = 1.0,
    beta: float = 1.0,
) -> ScalarTestFunction:
    """α·first + β·second."""
    has_second = first.has_deriv2 and second.has_deriv2
    return ScalarTestFunction(
        name=f"{alpha:g}*({first.name}) + {beta:g}*({second.name})",
        value=_LinearCombination(0, alpha, first, beta, second),
        deriv1=_LinearCombination(1, alpha, first, beta, second),
        deriv2=_LinearCombination(2, alpha, first, beta, second) if has_second else None,
        interior_support=_joint_support(first.interior_support, second.interior_support),
    )


def cutoff(h: ScalarTestFunction, lo: float, hi: float, margin: float = 0.05) -> ScalarTestFunction:
    """
    h multiplied by a C² plateau equal to 1 on [lo + margin, hi − margin] and 0 off (lo, hi).

    Raises:
        PreconditionError: If the interval is shorter than two margins
    """
    if hi - lo < 2.0 * margin:
        raise PreconditionError(f"Interval [{lo}, {hi}] shorter than twice the margin {margin}")
    params = dict(lo=lo, hi=hi, margin=margin)
    plateau = ScalarTestFunction(
        name=f"plateau[{lo:g}, {hi:g}]",
        value=partial(_plateau, order=0, **params),
        deriv1=partial(_plateau, order=1, **params),
        deriv2=partial(_plateau, order=2, **params),
        interior_support=(lo, hi),
    )
    return product(h, plateau)


@dataclass(frozen=True)
class _Composition:
    """k-th derivative of outer∘inner by the chain rule (k ≤ 2)."""

    order: int
    outer: ScalarTestFunction
    inner: ScalarTestFunction

    def __call__(self, x):
        y = self.inner.value(x)
        if self.order == 0:
            return self.outer.value(y)
        d_inner = self.inner.deriv1(x)
        if self.order == 1:
            return self.outer.deriv1(y) * d_inner
        return self.outer.second(y) * d_inner**2 + self.outer.deriv1(y) * self.inner.second(x)


def compose(outer: ScalarTestFunction, inner: ScalarTestFunction) -> ScalarTestFunction:
    has_second = outer.has_deriv2 and inner.has_deriv2
    return ScalarTestFunction(
        name=f"{outer.name}∘{inner.name}",
        value=_Composition(0, outer, inner),
        deriv1=_Composition(1, outer, inner),
        deriv2=_Composition(2, outer, inner) if has_second else None,
    )


def breakpoints(*fns: ScalarTestFunction) -> tuple[float, ...]:
    """Ends of the non-degenerate interior supports, where quadrature should split."""
    points: set[float] = set()
    for fn in fns:
        support = fn.interior_support
        if support is not None and support[0] < support[1]:
            points.update(support)
    return tuple(sorted(points))
