"""Functional families: Ñ(f), e^{iÑ(f)} and their sums, stochastic integrals, A₀."""

from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np

from lentparticle.bottom.functions import ScalarTestFunction, breakpoints
from lentparticle.bottom.measure import JumpMeasureSpec
from lentparticle.bottom.structure import gamma_bottom, generator_a
from lentparticle.core.errors import CapabilityError, PreconditionError
from lentparticle.functionals.base import Functional
from lentparticle.functionals.dual import PerturbedValue, apply, expi
from lentparticle.poisson.path import Configuration

QUADRATURE_ORDER = 16
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(QUADRATURE_ORDER)


def _check_horizon(config: Configuration, horizon: float) -> None:
    if config.horizon != horizon:
        raise PreconditionError(
            f"Configuration horizon {config.horizon} differs from the functional's T={horizon}"
        )


def _dual_sum(terms, start: float | complex = 0.0) -> PerturbedValue:
    total = PerturbedValue(start, 0.0)
    for term in terms:
        total = total + term
    return total


@dataclass(frozen=True, repr=False)
class LinearFunctional(Functional):
    """Ñ(f) = Σᵢ f(xᵢ) − T∫f dσ."""

    f: ScalarTestFunction
    spec: JumpMeasureSpec
    horizon: float
    compensator: float = field(init=False)

    def __post_init__(self) -> None:
        compensator = self.horizon * self.spec.integrate(self.f.value, breakpoints(self.f))
        object.__setattr__(self, "compensator", compensator)
        object.__setattr__(self, "name", f"Ñ({self.f.name})")

    def compute(self, config, sizes):
        return _dual_sum((apply(self.f, x) for x in sizes), start=-self.compensator)


@dataclass(frozen=True, repr=False)
class ExponentialFunctional(Functional):
    """exp(i Ñ(f)), an element of the exponential pre-domain."""

    f: ScalarTestFunction
    spec: JumpMeasureSpec
    horizon: float
    linear: LinearFunctional = field(init=False)
    complex_valued: ClassVar[bool] = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "linear", LinearFunctional(self.f, self.spec, self.horizon))
        object.__setattr__(self, "name", f"exp(iÑ({self.f.name}))")

    def compute(self, config, sizes):
        return expi(self.linear.compute(config, sizes))


@dataclass(frozen=True, repr=False)
class ExponentialSumFunctional(Functional):
    """Σ_p λ_p exp(i Ñ(f_p))."""

    terms: tuple[tuple[complex, ScalarTestFunction], ...]
    spec: JumpMeasureSpec
    horizon: float
    linears: tuple[LinearFunctional, ...] = field(init=False)
    complex_valued: ClassVar[bool] = True

    def __post_init__(self) -> None:
        linears = tuple(LinearFunctional(f, self.spec, self.horizon) for _, f in self.terms)
        object.__setattr__(self, "linears", linears)
        name = " + ".join(f"{c}·exp(iÑ({f.name}))" for c, f in self.terms)
        object.__setattr__(self, "name", name)

    def compute(self, config, sizes):
        parts = (
            coeff * expi(linear.compute(config, sizes))
            for (coeff, _), linear in zip(self.terms, self.linears)
        )
        return _dual_sum(parts, start=0j)


@dataclass(frozen=True, repr=False)
class StochasticIntegralFunctional(Functional):
    """
    V = ∫₀ᵀ φ(Y_{s−}) dY_s = Σⱼ φ(Y_{αⱼ−}) xⱼ − m1 ∫₀ᵀ φ(Y_s) ds.

    The drift integral uses Gauss–Legendre quadrature on each inter-jump
    interval, where Y is affine.
    """

    phi: ScalarTestFunction
    spec: JumpMeasureSpec
    horizon: float
    moments: ClassVar[tuple[str, ...]] = ("m1",)

    def __post_init__(self) -> None:
        object.__setattr__(self, "name", f"∫{self.phi.name}(Y_-)dY")

    def compute(self, config, sizes):
        _check_horizon(config, self.horizon)
        m1 = self.spec.m1
        times = config.times
        jumps_before = PerturbedValue(0.0, 0.0)
        total = PerturbedValue(0.0, 0.0)
        for alpha, x in zip(times, sizes):
            total = total + apply(self.phi, jumps_before - alpha * m1) * x
            jumps_before = jumps_before + x
        if m1 == 0.0:
            return total
        return total - m1 * self._drift_integral(times, sizes)

    def _drift_integral(self, times: np.ndarray, sizes: list) -> PerturbedValue:
        bounds = np.concatenate(([0.0], times, [self.horizon]))
        jumps = PerturbedValue(0.0, 0.0)
        integral = PerturbedValue(0.0, 0.0)
        for k in range(len(bounds) - 1):
            if k > 0:
                jumps = jumps + sizes[k - 1]
            integral = integral + affine_path_integral(
                self.phi, jumps, self.spec.m1, bounds[k], bounds[k + 1]
            )
        return integral


def affine_path_integral(
    fn: ScalarTestFunction, jumps: PerturbedValue, m1: float, start: float, stop: float
) -> PerturbedValue:
    """
    ∫_start^stop fn(J − s·m1) ds for a dual jump sum J, by Gauss–Legendre.

    The path depends on the sizes only through J, so the derivative is
    ∫ fn′ ds times J's derivative.
    """
    half = 0.5 * (stop - start)
    if half == 0.0:
        return PerturbedValue(0.0, 0.0)
    s = 0.5 * (stop + start) + half * _NODES
    y = jumps.value - s * m1
    value = half * float(np.dot(_WEIGHTS, fn.value(y)))
    slope = half * float(np.dot(_WEIGHTS, fn.deriv1(y)))
    return PerturbedValue(value, slope * jumps.deriv)


@dataclass(frozen=True, repr=False)
class DeterministicIntegralFunctional(Functional):
    """∫₀ᵀ h(s) dY_s = Σᵢ h(αᵢ) xᵢ − m1 ∫₀ᵀ h(s) ds, with Γ = Σ h(αᵢ)² xᵢ²."""

    h: ScalarTestFunction
    spec: JumpMeasureSpec
    horizon: float
    drift: float = field(init=False)
    moments: ClassVar[tuple[str, ...]] = ("m1",)

    def __post_init__(self) -> None:
        half = 0.5 * self.horizon
        integral = half * float(np.dot(_WEIGHTS, self.h.value(half + half * _NODES)))
        object.__setattr__(self, "drift", self.spec.m1 * integral)
        object.__setattr__(self, "name", f"∫{self.h.name}(s)dY")

    def compute(self, config, sizes):
        _check_horizon(config, self.horizon)
        weights = self.h.value(config.times)
        return _dual_sum((w * x for w, x in zip(weights, sizes)), start=-self.drift)


@dataclass(frozen=True, repr=False)
class ComposedFunctional(Functional):
    """Φ∘F for a real functional F."""

    outer: ScalarTestFunction
    inner: Functional

    def __post_init__(self) -> None:
        object.__setattr__(self, "name", f"{self.outer.name}∘{self.inner.name}")

    def compute(self, config, sizes):
        return apply(self.outer, self.inner.compute(config, sizes))


@dataclass(frozen=True, repr=False)
class ConstantFunctional(Functional):
    level: float | complex = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "name", f"constant({self.level})")

    def compute(self, config, sizes):
        return PerturbedValue(self.level, 0.0)


def linear_functional(
    f: ScalarTestFunction, spec: JumpMeasureSpec, horizon: float
) -> LinearFunctional:
    return LinearFunctional(f, spec, horizon)


def exponential_functional(
    f: ScalarTestFunction, spec: JumpMeasureSpec, horizon: float
) -> ExponentialFunctional:
    return ExponentialFunctional(f, spec, horizon)


def exponential_sum_functional(
    terms, spec: JumpMeasureSpec, horizon: float
) -> ExponentialSumFunctional:
    return ExponentialSumFunctional(tuple((complex(c), f) for c, f in terms), spec, horizon)


def stochastic_integral_functional(
    phi: ScalarTestFunction, spec: JumpMeasureSpec, horizon: float
) -> StochasticIntegralFunctional:
    return StochasticIntegralFunctional(phi, spec, horizon)


def deterministic_integral_functional(
    h: ScalarTestFunction, spec: JumpMeasureSpec, horizon: float
) -> DeterministicIntegralFunctional:
    return DeterministicIntegralFunctional(h, spec, horizon)


def composed_functional(outer: ScalarTestFunction, inner: Functional) -> ComposedFunctional:
    return ComposedFunctional(outer, inner)


@dataclass(frozen=True)
class A0Operator:
    """
    A₀[F] = Σ_p λ_p e^{iÑ(f_p)} (i Ñ(a[f_p]) − ½ N(γ[f_p])) for F = Σ_p λ_p e^{iÑ(f_p)}.

    Compensators T∫f_p dσ and T∫a[f_p] dσ are computed once.
    """

    terms: tuple[tuple[complex, ScalarTestFunction], ...]
    spec: JumpMeasureSpec
    horizon: float
    compensators: tuple[tuple[float, float], ...] = field(init=False)

    def __post_init__(self) -> None:
        compensators = []
        for _, f in self.terms:
            if not f.has_deriv2:
                raise CapabilityError(f"A₀ needs a second derivative of '{f.name}'")
            comp_f = self.horizon * self.spec.integrate(f.value, breakpoints(f))
            comp_a = self.horizon * self.spec.integrate(_GeneratorOf(f, self.spec), breakpoints(f))
            compensators.append((comp_f, comp_a))
        object.__setattr__(self, "compensators", tuple(compensators))

    def __call__(self, config: Configuration) -> complex:
        x = config.sizes
        total = 0j
        for (coeff, f), (comp_f, comp_a) in zip(self.terms, self.compensators):
            n_tilde_f = float(np.sum(f.value(x))) - comp_f
            n_tilde_a = float(np.sum(generator_a(f, x, self.spec))) - comp_a
            n_gamma = float(np.sum(gamma_bottom(f, f, x)))
            total += coeff * np.exp(1j * n_tilde_f) * (1j * n_tilde_a - 0.5 * n_gamma)
        return complex(total)


@dataclass(frozen=True)
class _GeneratorOf:
    """x ↦ a[f](x) as a picklable callable."""

    f: ScalarTestFunction
    spec: JumpMeasureSpec

    def __call__(self, x):
        return generator_a(self.f, x, self.spec)


def apply_A0(terms, config: Configuration, spec: JumpMeasureSpec, horizon: float) -> complex:
    """
    A₀[F](ω) for F = Σ_p λ_p e^{iÑ(f_p)}.

    Raises:
        CapabilityError: If some f_p lacks a second derivative
    """
    return A0Operator(tuple((complex(c), f) for c, f in terms), spec, horizon)(config)
