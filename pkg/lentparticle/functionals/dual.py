"""Forward-mode dual numbers over jump sizes.

A :class:`PerturbedValue` carries a value and its derivative with respect to
the seeded jump size(s). The derivative may be a scalar (one designated atom)
or a vector with one entry per atom; the arithmetic is the same by numpy
broadcasting. Values and derivatives may be complex.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from lentparticle.bottom.functions import ScalarTestFunction


def _unwrap(v):
    if isinstance(v, np.ndarray) and v.ndim == 0:
        return v[()]
    return v


class PerturbedValue:
    """Dual scalar ``value + deriv·ε``."""

    __slots__ = ("value", "deriv")
    # numpy scalars on the left defer to the reflected operators below.
    __array_ufunc__ = None

    def __init__(self, value, deriv=0.0):
        self.value = _unwrap(value)
        self.deriv = deriv

    @staticmethod
    def _coerce(other) -> PerturbedValue:
        if isinstance(other, PerturbedValue):
            return other
        return PerturbedValue(other, 0.0)

    def __add__(self, other) -> PerturbedValue:
        o = self._coerce(other)
        return PerturbedValue(self.value + o.value, self.deriv + o.deriv)

    __radd__ = __add__

    def __sub__(self, other) -> PerturbedValue:
        o = self._coerce(other)
        return PerturbedValue(self.value - o.value, self.deriv - o.deriv)

    def __rsub__(self, other) -> PerturbedValue:
        return self._coerce(other) - self

    def __mul__(self, other) -> PerturbedValue:
        o = self._coerce(other)
        return PerturbedValue(self.value * o.value, self.deriv * o.value + self.value * o.deriv)

    __rmul__ = __mul__

    def __truediv__(self, other) -> PerturbedValue:
        o = self._coerce(other)
        if o.value == 0:
            raise ZeroDivisionError("Dual division by a zero value")
        return PerturbedValue(
            self.value / o.value,
            (self.deriv * o.value - self.value * o.deriv) / (o.value * o.value),
        )

    def __rtruediv__(self, other) -> PerturbedValue:
        return self._coerce(other) / self

    def __neg__(self) -> PerturbedValue:
        return PerturbedValue(-self.value, -self.deriv)

    def __pow__(self, exponent: float) -> PerturbedValue:
        return PerturbedValue(
            self.value**exponent, exponent * self.value ** (exponent - 1) * self.deriv
        )

    def __repr__(self) -> str:
        return f"PerturbedValue(value={self.value!r}, deriv={self.deriv!r})"


def apply(f: ScalarTestFunction, u):
    """f(u) for a plain number or a dual, using f′ for the derivative part."""
    if isinstance(u, PerturbedValue):
        return PerturbedValue(f.value(u.value), f.deriv1(u.value) * u.deriv)
    return _unwrap(f.value(u))


def exp(u):
    if isinstance(u, PerturbedValue):
        e = np.exp(u.value)
        return PerturbedValue(e, e * u.deriv)
    return np.exp(u)


def expi(u):
    """exp(i·u)."""
    return exp(1j * u)


def seed_one(values: Sequence[float], index: int) -> list[PerturbedValue]:
    """Duals with unit derivative at ``index`` and zero elsewhere."""
    return [PerturbedValue(float(v), 1.0 if i == index else 0.0) for i, v in enumerate(values)]


def seed_all(values: Sequence[float]) -> list[PerturbedValue]:
    """Duals whose derivative vectors are the rows of the identity matrix."""
    eye = np.eye(len(values))
    return [PerturbedValue(float(v), eye[i]) for i, v in enumerate(values)]


def seed_none(values: Sequence[float]) -> list[PerturbedValue]:
    """Duals with zero derivative; evaluation follows the same arithmetic path."""
    return [PerturbedValue(float(v), 0.0) for v in values]
