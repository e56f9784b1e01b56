"""Dirichlet structure of the bottom space: γ[f] = x²f′², its gradient ♭ and generator a."""

import numpy as np

from lentparticle.bottom.functions import ScalarTestFunction
from lentparticle.bottom.measure import JumpMeasureSpec
from lentparticle.core.errors import DomainError

SQRT12 = float(np.sqrt(12.0))


def gamma_bottom(f: ScalarTestFunction, g: ScalarTestFunction, x):
    """Polarised carré du champ γ[f, g](x) = x² f′(x) g′(x)."""
    x = np.asarray(x, dtype=float)
    return x * x * f.deriv1(x) * g.deriv1(x)


def eta(r):
    """
    Centered, unit-variance mark function η(r) = √12 (r − 1/2) on [0, 1].

    Raises:
        DomainError: If some r lies outside [0, 1]
    """
    r = np.asarray(r, dtype=float)
    if np.any((r < 0.0) | (r > 1.0)):
        raise DomainError(f"Mark outside [0, 1]: {r}")
    return SQRT12 * (r - 0.5)


def flat(f: ScalarTestFunction, x, r):
    """Gradient f♭(x, r) = x f′(x) η(r)."""
    x = np.asarray(x, dtype=float)
    return x * f.deriv1(x) * eta(r)


def generator_a(h: ScalarTestFunction, x, spec: JumpMeasureSpec):
    """
    Generator a[h](x) = ½ (x² h″(x) + (2x + x² p′(x)/p(x)) h′(x)).

    Valid for h compactly supported in the interior of the support, where
    integration by parts against ε[u] = ½∫γ[u] dσ leaves no boundary terms.

    Args:
        h: Test function with a second derivative
        x: Point(s) of the support
        spec: Measure providing p′/p

    Returns:
        a[h] evaluated at x

    Raises:
        CapabilityError: If h has no second derivative
        DomainError: If p vanishes at some x
    """
    x = np.asarray(x, dtype=float)
    second = h.second(x)
    if np.any(spec.density(x) <= 0.0):
        raise DomainError(f"Density vanishes at some of x={x}")
    drift = 2.0 * x + x * x * spec.log_derivative(x)
    return 0.5 * (x * x * second + drift * h.deriv1(x))

