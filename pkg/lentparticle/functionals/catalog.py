"""Named test functions and functionals addressable from the config file."""

from collections.abc import Callable

from lentparticle.bottom import functions
from lentparticle.bottom.functions import ScalarTestFunction
from lentparticle.bottom.measure import JumpMeasureSpec
from lentparticle.config import FunctionalSettings
from lentparticle.core.errors import ConfigurationError
from lentparticle.functionals.base import Functional
from lentparticle.functionals.families import (
    exponential_functional,
    linear_functional,
    stochastic_integral_functional,
)

CATALOG: dict[str, Callable[[], ScalarTestFunction]] = {
    "zero": lambda: functions.constant(0.0),
    "constant": lambda: functions.constant(1.0),
    "identity": functions.identity,
    "affine": lambda: functions.affine(0.5, 2.0),
    "square": lambda: functions.polynomial([0.0, 0.0, 1.0], name="square"),
    "sigmoid": lambda: functions.sigmoid(scale=3.0, amplitude=2.0, offset=-1.0),
    # Bounded below by 0.5: Γ[V] > 0 on every path with a jump.
    "shifted-sigmoid": lambda: functions.sigmoid(scale=3.0, amplitude=1.0, offset=0.5),
    "bump": lambda: functions.bump(center=0.5, width=0.3, amplitude=1.0),
}


def resolve_function(
    name: str | None = None, coeffs: list[float] | None = None
) -> ScalarTestFunction:
    """
    Look up a named test function, or build a polynomial from coefficients.

    Args:
        name: Catalog name
        coeffs: Polynomial coefficients, lowest degree first; take precedence over ``name``

    Returns:
        The test function

    Raises:
        ConfigurationError: If the name is unknown
    """
    if coeffs is not None:
        return functions.polynomial(coeffs)
    if name not in CATALOG:
        available = ", ".join(sorted(CATALOG))
        raise ConfigurationError(f"Unknown function '{name}'. Available: {available}")
    return CATALOG[name]()


class FunctionalFactory:
    """Factory for creating functionals from settings."""

    @staticmethod
    def create(settings: FunctionalSettings, spec: JumpMeasureSpec, horizon: float) -> Functional:
        """
        Create the functional described by the ``[functional]`` section.

        Args:
            settings: Functional settings
            spec: Jump measure
            horizon: Time horizon T

        Returns:
            Configured functional
        """
        phi = resolve_function(settings.phi_name, settings.phi_coeffs)
        if settings.family == "linear":
            return linear_functional(phi, spec, horizon)
        if settings.family == "exponential":
            return exponential_functional(phi, spec, horizon)
        return stochastic_integral_functional(phi, spec, horizon)
