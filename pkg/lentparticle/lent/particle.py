"""Creation operator ε⁺ and the derivative at a lent particle."""

import bisect

from lentparticle.core.errors import CollisionError, DomainError
from lentparticle.functionals.base import Functional
from lentparticle.poisson.path import Atom, Configuration


def add_particle(config: Configuration, alpha: float, x: float) -> Configuration:
    """
    ε⁺_{(α, x)}ω: insert the atom (α, x) in time order.

    A time already charged by ``config`` returns ``config`` itself, since
    ε⁺ is the identity on the support of ω.

    Args:
        config: Configuration ω
        alpha: Time in [0, T]
        x: Jump size in the support

    Returns:
        New configuration (or ``config`` on a time collision)

    Raises:
        DomainError: If α is outside [0, T] or x outside the support
    """
    if not 0.0 <= alpha <= config.horizon:
        raise DomainError(f"α={alpha} outside [0, {config.horizon}]")
    if x == 0.0 or not config.spec.contains(x):
        raise DomainError(f"x={x} outside support {config.spec.support}")

    times = [atom.time for atom in config.atoms]
    position = bisect.bisect_left(times, alpha)
    if position < len(times) and times[position] == alpha:
        return config
    atoms = config.atoms[:position] + (Atom(float(alpha), float(x)),) + config.atoms[position:]
    return Configuration(horizon=config.horizon, atoms=atoms, spec=config.spec)


def lent_index(config: Configuration, alpha: float) -> int:
    """Position the atom lent at time α takes in ε⁺ω."""
    return bisect.bisect_left([atom.time for atom in config.atoms], alpha)


def lent_derivative(F: Functional, config: Configuration, alpha: float, x: float):
    """
    d/dx F(ε⁺_{(α, x)}ω), by dual evaluation at the inserted atom.

    Raises:
        CollisionError: If α is already charged by ``config``
        DomainError: As for :func:`add_particle`
    """
    lent = add_particle(config, alpha, x)
    if lent is config:
        raise CollisionError(f"α={alpha} is already charged; resample the lent time")
    return F.evaluate_dual(lent, lent_index(config, alpha)).deriv
