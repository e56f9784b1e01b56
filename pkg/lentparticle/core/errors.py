"""Error hierarchy.

Domain-facing errors subclass ``ValueError`` so callers that only know the
builtin keep working.
"""


class LentParticleError(Exception):
    """Base class for every error raised by the package."""


class DomainError(LentParticleError, ValueError):
    """An argument lies outside the set where the operation is defined."""


class CapabilityError(LentParticleError, ValueError):
    """A test function lacks a derivative the operation needs."""


class PreconditionError(LentParticleError, ValueError):
    """A documented precondition of the operation does not hold."""


class AlignmentError(PreconditionError):
    """Marks and atoms of a configuration are not aligned one-to-one."""


class CollisionError(PreconditionError):
    """A lent particle was placed at a time already charged by the configuration."""


class ConfigurationError(LentParticleError):
    """Invalid settings, config file or command-line overrides."""
