"""Exception hierarchy shared by the whole package."""


class CoolspecError(Exception):
    """Base class for all errors raised by coolspec."""


class ValidationError(CoolspecError):
    """A parameter set violates one of its invariants."""


class InvalidEfficiency(ValidationError):
    """Detection efficiency outside (0, 1]."""


class InconsistentGain(ValidationError):
    """Nonzero gain together with the no-feedback scheme."""


class ConfigError(CoolspecError):
    """Config file cannot be parsed or contains bad keys."""


class MissingForce(ConfigError):
    """A command needs the force block but the config has none."""


class EmptyGrid(ConfigError):
    """Requested frequency grid has no points."""


class UnknownFigure(ConfigError):
    """Figure id not in the reproduction catalogue."""


class NumericalError(CoolspecError):
    """Base class for numerical failures (exit code 3 in the CLI)."""


class QuadratureNotConverged(NumericalError):
    """Adaptive quadrature failed its relative-tolerance target."""


class WindowTooShort(NumericalError):
    """Pulse duration too long for the measurement window."""


class UnstableStep(NumericalError):
    """Oracle time step violates the stability bound."""
