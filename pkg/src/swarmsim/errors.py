"""Exception types raised by the simulator."""


class SimError(Exception):
    """Base class for all simulator errors."""


class ContractViolation(SimError, ValueError):
    """An argument or state violated a documented precondition."""


class UnsupportedShapePair(SimError, TypeError):
    """No closest-point routine exists for this pair of shapes."""


class UnknownScenario(SimError, KeyError):
    """Requested scenario name is not in the registry."""
