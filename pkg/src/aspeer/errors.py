class ConfigurationError(ValueError):
    """Raised for invalid parameters, before any simulation work starts."""


class InvariantError(RuntimeError):
    """A state transition would break the rate or capacity bookkeeping."""


class InsufficientCapacity(Exception):
    """The candidate list cannot supply the full stream."""

    def __init__(self, needed, available):
        super().__init__(f"need {needed} units, candidates offer {available}")
        self.needed = needed
        self.available = available
