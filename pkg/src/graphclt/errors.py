"""Exception taxonomy shared by all graphclt modules."""


class GraphCltError(Exception):
    """Base class for all graphclt errors."""


class ParameterError(GraphCltError, ValueError):
    """Invalid argument values (dimensions, probabilities, half-plane violations)."""


class DataError(GraphCltError, ValueError):
    """Non-finite or otherwise unusable numeric input."""


class ConfigError(GraphCltError, ValueError):
    """Invalid experiment configuration."""


class NumericalError(GraphCltError, RuntimeError):
    """A numeric routine failed to converge or produced unusable output."""


class ReplicaError(NumericalError):
    """A Monte Carlo replica failed; carries the replica index."""

    def __init__(self, replica, message):
        super().__init__(f"replica {replica}: {message}")
        self.replica = replica


class DivergenceError(NumericalError):
    """An adaptive integral failed to converge; carries partial sums for diagnosis."""

    def __init__(self, message, partial_sums=()):
        super().__init__(message)
        self.partial_sums = tuple(partial_sums)


class RangeError(GraphCltError, OverflowError):
    """Evaluation would overflow (e.g. cosh weight at extreme arguments)."""


class UnsupportedTransformError(GraphCltError, ValueError):
    """The requested transform does not exist for this function family."""
