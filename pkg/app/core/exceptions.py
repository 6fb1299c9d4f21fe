"""
Errors shared by every app of the toolkit.

Data problems are validation errors (they carry a ``code`` the CLI can
report); numerical failures are arithmetic errors.
"""
from django.core.exceptions import ValidationError


class DataError(ValidationError):
    """Input data violates a precondition."""

    default_code = "invalid"

    def __init__(self, message, code=None, params=None):
        super().__init__(message, code=code or self.default_code, params=params)

    def __str__(self):
        return "; ".join(self.messages)


class GraphFormatError(DataError):
    default_code = "graph_format"


class DegenerateGraphError(DataError):
    default_code = "degenerate_graph"


class DisconnectedGraphError(DataError):
    default_code = "disconnected_graph"


class SpectralGapError(DataError):
    """mu' <= 0: the graph is bipartite or disconnected."""

    default_code = "spectral_gap"


class DictionaryError(DataError):
    default_code = "dictionary"


class InsufficientSeedsError(DataError):
    default_code = "insufficient_seeds"


class LabelError(DataError):
    default_code = "labels"


class SamplingError(DataError):
    default_code = "sampling"


class DatasetMismatchError(DataError):
    default_code = "dataset_mismatch"


class NumericalError(ArithmeticError):
    """A computation could not produce a trustworthy result."""


class ConvergenceError(NumericalError):
    """An iterative method ran out of iterations."""

    def __init__(self, message, iterate=None, residual=None, iterations=None):
        super().__init__(message)
        self.iterate = iterate
        self.residual = residual
        self.iterations = iterations
