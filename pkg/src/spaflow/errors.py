"""Exception types shared across the package."""


class SpaflowError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(SpaflowError, ValueError):
    """A graph structure is malformed: bad index, broken conjugation, ..."""


class CheckDegreeError(GraphError):
    """An operation needing degree-2 check nodes met a check of another degree."""


class UnknownGeneratorError(GraphError):
    """A graph generator name was not recognized."""


class GraphFormatError(GraphError):
    """A graph text file could not be parsed."""


class NotStronglyConnectedError(SpaflowError):
    """The flow graph is not strongly connected, so the quantity is undefined."""


class InvalidIndexError(SpaflowError, ValueError):
    """The given imprimitivity index does not divide all cycle lengths."""


class NotIrreducibleError(SpaflowError):
    """Perron data was requested for a reducible flow adjacency matrix."""


class NoConvergenceError(SpaflowError):
    """An iterative eigen-solver exhausted its budget without converging."""


class NumericEscapeError(SpaflowError, ArithmeticError):
    """Message values left the representable range during decoding."""


class SizeLimitError(SpaflowError, ValueError):
    """A dense computation was requested above the supported size."""


class ValidationError(SpaflowError, ValueError):
    """A graph fails the hypotheses required by the requested analysis."""


class ImprimitiveNotSupportedError(SpaflowError):
    """A per-edge rate limit exists only for primitive flow adjacencies."""
