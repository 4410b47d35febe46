"""Exception types raised across the package."""

import numpy as np


class DimensionError(ValueError):
    """Input vector or matrix does not have the expected dimension."""


class InvalidLabelError(ValueError):
    """Label is not exactly -1 or +1, or cannot be mapped to one."""


class NumericalFault(ArithmeticError):
    """A step size or weight became non-finite; the stream cannot continue."""


class SingularDesignError(np.linalg.LinAlgError):
    """The batch normal system is rank deficient."""

    def __init__(self, rank, dim):
        self.rank = rank
        self.dim = dim
        super().__init__(
            f"normal matrix X^T W X is singular: rank {rank} < dimension {dim} "
            f"(rank deficiency {dim - rank}); pass ridge > 0 to regularize"
        )


class ParseError(ValueError):
    """Malformed line in a data file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyDatasetError(ValueError):
    """No samples remain after loading or filtering."""


class StratificationError(ValueError):
    """Stratified folds need at least one sample of each class."""


class ProtocolError(ValueError):
    """Evaluation inputs violate the benchmark protocol."""
