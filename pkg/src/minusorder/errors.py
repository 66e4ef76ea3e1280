"""Exception hierarchy.

Every error raised on purpose by this package derives from
:class:`MinusOrderError` so callers (and the CLI) can separate
mathematical refusals from programming bugs.
"""


class MinusOrderError(Exception):
    """Base class for all package errors."""


class InvalidMatrix(MinusOrderError):
    """Raised for malformed input: wrong shape, NaN/Inf entries."""


class DimensionMismatch(MinusOrderError):
    """Raised when operands live in different ambient spaces."""


class NotComplementary(MinusOrderError):
    """Raised when a (range, kernel) pair is not a direct-sum decomposition."""


class IllConditioned(MinusOrderError):
    """Raised instead of returning a numerically meaningless operator."""

    def __init__(self, msg, cond=None):
        super().__init__(msg)
        self.cond = cond


class NotIdempotent(MinusOrderError):
    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


class NotSymmetry(MinusOrderError):
    def __init__(self, msg, residuals=None):
        super().__init__(msg)
        self.residuals = residuals or {}


class FormulaMismatch(MinusOrderError):
    """Two routes to the same quantity disagree; signals a numerics bug."""

    def __init__(self, msg, discrepancy=None):
        super().__init__(msg)
        self.discrepancy = discrepancy


class NotComparable(MinusOrderError):
    """Raised when an operation requires P ⪯ Q and it does not hold."""


class NotCommuting(MinusOrderError):
    """Raised when an operand fails to commute with the given symmetry."""


class Degenerate(MinusOrderError):
    """Raised when a subspace is degenerate for the indefinite inner product."""


class Infeasible(MinusOrderError):
    """A construction's precondition failed; ``reason`` names which one."""

    def __init__(self, msg, reason=None):
        super().__init__(msg)
        self.reason = reason or msg


class RetriesExhausted(MinusOrderError):
    """Rejection sampling gave up."""


class BadSignature(MinusOrderError):
    pass


class ChainTooLong(MinusOrderError):
    pass
