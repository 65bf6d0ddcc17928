"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: InputError -> 1, NumericalError -> 2,
SelectionFailure -> 3.  HypothesisError is reported as a status field, not
an exit code, because a failed hypothesis is an answer rather than a crash.
"""


class BasisCertError(Exception):
    """Base class for all package errors."""


class InputError(BasisCertError):
    """Malformed user input: bad files, bad flags, mismatched shapes."""


class BvsFormatError(InputError):
    """BVS file violates the format; carries the offending line number."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class NumericalError(BasisCertError):
    """Numerical breakdown: dependence, residual overflow, inconsistency."""


class IndependenceError(NumericalError):
    """Vectors fail the relative singular-value independence test."""

    def __init__(self, message, ratio=None):
        super().__init__(message)
        self.ratio = ratio


class NullVectorError(NumericalError):
    """A zero vector where a non-null one is required."""


class SpanError(NumericalError):
    """A vector lies outside the span beyond the residual tolerance."""


class NumericalInconsistencyError(NumericalError):
    """A certified quantity contradicts a direct recomputation."""


class SelectionFailure(BasisCertError):
    """Gliding-hump selection could not produce a certified result."""


class InsufficientCandidatesError(SelectionFailure):
    """Candidates ran out before the requested number of blocks."""

    def __init__(self, message, blocks_built=0):
        super().__init__(message)
        self.blocks_built = blocks_built


class RetriesExceededError(SelectionFailure):
    """All retries spent with the selection constant still >= 1."""


class HypothesisError(BasisCertError):
    """Selection hypotheses fail; carries the witness coordinate if any."""

    def __init__(self, message, witness_coordinate=None):
        super().__init__(message)
        self.witness_coordinate = witness_coordinate
