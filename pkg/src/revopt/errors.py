"""Exception types shared across the package."""


class RevoptError(Exception):
    """Base class for all revopt errors."""


class NotAPermutation(RevoptError):
    """Value list is not a permutation of {0..2^n-1}."""


class BadWidth(RevoptError):
    """Bit-width outside the supported range {2, 3, 4}."""


class OutOfRange(RevoptError):
    """Rank or index outside its valid interval."""


class CircuitSyntaxError(RevoptError):
    """Malformed circuit text; carries the offending position."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position


class ArityMismatch(CircuitSyntaxError):
    """Gate term has the wrong number of lines for its kind."""


class DuplicateLine(CircuitSyntaxError):
    """Gate term names the same line twice."""


class LineOutOfWidth(CircuitSyntaxError):
    """Gate term uses a line beyond the circuit width."""


class ClosureViolation(RevoptError):
    """A gate conjugate fell outside the gate library."""


class NotInTable(RevoptError):
    """Canonical representative absent from the lookup table."""


class SizeExceedsL(RevoptError):
    """No decomposition found within the search bound L."""


class NotReachable(RevoptError):
    """Function incompatible with the table's width or architecture."""


class IoError(RevoptError):
    """File could not be read or written."""


class FormatError(RevoptError):
    """Bad magic, version, structure, or checksum in a binary file."""


class ArchMismatch(RevoptError):
    """File was produced for a different architecture or width."""


class NotAlmostReduced(RevoptError):
    """Permutation does not satisfy the almost-reduced conditions."""


class SliceMismatch(RevoptError):
    """Bit-slice ranges do not line up."""


class LengthMismatch(RevoptError):
    """Bit arrays of different lengths where equal lengths are required."""


class ResourceExhausted(RevoptError):
    """Computation ran out of its configured resource budget."""


class ResourceBudgetExceeded(ResourceExhausted):
    """Requested run would exceed the configured storage budget."""
