"""Custom exception classes for the eqra project.

This module defines a simple exception hierarchy for domain-specific
error handling without complex abstractions.
"""

from typing import Sequence, Tuple


class EqraException(Exception):
    """Base exception for all eqra errors."""
    pass


class ConfigurationException(EqraException):
    """Configuration and settings errors."""
    pass


class RelationException(EqraException):
    """Binary relation construction and operation errors."""
    pass


class SizeMismatchException(RelationException):
    """Two relations (or a relation and an algebra) disagree on base size."""

    def __init__(self, left: int, right: int):
        super().__init__(f"Base size mismatch: {left} != {right}")
        self.left = left
        self.right = right


class InvalidBaseSizeException(RelationException):
    """Base size outside 1..MAX_BASE_SIZE or matrix of the wrong shape."""
    pass


class RelationFormatException(RelationException):
    """Relation file could not be parsed."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ClosureException(EqraException):
    """Relation-algebra closure errors."""
    pass


class AtomBudgetExceededException(ClosureException):
    """Partition refinement produced more atoms than allowed."""

    def __init__(self, count: int, budget: int):
        super().__init__(f"Atom budget exceeded: {count} atoms > budget {budget}")
        self.count = count
        self.budget = budget


class AtomIndexException(ClosureException):
    """Atom index out of range."""
    pass


class LatticeException(EqraException):
    """Equivalence lattice construction errors."""
    pass


class NotAnEquivalenceException(LatticeException):
    """A lattice element is not an equivalence relation."""

    def __init__(self, index: int):
        super().__init__(f"Element {index} is not an equivalence relation")
        self.index = index


class NotMeetClosedException(LatticeException):
    """The meet of two elements is missing from the set."""

    def __init__(self, pair: Tuple[int, int]):
        super().__init__(f"Meet of elements {pair[0]} and {pair[1]} is not in the set")
        self.pair = pair


class NotJoinClosedException(LatticeException):
    """The join of two elements is missing from the set."""

    def __init__(self, pair: Tuple[int, int]):
        super().__init__(f"Join of elements {pair[0]} and {pair[1]} is not in the set")
        self.pair = pair


class FormulaException(EqraException):
    """Formula and RA-term errors."""
    pass


class FormulaParseException(FormulaException):
    """Concrete syntax could not be parsed."""

    def __init__(self, message: str, position: int, expected: Sequence[str] = ()):
        detail = f"{message} at position {position}"
        if expected:
            detail += f"; expected one of: {', '.join(expected)}"
        super().__init__(detail)
        self.position = position
        self.expected = tuple(expected)


class UnknownSymbolException(FormulaException):
    """A relation symbol does not resolve in the structure."""

    def __init__(self, symbol: str):
        super().__init__(f"Unknown relation symbol: {symbol}")
        self.symbol = symbol


class FreeVariableException(FormulaException):
    """A formula has free variables outside the requested pair."""

    def __init__(self, variables: Sequence[str]):
        super().__init__(f"Free variables outside the output pair: {', '.join(sorted(variables))}")
        self.variables = tuple(sorted(variables))


class SearchBudgetException(FormulaException):
    """Estimated pp enumeration exceeds the hard cap."""
    pass


class AlgebraException(EqraException):
    """Finite algebra errors."""
    pass


class AlgebraFormatException(AlgebraException):
    """Operation table is malformed."""
    pass


class BaseTooLargeException(AlgebraException):
    """Algebra too large for partition enumeration."""
    pass


class GeneratorNotCompatibleException(AlgebraException):
    """A generating relation is not a congruence of the algebra."""

    def __init__(self, index: int):
        super().__init__(f"Generator {index} is not compatible with the algebra")
        self.index = index


class ConstructionException(EqraException):
    """Errors building the concrete relation families."""
    pass


class NotPrimeException(ConstructionException):
    """Modulus is not prime."""
    pass


class PrimeTooLargeException(ConstructionException):
    """Prime above the supported guard."""
    pass


class NOutOfRangeException(ConstructionException):
    """Number of alpha generators outside 1 <= n < p - 2."""
    pass


class MOutOfRangeException(ConstructionException):
    """Requested M_m outside the supported range."""
    pass
