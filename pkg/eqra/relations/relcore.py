"""Binary relations on a finite base set and the proper relation-algebra operations.

A relation on ``{0, ..., n-1}`` is an immutable ``n x n`` boolean numpy
matrix. Composition is a boolean matrix product, converse a transpose; every
operation returns a new read-only value, so relations can be shared freely
between threads.

Example:
    >>> r = from_pairs(3, [(0, 1), (1, 2)])
    >>> sorted(transitive_closure(r).pairs())
    [(0, 1), (0, 2), (1, 2)]
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from eqra.exceptions import InvalidBaseSizeException, RelationException, SizeMismatchException
from eqra.settings import config

Pair = Tuple[int, int]


def check_base_size(n: int) -> int:
    """Validate a base size.

    Args:
        n: Number of elements of the base set.

    Returns:
        The validated size.

    Raises:
        InvalidBaseSizeException: If n is outside 1..MAX_BASE_SIZE.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise InvalidBaseSizeException(f"Base size must be an integer, got {n!r}")
    if n < 1 or n > config.MAX_BASE_SIZE:
        raise InvalidBaseSizeException(
            f"Base size {n} outside 1..{config.MAX_BASE_SIZE}"
        )
    return int(n)


@dataclass(frozen=True, eq=False)
class BinRel:
    """An immutable binary relation stored as a square boolean matrix.

    Args:
        bits: ``n x n`` array-like; ``bits[a, b]`` is true iff ``(a, b)`` is in the relation.
    """

    bits: np.ndarray

    def __post_init__(self) -> None:
        bits = np.array(self.bits, dtype=bool)
        if bits.ndim != 2 or bits.shape[0] != bits.shape[1]:
            raise InvalidBaseSizeException(f"Relation matrix must be square, got shape {bits.shape}")
        check_base_size(bits.shape[0])
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    @property
    def n(self) -> int:
        """Size of the base set."""
        return self.bits.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinRel):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        return hash((self.n, np.packbits(self.bits).tobytes()))

    def __len__(self) -> int:
        return int(self.bits.sum())

    def __contains__(self, pair: Pair) -> bool:
        a, b = pair
        if not (0 <= a < self.n and 0 <= b < self.n):
            return False
        return bool(self.bits[a, b])

    def __repr__(self) -> str:
        return f"BinRel(n={self.n}, pairs={len(self)})"

    def pairs(self) -> List[Pair]:
        """All pairs in row-major order."""
        rows, cols = np.nonzero(self.bits)
        return [(int(a), int(b)) for a, b in zip(rows, cols)]

    def sort_key(self) -> Tuple[Pair, ...]:
        """Canonical key: the row-major pair list."""
        return tuple(self.pairs())

    def issubset(self, other: BinRel) -> bool:
        """Containment test."""
        _same_size(self, other)
        return not bool((self.bits & ~other.bits).any())

    def is_empty(self) -> bool:
        """Whether no pair is present."""
        return not bool(self.bits.any())


class BooleanOp(Enum):
    """Pointwise boolean operations on relations."""

    UNION = "union"
    INTERSECT = "intersect"
    COMPLEMENT = "complement"


def _same_size(r: BinRel, s: BinRel) -> int:
    if r.n != s.n:
        raise SizeMismatchException(r.n, s.n)
    return r.n


def identity(n: int) -> BinRel:
    """The diagonal relation 1' on n elements."""
    return BinRel(np.eye(check_base_size(n), dtype=bool))


def universal(n: int) -> BinRel:
    """The universal relation with all n^2 pairs."""
    n = check_base_size(n)
    return BinRel(np.ones((n, n), dtype=bool))


def empty(n: int) -> BinRel:
    """The empty relation."""
    n = check_base_size(n)
    return BinRel(np.zeros((n, n), dtype=bool))


def from_pairs(n: int, pairs: Iterable[Pair]) -> BinRel:
    """Build a relation from explicit pairs.

    Args:
        n: Base size.
        pairs: 0-based ``(a, b)`` pairs.

    Raises:
        RelationException: If a pair lies outside the base set.
    """
    n = check_base_size(n)
    bits = np.zeros((n, n), dtype=bool)
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise RelationException(f"Pair ({a}, {b}) outside base set of size {n}")
        bits[a, b] = True
    return BinRel(bits)


def union(r: BinRel, s: BinRel) -> BinRel:
    _same_size(r, s)
    return BinRel(r.bits | s.bits)


def intersect(r: BinRel, s: BinRel) -> BinRel:
    _same_size(r, s)
    return BinRel(r.bits & s.bits)


def complement(r: BinRel) -> BinRel:
    return BinRel(~r.bits)


def difference(r: BinRel, s: BinRel) -> BinRel:
    """Pairs of r not in s."""
    _same_size(r, s)
    return BinRel(r.bits & ~s.bits)


def union_all(relations: Iterable[BinRel], n: int) -> BinRel:
    """Union of any number of relations; the empty relation when none are given."""
    n = check_base_size(n)
    bits = np.zeros((n, n), dtype=bool)
    for r in relations:
        if r.n != n:
            raise SizeMismatchException(n, r.n)
        bits |= r.bits
    return BinRel(bits)


def boolean(op: BooleanOp, r: BinRel, s: Optional[BinRel] = None) -> BinRel:
    """Apply a pointwise boolean operation.

    Args:
        op: Which operation.
        r: First operand.
        s: Second operand for union/intersect; must be absent for complement.

    Raises:
        SizeMismatchException: If the operands differ in base size.
        RelationException: If the operand count does not fit the operation.
    """
    op = BooleanOp(op)
    if op is BooleanOp.COMPLEMENT:
        if s is not None:
            raise RelationException("complement takes exactly one relation")
        return complement(r)
    if s is None:
        raise RelationException(f"{op.value} needs two relations")
    if op is BooleanOp.UNION:
        return union(r, s)
    return intersect(r, s)


def compose(r: BinRel, s: BinRel) -> BinRel:
    """Relational composition: (a, b) iff some c has (a, c) in r and (c, b) in s."""
    _same_size(r, s)
    return BinRel(np.matmul(r.bits, s.bits))


def converse(r: BinRel) -> BinRel:
    return BinRel(r.bits.T)


def transitive_closure(r: BinRel) -> BinRel:
    """Smallest transitive relation containing r (reachability fixpoint by squaring)."""
    closure = r.bits.copy()
    while True:
        step = closure | np.matmul(closure, closure)
        if np.array_equal(step, closure):
            return BinRel(closure)
        closure = step


def is_reflexive(r: BinRel) -> bool:
    return bool(np.diagonal(r.bits).all())


def is_symmetric(r: BinRel) -> bool:
    return bool(np.array_equal(r.bits, r.bits.T))


def is_transitive(r: BinRel) -> bool:
    return not bool((np.matmul(r.bits, r.bits) & ~r.bits).any())


def is_equivalence(r: BinRel) -> bool:
    """Reflexive, symmetric and transitive."""
    return is_reflexive(r) and is_symmetric(r) and is_transitive(r)


def transitivity_witness(r: BinRel) -> Optional[Tuple[int, int, int]]:
    """A triple (a, b, c) with a r b, b r c but not a r c, or None if r is transitive."""
    missing = np.matmul(r.bits, r.bits) & ~r.bits
    if not missing.any():
        return None
    a, c = (int(v) for v in np.argwhere(missing)[0])
    b = int(np.flatnonzero(r.bits[a] & r.bits[:, c])[0])
    return a, b, c


def classes(r: BinRel) -> List[Tuple[int, ...]]:
    """Equivalence classes of an equivalence relation, ordered by least element."""
    seen = np.zeros(r.n, dtype=bool)
    result = []
    for a in range(r.n):
        if not seen[a]:
            members = np.flatnonzero(r.bits[a])
            seen[members] = True
            result.append(tuple(int(m) for m in members))
    return result


def permute(r: BinRel, permutation: Sequence[int]) -> BinRel:
    """Image of r under the base-set bijection ``a -> permutation[a]``."""
    perm = np.asarray(permutation, dtype=int)
    if sorted(perm.tolist()) != list(range(r.n)):
        raise RelationException(f"Not a permutation of 0..{r.n - 1}: {list(permutation)}")
    bits = np.zeros_like(r.bits)
    bits[np.ix_(perm, perm)] = r.bits
    return BinRel(bits)
