"""Equivalence relations inside a closure, and the lattice they form.

A union of atoms is an equivalence exactly when its atom set contains the
identity atoms and is closed under the converse map and the composition
table, so ``extract_equivalences`` enumerates those atom sets directly
instead of testing every one of the 2^k unions.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np

from eqra.exceptions import (
    AtomBudgetExceededException,
    LatticeException,
    NotAnEquivalenceException,
    NotJoinClosedException,
    NotMeetClosedException,
    SizeMismatchException,
)
from eqra.relations import relcore
from eqra.relations.closure import AtomStructure
from eqra.relations.relcore import BinRel
from eqra.settings import config

logger = logging.getLogger(__name__)


def _converse_sets(s: AtomStructure) -> List[FrozenSet[int]]:
    """Atoms meeting the converse of each atom (a singleton for closed structures)."""
    flipped = s.atom_of.T
    return [frozenset(int(a) for a in np.unique(flipped[atom.bits])) for atom in s.atoms]


def _close(seed: Set[int], s: AtomStructure, converse_sets: List[FrozenSet[int]]) -> FrozenSet[int]:
    members = set(seed)
    pending = list(members)
    while pending:
        x = pending.pop()
        fresh = set(converse_sets[x])
        for y in list(members):
            fresh |= s.comp_table[x][y]
            fresh |= s.comp_table[y][x]
        fresh -= members
        members |= fresh
        pending.extend(fresh)
    return frozenset(members)


def extract_equivalences(s: AtomStructure, atom_budget: Optional[int] = None) -> List[BinRel]:
    """Every member of the closure that is an equivalence relation.

    Closed atom sets are reached by growing the closure of the identity atoms
    one atom at a time; each set found is kept once. Each union is also
    checked bit by bit before it is returned.

    Args:
        s: Atom structure (any partition of the pairs with a composition table).
        atom_budget: Maximum atom count accepted (default ``ATOM_BUDGET``).

    Returns:
        The equivalences in canonical order (by sorted pair list).

    Raises:
        AtomBudgetExceededException: If the structure has too many atoms.
        NotAnEquivalenceException: If a closed atom set is not an equivalence.
    """
    budget = config.ATOM_BUDGET if atom_budget is None else atom_budget
    if s.atom_count > budget:
        raise AtomBudgetExceededException(s.atom_count, budget)
    converse_sets = _converse_sets(s)
    start = _close(set(s.identity_atoms), s, converse_sets)
    seen = {start}
    frontier = [start]
    while frontier:
        current = frontier.pop()
        for atom in range(s.atom_count):
            if atom in current:
                continue
            grown = _close(set(current) | {atom}, s, converse_sets)
            if grown not in seen:
                seen.add(grown)
                frontier.append(grown)

    family = s.family()
    found = []
    for index, atom_set in enumerate(sorted(seen, key=sorted)):
        relation = family.member(sorted(atom_set))
        if not relcore.is_equivalence(relation):
            raise NotAnEquivalenceException(index)
        found.append(relation)
    logger.debug(f"Found {len(found)} equivalences among {s.atom_count} atoms")
    return sorted(found, key=BinRel.sort_key)


@dataclass(frozen=True, eq=False)
class EqLattice:
    """A finite lattice of equivalence relations ordered by containment.

    Args:
        elements: Distinct equivalences in canonical order.
        order: ``order[i, j]`` is True when element i is contained in element j.
        bottom: Index of the least element.
        top: Index of the greatest element.
        meet_table: Index of the intersection of each pair.
        join_table: Index of the transitive closure of the union of each pair.
    """

    elements: Tuple[BinRel, ...]
    order: np.ndarray
    bottom: int
    top: int
    meet_table: np.ndarray
    join_table: np.ndarray

    def __len__(self) -> int:
        return len(self.elements)

    def meet(self, i: int, j: int) -> int:
        return int(self.meet_table[i, j])

    def join(self, i: int, j: int) -> int:
        return int(self.join_table[i, j])

    def index(self, r: BinRel) -> Optional[int]:
        for i, element in enumerate(self.elements):
            if element == r:
                return i
        return None

    @property
    def hasse_edges(self) -> List[Tuple[int, int]]:
        """Covering pairs (lower, upper)."""
        strict = self.order & ~np.eye(len(self), dtype=bool)
        through = np.matmul(strict, strict)
        cover = strict & ~through
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(cover))]

    @property
    def height(self) -> int:
        """Length of the longest chain from bottom to top."""
        edges = self.hasse_edges
        depth = {}
        for i in sorted(range(len(self)), key=lambda k: len(self.elements[k])):
            below = [depth[j] for j, k in edges if k == i]
            depth[i] = max(below) + 1 if below else 0
        return depth[self.top]


def build_lattice(eqs: Sequence[BinRel]) -> EqLattice:
    """Order a set of equivalences and confirm it is closed under meet and join.

    Raises:
        LatticeException: If the set is empty.
        SizeMismatchException: If base sizes differ.
        NotAnEquivalenceException: With the input index of the offending relation.
        NotMeetClosedException: With the canonical indices of a failing pair.
        NotJoinClosedException: With the canonical indices of a failing pair.
    """
    if not eqs:
        raise LatticeException("A lattice needs at least one element")
    n = eqs[0].n
    for index, r in enumerate(eqs):
        if r.n != n:
            raise SizeMismatchException(n, r.n)
        if not relcore.is_equivalence(r):
            raise NotAnEquivalenceException(index)

    elements = tuple(sorted(set(eqs), key=BinRel.sort_key))
    lookup = {r: i for i, r in enumerate(elements)}
    k = len(elements)
    flat = np.stack([r.bits.reshape(-1) for r in elements]).astype(np.int64)
    order = np.matmul(flat, 1 - flat.T) == 0

    meet_table = np.empty((k, k), dtype=np.int64)
    join_table = np.empty((k, k), dtype=np.int64)
    for i, j in itertools.combinations_with_replacement(range(k), 2):
        meet = lookup.get(relcore.intersect(elements[i], elements[j]))
        if meet is None:
            raise NotMeetClosedException((i, j))
        join = lookup.get(relcore.transitive_closure(relcore.union(elements[i], elements[j])))
        if join is None:
            raise NotJoinClosedException((i, j))
        meet_table[i, j] = meet_table[j, i] = meet
        join_table[i, j] = join_table[j, i] = join

    bottom = int(np.flatnonzero(order.all(axis=1))[0])
    top = int(np.flatnonzero(order.all(axis=0))[0])
    for table in (meet_table, join_table, order):
        table.flags.writeable = False
    return EqLattice(elements, order, bottom, top, meet_table, join_table)


@dataclass(frozen=True)
class MnShape:
    """Verdict of M_n recognition.

    ``n_atoms`` is None when the lattice is not of the form M_n.
    """

    n_atoms: Optional[int]
    atom_indices: Tuple[int, ...] = ()

    @property
    def is_mn(self) -> bool:
        return self.n_atoms is not None

    def describe(self) -> str:
        return f"M_{self.n_atoms}" if self.is_mn else "not M_n"


def mn_shape(lattice: EqLattice) -> MnShape:
    """Recognise M_m: m pairwise incomparable elements between bottom and top.

    M_1 is the three-element chain; the two-element chain is not recognised.
    """
    middles = [i for i in range(len(lattice)) if i not in (lattice.bottom, lattice.top)]
    if not middles or lattice.bottom == lattice.top:
        return MnShape(None)
    for i, j in itertools.combinations(middles, 2):
        if lattice.order[i, j] or lattice.order[j, i]:
            return MnShape(None)
        if lattice.meet(i, j) != lattice.bottom or lattice.join(i, j) != lattice.top:
            return MnShape(None)
    return MnShape(len(middles), tuple(middles))


def lattices_equal(a: Sequence[BinRel], b: Sequence[BinRel]) -> bool:
    """Set equality of two relation lists.

    Raises:
        SizeMismatchException: If the lists mix base sizes.
    """
    sizes = {r.n for r in itertools.chain(a, b)}
    if len(sizes) > 1:
        left, right = sorted(sizes)[:2]
        raise SizeMismatchException(left, right)
    return set(a) == set(b)
