"""Relation-algebra closure of a finite generator set by partition refinement.

The closure RA(G) of generators G on an n-element set is a finite Boolean
algebra of relations, so it is determined by its atoms: a partition of the
n*n pairs. Starting from the partition by membership in each generator and in
the identity, blocks are split until the converse of every block is a block
and every block lies inside or outside each composition of two blocks. The
unions of the final blocks are exactly RA(G).

Each block also carries an RA term over the generator names describing how
it was carved out, which gives every member of the closure an explicit term
(and, through the three-variable translation, an explicit FO3 definition).

Example:
    >>> s = ra_closure([identity(4)])
    >>> s.atom_count, sorted(s.atom_sizes)
    (2, [4, 12])
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from eqra.exceptions import AtomBudgetExceededException, AtomIndexException, ClosureException, SizeMismatchException
from eqra.logic.formulas import Structure
from eqra.logic.ra_terms import (
    Complement,
    Compose,
    Converse,
    Identity,
    Name,
    RATerm,
    intersection_of,
    union_of,
)
from eqra.relations import relcore
from eqra.relations.relcore import BinRel
from eqra.settings import config

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AtomStructure:
    """Atoms of a field of relations together with their composition data.

    Args:
        n: Base size.
        atom_of: ``n x n`` array giving the atom index of every pair.
        atoms: The blocks, numbered by their smallest pair in row-major order.
        comp_table: ``comp_table[i][j]`` is the set of atoms meeting ``atoms[i] ; atoms[j]``.
        converse_map: Atom index of each atom's converse (None when the converse is not an atom).
        identity_atoms: Atoms whose union is the identity.
        generators: The input relations.
        generator_names: Symbols used for the generators in atom terms.
        atom_terms: RA term over the generator names for each atom, when known.
        closed: True when produced by full refinement (a relation algebra).
    """

    n: int
    atom_of: np.ndarray
    atoms: Tuple[BinRel, ...]
    comp_table: Tuple[Tuple[FrozenSet[int], ...], ...]
    converse_map: Tuple[Optional[int], ...]
    identity_atoms: FrozenSet[int]
    generators: Tuple[BinRel, ...]
    generator_names: Tuple[str, ...]
    atom_terms: Optional[Tuple[RATerm, ...]] = None
    closed: bool = True

    @property
    def atom_count(self) -> int:
        return len(self.atoms)

    @property
    def atom_sizes(self) -> List[int]:
        return [len(a) for a in self.atoms]

    def structure(self) -> Structure:
        """Structure binding the generator names, for evaluating atom terms."""
        return Structure(self.n, dict(zip(self.generator_names, self.generators)))

    def family(self) -> ClosedFamily:
        return ClosedFamily(self)


class ClosedFamily:
    """The members of a closure: every union of atoms, enumerated lazily.

    Args:
        structure: The atom structure.
    """

    def __init__(self, structure: AtomStructure):
        self.structure = structure

    def __contains__(self, r: BinRel) -> bool:
        return decompose(self.structure, r) is not None

    def __len__(self) -> int:
        return 2 ** self.structure.atom_count

    def __iter__(self) -> Iterator[BinRel]:
        k = self.structure.atom_count
        for size in range(k + 1):
            for chosen in itertools.combinations(range(k), size):
                yield self.member(chosen)

    def member(self, atom_indices: Sequence[int]) -> BinRel:
        """Union of the given atoms."""
        return relcore.union_all((self.structure.atoms[i] for i in atom_indices), self.structure.n)


def _check_generators(generators: Sequence[BinRel]) -> int:
    if not generators:
        raise ClosureException("At least one generator is required")
    n = generators[0].n
    for g in generators[1:]:
        if g.n != n:
            raise SizeMismatchException(n, g.n)
    return n


def _canonical_labels(keys: np.ndarray) -> Tuple[np.ndarray, int]:
    """Label rows by their distinct key, numbering blocks by first occurrence (row-major pair order)."""
    _, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    count = int(inverse.max()) + 1
    first = np.full(count, keys.shape[0], dtype=np.int64)
    np.minimum.at(first, inverse, np.arange(keys.shape[0]))
    rank = np.empty(count, dtype=np.int64)
    rank[np.argsort(first)] = np.arange(count)
    return rank[inverse], count


def _representatives(labels: np.ndarray, count: int) -> np.ndarray:
    first = np.full(count, labels.size, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(labels.size))
    return first


def _membership_partition(generators: Sequence[BinRel], names: Sequence[str], n: int):
    columns = [g.bits.reshape(-1) for g in generators] + [np.eye(n, dtype=bool).reshape(-1)]
    keys = np.stack(columns, axis=1).astype(np.int8)
    labels, count = _canonical_labels(keys)
    terms = []
    for rep in _representatives(labels, count):
        conjuncts: List[RATerm] = [
            Name(name) if keys[rep, g] else Complement(Name(name)) for g, name in enumerate(names)
        ]
        conjuncts.append(Identity() if keys[rep, -1] else Complement(Identity()))
        terms.append(intersection_of(conjuncts))
    return labels, count, terms


def _split(labels: np.ndarray, count: int, columns: np.ndarray, describe) -> Tuple[np.ndarray, int, list]:
    """Refine labels by extra key columns; ``describe(rep, column)`` gives the term conjunct."""
    keys = np.column_stack([labels, columns.astype(np.int64)])
    new_labels, new_count = _canonical_labels(keys)
    if new_count == count:
        return labels, count, None
    reps = _representatives(new_labels, new_count)
    parents = labels[reps]
    pieces = np.bincount(parents, minlength=count)
    conjuncts = []
    for block, rep in enumerate(reps):
        parent = int(parents[block])
        if pieces[parent] == 1:
            conjuncts.append((parent, []))
            continue
        inside = columns[labels == parent]
        varying = np.flatnonzero(inside.min(axis=0) != inside.max(axis=0))
        conjuncts.append((parent, [describe(rep, int(c)) for c in varying]))
    return new_labels, new_count, conjuncts


def _masks(labels: np.ndarray, count: int, n: int) -> List[np.ndarray]:
    grid = labels.reshape(n, n)
    return [grid == b for b in range(count)]


def _assemble(
    generators: Sequence[BinRel],
    names: Sequence[str],
    labels: np.ndarray,
    count: int,
    terms: Optional[Sequence[RATerm]],
    closed: bool,
) -> AtomStructure:
    n = generators[0].n
    masks = _masks(labels, count, n)
    grid = labels.reshape(n, n)
    comp_rows = []
    for i in range(count):
        row = []
        for j in range(count):
            product = np.matmul(masks[i], masks[j])
            row.append(frozenset(int(a) for a in np.unique(grid[product])))
        comp_rows.append(tuple(row))
    converse_map = []
    for b in range(count):
        hit = np.unique(grid[masks[b].T])
        single = len(hit) == 1 and np.array_equal(masks[int(hit[0])], masks[b].T)
        converse_map.append(int(hit[0]) if single else None)
    atom_of = grid.copy()
    atom_of.flags.writeable = False
    return AtomStructure(
        n=n,
        atom_of=atom_of,
        atoms=tuple(BinRel(m) for m in masks),
        comp_table=tuple(comp_rows),
        converse_map=tuple(converse_map),
        identity_atoms=frozenset(int(a) for a in np.unique(np.diagonal(grid))),
        generators=tuple(generators),
        generator_names=tuple(names),
        atom_terms=tuple(terms) if terms is not None else None,
        closed=closed,
    )


def _generator_names(generators: Sequence[BinRel], names: Optional[Sequence[str]]) -> Tuple[str, ...]:
    if names is None:
        return tuple(f"R{i}" for i in range(len(generators)))
    if len(names) != len(generators):
        raise ClosureException(f"{len(names)} names for {len(generators)} generators")
    return tuple(names)


def _check_budget(count: int, budget: int) -> None:
    if count > budget:
        raise AtomBudgetExceededException(count, budget)


def ra_closure(
    generators: Sequence[BinRel],
    names: Optional[Sequence[str]] = None,
    atom_budget: Optional[int] = None,
) -> AtomStructure:
    """Compute the atom structure of the relation algebra generated by the generators.

    The identity is always adjoined. Refinement alternates a converse split
    (stable after one pass) with a composition split until the block count
    stops growing.

    Args:
        generators: Relations on one base set.
        names: Symbols for the generators in atom terms (default R0, R1, ...).
        atom_budget: Maximum number of atoms (default ``ATOM_BUDGET``).

    Returns:
        A closed AtomStructure.

    Raises:
        SizeMismatchException: If the generators differ in base size.
        AtomBudgetExceededException: If refinement produces too many atoms.
    """
    n = _check_generators(generators)
    names = _generator_names(generators, names)
    budget = config.ATOM_BUDGET if atom_budget is None else atom_budget
    labels, count, terms = _membership_partition(generators, names, n)
    _check_budget(count, budget)
    logger.debug(f"Initial partition of {n * n} pairs has {count} blocks")

    rounds = 0
    while True:
        rounds += 1
        before = count

        flipped = labels.reshape(n, n).T.reshape(-1)
        new_labels, new_count, conjuncts = _split(
            labels, count, flipped[:, None], lambda rep, _c: Converse(terms[int(flipped[rep])])
        )
        if conjuncts is not None:
            _check_budget(new_count, budget)
            terms = [intersection_of([terms[parent]] + extra) for parent, extra in conjuncts]
            labels, count = new_labels, new_count

        masks = _masks(labels, count, n)
        products = np.empty((n * n, count * count), dtype=bool)
        for i, j in itertools.product(range(count), repeat=2):
            products[:, i * count + j] = np.matmul(masks[i], masks[j]).reshape(-1)

        def describe(rep: int, column: int, current=terms, k=count) -> RATerm:
            term = Compose(current[column // k], current[column % k])
            return term if products[rep, column] else Complement(term)

        new_labels, new_count, conjuncts = _split(labels, count, products, describe)
        if conjuncts is not None:
            _check_budget(new_count, budget)
            terms = [intersection_of([terms[parent]] + extra) for parent, extra in conjuncts]
            labels, count = new_labels, new_count

        logger.debug(f"Refinement round {rounds}: {before} -> {count} blocks")
        if count == before:
            break

    logger.info(f"RA closure of {len(generators)} generators on n={n}: {count} atoms after {rounds} rounds")
    return _assemble(generators, names, labels, count, terms, closed=True)


def ba_closure(
    generators: Sequence[BinRel],
    names: Optional[Sequence[str]] = None,
    atom_budget: Optional[int] = None,
) -> AtomStructure:
    """Atoms of the Boolean algebra generated by the generators and the identity.

    No refinement is done: comp_table lists the atoms each composition meets
    and converse_map is None wherever a converse is not a single atom. Use
    ``invariant_violations`` to see whether the result is already RA-closed.
    """
    n = _check_generators(generators)
    names = _generator_names(generators, names)
    budget = config.ATOM_BUDGET if atom_budget is None else atom_budget
    labels, count, terms = _membership_partition(generators, names, n)
    _check_budget(count, budget)
    return _assemble(generators, names, labels, count, terms, closed=False)


def structure_from_labels(
    generators: Sequence[BinRel],
    labels: np.ndarray,
    names: Optional[Sequence[str]] = None,
) -> AtomStructure:
    """Build an (unvalidated) atom structure from an arbitrary pair labelling.

    Args:
        generators: The generator relations to record.
        labels: ``n x n`` integer labels; blocks are renumbered canonically.
        names: Generator symbols.
    """
    n = _check_generators(generators)
    labels = np.asarray(labels).reshape(-1, 1)
    if labels.shape[0] != n * n:
        raise SizeMismatchException(n * n, labels.shape[0])
    canonical, count = _canonical_labels(labels)
    return _assemble(generators, _generator_names(generators, names), canonical, count, None, closed=False)


def invariant_violations(s: AtomStructure) -> List[str]:
    """Every AtomStructure invariant the structure breaks (empty when it is a relation algebra)."""
    problems = []
    cover = np.zeros((s.n, s.n), dtype=np.int64)
    for atom in s.atoms:
        cover += atom.bits
        if atom.is_empty():
            problems.append("empty atom")
    if not (cover == 1).all():
        problems.append("atoms do not partition the pair space")
    for index, g in enumerate(s.generators):
        if decompose(s, g) is None:
            problems.append(f"generator {index} is not a union of atoms")
    ident = decompose(s, relcore.identity(s.n))
    if ident is None or ident != s.identity_atoms:
        problems.append("identity is not the union of identity_atoms")
    for i, j in enumerate(s.converse_map):
        if j is None:
            problems.append(f"converse of atom {i} is not an atom")
        elif s.converse_map[j] != i or relcore.converse(s.atoms[i]) != s.atoms[j]:
            problems.append(f"converse_map is not an involution at atom {i}")
    for i, j in itertools.product(range(s.atom_count), repeat=2):
        product = relcore.compose(s.atoms[i], s.atoms[j])
        listed = relcore.union_all((s.atoms[k] for k in s.comp_table[i][j]), s.n)
        if product != listed:
            problems.append(f"composition of atoms {i} and {j} is not a union of atoms")
    return problems


def decompose(s: AtomStructure, r: BinRel) -> Optional[FrozenSet[int]]:
    """Atoms whose union is r.

    Returns:
        The atom index set, or None when r is not a union of atoms (not a member).

    Raises:
        SizeMismatchException: If r has a different base size.
    """
    if r.n != s.n:
        raise SizeMismatchException(s.n, r.n)
    k = s.atom_count
    hits = np.bincount(s.atom_of[r.bits], minlength=k)
    sizes = np.array(s.atom_sizes)
    if ((hits > 0) & (hits < sizes)).any():
        return None
    return frozenset(int(a) for a in np.flatnonzero(hits == sizes))


def member_term(s: AtomStructure, r: BinRel) -> Optional[RATerm]:
    """An RA term over the generator names that evaluates to r, or None if r is not a member."""
    if s.atom_terms is None:
        raise ClosureException("Atom terms are only tracked by ra_closure and ba_closure")
    atoms = decompose(s, r)
    if atoms is None:
        return None
    return union_of(s.atom_terms[i] for i in sorted(atoms))


def atom_composition_row(s: AtomStructure, i: int) -> List[FrozenSet[int]]:
    """Row i of the composition table.

    Raises:
        AtomIndexException: If i is not an atom index.
    """
    if not 0 <= i < s.atom_count:
        raise AtomIndexException(f"Atom index {i} outside 0..{s.atom_count - 1}")
    return list(s.comp_table[i])
