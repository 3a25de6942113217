"""Seeded random relations, structures, terms, formulas and pp queries for the property sections."""

from typing import List, Sequence

import numpy as np

from eqra.logic.formulas import And, Atom, Equals, Exists, ForAll, Formula, Not, Or, Structure
from eqra.logic.primitive_positive import EQUALITY, Constraint, PPQuery
from eqra.logic.ra_terms import Complement, Compose, Converse, Identity, Name, RATerm, Union
from eqra.relations.relcore import BinRel

SYMBOLS = ("R", "S", "T")
FORMULA_VARIABLES = ("x", "y", "z")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_relation(rng: np.random.Generator, n: int, density: float = 0.35) -> BinRel:
    return BinRel(rng.random((n, n)) < density)


def random_structure(rng: np.random.Generator, max_n: int = 6, max_symbols: int = 3) -> Structure:
    n = int(rng.integers(1, max_n + 1))
    count = int(rng.integers(1, max_symbols + 1))
    density = float(rng.uniform(0.15, 0.6))
    return Structure(n, {symbol: random_relation(rng, n, density) for symbol in SYMBOLS[:count]})


def random_generators(rng: np.random.Generator, max_n: int = 6, max_count: int = 3) -> List[BinRel]:
    structure = random_structure(rng, max_n, max_count)
    return [structure.relation(s) for s in structure.symbols]


def random_ra_term(rng: np.random.Generator, symbols: Sequence[str], depth: int) -> RATerm:
    """A term of height at most ``depth`` over the symbols and the identity."""
    if depth == 0 or rng.random() < 0.2:
        choice = int(rng.integers(len(symbols) + 1))
        return Identity() if choice == len(symbols) else Name(symbols[choice])
    kind = int(rng.integers(4))
    if kind == 0:
        return Union(random_ra_term(rng, symbols, depth - 1), random_ra_term(rng, symbols, depth - 1))
    if kind == 1:
        return Compose(random_ra_term(rng, symbols, depth - 1), random_ra_term(rng, symbols, depth - 1))
    if kind == 2:
        return Complement(random_ra_term(rng, symbols, depth - 1))
    return Converse(random_ra_term(rng, symbols, depth - 1))


def _variable(rng: np.random.Generator) -> str:
    return FORMULA_VARIABLES[int(rng.integers(len(FORMULA_VARIABLES)))]


def random_formula(rng: np.random.Generator, symbols: Sequence[str], depth: int) -> Formula:
    """A formula over x, y, z of height at most ``depth``."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.25:
            return Equals(_variable(rng), _variable(rng))
        return Atom(symbols[int(rng.integers(len(symbols)))], _variable(rng), _variable(rng))
    kind = int(rng.integers(5))
    if kind == 0:
        return And(random_formula(rng, symbols, depth - 1), random_formula(rng, symbols, depth - 1))
    if kind == 1:
        return Or(random_formula(rng, symbols, depth - 1), random_formula(rng, symbols, depth - 1))
    if kind == 2:
        return Not(random_formula(rng, symbols, depth - 1))
    if kind == 3:
        return Exists(_variable(rng), random_formula(rng, symbols, depth - 1))
    return ForAll(_variable(rng), random_formula(rng, symbols, depth - 1))


def random_pp_query(
    rng: np.random.Generator, symbols: Sequence[str], max_vars: int = 4, max_constraints: int = 4
) -> PPQuery:
    """A query on x, y and up to ``max_vars - 2`` existential variables; equality may appear."""
    names = ["x", "y"] + [f"z{i}" for i in range(1, max_vars - 1)]
    used = names[: int(rng.integers(2, max_vars + 1))]
    pool = list(symbols) + [EQUALITY]
    constraints = tuple(
        Constraint(used[int(rng.integers(len(used)))], used[int(rng.integers(len(used)))], pool[int(rng.integers(len(pool)))])
        for _ in range(int(rng.integers(1, max_constraints + 1)))
    )
    return PPQuery(constraints)
