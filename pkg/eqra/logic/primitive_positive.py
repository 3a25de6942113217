"""Primitive positive (conjunctive) queries: evaluation and bounded definability search.

A query is a list of constraints ``(u, v, symbol)`` read as ``symbol(u, v)``;
the symbol ``=`` stands for equality. All variables other than the output
pair are existentially quantified.

Example:
    >>> query = [Constraint("a", "c", "E0"), Constraint("c", "b", "E1"),
    ...          Constraint("a", "d", "E1"), Constraint("d", "b", "E0"),
    ...          Constraint("c", "d", "A1")]
    >>> alpha = pp_evaluate(query, structure, "a", "b")
"""

import asyncio
import itertools
import logging
from dataclasses import dataclass
from math import comb
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from eqra.exceptions import FormulaException, SearchBudgetException, SizeMismatchException
from eqra.logic.formulas import And, Atom, Equals, Exists, Formula, Structure, format_formula
from eqra.relations import relcore
from eqra.relations.relcore import BinRel
from eqra.settings import config

logger = logging.getLogger(__name__)

EQUALITY = "="


class Constraint(NamedTuple):
    """``symbol(left, right)``; the symbol ``=`` means equality."""

    left: str
    right: str
    symbol: str


@dataclass(frozen=True)
class PPQuery:
    """A constraint network with a designated output pair (x, y)."""

    constraints: Tuple[Constraint, ...]
    x: str = "x"
    y: str = "y"

    @property
    def variables(self) -> Tuple[str, ...]:
        """Output pair first, then the other variables by first appearance."""
        seen = [self.x, self.y]
        for c in self.constraints:
            for var in (c.left, c.right):
                if var not in seen:
                    seen.append(var)
        return tuple(seen)

    def format(self) -> str:
        return format_formula(pp_to_formula(self))


def _matrix(s: Structure, symbol: str) -> np.ndarray:
    if symbol == EQUALITY:
        return np.eye(s.n, dtype=bool)
    return s.relation(symbol).bits


class _Network:
    """Constraint network with forward checking on per-variable domain vectors."""

    def __init__(self, constraints: Sequence[Constraint], s: Structure, variables: Sequence[str]):
        self.index = {var: i for i, var in enumerate(variables)}
        self.n = s.n
        self.binary: List[Tuple[int, int, np.ndarray]] = []
        self.initial = np.ones((len(variables), s.n), dtype=bool)
        for c in constraints:
            bits = _matrix(s, c.symbol)
            u, v = self.index[c.left], self.index[c.right]
            if u == v:
                self.initial[u] &= np.diagonal(bits)
            else:
                self.binary.append((u, v, bits))

    def _assign(self, domains: np.ndarray, assigned: List[bool], var: int, value: int) -> bool:
        domains[var] = False
        domains[var, value] = True
        assigned[var] = True
        for u, v, bits in self.binary:
            if u == var and not assigned[v]:
                domains[v] &= bits[value]
            elif v == var and not assigned[u]:
                domains[u] &= bits[:, value]
            elif u == var and assigned[v]:
                if not bits[value, int(np.flatnonzero(domains[v])[0])]:
                    return False
            elif v == var and assigned[u]:
                if not bits[int(np.flatnonzero(domains[u])[0]), value]:
                    return False
        return bool(domains.any(axis=1).all())

    def _solve(self, domains: np.ndarray, assigned: List[bool]) -> bool:
        open_vars = [i for i, done in enumerate(assigned) if not done]
        if not open_vars:
            return True
        sizes = domains[open_vars].sum(axis=1)
        var = open_vars[int(np.argmin(sizes))]
        for value in np.flatnonzero(domains[var]):
            trial, marks = domains.copy(), list(assigned)
            if self._assign(trial, marks, var, int(value)) and self._solve(trial, marks):
                return True
        return False

    def satisfiable(self, fixed: Dict[int, int]) -> bool:
        domains = self.initial.copy()
        assigned = [False] * len(domains)
        for var, value in fixed.items():
            if not domains[var, value] or not self._assign(domains, assigned, var, value):
                return False
        return self._solve(domains, assigned)


def pp_evaluate(query: Sequence[Constraint], s: Structure, x: str = "x", y: str = "y") -> BinRel:
    """Pairs (a, b) for which the network with x=a, y=b has a solution.

    Variables are picked smallest-domain first during backtracking. An output
    variable that occurs in no constraint is unconstrained.

    Raises:
        UnknownSymbolException: If a symbol is not bound in s.
        FormulaException: If x and y are the same variable.
    """
    if x == y:
        raise FormulaException("Output variables must be distinct")
    if not query:
        return relcore.universal(s.n)
    variables = PPQuery(tuple(query), x, y).variables
    network = _Network(query, s, variables)
    bits = np.zeros((s.n, s.n), dtype=bool)
    for a in np.flatnonzero(network.initial[0]):
        if not network.satisfiable({0: int(a)}):
            continue
        for b in np.flatnonzero(network.initial[1]):
            bits[a, b] = network.satisfiable({0: int(a), 1: int(b)})
    return BinRel(bits)


def pp_to_formula(query: PPQuery) -> Formula:
    """The ``exists ... (c1 & c2 & ...)`` formula of a query; ``x = x`` when it is empty."""
    if not query.constraints:
        return Equals(query.x, query.x)
    body: Optional[Formula] = None
    for c in query.constraints:
        atom = Equals(c.left, c.right) if c.symbol == EQUALITY else Atom(c.symbol, c.left, c.right)
        body = atom if body is None else And(body, atom)
    for var in reversed(query.variables[2:]):
        body = Exists(var, body)
    return body


Triple = Tuple[int, int, int]


class _SearchSpace:
    """Candidate constraints over variables 0..m-1 (x=0, y=1) and their join factors."""

    def __init__(self, s: Structure, symbols: Sequence[str], max_vars: int, with_equality: bool):
        self.n = s.n
        self.m = max_vars
        self.symbols = list(symbols) + ([EQUALITY] if with_equality else [])
        self.symmetric = []
        triples: List[Triple] = []
        for k, symbol in enumerate(self.symbols):
            bits = _matrix(s, symbol)
            symmetric = bool((bits == bits.T).all())
            reflexive = bool(np.diagonal(bits).all())
            self.symmetric.append(symmetric)
            for u, v in itertools.product(range(max_vars), repeat=2):
                if u == v and reflexive:
                    continue
                if u > v and symmetric:
                    continue
                triples.append((u, v, k))
        self.triples = sorted(triples)
        self.position = {t: i for i, t in enumerate(self.triples)}
        self.factors = [self._factor(_matrix(s, self.symbols[k]), u, v) for u, v, k in self.triples]

    def _factor(self, bits: np.ndarray, u: int, v: int) -> np.ndarray:
        shape = [1] * self.m
        if u == v:
            shape[u] = self.n
            return np.diagonal(bits).reshape(shape)
        if u > v:
            bits, u, v = bits.T, v, u
        shape[u] = shape[v] = self.n
        return bits.reshape(shape)

    def project(self, joined: np.ndarray) -> np.ndarray:
        if self.m == 2:
            return joined
        return joined.any(axis=tuple(range(2, self.m)))

    def canonical(self, chosen: Tuple[int, ...]) -> bool:
        """Whether no renumbering of the existential variables gives a smaller triple set."""
        current = tuple(self.triples[i] for i in chosen)
        for perm in itertools.permutations(range(2, self.m)):
            mapping = (0, 1) + perm
            renamed = []
            for u, v, k in current:
                u, v = mapping[u], mapping[v]
                if self.symmetric[k] and u > v:
                    u, v = v, u
                renamed.append((u, v, k))
            if tuple(sorted(renamed)) < current:
                return False
        return True

    def estimate(self, max_constraints: int) -> int:
        return sum(comb(len(self.triples), k) for k in range(max_constraints + 1))

    def query(self, chosen: Tuple[int, ...]) -> PPQuery:
        names = ["x", "y"] + [f"z{i}" for i in range(1, self.m - 1)]
        constraints = tuple(
            Constraint(names[u], names[v], self.symbols[k]) for u, v, k in (self.triples[i] for i in chosen)
        )
        return PPQuery(constraints)


def _search_depth(
    space: _SearchSpace, target: np.ndarray, depth: int, firsts: Sequence[int]
) -> Optional[Tuple[int, ...]]:
    """Lexicographically first matching canonical set of ``depth`` triples starting in ``firsts``."""
    total = len(space.triples)

    def walk(chosen: Tuple[int, ...], joined: np.ndarray) -> Optional[Tuple[int, ...]]:
        result = space.project(joined)
        if (target & ~result).any():
            return None
        if len(chosen) == depth:
            if np.array_equal(result, target) and space.canonical(chosen):
                return chosen
            return None
        remaining = depth - len(chosen)
        for nxt in range(chosen[-1] + 1, total - remaining + 1):
            found = walk(chosen + (nxt,), joined & space.factors[nxt])
            if found is not None:
                return found
        return None

    base = np.ones((space.n,) * space.m, dtype=bool)
    for first in firsts:
        if first > total - depth:
            break
        found = walk((first,), base & space.factors[first])
        if found is not None:
            return found
    return None


def _prepare(
    s: Structure,
    target: BinRel,
    max_vars: Optional[int],
    max_constraints: Optional[int],
    symbols: Optional[Sequence[str]],
    with_equality: bool,
) -> Tuple[_SearchSpace, int]:
    if target.n != s.n:
        raise SizeMismatchException(s.n, target.n)
    max_vars = config.PP_MAX_VARS if max_vars is None else max_vars
    max_constraints = config.PP_MAX_CONSTRAINTS if max_constraints is None else max_constraints
    if max_vars < 2 or max_constraints < 1:
        raise FormulaException("pp search needs at least 2 variables and 1 constraint")
    symbols = s.symbols if symbols is None else tuple(symbols)
    for symbol in symbols:
        s.relation(symbol)
    space = _SearchSpace(s, symbols, max_vars, with_equality)
    estimate = space.estimate(max_constraints)
    if estimate > config.PP_HARD_CAP:
        raise SearchBudgetException(f"Estimated {estimate} constraint sets exceeds cap {config.PP_HARD_CAP}")
    if estimate > config.PP_WARN_ESTIMATE:
        logger.warning(f"pp search will enumerate up to {estimate} constraint sets")
    else:
        logger.info(f"pp search over {len(space.triples)} candidate constraints, estimate {estimate}")
    return space, max_constraints


def pp_search(
    s: Structure,
    target: BinRel,
    max_vars: Optional[int] = None,
    max_constraints: Optional[int] = None,
    symbols: Optional[Sequence[str]] = None,
    with_equality: bool = True,
) -> Optional[PPQuery]:
    """Find a pp query defining target, within the variable and constraint budgets.

    Networks are enumerated by increasing size and, within a size, in
    canonical order, so the result is the smallest defining network. A search
    branch is cut as soon as its relation no longer contains the target,
    since adding constraints only shrinks it. None means no definition
    exists within these budgets; it says nothing about larger ones.

    Args:
        s: Structure providing the relation symbols.
        target: Relation to define.
        max_vars: Variable budget, output pair included (default ``PP_MAX_VARS``).
        max_constraints: Constraint budget (default ``PP_MAX_CONSTRAINTS``).
        symbols: Symbols to use (default: all of s).
        with_equality: Whether equality constraints are allowed.

    Raises:
        SearchBudgetException: If the enumeration estimate exceeds ``PP_HARD_CAP``.
    """
    if relcore.universal(s.n) == target:
        return PPQuery(())
    space, max_constraints = _prepare(s, target, max_vars, max_constraints, symbols, with_equality)
    firsts = range(len(space.triples))
    for depth in range(1, max_constraints + 1):
        found = _search_depth(space, target.bits, depth, firsts)
        if found is not None:
            logger.info(f"pp definition found with {depth} constraints")
            return space.query(found)
    return None


async def pp_search_async(
    s: Structure,
    target: BinRel,
    max_vars: Optional[int] = None,
    max_constraints: Optional[int] = None,
    symbols: Optional[Sequence[str]] = None,
    with_equality: bool = True,
    workers: Optional[int] = None,
) -> Optional[PPQuery]:
    """Concurrent pp_search: first constraints are dealt round-robin to worker threads.

    Each worker reports its own smallest match and the overall minimum wins,
    so the result equals pp_search's.
    """
    if relcore.universal(s.n) == target:
        return PPQuery(())
    space, max_constraints = _prepare(s, target, max_vars, max_constraints, symbols, with_equality)
    workers = max(1, config.PARALLELISM if workers is None else workers)
    shares = [list(range(w, len(space.triples), workers)) for w in range(workers)]
    for depth in range(1, max_constraints + 1):
        tasks = [asyncio.to_thread(_search_depth, space, target.bits, depth, share) for share in shares if share]
        results = [r for r in await asyncio.gather(*tasks) if r is not None]
        if results:
            return space.query(min(results))
    return None
