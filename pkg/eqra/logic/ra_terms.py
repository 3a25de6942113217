"""Relation-algebra terms, their evaluation and their three-variable translation.

Example:
    >>> t = Union(Identity(), Complement(Union(Name("E0"), Name("E1"))))
    >>> format_ra_term(t)
    '(id + ~(E0 + E1))'
    >>> format_formula(ra_term_to_fo3(Compose(Name("R"), Name("S"))))
    '(exists v2. (R(v0,v2) & S(v2,v1)))'
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Dict, Iterable, Tuple

from eqra.exceptions import FormulaException
from eqra.logic.formulas import And, Atom, Equals, Exists, Formula, Not, Or, Structure
from eqra.relations import relcore
from eqra.relations.relcore import BinRel

FO3_VARIABLES: Tuple[str, str, str] = ("v0", "v1", "v2")


class RATerm:
    """Base class for relation-algebra term nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Name(RATerm):
    symbol: str


@dataclass(frozen=True)
class Identity(RATerm):
    pass


@dataclass(frozen=True)
class Union(RATerm):
    left: RATerm
    right: RATerm


@dataclass(frozen=True)
class Complement(RATerm):
    term: RATerm


@dataclass(frozen=True)
class Compose(RATerm):
    left: RATerm
    right: RATerm


@dataclass(frozen=True)
class Converse(RATerm):
    term: RATerm


def intersect_term(left: RATerm, right: RATerm) -> RATerm:
    """``left & right`` written with union and complement (De Morgan)."""
    return Complement(Union(Complement(left), Complement(right)))


def universal_term() -> RATerm:
    return Union(Identity(), Complement(Identity()))


def empty_term() -> RATerm:
    return Complement(universal_term())


def union_of(terms: Iterable[RATerm]) -> RATerm:
    """Union of several terms; the empty term when there are none."""
    terms = list(terms)
    if not terms:
        return empty_term()
    return reduce(Union, terms)


def intersection_of(terms: Iterable[RATerm]) -> RATerm:
    """Intersection of several terms; the universal term when there are none."""
    terms = list(terms)
    if not terms:
        return universal_term()
    return reduce(intersect_term, terms)


def format_ra_term(t: RATerm) -> str:
    """Print a term; binary nodes are parenthesized so the output re-parses to the same tree."""
    if isinstance(t, Name):
        return t.symbol
    if isinstance(t, Identity):
        return "id"
    if isinstance(t, Union):
        return f"({format_ra_term(t.left)} + {format_ra_term(t.right)})"
    if isinstance(t, Compose):
        return f"({format_ra_term(t.left)} ; {format_ra_term(t.right)})"
    if isinstance(t, Complement):
        return f"~{format_ra_term(t.term)}"
    if isinstance(t, Converse):
        inner = format_ra_term(t.term)
        if isinstance(t.term, Complement):
            inner = f"({inner})"
        return f"{inner}^"
    raise FormulaException(f"Not an RA term node: {t!r}")


def evaluate_ra_term(t: RATerm, s: Structure) -> BinRel:
    """Evaluate a term with the relcore operations.

    Raises:
        UnknownSymbolException: If a name does not resolve in s.
    """
    memo: Dict[int, BinRel] = {}

    def walk(node: RATerm) -> BinRel:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Name):
            value = s.relation(node.symbol)
        elif isinstance(node, Identity):
            value = relcore.identity(s.n)
        elif isinstance(node, Union):
            value = relcore.union(walk(node.left), walk(node.right))
        elif isinstance(node, Complement):
            value = relcore.complement(walk(node.term))
        elif isinstance(node, Compose):
            value = relcore.compose(walk(node.left), walk(node.right))
        elif isinstance(node, Converse):
            value = relcore.converse(walk(node.term))
        else:
            raise FormulaException(f"Not an RA term node: {node!r}")
        memo[key] = value
        return value

    return walk(t)


def ra_term_to_fo3(t: RATerm) -> Formula:
    """Translate a term into a formula with free variables v0, v1 and at most three names.

    Composition quantifies the one variable not currently in use; inside each
    factor that variable becomes free and the spare one is bound again, so the
    three names are recycled at every depth.
    """
    x, y, _ = FO3_VARIABLES
    memo: Dict[Tuple[int, str, str], Formula] = {}

    def spare(a: str, b: str) -> str:
        return next(v for v in FO3_VARIABLES if v not in (a, b))

    def walk(node: RATerm, a: str, b: str) -> Formula:
        key = (id(node), a, b)
        if key in memo:
            return memo[key]
        if isinstance(node, Name):
            result = Atom(node.symbol, a, b)
        elif isinstance(node, Identity):
            result = Equals(a, b)
        elif isinstance(node, Union):
            result = Or(walk(node.left, a, b), walk(node.right, a, b))
        elif isinstance(node, Complement):
            result = Not(walk(node.term, a, b))
        elif isinstance(node, Converse):
            result = walk(node.term, b, a)
        elif isinstance(node, Compose):
            c = spare(a, b)
            result = Exists(c, And(walk(node.left, a, c), walk(node.right, c, b)))
        else:
            raise FormulaException(f"Not an RA term node: {node!r}")
        memo[key] = result
        return result

    return walk(t, x, y)
