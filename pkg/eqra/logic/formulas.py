"""Formula syntax over finite structures with binary relation symbols.

Formulas are immutable trees. Variables are plain names; the number of
distinct names used (free and bound, with reuse) is what places a formula in
the bounded-variable fragments, so ``exists z. R(x,z) & (exists x. S(z,x))``
uses three variables.

Example:
    >>> f = Or(Equals("x", "y"), Not(Or(Atom("E0", "x", "y"), Atom("E1", "x", "y"))))
    >>> format_formula(f)
    '((x = y) | !(E0(x,y) | E1(x,y)))'
    >>> fragment_report(f).variable_count
    2
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Mapping, Optional

from eqra.exceptions import FormulaException, SizeMismatchException, UnknownSymbolException
from eqra.relations.relcore import BinRel, check_base_size

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
RESERVED_WORDS = frozenset({"exists", "forall", "id"})


def is_identifier(name: str) -> bool:
    """Whether a name can be used as a variable or relation symbol."""
    return bool(IDENTIFIER.match(name)) and name not in RESERVED_WORDS


@dataclass(frozen=True, eq=False)
class Structure:
    """A finite base set with named binary relations.

    Args:
        n: Base size.
        relations: Symbol to relation mapping; every relation has base size n.
    """

    n: int
    relations: Mapping[str, BinRel] = field(default_factory=dict)

    def __post_init__(self) -> None:
        check_base_size(self.n)
        for symbol, relation in self.relations.items():
            if not is_identifier(symbol):
                raise FormulaException(f"Invalid relation symbol: {symbol!r}")
            if relation.n != self.n:
                raise SizeMismatchException(self.n, relation.n)
        object.__setattr__(self, "relations", dict(self.relations))

    def relation(self, symbol: str) -> BinRel:
        """Look up a symbol.

        Raises:
            UnknownSymbolException: If the symbol is not bound.
        """
        try:
            return self.relations[symbol]
        except KeyError:
            raise UnknownSymbolException(symbol) from None

    @property
    def symbols(self) -> tuple:
        return tuple(sorted(self.relations))


class Formula:
    """Base class for formula nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    """``symbol(left, right)``."""

    symbol: str
    left: str
    right: str


@dataclass(frozen=True)
class Equals(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ForAll(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class FragmentReport:
    """Syntactic fragment membership of a formula.

    Args:
        variable_count: Distinct variable names, free and bound.
        is_pp: Built only from Exists, And, Atom and Equals.
        is_fo3: At most three distinct variable names.
    """

    variable_count: int
    is_pp: bool
    is_fo3: bool


def format_formula(f: Formula) -> str:
    """Print a formula in the concrete grammar; binary and quantified parts are parenthesized.

    ``parse_formula(format_formula(f)) == f`` for every formula.
    """
    if isinstance(f, Atom):
        return f"{f.symbol}({f.left},{f.right})"
    if isinstance(f, Equals):
        return f"({f.left} = {f.right})"
    if isinstance(f, And):
        return f"({format_formula(f.left)} & {format_formula(f.right)})"
    if isinstance(f, Or):
        return f"({format_formula(f.left)} | {format_formula(f.right)})"
    if isinstance(f, Not):
        return f"!{format_formula(f.body)}"
    if isinstance(f, Exists):
        return f"(exists {f.var}. {format_formula(f.body)})"
    if isinstance(f, ForAll):
        return f"(forall {f.var}. {format_formula(f.body)})"
    raise FormulaException(f"Not a formula node: {f!r}")


def free_variables(f: Formula, _memo: Optional[Dict[int, FrozenSet[str]]] = None) -> FrozenSet[str]:
    """Free variables of a formula (shared subtrees are visited once)."""
    memo = {} if _memo is None else _memo
    key = id(f)
    if key in memo:
        return memo[key]
    if isinstance(f, Atom):
        result = frozenset((f.left, f.right))
    elif isinstance(f, Equals):
        result = frozenset((f.left, f.right))
    elif isinstance(f, (And, Or)):
        result = free_variables(f.left, memo) | free_variables(f.right, memo)
    elif isinstance(f, Not):
        result = free_variables(f.body, memo)
    elif isinstance(f, (Exists, ForAll)):
        result = free_variables(f.body, memo) - {f.var}
    else:
        raise FormulaException(f"Not a formula node: {f!r}")
    memo[key] = result
    return result


def variables(f: Formula) -> FrozenSet[str]:
    """Every variable name occurring in the formula, free or bound."""
    memo: Dict[int, FrozenSet[str]] = {}

    def walk(node: Formula) -> FrozenSet[str]:
        key = id(node)
        if key not in memo:
            if isinstance(node, (Atom, Equals)):
                memo[key] = frozenset((node.left, node.right))
            elif isinstance(node, (And, Or)):
                memo[key] = walk(node.left) | walk(node.right)
            elif isinstance(node, Not):
                memo[key] = walk(node.body)
            elif isinstance(node, (Exists, ForAll)):
                memo[key] = walk(node.body) | {node.var}
            else:
                raise FormulaException(f"Not a formula node: {node!r}")
        return memo[key]

    return walk(f)


def symbols(f: Formula) -> FrozenSet[str]:
    """Relation symbols used by the formula."""
    seen: Dict[int, FrozenSet[str]] = {}

    def walk(node: Formula) -> FrozenSet[str]:
        key = id(node)
        if key not in seen:
            if isinstance(node, Atom):
                seen[key] = frozenset((node.symbol,))
            elif isinstance(node, Equals):
                seen[key] = frozenset()
            elif isinstance(node, (And, Or)):
                seen[key] = walk(node.left) | walk(node.right)
            else:
                seen[key] = walk(node.body)
        return seen[key]

    return walk(f)


def _is_pp(f: Formula, memo: Dict[int, bool]) -> bool:
    key = id(f)
    if key not in memo:
        if isinstance(f, (Atom, Equals)):
            memo[key] = True
        elif isinstance(f, And):
            memo[key] = _is_pp(f.left, memo) and _is_pp(f.right, memo)
        elif isinstance(f, Exists):
            memo[key] = _is_pp(f.body, memo)
        else:
            memo[key] = False
    return memo[key]


def fragment_report(f: Formula) -> FragmentReport:
    """Classify a formula into the pp and three-variable fragments."""
    count = len(variables(f))
    return FragmentReport(variable_count=count, is_pp=_is_pp(f, {}), is_fo3=count <= 3)
