"""Bottom-up evaluation of formulas over finite structures.

Each subformula is evaluated to the set of satisfying assignments of its free
variables, stored as a boolean array with one axis per free variable (axes in
sorted variable order). Conjunction and disjunction broadcast, quantifiers
reduce an axis, so a formula with at most k distinct variables never touches
an array larger than ``n**k``.
"""

from __future__ import annotations

import logging
from typing import Dict, Tuple

import numpy as np

from eqra.exceptions import FormulaException, FreeVariableException
from eqra.logic.formulas import (
    And,
    Atom,
    Equals,
    Exists,
    ForAll,
    Formula,
    Not,
    Or,
    Structure,
    free_variables,
    symbols,
)
from eqra.relations.relcore import BinRel

logger = logging.getLogger(__name__)

Meaning = Tuple[Tuple[str, ...], np.ndarray]


def _expand(meaning: Meaning, target: Tuple[str, ...]) -> np.ndarray:
    """Reorder and reshape an assignment array so it broadcasts against the target axes."""
    names, array = meaning
    order = [names.index(v) for v in target if v in names]
    array = np.transpose(array, order)
    sizes = iter(array.shape)
    return array.reshape([next(sizes) if v in names else 1 for v in target])


def _binary_meaning(bits: np.ndarray, left: str, right: str) -> Meaning:
    if left == right:
        return (left,), np.diagonal(bits).copy()
    if left < right:
        return (left, right), bits
    return (right, left), bits.T


def _combine(a: Meaning, b: Meaning, conjunction: bool) -> Meaning:
    target = tuple(sorted(set(a[0]) | set(b[0])))
    left, right = _expand(a, target), _expand(b, target)
    return target, (left & right) if conjunction else (left | right)


def _quantify(meaning: Meaning, var: str, existential: bool) -> Meaning:
    names, array = meaning
    if var not in names:
        return meaning
    axis = names.index(var)
    reduced = array.any(axis=axis) if existential else array.all(axis=axis)
    return names[:axis] + names[axis + 1:], reduced


def _evaluate(f: Formula, s: Structure, memo: Dict[int, Meaning]) -> Meaning:
    key = id(f)
    if key in memo:
        return memo[key]
    if isinstance(f, Atom):
        result = _binary_meaning(s.relation(f.symbol).bits, f.left, f.right)
    elif isinstance(f, Equals):
        result = _binary_meaning(np.eye(s.n, dtype=bool), f.left, f.right)
    elif isinstance(f, And):
        result = _combine(_evaluate(f.left, s, memo), _evaluate(f.right, s, memo), True)
    elif isinstance(f, Or):
        result = _combine(_evaluate(f.left, s, memo), _evaluate(f.right, s, memo), False)
    elif isinstance(f, Not):
        names, array = _evaluate(f.body, s, memo)
        result = names, ~array
    elif isinstance(f, Exists):
        result = _quantify(_evaluate(f.body, s, memo), f.var, True)
    elif isinstance(f, ForAll):
        result = _quantify(_evaluate(f.body, s, memo), f.var, False)
    else:
        raise FormulaException(f"Not a formula node: {f!r}")
    memo[key] = result
    return result


def evaluate_binary(f: Formula, s: Structure, x: str = "x", y: str = "y") -> BinRel:
    """The binary relation defined by f with x, y as output variables.

    Args:
        f: Formula whose free variables are among {x, y}.
        s: Structure interpreting the relation symbols.
        x: Variable read as the first coordinate.
        y: Variable read as the second coordinate.

    Returns:
        ``{(a, b) : s satisfies f[x -> a, y -> b]}``.

    Raises:
        UnknownSymbolException: If a symbol does not resolve in s.
        FreeVariableException: If f has free variables other than x and y.
    """
    if x == y:
        raise FormulaException("Output variables must be distinct")
    for symbol in symbols(f):
        s.relation(symbol)
    outside = free_variables(f) - {x, y}
    if outside:
        raise FreeVariableException(sorted(outside))

    meaning = _evaluate(f, s, {})
    names, _ = meaning
    expanded = _expand(meaning, (x, y))
    bits = np.broadcast_to(expanded, (s.n, s.n))
    logger.debug(f"Evaluated formula with free variables {names} over n={s.n}")
    return BinRel(bits)
