"""Finite algebras given by operation tables, relation compatibility, and congruences.

Algebra files are JSON::

    {"n": 4, "ops": [{"name": "meet", "arity": 2, "table": [[0, 0, 0, 0], ...]}]}

A table of arity k is a k-fold nested list indexed by the arguments.
"""

import json
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from eqra.core.certificate import Certificate, Check, CheckStatus, check
from eqra.exceptions import (
    AlgebraFormatException,
    BaseTooLargeException,
    GeneratorNotCompatibleException,
    SizeMismatchException,
)
from eqra.lattice.eqlattice import EqLattice, build_lattice, lattices_equal
from eqra.relations.relation_io import read_text, relation_to_json
from eqra.relations.relcore import BinRel, check_base_size
from eqra.settings import config

logger = logging.getLogger(__name__)

MAX_ARITY = 3


@dataclass(frozen=True, eq=False)
class Operation:
    """A total operation ``A^arity -> A`` stored as an integer table of shape ``(n,) * arity``."""

    name: str
    arity: int
    table: np.ndarray

    def __call__(self, *args: int) -> int:
        return int(self.table[args])


@dataclass(frozen=True, eq=False)
class FinAlgebra:
    """A finite set ``{0..n-1}`` with operations.

    Raises:
        AlgebraFormatException: On arity outside 0..3, wrong table shape, or out-of-range values.
    """

    n: int
    operations: Tuple[Operation, ...] = ()

    def __post_init__(self) -> None:
        check_base_size(self.n)
        checked = []
        for op in self.operations:
            if not 0 <= op.arity <= MAX_ARITY:
                raise AlgebraFormatException(f"Operation {op.name!r} has arity {op.arity}; allowed 0..{MAX_ARITY}")
            table = np.asarray(op.table)
            if table.shape != (self.n,) * op.arity:
                raise AlgebraFormatException(
                    f"Operation {op.name!r} table has shape {table.shape}, expected {(self.n,) * op.arity}"
                )
            if not np.issubdtype(table.dtype, np.integer):
                raise AlgebraFormatException(f"Operation {op.name!r} table must hold integers")
            if table.size and (table.min() < 0 or table.max() >= self.n):
                raise AlgebraFormatException(f"Operation {op.name!r} has values outside 0..{self.n - 1}")
            table = table.astype(np.int64)
            table.flags.writeable = False
            checked.append(Operation(op.name, op.arity, table))
        object.__setattr__(self, "operations", tuple(checked))

    def operation(self, name: str) -> Operation:
        for op in self.operations:
            if op.name == name:
                return op
        raise AlgebraFormatException(f"No operation named {name!r}")

    def without(self, name: str) -> "FinAlgebra":
        """The reduct with one operation removed."""
        return FinAlgebra(self.n, tuple(op for op in self.operations if op.name != name))


def algebra_from_json(data: Dict) -> FinAlgebra:
    try:
        n = int(data["n"])
        ops = tuple(
            Operation(str(entry["name"]), int(entry["arity"]), np.asarray(entry["table"])) for entry in data["ops"]
        )
    except (KeyError, TypeError, ValueError) as e:
        raise AlgebraFormatException(f"Malformed algebra JSON: {e}") from None
    return FinAlgebra(n, ops)


def algebra_to_json(a: FinAlgebra) -> Dict:
    return {
        "n": a.n,
        "ops": [{"name": op.name, "arity": op.arity, "table": op.table.tolist()} for op in a.operations],
    }


def parse_algebra_text(text: str) -> FinAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise AlgebraFormatException(f"Invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    return algebra_from_json(data)


def load_algebra(path: str) -> FinAlgebra:
    """Load an algebra file (``-`` for standard input)."""
    return parse_algebra_text(read_text(path))


Witness = Tuple[str, Tuple[int, ...], Tuple[int, ...]]


def compatibility_witness(r: BinRel, a: FinAlgebra) -> Optional[Witness]:
    """A failing instance of compatibility, or None when r is compatible.

    Returns:
        ``(operation name, u, v)`` with every ``(u_i, v_i)`` in r but ``(f(u), f(v))`` not in r.

    Raises:
        SizeMismatchException: If r and a have different base sizes.
    """
    if r.n != a.n:
        raise SizeMismatchException(a.n, r.n)
    pairs = np.array(r.pairs(), dtype=np.int64).reshape(-1, 2)
    for op in a.operations:
        if op.arity == 0:
            c = int(op.table)
            if not r.bits[c, c]:
                return (op.name, (), ())
            continue
        if len(pairs) == 0:
            continue
        choice = np.indices((len(pairs),) * op.arity).reshape(op.arity, -1)
        left = tuple(pairs[choice[i], 0] for i in range(op.arity))
        right = tuple(pairs[choice[i], 1] for i in range(op.arity))
        bad = np.flatnonzero(~r.bits[op.table[left], op.table[right]])
        if len(bad):
            k = bad[0]
            return (op.name, tuple(int(x[k]) for x in left), tuple(int(x[k]) for x in right))
    return None


def is_compatible(r: BinRel, a: FinAlgebra) -> bool:
    """Whether r is a subuniverse of the square of a."""
    return compatibility_witness(r, a) is None


def _restricted_growth_strings(n: int) -> Iterator[List[int]]:
    """Every partition of ``range(n)`` as block labels, each new block numbered next."""
    labels = [0] * n

    def extend(position: int, blocks: int) -> Iterator[List[int]]:
        if position == n:
            yield list(labels)
            return
        for label in range(blocks + 1):
            labels[position] = label
            yield from extend(position + 1, max(blocks, label + 1))

    if n == 0:
        return
    yield from extend(1, 1)


def _partition_compatible(labels: np.ndarray, op: Operation) -> bool:
    """Compatibility of the kernel of ``labels``: moving one argument within its block keeps the result's block."""
    if op.arity == 0:
        return True
    _, first = np.unique(labels, return_index=True)
    representative = first[labels]
    result = labels[op.table]
    return all(np.array_equal(np.take(result, representative, axis=i), result) for i in range(op.arity))


def _kernel(labels: np.ndarray) -> BinRel:
    return BinRel(labels[:, None] == labels[None, :])


@dataclass(frozen=True, eq=False)
class CongruenceSet:
    """All congruences of an algebra, as a verified lattice."""

    elements: Tuple[BinRel, ...]
    lattice: EqLattice

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, r: BinRel) -> bool:
        return r in set(self.elements)

    def __iter__(self) -> Iterator[BinRel]:
        return iter(self.elements)


def congruences(a: FinAlgebra) -> CongruenceSet:
    """Enumerate every partition of the base set and keep the compatible ones.

    Raises:
        BaseTooLargeException: If ``a.n`` exceeds ``MAX_ALGEBRA_SIZE``.
    """
    if a.n > config.MAX_ALGEBRA_SIZE:
        raise BaseTooLargeException(f"Congruence enumeration needs n <= {config.MAX_ALGEBRA_SIZE}, got {a.n}")
    found = []
    tried = 0
    for labels in _restricted_growth_strings(a.n):
        tried += 1
        labels = np.array(labels)
        if all(_partition_compatible(labels, op) for op in a.operations):
            found.append(_kernel(labels))
    logger.info(f"{len(found)} of {tried} partitions of {a.n} elements are congruences")
    lattice = build_lattice(found)
    return CongruenceSet(lattice.elements, lattice)


def ppf_eq_certificate(generating_congruences: Sequence[BinRel], a: FinAlgebra) -> Certificate:
    """Certify that pp definitions from L yield no equivalences outside L = Con(a).

    Checks: every generator is compatible; Con(a) equals the generator set;
    and, from both, the inclusion Eq(PPF(L)) within L, since pp-definable
    relations inherit compatibility from their defining relations.

    Raises:
        GeneratorNotCompatibleException: If a generator is not compatible with a.
    """
    cert = Certificate("ppf-cert", {"n": a.n, "operations": [op.name for op in a.operations]})
    for index, r in enumerate(generating_congruences):
        witness = compatibility_witness(r, a)
        if witness is not None:
            raise GeneratorNotCompatibleException(index)
        cert.add(Check(f"ppf.generator.{index}.compatible", CheckStatus.PASS, "compatible with every operation"))

    con = congruences(a)
    generators = set(generating_congruences)
    same = lattices_equal(list(con.elements), list(generators))
    witness = None
    if not same:
        witness = {
            "congruences_not_generated": [relation_to_json(r)["pairs"] for r in con.elements if r not in generators],
            "generators_not_congruences": [
                relation_to_json(r)["pairs"] for r in sorted(generators, key=BinRel.sort_key) if r not in con
            ],
        }
    cert.add(check("ppf.con_equals_generators", same, f"Con has {len(con)} elements, L has {len(generators)}", witness))
    conclusion = (
        "pp definitions preserve compatibility, so every pp-definable equivalence is a congruence and lies in L; "
        "the general Pol-Inv correspondence is assumed, not recomputed"
    )
    status = CheckStatus.PASS if same else CheckStatus.SKIPPED
    cert.add(Check("ppf.eq_ppf_within_L", status, conclusion))
    return cert


def lattice_algebra_2x2() -> FinAlgebra:
    """The square of the two-element lattice; element i is the bit pair (i // 2, i % 2)."""
    elements = np.arange(4)
    meet = elements[:, None] & elements[None, :]
    join = elements[:, None] | elements[None, :]
    return FinAlgebra(4, (Operation("meet", 2, meet), Operation("join", 2, join)))


def zp2_group_algebra(p: int) -> FinAlgebra:
    """Z_p^2 as a Z_p vector space: zero, addition, negation and the scalar maps x -> kx.

    Element ``x0 * p + x1`` encodes the pair (x0, x1).
    """
    x0, x1 = np.divmod(np.arange(p * p), p)
    add = ((x0[:, None] + x0[None, :]) % p) * p + (x1[:, None] + x1[None, :]) % p
    operations = [
        Operation("zero", 0, np.array(0)),
        Operation("add", 2, add),
        Operation("neg", 1, ((-x0) % p) * p + (-x1) % p),
    ]
    for k in range(2, p):
        operations.append(Operation(f"scale{k}", 1, ((k * x0) % p) * p + (k * x1) % p))
    return FinAlgebra(p * p, tuple(operations))
