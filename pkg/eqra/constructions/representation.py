"""Representing M_m as the equivalence lattice of a finite relation algebra.

m = 1 uses {1, 1', eta0} on the four points of 2^2 and m = 2 uses
{1, 1', eta0, eta1} on Z_3^2. For m >= 3, with n = m - 2, the generators are
make_M(p, n) for the smallest prime p >= 5 with n < p - 2.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from eqra.constructions.zp2 import (
    IDENTITY_NAME,
    UNIVERSAL_NAME,
    check_prime,
    lemma1_hypothesis,
    make_M,
    make_m_names,
    next_prime,
    zp2_family,
)
from eqra.core.certificate import Certificate, Check, check
from eqra.exceptions import MOutOfRangeException, NOutOfRangeException
from eqra.lattice.eqlattice import MnShape, build_lattice, extract_equivalences, lattices_equal, mn_shape
from eqra.relations import relcore
from eqra.relations.closure import ba_closure, ra_closure
from eqra.relations.relation_io import relation_to_json
from eqra.relations.relcore import BinRel
from eqra.settings import config

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RepresentationCertificate:
    """Outcome of the M_m pipeline.

    ``p`` and ``n`` are None for the small cases m <= 2, which are tagged by ``base``.
    """

    m: int
    p: Optional[int]
    n: Optional[int]
    base: str
    generator_names: Tuple[str, ...]
    generators: Tuple[BinRel, ...]
    atom_count: int
    equivalences: Tuple[BinRel, ...]
    shape: MnShape
    checks: Tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return self.certificate().passed

    def certificate(self) -> Certificate:
        inputs = {
            "m": self.m,
            "p": self.p,
            "n": self.n,
            "base": self.base,
            "generators": list(self.generator_names),
            "atom_count": self.atom_count,
            "shape": self.shape.describe(),
            "equivalences": [relation_to_json(r)["pairs"] for r in self.equivalences],
        }
        return Certificate("represent-mn", inputs, list(self.checks))


def choose_prime(n: int) -> int:
    """Smallest prime p >= 5 with n < p - 2."""
    return next_prime(max(5, n + 3))


def small_case_generators(m: int) -> Tuple[str, List[str], List[BinRel]]:
    if m == 1:
        family = zp2_family(2)
        names = [UNIVERSAL_NAME, IDENTITY_NAME, "E0"]
        relations = [relcore.universal(4), relcore.identity(4), family.eta0]
        return "2x2", names, relations
    family = zp2_family(3)
    names = [UNIVERSAL_NAME, IDENTITY_NAME, "E0", "E1"]
    relations = [relcore.universal(9), relcore.identity(9), family.eta0, family.eta1]
    return "Z3^2", names, relations


def represent_mn(m: int, prime: Optional[int] = None, atom_budget: Optional[int] = None) -> RepresentationCertificate:
    """Build generators for M_m and check Eq(RA(generators)) is exactly them, shaped M_m.

    Args:
        m: Number of middle elements, 1..MAX_REPRESENTED_M.
        prime: Override the modulus for m >= 3 (rechecked against n < p - 2).
        atom_budget: Closure atom budget.

    Raises:
        MOutOfRangeException: If m is outside 1..MAX_REPRESENTED_M.
        NOutOfRangeException: If the prime override violates n < p - 2.
    """
    if not 1 <= m <= config.MAX_REPRESENTED_M:
        raise MOutOfRangeException(f"m must satisfy 1 <= m <= {config.MAX_REPRESENTED_M}, got {m}")
    p = n = None
    if m <= 2:
        base, names, generators = small_case_generators(m)
    else:
        n = m - 2
        if prime is None:
            p = choose_prime(n)
        else:
            p = check_prime(prime)
            if not lemma1_hypothesis(p, n):
                raise NOutOfRangeException(f"p = {p} needs n = {n} < p - 2")
        base = f"Z{p}^2"
        names, generators = make_m_names(n), make_M(p, n)
    logger.info(f"Representing M_{m} on {base} with {len(generators)} generators")

    structure = ra_closure(generators, names, atom_budget)
    eqs = extract_equivalences(structure, atom_budget)
    lattice = build_lattice(eqs)
    shape = mn_shape(lattice)

    checks = [
        check(f"represent.m{m}.shape", shape.n_atoms == m, f"Eq lattice is {shape.describe()}"),
        check(
            f"represent.m{m}.eq_equals_generators",
            lattices_equal(eqs, generators),
            f"{len(eqs)} equivalences in the closure, {len(generators)} generators",
            None if lattices_equal(eqs, generators) else [relation_to_json(r)["pairs"] for r in eqs if r not in generators],
        ),
    ]
    if n is not None:
        checks.append(
            check(
                f"represent.m{m}.atom_count",
                structure.atom_count == n + 4,
                f"{structure.atom_count} atoms, expected n + 4 = {n + 4}",
            )
        )
        boolean = ba_closure(generators, names, atom_budget)
        checks.append(
            check(
                f"represent.m{m}.ba_equals_ra",
                boolean.atoms == structure.atoms,
                f"Boolean closure has {boolean.atom_count} atoms, RA closure {structure.atom_count}",
            )
        )
    return RepresentationCertificate(
        m=m,
        p=p,
        n=n,
        base=base,
        generator_names=tuple(names),
        generators=tuple(generators),
        atom_count=structure.atom_count,
        equivalences=tuple(eqs),
        shape=shape,
        checks=tuple(checks),
    )
