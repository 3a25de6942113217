"""The two worked examples: the square of the two-element lattice, and the pp definition of alpha_{p-1}."""

from typing import NamedTuple, Tuple

from eqra.algebra.finite_algebra import FinAlgebra, lattice_algebra_2x2
from eqra.constructions.zp2 import zp2_family
from eqra.logic.formulas import Formula, Structure
from eqra.logic.parser import parse_formula, parse_ra_term
from eqra.logic.primitive_positive import Constraint, PPQuery
from eqra.logic.ra_terms import RATerm
from eqra.relations import relcore
from eqra.relations.relcore import BinRel

GAMMA_FORMULA = "(x = y) | !(E0(x,y) | E1(x,y))"
GAMMA_TERM = "id + ~(E0 + E1)"
ALPHA_PP_FORMULA = "exists c. exists d. E0(a,c) & E1(c,b) & E1(a,d) & E0(d,b) & A1(c,d)"


class TwoByTwoExample(NamedTuple):
    """L = {1', eta0, eta1, 1} on the four points of 2^2, the lattice algebra, and gamma."""

    relations: Tuple[BinRel, ...]
    algebra: FinAlgebra
    gamma: BinRel

    @property
    def structure(self) -> Structure:
        return Structure(4, {"E0": self.relations[1], "E1": self.relations[2]})


class ExampleFormulas(NamedTuple):
    gamma_fo2: Formula
    alpha_pp: PPQuery
    gamma_term: RATerm


def two_by_two_example() -> TwoByTwoExample:
    """Point i is the bit pair (i // 2, i % 2); eta0 and eta1 are the projection kernels.

    gamma = 1' + complement(eta0 + eta1) pairs each point with its opposite corner.
    """
    family = zp2_family(2)
    eta0, eta1 = family.eta0, family.eta1
    gamma = relcore.union(relcore.identity(4), relcore.complement(relcore.union(eta0, eta1)))
    relations = (relcore.identity(4), eta0, eta1, relcore.universal(4))
    return TwoByTwoExample(relations, lattice_algebra_2x2(), gamma)


def alpha_pp_query() -> PPQuery:
    """``a alpha_{p-1} b`` iff some c, d have a E0 c E1 b, a E1 d E0 b and c A1 d."""
    return PPQuery(
        (
            Constraint("a", "c", "E0"),
            Constraint("c", "b", "E1"),
            Constraint("a", "d", "E1"),
            Constraint("d", "b", "E0"),
            Constraint("c", "d", "A1"),
        ),
        x="a",
        y="b",
    )


def example_formulas() -> ExampleFormulas:
    """The two-variable definition of gamma, the pp definition of alpha_{p-1}, and gamma as an RA term."""
    return ExampleFormulas(parse_formula(GAMMA_FORMULA), alpha_pp_query(), parse_ra_term(GAMMA_TERM))
