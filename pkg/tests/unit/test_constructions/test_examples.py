"""Unit tests for eqra.constructions.examples module."""

from eqra.constructions.examples import GAMMA_FORMULA, alpha_pp_query, example_formulas, two_by_two_example
from eqra.logic.formulas import fragment_report
from eqra.logic.parser import parse_formula
from eqra.logic.ra_terms import evaluate_ra_term
from eqra.relations import relcore


class TestTwoByTwo:
    """Test the 2^2 example data."""

    def test_relations(self):
        """L is 1', eta0, eta1, 1 on four points."""
        example = two_by_two_example()
        identity, eta0, eta1, universal = example.relations
        assert identity == relcore.identity(4)
        assert universal == relcore.universal(4)
        assert relcore.classes(eta0) == [(0, 1), (2, 3)]
        assert relcore.classes(eta1) == [(0, 2), (1, 3)]

    def test_gamma(self, two_by_two):
        """gamma pairs opposite corners."""
        assert relcore.is_equivalence(two_by_two.gamma)
        assert relcore.classes(two_by_two.gamma) == [(0, 3), (1, 2)]

    def test_structure(self, two_by_two):
        """The structure names eta0 and eta1."""
        assert two_by_two.structure.symbols == ("E0", "E1")
        assert two_by_two.algebra.n == 4


class TestFormulas:
    """Test the fixed definitions."""

    def test_gamma_formula(self):
        """Two variables, outside pp."""
        formulas = example_formulas()
        assert formulas.gamma_fo2 == parse_formula(GAMMA_FORMULA)
        report = fragment_report(formulas.gamma_fo2)
        assert report.variable_count == 2
        assert not report.is_pp

    def test_gamma_term(self, two_by_two):
        """The RA term evaluates to gamma."""
        assert evaluate_ra_term(example_formulas().gamma_term, two_by_two.structure) == two_by_two.gamma

    def test_alpha_query(self):
        """Output pair a, b with two existential variables."""
        query = alpha_pp_query()
        assert (query.x, query.y) == ("a", "b")
        assert len(query.constraints) == 5
        assert {c.symbol for c in query.constraints} == {"E0", "E1", "A1"}
