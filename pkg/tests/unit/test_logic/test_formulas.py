"""Unit tests for eqra.logic.formulas module."""

import pytest

from eqra.exceptions import FormulaException, SizeMismatchException, UnknownSymbolException
from eqra.logic.formulas import (
    And,
    Atom,
    Equals,
    Exists,
    ForAll,
    Not,
    Or,
    Structure,
    format_formula,
    fragment_report,
    free_variables,
    is_identifier,
    symbols,
    variables,
)
from eqra.relations import relcore


class TestStructure:
    """Test structure validation and lookup."""

    def test_lookup(self):
        """Bound symbols resolve."""
        s = Structure(2, {"R": relcore.identity(2)})
        assert s.relation("R") == relcore.identity(2)
        assert s.symbols == ("R",)

    def test_unknown_symbol(self):
        """Unbound symbols raise with the symbol attached."""
        with pytest.raises(UnknownSymbolException) as info:
            Structure(2, {}).relation("Q")
        assert info.value.symbol == "Q"

    def test_size_mismatch(self):
        """Relations must live on the structure's base."""
        with pytest.raises(SizeMismatchException):
            Structure(3, {"R": relcore.identity(2)})

    @pytest.mark.parametrize("symbol", ["1R", "exists", "id", "a-b"])
    def test_invalid_symbol(self, symbol):
        """Symbols must be identifiers and not reserved."""
        with pytest.raises(FormulaException):
            Structure(2, {symbol: relcore.identity(2)})

    def test_symbols_sorted(self):
        """Symbols are listed alphabetically."""
        s = Structure(1, {"T": relcore.identity(1), "A": relcore.identity(1)})
        assert s.symbols == ("A", "T")

    def test_is_identifier(self):
        """Identifier rule."""
        assert is_identifier("E0")
        assert is_identifier("_x")
        assert not is_identifier("forall")


class TestFormat:
    """Test printing."""

    def test_gamma(self):
        """The two-variable gamma prints fully parenthesized."""
        f = Or(Equals("x", "y"), Not(Or(Atom("E0", "x", "y"), Atom("E1", "x", "y"))))
        assert format_formula(f) == "((x = y) | !(E0(x,y) | E1(x,y)))"

    def test_quantifiers(self):
        """Quantifiers print with a dot."""
        f = ForAll("z", Exists("w", Atom("R", "z", "w")))
        assert format_formula(f) == "(forall z. (exists w. R(z,w)))"

    def test_not_a_formula(self):
        """Foreign objects are rejected."""
        with pytest.raises(FormulaException):
            format_formula("R(x,y)")


class TestVariables:
    """Test variable and symbol collection."""

    def test_free_variables(self):
        """Bound variables are removed."""
        f = Exists("z", And(Atom("R", "x", "z"), Atom("S", "z", "y")))
        assert free_variables(f) == {"x", "y"}
        assert variables(f) == {"x", "y", "z"}

    def test_rebound_variable(self):
        """A reused name counts once."""
        f = Exists("z", And(Atom("R", "x", "z"), Exists("x", Atom("S", "z", "x"))))
        assert variables(f) == {"x", "z"}
        assert free_variables(f) == {"x"}

    def test_symbols(self):
        """Equality contributes no symbol."""
        f = Or(Equals("x", "y"), Not(Atom("E0", "x", "y")))
        assert symbols(f) == {"E0"}

    def test_shared_subtree(self):
        """A subtree used twice is handled once."""
        leaf = Atom("R", "x", "y")
        f = leaf
        for _ in range(200):
            f = And(f, f)
        assert free_variables(f) == {"x", "y"}
        assert variables(f) == {"x", "y"}


class TestFragmentReport:
    """Test fragment classification."""

    def test_pp(self):
        """Exists over a conjunction is pp."""
        f = Exists("z", And(Atom("R", "x", "z"), Equals("z", "y")))
        report = fragment_report(f)
        assert report.is_pp
        assert report.is_fo3
        assert report.variable_count == 3

    @pytest.mark.parametrize(
        "formula",
        [
            Or(Atom("R", "x", "y"), Atom("S", "x", "y")),
            Not(Atom("R", "x", "y")),
            ForAll("z", Atom("R", "x", "z")),
        ],
    )
    def test_not_pp(self, formula):
        """Disjunction, negation and universal quantification leave pp."""
        assert not fragment_report(formula).is_pp

    def test_four_variables(self):
        """Four names is outside FO3."""
        f = Exists("z", Exists("w", And(Atom("R", "x", "z"), Atom("R", "w", "y"))))
        report = fragment_report(f)
        assert report.variable_count == 4
        assert not report.is_fo3
