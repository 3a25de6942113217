"""Unit tests for eqra.relations.closure module."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqra.constructions.zp2 import make_M, make_m_names
from eqra.exceptions import AtomBudgetExceededException, AtomIndexException, ClosureException, SizeMismatchException
from eqra.logic.ra_terms import evaluate_ra_term
from eqra.relations import relcore
from eqra.relations.closure import (
    atom_composition_row,
    ba_closure,
    decompose,
    invariant_violations,
    member_term,
    ra_closure,
    structure_from_labels,
)
from tests.strategies import relation_lists


class TestRaClosure:
    """Test partition refinement."""

    def test_identity_only(self):
        """The identity alone gives the diagonal and its complement."""
        s = ra_closure([relcore.identity(4)])
        assert s.atom_count == 2
        assert s.atom_sizes == [4, 12]
        assert s.atoms[0] == relcore.identity(4)
        assert s.identity_atoms == frozenset({0})
        assert s.closed

    def test_single_point(self):
        """On one point the only atom is the identity."""
        s = ra_closure([relcore.universal(1)])
        assert s.atom_count == 1
        assert s.comp_table == ((frozenset({0}),),)

    def test_default_names(self):
        """Generators are named R0, R1, ... by default."""
        s = ra_closure([relcore.identity(2), relcore.universal(2)])
        assert s.generator_names == ("R0", "R1")

    def test_name_count_mismatch(self):
        """Names must match the generators one to one."""
        with pytest.raises(ClosureException):
            ra_closure([relcore.identity(2)], ["A", "B"])

    def test_no_generators(self):
        """An empty generator list is rejected."""
        with pytest.raises(ClosureException):
            ra_closure([])

    def test_size_mismatch(self):
        """Generators share one base size."""
        with pytest.raises(SizeMismatchException):
            ra_closure([relcore.identity(2), relcore.identity(3)])

    def test_refinement_splits_path(self):
        """A path forces composition splits beyond the membership partition."""
        r = relcore.from_pairs(3, [(0, 1), (1, 2)])
        s = ra_closure([r])
        assert invariant_violations(s) == []
        assert decompose(s, relcore.compose(r, r)) is not None
        assert s.atom_count > ba_closure([r]).atom_count

    def test_zp2_generators(self, m_closure_p5):
        """make_M(5, 1) closes to n + 4 = 5 atoms with beta of size 300."""
        assert m_closure_p5.atom_count == 5
        assert sorted(m_closure_p5.atom_sizes) == [25, 100, 100, 100, 300]
        assert invariant_violations(m_closure_p5) == []

    def test_budget_exceeded(self):
        """Refinement stops at the atom budget."""
        r = relcore.from_pairs(3, [(0, 1), (1, 2)])
        with pytest.raises(AtomBudgetExceededException) as info:
            ra_closure([r], atom_budget=2)
        assert info.value.budget == 2
        assert info.value.count > 2

    def test_atom_terms_evaluate_to_atoms(self, m_closure_p5):
        """Every atom term denotes its atom."""
        structure = m_closure_p5.structure()
        for atom, term in zip(m_closure_p5.atoms, m_closure_p5.atom_terms):
            assert evaluate_ra_term(term, structure) == atom

    def test_atom_of_is_read_only(self):
        """The pair labelling cannot be modified."""
        s = ra_closure([relcore.identity(3)])
        with pytest.raises(ValueError):
            s.atom_of[0, 0] = 1


class TestBaClosure:
    """Test the unrefined Boolean closure."""

    def test_alpha_alone(self, z5):
        """alpha_1 and the identity give three blocks."""
        s = ba_closure([z5.alpha_k(1)])
        assert s.atom_count == 3
        assert not s.closed

    def test_already_closed(self):
        """make_M(5, 1) needs no refinement."""
        from eqra.constructions.zp2 import make_M

        assert invariant_violations(ba_closure(make_M(5, 1))) == []

    def test_unclosed_violations(self):
        """A path is not RA-closed under Boolean operations alone."""
        r = relcore.from_pairs(3, [(0, 1), (1, 2)])
        assert invariant_violations(ba_closure([r]))


class TestMembership:
    """Test decomposition and member terms."""

    def test_decompose_member(self, m_closure_p5, z5):
        """eta0 is the identity atom plus one more."""
        atoms = decompose(m_closure_p5, z5.eta0)
        assert atoms is not None
        assert m_closure_p5.identity_atoms < atoms
        assert len(atoms) == 2

    def test_decompose_non_member(self, m_closure_p5, z5):
        """alpha_2 is not in the closure of make_M(5, 1)."""
        assert decompose(m_closure_p5, z5.alpha_k(2)) is None
        assert z5.alpha_k(2) not in m_closure_p5.family()

    def test_decompose_size_mismatch(self, m_closure_p5):
        """Relations must share the base size."""
        with pytest.raises(SizeMismatchException):
            decompose(m_closure_p5, relcore.identity(3))

    def test_member_term(self, m_closure_p5, z5):
        """The member term evaluates to the relation."""
        term = member_term(m_closure_p5, z5.eta1)
        assert evaluate_ra_term(term, m_closure_p5.structure()) == z5.eta1
        assert member_term(m_closure_p5, z5.alpha_k(3)) is None

    def test_member_term_needs_terms(self):
        """Structures built from labels have no atom terms."""
        s = structure_from_labels([relcore.identity(2)], np.eye(2, dtype=int))
        with pytest.raises(ClosureException):
            member_term(s, relcore.identity(2))

    def test_family_size(self):
        """A closure with k atoms has 2^k members."""
        family = ra_closure([relcore.identity(3)]).family()
        assert len(family) == 4
        assert len(list(family)) == 4
        assert relcore.universal(3) in family


class TestCompositionTable:
    """Test composition rows and labelled structures."""

    def test_row(self):
        """Off-diagonal composed with itself covers everything when n >= 3."""
        s = ra_closure([relcore.identity(3)])
        row = atom_composition_row(s, 1)
        assert row[0] == frozenset({1})
        assert row[1] == frozenset({0, 1})

    @pytest.mark.parametrize("index", [-1, 2])
    def test_row_out_of_range(self, index):
        """Indices outside the atom range are rejected."""
        s = ra_closure([relcore.identity(3)])
        with pytest.raises(AtomIndexException):
            atom_composition_row(s, index)

    def test_labels_renumbered(self):
        """Labels are renumbered by first pair."""
        labels = np.array([[7, 3], [3, 7]])
        s = structure_from_labels([relcore.identity(2)], labels)
        assert s.atoms[0] == relcore.identity(2)
        assert s.converse_map == (0, 1)

    def test_labels_wrong_size(self):
        """The labelling must cover n*n pairs."""
        with pytest.raises(SizeMismatchException):
            structure_from_labels([relcore.identity(2)], np.zeros(3, dtype=int))

    def test_broken_converse_reported(self):
        """A labelling that separates a pair from its converse is flagged."""
        labels = np.array([[0, 1, 1], [2, 0, 1], [2, 2, 0]])
        s = structure_from_labels([relcore.identity(3)], labels)
        assert s.converse_map[1] == 2
        assert not any("converse" in problem for problem in invariant_violations(s))
        merged = structure_from_labels([relcore.identity(3)], np.array([[0, 1, 2], [1, 0, 1], [1, 1, 0]]))
        assert any("converse" in problem for problem in invariant_violations(merged))


@pytest.fixture(scope="module")
def two_by_two_closure(two_by_two):
    return ra_closure(list(two_by_two.relations))


def _merge_atoms(s, i, j):
    labels = s.atom_of.copy()
    labels[labels == j] = i
    return structure_from_labels(list(s.generators), labels, s.generator_names)


class TestMinimality:
    """Test that closures are the coarsest valid partitions."""

    @pytest.mark.parametrize("closure", ["m_closure_p5", "two_by_two_closure"])
    def test_every_merge_breaks_an_invariant(self, closure, request):
        """Merging any two atoms leaves a partition that is not a relation algebra."""
        s = request.getfixturevalue(closure)
        for i, j in itertools.combinations(range(s.atom_count), 2):
            assert invariant_violations(_merge_atoms(s, i, j)), f"atoms {i} and {j} merge cleanly"

    @pytest.mark.parametrize("closure", ["m_closure_p5", "two_by_two_closure"])
    def test_atoms_are_symmetric(self, closure, request):
        """Closures of equivalence relations have self-converse atoms."""
        s = request.getfixturevalue(closure)
        assert list(s.converse_map) == list(range(s.atom_count))

    def test_larger_m_atoms_are_symmetric(self):
        """make_M(7, 2) closes to six self-converse atoms."""
        s = ra_closure(make_M(7, 2), make_m_names(2))
        assert s.atom_count == 6
        assert all(s.converse_map[i] == i for i in range(s.atom_count))

    @pytest.mark.property
    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_random_merge_breaks_an_invariant(self, data):
        """The same holds for closures of random generators."""
        s = ra_closure(data.draw(relation_lists(max_n=4)), atom_budget=16 * 16)
        if s.atom_count < 2:
            return
        i, j = sorted(data.draw(st.lists(st.integers(0, s.atom_count - 1), min_size=2, max_size=2, unique=True)))
        assert invariant_violations(_merge_atoms(s, i, j))


@pytest.mark.property
class TestClosureProperties:
    """Property tests of the closure invariants."""

    @given(relation_lists(max_n=4))
    @settings(max_examples=40, deadline=None)
    def test_closure_is_relation_algebra(self, generators):
        """The refined structure satisfies every invariant."""
        s = ra_closure(generators, atom_budget=16 * 16)
        assert invariant_violations(s) == []

    @given(relation_lists(max_n=4))
    @settings(max_examples=40, deadline=None)
    def test_closed_under_operations(self, generators):
        """Converse and composition of generators stay inside the closure."""
        s = ra_closure(generators, atom_budget=16 * 16)
        for g in generators:
            assert decompose(s, relcore.converse(g)) is not None
            for h in generators:
                assert decompose(s, relcore.compose(g, h)) is not None
