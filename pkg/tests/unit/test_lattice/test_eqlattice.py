"""Unit tests for eqra.lattice.eqlattice module."""

import pytest
from hypothesis import given, settings

from eqra.constructions.zp2 import make_M, make_m_names
from eqra.exceptions import (
    AtomBudgetExceededException,
    LatticeException,
    NotAnEquivalenceException,
    NotJoinClosedException,
    NotMeetClosedException,
    SizeMismatchException,
)
from eqra.lattice.eqlattice import build_lattice, extract_equivalences, lattices_equal, mn_shape
from eqra.relations import relcore
from eqra.relations.closure import ra_closure
from tests.strategies import relabelled_relation_lists, relation_lists


@pytest.fixture(scope="module")
def two_by_two_lattice(two_by_two):
    eqs = extract_equivalences(ra_closure(list(two_by_two.relations)))
    return eqs, build_lattice(eqs)


class TestExtractEquivalences:
    """Test equivalence extraction from atom structures."""

    def test_two_by_two(self, two_by_two, two_by_two_lattice):
        """Eq(RA(L)) adds gamma to L."""
        eqs, _ = two_by_two_lattice
        assert len(eqs) == 5
        assert set(eqs) == set(two_by_two.relations) | {two_by_two.gamma}

    def test_canonical_order(self, two_by_two_lattice):
        """Universal sorts first and identity last."""
        eqs, _ = two_by_two_lattice
        assert eqs[0] == relcore.universal(4)
        assert eqs[-1] == relcore.identity(4)

    def test_m_generators(self, m_closure_p5, z5):
        """Eq(RA(make_M(5, 1))) is exactly the generators."""
        eqs = extract_equivalences(m_closure_p5)
        assert set(eqs) == {
            relcore.universal(25),
            relcore.identity(25),
            z5.eta0,
            z5.eta1,
            z5.alpha_k(1),
        }

    def test_budget(self, m_closure_p5):
        """Structures above the budget are refused."""
        with pytest.raises(AtomBudgetExceededException):
            extract_equivalences(m_closure_p5, atom_budget=4)

    def test_identity_only(self):
        """A single-point base gives one equivalence."""
        eqs = extract_equivalences(ra_closure([relcore.identity(1)]))
        assert eqs == [relcore.identity(1)]

    @pytest.mark.property
    @given(relation_lists(max_n=4))
    @settings(max_examples=40, deadline=None)
    def test_matches_brute_force(self, generators):
        """Closed atom sets are exactly the equivalence members."""
        s = ra_closure(generators, atom_budget=256)
        if s.atom_count > 12:
            return
        brute = {r for r in s.family() if relcore.is_equivalence(r)}
        assert set(extract_equivalences(s, atom_budget=256)) == brute


class TestBuildLattice:
    """Test lattice construction and validation."""

    def test_m3(self, two_by_two_lattice):
        """The 2x2 lattice is M_3 with six covering pairs."""
        _, lattice = two_by_two_lattice
        assert len(lattice) == 5
        assert lattice.elements[lattice.bottom] == relcore.identity(4)
        assert lattice.elements[lattice.top] == relcore.universal(4)
        assert len(lattice.hasse_edges) == 6
        assert lattice.height == 2

    def test_meet_and_join(self, two_by_two, two_by_two_lattice):
        """eta0 meets eta1 at the identity and joins at the top."""
        _, lattice = two_by_two_lattice
        i = lattice.index(two_by_two.relations[1])
        j = lattice.index(two_by_two.relations[2])
        assert lattice.meet(i, j) == lattice.bottom
        assert lattice.join(i, j) == lattice.top

    def test_index_missing(self, two_by_two_lattice):
        """Relations outside the lattice have no index."""
        _, lattice = two_by_two_lattice
        assert lattice.index(relcore.empty(4)) is None

    def test_duplicates_collapse(self):
        """Repeated elements count once."""
        lattice = build_lattice([relcore.identity(3), relcore.identity(3), relcore.universal(3)])
        assert len(lattice) == 2

    def test_empty(self):
        """An empty set is not a lattice."""
        with pytest.raises(LatticeException):
            build_lattice([])

    def test_not_equivalence(self):
        """The input index of a non-equivalence is reported."""
        with pytest.raises(NotAnEquivalenceException) as info:
            build_lattice([relcore.identity(2), relcore.empty(2)])
        assert info.value.index == 1

    def test_size_mismatch(self):
        """Base sizes must agree."""
        with pytest.raises(SizeMismatchException):
            build_lattice([relcore.identity(2), relcore.identity(3)])

    def test_not_join_closed(self, two_by_two):
        """Without the top, eta0 and eta1 have no join."""
        identity, eta0, eta1, _ = two_by_two.relations
        with pytest.raises(NotJoinClosedException) as info:
            build_lattice([identity, eta0, eta1])
        assert info.value.pair == (0, 1)

    def test_not_meet_closed(self, two_by_two):
        """Without the bottom, eta0 and eta1 have no meet."""
        _, eta0, eta1, universal = two_by_two.relations
        with pytest.raises(NotMeetClosedException) as info:
            build_lattice([eta0, eta1, universal])
        assert info.value.pair == (1, 2)

    def test_tables_read_only(self, two_by_two_lattice):
        """Order and operation tables are frozen."""
        _, lattice = two_by_two_lattice
        with pytest.raises(ValueError):
            lattice.meet_table[0, 0] = 0


class TestMnShape:
    """Test M_n recognition."""

    def test_m3(self, two_by_two_lattice):
        """Three incomparable middles."""
        _, lattice = two_by_two_lattice
        shape = mn_shape(lattice)
        assert shape.is_mn
        assert shape.n_atoms == 3
        assert shape.describe() == "M_3"

    def test_congruences_of_z5(self, z5):
        """Con(Z_5^2) is M_6 of height 2."""
        lattice = build_lattice(z5.congruence_set())
        assert mn_shape(lattice).n_atoms == 6
        assert lattice.height == 2

    def test_three_chain_is_m1(self, two_by_two):
        """1' < eta0 < 1 is M_1."""
        identity, eta0, _, universal = two_by_two.relations
        assert mn_shape(build_lattice([identity, eta0, universal])).n_atoms == 1

    def test_two_chain_not_recognised(self):
        """Bottom and top alone are not M_n."""
        shape = mn_shape(build_lattice([relcore.identity(3), relcore.universal(3)]))
        assert not shape.is_mn
        assert shape.describe() == "not M_n"

    def test_relabelled_m_generators(self):
        """Reversing the 25 points of Z_5^2 keeps Eq an M_3 on the relabelled kernels."""
        reverse = list(range(24, -1, -1))
        generators = [relcore.permute(r, reverse) for r in make_M(5, 1)]
        eqs = extract_equivalences(ra_closure(generators, make_m_names(1)))
        assert set(eqs) == set(generators)
        assert mn_shape(build_lattice(eqs)).n_atoms == 3

    @pytest.mark.property
    @given(relabelled_relation_lists(max_n=4))
    @settings(max_examples=40, deadline=None)
    def test_shape_invariant_under_relabelling(self, drawn):
        """Permuting the base set permutes Eq and keeps its M_n shape."""
        generators, permutation = drawn
        s = ra_closure(generators, atom_budget=256)
        if s.atom_count > 12:
            return
        eqs = extract_equivalences(s, atom_budget=256)
        image = extract_equivalences(
            ra_closure([relcore.permute(g, permutation) for g in generators], atom_budget=256), atom_budget=256
        )
        assert set(image) == {relcore.permute(e, permutation) for e in eqs}
        assert mn_shape(build_lattice(image)).n_atoms == mn_shape(build_lattice(eqs)).n_atoms

    def test_four_chain_not_mn(self):
        """Comparable middle elements break the shape."""
        low = relcore.from_pairs(4, [(0, 1), (1, 0)])
        high = relcore.from_pairs(4, [(a, b) for a in range(3) for b in range(3)])
        chain = [relcore.identity(4), relcore.union(relcore.identity(4), low), relcore.union(relcore.identity(4), high), relcore.universal(4)]
        assert not mn_shape(build_lattice(chain)).is_mn


class TestLatticesEqual:
    """Test set comparison of relation lists."""

    def test_order_ignored(self, two_by_two):
        """Equality ignores order and repetition."""
        rels = list(two_by_two.relations)
        assert lattices_equal(rels, list(reversed(rels)) + [rels[0]])

    def test_different(self, two_by_two):
        """Missing elements make lists differ."""
        rels = list(two_by_two.relations)
        assert not lattices_equal(rels, rels[:3])

    def test_mixed_sizes(self):
        """Mixed base sizes are an error."""
        with pytest.raises(SizeMismatchException):
            lattices_equal([relcore.identity(2)], [relcore.identity(3)])
