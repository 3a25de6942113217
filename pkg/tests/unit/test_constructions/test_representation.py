"""Unit tests for eqra.constructions.representation module."""

import pytest

from eqra.constructions.representation import choose_prime, represent_mn, small_case_generators
from eqra.core.certificate import CheckStatus
from eqra.exceptions import MOutOfRangeException, NOutOfRangeException, NotPrimeException


class TestChoosePrime:
    """Test modulus selection."""

    @pytest.mark.parametrize("n, p", [(1, 5), (2, 5), (3, 7), (4, 7), (5, 11), (6, 11)])
    def test_smallest(self, n, p):
        """Smallest prime p >= 5 with n < p - 2."""
        assert choose_prime(n) == p


class TestSmallCases:
    """Test m = 1 and m = 2."""

    def test_generators(self):
        """m = 1 on 2^2, m = 2 on Z_3^2."""
        base, names, gens = small_case_generators(1)
        assert base == "2x2"
        assert names == ["U", "I", "E0"]
        assert gens[0].n == 4
        base, names, gens = small_case_generators(2)
        assert base == "Z3^2"
        assert len(gens) == 4
        assert gens[0].n == 9

    @pytest.mark.parametrize("m", [1, 2])
    def test_represented(self, m):
        """Eq(RA(G)) = G with shape M_m."""
        result = represent_mn(m)
        assert result.passed
        assert result.shape.n_atoms == m
        assert result.p is None
        assert len(result.checks) == 2


class TestRepresentMn:
    """Test the general pipeline."""

    def test_m3(self):
        """M_3 on Z_5^2 with n + 4 atoms."""
        result = represent_mn(3)
        assert result.passed
        assert (result.p, result.n, result.base) == (5, 1, "Z5^2")
        assert result.atom_count == 5
        assert [c.name for c in result.checks] == [
            "represent.m3.shape",
            "represent.m3.eq_equals_generators",
            "represent.m3.atom_count",
            "represent.m3.ba_equals_ra",
        ]

    def test_prime_override(self):
        """A larger prime also works."""
        result = represent_mn(4, prime=7)
        assert result.passed
        assert result.p == 7
        assert result.shape.describe() == "M_4"

    def test_certificate(self):
        """The certificate echoes the generators and the shape."""
        cert = represent_mn(3).certificate()
        assert cert.command == "represent-mn"
        assert cert.inputs["shape"] == "M_3"
        assert cert.inputs["generators"] == ["U", "I", "E0", "E1", "A1"]
        assert len(cert.inputs["equivalences"]) == 5
        assert all(c.status is CheckStatus.PASS for c in cert.checks)

    @pytest.mark.parametrize("m", [0, 10])
    def test_m_out_of_range(self, m):
        """m runs over 1..MAX_REPRESENTED_M."""
        with pytest.raises(MOutOfRangeException):
            represent_mn(m)

    def test_prime_too_small(self):
        """The override must satisfy n < p - 2."""
        with pytest.raises(NOutOfRangeException):
            represent_mn(5, prime=5)

    def test_prime_not_prime(self):
        """The override must be prime."""
        with pytest.raises(NotPrimeException):
            represent_mn(4, prime=9)
