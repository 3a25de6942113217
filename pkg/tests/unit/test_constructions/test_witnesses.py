"""Unit tests for eqra.constructions.witnesses module."""

import itertools

import pytest

from eqra.constructions.witnesses import (
    case1_failures,
    case1_witness,
    case2_failures,
    case2_witness,
    first_failure,
    in_alpha,
    in_eta,
)
from eqra.exceptions import ConstructionException


class TestCase1:
    """Test the eta-alpha witness."""

    def test_worked_example(self):
        """p = 5, k = 2, u = (3,4), v = (0,1) gives (3,2)."""
        y = case1_witness(5, 2, (3, 4), (0, 1))
        assert y == (3, 2)
        assert in_eta(0, (3, 4), y)
        assert in_alpha(5, 2, y, (0, 1))

    def test_second_coordinate(self):
        """The eta1 variant shares the second coordinate with u."""
        for k, u, v in itertools.product(range(1, 5), [(0, 0), (2, 3)], [(1, 4), (4, 2)]):
            y = case1_witness(5, k, u, v, coordinate=1)
            assert in_eta(1, u, y)
            assert in_alpha(5, k, y, v)

    @pytest.mark.parametrize("p", [3, 5, 7])
    @pytest.mark.parametrize("coordinate", [0, 1])
    def test_no_failures(self, p, coordinate):
        """The witness is valid and distinct everywhere."""
        assert case1_failures(p, coordinate) == []

    def test_bad_k(self):
        """k = 0 is not a kernel index."""
        with pytest.raises(ConstructionException):
            case1_witness(5, 0, (0, 0), (1, 1))

    def test_bad_coordinate(self):
        """Only coordinates 0 and 1 exist."""
        with pytest.raises(ConstructionException):
            case1_witness(5, 1, (0, 0), (1, 1), coordinate=2)


class TestCase2:
    """Test the alpha-alpha witness."""

    def test_worked_example(self):
        """p = 5, i = 1, j = 3, u = (0,0), v = (1,1) gives (1,1)."""
        y = case2_witness(5, 1, 3, (0, 0), (1, 1))
        assert y == (1, 1)
        assert in_alpha(5, 1, (0, 0), y)
        assert in_alpha(5, 3, y, (1, 1))

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_no_failures(self, p):
        """The witness is valid and distinct everywhere."""
        assert case2_failures(p) == []

    def test_equal_indices(self):
        """i and j must differ."""
        with pytest.raises(ConstructionException):
            case2_witness(5, 2, 2, (0, 0), (1, 1))


class TestFirstFailure:
    """Test failure reporting."""

    def test_none(self):
        """No failures, no witness."""
        assert first_failure([]) is None

    def test_dict(self):
        """The first failure becomes a JSON-ready dict."""
        failure = ("membership", (1, 2), (0, 0), (3, 4))
        assert first_failure([failure]) == {"kind": "membership", "parameters": [1, 2], "u": [0, 0], "v": [3, 4]}
