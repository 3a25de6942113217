"""Unit tests for eqra.relations.relation_io module."""

import json
import os

import pytest

from eqra.exceptions import RelationFormatException
from eqra.relations import relcore
from eqra.relations.relation_io import (
    load_relation,
    load_structure,
    parse_relation_text,
    parse_structure_text,
    relation_from_json,
    relation_to_json,
    relation_to_text,
)


class TestParseRelationText:
    """Test the three relation encodings."""

    def test_pair_list(self):
        """Header then one pair per line, comments ignored."""
        r = parse_relation_text("3\n# edges\n0 1\n1 2  # second\n")
        assert r.pairs() == [(0, 1), (1, 2)]

    def test_matrix(self):
        """n rows of n digits."""
        r = parse_relation_text("3\n100\n011\n001\n")
        assert r.pairs() == [(0, 0), (1, 1), (1, 2), (2, 2)]

    def test_matrix_with_spaces(self):
        """Digits may be separated for n > 2."""
        r = parse_relation_text("3\n1 0 0\n0 1 0\n0 0 1\n")
        assert r == relcore.identity(3)

    def test_two_element_spaced_rows_are_pairs(self):
        """For n = 2 a spaced row reads as a pair."""
        r = parse_relation_text("2\n0 1\n1 0\n")
        assert r.pairs() == [(0, 1), (1, 0)]

    def test_json(self):
        """JSON with n and pairs."""
        r = parse_relation_text('{"n": 2, "pairs": [[1, 1]]}')
        assert r.pairs() == [(1, 1)]

    def test_empty_relation(self):
        """A header alone is the empty relation."""
        assert parse_relation_text("4\n").is_empty()

    def test_bad_token_reports_position(self):
        """Non-integers give line and column."""
        with pytest.raises(RelationFormatException) as info:
            parse_relation_text("3\n0 1\n1 x\n")
        assert info.value.line == 3
        assert info.value.column == 3

    def test_pair_out_of_range(self):
        """Pairs outside the base set are reported with their line."""
        with pytest.raises(RelationFormatException) as info:
            parse_relation_text("2\n0 5\n")
        assert info.value.line == 2

    def test_empty_file(self):
        """No content is an error."""
        with pytest.raises(RelationFormatException):
            parse_relation_text("# nothing\n")

    def test_invalid_json(self):
        """Broken JSON is a format error."""
        with pytest.raises(RelationFormatException):
            parse_relation_text('{"n": 2, ')

    def test_malformed_json_fields(self):
        """Missing keys are a format error."""
        with pytest.raises(RelationFormatException):
            relation_from_json({"n": 2})


class TestWriters:
    """Test the text and JSON writers."""

    def test_text_reads_back(self):
        """Pair-list text parses to the same relation."""
        r = relcore.from_pairs(4, [(0, 3), (2, 1)])
        assert parse_relation_text(relation_to_text(r)) == r

    def test_json_form(self):
        """JSON form lists pairs row-major."""
        assert relation_to_json(relcore.identity(2)) == {"n": 2, "pairs": [[0, 0], [1, 1]]}


class TestFiles:
    """Test file loading."""

    def test_load_relation(self, write_file):
        """Relations load from a path."""
        path = write_file("r.rel", "2\n0 1\n")
        assert load_relation(path).pairs() == [(0, 1)]

    def test_load_structure(self, write_file):
        """Structures map names to relations."""
        path = write_file("s.json", json.dumps({"n": 2, "relations": {"E": [[0, 1]], "F": []}}))
        n, rels = load_structure(path)
        assert n == 2
        assert rels["E"].pairs() == [(0, 1)]
        assert rels["F"].is_empty()

    def test_malformed_structure(self):
        """A structure without relations is rejected."""
        with pytest.raises(RelationFormatException):
            parse_structure_text('{"n": 2}')

    def test_undecodable_bytes_report_position(self, temp_directory):
        """Bytes that are not UTF-8 are a format error at the first bad byte."""
        path = os.path.join(temp_directory, "bad.rel")
        with open(path, "wb") as fh:
            fh.write(b"2\n0 \xff\xfe\n")
        with pytest.raises(RelationFormatException) as info:
            load_relation(path)
        assert (info.value.line, info.value.column) == (2, 3)

    def test_unreadable_path(self, temp_directory):
        """A directory in place of a file is a format error, not an OSError."""
        with pytest.raises(RelationFormatException, match="cannot read"):
            load_relation(temp_directory)

    def test_crlf_line_endings(self, temp_directory):
        """Windows line endings parse like plain newlines."""
        path = os.path.join(temp_directory, "crlf.rel")
        with open(path, "wb") as fh:
            fh.write(b"2\r\n0 1\r\n")
        assert load_relation(path).pairs() == [(0, 1)]
