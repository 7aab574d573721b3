"""Tests for the graph-triple text format and option parsing."""

import logging

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rainbow_mantel.graph_core import GraphTriple
from rainbow_mantel.models import GraphFormatError, ValidationError
from rainbow_mantel.utils import (
    parse_int_list,
    parse_triple,
    read_triple,
    serialize_triple,
    setup_logging,
    write_triple,
)


class TestParseIntList:
    """Comma-separated integer options."""

    def test_parses_values(self):
        assert parse_int_list("2, 3,4") == [2, 3, 4]

    def test_empty_string_gives_empty_list(self):
        assert parse_int_list("") == []
        assert parse_int_list("  ") == []

    @pytest.mark.parametrize("text", ["a", "3,,4", "1.5"])
    def test_rejects_non_integers(self, text):
        with pytest.raises(ValidationError):
            parse_int_list(text, "--n")

    def test_rejects_negative(self):
        with pytest.raises(ValidationError, match="non-negative"):
            parse_int_list("3,-1", "--n")


class TestParseTriple:
    """The 'n N' header plus 'c u v' edge lines."""

    def test_parses_with_comments_and_blank_lines(self):
        text = "# a rainbow triangle\nn 3\n\n1 0 1\n2 1 2  \n3 0 2\n"
        t = parse_triple(text)
        assert t.n == 3
        assert t.edge_counts() == (1, 1, 1)
        assert t.g3.has_edge(2, 0)

    def test_duplicate_lines_are_idempotent(self):
        t = parse_triple("n 3\n1 0 1\n1 0 1\n")
        assert t.edge_counts() == (1, 0, 0)

    def test_empty_triple(self):
        t = parse_triple("n 0\n")
        assert t.n == 0

    @pytest.mark.parametrize(
        ("text", "line"),
        [
            ("", 1),
            ("1 0 1\n", 1),
            ("n x\n", 1),
            ("n 3\n4 0 1\n", 2),
            ("n 3\n1 1 1\n", 2),
            ("n 3\n1 2 1\n", 2),
            ("n 3\n1 0 3\n", 2),
            ("n 3\n# ok\n1 0\n", 3),
            ("n 3\n1 0 one\n", 2),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(GraphFormatError) as excinfo:
            parse_triple(text)
        assert excinfo.value.line_number == line
        assert str(excinfo.value).startswith(f"line {line}:")

    def test_serialization_is_canonical(self):
        t = parse_triple("n 4\n3 2 3\n1 1 2\n1 0 3\n2 0 1\n")
        assert serialize_triple(t) == "n 4\n1 0 3\n1 1 2\n2 0 1\n3 2 3\n"

    @given(st.integers(min_value=0, max_value=6).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(
                st.integers(min_value=0, max_value=7),
                min_size=n * (n - 1) // 2,
                max_size=n * (n - 1) // 2,
            ),
        )
    ))
    def test_serialize_then_parse_preserves_triple(self, case):
        n, masks = case
        t = GraphTriple.from_pair_masks(n, masks)
        assert parse_triple(serialize_triple(t)) == t


class TestFiles:
    """Reading and writing triple files."""

    def test_write_then_read(self, tmp_path):
        t = GraphTriple.from_pair_masks(3, [3, 4, 1])
        path = tmp_path / "triple.txt"
        write_triple(t, path)
        assert read_triple(path) == t
        assert path.read_text().endswith("\n")

    def test_missing_file_is_validation_error(self, tmp_path):
        with pytest.raises(ValidationError, match="Cannot read"):
            read_triple(tmp_path / "absent.txt")

    def test_invalid_utf8_is_format_error(self, tmp_path):
        path = tmp_path / "binary.txt"
        path.write_bytes(b"n 3\n1 0 \xff\n")
        with pytest.raises(GraphFormatError) as excinfo:
            read_triple(path)
        assert excinfo.value.line_number == 2


class TestLogging:
    """Package logger configuration."""

    def test_verbose_switches_to_debug(self):
        setup_logging(verbose=True)
        logger = logging.getLogger("rainbow_mantel")
        assert logger.level == logging.DEBUG
        assert len(logger.handlers) == 1
        setup_logging(verbose=False)
        assert logger.level == logging.WARNING
        assert len(logger.handlers) == 1
