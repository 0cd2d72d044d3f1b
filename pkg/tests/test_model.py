"""Grid model, markup parsing, normalization, and serialization."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tabeval import (
    EmptyTableError,
    LogicalCell,
    NoTableError,
    ParseError,
    TableGrid,
    grid_entries_content,
    grid_entries_topology,
    normalize_markup,
    parse_table_markup,
    serialize_grid,
)
from tabeval.fixtures import random_grid

SAMPLE = (
    '<table><tr><td rowspan="2">a</td><td>b</td></tr>'
    "<tr><td>c</td></tr>"
    '<tr><td colspan="2">d</td></tr></table>'
)


class TestLogicalCell:
    def test_rejects_bad_coordinates(self):
        with pytest.raises(ValueError):
            LogicalCell(0, 1)
        with pytest.raises(ValueError):
            LogicalCell(1, 0)
        with pytest.raises(ValueError):
            LogicalCell(1, 1, extra_rows=-1)

    def test_covered_is_the_full_rectangle(self):
        cell = LogicalCell(2, 3, extra_rows=1, extra_cols=2)
        assert set(cell.covered()) == {
            (2, 3), (2, 4), (2, 5), (3, 3), (3, 4), (3, 5),
        }

    def test_is_simple(self):
        assert LogicalCell(1, 1).is_simple
        assert not LogicalCell(1, 1, extra_rows=1).is_simple
        assert not LogicalCell(1, 1, extra_cols=1).is_simple


class TestTableGrid:
    def test_rejects_overlapping_cells(self):
        with pytest.raises(ValueError):
            TableGrid(2, 2, (LogicalCell(1, 1, 1, 1), LogicalCell(2, 2)))

    def test_rejects_cell_outside_bounds(self):
        with pytest.raises(ValueError):
            TableGrid(1, 1, (LogicalCell(1, 1, extra_cols=1),))

    def test_rejects_empty_shape(self):
        with pytest.raises(ValueError):
            TableGrid(0, 1, ())

    def test_warnings_do_not_affect_equality(self):
        a = TableGrid(1, 1, (LogicalCell(1, 1, content="x"),))
        b = TableGrid(1, 1, (LogicalCell(1, 1, content="x"),), warnings=("w",))
        assert a == b


class TestParse:
    def test_sample_table(self):
        grid = parse_table_markup(SAMPLE)
        assert grid.shape == (3, 2)
        assert grid.cells == (
            LogicalCell(1, 1, 1, 0, "a"),
            LogicalCell(1, 2, 0, 0, "b"),
            LogicalCell(2, 2, 0, 0, "c"),
            LogicalCell(3, 1, 0, 1, "d"),
        )
        assert grid.warnings == ()

    def test_column_count_is_max_declared_row_width(self):
        grid = parse_table_markup(
            "<table><tr><td>a</td></tr>"
            '<tr><td colspan="2">b</td><td>c</td></tr></table>'
        )
        assert grid.shape == (2, 3)

    def test_overflowing_cell_is_dropped_with_warning(self):
        grid = parse_table_markup(
            '<table><tr><td rowspan="2">a</td><td>b</td></tr>'
            "<tr><td>c</td><td>d</td></tr></table>"
        )
        assert grid.cells == (
            LogicalCell(1, 1, 1, 0, "a"),
            LogicalCell(1, 2, 0, 0, "b"),
            LogicalCell(2, 2, 0, 0, "c"),
        )
        assert grid.warnings == ("row 2: cell 'd' dropped, no free column",)

    def test_rowspan_clamped_to_table_height(self):
        grid = parse_table_markup(
            '<table><tr><td rowspan="5">a</td><td>b</td></tr>'
            "<tr><td>c</td></tr></table>"
        )
        assert grid.cells[0] == LogicalCell(1, 1, 1, 0, "a")
        assert any("rowspan" in w for w in grid.warnings)

    def test_colspan_stops_at_occupied_column(self):
        grid = parse_table_markup(
            '<table><tr><td>a</td><td rowspan="2">b</td><td>c</td></tr>'
            '<tr><td colspan="3">d</td></tr></table>'
        )
        assert LogicalCell(2, 1, 0, 0, "d") in grid.cells
        assert any("colspan" in w for w in grid.warnings)

    def test_colspan_attribute_capped_at_1000(self):
        grid = parse_table_markup('<table><tr><td colspan="2000">a</td></tr></table>')
        assert grid.shape == (1, 1000)
        assert grid.cells[0].extra_cols == 999

    def test_span_caps_apply_before_normalization(self):
        out = normalize_markup(
            '<table><tr><td rowspan="70000" colspan="1001">a</td></tr></table>'
        )
        assert out == '<table><tr><td rowspan="65534" colspan="1000">a</td></tr></table>'

    def test_invalid_span_attributes_mean_one(self):
        grid = parse_table_markup(
            '<table><tr><td rowspan="x" colspan="0">a</td><td>b</td></tr></table>'
        )
        assert grid.cells == (
            LogicalCell(1, 1, 0, 0, "a"),
            LogicalCell(1, 2, 0, 0, "b"),
        )

    def test_cell_text_whitespace_is_collapsed(self):
        grid = parse_table_markup("<table><tr><td> a \n  b </td></tr></table>")
        assert grid.cells[0].content == "a b"

    def test_empty_simple_cells_stay_implicit(self):
        grid = parse_table_markup(
            "<table><tr><td></td><td>x</td></tr></table>"
        )
        assert grid.shape == (1, 2)
        assert grid.cells == (LogicalCell(1, 2, 0, 0, "x"),)

    def test_empty_spanning_cell_is_kept(self):
        grid = parse_table_markup(
            '<table><tr><td colspan="2"></td></tr><tr><td>a</td><td>b</td></tr></table>'
        )
        assert LogicalCell(1, 1, 0, 1, "") in grid.cells

    def test_header_cells_and_sections_are_transparent(self):
        grid = parse_table_markup(
            "<table><thead><tr><th>h</th></tr></thead>"
            "<tbody><tr><td>v</td></tr></tbody></table>"
        )
        assert grid_entries_content(grid) == [["h"], ["v"]]

    def test_no_table_raises(self):
        with pytest.raises(NoTableError):
            parse_table_markup("<div>plain</div>")

    def test_empty_table_raises(self):
        with pytest.raises(EmptyTableError):
            parse_table_markup("<table></table>")
        with pytest.raises(EmptyTableError):
            parse_table_markup("<table><tr></tr></table>")

    def test_nested_table_raises(self):
        with pytest.raises(ParseError):
            parse_table_markup(
                "<table><tr><td><table><tr><td>x</td></tr></table></td></tr></table>"
            )

    def test_second_table_raises(self):
        with pytest.raises(ParseError):
            parse_table_markup(
                "<table><tr><td>a</td></tr></table><table><tr><td>b</td></tr></table>"
            )

    def test_unclosed_table_raises(self):
        with pytest.raises(ParseError):
            parse_table_markup("<table><tr><td>a</td></tr>")


class TestGridEntries:
    def test_topology_of_sample_table(self):
        grid = parse_table_markup(SAMPLE)
        assert grid_entries_topology(grid) == [
            [(0, 0, 1, 0), (0, 0, 0, 0)],
            [(-1, 0, 0, 0), (0, 0, 0, 0)],
            [(0, 0, 0, 1), (0, -1, 0, 0)],
        ]

    def test_content_of_sample_table(self):
        grid = parse_table_markup(SAMPLE)
        assert grid_entries_content(grid) == [["a", "b"], ["a", "c"], ["d", "d"]]

    def test_implicit_positions_are_zero_extent_and_empty(self):
        grid = parse_table_markup("<table><tr><td>x</td></tr><tr></tr></table>")
        assert grid_entries_topology(grid)[1] == [(0, 0, 0, 0)]
        assert grid_entries_content(grid)[1] == [""]


class TestNormalize:
    def test_canonical_form(self):
        raw = (
            "<table><caption>Cap</caption>"
            '<thead><tr><th colspan="1">A&amp;B</th></tr></thead>'
            "<tbody><tr><td><b>x</b><br>y</td></tr></tbody></table>"
        )
        assert normalize_markup(raw) == (
            "<table><tr><td>A&amp;B</td></tr><tr><td>x y</td></tr></table>"
        )

    def test_keeps_cell_text_verbatim(self):
        out = normalize_markup("<table><tr><td> a  b </td></tr></table>")
        assert out == "<table><tr><td> a  b </td></tr></table>"

    def test_escapes_angle_brackets(self):
        out = normalize_markup("<table><tr><td>1 &lt; 2</td></tr></table>")
        assert out == "<table><tr><td>1 &lt; 2</td></tr></table>"

    def test_keeps_first_table_only(self):
        out = normalize_markup(
            "<table><tr><td>a</td></tr></table><table><tr><td>b</td></tr></table>"
        )
        assert out == "<table><tr><td>a</td></tr></table>"

    def test_spans_kept_as_written_even_when_oversized(self):
        out = normalize_markup('<table><tr><td rowspan="9">a</td></tr></table>')
        assert out == '<table><tr><td rowspan="9">a</td></tr></table>'

    @given(st.integers(0, 10_000))
    def test_idempotent_on_generated_tables(self, seed):
        grid = random_grid(random.Random(seed))
        markup = serialize_grid(grid)
        once = normalize_markup(markup)
        assert normalize_markup(once) == once


class TestSerialize:
    def test_sample_round_trip_is_byte_identical(self):
        assert serialize_grid(parse_table_markup(SAMPLE)) == SAMPLE

    def test_implicit_empties_become_bare_cells(self):
        grid = TableGrid(1, 2, (LogicalCell(1, 1, content="x"),))
        assert serialize_grid(grid) == "<table><tr><td>x</td><td></td></tr></table>"

    def test_continuation_positions_are_not_emitted(self):
        grid = parse_table_markup(SAMPLE)
        assert serialize_grid(grid).count("<td") == 4

    @settings(max_examples=200)
    @given(st.integers(0, 10_000_000))
    def test_parse_inverts_serialize(self, seed):
        grid = random_grid(random.Random(seed), max_rows=5, max_cols=5)
        again = parse_table_markup(serialize_grid(grid))
        assert again == grid
        assert again.cells == grid.cells

    @given(st.integers(0, 10_000))
    def test_parse_of_serialize_of_parse_is_parse(self, seed):
        grid = random_grid(random.Random(seed))
        markup = serialize_grid(grid)
        assert parse_table_markup(serialize_grid(parse_table_markup(markup))) == (
            parse_table_markup(markup)
        )
