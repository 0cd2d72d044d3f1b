"""Table markup: scanning, normalization, parsing to a grid, serialization.

Normalized markup uses exactly three tags (table, tr, td) and keeps only
rowspan/colspan attributes, emitted when their value exceeds 1. There is no
whitespace between tags; cell text is kept verbatim.
"""

from __future__ import annotations

import html
from dataclasses import dataclass, field
from html.parser import HTMLParser

from .model import LogicalCell, TableGrid

# Attribute value caps from the HTML standard; they keep hostile markup from
# inflating the grid.
MAX_ROWSPAN = 65534
MAX_COLSPAN = 1000

_CELL_TAGS = ("td", "th")
_SECTION_TAGS = ("thead", "tbody", "tfoot")
_SKIP_TAGS = ("caption", "colgroup", "col")


class ParseError(ValueError):
    """Markup cannot be interpreted as a single table."""


class EmptyTableError(ParseError):
    """The table element holds no rows or no cells."""


class NoTableError(ValueError):
    """The markup contains no table element at all."""


@dataclass
class RawCell:
    """A cell as written in the markup, before any grid placement."""

    rowspan: int = 1
    colspan: int = 1
    parts: list[str] = field(default_factory=list)

    @property
    def raw_text(self) -> str:
        return "".join(self.parts)

    @property
    def content(self) -> str:
        """Text with runs of whitespace collapsed to single spaces and trimmed."""
        return " ".join(self.raw_text.split())


def _span_value(attrs: dict[str, str | None], name: str, cap: int) -> int:
    raw = attrs.get(name)
    if raw is None:
        return 1
    try:
        value = int(str(raw).strip())
    except ValueError:
        return 1
    if value < 1:
        return 1
    return min(value, cap)


class _TableScanner(HTMLParser):
    """Collects the rows and cells of the first (or only) table element."""

    def __init__(self, first_only: bool) -> None:
        super().__init__(convert_charrefs=True)
        self.first_only = first_only
        self.rows: list[list[RawCell]] = []
        self.warnings: list[str] = []
        self.table_open = False
        self.table_seen = False
        self.row: list[RawCell] | None = None
        self.cell: RawCell | None = None
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag == "table":
            if self.table_open:
                raise ParseError("nested table element")
            if self.table_seen:
                if self.first_only:
                    return
                raise ParseError("more than one table element")
            self.table_open = True
            self.table_seen = True
            return
        if not self.table_open:
            return
        if self._skip_depth > 0 and self.cell is None:
            if tag in _SKIP_TAGS:
                self._skip_depth += 1
            return
        if tag == "tr":
            self._close_cell()
            self.row = []
            self.rows.append(self.row)
        elif tag in _CELL_TAGS:
            self._close_cell()
            if self.row is None:
                # Cell outside any row: renderers create an implicit row.
                self.row = []
                self.rows.append(self.row)
            amap = dict(attrs)
            self.cell = RawCell(
                rowspan=_span_value(amap, "rowspan", MAX_ROWSPAN),
                colspan=_span_value(amap, "colspan", MAX_COLSPAN),
            )
            self.row.append(self.cell)
        elif tag in _SECTION_TAGS:
            pass
        elif tag in _SKIP_TAGS and self.cell is None:
            self._skip_depth = 1
        elif self.cell is not None and tag == "br":
            self.cell.parts.append(" ")

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)
        if tag not in ("br",) + _CELL_TAGS + ("table", "tr"):
            self.handle_endtag(tag)

    def handle_endtag(self, tag):
        if not self.table_open:
            return
        if self._skip_depth > 0 and self.cell is None:
            if tag in _SKIP_TAGS:
                self._skip_depth -= 1
            return
        if tag == "table":
            self._close_cell()
            self.row = None
            self.table_open = False
        elif tag == "tr":
            self._close_cell()
            self.row = None
        elif tag in _CELL_TAGS:
            self._close_cell()

    def handle_data(self, data):
        if self.table_open and self._skip_depth == 0 and self.cell is not None:
            self.cell.parts.append(data)

    def _close_cell(self):
        self.cell = None

    def finish(self) -> None:
        self.close()
        if self.table_open:
            raise ParseError("unclosed table element")
        if not self.table_seen:
            raise NoTableError("no table element found")


def scan_table_rows(markup: str, first_only: bool = False) -> tuple[list[list[RawCell]], list[str]]:
    """Scan markup into raw rows of cells.

    Args:
        markup: any markup text containing a table element.
        first_only: tolerate trailing tables instead of raising.

    Returns:
        (rows, warnings): each row is the list of cells written in it.

    Raises:
        NoTableError: no table element appears.
        ParseError: nested or multiple tables, or an unclosed table.
    """
    scanner = _TableScanner(first_only=first_only)
    scanner.feed(markup)
    scanner.finish()
    return scanner.rows, scanner.warnings


def normalize_markup(markup: str) -> str:
    """Rewrite markup to the three-tag canonical form.

    Keeps the first table: header cells become td, section wrappers and
    captions disappear, every attribute except rowspan/colspan is dropped,
    and cell text is preserved verbatim. The result is stable under a second
    normalization pass.
    """
    rows, _ = scan_table_rows(markup, first_only=True)
    out = ["<table>"]
    for row in rows:
        out.append("<tr>")
        for cell in row:
            out.append(_cell_open_tag(cell.rowspan, cell.colspan))
            out.append(html.escape(cell.raw_text, quote=False))
            out.append("</td>")
        out.append("</tr>")
    out.append("</table>")
    return "".join(out)


def _cell_open_tag(rowspan: int, colspan: int) -> str:
    attrs = ""
    if rowspan > 1:
        attrs += f' rowspan="{rowspan}"'
    if colspan > 1:
        attrs += f' colspan="{colspan}"'
    return f"<td{attrs}>"


def parse_table_markup(markup: str) -> TableGrid:
    """Interpret table markup as a grid of disjoint spanning cells.

    Rows are placed in order; within a row each written cell goes to the
    smallest free column. The column count is the largest sum of colspans
    declared by any single row; a cell that finds no free column within it is
    dropped. Spans that would leave the grid or overlap an already placed
    cell are clamped. Every drop or clamp is recorded as a warning on the
    returned grid.

    Raises:
        NoTableError: markup has no table element.
        ParseError: malformed markup (nested, repeated, or unclosed tables).
        EmptyTableError: the table has no rows or no cells.
    """
    rows, warnings = scan_table_rows(markup)
    if not rows:
        raise EmptyTableError("table has no rows")
    n_rows = len(rows)
    m_declared = max(sum(cell.colspan for cell in row) for row in rows)
    if m_declared == 0:
        raise EmptyTableError("table has no cells")

    occupied: set[tuple[int, int]] = set()
    cells: list[LogicalCell] = []
    for i, row in enumerate(rows, start=1):
        cursor = 1
        for raw in row:
            while cursor <= m_declared and (i, cursor) in occupied:
                cursor += 1
            if cursor > m_declared:
                warnings.append(f"row {i}: cell '{raw.content}' dropped, no free column")
                continue
            j = cursor
            extra_rows = raw.rowspan - 1
            if i + extra_rows > n_rows:
                extra_rows = n_rows - i
                warnings.append(f"row {i}: rowspan clamped to fit {n_rows} rows")
            while extra_rows > 0 and any((i + k, j) in occupied for k in range(1, extra_rows + 1)):
                extra_rows -= 1
            extra_cols = 0
            for k in range(1, raw.colspan):
                col = j + k
                if col > m_declared or any((i + r, col) in occupied for r in range(extra_rows + 1)):
                    warnings.append(f"row {i}: colspan clamped at column {col - 1}")
                    break
                extra_cols = k
            cell = LogicalCell(i, j, extra_rows, extra_cols, raw.content)
            for pos in cell.covered():
                occupied.add(pos)
            # An empty simple cell is indistinguishable from an implicit empty
            # position; keeping it implicit makes serialization canonical.
            if not (cell.is_simple and cell.content == ""):
                cells.append(cell)

    m_cols = max(c for _, c in occupied)
    return TableGrid(n_rows, m_cols, tuple(cells), warnings=tuple(warnings))


def serialize_grid(table: TableGrid) -> str:
    """Canonical markup for a grid; implicit empty positions become bare cells.

    Empty simple cells are emitted so that every grid position is accounted
    for, which makes parse(serialize(parse(x))) agree with parse(x).
    """
    owners = table.owner_grid()
    out = ["<table>"]
    for r in range(1, table.n_rows + 1):
        out.append("<tr>")
        for c in range(1, table.m_cols + 1):
            cell = owners[r - 1][c - 1]
            if cell is None:
                out.append("<td></td>")
                continue
            if (cell.row, cell.col) != (r, c):
                continue
            out.append(_cell_open_tag(cell.extra_rows + 1, cell.extra_cols + 1))
            out.append(html.escape(cell.content, quote=False))
            out.append("</td>")
        out.append("</tr>")
    out.append("</table>")
    return "".join(out)
