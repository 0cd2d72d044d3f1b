"""Logical table model: spanning cells anchored on a rectangular grid.

Cells are 1-based, anchored at (row, col), and extend over
(extra_rows + 1) x (extra_cols + 1) grid positions. Grid positions not
covered by any cell are implicit empty simple cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .geometry import BBox


@dataclass(frozen=True)
class LogicalCell:
    """One cell: anchor position, extra span, and its text content."""

    row: int
    col: int
    extra_rows: int = 0
    extra_cols: int = 0
    content: str = ""

    def __post_init__(self) -> None:
        if self.row < 1 or self.col < 1:
            raise ValueError(f"cell anchor must be positive, got ({self.row}, {self.col})")
        if self.extra_rows < 0 or self.extra_cols < 0:
            raise ValueError("cell span extents must be non-negative")

    @property
    def is_simple(self) -> bool:
        return self.extra_rows == 0 and self.extra_cols == 0

    def covered(self) -> Iterator[tuple[int, int]]:
        """Every grid position occupied by this cell."""
        for r in range(self.row, self.row + self.extra_rows + 1):
            for c in range(self.col, self.col + self.extra_cols + 1):
                yield r, c


@dataclass(frozen=True)
class TableGrid:
    """A table as a set of disjoint cells on an n_rows x m_cols grid."""

    n_rows: int
    m_cols: int
    cells: tuple[LogicalCell, ...]
    bbox: BBox | None = None
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.n_rows < 1 or self.m_cols < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.n_rows}x{self.m_cols}")
        seen: set[tuple[int, int]] = set()
        for cell in self.cells:
            if cell.row + cell.extra_rows > self.n_rows or cell.col + cell.extra_cols > self.m_cols:
                raise ValueError(f"cell {cell} exceeds the {self.n_rows}x{self.m_cols} grid")
            for pos in cell.covered():
                if pos in seen:
                    raise ValueError(f"cells overlap at grid position {pos}")
                seen.add(pos)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.m_cols

    def owner_grid(self) -> list[list[LogicalCell | None]]:
        """Matrix mapping each grid position to the cell covering it (None = empty)."""
        owners: list[list[LogicalCell | None]] = [
            [None] * self.m_cols for _ in range(self.n_rows)
        ]
        for cell in self.cells:
            for r, c in cell.covered():
                owners[r - 1][c - 1] = cell
        return owners


def grid_entries_topology(table: TableGrid) -> list[list[tuple[int, int, int, int]]]:
    """Per grid position, the covering cell's extent relative to that position.

    A position (a, b) covered by a cell anchored at (i, j) spanning
    (r + 1) x (c + 1) yields (i - a, j - b, i - a + r, j - b + c); empty
    positions yield (0, 0, 0, 0), indistinguishable from a simple cell.
    """
    entries = [[(0, 0, 0, 0)] * table.m_cols for _ in range(table.n_rows)]
    for cell in table.cells:
        for a, b in cell.covered():
            entries[a - 1][b - 1] = (
                cell.row - a,
                cell.col - b,
                cell.row - a + cell.extra_rows,
                cell.col - b + cell.extra_cols,
            )
    return entries


def grid_entries_content(table: TableGrid) -> list[list[str]]:
    """Per grid position, the covering cell's text ('' for empty positions)."""
    entries = [[""] * table.m_cols for _ in range(table.n_rows)]
    for cell in table.cells:
        for a, b in cell.covered():
            entries[a - 1][b - 1] = cell.content
    return entries
