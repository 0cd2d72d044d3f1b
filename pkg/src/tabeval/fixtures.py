"""Seeded synthetic corpora for tests and demos.

Generation is driven entirely by one random.Random instance, so a seed
pins the corpus bit for bit.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from .geometry import BBox
from .markup import serialize_grid
from .model import LogicalCell, TableGrid

_WORDS = (
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    "iota", "kappa", "lambda", "mu", "total", "sum", "mean", "count",
    "rate", "value", "year", "name", "unit", "cost",
)


def random_grid(rng: random.Random, max_rows: int = 4, max_cols: int = 4,
                alphabet: tuple[str, ...] = _WORDS, span_prob: float = 0.2,
                empty_prob: float = 0.1) -> TableGrid:
    """A random table: spanning cells placed greedily on a random shape."""
    n = rng.randint(1, max_rows)
    m = rng.randint(1, max_cols)
    taken = [[False] * m for _ in range(n)]
    cells = []
    for r in range(1, n + 1):
        for c in range(1, m + 1):
            if taken[r - 1][c - 1]:
                continue
            extra_rows = extra_cols = 0
            if rng.random() < span_prob:
                if rng.random() < 0.5 and r < n and not taken[r][c - 1]:
                    extra_rows = 1
                elif c < m and not taken[r - 1][c]:
                    extra_cols = 1
            for rr in range(r, r + extra_rows + 1):
                for cc in range(c, c + extra_cols + 1):
                    taken[rr - 1][cc - 1] = True
            content = "" if rng.random() < empty_prob else rng.choice(alphabet)
            if content or extra_rows or extra_cols:
                cells.append(LogicalCell(r, c, extra_rows, extra_cols, content))
    return TableGrid(n, m, tuple(cells))


def _perturb_grid(rng: random.Random, grid: TableGrid, severity: float) -> TableGrid:
    """Corrupt content and sometimes structure, proportionally to severity."""
    cells = list(grid.cells)
    for i, cell in enumerate(cells):
        if rng.random() < severity * 0.5:
            cells[i] = LogicalCell(cell.row, cell.col, cell.extra_rows,
                                   cell.extra_cols, rng.choice(_WORDS))
    n_rows = grid.n_rows
    if n_rows > 1 and rng.random() < severity * 0.4:
        # Drop the last row and every cell it anchors; spans into it shrink.
        n_rows -= 1
        trimmed = []
        for cell in cells:
            if cell.row > n_rows:
                continue
            overhang = cell.row + cell.extra_rows - n_rows
            if overhang > 0:
                cell = LogicalCell(cell.row, cell.col, cell.extra_rows - overhang,
                                   cell.extra_cols, cell.content)
            trimmed.append(cell)
        cells = trimmed
    return TableGrid(n_rows, grid.m_cols, tuple(cells))


def _jitter_box(rng: random.Random, box: BBox, amount: float,
                width: float, height: float) -> BBox:
    def shift(v: float, lo: float, hi: float) -> float:
        return round(min(hi, max(lo, v + rng.uniform(-amount, amount))), 2)

    x0 = shift(box.x0, 0.0, width - 2.0)
    y0 = shift(box.y0, 0.0, height - 2.0)
    x1 = shift(box.x1, x0 + 1.0, width)
    y1 = shift(box.y1, y0 + 1.0, height)
    return BBox(x0, y0, x1, y1)


def _tokens_for(rng: random.Random, grid: TableGrid, box: BBox) -> list[dict]:
    tokens = []
    for cell in grid.cells:
        if not cell.content:
            continue
        cw = box.width / grid.m_cols
        ch = box.height / grid.n_rows
        x0 = box.x0 + (cell.col - 1) * cw + 2.0
        y0 = box.y0 + (cell.row - 1) * ch + 2.0
        for w, word in enumerate(cell.content.split()):
            tokens.append({
                "bbox": [round(x0 + w * 30.0, 2), round(y0, 2),
                         round(min(x0 + w * 30.0 + 26.0, box.x1), 2),
                         round(min(y0 + 10.0, box.y1), 2)],
                "text": word,
            })
    return tokens


def generate_corpus(seed: int, n_pages: int = 4, severity: float = 0.5,
                    max_rows: int = 5, max_cols: int = 4) -> list[dict]:
    """Build a corpus as a list of page dicts ready for JSON Lines.

    Pages carry 0 to 3 ground-truth tables with boxes, markup, and tokens;
    predictions are perturbed copies with confidences that loosely track
    their quality, plus occasional spurious extras.
    """
    rng = random.Random(seed)
    pages = []
    for page_no in range(n_pages):
        width, height = 1000.0, 1400.0
        n_tables = rng.choice((0, 1, 1, 2, 2, 3))
        gts = []
        preds = []
        tokens = []
        slot_h = height / max(1, n_tables)
        for t in range(n_tables):
            grid = random_grid(rng, max_rows=max_rows, max_cols=max_cols,
                               span_prob=0.2, empty_prob=0.1)
            y_base = t * slot_h
            box = BBox(
                round(rng.uniform(40.0, 200.0), 2),
                round(y_base + rng.uniform(20.0, 60.0), 2),
                round(rng.uniform(700.0, 950.0), 2),
                round(min(y_base + slot_h - 20.0, y_base + rng.uniform(250.0, slot_h)), 2),
            )
            gts.append({"bbox": [box.x0, box.y0, box.x1, box.y1],
                        "markup": serialize_grid(grid)})
            tokens.extend(_tokens_for(rng, grid, box))
            if rng.random() < 0.9:
                jitter = severity * rng.uniform(0.0, 80.0)
                pbox = _jitter_box(rng, box, jitter, width, height)
                pgrid = _perturb_grid(rng, grid, severity)
                quality = max(0.0, 1.0 - jitter / 160.0 - severity * rng.uniform(0.0, 0.3))
                confidence = round(min(1.0, max(0.05, quality + rng.uniform(-0.15, 0.15))), 4)
                preds.append({
                    "bbox": [pbox.x0, pbox.y0, pbox.x1, pbox.y1],
                    "markup": serialize_grid(pgrid),
                    "confidence": confidence,
                })
        if rng.random() < 0.3:
            x0 = round(rng.uniform(0.0, 800.0), 2)
            y0 = round(rng.uniform(0.0, 1200.0), 2)
            fp_grid = random_grid(rng, max_rows=2, max_cols=2)
            preds.append({
                "bbox": [x0, y0, round(x0 + rng.uniform(60.0, 180.0), 2),
                         round(y0 + rng.uniform(40.0, 150.0), 2)],
                "markup": serialize_grid(fp_grid),
                "confidence": round(rng.uniform(0.05, 0.6), 4),
            })
        pages.append({
            "page_id": f"page-{seed}-{page_no:03d}",
            "width": width,
            "height": height,
            "ground_truth": gts,
            "predictions": preds,
            "tokens": tokens,
        })
    return pages


def write_corpus(pages: list[dict], path: str | Path) -> None:
    """Write pages as JSON Lines; key order is fixed for reproducibility."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for page in pages:
            handle.write(json.dumps(page, sort_keys=True) + "\n")
