"""Structure similarity between tables: tree edit distance and grid alignment.

Two families live here. The tree metric compares tables as ordered trees
built from their markup. The grid metrics compare tables as matrices of
per-position entries and search for the best pair of equal-shape
substructures, either exactly (small tables only) or with a two-stage
factored alignment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .markup import scan_table_rows
from .model import TableGrid, grid_entries_content, grid_entries_topology

Entry = tuple  # topology entries are 4-tuples of ints, content entries are str


class TooLargeError(ValueError):
    """The exact substructure search is only feasible for tiny tables."""


@dataclass(frozen=True)
class TableTree:
    """Ordered tree node for the edit-distance metric.

    The root is a 'table' node whose children are 'tr' nodes whose children
    are 'td' leaves carrying spans and text.
    """

    tag: str
    rowspan: int = 1
    colspan: int = 1
    content: str = ""
    children: tuple["TableTree", ...] = ()


def table_tree(markup: str) -> TableTree:
    """Build the comparison tree from table markup.

    The tree mirrors the markup as written: rows in order, cells in order,
    span attributes as declared. Cell text is whitespace-collapsed.
    """
    rows, _ = scan_table_rows(markup)
    row_nodes = []
    for row in rows:
        cell_nodes = tuple(
            TableTree("td", raw.rowspan, raw.colspan, raw.content) for raw in row
        )
        row_nodes.append(TableTree("tr", children=cell_nodes))
    return TableTree("table", children=tuple(row_nodes))


def tree_size(node: TableTree) -> int:
    return 1 + sum(tree_size(ch) for ch in node.children)


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance between two strings."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _normalized_levenshtein(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    if longest == 0:
        return 0.0
    return levenshtein(a, b) / longest


def _relabel_cost(x: TableTree, y: TableTree) -> float:
    if x.tag != y.tag:
        return 1.0
    if x.tag == "td":
        if (x.rowspan, x.colspan) != (y.rowspan, y.colspan):
            return 1.0
        return _normalized_levenshtein(x.content, y.content)
    return 0.0


def _annotate(root: TableTree):
    """Post-order node list, leftmost-leaf indices, and keyroots."""
    nodes: list[TableTree] = []
    lmds: list[int] = []

    def walk(node: TableTree) -> int:
        first_leaf = None
        for child in node.children:
            idx = walk(child)
            if first_leaf is None:
                first_leaf = lmds[idx]
        own = len(nodes)
        nodes.append(node)
        lmds.append(own if first_leaf is None else first_leaf)
        return own

    walk(root)
    keyroots = {}
    for i, l in enumerate(lmds):
        keyroots[l] = i
    return nodes, lmds, sorted(keyroots.values())


def tree_edit_distance(a: TableTree, b: TableTree,
                       relabel: Callable[[TableTree, TableTree], float] = _relabel_cost) -> float:
    """Ordered tree edit distance with unit insert/delete costs."""
    an, al, ak = _annotate(a)
    bn, bl, bk = _annotate(b)
    td = [[0.0] * len(bn) for _ in an]

    for i in ak:
        for j in bk:
            # Forest distance table for the subtrees rooted at i and j.
            ali, blj = al[i], bl[j]
            m = i - ali + 2
            n = j - blj + 2
            fd = [[0.0] * n for _ in range(m)]
            ioff = ali - 1
            joff = blj - 1
            for x in range(1, m):
                fd[x][0] = fd[x - 1][0] + 1.0
            for y in range(1, n):
                fd[0][y] = fd[0][y - 1] + 1.0
            for x in range(1, m):
                for y in range(1, n):
                    if al[x + ioff] == ali and bl[y + joff] == blj:
                        fd[x][y] = min(
                            fd[x - 1][y] + 1.0,
                            fd[x][y - 1] + 1.0,
                            fd[x - 1][y - 1] + relabel(an[x + ioff], bn[y + joff]),
                        )
                        td[x + ioff][y + joff] = fd[x][y]
                    else:
                        p = al[x + ioff] - 1 - ioff
                        q = bl[y + joff] - 1 - joff
                        fd[x][y] = min(
                            fd[x - 1][y] + 1.0,
                            fd[x][y - 1] + 1.0,
                            fd[p][q] + td[x + ioff][y + joff],
                        )
    return td[-1][-1]


def teds(a: TableTree, b: TableTree) -> float:
    """Tree edit distance similarity: 1 - distance / max(node counts).

    Lands in [0, 1] for the layered table/tr/td trees that table_tree
    builds. Hand-built trees with deeper nesting can drive the distance
    past the larger node count and the score below zero.
    """
    return 1.0 - tree_edit_distance(a, b) / max(tree_size(a), tree_size(b))


# ---------------------------------------------------------------------------
# Grid substructure metrics


def extent_iou(a: tuple[int, int, int, int], b: tuple[int, int, int, int]) -> float:
    """IoU of two relative-extent rectangles, counted in grid positions."""
    ax0, ay0, ax1, ay1 = a
    bx0, by0, bx1, by1 = b
    iw = min(ax1, bx1) - max(ax0, bx0) + 1
    ih = min(ay1, by1) - max(ay0, by0) + 1
    inter = max(0, iw) * max(0, ih)
    area_a = (ax1 - ax0 + 1) * (ay1 - ay0 + 1)
    area_b = (bx1 - bx0 + 1) * (by1 - by0 + 1)
    union = area_a + area_b - inter
    return inter / union


def lcs_length(a: Sequence, b: Sequence) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0]
        for j, cb in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if ca == cb else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def lcs_similarity(a: str, b: str) -> float:
    """2 * LCS / (len + len); 1.0 when both strings are empty, 0.0 when one is."""
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    return 2.0 * lcs_length(a, b) / (len(a) + len(b))


Matrix = list  # list of rows, each a list of entries


def _pair_dp(n_a: int, n_b: int, reward: Callable[[int, int], float]) -> tuple[float, list[tuple[int, int]]]:
    """Best monotone pairing of two index ranges under an additive reward."""
    d = [[0.0] * (n_b + 1) for _ in range(n_a + 1)]
    for x in range(1, n_a + 1):
        for y in range(1, n_b + 1):
            d[x][y] = max(d[x - 1][y], d[x][y - 1], d[x - 1][y - 1] + reward(x - 1, y - 1))
    pairs: list[tuple[int, int]] = []
    x, y = n_a, n_b
    while x > 0 and y > 0:
        if d[x][y] == d[x - 1][y]:
            x -= 1
        elif d[x][y] == d[x][y - 1]:
            y -= 1
        else:
            pairs.append((x - 1, y - 1))
            x -= 1
            y -= 1
    pairs.reverse()
    return d[n_a][n_b], pairs


def _transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def _factored_alignment(p: Matrix, g: Matrix, f: Callable[[Entry, Entry], float]):
    """Two-stage alignment: columns first, then rows given those columns.

    Returns (total, row_pairs, col_pairs) where total is the sum of f over
    the selected row/column cross product. Both stage orders are tried and
    the better one wins.
    """

    def one_order(pm: Matrix, gm: Matrix):
        depth = min(len(pm), len(gm))

        def col_reward(j: int, k: int) -> float:
            return sum(f(pm[i][j], gm[i][k]) for i in range(depth))

        _, col_pairs = _pair_dp(len(pm[0]), len(gm[0]), col_reward)

        def row_reward(i: int, k: int) -> float:
            return sum(f(pm[i][j], gm[k][l]) for j, l in col_pairs)

        total, row_pairs = _pair_dp(len(pm), len(gm), row_reward)
        return total, row_pairs, col_pairs

    total_a, rows_a, cols_a = one_order(p, g)
    total_b, cols_b, rows_b = one_order(_transpose(p), _transpose(g))
    if total_b > total_a:
        return total_b, rows_b, cols_b
    return total_a, rows_a, cols_a


def _memoized(f: Callable[[Entry, Entry], float]) -> Callable[[Entry, Entry], float]:
    cache: dict[tuple[Entry, Entry], float] = {}

    def wrapped(a: Entry, b: Entry) -> float:
        key = (a, b)
        got = cache.get(key)
        if got is None:
            got = cache[key] = f(a, b)
        return got

    return wrapped


def grits(p: Matrix, g: Matrix, f: Callable[[Entry, Entry], float]) -> float:
    """Grid similarity: 2 * best aligned reward / (grid sizes summed)."""
    score, _, _ = grits_alignment(p, g, f)
    return score


def grits_alignment(p: Matrix, g: Matrix, f: Callable[[Entry, Entry], float]):
    """Like grits() but also reports the selected row and column pairs.

    Runs the staged search in both argument orders and keeps the larger
    total. Stage one can have several equally good alignments whose stage
    two totals differ, and which one the traceback lands on depends on
    argument order; taking the max over both orders keeps the score
    symmetric.
    """
    mf = _memoized(f)
    total, row_pairs, col_pairs = _factored_alignment(p, g, mf)
    total_r, row_pairs_r, col_pairs_r = _factored_alignment(
        g, p, lambda a, b: mf(b, a))
    if total_r > total:
        total = total_r
        row_pairs = [(x, y) for y, x in row_pairs_r]
        col_pairs = [(x, y) for y, x in col_pairs_r]
    size = len(p) * len(p[0]) + len(g) * len(g[0])
    return 2.0 * total / size, row_pairs, col_pairs


def grits_topology(p: TableGrid, g: TableGrid) -> float:
    """Grid similarity over relative span extents."""
    return grits(grid_entries_topology(p), grid_entries_topology(g), extent_iou)


def grits_content(p: TableGrid, g: TableGrid) -> float:
    """Grid similarity over cell text, scored by longest common subsequence."""
    return grits(grid_entries_content(p), grid_entries_content(g), lcs_similarity)


def exact_2dmss(p: Matrix, g: Matrix, f: Callable[[Entry, Entry], float],
                max_dim: int = 4):
    """Exhaustive best pair of equal-shape substructures.

    Enumerates every choice of row and column subsets on both sides and
    scores the aligned cross product. Exponential, so inputs larger than
    max_dim in any dimension are refused.

    Returns:
        (score, selection): the induced grid similarity in [0, 1] and the
        maximizing (p_rows, g_rows, p_cols, g_cols) index tuples.
    """
    np_, mp = len(p), len(p[0])
    ng, mg = len(g), len(g[0])
    for dim in (np_, mp, ng, mg):
        if dim > max_dim:
            raise TooLargeError(f"dimension {dim} exceeds the exact-search cap {max_dim}")
    mf = _memoized(f)
    fmat = [[[[mf(p[a][x], g[b][y]) for y in range(mg)] for x in range(mp)]
             for b in range(ng)] for a in range(np_)]
    col_choices = [
        (cp, cg)
        for nc in range(1, min(mp, mg) + 1)
        for cp in itertools.combinations(range(mp), nc)
        for cg in itertools.combinations(range(mg), nc)
    ]
    best = 0.0
    best_sel: tuple[tuple, tuple, tuple, tuple] = ((), (), (), ())
    for nr in range(1, min(np_, ng) + 1):
        for rp in itertools.combinations(range(np_), nr):
            for rg in itertools.combinations(range(ng), nr):
                paired = [fmat[a][b] for a, b in zip(rp, rg)]
                summed = [[sum(m[x][y] for m in paired) for y in range(mg)]
                          for x in range(mp)]
                for cp, cg in col_choices:
                    total = 0.0
                    for x, y in zip(cp, cg):
                        total += summed[x][y]
                    if total > best:
                        best = total
                        best_sel = (rp, rg, cp, cg)
    size = np_ * mp + ng * mg
    return 2.0 * best / size, best_sel
