"""Independent brute-force references used to pin expected values.

Everything here is written from the definitions, not from the package
internals, and is deliberately slow: exponential searches and memoized
recursions that are only usable on tiny inputs.
"""

from __future__ import annotations

from functools import lru_cache

from tabeval import TableTree


def naive_levenshtein(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            go(i - 1, j) + 1,
            go(i, j - 1) + 1,
            go(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return go(len(a), len(b))


def naive_lcs(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> int:
        if i == 0 or j == 0:
            return 0
        if a[i - 1] == b[j - 1]:
            return go(i - 1, j - 1) + 1
        return max(go(i - 1, j), go(i, j - 1))

    return go(len(a), len(b))


def _relabel(x: TableTree, y: TableTree) -> float:
    if x.tag != y.tag:
        return 1.0
    if x.tag == "td":
        if (x.rowspan, x.colspan) != (y.rowspan, y.colspan):
            return 1.0
        longest = max(len(x.content), len(y.content))
        if longest == 0:
            return 0.0
        return naive_levenshtein(x.content, y.content) / longest
    return 0.0


def _forest_size(forest: tuple[TableTree, ...]) -> int:
    return sum(1 + _forest_size(t.children) for t in forest)


def brute_tree_edit_distance(a: TableTree, b: TableTree) -> float:
    """Exact ordered tree edit distance by exhaustive forest recursion."""
    memo: dict = {}

    def go(f1: tuple[TableTree, ...], f2: tuple[TableTree, ...]) -> float:
        if not f1 and not f2:
            return 0.0
        if not f1:
            return float(_forest_size(f2))
        if not f2:
            return float(_forest_size(f1))
        key = (f1, f2)
        if key in memo:
            return memo[key]
        t1, t2 = f1[-1], f2[-1]
        best = min(
            go(f1[:-1] + t1.children, f2) + 1.0,
            go(f1, f2[:-1] + t2.children) + 1.0,
            go(f1[:-1], f2[:-1]) + go(t1.children, t2.children) + _relabel(t1, t2),
        )
        memo[key] = best
        return best

    return go((a,), (b,))
