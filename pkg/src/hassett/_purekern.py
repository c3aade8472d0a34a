"""Pure-Python integer kernels.

These are the reference implementations of the three hot loops: subset
enumeration under a sum cap, subset-sum interval search, and permutation
closure. A compiled twin with identical signatures and identical canonical
outputs lives in ``_fastkern``; :mod:`hassett.kernels` picks one at import.

All subset routines take nonnegative integers (weights already scaled by a
common denominator) and report subsets as bitmasks over the original index
positions. Callers are responsible for stripping zero entries when the
blowup from zero values is unwanted.
"""

from __future__ import annotations

__all__ = [
    "enumerate_small_subsets",
    "find_subset_in_interval",
    "close_permutations",
]

BACKEND = "pure"


def enumerate_small_subsets(scaled: list[int], cap: int) -> list[int]:
    """Bitmasks of all index sets of size >= 2 whose values sum to <= cap.

    Depth-first over indices sorted by value, pruning a branch as soon as
    the running sum exceeds ``cap`` (later values are no smaller, so every
    extension would also exceed it). Returns masks sorted ascending.
    """
    n = len(scaled)
    if n < 2:
        return []
    if cap < 0:
        return []
    order = sorted(range(n), key=lambda i: (scaled[i], i))
    vals = [scaled[i] for i in order]
    bits = [1 << i for i in order]
    out: list[int] = []
    # stack frames: (next position, mask so far, sum so far, size so far)
    stack = [(0, 0, 0, 0)]
    while stack:
        pos, mask, total, size = stack.pop()
        for k in range(pos, n):
            t = total + vals[k]
            if t > cap:
                break
            m = mask | bits[k]
            if size + 1 >= 2:
                out.append(m)
            stack.append((k + 1, m, t, size + 1))
    out.sort()
    return out


def find_subset_in_interval(
    scaled: list[int], lo: int, hi: int, min_size: int
) -> int:
    """First bitmask (in value-sorted DFS order) of an index set T with
    ``lo < sum(T) <= hi`` and ``len(T) >= min_size``, or -1 if none exists.

    Decision use only: the traversal order is deterministic but not the
    caller-facing canonical witness order.
    """
    n = len(scaled)
    if lo >= hi:
        return -1
    order = sorted(range(n), key=lambda i: (scaled[i], i))
    vals = [scaled[i] for i in order]
    bits = [1 << i for i in order]
    suffix = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix[k] = suffix[k + 1] + vals[k]

    def rec(pos: int, mask: int, total: int, size: int) -> int:
        if size >= min_size and lo < total <= hi:
            return mask
        if total + suffix[pos] <= lo:
            return -1
        for k in range(pos, n):
            t = total + vals[k]
            if t > hi:
                break
            found = rec(k + 1, mask | bits[k], t, size + 1)
            if found != -1:
                return found
        return -1

    return rec(0, 0, 0, 0)


def close_permutations(
    gens: list[tuple[int, ...]], degree: int, limit: int
) -> list[tuple[int, ...]] | None:
    """All products of the generators, by breadth-first closure.

    Permutations are 0-based image tuples; composition ``p * g`` maps
    ``x -> g[p[x]]``. Returns the sorted element list (identity included),
    or None once the closure exceeds ``limit`` elements.
    """
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[x]] for x in range(degree))
                if q not in seen:
                    seen.add(q)
                    if len(seen) > limit:
                        return None
                    nxt.append(q)
        frontier = nxt
    return sorted(seen)
