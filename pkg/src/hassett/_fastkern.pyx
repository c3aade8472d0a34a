# cython: boundscheck=False, wraparound=False
"""Compiled twin of the pure-Python integer kernels.

Same signatures, same canonical outputs, same traversal order, so results
are byte-identical to ``_purekern``. Inputs that do not fit the int64 fast
path (more than 63 indices, or sums near the int64 limit) are delegated to
the pure implementation instead of risking overflow.
"""

from hassett import _purekern as _fallback

BACKEND = "fast"

cdef long long _SAFE_SUM = (<long long>1) << 62


cdef void _enum_rec(long long* vals, long long* bits, int n, int pos,
                    long long mask, long long total, int size,
                    long long cap, list out):
    cdef int k
    cdef long long t, m
    for k in range(pos, n):
        t = total + vals[k]
        if t > cap:
            break
        m = mask | bits[k]
        if size + 1 >= 2:
            out.append(m)
        _enum_rec(vals, bits, n, k + 1, m, t, size + 1, cap, out)


def enumerate_small_subsets(scaled, cap):
    """Bitmasks of all index sets of size >= 2 with value sum <= cap."""
    cdef int n = len(scaled)
    cdef long long vals[64]
    cdef long long bits[64]
    cdef long long total = 0
    cdef int k
    if n < 2 or cap < 0:
        return []
    if n > 63 or cap > _SAFE_SUM:
        return _fallback.enumerate_small_subsets(scaled, cap)
    order = sorted(range(n), key=lambda i: (scaled[i], i))
    for k in range(n):
        v = scaled[order[k]]
        if v < 0 or v > _SAFE_SUM:
            return _fallback.enumerate_small_subsets(scaled, cap)
        total += v
        if total > _SAFE_SUM:
            return _fallback.enumerate_small_subsets(scaled, cap)
        vals[k] = v
        bits[k] = (<long long>1) << order[k]
    out = []
    _enum_rec(vals, bits, n, 0, 0, 0, 0, cap, out)
    out.sort()
    return out


cdef long long _find_rec(long long* vals, long long* bits, long long* suffix,
                         int n, int pos, long long mask, long long total,
                         int size, long long lo, long long hi, int min_size):
    cdef int k
    cdef long long t, found
    if size >= min_size and lo < total <= hi:
        return mask
    if total + suffix[pos] <= lo:
        return -1
    for k in range(pos, n):
        t = total + vals[k]
        if t > hi:
            break
        found = _find_rec(vals, bits, suffix, n, k + 1, mask | bits[k], t,
                          size + 1, lo, hi, min_size)
        if found != -1:
            return found
    return -1


def find_subset_in_interval(scaled, lo, hi, min_size):
    """A bitmask of an index set T with lo < sum(T) <= hi and |T| >= min_size,
    or -1. Witness choice matches the pure backend exactly."""
    cdef int n = len(scaled)
    cdef long long vals[64]
    cdef long long bits[64]
    cdef long long suffix[65]
    cdef long long total = 0
    cdef int k
    if lo >= hi:
        return -1
    if n > 63 or abs(lo) > _SAFE_SUM or abs(hi) > _SAFE_SUM:
        return _fallback.find_subset_in_interval(scaled, lo, hi, min_size)
    order = sorted(range(n), key=lambda i: (scaled[i], i))
    for k in range(n):
        v = scaled[order[k]]
        if v < 0 or v > _SAFE_SUM:
            return _fallback.find_subset_in_interval(scaled, lo, hi, min_size)
        total += v
        if total > _SAFE_SUM:
            return _fallback.find_subset_in_interval(scaled, lo, hi, min_size)
        vals[k] = v
        bits[k] = (<long long>1) << order[k]
    suffix[n] = 0
    for k in range(n - 1, -1, -1):
        suffix[k] = suffix[k + 1] + vals[k]
    return _find_rec(vals, bits, suffix, n, 0, 0, 0, 0, lo, hi, min_size)


def close_permutations(gens, degree, limit):
    """Breadth-first closure of the generators; None past the limit."""
    cdef int d = degree
    cdef int x
    cdef const unsigned char* pb
    cdef const unsigned char* gb
    if d > 255:
        return _fallback.close_permutations(gens, degree, limit)
    bgens = [bytes(g) for g in gens]
    ident = bytes(range(d))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            pb = p
            for g in bgens:
                gb = g
                buf = bytearray(d)
                for x in range(d):
                    buf[x] = gb[pb[x]]
                q = bytes(buf)
                if q not in seen:
                    seen.add(q)
                    if len(seen) > limit:
                        return None
                    nxt.append(q)
        frontier = nxt
    return sorted(tuple(b) for b in seen)
