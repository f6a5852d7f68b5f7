"""Pure-Python reference implementations of the hot kernels.

Every function here has a twin in ``_ckernels.pyx`` with identical
semantics; ``_kernels`` picks one at import time.
"""

from __future__ import annotations

from typing import Iterator, Sequence


def has_clique(mask: int, size: int, cross: Sequence[int]) -> bool:
    """True iff the bitmask ``mask`` contains ``size`` pairwise-crossing edges."""
    if size <= 0:
        return True
    if mask.bit_count() < size:
        return False
    if size == 1:
        return True
    while mask:
        low = mask & -mask
        c = low.bit_length() - 1
        mask ^= low
        if has_clique(mask & cross[c], size - 1, cross):
            return True
        if mask.bit_count() < size:
            return False
    return False


def enumerate_facets(
    cross: Sequence[int], k: int, depth_total: int, start: Sequence[int] | None = None
) -> Iterator[tuple[int, ...]]:
    """Lexicographic DFS over ``depth_total``-subsets with no (k+1)-crossing.

    Subsets are tuples of sorted edge indices.  With ``start`` given, the
    stream resumes strictly after that subset.
    """
    R = len(cross)
    D = depth_total
    if D == 0:
        if start is None:
            yield ()
        return
    chosen = [0] * D
    nxt = [0] * D
    S = [0] * (D + 1)
    if start is None:
        depth = 0
    else:
        for d, c in enumerate(start):
            chosen[d] = c
            nxt[d] = c + 1
            S[d + 1] = S[d] | (1 << c)
        depth = D - 1
    while depth >= 0:
        c = nxt[depth]
        limit = R - (D - depth)
        base = S[depth]
        while c <= limit:
            if not has_clique(base & cross[c], k, cross):
                break
            c += 1
        if c > limit:
            depth -= 1
            continue
        chosen[depth] = c
        nxt[depth] = c + 1
        S[depth + 1] = base | (1 << c)
        if depth == D - 1:
            yield tuple(chosen)
        else:
            depth += 1
            nxt[depth] = c + 1


def flip_partner(mask: int, e: int, cross: Sequence[int], k: int) -> int:
    """Index of the edge inserted when flipping out ``e`` from facet ``mask``.

    Returns -1 if no candidate works (which signals a bug upstream).
    """
    rest = mask & ~(1 << e)
    cand = cross[e] & ~mask
    while cand:
        low = cand & -cand
        f = low.bit_length() - 1
        cand ^= low
        if not has_clique(rest & cross[f], k, cross):
            return f
    return -1


def det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    M = [list(r) for r in rows]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for p in range(n - 1):
        if M[p][p] == 0:
            for i in range(p + 1, n):
                if M[i][p] != 0:
                    M[p], M[i] = M[i], M[p]
                    sign = -sign
                    break
            else:
                return 0
        rp = M[p]
        pk = rp[p]
        for i in range(p + 1, n):
            ri = M[i]
            a = ri[p]
            if a == 0:
                for j in range(p + 1, n):
                    ri[j] = ri[j] * pk // prev
            else:
                for j in range(p + 1, n):
                    ri[j] = (ri[j] * pk - a * rp[j]) // prev
        prev = pk
    return sign * M[n - 1][n - 1]


def solve(vectors: Sequence[Sequence[int]], rhs: Sequence[int]) -> tuple[int, list[int]]:
    """Solve ``sum_g x_g * vectors[g] == rhs`` for square integer data.

    Returns ``(det, nums)`` with ``x_g = nums[g] / det``; ``det`` is the
    determinant of the matrix whose columns are ``vectors``.  A zero
    ``det`` means the vectors are dependent and ``nums`` is empty.
    """
    n = len(vectors)
    # Augmented matrix whose columns are the vectors, then rhs.
    M = [[vectors[g][r] for g in range(n)] + [rhs[r]] for r in range(n)]
    sign = 1
    prev = 1
    for p in range(n):
        if M[p][p] == 0:
            for i in range(p + 1, n):
                if M[i][p] != 0:
                    M[p], M[i] = M[i], M[p]
                    sign = -sign
                    break
            else:
                return 0, []
        rp = M[p]
        pk = rp[p]
        for i in range(n):
            if i == p:
                continue
            ri = M[i]
            a = ri[p]
            for j in range(n + 1):
                if j == p:
                    continue
                ri[j] = (ri[j] * pk - a * rp[j]) // prev
            ri[p] = 0
        prev = pk
    d = M[n - 1][n - 1] if n else 1
    return sign * d, [sign * M[i][n] for i in range(n)]


def first_positive(u: Sequence[int], columns: Sequence[Sequence[tuple[int, int]]], skip: Sequence[bool]) -> int:
    """First index j (not skipped) whose sparse column has positive dot with u."""
    for j, col in enumerate(columns):
        if skip[j]:
            continue
        s = 0
        for r, v in col:
            s += u[r] * v
        if s > 0:
            return j
    return -1


def best_positive(u: Sequence[int], columns: Sequence[Sequence[tuple[int, int]]], skip: Sequence[bool]) -> int:
    """Index j (not skipped) maximizing a positive sparse dot with u; ties to the smallest j."""
    best = -1
    best_val = 0
    for j, col in enumerate(columns):
        if skip[j]:
            continue
        s = 0
        for r, v in col:
            s += u[r] * v
        if s > best_val:
            best, best_val = j, s
    return best
