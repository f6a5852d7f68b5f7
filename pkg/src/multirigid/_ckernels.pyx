# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``.

Bitmask kernels run on uint64 words and fall back to the Python versions
when an instance has more than 64 relevant edges.  Arithmetic kernels keep
Python integers (exactness) but drop interpreter overhead in the loops.
"""

from libc.stdint cimport uint64_t

from . import _pykernels

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil
    int ctz64 "__builtin_ctzll"(unsigned long long) nogil

cdef enum:
    MAXR = 64


cdef bint _clique(uint64_t mask, int size, const uint64_t* cross) noexcept nogil:
    cdef int c
    if size <= 0:
        return True
    if popcount64(mask) < size:
        return False
    if size == 1:
        return True
    while mask:
        c = ctz64(mask)
        mask &= mask - 1
        if _clique(mask & cross[c], size - 1, cross):
            return True
        if popcount64(mask) < size:
            return False
    return False


cdef class _FacetIter:
    cdef uint64_t cross[MAXR]
    cdef uint64_t S[MAXR + 1]
    cdef int chosen[MAXR]
    cdef int nxt[MAXR]
    cdef int R, D, k, depth
    cdef bint empty_pending

    def __init__(self, cross, int k, int D, start):
        cdef int d, c
        self.R = len(cross)
        self.D = D
        self.k = k
        for c in range(self.R):
            self.cross[c] = <uint64_t>cross[c]
        self.S[0] = 0
        self.empty_pending = D == 0 and start is None
        if D == 0:
            self.depth = -1
            return
        if start is None:
            self.depth = 0
            self.nxt[0] = 0
        else:
            for d in range(D):
                c = start[d]
                self.chosen[d] = c
                self.nxt[d] = c + 1
                self.S[d + 1] = self.S[d] | ((<uint64_t>1) << c)
            self.depth = D - 1

    def __iter__(self):
        return self

    def __next__(self):
        cdef int c, limit, depth, D = self.D
        cdef uint64_t base
        if self.empty_pending:
            self.empty_pending = False
            return ()
        depth = self.depth
        while depth >= 0:
            c = self.nxt[depth]
            limit = self.R - (D - depth)
            base = self.S[depth]
            while c <= limit:
                if not _clique(base & self.cross[c], self.k, self.cross):
                    break
                c += 1
            if c > limit:
                depth -= 1
                continue
            self.chosen[depth] = c
            self.nxt[depth] = c + 1
            self.S[depth + 1] = base | ((<uint64_t>1) << c)
            if depth == D - 1:
                self.depth = depth
                return tuple([self.chosen[i] for i in range(D)])
            depth += 1
            self.nxt[depth] = c + 1
        self.depth = -1
        raise StopIteration


def has_clique(mask, int size, cross):
    cdef uint64_t cr[MAXR]
    cdef int c, R = len(cross)
    if R > MAXR:
        return _pykernels.has_clique(mask, size, cross)
    for c in range(R):
        cr[c] = <uint64_t>cross[c]
    return _clique(<uint64_t>mask, size, cr)


def enumerate_facets(cross, int k, int depth_total, start=None):
    if len(cross) > MAXR:
        return _pykernels.enumerate_facets(cross, k, depth_total, start)
    return _FacetIter(cross, k, depth_total, start)


cdef class FlipOracle:
    """Holds the crossing table once; answers many flip queries."""
    cdef uint64_t cross[MAXR]
    cdef int R, k

    def __init__(self, cross, int k):
        cdef int c
        self.R = len(cross)
        if self.R > MAXR:
            raise ValueError("too many edges for the compiled flip oracle")
        self.k = k
        for c in range(self.R):
            self.cross[c] = <uint64_t>cross[c]

    def partner(self, mask, int e):
        cdef uint64_t m = <uint64_t>mask
        cdef uint64_t rest = m & ~((<uint64_t>1) << e)
        cdef uint64_t cand = self.cross[e] & ~m
        cdef int f
        while cand:
            f = ctz64(cand)
            cand &= cand - 1
            if not _clique(rest & self.cross[f], self.k, self.cross):
                return f
        return -1


def flip_partner(mask, int e, cross, int k):
    if len(cross) > MAXR:
        return _pykernels.flip_partner(mask, e, cross, k)
    return FlipOracle(cross, k).partner(mask, e)


def det(rows):
    cdef list M = [list(r) for r in rows]
    cdef Py_ssize_t n = len(M), p, i, j
    cdef list rp, ri
    cdef object pk, a, prev = 1
    cdef int sign = 1
    if n == 0:
        return 1
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


def solve(vectors, rhs):
    cdef Py_ssize_t n = len(vectors), p, i, j, g, r
    cdef list M = [[vectors[g][r] for g in range(n)] + [rhs[r]] for r in range(n)]
    cdef list rp, ri
    cdef object pk, a, prev = 1
    cdef int sign = 1
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


def first_positive(u, columns, skip):
    cdef Py_ssize_t j, m = len(columns)
    cdef object s
    for j in range(m):
        if skip[j]:
            continue
        s = 0
        for r, v in columns[j]:
            s += u[r] * v
        if s > 0:
            return j
    return -1


def best_positive(u, columns, skip):
    cdef Py_ssize_t j, best = -1, m = len(columns)
    cdef object s, best_val = 0
    for j in range(m):
        if skip[j]:
            continue
        s = 0
        for r, v in columns[j]:
            s += u[r] * v
        if s > best_val:
            best = j
            best_val = s
    return best
