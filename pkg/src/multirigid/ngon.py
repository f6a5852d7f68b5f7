"""Combinatorics of k-triangulations of the convex n-gon.

Vertices are labelled 1..n.  A k-triangulation is stored by its relevant
edges only; the kn edges of length at most k belong to every facet.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

from . import _kernels
from .errors import (
    InternalInvariantViolation,
    InvalidParams,
    NotAFace,
    NotInTriangulation,
    NotRelevant,
    PreconditionFailed,
)

Edge = tuple[int, int]


def make_edge(i: int, j: int) -> Edge:
    if i == j:
        raise InvalidParams(f"degenerate edge {{{i},{j}}}")
    return (i, j) if i < j else (j, i)


def edge_length(e: Edge, n: int) -> int:
    d = e[1] - e[0]
    return min(d, n - d)


class EdgeClass(Enum):
    IRRELEVANT = "Irrelevant"
    BOUNDARY = "Boundary"
    RELEVANT = "Relevant"


def edge_class(e: Edge, n: int, k: int) -> EdgeClass:
    length = edge_length(e, n)
    if length > k:
        return EdgeClass.RELEVANT
    if length == k:
        return EdgeClass.BOUNDARY
    return EdgeClass.IRRELEVANT


def crossing(e: Edge, f: Edge) -> bool:
    """Whether two canonical edges cross as diagonals of the convex polygon."""
    i, j = e
    a, b = f
    return i < a < j < b or a < i < b < j


def format_edge(e: Edge) -> str:
    return f"{e[0]},{e[1]}"


def facet_size(n: int, k: int) -> int:
    return k * (2 * n - 2 * k - 1)


def relevant_dimension(n: int, k: int) -> int:
    return k * (n - 2 * k - 1)


def _check_params(n: int, k: int) -> None:
    if k < 1 or n < 2 * k + 1:
        raise InvalidParams(f"need k >= 1 and n >= 2k+1, got k={k}, n={n}")


@dataclass(frozen=True)
class Polygon:
    """Per-(n,k) tables: relevant edges in lex order and crossing bitmasks."""

    n: int
    k: int
    relevant: tuple[Edge, ...]
    fixed: tuple[Edge, ...]
    cross: tuple[int, ...] = field(repr=False)
    index: dict = field(repr=False, compare=False, hash=False)

    @property
    def dim(self) -> int:
        return relevant_dimension(self.n, self.k)

    def mask_of(self, edges: Iterable[Edge]) -> int:
        m = 0
        for e in edges:
            m |= 1 << self.index[e]
        return m

    def edges_of(self, mask: int) -> tuple[Edge, ...]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.relevant[low.bit_length() - 1])
            mask ^= low
        return tuple(out)


@lru_cache(maxsize=64)
def polygon(n: int, k: int) -> Polygon:
    _check_params(n, k)
    all_edges = list(itertools.combinations(range(1, n + 1), 2))
    relevant = tuple(e for e in all_edges if edge_length(e, n) > k)
    fixed = tuple(e for e in all_edges if edge_length(e, n) <= k)
    index = {e: i for i, e in enumerate(relevant)}
    cross = []
    for e in relevant:
        m = 0
        for idx, f in enumerate(relevant):
            if crossing(e, f):
                m |= 1 << idx
        cross.append(m)
    return Polygon(n, k, relevant, fixed, tuple(cross), index)


def has_crossing(edges: Iterable[Edge], size: int) -> bool:
    """Whether ``edges`` contain ``size`` pairwise-crossing members."""
    edges = sorted(set(edges))
    cross = []
    for e in edges:
        m = 0
        for idx, f in enumerate(edges):
            if crossing(e, f):
                m |= 1 << idx
        cross.append(m)
    return _kernels.has_clique((1 << len(edges)) - 1, size, cross)


@dataclass(frozen=True, order=True)
class KTriangulation:
    """A facet of the complex, identified by its sorted relevant edges."""

    n: int
    k: int
    relevant: tuple[Edge, ...]

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(polygon(self.n, self.k).fixed + self.relevant))

    @cached_property
    def mask(self) -> int:
        return polygon(self.n, self.k).mask_of(self.relevant)

    def __contains__(self, e: Edge) -> bool:
        return e in self.relevant or (
            e[0] != e[1] and edge_length(e, self.n) <= self.k
        )

    @classmethod
    def from_edges(cls, n: int, k: int, edges: Iterable[Edge]) -> "KTriangulation":
        rel = sorted({make_edge(*e) for e in edges if edge_length(make_edge(*e), n) > k})
        return cls(n, k, tuple(rel))

    @classmethod
    def from_mask(cls, n: int, k: int, mask: int) -> "KTriangulation":
        return cls(n, k, polygon(n, k).edges_of(mask))

    def is_valid(self) -> bool:
        poly = polygon(self.n, self.k)
        if len(self.relevant) != poly.dim or len(set(self.relevant)) != poly.dim:
            return False
        if any(e not in poly.index for e in self.relevant):
            return False
        return not _kernels.has_clique(self.mask, self.k + 1, poly.cross)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "relevant": [list(e) for e in self.relevant]}


def enumerate_facet_indices(
    n: int, k: int, start_after: Sequence[int] | None = None
) -> Iterator[tuple[int, ...]]:
    """Facets as sorted tuples of relevant-edge indices, in lex order."""
    poly = polygon(n, k)
    start = tuple(start_after) if start_after is not None else None
    return _kernels.enumerate_facets(poly.cross, k, poly.dim, start)


def enumerate_k_triangulations(
    n: int, k: int, start_after: KTriangulation | None = None
) -> Iterator[KTriangulation]:
    """All k-triangulations of the n-gon, lexicographic in relevant edges.

    With ``start_after`` the stream resumes strictly after that facet.
    """
    _check_params(n, k)
    poly = polygon(n, k)
    start = None
    if start_after is not None:
        start = [poly.index[e] for e in start_after.relevant]
    rel = poly.relevant
    for idx in enumerate_facet_indices(n, k, start):
        yield KTriangulation(n, k, tuple(rel[i] for i in idx))


def catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


def catalan_hankel_count(n: int, k: int) -> int:
    """det(C_{n-i-j})_{1<=i,j<=k}: the number of k-triangulations."""
    _check_params(n, k)
    return _kernels.det([[catalan(n - i - j) for j in range(1, k + 1)] for i in range(1, k + 1)])


@dataclass(frozen=True)
class Star:
    """A k-star; vertices in increasing (hence cyclic) order."""

    vertices: tuple[int, ...]

    @property
    def k(self) -> int:
        return (len(self.vertices) - 1) // 2

    @cached_property
    def edges(self) -> frozenset[Edge]:
        s, k, m = self.vertices, self.k, len(self.vertices)
        return frozenset(make_edge(s[i], s[(i + k) % m]) for i in range(m))

    def bisectors(self, n: int) -> frozenset[Edge]:
        """Edges from a star vertex into the open arc facing its angle."""
        s, k, m = self.vertices, self.k, len(self.vertices)
        out = set()
        for i in range(m):
            a, b = s[(i + k) % m], s[(i + k + 1) % m]
            v = a % n + 1
            while v != b:
                out.add(make_edge(s[i], v))
                v = v % n + 1
        return frozenset(out)


def stars_of(T: KTriangulation) -> list[Star]:
    n, k = T.n, T.k
    edge_set = set(T.edges)
    stars = []
    for verts in itertools.combinations(range(1, n + 1), 2 * k + 1):
        st = Star(verts)
        if st.edges <= edge_set:
            stars.append(st)
    if len(stars) != n - 2 * k:
        raise InternalInvariantViolation(f"found {len(stars)} stars, expected {n - 2 * k}")
    for e in T.edges:
        count = sum(e in st.edges for st in stars)
        expected = {EdgeClass.RELEVANT: 2, EdgeClass.BOUNDARY: 1, EdgeClass.IRRELEVANT: 0}[
            edge_class(e, n, k)
        ]
        if count != expected:
            raise InternalInvariantViolation(f"edge {e} lies in {count} stars, expected {expected}")
    return stars


@dataclass(frozen=True)
class Flip:
    source: KTriangulation
    removed: Edge
    inserted: Edge

    @cached_property
    def target(self) -> KTriangulation:
        rel = sorted(set(self.source.relevant) - {self.removed} | {self.inserted})
        return KTriangulation(self.source.n, self.source.k, tuple(rel))

    @property
    def key(self) -> tuple[tuple[Edge, ...], tuple[Edge, Edge]]:
        """Canonical key shared by a flip and its reverse."""
        common = tuple(e for e in self.source.relevant if e != self.removed)
        pair = tuple(sorted((self.removed, self.inserted)))
        return common, pair


def _check_flippable(T: KTriangulation, e: Edge) -> None:
    if edge_length(e, T.n) <= T.k:
        raise NotRelevant(f"edge {e} has length <= {T.k}")
    if e not in T.relevant:
        raise NotInTriangulation(f"edge {e} is not in the triangulation")


def flip(T: KTriangulation, e: Edge) -> Flip:
    """The unique flip removing ``e``, computed from the two stars at ``e``."""
    e = make_edge(*e)
    _check_flippable(T, e)
    at_e = [st for st in stars_of(T) if e in st.edges]
    if len(at_e) != 2:
        raise InternalInvariantViolation(f"relevant edge {e} lies in {len(at_e)} stars")
    common = at_e[0].bisectors(T.n) & at_e[1].bisectors(T.n)
    if len(common) != 1:
        raise InternalInvariantViolation(f"stars at {e} share {len(common)} bisectors")
    result = Flip(T, e, next(iter(common)))
    if not result.target.is_valid():
        raise InternalInvariantViolation(f"flip of {e} did not produce a k-triangulation")
    return result


def flip_fast(T: KTriangulation, e: Edge) -> Flip:
    """Same as ``flip`` but via the crossing table (no star computation)."""
    e = make_edge(*e)
    _check_flippable(T, e)
    poly = polygon(T.n, T.k)
    f = _kernels.flip_partner(T.mask, poly.index[e], poly.cross, T.k)
    if f < 0:
        raise InternalInvariantViolation(f"no flip partner for {e}")
    return Flip(T, e, poly.relevant[f])


@dataclass(frozen=True)
class ElementaryCycle:
    center: tuple[Edge, ...]
    vertices: tuple[Edge, ...]
    facets: tuple[KTriangulation, ...]

    def __len__(self) -> int:
        return len(self.vertices)


def elementary_cycle(T: KTriangulation, e: Edge, f: Edge) -> ElementaryCycle:
    """Link of the codimension-two face T minus {e, f}, walked by flips."""
    e, f = make_edge(*e), make_edge(*f)
    for x in (e, f):
        _check_flippable(T, x)
    if e == f:
        raise InvalidParams("the two edges must differ")
    n, k = T.n, T.k
    center = tuple(x for x in T.relevant if x not in (e, f))
    verts = [e, f]
    facet = T
    for _ in range(6):
        fl = flip_fast(facet, verts[-2])
        facet = fl.target
        if fl.inserted == verts[0]:
            break
        verts.append(fl.inserted)
    else:
        raise NotAFace(f"walk around {center} did not close")
    m = len(verts)
    if m not in (3, 4, 5):
        raise NotAFace(f"link of {center} has length {m}")
    facets = tuple(
        KTriangulation(n, k, tuple(sorted(center + (verts[i], verts[(i + 1) % m]))))
        for i in range(m)
    )
    return ElementaryCycle(center, tuple(verts), facets)


def greedy_triangulation(n: int, k: int) -> KTriangulation:
    _check_params(n, k)
    rel = [(i, j) for i in range(1, k + 1) for j in range(k + 1, n + 1) if edge_length((i, j), n) > k]
    return KTriangulation(n, k, tuple(sorted(rel)))


# --- flattening and inflation (k = 2) ---------------------------------------


def _rotation(n: int, shift: int):
    """Relabelling x -> x + shift (mod n, labels 1..n)."""
    return lambda x: (x - 1 + shift) % n + 1


def _external_star(T: KTriangulation, boundary: Edge) -> Star:
    for st in stars_of(T):
        if boundary in st.edges:
            return st
    raise PreconditionFailed(f"no star contains {boundary}")


def flatten(T: KTriangulation, boundary_edge: Edge) -> KTriangulation:
    """Flatten the external star on a length-2 boundary edge (k = 2).

    The middle vertex v of the boundary edge is removed; labels above v
    shift down by one.
    """
    return flatten_with_crossing(T, boundary_edge)[0]


def flatten_with_crossing(
    T: KTriangulation, boundary_edge: Edge
) -> tuple[KTriangulation, tuple[Edge, Edge], int]:
    """``flatten`` plus the 2-crossing that replaced the star and the removed vertex.

    ``inflate(T2, pair, new_vertex=v)`` on the output restores ``T``.
    """
    if T.k != 2:
        raise InvalidParams("flattening is defined for k = 2 only")
    N = T.n
    n = N - 1
    e = make_edge(*boundary_edge)
    if edge_length(e, N) != 2:
        raise PreconditionFailed(f"{e} is not a boundary edge")
    v = e[0] + 1 if e[1] - e[0] == 2 else e[1] % N + 1
    star = _external_star(T, e)
    # Work in labels where v is n+1, its neighbours are n and 1.
    to_local = _rotation(N, N - v)
    local_star = sorted(to_local(x) for x in star.vertices)
    if local_star[0] != 1 or local_star[-2:] != [n, N]:
        raise PreconditionFailed(f"star {star.vertices} is not external at {e}")
    b, c = local_star[1], local_star[2]
    star_local = {make_edge(to_local(x), to_local(y)) for x, y in star.edges}
    out = set()
    for x in T.relevant:
        le = make_edge(to_local(x[0]), to_local(x[1]))
        if le in star_local:
            continue
        i, j = le
        if j == N:
            if i < b:
                le = (i, n)
            elif i > c:
                le = (1, i)
            else:
                raise InternalInvariantViolation(f"edge {le} outside the flattening domain")
        out.add(le)
    for x in ((b, n), (1, c)):
        if edge_length(x, n) > 2:
            out.add(x)
    # local label x (1..n) corresponds to original label v + x (mod N),
    # then v is deleted and later labels shift down.
    def to_global(x: int) -> int:
        g = (v - 1 + x) % N + 1
        return g if g < v else g - 1

    result = KTriangulation.from_edges(n, 2, (make_edge(to_global(i), to_global(j)) for i, j in out))
    if not result.is_valid():
        raise InternalInvariantViolation("flattening produced an invalid 2-triangulation")
    pair = tuple(make_edge(to_global(i), to_global(j)) for i, j in ((b, n), (1, c)))
    return result, pair, v


def inflate(
    T: KTriangulation, crossing_pair: tuple[Edge, Edge], new_vertex: int | None = None
) -> KTriangulation:
    """Inverse of ``flatten`` (k = 2).

    ``crossing_pair`` is {u,b}, {w,c} where u, w are cyclically consecutive
    (w = u+1) and the edges cross; a new vertex is inserted between u and w.
    It is labelled u+1, except that for u = n it may be labelled 1 instead
    of n+1 by passing ``new_vertex=1``.
    """
    if T.k != 2:
        raise InvalidParams("inflation is defined for k = 2 only")
    n = T.n
    N = n + 1
    e1, e2 = (make_edge(*x) for x in crossing_pair)
    if not crossing(e1, e2):
        raise PreconditionFailed("the two edges must cross")
    candidates = []
    for eu, ew in ((e1, e2), (e2, e1)):
        for u in eu:
            w = u % n + 1
            if w not in ew or w in eu or u in ew:
                continue
            to_local = _rotation(n, n - u)  # u -> n, w -> 1
            b = to_local(eu[0] + eu[1] - u)
            c = to_local(ew[0] + ew[1] - w)
            if 1 < b < c < n:
                candidates.append((u, w, b, c, to_local))
    if new_vertex is not None:
        candidates = [x for x in candidates if new_vertex == x[0] + 1 or (x[0] == n and new_vertex == 1)]
    if len(candidates) != 1:
        raise PreconditionFailed(f"edges do not determine a unique external 2-crossing ({len(candidates)} options)")
    u, w, b, c, to_local = candidates[0]
    cset = {(b, n), (1, c)}
    out = set()
    for x in T.relevant:
        le = make_edge(to_local(x[0]), to_local(x[1]))
        if le in cset:
            continue
        i, j = le
        if j == n and i < b:
            le = (i, N)
        elif i == 1 and j > c:
            le = (j, N)
        out.add(le)
    star = Star((1, b, c, n, N))
    out |= {x for x in star.edges if edge_length(x, N) > 2}
    if new_vertex is None:
        new_vertex = u + 1
    shift_all = u == n and new_vertex == 1
    if new_vertex != u + 1 and not shift_all:
        raise PreconditionFailed(f"new vertex {new_vertex} does not sit between {u} and {w}")

    # local label x corresponds to original label u + x (mod n); N is new.
    def to_global(x: int) -> int:
        if x == N:
            return new_vertex
        g = (u - 1 + x) % n + 1
        return g + 1 if shift_all or g > u else g

    result = KTriangulation.from_edges(N, 2, (make_edge(to_global(i), to_global(j)) for i, j in out))
    if not result.is_valid():
        raise InternalInvariantViolation("inflation produced an invalid 2-triangulation")
    return result


# --- flip graph --------------------------------------------------------------


class FlipGraph:
    """All facets of one (n,k) complex with their flip adjacency.

    ``neighbors[a][p] = (b, g)`` means flipping the p-th relevant edge of
    facet a yields facet b with inserted edge index g.
    """

    def __init__(self, n: int, k: int):
        _check_params(n, k)
        self.n, self.k = n, k
        self.poly = polygon(n, k)
        self.facets: list[tuple[int, ...]] = list(enumerate_facet_indices(n, k))
        self.masks = [sum(1 << i for i in f) for f in self.facets]
        self.index = {m: a for a, m in enumerate(self.masks)}
        oracle = _kernels.flip_oracle(self.poly.cross, k)
        nb = []
        for a, (fac, m) in enumerate(zip(self.facets, self.masks)):
            row = []
            for e in fac:
                g = oracle(m, e)
                if g < 0:
                    raise InternalInvariantViolation(f"facet {a} has no flip at edge {e}")
                row.append((self.index[(m & ~(1 << e)) | (1 << g)], g))
            nb.append(row)
        self.neighbors: list[list[tuple[int, int]]] = nb

    def __len__(self) -> int:
        return len(self.facets)

    def triangulation(self, a: int) -> KTriangulation:
        return KTriangulation(self.n, self.k, tuple(self.poly.relevant[i] for i in self.facets[a]))

    def flips(self) -> Iterator[tuple[int, int, int, int]]:
        """Each flip once as (a, e, b, g): facet a loses e, facet b loses g; a < b."""
        for a, row in enumerate(self.neighbors):
            for e, (b, g) in zip(self.facets[a], row):
                if a < b:
                    yield a, e, b, g

    def n_flips(self) -> int:
        return len(self) * self.poly.dim // 2


@lru_cache(maxsize=8)
def flip_graph(n: int, k: int) -> FlipGraph:
    return FlipGraph(n, k)
