"""Geometric obstructions for cofactor realizations with points in convex position.

* Six points: orientation of the triangle cut out by the long chords 14, 25, 36
  (Positive, Negative, or concurrent = Desargues) and its agreement with the
  signs of the unique dependence of K6 minus {25, 36} in cofactor 3-rigidity.
* n = 2k+3: the relevant star has non-empty interior iff the open "big"
  half-planes of the 2k+3 relevant edges intersect.
* n = 2k+6, k >= 3: two (2k+3)-point subconfigurations place opposite
  orientation requirements on the same six points.

Points are 1-based and assumed to be listed in cyclic order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath

from .errors import InternalInvariantViolation, InvalidParams, NotConvex, RankUnexpected
from .linalg import clear_denominators, rank, sign_changes, unique_dependence
from .ngon import Edge, format_edge
from .rigidity import PlanarConfig, build_cofactor, format_rational
from .simplex import FeasibleResult, solve_strict

Point = tuple[Fraction, Fraction]


def regular_polygon(n: int, bits: int = 64) -> PlanarConfig:
    """Rational points close to the regular n-gon on the unit circle, counter-clockwise.

    Uses the rational parametrization ((1-s^2)/(1+s^2), 2s/(1+s^2)) with s a
    close rational approximation of tan(theta/2), so the points lie exactly
    on the circle and are in convex position.
    """
    if n < 3:
        raise InvalidParams("need n >= 3")
    pts = []
    with mpmath.workprec(4 * bits + 32):
        for i in range(n):
            theta = 2 * mpmath.pi * i / n - mpmath.pi
            half = theta / 2
            if abs(mpmath.cos(half)) < mpmath.mpf(2) ** (-bits):
                pts.append((Fraction(-1), Fraction(0)))
                continue
            s = Fraction(int(mpmath.nint(mpmath.tan(half) * (1 << bits))), 1 << bits)
            den = 1 + s * s
            pts.append(((1 - s * s) / den, 2 * s / den))
    return PlanarConfig(tuple(pts))


def _config(q) -> PlanarConfig:
    if isinstance(q, PlanarConfig):
        return q
    return PlanarConfig(tuple(tuple(p) for p in q))


def _require_convex(q: PlanarConfig) -> None:
    if not q.is_convex():
        raise NotConvex("points are not in strictly convex position in the given cyclic order")


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _line(a: Point, b: Point) -> tuple[Fraction, Fraction, Fraction]:
    """Homogeneous coefficients (u, v, w) of the line through a and b: u x + v y + w = 0."""
    return (a[1] - b[1], b[0] - a[0], a[0] * b[1] - a[1] * b[0])


def _det3(r1, r2, r3) -> Fraction:
    return (
        r1[0] * (r2[1] * r3[2] - r2[2] * r3[1])
        - r1[1] * (r2[0] * r3[2] - r2[2] * r3[0])
        + r1[2] * (r2[0] * r3[1] - r2[1] * r3[0])
    )


def _side(line, p: Point) -> int:
    return _sign(line[0] * p[0] + line[1] * p[1] + line[2])


# ---------------------------------------------------------------------------
# Six points: Desargues position and the Morgan-Scott dependence


class OrientationClass(Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    DESARGUES = "Desargues"


def desargues_class(q) -> OrientationClass:
    """Position of the point 14 x 36 relative to line 25.

    Positive when it lies strictly on the side of line 25 not containing q1
    and q6, Negative when it lies on their side, Desargues when the three
    lines are concurrent.  With L_ij the homogeneous line through q_i, q_j,
    the intersection is X = L14 x L36 and det(L14, L25, L36) = -L25 . X, so a
    single 3x3 determinant decides the class.  The chords 14 and 36 cross
    inside the hexagon, so X is a finite point.
    """
    q = _config(q)
    if q.n != 6:
        raise InvalidParams("desargues_class needs exactly six points")
    _require_convex(q)
    p = q.q
    l14, l25, l36 = _line(p[0], p[3]), _line(p[1], p[4]), _line(p[2], p[5])
    det = _det3(l14, l25, l36)
    if det == 0:
        return OrientationClass.DESARGUES
    # X = l14 x l36; its affine weight is the z-coordinate.
    xw = l14[0] * l36[1] - l14[1] * l36[0]
    if xw == 0:
        raise InternalInvariantViolation("chords 14 and 36 are parallel in a convex hexagon")
    side_x = _sign(-det) * _sign(xw)
    side_1 = _side(l25, p[0])
    return OrientationClass.NEGATIVE if side_x == side_1 else OrientationClass.POSITIVE


@dataclass(frozen=True)
class MorganScottSigns:
    """Unique dependence of K6 minus {25, 36} in cofactor 3-rigidity."""

    dependence: dict[Edge, Fraction]
    sign: int  # sign of lambda_14 * lambda_15

    @property
    def orientation(self) -> OrientationClass:
        return {1: OrientationClass.POSITIVE, -1: OrientationClass.NEGATIVE, 0: OrientationClass.DESARGUES}[self.sign]

    def to_json(self) -> dict:
        return {
            "dependence": {format_edge(e): format_rational(v) for e, v in sorted(self.dependence.items())},
            "sign": self.sign,
            "orientation": self.orientation.value,
        }


MORGAN_SCOTT_EDGES: tuple[Edge, ...] = tuple(
    e for e in itertools.combinations(range(1, 7), 2) if e not in ((2, 5), (3, 6))
)


def morgan_scott_signs(q) -> MorganScottSigns:
    """sign(lambda_14 * lambda_15) for the unique dependence of K6 minus {25, 36}."""
    q = _config(q)
    if q.n != 6:
        raise InvalidParams("morgan_scott_signs needs exactly six points")
    rows = build_cofactor(q, 3).rows(MORGAN_SCOTT_EDGES)
    r = rank(rows)
    if r != len(MORGAN_SCOTT_EDGES) - 1:
        raise RankUnexpected(f"K6 minus {{25,36}} has rank {r}, expected {len(MORGAN_SCOTT_EDGES) - 1}")
    dep = unique_dependence(rows)
    lam = dict(dep.coefficients)
    if lam.get((1, 5), 0) == 0:
        raise InternalInvariantViolation("lambda_15 vanishes")
    return MorganScottSigns(lam, _sign(lam.get((1, 4), 0) * lam[(1, 5)]))


# ---------------------------------------------------------------------------
# Sign changes of cofactor dependences


def vertex_sign_sequence(lam: Mapping[Edge, object], n: int, i: int, d: int) -> list:
    """Coefficients at vertex i in cyclic order i+1, ..., n, 1, ..., i-1.

    For odd d the entries with j > i are negated.
    """
    out = []
    for step in range(1, n):
        j = (i - 1 + step) % n + 1
        e = (min(i, j), max(i, j))
        v = lam.get(e, 0)
        out.append(-v if d % 2 == 1 and j > i else v)
    return out


def sign_change_violations(lam: Mapping[Edge, object], n: int, d: int) -> list[int]:
    """Vertices in the support whose sequence changes sign fewer than d times.

    A dependence of the cofactor matrix C_d of points in convex position has
    none (each vertex sequence is a dependence of a cyclic configuration).
    """
    bad = []
    for i in range(1, n + 1):
        seq = vertex_sign_sequence(lam, n, i, d)
        if any(seq) and sign_changes(seq) < d:
            bad.append(i)
    return bad


# ---------------------------------------------------------------------------
# n = 2k+3: the relevant star


def relevant_star(k: int) -> list[Edge]:
    """Relevant edges {a, a+k+1} of the (2k+3)-gon, sorted."""
    n = 2 * k + 3
    return sorted((min(a, (a + k) % n + 1), max(a, (a + k) % n + 1)) for a in range(1, n + 1))


def big_half_plane(q: PlanarConfig, e: Edge, k: int) -> tuple[Fraction, Fraction, Fraction]:
    """(u, v, w) with the open big half-plane of e equal to {u x + v y + w > 0}.

    The orientation is chosen by counting: the big side holds k+1 points.
    """
    i, j = e
    line = _line(q.q[i - 1], q.q[j - 1])
    pos = sum(1 for p in q.q if _side(line, p) > 0)
    neg = sum(1 for p in q.q if _side(line, p) < 0)
    if {pos, neg} != {k, k + 1}:
        raise InvalidParams(f"edge {format_edge(e)} does not split the points k : k+1")
    return line if pos == k + 1 else tuple(-c for c in line)


def _open_half_planes_meet(planes: Sequence[tuple[Fraction, Fraction, Fraction]]) -> bool:
    """Exact test for two or three open half-planes a.x + c > 0.

    By Motzkin's alternative they are disjoint iff some y >= 0, y != 0, has
    sum y_i a_i = 0 and sum y_i c_i <= 0.  Minimal such y have support of
    size two (antiparallel normals) or three.
    """
    for i, j in itertools.combinations(range(len(planes)), 2):
        (ui, vi, ci), (uj, vj, cj) = planes[i], planes[j]
        if ui * vj - vi * uj == 0:
            dot = ui * uj + vi * vj
            if dot < 0:
                mu = -dot / (uj * uj + vj * vj)  # a_i = -mu a_j
                if ci + mu * cj <= 0:
                    return False
    if len(planes) == 3:
        a = [(u, v) for u, v, _ in planes]
        y = (
            a[1][0] * a[2][1] - a[1][1] * a[2][0],
            a[2][0] * a[0][1] - a[2][1] * a[0][0],
            a[0][0] * a[1][1] - a[0][1] * a[1][0],
        )
        for s in (1, -1):
            ys = [s * x for x in y]
            if all(x > 0 for x in ys):
                if sum(yi * p[2] for yi, p in zip(ys, planes)) <= 0:
                    return False
    return True


@dataclass(frozen=True)
class StarInteriorResult:
    nonempty: bool
    witness: Point | None = None
    violating_triple: tuple[Edge, Edge, Edge] | None = None

    def to_json(self) -> dict:
        return {
            "nonempty": self.nonempty,
            "witnessPoint": None if self.witness is None else [format_rational(c) for c in self.witness],
            "violatingTriple": None if self.violating_triple is None else [format_edge(e) for e in self.violating_triple],
        }


def is_octahedral_triple(edges: Sequence[Edge], k: int) -> bool:
    """Three relevant edges of the (2k+3)-gon whose removal leaves three even, non-empty star paths."""
    star = star_order(k)
    pos = sorted(star.index(e) for e in edges)
    m = len(star)
    gaps = [pos[1] - pos[0] - 1, pos[2] - pos[1] - 1, m - pos[2] + pos[0] - 1]
    return all(g > 0 and g % 2 == 0 for g in gaps)


def star_order(k: int) -> list[Edge]:
    """Relevant edges in star order: {a, a+k+1} follows {a-k-1, a}."""
    n = 2 * k + 3
    out = []
    a = 1
    for _ in range(n):
        b = (a + k) % n + 1
        out.append((min(a, b), max(a, b)))
        a = b
    return out


def star_interior_test(q, k: int) -> StarInteriorResult:
    """Do the open big half-planes of all 2k+3 relevant edges intersect?

    The barycenter is tried first; otherwise the question is decided
    exactly as the strict LP {a.x + c t > 0, t > 0}.  On emptiness a
    violating triple is found by Helly's theorem, and it is always the set
    of missing edges of an octahedral k-triangulation.
    """
    q = _config(q)
    if k < 1 or q.n != 2 * k + 3:
        raise InvalidParams(f"star_interior_test needs 2k+3 = {2 * k + 3} points, got {q.n}")
    _require_convex(q)
    edges = relevant_star(k)
    planes = [big_half_plane(q, e, k) for e in edges]
    n = q.n
    center = (sum(p[0] for p in q.q) / n, sum(p[1] for p in q.q) / n)
    if all(p[0] * center[0] + p[1] * center[1] + p[2] > 0 for p in planes):
        return StarInteriorResult(True, center, None)
    rows = [clear_denominators(p) for p in planes] + [[0, 0, 1]]
    res = solve_strict(rows)
    if isinstance(res, FeasibleResult):
        f = res.f
        witness = (f[0] / f[2], f[1] / f[2])
        if not all(p[0] * witness[0] + p[1] * witness[1] + p[2] > 0 for p in planes):
            raise InternalInvariantViolation("star interior witness failed verification")
        return StarInteriorResult(True, witness, None)
    for idx in itertools.combinations(range(len(edges)), 3):
        if not _open_half_planes_meet([planes[i] for i in idx]):
            triple = tuple(edges[i] for i in idx)
            if not is_octahedral_triple(triple, k):
                raise InternalInvariantViolation("violating triple is not octahedral")
            return StarInteriorResult(False, None, triple)
    raise InternalInvariantViolation("empty star without a violating triple contradicts Helly's theorem")


# ---------------------------------------------------------------------------
# n = 2k+6: the impossibility witness


@dataclass(frozen=True)
class ImpossibilityWitness:
    k: int
    I1: tuple[int, ...]
    I2: tuple[int, ...]
    six: tuple[int, ...]
    orientation: OrientationClass
    required: tuple[OrientationClass, OrientationClass]  # for I1, for I2
    star1: StarInteriorResult
    star2: StarInteriorResult

    @property
    def conflict(self) -> bool:
        """At most one requirement is met and some subconfiguration fails the star test."""
        met = sum(1 for r in self.required if r == self.orientation)
        return met <= 1 and not (self.star1.nonempty and self.star2.nonempty)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": 2 * self.k + 6,
            "I1": list(self.I1),
            "I2": list(self.I2),
            "sixPoints": list(self.six),
            "orientation": self.orientation.value,
            "requiredI1": self.required[0].value,
            "requiredI2": self.required[1].value,
            "starI1": self.star1.to_json(),
            "starI2": self.star2.to_json(),
            "conflict": self.conflict,
        }


def impossibility_witness(q, k: int) -> ImpossibilityWitness:
    """Opposite orientation requirements of two (2k+3)-point subconfigurations.

    Removing {4, k+5, k+9} or {2, 6, k+7} from 2k+6 convex points leaves
    configurations where {1, k+4}, {3, k+6}, {5, k+8} are the missing edges
    of an octahedral k-triangulation.  Their big half-planes meet only if the
    six endpoints are Negative (first) respectively Positive (second).
    """
    if k < 3:
        raise InvalidParams("the 2k+6 obstruction needs k >= 3")
    q = _config(q)
    n = 2 * k + 6
    if q.n != n:
        raise InvalidParams(f"impossibility_witness needs 2k+6 = {n} points, got {q.n}")
    _require_convex(q)
    I1 = tuple(i for i in range(1, n + 1) if i not in (4, k + 5, k + 9))
    I2 = tuple(i for i in range(1, n + 1) if i not in (2, 6, k + 7))
    six = (1, 3, 5, k + 4, k + 6, k + 8)
    cls = desargues_class([q.q[i - 1] for i in six])
    star1 = star_interior_test([q.q[i - 1] for i in I1], k)
    star2 = star_interior_test([q.q[i - 1] for i in I2], k)
    w = ImpossibilityWitness(k, I1, I2, six, cls, (OrientationClass.NEGATIVE, OrientationClass.POSITIVE), star1, star2)
    # A non-empty star forces the required orientation of its subconfiguration.
    for star, req in ((star1, w.required[0]), (star2, w.required[1])):
        if star.nonempty and cls != req:
            raise InternalInvariantViolation("star interior non-empty but six points have the wrong orientation")
    return w
