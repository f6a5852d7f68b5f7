"""Rigidity matrices over exact rationals.

Rows are indexed by edges {i,j} of K_n (1-based, i<j) and stored sparsely as
the two nonzero blocks of d entries at vertices i and j.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from math import comb, lcm
from typing import Iterable, Mapping, Sequence

import mpmath

from .errors import DuplicatePoint, InvalidParams, NotIncreasing, ZeroVector
from .ngon import Edge

Vector = tuple[Fraction, ...]


def parse_rational(x) -> Fraction:
    """Exact rational from an int, Fraction or "p/q" string; floats are rejected."""
    if isinstance(x, bool):
        raise InvalidParams("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(ch in s for ch in ".eE") or s.count("/") > 1:
            raise InvalidParams(f"not an exact rational: {x!r}")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParams(f"not an exact rational: {x!r}") from exc
    raise InvalidParams(f"not an exact rational: {x!r} ({type(x).__name__})")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational_list(text: str) -> list[Fraction]:
    return [parse_rational(tok) for tok in text.split(",") if tok.strip()]


@dataclass(frozen=True)
class ParameterConfig:
    """Strictly increasing parameters t_1 < ... < t_n."""

    t: tuple[Fraction, ...]
    source: str = field(default="explicit", compare=False)

    def __post_init__(self):
        t = tuple(parse_rational(x) for x in self.t)
        object.__setattr__(self, "t", t)
        for a, b in zip(t, t[1:]):
            if not a < b:
                raise NotIncreasing(f"parameters must increase strictly: {format_rational(a)} >= {format_rational(b)}")

    @property
    def n(self) -> int:
        return len(self.t)

    @classmethod
    def standard(cls, n: int) -> "ParameterConfig":
        return cls(tuple(range(1, n + 1)), source="standard")

    def parabola(self) -> "PlanarConfig":
        return PlanarConfig(tuple((x, x * x) for x in self.t))

    def moment(self, d: int, start: int = 1) -> list[Vector]:
        """Points (t^start, ..., t^(start+d-1)) on the moment curve."""
        return [tuple(x**a for a in range(start, start + d)) for x in self.t]

    def to_json(self) -> list[str]:
        return [format_rational(x) for x in self.t]


def _orient(a, b, c) -> Fraction:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


@dataclass(frozen=True)
class PlanarConfig:
    q: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(self, "q", tuple((parse_rational(x), parse_rational(y)) for x, y in self.q))

    @property
    def n(self) -> int:
        return len(self.q)

    def orientation(self, i: int, j: int, l: int) -> int:
        """Sign of the triangle q_i q_j q_l (1-based), +1 for counter-clockwise."""
        v = _orient(self.q[i - 1], self.q[j - 1], self.q[l - 1])
        return (v > 0) - (v < 0)

    def in_general_position(self) -> bool:
        return all(self.orientation(*c) != 0 for c in itertools.combinations(range(1, self.n + 1), 3))

    def is_convex(self) -> bool:
        """Strictly convex position with the labels in cyclic order."""
        signs = {self.orientation(*c) for c in itertools.combinations(range(1, self.n + 1), 3)}
        return signs == {1} or signs == {-1}

    def homogeneous(self) -> "HomogeneousConfig":
        return HomogeneousConfig(tuple((x, y, Fraction(1)) for x, y in self.q))

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x), format_rational(y)] for x, y in self.q]


@dataclass(frozen=True)
class HomogeneousConfig:
    Q: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(self, "Q", tuple(tuple(parse_rational(c) for c in v) for v in self.Q))

    @property
    def n(self) -> int:
        return len(self.Q)

    def in_general_position(self) -> bool:
        for a, b, c in itertools.combinations(self.Q, 3):
            det = (
                a[0] * (b[1] * c[2] - b[2] * c[1])
                - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0])
            )
            if det == 0:
                return False
        return True

    def to_json(self) -> list[list[str]]:
        return [[format_rational(c) for c in v] for v in self.Q]


class MatrixKind(Enum):
    BAR_JOINT = "BarJoint"
    HYPER = "Hyper"
    COFACTOR = "Cofactor"
    COFACTOR_HOMOGENEOUS = "CofactorHomogeneous"
    POLYNOMIAL = "Polynomial"

    @classmethod
    def parse(cls, text: str) -> "MatrixKind":
        key = text.replace("-", "").replace("_", "").lower()
        for kind in cls:
            if kind.value.lower() == key:
                return kind
        raise InvalidParams(f"unknown matrix kind {text!r}")


@dataclass(frozen=True)
class RigidityMatrix:
    kind: MatrixKind
    d: int
    n: int
    blocks: Mapping[Edge, tuple[Vector, Vector]] = field(repr=False)
    positions: object = field(default=None, repr=False, compare=False)

    @property
    def edges(self) -> list[Edge]:
        return sorted(self.blocks)

    @property
    def ncols(self) -> int:
        return self.n * self.d

    def row(self, e: Edge) -> list[Fraction]:
        i, j = e
        bi, bj = self.blocks[e]
        out = [Fraction(0)] * (self.n * self.d)
        out[(i - 1) * self.d : i * self.d] = bi
        out[(j - 1) * self.d : j * self.d] = bj
        return out

    def rows(self, edges: Iterable[Edge] | None = None) -> dict[Edge, list[Fraction]]:
        edges = self.edges if edges is None else edges
        return {e: self.row(e) for e in edges}

    @cached_property
    def row_scales(self) -> dict[Edge, int]:
        """Positive integers s_e making s_e * row(e) integral."""
        out = {}
        for e, (bi, bj) in self.blocks.items():
            out[e] = lcm(*(x.denominator for x in bi + bj))
        return out

    def integer_row(self, e: Edge) -> list[int]:
        s = self.row_scales[e]
        return [int(x * s) for x in self.row(e)]

    def expected_rank(self) -> int:
        return min(comb(self.n, 2), self.d * self.n - comb(self.d + 1, 2)) if self.n >= self.d else None

    def descriptor(self) -> dict:
        return {"format": 1, "kind": self.kind.value, "d": self.d, "n": self.n, "positions": positions_json(self.positions)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "j"] + [f"b{v}_{c}" for v in ("i", "j") for c in range(1, self.d + 1)])
        for e in self.edges:
            bi, bj = self.blocks[e]
            w.writerow([e[0], e[1]] + [format_rational(x) for x in bi + bj])
        return buf.getvalue()


def positions_json(positions) -> object:
    if positions is None:
        return None
    if hasattr(positions, "to_json"):
        return positions.to_json()
    return [[format_rational(c) for c in p] for p in positions]


def _vectors(points: Sequence[Sequence]) -> list[Vector]:
    return [tuple(parse_rational(c) for c in p) for p in points]


def _check_dims(vecs: list[Vector]) -> int:
    if not vecs:
        raise InvalidParams("need at least one point")
    d = len(vecs[0])
    if d < 1 or any(len(v) != d for v in vecs):
        raise InvalidParams("all points must have the same positive dimension")
    return d


def build_bar_joint(p: Sequence[Sequence]) -> RigidityMatrix:
    vecs = _vectors(p)
    d = _check_dims(vecs)
    if len(set(vecs)) != len(vecs):
        raise DuplicatePoint("bar-and-joint points must be distinct")
    n = len(vecs)
    blocks = {}
    for i, j in itertools.combinations(range(1, n + 1), 2):
        diff = tuple(a - b for a, b in zip(vecs[i - 1], vecs[j - 1]))
        blocks[(i, j)] = (diff, tuple(-x for x in diff))
    return RigidityMatrix(MatrixKind.BAR_JOINT, d, n, blocks, tuple(vecs))


def build_hyper(p: Sequence[Sequence], kind: MatrixKind = MatrixKind.HYPER, positions=None) -> RigidityMatrix:
    vecs = _vectors(p)
    d = _check_dims(vecs)
    if any(all(x == 0 for x in v) for v in vecs):
        raise ZeroVector("hyperconnectivity vectors must be nonzero")
    n = len(vecs)
    blocks = {}
    for i, j in itertools.combinations(range(1, n + 1), 2):
        blocks[(i, j)] = (vecs[j - 1], tuple(-x for x in vecs[i - 1]))
    return RigidityMatrix(kind, d, n, blocks, positions if positions is not None else tuple(vecs))


def _cofactor_vector(x: Fraction, y: Fraction, d: int) -> Vector:
    return tuple(y**a * x ** (d - 1 - a) for a in range(d))


def build_cofactor(q: PlanarConfig | Sequence[Sequence], d: int) -> RigidityMatrix:
    if not isinstance(q, PlanarConfig):
        q = PlanarConfig(tuple(tuple(p) for p in q))
    if d < 1:
        raise InvalidParams("d must be positive")
    if len(set(q.q)) != q.n:
        raise DuplicatePoint("cofactor points must be distinct")
    blocks = {}
    for i, j in itertools.combinations(range(1, q.n + 1), 2):
        (xi, yi), (xj, yj) = q.q[i - 1], q.q[j - 1]
        c = _cofactor_vector(xi - xj, yi - yj, d)
        blocks[(i, j)] = (c, tuple(-x for x in c))
    return RigidityMatrix(MatrixKind.COFACTOR, d, q.n, blocks, q)


def build_cofactor_homogeneous(Q: HomogeneousConfig | Sequence[Sequence], d: int) -> RigidityMatrix:
    if not isinstance(Q, HomogeneousConfig):
        Q = HomogeneousConfig(tuple(tuple(v) for v in Q))
    if d < 1:
        raise InvalidParams("d must be positive")
    if any(all(c == 0 for c in v) for v in Q.Q):
        raise ZeroVector("homogeneous vectors must be nonzero")
    blocks = {}
    for i, j in itertools.combinations(range(1, Q.n + 1), 2):
        (Xi, Yi, Zi), (Xj, Yj, Zj) = Q.Q[i - 1], Q.Q[j - 1]
        c = _cofactor_vector(Xi * Zj - Zi * Xj, Yi * Zj - Zi * Yj, d)
        blocks[(i, j)] = (c, tuple(-x for x in c))
    return RigidityMatrix(MatrixKind.COFACTOR_HOMOGENEOUS, d, Q.n, blocks, Q)


def build_polynomial(t: ParameterConfig | Sequence, d: int) -> RigidityMatrix:
    if not isinstance(t, ParameterConfig):
        t = ParameterConfig(tuple(t))
    if d < 1:
        raise InvalidParams("d must be positive")
    return build_hyper(t.moment(d, start=0), kind=MatrixKind.POLYNOMIAL, positions=t)


def build_matrix(kind: MatrixKind, t: ParameterConfig, d: int) -> RigidityMatrix:
    """The matrix of the given kind attached to parameters t on the moment curve."""
    if kind in (MatrixKind.POLYNOMIAL, MatrixKind.HYPER):
        m = build_polynomial(t, d)
        return m if kind is MatrixKind.POLYNOMIAL else RigidityMatrix(kind, d, m.n, m.blocks, t)
    if kind is MatrixKind.BAR_JOINT:
        m = build_bar_joint(t.moment(d))
        return RigidityMatrix(kind, d, m.n, m.blocks, t)
    if kind is MatrixKind.COFACTOR:
        return build_cofactor(t.parabola(), d)
    return build_cofactor_homogeneous(t.parabola().homogeneous(), d)


def is_independent(matrix: RigidityMatrix, edges: Iterable[Edge]) -> bool:
    from .linalg import rank

    edges = sorted(set(edges))
    return rank([matrix.row(e) for e in edges]) == len(edges) if edges else True


def vertex_split(
    edges: Iterable[Edge], n: int, u: int, d: int, both: Iterable[int], second: Iterable[int] = ()
) -> list[Edge]:
    """Vertex d-split of the graph ``edges`` on [n] at vertex u.

    The new vertex is n+1 and is joined to u.  Neighbours in ``both`` (exactly
    d-1 of them) go to u and n+1, those in ``second`` move to n+1, and the
    remaining neighbours of u stay at u.  Contracting {u, n+1} gives back the
    original graph.
    """
    edges = {tuple(sorted(e)) for e in edges}
    nbrs = {a if b == u else b for a, b in edges if u in (a, b)}
    both, second = set(both), set(second)
    if len(both) != d - 1:
        raise InvalidParams(f"a vertex {d}-split needs exactly {d - 1} common neighbours")
    if not (both | second) <= nbrs or both & second:
        raise InvalidParams("split classes must be disjoint sets of neighbours of u")
    w = n + 1
    out = {e for e in edges if u not in e or (e[0] if e[1] == u else e[1]) not in second}
    out |= {(x, w) for x in both | second}
    out.add((u, w))
    return sorted(out)


def _continued_fraction_approx(x: mpmath.mpf, bits: int) -> Fraction:
    """Last convergent of x >= 0 with numerator and denominator below 2**bits."""
    bound = 1 << bits
    h0, h1 = 0, 1  # numerators
    k0, k1 = 1, 0  # denominators
    best = None
    y = x
    for _ in range(4 * bits + 8):
        a = int(mpmath.floor(y))
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if h1 >= bound or k1 >= bound:
            break
        best = Fraction(h1, k1)
        frac = y - a
        if frac < mpmath.mpf(2) ** (-3 * bits):
            break
        y = 1 / frac
    if best is None:
        raise InvalidParams(f"cannot approximate {x} within {bits} bits")
    return best


def circle_positions(n: int, bits: int = 64) -> ParameterConfig:
    """Rational surrogates of t_i = tan(a0 + i*pi/n), a0 = -(n+1)pi/(2n).

    Each |t_i| is replaced by its last continued-fraction convergent whose
    numerator and denominator fit in ``bits`` bits; signs are applied after,
    so t_i = -t_{n+1-i} holds exactly and the middle value (odd n) is 0.
    """
    if n < 3:
        raise InvalidParams("need n >= 3")
    if bits < 8:
        raise InvalidParams("need at least 8 bits")
    t = []
    with mpmath.workprec(8 * bits + 64):
        for i in range(1, n + 1):
            m = 2 * i - n - 1  # angle is m*pi/(2n)
            if m == 0:
                t.append(Fraction(0))
                continue
            x = mpmath.tan(mpmath.mpf(abs(m)) * mpmath.pi / (2 * n))
            q = _continued_fraction_approx(x, bits)
            t.append(q if m > 0 else -q)
    return ParameterConfig(tuple(t), source=f"circle:{bits}")
