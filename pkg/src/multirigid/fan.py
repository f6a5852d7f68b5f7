"""Certification of the complete-fan conditions for k-triangulations.

The kn rows of length <= k are common to every facet, so everything is
computed in the quotient by their span: each relevant edge e gets an
integer vector v_e in Q^D (D = k(n-2k-1)) with v_e = c_e * [row(e)] for a
known rational c_e > 0.  Positive rescaling keeps all circuit signs, and
dependence coefficients on relevant edges transfer back exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from . import _kernels, signs
from .errors import (
    InvalidParams,
    NondegeneratePerturbationExhausted,
    RankDeficientMatrix,
)
from .linalg import SignedCircuit, integer_rank, primitive, rref, unique_dependence
from .ngon import (
    Edge,
    FlipGraph,
    Flip,
    facet_size,
    flip_graph,
    format_edge,
    greedy_triangulation,
)
from .rigidity import (
    MatrixKind,
    ParameterConfig,
    PlanarConfig,
    RigidityMatrix,
    build_cofactor,
    build_matrix,
    positions_json,
)

log = logging.getLogger(__name__)

MAX_PERTURBATIONS = 32


class Verdict(Enum):
    NOT_BASES = "NotBases"
    BASES_ONLY = "BasesOnly"
    COMPLETE_FAN = "CompleteFan"


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


class Realization:
    """Quotient rays of the relevant edges of one (k, n, matrix) instance."""

    def __init__(self, matrix: RigidityMatrix, k: int):
        self.matrix = matrix
        self.k = k
        self.n = n = matrix.n
        self.graph: FlipGraph = flip_graph(n, k)
        poly = self.graph.poly
        self.relevant = poly.relevant
        self.D = poly.dim
        fixed_rows = [matrix.integer_row(e) for e in poly.fixed]
        E, piv = rref(fixed_rows)
        self.fixed_rank = len(piv)
        self.fixed_independent = self.fixed_rank == len(poly.fixed)
        pivset = set(piv)
        free = [c for c in range(matrix.ncols) if c not in pivset]
        projected = []
        for e in self.relevant:
            r = [Fraction(x) for x in matrix.row(e)]
            for row, p in zip(E, piv):
                a = r[p]
                if a:
                    r = [x - a * y for x, y in zip(r, row)]
            projected.append([r[c] for c in free])
        _, qpiv = rref(projected)
        self.quotient_rank = len(qpiv)
        self.total_rank = self.fixed_rank + self.quotient_rank
        self.rays: list[list[int]] = []
        self.scales: list[Fraction] = []  # v_e = scales[e] * [row(e)]
        for r in projected:
            vec, c = primitive([r[c] for c in qpiv])
            self.rays.append(vec)
            self.scales.append(c)
        self._sign_cache: dict[int, int] = {}

    def require_full_rank(self) -> None:
        need = facet_size(self.n, self.k)
        if self.total_rank < need:
            raise RankDeficientMatrix(self.total_rank, need)

    def det_sign(self, idx: Sequence[int]) -> int:
        """Sign of the determinant of the rays with the given (sorted) indices."""
        return signs.det_sign([self.rays[i] for i in idx])

    def facet_sign(self, a: int) -> int:
        s = self._sign_cache.get(a)
        if s is None:
            s = self._sign_cache[a] = self.det_sign(self.graph.facets[a])
        return s

    def flip_dependence(self, a: int, g: int) -> dict[int, int]:
        """Integer dependence of facet a plus ray g, positive at g (facet a a basis)."""
        fac = self.graph.facets[a]
        d, nums = _kernels.solve([self.rays[i] for i in fac], self.rays[g])
        if d == 0:
            raise RankDeficientMatrix(self.D - 1, self.D)
        s = _sgn(d)
        lam = {g: abs(d)}
        for i, x in zip(fac, nums):
            if x:
                lam[i] = -s * x
        return lam

    def true_dependence(self, lam: dict[int, int]) -> dict[Edge, int]:
        """Rescale a ray dependence to the matrix rows, primitive integer form."""
        sc = self.scales
        den = lcm(*(sc[i].denominator for i in lam))
        ints = {i: x * sc[i].numerator * (den // sc[i].denominator) for i, x in lam.items()}
        g = gcd(*ints.values())
        return {self.relevant[i]: v // g for i, v in sorted(ints.items()) if v}

    def matrix_circuit(self, edges: Sequence[Edge]) -> SignedCircuit:
        """Signed circuit of an edge set computed directly on the matrix rows."""
        return SignedCircuit.from_dependence(unique_dependence(self.matrix.rows(sorted(edges))))


@dataclass
class StageResult:
    ok: bool | None = None  # None: stage not run
    checked: int = 0
    failures: int = 0
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "failures": self.failures, "witness": self.witness}


@dataclass
class DegreeOneResult(StageResult):
    membership_count: int | None = None
    perturbations: int = 0
    inconclusive: bool = False

    def to_json(self) -> dict:
        out = super().to_json()
        out.update(membershipCount=self.membership_count, perturbations=self.perturbations, inconclusive=self.inconclusive)
        return out


@dataclass(frozen=True)
class FlipCircuitWitness:
    flip: Flip
    circuit: SignedCircuit
    flip_edge_signs_equal: bool

    def to_json(self) -> dict:
        return {
            "facet": [format_edge(e) for e in self.flip.source.relevant],
            "removed": format_edge(self.flip.removed),
            "inserted": format_edge(self.flip.inserted),
            "circuit": self.circuit.to_json(),
            "flipEdgeSignsEqual": self.flip_edge_signs_equal,
        }


@dataclass
class FanReport:
    k: int
    n: int
    kind: str
    d: int
    positions: object
    facets: int
    bases: StageResult = field(default_factory=StageResult)
    icop: StageResult = field(default_factory=StageResult)
    five_cycles: StageResult = field(default_factory=StageResult)
    degree_one: DegreeOneResult = field(default_factory=DegreeOneResult)
    verdict: Verdict = Verdict.NOT_BASES
    error: str | None = None

    @property
    def basis_ok(self) -> bool:
        return bool(self.bases.ok)

    @property
    def icop_ok(self) -> bool:
        return bool(self.icop.ok)

    @property
    def five_cycle_ok(self) -> bool:
        return bool(self.five_cycles.ok)

    @property
    def degree_one_ok(self) -> bool:
        return bool(self.degree_one.ok)

    def to_json(self) -> dict:
        return {
            "format": 1,
            "params": {"k": self.k, "n": self.n, "kind": self.kind, "d": self.d, "positions": self.positions},
            "facets": self.facets,
            "basisOK": self.bases.ok,
            "bases": self.bases.to_json(),
            "icopOK": self.icop.ok,
            "icop": self.icop.to_json(),
            "fiveCycleOK": self.five_cycles.ok,
            "fiveCycles": self.five_cycles.to_json(),
            "degreeOneOK": self.degree_one.ok,
            "degreeOne": self.degree_one.to_json(),
            "verdict": self.verdict.value,
            "error": self.error,
        }


def _facet_edges(R: Realization, a: int) -> list[str]:
    return [format_edge(R.relevant[i]) for i in R.graph.facets[a]]


def check_bases(R: Realization, exhaustive: bool = False) -> StageResult:
    """Every facet's rows independent; witness is the first failing facet."""
    R.require_full_rank()
    res = StageResult(ok=True)
    g = R.graph
    for a in range(len(g)):
        res.checked += 1
        if R.fixed_independent and R.facet_sign(a) != 0:
            continue
        res.failures += 1
        if res.witness is None:
            T = g.triangulation(a)
            corank = len(T.edges) - integer_rank([R.matrix.integer_row(e) for e in T.edges])
            res.witness = {"facet": _facet_edges(R, a), "corank": corank}
        res.ok = False
        if not exhaustive:
            break
    return res


def flip_pair_sign(R: Realization, a: int, e: int, b: int, g: int) -> int:
    """+1 iff the circuit of the flip has equal signs on e and g, -1 if opposite, 0 if degenerate."""
    L = sorted(R.graph.facets[a] + (g,))
    pe, pg = L.index(e), L.index(g)
    parity = -1 if (pe + pg) % 2 else 1
    return parity * R.facet_sign(a) * R.facet_sign(b)


def flip_witness(R: Realization, a: int, e: int, g: int) -> FlipCircuitWitness:
    T1 = R.graph.triangulation(a)
    fl = Flip(T1, R.relevant[e], R.relevant[g])
    union = sorted(set(T1.edges) | {fl.inserted})
    try:
        circ = R.matrix_circuit(union)
    except Exception:  # corank != 1 when a facet is degenerate
        circ = SignedCircuit(frozenset(), {})
    se, sg = circ.signs.get(fl.removed, 0), circ.signs.get(fl.inserted, 0)
    return FlipCircuitWitness(fl, circ, se == sg and se != 0)


def check_icop(R: Realization, exhaustive: bool = False) -> StageResult:
    res = StageResult(ok=True)
    for a, e, b, g in R.graph.flips():
        res.checked += 1
        if flip_pair_sign(R, a, e, b, g) == 1:
            continue
        res.failures += 1
        res.ok = False
        if res.witness is None:
            res.witness = flip_witness(R, a, e, g).to_json()
        if not exhaustive:
            break
    return res


def _walk_cycle(G: FlipGraph, a: int, e: int, f: int) -> tuple[list[int], list[int]] | None:
    """Vertices and facets of the link of facet a minus {e,f}; None unless a is the least facet.

    facets[i] is the facet containing vertices i and i+1 (cyclically).
    """
    verts = [e, f]
    facets = [a]
    cur = a
    while True:
        b, g = G.neighbors[cur][G.facets[cur].index(verts[-2])]
        if b < a:
            return None
        cur = b
        if g == verts[0]:
            facets.append(cur)  # the facet closing the cycle, {last vertex, first vertex}
            return verts, facets
        verts.append(g)
        facets.append(cur)
        if len(verts) > 5:
            raise AssertionError("elementary cycle longer than five")


def five_cycles(G: FlipGraph):
    """Each length-5 elementary cycle once, as (center, vertices, facets)."""
    for a, fac in enumerate(G.facets):
        for p in range(len(fac)):
            for q in range(p + 1, len(fac)):
                walked = _walk_cycle(G, a, fac[p], fac[q])
                if walked is None or len(walked[0]) != 5:
                    continue
                verts, facets = walked
                center = tuple(x for x in fac if x != fac[p] and x != fac[q])
                yield center, verts, facets


def triple_certifies(R: Realization, center: tuple[int, ...], i1: int, i2: int, i3: int, f12: int, f23: int) -> bool:
    """Sign criterion on center + {i1,i2,i3}; f12, f23 are the facets center+{i1,i2}, center+{i2,i3}."""
    L = sorted(center + (i1, i2, i3))

    def lam(x: int, sign: int) -> int:
        return (-1 if L.index(x) % 2 else 1) * sign

    l1 = lam(i1, R.facet_sign(f23))
    l3 = lam(i3, R.facet_sign(f12))
    if l1 == 0 or l1 != l3:
        return False
    l2 = lam(i2, R.det_sign(sorted(center + (i1, i3))))
    return l1 != 0 and l1 == l3 and l2 == -l1


def check_five_cycles(R: Realization, exhaustive: bool = False) -> StageResult:
    res = StageResult(ok=True)
    for center, verts, facets in five_cycles(R.graph):
        res.checked += 1
        ok = False
        for i in range(5):
            i1, i2, i3 = verts[i - 1], verts[i], verts[(i + 1) % 5]
            if triple_certifies(R, center, i1, i2, i3, facets[i - 1], facets[i]):
                ok = True
                break
        if ok:
            continue
        res.failures += 1
        res.ok = False
        if res.witness is None:
            res.witness = {
                "center": [format_edge(R.relevant[x]) for x in center],
                "cycle": [format_edge(R.relevant[x]) for x in verts],
            }
        if not exhaustive:
            break
    return res


def greedy_point(R: Realization) -> tuple[list[int], int, list[int]]:
    """Integer multiple of the greedy row sum in ray coordinates, its facet, and its ray indices."""
    G = R.graph
    greedy = greedy_triangulation(R.n, R.k)
    ga = G.index[greedy.mask]
    idx = G.facets[ga]
    den = lcm(*(R.scales[i].numerator for i in idx))
    # row(e) = v_e / c_e, so den * sum row(e) = sum (den / c_e) v_e
    weights = [Fraction(den) / R.scales[i] for i in idx]
    wden = lcm(*(w.denominator for w in weights))
    v = [0] * R.D
    for i, w in zip(idx, weights):
        wi = int(w * wden)
        for c, x in enumerate(R.rays[i]):
            v[c] += wi * x
    return v, ga, list(idx)


def check_degree_one(R: Realization) -> DegreeOneResult:
    """Count facets whose cone contains the (perturbed) greedy row sum."""
    G = R.graph
    v, ga, gidx = greedy_point(R)
    res = DegreeOneResult()
    for m in range(MAX_PERTURBATIONS + 1):
        if m > 0:
            ray = R.rays[gidx[(m - 1) % len(gidx)]]
            # v <- 2 v + ray keeps integrality: same as adding ray / 2^m to the original scale
            v = [2 * x + y for x, y in zip(v, ray)]
        members = []
        degenerate = False
        for a, fac in enumerate(G.facets):
            coords = signs.solve_signs([R.rays[i] for i in fac], v)
            if coords is None or min(coords) < 0:
                continue
            if 0 in coords:
                degenerate = True
                break
            members.append(a)
        if degenerate:
            log.info("greedy point degenerate, perturbation %d", m + 1)
            continue
        res.perturbations = m
        res.checked = len(G)
        res.membership_count = len(members)
        res.ok = members == [ga]
        if not res.ok:
            res.failures = 1
            res.witness = {"members": [_facet_edges(R, a) for a in members[:10]]}
        return res
    raise NondegeneratePerturbationExhausted(f"greedy point stayed degenerate after {MAX_PERTURBATIONS} perturbations")


def make_matrix(k: int, n: int, positions, kind: MatrixKind = MatrixKind.POLYNOMIAL) -> RigidityMatrix:
    d = 2 * k
    if isinstance(positions, RigidityMatrix):
        return positions
    if isinstance(positions, PlanarConfig):
        if kind not in (MatrixKind.COFACTOR, MatrixKind.COFACTOR_HOMOGENEOUS):
            raise InvalidParams("planar positions require a cofactor matrix")
        if positions.n != n:
            raise InvalidParams(f"expected {n} points, got {positions.n}")
        if kind is MatrixKind.COFACTOR:
            return build_cofactor(positions, d)
        from .rigidity import build_cofactor_homogeneous

        return build_cofactor_homogeneous(positions.homogeneous(), d)
    if not isinstance(positions, ParameterConfig):
        positions = ParameterConfig(tuple(positions))
    if positions.n != n:
        raise InvalidParams(f"expected {n} parameters, got {positions.n}")
    return build_matrix(kind, positions, d)


def certify_fan(
    k: int,
    n: int,
    positions,
    kind: MatrixKind = MatrixKind.POLYNOMIAL,
    exhaustive: bool = False,
    realization: Realization | None = None,
) -> FanReport:
    """Bases, ICoP, 5-cycles, degree one; stops at the first failed stage."""
    matrix = make_matrix(k, n, positions, kind)
    R = realization or Realization(matrix, k)
    report = FanReport(k, n, matrix.kind.value, matrix.d, positions_json(matrix.positions), len(R.graph))
    report.bases = check_bases(R, exhaustive)
    if not report.bases.ok:
        report.verdict = Verdict.NOT_BASES
        if not exhaustive:
            return report
    report.verdict = Verdict.BASES_ONLY if report.bases.ok else Verdict.NOT_BASES
    report.icop = check_icop(R, exhaustive)
    if not report.icop.ok and not exhaustive:
        return report
    report.five_cycles = check_five_cycles(R, exhaustive)
    if not report.five_cycles.ok and not exhaustive:
        return report
    if not report.bases.ok:
        return report
    try:
        report.degree_one = check_degree_one(R)
    except NondegeneratePerturbationExhausted as exc:
        report.degree_one = DegreeOneResult(ok=None, inconclusive=True)
        report.error = str(exc)
        return report
    if report.icop.ok and report.five_cycles.ok and report.degree_one.ok:
        report.verdict = Verdict.COMPLETE_FAN
    return report
