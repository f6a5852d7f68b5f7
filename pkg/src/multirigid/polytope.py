"""Polytopality of a certified fan: circuit inequalities and lifting vectors.

A lifting vector assigns a height f_e to every relevant edge.  Heights of
edges of length <= k are zero (those rays are common to all cones), and by
translation invariance we may also fix f_e = 0 on the greedy facet.  The
lift is valid iff for every flip T1 -> T2, with omega the dependence of the
rows of T1 u T2 oriented positively on the exchanged pair,
sum_e omega_e f_e > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping

from .errors import IcopViolated, InternalInvariantViolation, MissingEdgeValue
from .fan import Realization, make_matrix
from .ngon import Edge, format_edge, greedy_triangulation
from .rigidity import MatrixKind, format_rational, parse_rational
from .simplex import InfeasibleResult, solve_strict, verify_farkas, verify_strict


@dataclass(frozen=True)
class CircuitInequality:
    """sum_e omega[e] * f_e > 0, omega primitive integral on relevant edges."""

    facet: tuple[Edge, ...]
    removed: Edge
    inserted: Edge
    omega: dict[Edge, int]

    @property
    def key(self) -> tuple[tuple[Edge, ...], tuple[Edge, Edge]]:
        common = tuple(e for e in self.facet if e != self.removed)
        return common, tuple(sorted((self.removed, self.inserted)))

    def evaluate(self, f: Mapping[Edge, Fraction]) -> Fraction:
        return sum((w * f.get(e, 0) for e, w in self.omega.items()), Fraction(0))

    def to_json(self) -> dict:
        return {
            "facet": [format_edge(e) for e in self.facet],
            "removed": format_edge(self.removed),
            "inserted": format_edge(self.inserted),
            "omega": {format_edge(e): str(w) for e, w in self.omega.items()},
        }


@dataclass(frozen=True)
class InequalitySystem:
    k: int
    n: int
    variables: tuple[Edge, ...]  # relevant edges off the greedy facet
    greedy: tuple[Edge, ...]
    inequalities: tuple[CircuitInequality, ...]

    def matrix(self) -> list[list[int]]:
        return [[ineq.omega.get(e, 0) for e in self.variables] for ineq in self.inequalities]


def build_inequalities(R: Realization) -> InequalitySystem:
    """One inequality per flip (N*D/2 in total); requires ICoP."""
    G = R.graph
    greedy = greedy_triangulation(R.n, R.k)
    gset = set(greedy.relevant)
    variables = tuple(e for e in R.relevant if e not in gset)
    out = []
    for a, e, b, g in G.flips():
        lam = R.flip_dependence(a, g)
        if lam.get(e, 0) <= 0:
            raise IcopViolated(
                f"flip {format_edge(R.relevant[e])} -> {format_edge(R.relevant[g])} has opposite signs on the exchanged pair"
            )
        omega = R.true_dependence(lam)
        facet = tuple(R.relevant[i] for i in G.facets[a])
        out.append(CircuitInequality(facet, R.relevant[e], R.relevant[g], omega))
    return InequalitySystem(R.k, R.n, variables, greedy.relevant, tuple(out))


def lift_values(system: InequalitySystem, f: Mapping[Edge, object]) -> dict[Edge, Fraction]:
    """Normalize a user lift: greedy edges default to 0, every variable must be given."""
    vals = {e: Fraction(0) for e in system.greedy}
    for e, v in f.items():
        vals[e] = parse_rational(v)
    missing = [e for e in system.variables if e not in vals]
    if missing:
        raise MissingEdgeValue(f"no height for edge(s) {', '.join(format_edge(e) for e in missing)}")
    return vals


def verify_lift(f: Mapping[Edge, object], system: InequalitySystem) -> tuple[bool, CircuitInequality | None]:
    """Every circuit inequality strictly positive; returns the first violated one otherwise."""
    vals = lift_values(system, f)
    for ineq in system.inequalities:
        if ineq.evaluate(vals) <= 0:
            return False, ineq
    return True, None


@dataclass(frozen=True)
class LiftOutcome:
    feasible: bool
    lift: dict[Edge, Fraction] | None
    farkas: dict[int, Fraction] | None
    iterations: int

    def to_json(self, system: InequalitySystem) -> dict:
        out = {"feasible": self.feasible, "iterations": self.iterations}
        if self.lift is not None:
            out["lift"] = lift_to_json(self.lift)
        if self.farkas is not None:
            out["farkas"] = [
                {"inequality": system.inequalities[j].to_json(), "multiplier": format_rational(y)}
                for j, y in self.farkas.items()
            ]
        return out


def find_lift(system: InequalitySystem) -> LiftOutcome:
    """A valid lift (integral, normalized) or an exact Farkas certificate."""
    A = system.matrix()
    # Identical rows add nothing to the LP; solve on one representative each.
    reps: dict[tuple[int, ...], int] = {}
    for j, row in enumerate(A):
        reps.setdefault(tuple(row), j)
    order = sorted(reps.values())
    res = solve_strict([A[j] for j in order])
    if isinstance(res, InfeasibleResult):
        y = {order[j]: v for j, v in res.y.items()}
        if not verify_farkas(A, y):
            raise InternalInvariantViolation("Farkas certificate failed exact verification")
        return LiftOutcome(False, None, y, res.iterations)
    den = lcm(*(x.denominator for x in res.f))
    f = [x * den for x in res.f]
    if not verify_strict(A, f):
        raise InternalInvariantViolation("lift failed exact verification")
    lift = {e: Fraction(0) for e in system.greedy}
    lift.update({e: v for e, v in zip(system.variables, f)})
    return LiftOutcome(True, lift, None, res.iterations)


def lift_to_json(f: Mapping[Edge, Fraction]) -> dict[str, str]:
    return {format_edge(e): format_rational(v) for e, v in sorted(f.items())}


def lift_from_json(data: Mapping[str, object]) -> dict[Edge, Fraction]:
    out = {}
    for key, v in data.items():
        if key == "format":
            continue
        i, j = (int(x) for x in key.split(","))
        out[(min(i, j), max(i, j))] = parse_rational(v)
    return out


def polytope_system(k: int, n: int, positions, kind: MatrixKind = MatrixKind.POLYNOMIAL) -> tuple[Realization, InequalitySystem]:
    R = Realization(make_matrix(k, n, positions, kind), k)
    R.require_full_rank()
    return R, build_inequalities(R)


def compact_lift(values: Mapping[str, int]) -> dict[Edge, Fraction]:
    """Lift from a compact {"ij": value} map (two-digit labels or "i,j")."""
    out = {}
    for key, v in values.items():
        if "," in key:
            i, j = (int(x) for x in key.split(","))
        else:
            i, j = int(key[0]), int(key[1:])
        out[(i, j)] = Fraction(v)
    return out
