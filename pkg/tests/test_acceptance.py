"""End-to-end acceptance criteria; each records a PASS/FAIL line printed in the terminal summary."""

import itertools
import random
import time
from collections import deque
from fractions import Fraction

import pytest

from helpers import (
    SHIFTED_POSITIONS,
    Chirotope,
    all_edges,
    ears,
    hankel_oracle,
    internal_stars,
    load_lift,
    random_convex,
    random_parabola,
    random_parameters,
    record,
)
from multirigid.fan import Realization, Verdict, certify_fan, flip_witness, make_matrix
from multirigid.linalg import rank, unique_dependence
from multirigid.ngon import (
    catalan_hankel_count,
    edge_length,
    elementary_cycle,
    enumerate_k_triangulations,
    flip,
    flip_graph,
    format_edge,
    relevant_dimension,
)
from multirigid.obstructions import (
    OrientationClass,
    desargues_class,
    impossibility_witness,
    morgan_scott_signs,
    regular_polygon,
    sign_change_violations,
    star_interior_test,
)
from multirigid.polytope import find_lift, lift_values, polytope_system, verify_lift
from multirigid.rigidity import (
    MatrixKind,
    ParameterConfig,
    PlanarConfig,
    build_matrix,
    build_polynomial,
    circle_positions,
    is_independent,
    vertex_split,
)
from multirigid.simplex import verify_farkas

F = Fraction


# -- 1 ------------------------------------------------------------------------


def test_criterion_1_enumeration_counts():
    start = time.perf_counter()
    bad = []
    checked = 0
    for k in range(1, 5):
        for n in range(2 * k + 1, 11):
            count = sum(1 for _ in enumerate_k_triangulations(n, k))
            if not count == hankel_oracle(n, k) == catalan_hankel_count(n, k):
                bad.append((k, n, count))
            checked += 1
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 600
    record(1, "counts", ok, f"{checked} (k,n) pairs in {elapsed:.1f}s" if ok else f"mismatches {bad}, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 600


# -- 2 ------------------------------------------------------------------------


@pytest.fixture(scope="module")
def shifted_positions():
    return ParameterConfig(SHIFTED_POSITIONS)


def test_criterion_2_known_lifts(shifted_positions):
    cases = [
        ("(2,8) standard", 2, 8, ParameterConfig.standard(8), "lift_k2_n8"),
        ("(2,9) standard", 2, 9, ParameterConfig.standard(9), "lift_k2_n9"),
        ("(2,10) shifted t", 2, 10, shifted_positions, "lift_k2_n10"),
    ]
    results = []
    for label, k, n, t, name in cases:
        _, S = polytope_system(k, n, t)
        ok, _ = verify_lift(load_lift(name), S)
        record(2, label, ok, f"{len(S.inequalities)} inequalities")
        results.append(ok)
    assert all(results)


@pytest.mark.xfail(
    strict=True,
    reason="the reference (3,10) values violate circuit inequalities of the certified fan at the stated positions",
)
def test_criterion_2_three_ten_lift(shifted_positions):
    _, S = polytope_system(3, 10, shifted_positions)
    f = load_lift("lift_k3_n10")
    vals = lift_values(S, f)
    violated = [ineq for ineq in S.inequalities if ineq.evaluate(vals) <= 0]
    ok = not violated
    if ok:
        record(2, "(3,10) lift", True, f"{len(S.inequalities)} inequalities")
    else:
        first = violated[0]
        record(
            2,
            "(3,10) lift",
            False,
            f"{len(violated)} of {len(S.inequalities)} inequalities violated, first at flip "
            f"{format_edge(first.removed)} -> {format_edge(first.inserted)}; find_lift finds a valid lift: {find_lift(S).feasible}",
        )
    assert ok


# -- 3 ------------------------------------------------------------------------


def test_criterion_3_negative_lp():
    _, S = polytope_system(2, 10, ParameterConfig.standard(10))
    out = find_lift(S)
    ok = (not out.feasible) and verify_farkas(S.matrix(), out.farkas)
    record(3, "(2,10) standard", ok, f"Farkas support {len(out.farkas or {})} of {len(S.inequalities)} rows")
    assert ok


# -- 4 ------------------------------------------------------------------------


def test_criterion_4_desargues_obstruction():
    missing = {(1, 6), (3, 7), (4, 9)}
    edges = [e for e in all_edges(9) if e not in missing]
    m = build_polynomial(ParameterConfig.standard(9), 6)
    rows = m.rows(edges)
    corank = len(edges) - rank(rows)
    dep = unique_dependence(rows) if corank == 1 else None
    relevant = [e for e in (dep.support if dep else []) if edge_length(e, 9) > 3]
    same = dep is not None and len(relevant) == 6 and len({dep.sign(e) for e in relevant}) == 1
    record(4, "t=(1..9)", corank == 1 and same, f"corank {corank}, relevant signs equal on {len(relevant)} edges")
    rng = random.Random(4)
    bases = sum(is_independent(build_polynomial(random_parameters(rng, 9), 6), edges) for _ in range(20))
    record(4, "generic t", bases == 20, f"{bases}/20 bases")
    assert corank == 1 and same and bases == 20


# -- 5 ------------------------------------------------------------------------


FAN_CASES = [
    (2, 8, "standard"),
    (2, 9, "standard"),
    (2, 10, "standard"),
    (2, 11, "standard"),
    (3, 10, "circle"),
    (3, 11, "circle"),
    (4, 12, "circle"),
]


def _positions(n, which):
    return ParameterConfig.standard(n) if which == "standard" else circle_positions(n)


@pytest.mark.parametrize("k,n,which", FAN_CASES)
def test_criterion_5_complete_fans(k, n, which):
    rep = certify_fan(k, n, _positions(n, which))
    ok = rep.verdict is Verdict.COMPLETE_FAN
    record(5, f"({k},{n}) {which}", ok, "" if ok else rep.verdict.value)
    assert ok


@pytest.mark.heavy
@pytest.mark.parametrize("n", [12, 13])
def test_criterion_5_heavy_standard(n):
    rep = certify_fan(2, n, ParameterConfig.standard(n))
    ok = rep.verdict is Verdict.COMPLETE_FAN
    record(5, f"(2,{n}) standard", ok, "" if ok else rep.verdict.value)
    assert ok


def test_criterion_5_desargues_nonagon():
    rep = certify_fan(3, 9, ParameterConfig.standard(9))
    ok = rep.verdict in (Verdict.NOT_BASES, Verdict.BASES_ONLY)
    record(5, "(3,9) standard", ok, rep.verdict.value)
    assert ok


# -- 6 ------------------------------------------------------------------------


def test_criterion_6_chirotope_equivalence():
    rng = random.Random(6)
    kinds = [MatrixKind.POLYNOMIAL, MatrixKind.BAR_JOINT, MatrixKind.COFACTOR]
    total = nonzero = 0
    disagreements = []
    while total < 1000:
        d = rng.choice([3, 4])
        n = rng.randint(d + 2, 8)
        t = random_parameters(rng, n)
        chis = [Chirotope(build_matrix(kind, t, d)) for kind in kinds]
        r = chis[0].rank
        if any(c.rank != r for c in chis):
            disagreements.append(("rank", d, n))
            break
        edges = all_edges(n)
        reference = next(S for S in (sorted(rng.sample(edges, r)) for _ in range(1000)) if chis[0].raw(S))
        for _ in range(50):
            S = sorted(rng.sample(edges, r))
            vals = {c.relative(S, reference) for c in chis}
            if len(vals) != 1:
                disagreements.append((d, n, S))
            nonzero += vals.pop() != 0
            total += 1
    ok = not disagreements
    record(6, "subsets", ok, f"{total} rank-sized subsets, {nonzero} bases" if ok else f"{disagreements[:3]}")
    assert ok


# -- 7 ------------------------------------------------------------------------


def _parabola_point(t):
    return (F(t), F(t) ** 2)


def desargues_hexagon(rng):
    """Six parabola points whose chords 14, 25, 36 meet in one point, then a random affine image."""
    while True:
        t = sorted({F(rng.randint(-60, 60), rng.randint(1, 6)) for _ in range(5)})
        if len(t) < 5:
            continue
        t1, t2, t3, t4, t5 = t
        # chord ab of the parabola: y = (a+b) x - ab
        s14, s25 = t1 + t4, t2 + t5
        x0 = (t1 * t4 - t2 * t5) / (s14 - s25) if s14 != s25 else None
        if x0 is None or x0 == t3:
            continue
        y0 = s14 * x0 - t1 * t4
        t6 = (y0 - t3 * x0) / (x0 - t3)
        if t6 <= t5:
            continue
        pts = [_parabola_point(x) for x in (*t, t6)]
        a, b, c, d = (F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(4))
        if a * d - b * c == 0:
            continue
        return PlanarConfig(tuple((a * x + b * y, c * x + d * y) for x, y in pts))


def test_criterion_7_morgan_scott_sign_law():
    rng = random.Random(7)
    counts = {c: 0 for c in OrientationClass}
    mismatches = []
    for i in range(1000):
        q = desargues_hexagon(rng) if i % 5 == 0 else random_convex(rng, 6)
        cls = desargues_class(q)
        if i % 5 == 0 and cls is not OrientationClass.DESARGUES:
            mismatches.append(("construction", i))
        if morgan_scott_signs(q).orientation is not cls:
            mismatches.append(("sign law", i))
        counts[cls] += 1
    ok = not mismatches and all(counts.values())
    record(7, "configurations", ok, ", ".join(f"{c.value} {v}" for c, v in counts.items()) if ok else str(mismatches[:5]))
    assert ok


# -- 8 ------------------------------------------------------------------------


@pytest.mark.parametrize("k", [2, 3])
def test_criterion_8_star_interior_matches_fan(k):
    rng = random.Random(80 + k)
    n = 2 * k + 3
    seen = {True: 0, False: 0}
    bad = []
    for i in range(50):
        q = random_parabola(rng, n) if i % 2 else random_convex(rng, n)
        star = star_interior_test(q, k).nonempty
        fan = certify_fan(k, n, q, MatrixKind.COFACTOR).verdict is Verdict.COMPLETE_FAN
        seen[star] += 1
        if star != fan:
            bad.append(i)
    ok = not bad
    record(8, f"k={k}", ok, f"50 configurations, {seen[True]} non-empty" if ok else f"disagree at {bad}")
    assert ok


def test_criterion_8_regular_surrogate():
    bad = []
    for k in (2, 3, 4, 5):
        q = regular_polygon(2 * k + 3)
        if not star_interior_test(q, k).nonempty:
            bad.append((k, "star"))
        if certify_fan(k, 2 * k + 3, q, MatrixKind.COFACTOR).verdict is not Verdict.COMPLETE_FAN:
            bad.append((k, "fan"))
    record(8, "regular polygons k=2..5", not bad, str(bad) if bad else "")
    assert not bad


# -- 9 ------------------------------------------------------------------------


def test_criterion_9_witness_always_conflicts():
    rng = random.Random(9)
    conflicts = sum(impossibility_witness(random_convex(rng, 12), 3).conflict for _ in range(100))
    record(9, "witness", conflicts == 100, f"{conflicts}/100 conflicts")
    assert conflicts == 100


def test_criterion_9_no_complete_fan():
    rng = random.Random(19)
    verdicts = []
    for _ in range(5):
        q = random_parabola(rng, 12, span=40, den=1)
        assert impossibility_witness(q, 3).conflict
        verdicts.append(certify_fan(3, 12, q, MatrixKind.COFACTOR).verdict)
    ok = Verdict.COMPLETE_FAN not in verdicts
    record(9, "end-to-end", ok, "verdicts " + ", ".join(v.value for v in verdicts))
    assert ok


# -- 10 -----------------------------------------------------------------------


def _flip_properties():
    for n, k in [(7, 2), (8, 2), (9, 3)]:
        for T in enumerate_k_triangulations(n, k):
            for e in T.relevant:
                f = flip(T, e)
                back = flip(f.target, f.inserted)
                if back.target != T or back.inserted != e:
                    return False
    for k in (1, 2, 3):
        for n in range(2 * k + 2, 10):
            G = flip_graph(n, k)
            D = relevant_dimension(n, k)
            if any(len({b for b, _ in row}) != D for row in G.neighbors):
                return False
            seen, todo = {0}, deque([0])
            while todo:
                for b, _ in G.neighbors[todo.popleft()]:
                    if b not in seen:
                        seen.add(b)
                        todo.append(b)
            if len(seen) != len(G):
                return False
    return True


def _links_are_short_cycles():
    for n, k in [(7, 2), (8, 2), (9, 2), (9, 3)]:
        facets = list(enumerate_k_triangulations(n, k))
        by_center = {}
        for T in facets:
            for e, f in itertools.combinations(T.relevant, 2):
                center = tuple(x for x in T.relevant if x not in (e, f))
                by_center.setdefault(center, set()).add(T)
        for T in facets:
            for e, f in itertools.combinations(T.relevant, 2):
                cyc = elementary_cycle(T, e, f)
                if not 3 <= len(cyc) <= 5 or by_center[cyc.center] != set(cyc.facets):
                    return False
    return True


def _ears_law():
    return all(ears(T) == internal_stars(T) + 4 for n in range(6, 10) for T in enumerate_k_triangulations(n, 2))


def _sign_change_law():
    checked = 0
    for k, n in [(2, 7), (2, 8), (3, 9)]:
        q = random_parabola(random.Random(n + 100), n)
        R = Realization(make_matrix(k, n, q, MatrixKind.COFACTOR), k)
        flips = list(R.graph.flips())
        step = 1 if len(flips) <= 300 else len(flips) // 150
        for a, e, b, g in flips[::step]:
            circ = flip_witness(R, a, e, g).circuit
            if sign_change_violations(circ.signs, n, 2 * k):
                return False, checked
            checked += 1
    return True, checked


def _vertex_four_split():
    rng = random.Random(10)
    d = 4
    done = 0
    while done < 100:
        n = rng.randint(d + 2, 8)
        t = random_parameters(rng, n + 1)
        small = build_matrix(MatrixKind.POLYNOMIAL, ParameterConfig(t.t[:n]), d)
        edges = all_edges(n)
        G = rng.sample(edges, rng.randint(d, small.expected_rank()))
        if not is_independent(small, G):
            continue
        u = rng.randint(1, n)
        nbrs = sorted({a if b == u else b for a, b in G if u in (a, b)})
        if len(nbrs) < d - 1:
            continue
        both = rng.sample(nbrs, d - 1)
        second = [x for x in nbrs if x not in both and rng.random() < 0.5]
        H = vertex_split(G, n, u, d, both, second)
        if not is_independent(build_matrix(MatrixKind.POLYNOMIAL, t, d), H):
            return False
        done += 1
    return True


def test_criterion_10_property_suites():
    results = {
        "flip involution, degree, connectivity": _flip_properties(),
        "codim-2 links": _links_are_short_cycles(),
        "ears = internal stars + 4": _ears_law(),
        "vertex 4-split": _vertex_four_split(),
    }
    law, circuits = _sign_change_law()
    results[f"sign changes on {circuits} circuits"] = law
    for name, ok in results.items():
        record(10, name, ok)
    assert all(results.values()), results
