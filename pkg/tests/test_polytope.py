import random
from fractions import Fraction

import pytest

from helpers import SHIFTED_POSITIONS, load_lift
from multirigid.errors import IcopViolated, MissingEdgeValue
from multirigid.fan import Realization, make_matrix
from multirigid.ngon import greedy_triangulation
from multirigid.polytope import (
    build_inequalities,
    find_lift,
    lift_from_json,
    lift_to_json,
    lift_values,
    polytope_system,
    compact_lift,
    verify_lift,
)
from multirigid.rigidity import ParameterConfig
from multirigid.simplex import verify_farkas, verify_strict


@pytest.fixture(scope="module")
def octagon():
    return polytope_system(2, 8, ParameterConfig.standard(8))


@pytest.fixture(scope="module")
def nonagon():
    return polytope_system(2, 9, ParameterConfig.standard(9))


def _translate(R, f, rng):
    """Add the values of a random linear functional on the (quotient) rays."""
    c = [rng.randint(-50, 50) for _ in R.rays[0]]
    out = dict(f)
    for e, ray, s in zip(R.relevant, R.rays, R.scales):
        out[e] = out.get(e, Fraction(0)) + sum(a * x for a, x in zip(c, ray)) / s
    return out


def test_system_sizes(octagon, nonagon):
    for (R, S), n in [(octagon, 8), (nonagon, 9)]:
        assert len(S.inequalities) == len(R.graph) * R.D // 2
        assert len(S.variables) == (n - 4) * (n - 5) // 2
        assert set(S.greedy) == set(greedy_triangulation(n, 2).relevant)
        assert all(e[0] >= 3 for e in S.variables)


def test_inequalities_are_flip_circuits(octagon):
    R, S = octagon
    keys = set()
    for ineq in S.inequalities:
        # at f = 0 on the facet only the inserted edge survives
        assert set(ineq.omega) <= set(ineq.facet) | {ineq.inserted}
        assert ineq.omega[ineq.inserted] > 0 and ineq.omega[ineq.removed] > 0
        keys.add(ineq.key)
    assert len(keys) == len(S.inequalities)


def test_known_lift_octagon(octagon):
    f = load_lift("lift_k2_n8")
    assert f == compact_lift({"36": 3, "37": 14, "38": 36, "47": 3, "48": 16, "58": 6})
    assert verify_lift(f, octagon[1]) == (True, None)


def test_known_lift_nonagon(nonagon):
    assert verify_lift(load_lift("lift_k2_n9"), nonagon[1])[0]


def test_scale_invariance(octagon, rng):
    S = octagon[1]
    f = load_lift("lift_k2_n8")
    for _ in range(5):
        lam = Fraction(rng.randint(1, 1000), rng.randint(1, 1000))
        assert verify_lift({e: lam * v for e, v in f.items()}, S)[0]
    assert not verify_lift({e: -v for e, v in f.items()}, S)[0]
    assert not verify_lift({e: 0 for e in S.variables}, S)[0]


def test_translation_by_linear_functional(octagon, nonagon, rng):
    for (R, S), name in [(octagon, "lift_k2_n8"), (nonagon, "lift_k2_n9")]:
        f = load_lift(name)
        for _ in range(5):
            g = _translate(R, f, rng)
            assert any(g[e] != 0 for e in S.greedy)
            assert verify_lift(g, S)[0]


def test_find_lift_feasible(octagon, nonagon):
    for R, S in (octagon, nonagon):
        out = find_lift(S)
        assert out.feasible and out.farkas is None
        assert verify_lift(out.lift, S)[0]
        assert all(out.lift[e] == 0 for e in S.greedy)
        assert all(v.denominator == 1 for v in out.lift.values())
        assert verify_strict(S.matrix(), [out.lift[e] for e in S.variables])


def test_find_lift_infeasible_standard_decagon():
    R, S = polytope_system(2, 10, ParameterConfig.standard(10))
    out = find_lift(S)
    assert not out.feasible and out.lift is None
    assert verify_farkas(S.matrix(), out.farkas)
    assert all(y > 0 for y in out.farkas.values())
    js = out.to_json(S)
    assert js["feasible"] is False and len(js["farkas"]) == len(out.farkas)


def test_known_lift_decagon():
    R, S = polytope_system(2, 10, ParameterConfig(SHIFTED_POSITIONS))
    assert len(S.variables) == 15
    assert verify_lift(load_lift("lift_k2_n10"), S)[0]


def test_missing_value(octagon):
    S = octagon[1]
    f = load_lift("lift_k2_n8")
    del f[(3, 6)]
    with pytest.raises(MissingEdgeValue):
        verify_lift(f, S)
    # greedy edges default to zero
    assert lift_values(S, load_lift("lift_k2_n8"))[(1, 4)] == 0


def test_json_round_trip(octagon):
    f = load_lift("lift_k2_n8")
    f[(3, 6)] = Fraction(7, 3)
    assert lift_from_json(lift_to_json(f)) == f
    assert lift_from_json({"format": 1, "6,3": "2"}) == {(3, 6): 2}
    ineq = octagon[1].inequalities[0]
    js = ineq.to_json()
    assert js["removed"] == f"{ineq.removed[0]},{ineq.removed[1]}"


def test_icop_failure_blocks_the_system():
    rng = random.Random(2)
    t = [i + Fraction(rng.randint(-100, 100), 10000) for i in range(1, 11)]
    R = Realization(make_matrix(3, 10, ParameterConfig(tuple(t))), 3)
    with pytest.raises(IcopViolated):
        build_inequalities(R)
