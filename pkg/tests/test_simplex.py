import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multirigid.simplex import (
    FeasibleResult,
    InfeasibleResult,
    solve_strict,
    verify_farkas,
    verify_strict,
)


def check(rows, **kw):
    res = solve_strict(rows, **kw)
    if isinstance(res, FeasibleResult):
        assert verify_strict(rows, res.f)
    else:
        assert verify_farkas(rows, res.y)
    return res


def test_trivial_systems():
    assert isinstance(check([[1]]), FeasibleResult)
    assert isinstance(check([[1], [-1]]), InfeasibleResult)
    assert isinstance(check([[1, 0], [0, 1], [-1, -1]]), InfeasibleResult)
    assert isinstance(check([[1, 0], [0, 1], [-1, 2]]), FeasibleResult)
    assert isinstance(check([[0, 0]]), InfeasibleResult)
    assert solve_strict([]).f == []


def test_verifiers_reject_bad_certificates():
    rows = [[1, 0], [-1, 0]]
    assert not verify_farkas(rows, {0: 1})
    assert not verify_farkas(rows, {})
    assert verify_farkas(rows, {0: 0.5, 1: 0.5})
    assert not verify_strict(rows, [1, 0])


def test_unknown_rule():
    with pytest.raises(ValueError):
        solve_strict([[1]], rule="steepest")


def _random_system(rng, m, p, feasible):
    if feasible:
        f = [0]
        while not any(f):
            f = [rng.randint(-5, 5) for _ in range(p)]
        rows = []
        while len(rows) < m:
            r = [rng.randint(-4, 4) for _ in range(p)]
            s = sum(a * b for a, b in zip(r, f))
            if s > 0:
                rows.append(r)
            elif s < 0:
                rows.append([-a for a in r])
        return rows
    return [[rng.randint(-4, 4) for _ in range(p)] for _ in range(m)]


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**9), st.booleans())
def test_rules_agree_and_certificates_verify(seed, feasible):
    rng = random.Random(seed)
    rows = _random_system(rng, rng.randint(1, 14), rng.randint(1, 5), feasible)
    a = check(rows, rule="lex")
    b = check(rows, rule="bland")
    c = check(rows, rule="lex", use_flint=False)
    assert type(a) is type(b) is type(c)
    if feasible:
        assert isinstance(a, FeasibleResult)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_degenerate_systems(seed):
    # many duplicated and opposite rows make the phase-one problem degenerate
    rng = random.Random(seed)
    base = _random_system(rng, 5, 4, rng.random() < 0.5)
    rows = base + [list(r) for r in base] + [[2 * x for x in r] for r in base]
    check(rows, rule="lex")
    check(rows, rule="bland")
