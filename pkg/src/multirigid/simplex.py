"""Exact feasibility of a strict homogeneous system A f > 0.

By Gordan's alternative, exactly one of the following holds:

* some f has A f > 0 (equivalently A f >= 1, by scaling);
* some y >= 0 with sum(y) = 1 has y A = 0.

We run a phase-one revised simplex on the second system,

    minimize sum(a)  s.t.  [A^T; 1^T] y + a = (0, ..., 0, 1),  y, a >= 0.

An optimum of zero gives y.  A positive optimum gives simplex multipliers
(g, z) with A g + z <= 0 and z > 0, hence f = -g / z satisfies A f >= 1.

Two pivot rules are available, both free of cycling: Bland's rule, and
Dantzig pricing with the lexicographic ratio test.  The problem is highly
degenerate (the right-hand side is a unit vector), and the second rule needs
far fewer pivots.  Arithmetic is fraction-free: B^-1 is kept as N / det(B)
with N an integer matrix, so entries stay bounded by minors of the data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels

try:
    import flint
except ImportError:  # pricing falls back to the compiled kernels
    flint = None

PIVOT_RULES = ("lex", "bland")


@dataclass(frozen=True)
class FeasibleResult:
    f: list[Fraction]
    iterations: int


@dataclass(frozen=True)
class InfeasibleResult:
    """Farkas (Gordan) multipliers: y >= 0, sum y = 1, y A = 0."""

    y: dict[int, Fraction]
    iterations: int


def verify_farkas(rows: Sequence[Sequence[int]], y: dict[int, Fraction]) -> bool:
    if not y or any(v < 0 for v in y.values()) or sum(y.values()) != 1:
        return False
    p = len(rows[0]) if rows else 0
    total = [Fraction(0)] * p
    for j, v in y.items():
        for c in range(p):
            total[c] += v * rows[j][c]
    return all(t == 0 for t in total)


def verify_strict(rows: Sequence[Sequence[int]], f: Sequence[Fraction]) -> bool:
    return all(sum(Fraction(a) * x for a, x in zip(r, f)) > 0 for r in rows)


class _Pricer:
    """Entering-column selection from the reduced costs u.M_j.

    For Dantzig pricing a float matrix product proposes the steepest column;
    the proposal is accepted only after its exact reduced cost is confirmed
    positive, and optimality is always decided by an exact scan.  Any
    improving column is a valid choice under the lexicographic ratio test,
    so the floats affect speed only.
    """

    def __init__(self, rows: Sequence[Sequence[int]], columns, use_flint: bool = True):
        self.columns = columns
        self.mat = None
        if use_flint and flint is not None and rows:
            self.mat = flint.fmpz_mat([list(r) + [1] for r in rows])
        self.approx = np.array([[float(x) for x in r] + [1.0] for r in rows], dtype=float) if rows else None

    def _exact(self, U: list[int], skip: list[bool], bland: bool) -> int:
        if self.mat is None:
            if bland:
                return _kernels.first_positive(U, self.columns, skip)
            return _kernels.best_positive(U, self.columns, skip)
        vals = (self.mat * flint.fmpz_mat([[x] for x in U])).entries()
        best, best_val = -1, 0
        for j, v in enumerate(vals):
            if v > best_val and not skip[j]:
                if bland:
                    return j
                best, best_val = j, v
        return best

    def enter(self, U: list[int], skip: list[bool], bland: bool) -> int:
        if not bland and self.approx is not None:
            scale = max(abs(x) for x in U) or 1
            red = self.approx @ np.array([x / scale for x in U])
            red[np.asarray(skip, dtype=bool)] = -np.inf
            j = int(np.argmax(red))
            if red[j] > 0 and sum(U[r] * v for r, v in self.columns[j]) > 0:
                return j
        return self._exact(U, skip, bland)


def _lex_less(ri: list[int], ai: int, rr: list[int], ar: int) -> bool:
    """ri / ai < rr / ar lexicographically, for positive ai, ar."""
    for x, y in zip(ri, rr):
        lhs, rhs = x * ar, y * ai
        if lhs != rhs:
            return lhs < rhs
    return False


def solve_strict(
    rows: Sequence[Sequence[int]], max_iterations: int = 1_000_000, rule: str = "lex", use_flint: bool = True
) -> FeasibleResult | InfeasibleResult:
    """Decide A f > 0 for integer rows A (m x p); see module docstring."""
    if rule not in PIVOT_RULES:
        raise ValueError(f"unknown pivot rule {rule!r}")
    bland = rule == "bland"
    m = len(rows)
    if m == 0:
        return FeasibleResult([], 0)
    p = len(rows[0])
    q = p + 1  # constraint rows
    # Sparse columns of the y variables: (row index, value).
    columns = [[(c, v) for c, v in enumerate(r) if v] + [(p, 1)] for r in rows]
    pricer = _Pricer(rows, columns, use_flint)
    # Variables 0..m-1 are y, m..m+q-1 are artificials (in that order for Bland).
    basis = [m + i for i in range(q)]
    # B^-1 = N / D and x_B = beta / D with D = det(B).
    N = [[int(i == j) for j in range(q)] for i in range(q)]
    beta = [0] * p + [1]
    D = 1
    in_basis = [False] * m
    it = 0
    while True:
        it += 1
        if it > max_iterations:
            raise RuntimeError("simplex iteration limit reached")
        s = 1 if D > 0 else -1
        # Multipliers u = c_B B^-1 = U / |D| with c = 1 on artificials.
        U = [0] * q
        for i, b in enumerate(basis):
            if b >= m:
                Ni = N[i]
                for j in range(q):
                    U[j] += Ni[j]
        if s < 0:
            U = [-x for x in U]
        # For y_j the reduced cost is -u.M_j; for artificial i it is 1 - u_i.
        enter = pricer.enter(U, in_basis, bland)
        if enter < 0:
            for i in range(q):
                if m + i not in basis and U[i] > abs(D):
                    enter = m + i
                    break
        if enter < 0:
            break
        # alpha = N a_enter, so B^-1 a_enter = alpha / D.
        if enter < m:
            alpha = [0] * q
            for r, v in columns[enter]:
                for i in range(q):
                    x = N[i][r]
                    if x:
                        alpha[i] += x * v
        else:
            alpha = [N[i][enter - m] for i in range(q)]
        # Ratio test over rows with alpha_i / D > 0.  Bland breaks ties by
        # the smallest basic variable; the lexicographic rule compares the
        # rows of [x_B, B^-1] / a_i, which start lexicographically positive.
        r = -1
        for i in range(q):
            ai = s * alpha[i]
            if ai <= 0:
                continue
            if r < 0:
                r = i
                continue
            ar = s * alpha[r]
            lhs, rhs = s * beta[i] * ar, s * beta[r] * ai
            if lhs != rhs:
                if lhs < rhs:
                    r = i
            elif bland:
                if basis[i] < basis[r]:
                    r = i
            elif _lex_less([s * x for x in N[i]], ai, [s * x for x in N[r]], ar):
                r = i
        if r < 0:
            raise RuntimeError("phase-one problem reported unbounded")
        # Fraction-free update: the new determinant is alpha_r, and every
        # updated numerator is an integer multiple of the old determinant.
        ar = alpha[r]
        Nr, br = N[r], beta[r]
        for i in range(q):
            if i == r:
                continue
            ai = alpha[i]
            if ai:
                N[i] = [(ar * x - ai * y) // D for x, y in zip(N[i], Nr)]
                beta[i] = (ar * beta[i] - ai * br) // D
            elif ar != D:
                N[i] = [ar * x // D for x in N[i]]
                beta[i] = ar * beta[i] // D
        D = ar
        if basis[r] < m:
            in_basis[basis[r]] = False
        basis[r] = enter
        if enter < m:
            in_basis[enter] = True
    objective = sum(Fraction(x, D) for b, x in zip(basis, beta) if b >= m)
    if objective == 0:
        y = {b: Fraction(x, D) for b, x in zip(basis, beta) if b < m and x != 0}
        return InfeasibleResult(dict(sorted(y.items())), it)
    u = [Fraction(x, abs(D)) for x in U]
    z = u[p]
    f = [-g / z for g in u[:p]]
    return FeasibleResult(f, it)
