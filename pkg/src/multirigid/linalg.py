"""Exact linear algebra: rank, row dependences, square solves.

Inputs are rows of rationals (ints or Fractions).  Rank and determinants
use fraction-free Bareiss elimination on rows cleared of denominators;
dependences come from a rational reduced row echelon form.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Hashable, Mapping, Sequence

from . import _kernels
from .errors import CorankNotOne, NotIndependent, NotInSpan

try:
    import flint
except ImportError:  # rational elimination only
    flint = None

# Test mode re-verifies every dependence by substitution.
CHECK = os.environ.get("MULTIRIGID_TEST_MODE", "") not in ("", "0")


def clear_denominators(row: Sequence) -> list[int]:
    """Row times the positive lcm of its denominators."""
    s = lcm(*(Fraction(x).denominator for x in row)) if row else 1
    return [int(Fraction(x) * s) for x in row]


def primitive(row: Sequence) -> tuple[list[int], Fraction]:
    """Primitive integer vector c*row with c>0; returns (vector, c)."""
    ints = clear_denominators(row)
    s = lcm(*(Fraction(x).denominator for x in row)) if row else 1
    g = gcd(*ints) or 1
    return [x // g for x in ints], Fraction(s, g)


def integer_rank(rows: Sequence[Sequence[int]], column_order: Sequence[int] | None = None) -> int:
    """Rank by Bareiss elimination; pivots taken column by column."""
    M = [list(r) for r in rows]
    if not M:
        return 0
    ncols = len(M[0])
    cols = list(range(ncols)) if column_order is None else list(column_order)
    r = 0
    prev = 1
    for c in cols:
        if r == len(M):
            break
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        rp = M[r]
        pk = rp[c]
        for i in range(r + 1, len(M)):
            ri = M[i]
            a = ri[c]
            for j in range(ncols):
                ri[j] = (ri[j] * pk - a * rp[j]) // prev
        prev = pk
        r += 1
    return r


def rank(rows: Sequence[Sequence] | Mapping[Hashable, Sequence]) -> int:
    if isinstance(rows, Mapping):
        rows = list(rows.values())
    return integer_rank([clear_denominators(r) for r in rows])


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with the first-nonzero-column pivot rule."""
    M = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not M:
        return M, pivots
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        if r == len(M):
            break
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        rr = M[r]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                a = M[i][c]
                M[i] = [x - a * y for x, y in zip(M[i], rr)]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def left_kernel(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of {lam : sum_i lam_i rows_i = 0}."""
    m = len(rows)
    if m == 0:
        return []
    if flint is not None:
        return _left_kernel_flint(rows)
    return _left_kernel_rref(rows)


def _left_kernel_flint(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    # Row i is scaled by s_i > 0 to clear denominators; mu solves the
    # integer problem, and lam_i = mu_i * s_i solves the original one.
    scales = [lcm(*(Fraction(x).denominator for x in r)) if len(r) else 1 for r in rows]
    ints = [[int(Fraction(x) * s) for x in r] for r, s in zip(rows, scales)]
    m, ncols = len(rows), len(rows[0])
    if ncols == 0:
        return [[Fraction(int(i == j)) for i in range(m)] for j in range(m)]
    X, nullity = flint.fmpz_mat([[ints[i][c] for i in range(m)] for c in range(ncols)]).nullspace()
    return [[Fraction(int(X[i, j]) * scales[i]) for i in range(m)] for j in range(nullity)]


def _left_kernel_rref(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    m = len(rows)
    ncols = len(rows[0])
    transposed = [[Fraction(rows[i][c]) for i in range(m)] for c in range(ncols)]
    R, pivots = rref(transposed)
    free = [j for j in range(m) if j not in set(pivots)]
    basis = []
    for f in free:
        lam = [Fraction(0)] * m
        lam[f] = Fraction(1)
        for row, p in zip(R, pivots):
            lam[p] = -row[f]
        basis.append(lam)
    return basis


def _labels_and_rows(rows) -> tuple[list, list]:
    if isinstance(rows, Mapping):
        labels = sorted(rows)
        return labels, [list(rows[x]) for x in labels]
    rows = list(rows)
    return list(range(len(rows))), rows


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class DependenceVector:
    """Exact row dependence; the smallest support label has coefficient +1."""

    coefficients: dict

    @property
    def support(self) -> frozenset:
        return frozenset(e for e, c in self.coefficients.items() if c != 0)

    def signs(self) -> dict:
        return {e: _sign(c) for e, c in self.coefficients.items() if c != 0}

    def sign(self, label) -> int:
        return _sign(self.coefficients.get(label, 0))

    def to_json(self) -> dict:
        from .rigidity import format_rational

        def key(e):
            return f"{e[0]},{e[1]}" if isinstance(e, tuple) else str(e)

        supp = sorted(self.support)
        return {
            "support": [key(e) for e in supp],
            "signs": {key(e): "+" if self.coefficients[e] > 0 else "-" for e in supp},
            "coefficients": {key(e): format_rational(self.coefficients[e]) for e in supp},
        }


def verify_dependence(dep: DependenceVector, rows) -> bool:
    labels, data = _labels_and_rows(rows)
    if not data:
        return True
    total = [Fraction(0)] * len(data[0])
    for lab, r in zip(labels, data):
        c = dep.coefficients.get(lab, 0)
        if c:
            total = [t + c * x for t, x in zip(total, r)]
    return all(t == 0 for t in total)


def unique_dependence(rows: Sequence[Sequence] | Mapping[Hashable, Sequence]) -> DependenceVector:
    """The dependence of a corank-one row family, normalized deterministically."""
    labels, data = _labels_and_rows(rows)
    ker = left_kernel(data)
    if len(ker) != 1:
        raise CorankNotOne(len(ker))
    lam = ker[0]
    lead = next(c for c in lam if c != 0)
    lam = [c / lead for c in lam]
    dep = DependenceVector({lab: c for lab, c in zip(labels, lam)})
    if CHECK and not verify_dependence(dep, rows):
        raise AssertionError("dependence failed exact substitution")
    return dep


@dataclass(frozen=True)
class SignedCircuit:
    support: frozenset
    signs: dict

    @classmethod
    def from_dependence(cls, dep: DependenceVector) -> "SignedCircuit":
        return cls(dep.support, dep.signs())

    def negated(self) -> "SignedCircuit":
        return SignedCircuit(self.support, {e: -s for e, s in self.signs.items()})

    def to_json(self) -> dict:
        def key(e):
            return f"{e[0]},{e[1]}" if isinstance(e, tuple) else str(e)

        return {"support": [key(e) for e in sorted(self.support)], "signs": {key(e): "+" if s > 0 else "-" for e, s in sorted(self.signs.items())}}


def solve_in_basis(basis_rows: Sequence[Sequence] | Mapping[Hashable, Sequence], target: Sequence) -> dict:
    """Coefficients x with sum_e x_e row(e) = target (rows independent)."""
    labels, data = _labels_and_rows(basis_rows)
    m = len(data)
    ncols = len(target)
    if m == 0:
        if any(Fraction(x) != 0 for x in target):
            raise NotInSpan("nonzero target with empty basis")
        return {}
    # Solve on the columns where the basis has full rank.
    R, pivots = rref(data)
    if len(pivots) < m:
        raise NotIndependent(f"basis rows have rank {len(pivots)} < {m}")
    sub = [[Fraction(r[c]) for c in pivots] for r in data]
    s = lcm(*(x.denominator for r in sub for x in r), *(Fraction(target[c]).denominator for c in pivots))
    d, nums = _kernels.solve([[int(x * s) for x in r] for r in sub], [int(Fraction(target[c]) * s) for c in pivots])
    x = [Fraction(v, d) for v in nums]
    for c in range(ncols):
        if sum(x[g] * Fraction(data[g][c]) for g in range(m)) != Fraction(target[c]):
            raise NotInSpan("target is not in the span of the basis rows")
    return {lab: v for lab, v in zip(labels, x)}


def sign_changes(seq: Sequence) -> int:
    """Number of sign changes in a sequence, ignoring zeros."""
    signs = [_sign(x) for x in seq if x != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)
