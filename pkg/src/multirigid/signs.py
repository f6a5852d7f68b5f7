"""Certified signs of determinants and of square-solve coordinates.

Signs are first read off rigorous ball enclosures (Arb, through
python-flint); a ball is trusted only when it excludes zero, in which case
the sign is proven.  Anything undecided falls back to exact integer
arithmetic.  ``MULTIRIGID_EXACT=1`` disables the balls entirely.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Sequence

from . import _kernels

try:
    import flint
except ImportError:  # exact integer kernels only
    flint = None

EXACT_ONLY = os.environ.get("MULTIRIGID_EXACT", "") not in ("", "0")
BALL_PRECISIONS = (128, 512)

# Counters for reports and tests: how often each path decided a sign.
stats = {"ball": 0, "exact": 0}


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _ball_sign(b) -> int | None:
    if b > 0:
        return 1
    if b < 0:
        return -1
    return None


def use_balls() -> bool:
    return flint is not None and not EXACT_ONLY


def exact_det(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 1
    if flint is not None:
        return int(flint.fmpz_mat([list(r) for r in rows]).det())
    return _kernels.det(rows)


def exact_solve(vectors: Sequence[Sequence[int]], rhs: Sequence[int]) -> tuple[int, list[int]]:
    """``(det, nums)`` with sum_g (nums[g]/det) vectors[g] = rhs; det 0 if singular."""
    return _kernels.solve(vectors, rhs)


def det_sign(rows: Sequence[Sequence[int]]) -> int:
    """Sign of the determinant of a square integer matrix (rows)."""
    if not rows:
        return 1
    if use_balls():
        M = flint.fmpz_mat([list(r) for r in rows])
        old = flint.ctx.prec
        try:
            for prec in BALL_PRECISIONS:
                flint.ctx.prec = prec
                s = _ball_sign(flint.arb_mat(M).det())
                if s is not None:
                    stats["ball"] += 1
                    return s
        finally:
            flint.ctx.prec = old
    stats["exact"] += 1
    return _sgn(exact_det(rows))


def solve_signs(vectors: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[int] | None:
    """Signs of x in sum_g x_g vectors[g] = rhs; None if the vectors are dependent."""
    n = len(vectors)
    if n == 0:
        return []
    if use_balls():
        # Columns are the vectors.
        A = flint.fmpz_mat([[vectors[g][r] for g in range(n)] for r in range(n)])
        b = flint.fmpz_mat([[x] for x in rhs])
        old = flint.ctx.prec
        try:
            for prec in BALL_PRECISIONS:
                flint.ctx.prec = prec
                try:
                    x = flint.arb_mat(A).solve(flint.arb_mat(b))
                except ZeroDivisionError:  # singular or not certifiably invertible
                    continue
                signs = [_ball_sign(x[i, 0]) for i in range(n)]
                if None not in signs:
                    stats["ball"] += 1
                    return signs
        finally:
            flint.ctx.prec = old
    stats["exact"] += 1
    d, nums = exact_solve(vectors, rhs)
    if d == 0:
        return None
    s = _sgn(d)
    return [_sgn(v) * s for v in nums]


def solve_fractions(vectors: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[Fraction] | None:
    d, nums = exact_solve(vectors, rhs)
    if d == 0:
        return None
    return [Fraction(v, d) for v in nums]
