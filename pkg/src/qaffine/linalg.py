"""Ranks of matrices over Q(v) and over the coefficient field.

``scalar_rank`` is exact: a random rational specialization can only lower
the rank, so a full-rank evaluation settles the answer; otherwise the
matrix is cleared of denominators and reduced by fraction-free (Bareiss)
elimination over Q[v].
"""

from __future__ import annotations

import random
from typing import Sequence

from gmpy2 import mpq

from .scalars import PoleError, Scalar, _pexact_div, _pgcd, _pmul, _psub, evaluate

__all__ = ["field_rank", "scalar_rank", "bareiss_rank", "rank_at_point", "rank_at_random_points", "random_point"]


def field_rank(rows: Sequence[Sequence]) -> tuple[int, list[int]]:
    """Rank and pivot columns of a matrix over Q or Q(i) by Gaussian elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((k for k in range(r, len(m)) if m[k][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for k in range(r + 1, len(m)):
            x = m[k][c]
            if x != 0:
                f = x / piv
                row_r, row_k = m[r], m[k]
                for j in range(c, ncols):
                    if row_r[j] != 0:
                        row_k[j] = row_k[j] - f * row_r[j]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return r, pivots


def random_point(rng: random.Random) -> mpq:
    while True:
        num = rng.randint(2, 10**6)
        den = rng.randint(1, 10**6)
        x = mpq(num, den)
        if x not in (0, 1, -1):
            return x


def rank_at_point(matrix: Sequence[Sequence[Scalar]], v0) -> tuple[int, list[int]]:
    return field_rank([[evaluate(s, v0) for s in row] for row in matrix])


def rank_at_random_points(matrix, rng: random.Random, samples: int = 3) -> int:
    """Max rank over random rational specializations (a lower bound, tight w.h.p.)."""
    best = 0
    for _ in range(samples):
        while True:
            try:
                r, _ = rank_at_point(matrix, random_point(rng))
                break
            except PoleError:
                continue
        best = max(best, r)
    return best


def _row_to_polys(row: Sequence[Scalar]) -> list[list]:
    """Scale a row by a common denominator and monomial so every entry is a polynomial."""
    nz = [s for s in row if s]
    if not nz:
        return [[] for _ in row]
    lcm = [mpq(1)]
    for s in nz:
        if len(s.den) > 1:
            g = _pgcd(lcm, s.den)
            lcm = _pexact_div(_pmul(lcm, s.den), g)
    low = min(s.shift for s in nz)
    out = []
    for s in row:
        if not s:
            out.append([])
            continue
        factor = _pexact_div(lcm, s.den) if len(s.den) > 1 else lcm
        p = _pmul(list(s.num), factor)
        out.append([mpq(0)] * (s.shift - low) + p)
    return out


def bareiss_rank(matrix: Sequence[Sequence[Scalar]]) -> tuple[int, list[int]]:
    """Fraction-free elimination over Q[v] with column-greedy pivoting."""
    m = [_row_to_polys(row) for row in matrix]
    if not m:
        return 0, []
    nrows, ncols = len(m), len(m[0])
    prev = [mpq(1)]
    pivots = []
    k = 0
    for c in range(ncols):
        p = next((r for r in range(k, nrows) if m[r][c]), None)
        if p is None:
            continue
        m[k], m[p] = m[p], m[k]
        piv = m[k][c]
        rowk = m[k]
        for r in range(k + 1, nrows):
            rowr = m[r]
            a = rowr[c]
            for j in range(c + 1, ncols):
                t = _psub(_pmul(piv, rowr[j]), _pmul(a, rowk[j]) if a else [])
                rowr[j] = _pexact_div(t, prev) if t and prev != [1] else t
            rowr[c] = []
        prev = piv
        pivots.append(c)
        k += 1
        if k == nrows:
            break
    return k, pivots


def scalar_rank(matrix: Sequence[Sequence[Scalar]], rng: random.Random | None = None) -> tuple[int, list[int]]:
    """Exact rank over the function field, plus pivot columns."""
    if not matrix or not matrix[0]:
        return 0, []
    rng = rng or random.Random(0)
    full = min(len(matrix), len(matrix[0]))
    for _ in range(3):
        try:
            r, piv = rank_at_point(matrix, random_point(rng))
        except PoleError:
            continue
        if r == full:
            return r, piv
        break
    return bareiss_rank(matrix)
