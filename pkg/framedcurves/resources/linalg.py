"""Exact linear algebra over Q and over GF(2)."""
from fractions import Fraction
from typing import List, Sequence

import numpy as np

from framedcurves.errors import FramedCurvesError


def solve_exact(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> List[Fraction]:
    """Solve the square system ``rows @ x = rhs`` over the rationals."""
    n = len(rows)
    if any(len(r) != n for r in rows) or len(rhs) != n:
        raise FramedCurvesError("system is not square")
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise FramedCurvesError("singular system")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        lead = aug[col][col]
        aug[col] = [v / lead for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def solve_integral(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> List[int]:
    solution = solve_exact(rows, rhs)
    if any(x.denominator != 1 for x in solution):
        raise FramedCurvesError(f"solution is not integral: {solution}")
    return [int(x) for x in solution]


def transpose(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    return [list(col) for col in zip(*rows)]


def mod2_rank(vectors: Sequence[Sequence[int]]) -> int:
    if not vectors:
        return 0
    m = np.array(vectors, dtype=np.int64) % 2
    m = m.astype(np.uint8)
    rank = 0
    rows, cols = m.shape
    for col in range(cols):
        pivots = np.nonzero(m[rank:, col])[0]
        if pivots.size == 0:
            continue
        pivot = rank + pivots[0]
        m[[rank, pivot]] = m[[pivot, rank]]
        others = np.nonzero(m[:, col])[0]
        for r in others:
            if r != rank:
                m[r] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank
