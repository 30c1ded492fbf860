"""Exact two-phase simplex method over Fractions with Bland's rule."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def maximize(A: Sequence[Sequence[int]], b: Sequence[int], c: Sequence[int]) -> Fraction | None:
    """max c.x subject to A x = b, x >= 0. Returns None when infeasible.

    The feasible region is assumed bounded in the objective direction (true
    for the convex-combination programs used here).
    """
    m, n = len(A), len(c)
    rows = []
    for i in range(m):
        r = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            r, rhs = [-v for v in r], -rhs
        rows.append(r + [Fraction(int(i == j)) for j in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    total = n + m

    def pivot(pr: int, pc: int):
        p = rows[pr][pc]
        rows[pr] = [v / p for v in rows[pr]]
        for i in range(m):
            if i != pr and rows[i][pc] != 0:
                f = rows[i][pc]
                rows[i] = [a - f * bb for a, bb in zip(rows[i], rows[pr])]
        basis[pr] = pc

    def run(cost: list[Fraction], allowed: int) -> Fraction:
        while True:
            # reduced costs for max: c_j - c_B B^-1 A_j
            best = None
            for j in range(allowed):
                if j in basis:
                    continue
                red = cost[j] - sum(cost[basis[i]] * rows[i][j] for i in range(m))
                if red > 0:
                    best = j
                    break
            if best is None:
                return sum(cost[basis[i]] * rows[i][-1] for i in range(m))
            ratios = [(rows[i][-1] / rows[i][best], basis[i], i) for i in range(m) if rows[i][best] > 0]
            if not ratios:
                raise ArithmeticError("objective unbounded")
            _, _, pr = min(ratios)
            pivot(pr, best)

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    if run(phase1, total) < 0:
        return None
    # drive remaining artificial variables out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if rows[i][j] != 0), None)
            if j is not None:
                pivot(i, j)
    keep = [i for i in range(m) if basis[i] < n]
    rows[:] = [rows[i] for i in keep]
    basis[:] = [basis[i] for i in keep]
    m = len(rows)
    cost = [Fraction(v) for v in c] + [Fraction(0)] * (total - n)
    return run(cost, n)
