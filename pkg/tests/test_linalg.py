import itertools
import math
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from flowlattice.intlinalg import (
    det,
    gcd_of_maximal_minors,
    integer_kernel,
    inverse,
    primitive,
    rank,
    saturated_basis,
)
from flowlattice.lp import maximize

small = st.integers(-4, 4)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def leibniz(m):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        total += (-1) ** inv * math.prod(m[i][perm[i]] for i in range(n))
    return total


def test_primitive_keeps_sign():
    assert primitive([4, -6, 0]) == (2, -3, 0)
    assert primitive([0, 0]) == (0, 0)


def test_rank_of_dependent_rows():
    assert rank([[1, 2, 3], [2, 4, 6], [0, 1, 1]]) == 2


@given(st.integers(1, 4).flatmap(square))
def test_det_matches_permutation_expansion(m):
    assert det(m) == leibniz(m)


@given(st.integers(1, 3).flatmap(square))
def test_inverse_when_invertible(m):
    if det(m) == 0:
        return
    inv = inverse(m)
    n = len(m)
    for i in range(n):
        for j in range(n):
            assert sum(Fraction(m[i][k]) * inv[k][j] for k in range(n)) == int(i == j)


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=3))
def test_integer_kernel_is_a_saturated_basis(rows):
    ker = integer_kernel(rows, 4)
    assert len(ker) == 4 - rank(rows)
    for v in ker:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    if ker:
        assert gcd_of_maximal_minors(ker) == 1
    # every small kernel vector is an integer combination of the basis
    for x in itertools.product(range(-2, 3), repeat=4):
        if all(sum(a * b for a, b in zip(r, x)) == 0 for r in rows):
            assert rank(ker + [x]) == len(ker)


def test_saturation_of_a_doubled_vector():
    assert saturated_basis([(2, 4)], 2) in ([(1, 2)], [(-1, -2)])
    assert gcd_of_maximal_minors([(2, 0), (0, 3)]) == 6


@settings(max_examples=60)
@given(
    st.lists(st.lists(st.integers(0, 3), min_size=3, max_size=3), min_size=1, max_size=2),
    st.lists(st.integers(0, 4), min_size=1, max_size=2),
    st.lists(st.integers(-3, 3), min_size=3, max_size=3),
)
def test_lp_matches_grid_search_on_bounded_boxes(A, b, c):
    # add x_i <= 3 through slack columns so the region is bounded
    m = min(len(A), len(b))
    A, b = A[:m], b[:m]
    rows = [r + [0, 0, 0] for r in A]
    for i in range(3):
        rows.append([int(i == j) for j in range(3)] + [int(i == j) for j in range(3)])
    rhs = list(b) + [3, 3, 3]
    got = maximize(rows, rhs, list(c) + [0, 0, 0])
    # the LP optimum is attained at a vertex; with these sizes every vertex
    # solves a 2x2 or smaller system, so check against rational enumeration
    best = None
    for basis in itertools.combinations(range(6), len(rows)):
        sub_m = [[r[j] for j in basis] for r in rows]
        if det(sub_m) == 0:
            continue
        inv = inverse(sub_m)
        xb = [sum(inv[i][k] * rhs[k] for k in range(len(rows))) for i in range(len(rows))]
        if any(v < 0 for v in xb):
            continue
        x = [Fraction(0)] * 6
        for j, v in zip(basis, xb):
            x[j] = v
        val = sum(ci * xi for ci, xi in zip(list(c) + [0, 0, 0], x))
        best = val if best is None else max(best, val)
    if best is None:
        # degenerate row sets can still be feasible; fall back to the integer grid for feasibility
        feasible = any(
            all(sum(a * v for a, v in zip(r, x)) == bb for r, bb in zip(A, b)) for x in itertools.product(range(4), repeat=3)
        )
        if not feasible:
            assert got is None
        return
    assert got == best


def test_lp_infeasible():
    assert maximize([[1, 1]], [-1], [1, 0]) is None
