import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowlattice.checks import Instance
from flowlattice.corpus import cycle, path
from flowlattice.errors import ContractError
from flowlattice.geometry import cached_hull, hull, lattice_points, normalized_volume
from flowlattice.pulling import (
    IteratedPullingCheck,
    Subdivision,
    cell_neighboring,
    equals_triangulation,
    is_triangulation,
    is_unimodular,
    pull,
    pull_sequence,
    refines,
    separated,
    simplices_intersect_properly,
    verify_iterated_pulling,
    volume_sum,
)

SQUARE = hull([(0, 0), (2, 0), (0, 2), (2, 2)])

polys2 = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=3, max_size=7)
polys3 = st.lists(st.tuples(*[st.integers(-1, 2)] * 3), min_size=4, max_size=8)


def test_pull_square_at_centre_and_corner():
    S = pull(Subdivision.trivial(SQUARE), (1, 1))
    assert len(S) == 4 and is_triangulation(S)
    T = pull(Subdivision.trivial(SQUARE), (0, 0))
    assert len(T) == 2
    assert volume_sum(S) == volume_sum(T) == normalized_volume(SQUARE) == 8


def test_pull_outside_is_rejected():
    with pytest.raises(ContractError):
        pull(Subdivision.trivial(SQUARE), (3, 0))


def test_pull_is_idempotent_and_simplices_are_fixed():
    S = pull(Subdivision.trivial(SQUARE), (1, 1))
    assert pull(S, (1, 1)).cells == S.cells
    tri = hull([(0, 0), (1, 0), (0, 1)])
    assert pull(Subdivision.trivial(tri), (0, 0)).cells == Subdivision.trivial(tri).cells


@settings(max_examples=40, deadline=None)
@given(polys2, st.randoms(use_true_random=False))
def test_planar_pulling_conserves_volume_and_refines(points, rnd):
    P = hull(points)
    if P.dim < 2:
        return
    pts = lattice_points(P)
    rnd.shuffle(pts)
    S = Subdivision.trivial(P)
    for x in pts:
        T = pull(S, x)
        assert refines(T, S)
        assert volume_sum(T) == normalized_volume(P)
        S = T
    # pulling every lattice point of a polygon gives a unimodular triangulation
    assert is_unimodular(S)
    assert S.vertices == set(pts)


@settings(max_examples=25, deadline=None)
@given(polys3, st.randoms(use_true_random=False))
def test_pulling_vertices_triangulates(points, rnd):
    P = hull(points)
    if P.dim < 3:
        return
    verts = list(P.vertices)
    rnd.shuffle(verts)
    S = pull_sequence(P, verts)
    assert is_triangulation(S)
    assert volume_sum(S) == normalized_volume(P)
    cells = sorted(S.cells, key=sorted)
    for a, b in itertools.combinations(cells, 2):
        assert simplices_intersect_properly(a, b)


@given(polys2)
def test_refines_is_reflexive(points):
    P = hull(points)
    S = Subdivision.trivial(P)
    assert refines(S, S)
    T = pull(S, P.vertices[0])
    assert refines(T, T) and refines(T, S)


def test_coarser_subdivision_does_not_refine():
    S = Subdivision.trivial(SQUARE)
    T = pull(S, (1, 1))
    assert not refines(S, T)


def test_proper_intersection_examples():
    assert simplices_intersect_properly([(0, 0), (1, 0), (0, 1)], [(1, 0), (0, 1), (1, 1)])
    assert not simplices_intersect_properly([(0, 0), (2, 0), (0, 2)], [(1, 0), (0, 1), (2, 2)])
    assert simplices_intersect_properly([(0, 0), (1, 0), (0, 1)], [(5, 5), (6, 5), (5, 6)])
    with pytest.raises(ContractError):
        simplices_intersect_properly([(0, 0), (1, 1), (2, 2)], [(0, 0), (1, 0), (0, 1)])


def test_separation_after_centre_pull():
    S = pull(Subdivision.trivial(SQUARE), (1, 1))
    assert separated(S, (0, 0), (2, 2))
    assert cell_neighboring(S, (0, 0), (1, 1))


def test_iterated_pulling_criterion_on_square():
    S = Subdivision.trivial(SQUARE)
    T = pull_sequence(SQUARE, [(1, 1)])
    assert verify_iterated_pulling(S, T, (1, 1)).agree


def test_iterated_pulling_criterion_needs_no_new_vertices_on_edges():
    # T has the vertex (1,1) inside the new edge (0,0)-(2,2) of pull(S; (0,0)):
    # T still refines the pull although (0,0) misses two of its triangles
    S = Subdivision.trivial(SQUARE)
    T = pull_sequence(SQUARE, [(1, 1)])
    r = verify_iterated_pulling(S, T, (0, 0))
    assert r.refines_after_pull and not r.criterion


def test_iterated_pulling_on_dkk():
    inst = Instance(path(2))
    trivial = Subdivision.trivial(inst.P)
    assert verify_iterated_pulling(trivial, inst.dkk, inst.origin) == IteratedPullingCheck(True, True)
    after = inst.origin_pull
    for v in inst.P.vertices:
        r = verify_iterated_pulling(after, inst.dkk, v)
        assert r.agree
    r = verify_iterated_pulling(trivial, inst.dkk, inst.P.vertices[0])
    assert (r.refines_after_pull, r.criterion) == (False, False)


def test_hexagon_origin_pull_is_dkk():
    inst = Instance(cycle(1, 1))
    S = inst.origin_pull
    assert len(S) == 6 and is_unimodular(S)
    assert equals_triangulation(S, inst.dkk)


def test_subdivision_json():
    S = pull(Subdivision.trivial(SQUARE), (1, 1))
    data = S.to_json("square")
    assert data["schema"] == "subdivision.v1" and len(data["cells"]) == 4
    assert [tuple(p) for p in data["points"]] == sorted(S.vertices)
    assert all(cached_hull(c).dim == 2 for c in S.cells)
