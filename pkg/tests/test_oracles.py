"""Cross-checks against independent third-party implementations."""

import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from flowlattice.dag import build_cycle, build_path
from flowlattice.geometry import hull, normalized_volume
from flowlattice.intlinalg import rank
from flowlattice.routes import coherence_matrix, dkk_triangulation

pts3 = st.lists(st.tuples(*[st.integers(-3, 3)] * 3), min_size=5, max_size=12)
pts4 = st.lists(st.tuples(*[st.integers(-2, 2)] * 4), min_size=6, max_size=12)


@pytest.mark.parametrize("d", [build_path((2,)), build_path((2, 2)), build_cycle((2, 2)), build_cycle((3, 2))], ids=repr)
def test_cliques_match_networkx(d):
    adj = coherence_matrix(d)
    G = nx.Graph()
    G.add_nodes_from(range(len(adj)))
    G.add_edges_from((i, j) for i in range(len(adj)) for j in range(i + 1, len(adj)) if adj[i][j])
    assert sorted(tuple(sorted(c)) for c in nx.find_cliques(G)) == dkk_triangulation(d)


def _full(points, dim):
    base = points[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in points[1:]]
    return rank(diffs) == dim


@settings(max_examples=40, deadline=None)
@given(pts3)
def test_hull_and_volume_match_qhull_3d(points):
    if not _full(points, 3):
        return
    P, Q = hull(points), ConvexHull(points)
    assert P.vertex_set == {tuple(points[i]) for i in Q.vertices}
    assert normalized_volume(P) == round(Q.volume * math.factorial(3))


@settings(max_examples=25, deadline=None)
@given(pts4)
def test_hull_and_volume_match_qhull_4d(points):
    if not _full(points, 4):
        return
    P, Q = hull(points), ConvexHull(points)
    assert P.vertex_set == {tuple(points[i]) for i in Q.vertices}
    assert normalized_volume(P) == round(Q.volume * math.factorial(4))
