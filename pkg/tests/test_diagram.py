import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowlattice.checks import Instance, geometric_class
from flowlattice.corpus import cycle, path
from flowlattice.dag import build_cycle, build_path, enumerate_ample_framings, is_lab_framing
from flowlattice.diagram import CoherenceDiagram, random_pull_order
from flowlattice.errors import ContractError
from flowlattice.routes import coherent

dags = st.one_of(
    st.lists(st.integers(1, 3), min_size=1, max_size=3).map(lambda k: build_path(tuple(k))),
    st.tuples(st.integers(1, 3), st.integers(1, 3)).map(build_cycle),
    st.tuples(st.integers(1, 2), st.integers(1, 2)).map(lambda h: build_cycle(h * 2)),
)


def test_caracol_six_outer_corners_are_exceptional():
    cd = CoherenceDiagram(build_path((6,)))
    assert cd.is_skew_ferrers()
    assert cd.outer_corners() == cd.exceptional_ids
    assert str(cd.boxes[cd.box("1-", "7+")]) == "(1⁻,7⁺)"


def test_cycle_32_repeated_coordinates():
    # a route on the 2-leg and one on the 1-leg share row 1⁻ and a column 4 position
    cd = CoherenceDiagram(build_cycle((3, 2)))
    a, b = cd.boxes[cd.box("1-", "4-")], cd.boxes[cd.box("4-", "1-")]
    assert (a.row, a.col) == (b.row, b.col)
    assert (a.band, b.band) == ("main", "bottom")


def test_cycle_32_overlapping_diagonal_regions():
    # overlaps of diagonal regions among anomalous boxes
    cd = CoherenceDiagram(build_cycle((3, 2)))
    b = cd.box
    assert cd.relations(b("4+", "1-"), b("1+", "4-")) == {"NW", "SE"}
    assert cd.relations(b("4+", "1+"), b("1-", "4-")) == {"NW", "NE"}


def test_cycle_3423_glue_adjacency():
    # (1⁻,2) and (12,1⁻) are neighbours across the glued edge
    cd = CoherenceDiagram(build_cycle((3, 4, 2, 3)))
    i, j = cd.box("1-", "2"), cd.box("12", "1-")
    assert cd.relations(i, j) == {"W"}
    assert cd.relations(j, i) == {"E"}


@settings(max_examples=30, deadline=None)
@given(dags)
def test_region_symmetries(d):
    cd = CoherenceDiagram(d)
    n = len(cd.boxes)
    opposite = {"N": "S", "E": "W", "NW": "SE", "NE": "SW"}
    opposite.update({v: k for k, v in opposite.items()})
    for i in range(n):
        assert not cd.region(i, "N") & cd.region(i, "S")
        assert not cd.region(i, "E") & cd.region(i, "W")
        assert i not in cd.region(i, "N") | cd.region(i, "E")
        for j in range(n):
            for rel in cd.relations(i, j):
                assert rel in cd.relations(j, opposite[rel]) or i in cd.region(j, opposite[rel])


@settings(max_examples=30, deadline=None)
@given(dags)
def test_diagonal_regions_disjoint_off_anomalies(d):
    cd = CoherenceDiagram(d)
    diag = ("NW", "NE", "SW", "SE")
    for i in range(len(cd.boxes)):
        if cd.boxes[i].anomalous:
            continue
        for a, b in itertools.combinations(diag, 2):
            common = cd.region(i, a) & cd.region(i, b)
            assert all(cd.boxes[j].anomalous for j in common)


@settings(max_examples=30, deadline=None)
@given(dags)
def test_prediction_conflict_matches_coherence(d):
    cd = CoherenceDiagram(d)
    for i, j in itertools.combinations(range(len(cd.boxes)), 2):
        assert cd.predict(i, j).conflict != coherent(d, cd.routes[i], cd.routes[j]).coherent


@pytest.mark.parametrize("spec", [path(1), path(2), path(1, 1), cycle(1, 1), cycle(2, 2), cycle(1, 1, 1, 1)], ids=lambda s: s.name)
def test_prediction_matches_geometry(spec):
    inst = Instance(spec)
    bad = []
    for i, j in itertools.combinations(range(len(inst.routes)), 2):
        if inst.cd.predict(i, j).kind != geometric_class(inst, i, j):
            bad.append((i, j))
    assert bad == []


def test_squarettes_are_quadrilateral_faces():
    inst = Instance(cycle(2, 2))
    P = inst.P
    for i, j in itertools.combinations(range(len(inst.routes)), 2):
        p = inst.cd.predict(i, j)
        if p.kind == "conflict_quadrilateral":
            face = P.face_vertices(P.minimal_face([inst.g[i], inst.g[j]]))
            assert set(face) == {inst.g[k] for k in p.squarette}


def test_anomalous_pair_missed_by_regions():
    # (1⁻,4⁻) and (1⁺,4⁺) conflict, yet no diagonal region relates them;
    # predict still classifies them from the frozen anomalous table
    d = build_cycle((3, 2))
    cd = CoherenceDiagram(d)
    i, j = cd.box("1-", "4-"), cd.box("1+", "4+")
    assert not coherent(d, cd.routes[i], cd.routes[j])
    assert cd.relations(i, j) & {"NW", "SE"} == set()
    assert cd.predict(i, j).kind == "conflict_full_polytope"


def test_cyclic_shift_invariance():
    def histogram(k):
        cd = CoherenceDiagram(build_cycle(k))
        n = len(cd.boxes)
        return Counter(cd.predict(i, j).kind for i, j in itertools.combinations(range(n), 2))

    assert histogram((2, 1, 1, 2)) == histogram((1, 2, 2, 1))
    assert histogram((2, 1, 2, 1)) == histogram((1, 2, 1, 2))


@settings(max_examples=25, deadline=None)
@given(dags, st.integers(0, 10**6))
def test_random_pull_orders_use_valid_steps(d, seed):
    if d.kind == "cycle" and d.k == (1, 1):
        return
    cd = CoherenceDiagram(d)
    order = random_pull_order(cd, random.Random(seed))
    assert sorted(order) == sorted(set(range(len(cd.boxes))) - cd.exceptional_ids)
    for t, i in enumerate(order):
        assert cd.is_dkk_pull_step(order[:t], i)


@given(dags)
def test_canonical_order_is_a_pull_order(d):
    cd = CoherenceDiagram(d)
    order = cd.canonical_pull_order()
    if d.kind == "cycle" and d.k == (1, 1):
        assert order == []
        return
    for t, i in enumerate(order):
        assert cd.is_dkk_pull_step(order[:t], i)
    assert cd.is_closed_pull_set(order)


def test_pull_order_counts():
    # counts frozen from exhaustive enumeration
    assert list(CoherenceDiagram(build_path((1,))).enumerate_pull_orders()) == [[]]
    assert len(list(CoherenceDiagram(build_path((1, 1))).enumerate_pull_orders())) == 2
    assert len(list(CoherenceDiagram(build_path((2,))).enumerate_pull_orders())) == 8


def test_cycle_11_has_no_step_logic():
    cd = CoherenceDiagram(build_cycle((1, 1)))
    with pytest.raises(ContractError):
        cd.is_dkk_pull_step([], 0)
    assert list(cd.enumerate_pull_orders()) == [[]]


def test_non_lab_framing_is_rejected():
    d = next(f for f in enumerate_ample_framings(build_path((2, 2))) if not is_lab_framing(f))
    with pytest.raises(ContractError):
        CoherenceDiagram(d)


def test_renderings():
    cd = CoherenceDiagram(build_cycle((3, 2)))
    art = cd.to_ascii()
    assert art.count("●") == len(cd.exceptional_ids)
    assert art.count("◆") == sum(b.anomalous and not b.exceptional for b in cd.boxes)
    assert "~" in art
    assert "magenta" in cd.to_tikz()
    data = cd.to_json()
    assert data["glue"] and len(data["boxes"]) == 24
