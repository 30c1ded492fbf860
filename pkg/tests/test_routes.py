import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowlattice.dag import build_cycle, build_path, enumerate_ample_framings, is_lab_framing
from flowlattice.diagram import CoherenceDiagram
from flowlattice.errors import ContractError
from flowlattice.routes import (
    anomalous_routes,
    coherent,
    common_components,
    count_routes,
    dkk_triangulation,
    enumerate_routes,
    find_route,
    g_vector,
    g_vector_from_flow,
    long_exceptional_routes,
    route_pair,
    to_json,
)

ks = st.lists(st.integers(1, 3), min_size=1, max_size=3).map(tuple)
dags = st.one_of(
    ks.map(build_path),
    st.lists(st.integers(1, 3), min_size=1, max_size=1).map(lambda h: build_cycle(tuple(h) * 2)),
    st.tuples(st.integers(1, 3), st.integers(1, 3)).map(build_cycle),
)

# route totals, frozen from the dynamic-programming count
ROUTE_TOTALS = {
    (1,): 8,
    (2,): 13,
    (4,): 26,
    (1, 1): 12,
    (2, 2): 22,
    (3, 4, 2): 50,
}


@pytest.mark.parametrize("k,total", sorted(ROUTE_TOTALS.items()))
def test_route_totals(k, total):
    assert len(enumerate_routes(build_path(k))) == total


def test_cycle_route_totals():
    assert len(enumerate_routes(build_cycle((1, 1)))) == 8
    assert len(enumerate_routes(build_cycle((3, 2)))) == 24


@given(dags)
def test_enumeration_matches_dynamic_programming(d):
    routes = enumerate_routes(d)
    assert len(routes) == count_routes(d)
    assert len({r.edge_ids for r in routes}) == len(routes)


def test_caracol_six_exceptionals():
    # Path(6): (1⁻,7⁺) and (i,i) for i = 1..7
    d = build_path((6,))
    exc = sorted(str(route_pair(d, r)) for r in enumerate_routes(d) if r.is_exceptional)
    assert exc == sorted(["(1⁻,7⁺)"] + [f"({i},{i})" for i in range(1, 8)])


@settings(max_examples=40)
@given(dags)
def test_coherence_is_symmetric_and_exceptionals_cohere_with_all(d):
    routes = enumerate_routes(d)
    for R in routes:
        for S in routes:
            assert coherent(d, R, S).coherent == coherent(d, S, R).coherent
        if R.is_exceptional:
            assert all(coherent(d, R, S) for S in routes)


@settings(max_examples=40)
@given(dags)
def test_lab_routes_switch_at_most_twice(d):
    assert max(r.switches for r in enumerate_routes(d)) <= 2


@given(dags)
def test_g_vector_agrees_with_flow_map(d):
    m = len(d.edges)
    for r in enumerate_routes(d):
        assert g_vector(d, r) == g_vector_from_flow(d, r.indicator(m))


def test_g_vector_kernel_on_framings_of_path_22():
    # every ample framing: the flow map and the route-walk formula agree
    for f in list(enumerate_ample_framings(build_path((2, 2))))[:16]:
        m = len(f.edges)
        for r in enumerate_routes(f):
            assert g_vector(f, r) == g_vector_from_flow(f, r.indicator(m))


def test_conflict_witness_on_path_2():
    d = build_path((2,))
    cd = CoherenceDiagram(d)
    R, S = cd.routes[cd.box("1", "3")], cd.routes[cd.box("2", "3⁺")]
    c = coherent(d, R, S)
    assert not c and c.conflict_at == (2, 3)
    assert common_components(R, S) == [(0, 0), (2, 3), (4, 4)]


def test_find_route_resolves_parallel_edges():
    d = build_path((2,))
    with pytest.raises(ContractError):
        find_route(d, (0, 1, 2, 3, 4))
    R = find_route(d, (0, 1, 2, 3, 4), names=["1⁻", "3⁺"])
    assert R.is_exceptional


def test_hexagon_cliques():
    d = build_cycle((1, 1))
    cliques = dkk_triangulation(d)
    assert len(cliques) == 6
    # both exceptional routes lie in every maximal clique
    exc = {i for i, r in enumerate(enumerate_routes(d)) if r.is_exceptional}
    assert len(exc) == 2 and all(exc <= set(c) and len(c) == 4 for c in cliques)


def test_anomalous_routes_cycle_32():
    # eight anomalous routes with pairs built from 1± and 4±
    d = build_cycle((3, 2))
    names = sorted(str(route_pair(d, r)) for r in anomalous_routes(d))
    assert len(names) == 8
    assert all(set(n.strip("()").split(",")) <= {"1⁺", "1⁻", "4⁺", "4⁻"} for n in names)
    assert len(long_exceptional_routes(d)) == 2


def test_anomalous_conflicts_cycle_32():
    # anomalous routes conflicting with three given routes
    d = build_cycle((3, 2))
    anom = anomalous_routes(d)
    by_name = {str(route_pair(d, r)): r for r in anom}
    expected = {
        "(1⁻,4⁻)": {"(1⁺,4⁺)", "(4⁺,1⁻)", "(4⁺,1⁺)"},
        "(1⁺,4⁻)": {"(4⁻,1⁻)", "(4⁺,1⁻)", "(4⁺,1⁺)"},
        "(1⁺,4⁺)": {"(1⁻,4⁻)", "(4⁻,1⁻)", "(4⁺,1⁻)"},
    }
    for name, want in expected.items():
        R = by_name[name]
        got = {n for n, S in by_name.items() if not coherent(d, R, S)}
        assert got == want


def test_route_pair_needs_lab_framing():
    d = next(f for f in enumerate_ample_framings(build_path((2, 2))) if not is_lab_framing(f))
    bad = [r for r in enumerate_routes(d) if len({d.edges[e].label for e in r.edge_ids[1:-1]}) > 1]
    with pytest.raises(ContractError):
        route_pair(d, bad[0])


def test_routes_json_fields():
    data = to_json(build_path((1,)))
    assert len(data) == 8
    assert set(data[0]) == {"id", "edges", "g", "exceptional", "pair"}


@pytest.mark.parametrize("source", ["claw", "path22"])
def test_cliques_are_full_dimensional_for_other_framings(source):
    from flowlattice.dag import claw_dag
    from flowlattice.geometry import cached_hull, flow_polytope

    framings = list(enumerate_ample_framings(claw_dag() if source == "claw" else build_path((2, 2))))
    for d in framings[:: 1 if source == "claw" else 8]:
        F = flow_polytope(d)
        m = len(d.edges)
        routes = enumerate_routes(d)
        for c in dkk_triangulation(d):
            assert cached_hull([routes[i].indicator(m) for i in c]).dim == F.dim == len(c) - 1
            assert set().union(*(routes[i].edge_set for i in c)) == set(range(m))
