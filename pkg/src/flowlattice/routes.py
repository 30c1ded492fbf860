"""Routes of a framed DAG: coherence, g-vectors, route pairs and DKK cliques."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .dag import EdgeName, FramedDag, topological_order
from .errors import ContractError


@dataclass(frozen=True)
class Route:
    edge_ids: tuple[int, ...]
    vertices: tuple[int, ...]
    labels: tuple[int, ...]

    @property
    def is_exceptional(self) -> bool:
        return len(set(self.labels)) == 1

    @property
    def switches(self) -> int:
        return sum(a != b for a, b in zip(self.labels, self.labels[1:]))

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edge_ids)

    def indicator(self, m: int) -> tuple[int, ...]:
        s = self.edge_set
        return tuple(int(i in s) for i in range(m))


def make_route(d: FramedDag, edge_ids: Sequence[int]) -> Route:
    es = [d.edges[i] for i in edge_ids]
    if not es or es[0].tail != d.source or es[-1].head != d.sink:
        raise ContractError("route must run from source to sink")
    for a, b in zip(es, es[1:]):
        if a.head != b.tail:
            raise ContractError("route edges are not consecutive")
    return Route(tuple(edge_ids), (es[0].tail,) + tuple(e.head for e in es), tuple(e.label for e in es))


@lru_cache(maxsize=64)
def enumerate_routes(d: FramedDag) -> tuple[Route, ...]:
    """All source-to-sink paths, lexicographic in edge ids."""
    out = []

    def walk(v, acc):
        if v == d.sink:
            out.append(make_route(d, acc))
            return
        for e in sorted(d.out_edges.get(v, ()), key=lambda e: e.id):
            walk(e.head, acc + [e.id])

    walk(d.source, [])
    return tuple(sorted(out, key=lambda r: r.edge_ids))


def count_routes(d: FramedDag) -> int:
    """Number of routes by dynamic programming over a topological order."""
    order = topological_order(d.n_inner + 2, [(e.tail, e.head) for e in d.edges])
    ways = {v: 0 for v in order}
    ways[d.source] = 1
    for v in order:
        for e in d.out_edges.get(v, ()):
            ways[e.head] += ways[v]
    return ways[d.sink]


def find_route(d: FramedDag, vertices: Sequence[int], names: Iterable[str] = ()) -> Route:
    """The route with the given vertex sequence; ``names`` resolves parallel source/sink edges."""
    wanted = {EdgeName.parse(x) for x in names}
    hits = [r for r in enumerate_routes(d) if r.vertices == tuple(vertices)]
    if wanted:
        hits = [r for r in hits if wanted <= {d.edge_names.get(i) for i in r.edge_ids}]
    if len(hits) != 1:
        raise ContractError(f"{len(hits)} routes match {tuple(vertices)} {sorted(map(str, wanted))}")
    return hits[0]


# -- coherence ---------------------------------------------------------------


def common_components(R: Route, S: Route) -> list[tuple[int, int]]:
    """Connected components of R ∩ S as (first, last) index ranges into R.vertices."""
    sv, se = set(S.vertices), S.edge_set
    comps: list[list[int]] = []
    for i, v in enumerate(R.vertices):
        if v not in sv:
            continue
        if comps and comps[-1][1] == i - 1 and R.edge_ids[i - 1] in se:
            comps[-1][1] = i
        else:
            comps.append([i, i])
    return [(a, b) for a, b in comps]


@dataclass(frozen=True)
class Coherence:
    coherent: bool
    conflict_at: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.coherent


def coherent(d: FramedDag, R: Route, S: Route) -> Coherence:
    """Compare framing orders before and after every maximal common subroute.

    The framing order at a vertex is label 1 before label 2. Components
    through the source or sink are skipped: there the partial routes on one
    side coincide. Returns the first conflict witness [u, v] along R.
    """
    if R == S:
        return Coherence(True)
    pos_s = {v: i for i, v in enumerate(S.vertices)}
    for a, b in common_components(R, S):
        u, v = R.vertices[a], R.vertices[b]
        if u == d.source or v == d.sink:
            continue
        ia, ib = pos_s[u], pos_s[v]
        before = R.labels[a - 1] < S.labels[ia - 1]
        after = R.labels[b] < S.labels[ib]
        if before != after:
            return Coherence(False, (u, v))
    return Coherence(True)


@lru_cache(maxsize=64)
def coherence_matrix(d: FramedDag) -> tuple[tuple[bool, ...], ...]:
    routes = enumerate_routes(d)
    n = len(routes)
    m = [[True] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = coherent(d, routes[i], routes[j]).coherent
    return tuple(tuple(r) for r in m)


def dkk_triangulation(d: FramedDag) -> list[tuple[int, ...]]:
    """Maximal cliques of the coherence graph (route indices), sorted."""
    adj = coherence_matrix(d)
    n = len(adj)
    nbrs = [frozenset(j for j in range(n) if j != i and adj[i][j]) for i in range(n)]
    out: list[tuple[int, ...]] = []

    def bk(r: frozenset, p: set, x: set):
        if not p and not x:
            out.append(tuple(sorted(r)))
            return
        pivot = max(p | x, key=lambda u: (len(nbrs[u] & p), -u))
        for v in sorted(p - nbrs[pivot]):
            bk(r | {v}, p & nbrs[v], x & nbrs[v])
            p = p - {v}
            x = x | {v}

    bk(frozenset(), set(range(n)), set())
    return sorted(out)


# -- g-vectors ---------------------------------------------------------------


def g_vector(d: FramedDag, R: Route) -> tuple[int, ...]:
    """-1 at v for 1 -> v -> 2, +1 for 2 -> v -> 1, else 0."""
    g = [0] * d.n_inner
    for i in range(1, len(R.vertices) - 1):
        a, b = R.labels[i - 1], R.labels[i]
        if a != b:
            g[R.vertices[i] - 1] = 1 if a == 2 else -1
    return tuple(g)


def g_vector_from_flow(d: FramedDag, x: Sequence[int]) -> tuple[int, ...]:
    """Linear map on flows: inflow on the label-2 in-edge minus outflow on the label-2 out-edge."""
    return tuple(x[d.in_edge(v, 2).id] - x[d.out_edge(v, 2).id] for v in d.inner_vertices)


# -- route pairs ---------------------------------------------------------------


@dataclass(frozen=True, order=True)
class RoutePair:
    """Route pair; ``leg_label`` is 1 or 2, or 0 for a short exceptional route."""

    first: EdgeName
    second: EdgeName
    leg_label: int

    @property
    def source_name(self) -> EdgeName:
        return self.second if self.leg_label == 1 else self.first

    @property
    def sink_name(self) -> EdgeName:
        return self.first if self.leg_label == 1 else self.second

    def __str__(self) -> str:
        return f"({self.first},{self.second})"


def leg_label(d: FramedDag, R: Route) -> int:
    inner = {lab for lab, e in zip(R.labels, R.edge_ids) if d.is_inner_edge(d.edges[e])}
    if len(inner) > 1:
        raise ContractError("route pairs need every route to stay on one leg")
    if inner:
        return inner.pop()
    if R.is_exceptional:
        return 0
    v = R.vertices[1]
    around = {e.label for e in d.in_edges[v] + d.out_edges[v] if d.is_inner_edge(e)}
    if len(around) != 1:
        raise ContractError(f"no unique leg at vertex {v}")
    return around.pop()


def route_pair(d: FramedDag, R: Route) -> RoutePair:
    a = d.edge_names[R.edge_ids[0]]
    b = d.edge_names[R.edge_ids[-1]]
    lab = leg_label(d, R)
    if lab == 0:
        return RoutePair(a, b, 0)
    return RoutePair(a, b, 2) if lab == 2 else RoutePair(b, a, 1)


def long_exceptional_routes(d: FramedDag) -> list[Route]:
    return [r for r in enumerate_routes(d) if r.is_exceptional and len(r.edge_ids) > 2]


def anomalous_routes(d: FramedDag) -> list[Route]:
    """Routes inside the union of the two long exceptional routes of Cycle(k1, k2)."""
    if d.kind != "cycle" or len(d.k) != 2:
        return []
    union = frozenset().union(*(r.edge_set for r in long_exceptional_routes(d)))
    return [r for r in enumerate_routes(d) if r.edge_set <= union]


def edge_union(routes: Iterable[Route]) -> frozenset[int]:
    return frozenset().union(*(r.edge_set for r in routes))


def routes_in_edge_set(d: FramedDag, edges: Iterable[int]) -> list[Route]:
    es = frozenset(edges)
    return [r for r in enumerate_routes(d) if r.edge_set <= es]


def to_json(d: FramedDag) -> list[dict]:
    lab = _is_lab(d)
    out = []
    for i, r in enumerate(enumerate_routes(d)):
        item = {"id": i, "edges": list(r.edge_ids), "g": list(g_vector(d, r)), "exceptional": r.is_exceptional}
        if lab:
            p = route_pair(d, r)
            item["pair"] = [str(p.first), str(p.second)]
        out.append(item)
    return out


def _is_lab(d: FramedDag) -> bool:
    from .dag import is_lab_framing

    return d.kind in ("path", "cycle") and is_lab_framing(d)
