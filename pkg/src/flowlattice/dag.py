"""Framed DAGs, focused on the Path(k) and Cycle(k) families.

Vertex 0 is the source and vertex n+1 the sink. Framings are ample and given
by edge labels in {1, 2} that differ on the two incoming and on the two
outgoing edges of every inner vertex.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .errors import InvalidDagError, InvalidParameterError

MINUS, PLAIN, PLUS = -1, 0, 1
_MARK = {MINUS: "⁻", PLAIN: "", PLUS: "⁺"}
_ASCII = {MINUS: "-", PLAIN: "", PLUS: "+"}


@dataclass(frozen=True, order=True)
class EdgeName:
    """Name of a source or sink edge; sorts as 1⁻ < 1 < 1⁺ < 2⁻ < ..."""

    base: int
    marker: int = PLAIN

    def __str__(self) -> str:
        return f"{self.base}{_MARK[self.marker]}"

    @property
    def ascii(self) -> str:
        return f"{self.base}{_ASCII[self.marker]}"

    @classmethod
    def parse(cls, text: str) -> "EdgeName":
        text = text.strip()
        for m, sym in ((MINUS, "⁻"), (PLUS, "⁺"), (MINUS, "-"), (PLUS, "+")):
            if text.endswith(sym):
                return cls(int(text[: -len(sym)]), m)
        return cls(int(text), PLAIN)


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int
    label: int


@dataclass(frozen=True)
class Leg:
    inner_route: tuple[int, ...]
    label: int


@dataclass(frozen=True, eq=False)
class FramedDag:
    """A full, amply framed DAG. Construct through build_path, build_cycle or general."""

    n_inner: int
    edges: tuple[Edge, ...]
    kind: str = "general"
    k: tuple[int, ...] = ()

    def __post_init__(self):
        _validate(self)

    @classmethod
    def general(cls, n_inner: int, edges: Sequence[tuple[int, int, int]]) -> "FramedDag":
        """Validated constructor from (tail, head, label) triples; ids follow input order."""
        return cls(n_inner, tuple(Edge(i, t, h, lab) for i, (t, h, lab) in enumerate(edges)))

    @property
    def source(self) -> int:
        return 0

    @property
    def sink(self) -> int:
        return self.n_inner + 1

    @property
    def inner_vertices(self) -> range:
        return range(1, self.n_inner + 1)

    def __eq__(self, other) -> bool:
        return isinstance(other, FramedDag) and (self.n_inner, self.edges) == (other.n_inner, other.edges)

    def __hash__(self) -> int:
        return hash((self.n_inner, self.edges))

    def __repr__(self) -> str:
        if self.kind in ("path", "cycle"):
            return f"{self.kind.capitalize()}{self.k}"
        return f"FramedDag(n_inner={self.n_inner}, edges={len(self.edges)})"

    @cached_property
    def out_edges(self) -> dict[int, list[Edge]]:
        out = defaultdict(list)
        for e in self.edges:
            out[e.tail].append(e)
        return dict(out)

    @cached_property
    def in_edges(self) -> dict[int, list[Edge]]:
        inn = defaultdict(list)
        for e in self.edges:
            inn[e.head].append(e)
        return dict(inn)

    def out_edge(self, v: int, label: int) -> Edge:
        return next(e for e in self.out_edges[v] if e.label == label)

    def in_edge(self, v: int, label: int) -> Edge:
        return next(e for e in self.in_edges[v] if e.label == label)

    def is_inner_edge(self, e: Edge) -> bool:
        return e.tail != self.source and e.head != self.sink

    @cached_property
    def edge_names(self) -> dict[int, EdgeName]:
        """Names of all source and sink edges."""
        names = {}
        s, t = self.source, self.sink
        for e in self.edges:
            if e.tail == s and e.head == t:
                raise InvalidDagError("edge from source straight to sink cannot be named")
            if e.tail == s:
                v = e.head
                short = self.out_edge(v, e.label).head == t
                names[e.id] = EdgeName(v, PLAIN if short else (MINUS if e.label == 2 else PLUS))
            elif e.head == t:
                v = e.tail
                short = self.in_edge(v, e.label).tail == s
                names[e.id] = EdgeName(v, PLAIN if short else (PLUS if e.label == 2 else MINUS))
        return names

    def name(self, edge_id: int) -> EdgeName:
        return self.edge_names[edge_id]

    def relabel(self, labels: Sequence[int]) -> "FramedDag":
        """Same graph with new labels, indexed by edge id."""
        return FramedDag(
            self.n_inner,
            tuple(Edge(e.id, e.tail, e.head, labels[e.id]) for e in self.edges),
            self.kind,
            self.k,
        )

    def to_json(self) -> dict:
        names = self.edge_names
        return {
            "schema": "dag.v1",
            "kind": self.kind,
            "k": list(self.k),
            "n_inner": self.n_inner,
            "edges": [
                {"id": e.id, "tail": e.tail, "head": e.head, "label": e.label}
                | ({"name": str(names[e.id])} if e.id in names else {})
                for e in self.edges
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FramedDag":
        if data.get("schema", "dag.v1") != "dag.v1":
            raise InvalidParameterError(f"unsupported schema {data.get('schema')!r}")
        edges = tuple(
            Edge(e["id"], e["tail"], e["head"], e["label"]) for e in sorted(data["edges"], key=lambda e: e["id"])
        )
        return cls(data["n_inner"], edges, data.get("kind", "general"), tuple(data.get("k", ())))


def _validate(d: FramedDag) -> None:
    n = d.n_inner
    if n < 1:
        raise InvalidDagError("need at least one inner vertex")
    if [e.id for e in d.edges] != list(range(len(d.edges))):
        raise InvalidDagError("edge ids must be 0..m-1 in order")
    indeg, outdeg = defaultdict(list), defaultdict(list)
    for e in d.edges:
        if not (0 <= e.tail <= n + 1 and 0 <= e.head <= n + 1) or e.tail == e.head:
            raise InvalidDagError(f"bad endpoints on edge {e}")
        if e.label not in (1, 2):
            raise InvalidDagError(f"label of edge {e.id} must be 1 or 2")
        outdeg[e.tail].append(e.label)
        indeg[e.head].append(e.label)
    if indeg[0] or outdeg[n + 1]:
        raise InvalidDagError("source must have no in-edges and sink no out-edges")
    for v in range(1, n + 1):
        if sorted(indeg[v]) != [1, 2] or sorted(outdeg[v]) != [1, 2]:
            raise InvalidDagError(f"vertex {v} needs in- and out-edges labeled exactly 1 and 2")
    if topological_order(n + 2, [(e.tail, e.head) for e in d.edges]) is None:
        raise InvalidDagError("graph has a directed cycle")


def topological_order(nv: int, arcs: Sequence[tuple[int, int]]) -> list[int] | None:
    indeg = [0] * nv
    succ = defaultdict(list)
    for t, h in arcs:
        indeg[h] += 1
        succ[t].append(h)
    stack = [v for v in range(nv) if indeg[v] == 0]
    order = []
    while stack:
        v = stack.pop()
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return order if len(order) == nv else None


def _check_k(k: Sequence[int]) -> tuple[int, ...]:
    k = tuple(k)
    if not k:
        raise InvalidParameterError("k must be nonempty")
    if any(not isinstance(x, int) or x < 1 for x in k):
        raise InvalidParameterError(f"entries of k must be positive integers, got {k}")
    return k


def _leg_edges(k: tuple[int, ...], wrap: int | None) -> list[tuple[int, int, int]]:
    edges = []
    b = 1
    for j, kj in enumerate(k, start=1):
        for i in range(b, b + kj):
            nxt = i + 1 if wrap is None or i + 1 <= wrap else 1
            edges.append((i, nxt, 2) if j % 2 else (nxt, i, 1))
        b += kj
    return edges


def _complete(n: int, inner: list[tuple[int, int, int]], parallel_first_label: int) -> list[tuple[int, int, int]]:
    if parallel_first_label not in (1, 2):
        raise InvalidParameterError("parallel_first_label must be 1 or 2")
    ins, outs = defaultdict(list), defaultdict(list)
    for t, h, lab in inner:
        outs[t].append(lab)
        ins[h].append(lab)
    edges = list(inner)
    for v in range(1, n + 1):
        for have, make in ((ins[v], lambda lab: (0, v, lab)), (outs[v], lambda lab: (v, n + 1, lab))):
            if len(have) > 2 or len(set(have)) != len(have):
                raise InvalidDagError(f"vertex {v} cannot be completed to an ample full vertex")
            edges.extend(make(lab) for lab in (1, 2) if lab not in have)
    return sorted(edges, key=lambda e: (e[0], e[1], e[2] != parallel_first_label))


def _assemble(n, triples, kind, k) -> FramedDag:
    return FramedDag(n, tuple(Edge(i, t, h, lab) for i, (t, h, lab) in enumerate(triples)), kind, k)


def build_path(k: Sequence[int], *, parallel_first_label: int = 1) -> FramedDag:
    """Path(k) with the lab framing; the first inner route carries label 2.

    ``parallel_first_label`` picks the label on the lower-id edge of each
    parallel pair.
    """
    k = _check_k(k)
    n = sum(k) + 1
    return _assemble(n, _complete(n, _leg_edges(k, None), parallel_first_label), "path", k)


def build_cycle(k: Sequence[int], *, parallel_first_label: int = 1) -> FramedDag:
    """Cycle(k) with the lab framing; k must have even length."""
    k = _check_k(k)
    if len(k) % 2:
        raise InvalidParameterError(f"Cycle needs an even number of inner routes, got {len(k)}")
    n = sum(k)
    return _assemble(n, _complete(n, _leg_edges(k, n), parallel_first_label), "cycle", k)


@dataclass(frozen=True)
class InnerGraph:
    vertices: tuple[int, ...]
    arcs: tuple[tuple[int, int, int], ...]  # (edge id, tail, head)
    shape: str  # "path", "cycle" or "other"
    length: int


def inner_graph(d: FramedDag) -> InnerGraph:
    arcs = tuple((e.id, e.tail, e.head) for e in d.edges if d.is_inner_edge(e))
    verts = tuple(d.inner_vertices)
    adj = defaultdict(list)
    for _, t, h in arcs:
        adj[t].append(h)
        adj[h].append(t)
    comps = _components(verts, adj)
    m = len(arcs)
    if len(comps) != 1:
        shape = "other"
    elif m == len(verts) - 1 and all(len(adj[v]) <= 2 for v in verts):
        shape = "path"
    elif m == len(verts) and all(len(adj[v]) == 2 for v in verts):
        shape = "cycle"
    else:
        shape = "other"
    return InnerGraph(verts, arcs, shape, m)


def _components(verts, adj) -> list[set[int]]:
    seen, comps = set(), []
    for v in verts:
        if v in seen:
            continue
        comp, stack = set(), [v]
        while stack:
            u = stack.pop()
            if u in comp:
                continue
            comp.add(u)
            stack.extend(adj[u])
        seen |= comp
        comps.append(comp)
    return comps


def inner_routes(d: FramedDag) -> list[tuple[Edge, ...]]:
    """Maximal directed paths of the inner graph, as edge tuples."""
    inner = [e for e in d.edges if d.is_inner_edge(e)]
    succ = defaultdict(list)
    has_pred = set()
    for e in inner:
        succ[e.tail].append(e)
        has_pred.add(e.head)
    starts = sorted({e.tail for e in inner} - has_pred)
    out = []

    def walk(v, acc):
        if not succ[v]:
            out.append(tuple(acc))
            return
        for e in succ[v]:
            walk(e.head, acc + [e])

    for v in starts:
        walk(v, [])
    return out


def legs(d: FramedDag) -> list[Leg]:
    out = []
    for route in inner_routes(d):
        labels = {e.label for e in route}
        if len(labels) == 1:
            out.append(Leg((route[0].tail,) + tuple(e.head for e in route), route[0].label))
    return out


def is_lab_framing(d: FramedDag) -> bool:
    return all(len({e.label for e in r}) == 1 for r in inner_routes(d))


def enumerate_ample_framings(d: FramedDag | tuple[int, Sequence[tuple[int, int]]]) -> Iterator[FramedDag]:
    """Every {1,2} labeling making each in-pair and out-pair distinct.

    Accepts a FramedDag (its labels are ignored) or (n_inner, [(tail, head)]).
    An edge between inner vertices sits in one out-pair and one in-pair, so
    choices are correlated; this brute-forces all 2^|E| labelings and filters.
    """
    if isinstance(d, FramedDag):
        n, arcs = d.n_inner, [(e.tail, e.head) for e in d.edges]
    else:
        n, arcs = d[0], list(d[1])
    m = len(arcs)
    if m > 24:
        from .errors import ResourceLimitError

        raise ResourceLimitError(f"{m} edges is too many for exhaustive framing enumeration")
    pairs = defaultdict(list)
    for i, (t, h) in enumerate(arcs):
        if 1 <= t <= n:
            pairs[("out", t)].append(i)
        if 1 <= h <= n:
            pairs[("in", h)].append(i)
    for labels in itertools.product((1, 2), repeat=m):
        if all(labels[a] != labels[b] for a, b in pairs.values()):
            yield FramedDag(n, tuple(Edge(i, t, h, labels[i]) for i, (t, h) in enumerate(arcs)))


def split_components(d: FramedDag) -> list[FramedDag]:
    """One full DAG per connected component of the inner graph.

    Inner vertices are renumbered in increasing order.
    """
    return [c for c, _ in split_components_with_ids(d)]


def split_components_with_ids(d: FramedDag) -> list[tuple[FramedDag, list[int]]]:
    """Components together with the parent edge id of each component edge."""
    adj = defaultdict(list)
    for e in d.edges:
        if d.is_inner_edge(e):
            adj[e.tail].append(e.head)
            adj[e.head].append(e.tail)
    comps = sorted((sorted(c) for c in _components(list(d.inner_vertices), adj)), key=lambda c: c[0])
    out = []
    for comp in comps:
        renum = {v: i + 1 for i, v in enumerate(comp)}
        renum[d.source] = 0
        sink = len(comp) + 1
        edges, ids = [], []
        for e in d.edges:
            if (e.tail in renum and e.tail != d.source) or (e.head in renum):
                t = renum[e.tail]
                h = sink if e.head == d.sink else renum[e.head]
                edges.append(Edge(len(edges), t, h, e.label))
                ids.append(e.id)
        out.append((FramedDag(len(comp), tuple(edges)), ids))
    return out


def disjoint_union(a: FramedDag, b: FramedDag) -> FramedDag:
    """Identify sources and sinks of two full DAGs; b's inner vertices follow a's."""
    na, nb = a.n_inner, b.n_inner
    sink = na + nb + 1

    def mv_a(v):
        return sink if v == a.sink else v

    def mv_b(v):
        return 0 if v == 0 else sink if v == b.sink else v + na

    triples = [(mv_a(e.tail), mv_a(e.head), e.label) for e in a.edges]
    triples += [(mv_b(e.tail), mv_b(e.head), e.label) for e in b.edges]
    return FramedDag.general(na + nb, triples)


def claw_dag() -> tuple[int, list[tuple[int, int]]]:
    """Unlabeled full DAG whose inner graph is a claw.

    Center 1 has in-edges from inner vertices 2 and 3 and an out-edge to
    inner vertex 4; every vertex is completed to in/out-degree 2 by source
    and sink edges.
    """
    n = 4
    inner = [(2, 1), (3, 1), (1, 4)]
    ins, outs = defaultdict(int), defaultdict(int)
    for t, h in inner:
        outs[t] += 1
        ins[h] += 1
    arcs = list(inner)
    for v in range(1, n + 1):
        arcs += [(0, v)] * (2 - ins[v])
        arcs += [(v, n + 1)] * (2 - outs[v])
    return n, sorted(arcs)


def to_tikz(d: FramedDag) -> str:
    """Horizontal layout: inner routes stacked top to bottom, alternating direction."""
    pos = {}
    x, y = 0, 0
    step = 1
    if d.kind in ("path", "cycle"):
        v = 1
        pos[v] = (x, y)
        for j, kj in enumerate(d.k):
            for _ in range(kj):
                v += 1
                x += step
                y -= 1
                if v <= d.n_inner:
                    pos[v] = (x, y)
            step = -step
    else:
        for v in d.inner_vertices:
            pos[v] = (v, 0)
    xs = [p[0] for p in pos.values()] or [0]
    ys = [p[1] for p in pos.values()] or [0]
    pos[d.source] = (min(xs) - 2, (max(ys) + min(ys)) / 2)
    pos[d.sink] = (max(xs) + 2, (max(ys) + min(ys)) / 2)
    names = d.edge_names
    lines = ["\\begin{tikzpicture}[>=stealth]"]
    for v, (px, py) in sorted(pos.items()):
        lbl = "s" if v == d.source else "t" if v == d.sink else str(v)
        lines.append(f"  \\node[circle,draw,inner sep=1pt] (v{v}) at ({px},{py}) {{{lbl}}};")
    seen = defaultdict(int)
    for e in d.edges:
        bend = seen[(e.tail, e.head)]
        seen[(e.tail, e.head)] += 1
        opt = "->" + (f",bend left={15 * bend}" if bend else "")
        tag = f"{e.label}" + (f" ({names[e.id].ascii})" if e.id in names else "")
        lines.append(f"  \\draw[{opt}] (v{e.tail}) to node[midway,font=\\tiny] {{{tag}}} (v{e.head});")
    lines.append("\\end{tikzpicture}")
    return "\n".join(lines)
