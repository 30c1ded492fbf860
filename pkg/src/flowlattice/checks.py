"""Executable structural checks over corpus instances.

Each check returns a TheoremReport whose status is ``verified``,
``counterexample`` or ``skipped``. Counterexample witnesses hold the full
instance and seed, so ``replay`` reruns them exactly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

from .corpus import InstanceSpec, dim_cap
from .dag import FramedDag, claw_dag, enumerate_ample_framings, inner_graph, is_lab_framing, split_components_with_ids
from .diagram import CoherenceDiagram, random_pull_order
from .errors import ContractError, ResourceLimitError
from .geometry import (
    LatticePolytope,
    cached_hull,
    face_from_edge_set,
    flow_polytope,
    free_sum,
    g_polytope,
    is_compressed,
    is_lattice_cube,
    is_locally_anti_blocking,
    is_reflexive,
    join,
    lattice_points,
    lattice_points_by_slicing,
    normalized_volume,
    orthant_restriction,
    simplex_is_unimodular,
)
from .pulling import (
    Subdivision,
    equals_triangulation,
    is_unimodular,
    pull,
    pull_sequence,
    refines,
    simplices_intersect_properly,
    verify_iterated_pulling,
)
from .routes import (
    Route,
    coherent,
    common_components,
    dkk_triangulation,
    enumerate_routes,
    g_vector,
    long_exceptional_routes,
)

VERIFIED, COUNTEREXAMPLE, SKIPPED = "verified", "counterexample", "skipped"


@dataclass
class TheoremReport:
    check_id: str
    instance: InstanceSpec
    status: str
    detail: str = ""
    witness: dict = field(default_factory=dict)
    seed: int = 0

    def to_json(self) -> dict:
        return {
            "check": self.check_id,
            "title": CHECK_TITLES[self.check_id],
            "instance": self.instance.to_json(),
            "instance_name": self.instance.name,
            "status": self.status,
            "detail": self.detail,
            "seed": self.seed,
            "witness": self.witness,
        }


class Skip(Exception):
    pass


class Found(Exception):
    """Raised inside a check to report a counterexample."""

    def __init__(self, detail: str, witness: dict):
        super().__init__(detail)
        self.detail = detail
        self.witness = witness


class Instance:
    """Lazily computed data shared by the checks on one instance."""

    def __init__(self, spec: InstanceSpec, seed: int = 0):
        self.spec = spec
        self.seed = seed
        self.d: FramedDag = spec.build()

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}:{self.spec.name}")

    def need_geometry(self) -> None:
        if self.spec.combinatorial_only:
            raise Skip("instance is marked combinatorial-only")
        cap = dim_cap()
        if self.d.n_inner > cap:
            raise Skip(f"g-polytope dimension {self.d.n_inner} exceeds cap {cap}")

    def need_diagram(self) -> None:
        if self.spec.kind not in ("path", "cycle") or not is_lab_framing(self.d):
            raise Skip("needs a lab-framed Path or Cycle")

    def need_step_logic(self) -> None:
        self.need_diagram()
        if self.spec.kind == "cycle" and tuple(self.spec.k) == (1, 1):
            raise Skip("pull-step logic excludes Cycle(1,1)")

    @cached_property
    def routes(self) -> tuple[Route, ...]:
        return enumerate_routes(self.d)

    @cached_property
    def g(self) -> list[tuple[int, ...]]:
        return [g_vector(self.d, r) for r in self.routes]

    @cached_property
    def origin(self) -> tuple[int, ...]:
        return (0,) * self.d.n_inner

    @cached_property
    def P(self) -> LatticePolytope:
        return g_polytope(self.d)

    @cached_property
    def cd(self) -> CoherenceDiagram:
        return CoherenceDiagram(self.d)

    @cached_property
    def cliques(self) -> list[tuple[int, ...]]:
        return dkk_triangulation(self.d)

    @cached_property
    def dkk(self) -> Subdivision:
        cells = frozenset(frozenset(self.g[i] for i in c) for c in self.cliques)
        return Subdivision(self.P, cells)

    @cached_property
    def origin_pull(self) -> Subdivision:
        return pull(Subdivision.trivial(self.P), self.origin)

    def pulled(self, boxes) -> Subdivision:
        return pull_sequence(self.origin_pull, [self.g[i] for i in boxes])

    def canonical_points(self) -> list[tuple[int, ...]]:
        """Origin, then the canonical order when a diagram exists, else every vertex."""
        if self.spec.kind in ("path", "cycle") and is_lab_framing(self.d):
            return [self.origin] + [self.g[i] for i in self.cd.canonical_pull_order()]
        return [self.origin] + sorted(self.P.vertices)

    def edge_union(self, i: int, j: int) -> frozenset[int]:
        return self.routes[i].edge_set | self.routes[j].edge_set

    def has_exceptional_in(self, edges: frozenset[int]) -> bool:
        return any(r.is_exceptional and r.edge_set <= edges for r in self.routes)

    def pair_witness(self, i: int, j: int) -> dict:
        w = {"routes": [i, j], "edges": [list(self.routes[i].edge_ids), list(self.routes[j].edge_ids)]}
        if self.spec.kind in ("path", "cycle") and is_lab_framing(self.d):
            w["pairs"] = [str(self.cd.boxes[i].pair), str(self.cd.boxes[j].pair)]
        return w


def geometric_class(inst: Instance, i: int, j: int) -> str:
    """Classify a route pair from coherence and the minimal face of the g-polytope."""
    co = coherent(inst.d, inst.routes[i], inst.routes[j]).coherent
    P = inst.P
    f = P.minimal_face([inst.g[i], inst.g[j]])
    if P.is_whole(f):
        return "coherent_full_polytope" if co else "conflict_full_polytope"
    fd = P.face_dim(f)
    if not co:
        return "conflict_quadrilateral" if fd == 2 and len(f.vertices) == 4 else "conflict_other"
    return "coherent_edge" if fd == 1 else "coherent_nonedge"


def _pairs(n: int):
    return itertools.combinations(range(n), 2)


# -- the checks ------------------------------------------------------------------


def check_separation(inst: Instance) -> dict:
    """T1: separation after a pull happens exactly at points of the minimal face."""
    inst.need_geometry()
    S = Subdivision.trivial(inst.P)
    tested = 0
    for x in inst.canonical_points():
        verts = sorted(S.vertices)
        after = pull(S, x)
        for u, v in itertools.combinations(verts, 2):
            cell = next((c for c in S.cells if u in c and v in c), None)
            if cell is None:
                continue
            H = cached_hull(cell)
            f = H.minimal_face([u, v])
            in_face = H.contains(x) and f.facets <= H.tight_facets(x)
            predicted = x != u and x != v and in_face
            separated = not any(u in c and v in c for c in after.cells)
            tested += 1
            if predicted != separated:
                raise Found("separation disagrees with the minimal-face criterion", {"u": u, "v": v, "x": x, "history": list(S.history)})
        S = after
    return {"pairs_tested": tested, "steps": len(inst.canonical_points())}


def check_iterated_pulling(inst: Instance) -> dict:
    """T2: refinement of pull(S; v) by T agrees with the cone-point criterion."""
    inst.need_geometry()
    T = inst.dkk
    pts = inst.canonical_points()
    rng = inst.rng("T2")
    prefixes = sorted({0, 1} | set(rng.sample(range(len(pts) + 1), min(4, len(pts) + 1))))
    candidates = sorted(set(inst.P.vertices) | {inst.origin})
    tested = agree = 0
    used = []
    for p in prefixes:
        S = pull_sequence(inst.P, pts[:p])
        if not refines(T, S):
            continue  # outside the theorem's hypothesis
        used.append(p)
        for v in rng.sample(candidates, min(10, len(candidates))):
            r = verify_iterated_pulling(S, T, v)
            tested += 1
            if not r.agree:
                raise Found("refinement and criterion disagree", {"prefix": p, "v": v, "refines": r.refines_after_pull, "criterion": r.criterion})
            agree += r.refines_after_pull
    if not used:
        raise Skip("no sampled prefix is refined by DKK")
    return {"tested": tested, "refining": agree, "prefixes": used}


def check_lattice_points(inst: Instance) -> dict:
    """T3: the only lattice points are the origin and the vertices."""
    inst.need_geometry()
    pts = set(lattice_points(inst.P))
    other = set(lattice_points_by_slicing(inst.P))
    expected = set(inst.P.vertices) | {inst.origin}
    if pts != other:
        raise Found("lattice point enumerations disagree", {"scan_only": sorted(pts - other), "slice_only": sorted(other - pts)})
    if pts != expected:
        raise Found("extra lattice points", {"extra": sorted(pts - expected), "missing": sorted(expected - pts)})
    return {"lattice_points": len(pts), "vertices": len(inst.P.vertices)}


def _framing_sample(inst: Instance, d: FramedDag, limit: int) -> list[FramedDag]:
    arcs = [(e.tail, e.head) for e in d.edges]
    framings = list(enumerate_ample_framings((d.n_inner, arcs)))
    if len(framings) > limit:
        framings = inst.rng("framings").sample(framings, limit)
    return framings


def check_switches(inst: Instance) -> dict:
    """T4: LAB g-polytope iff every route switches at most twice iff every inner route is a leg."""
    geometric = True
    try:
        inst.need_geometry()
    except Skip:
        geometric = False
    if inst.spec.kind == "claw":
        framings = list(enumerate_ample_framings(claw_dag()))
    else:
        try:
            framings = [inst.d] + _framing_sample(inst, inst.d, 24 if geometric else 64)
        except ResourceLimitError:
            framings = [inst.d]
    seen = 0
    for d in framings:
        few = all(r.switches <= 2 for r in enumerate_routes(d))
        leg = is_lab_framing(d)
        lab = is_locally_anti_blocking(g_polytope(d)) if geometric else few
        seen += 1
        if not (lab == few == leg):
            raise Found("conditions disagree", {"labels": [e.label for e in d.edges], "lab": lab, "switch": few, "legs": leg})
    return {"framings": seen, "geometric": geometric}


def check_lab_characterization(inst: Instance) -> dict:
    """T5: a connected full DAG admits a LAB framing iff it is a Path or a Cycle."""
    inst.need_geometry()
    if len(split_components_with_ids(inst.d)) > 1:
        raise Skip("inner graph is disconnected")
    shape = inner_graph(inst.d).shape
    if inst.spec.kind == "claw":
        framings = list(enumerate_ample_framings(claw_dag()))
    elif inst.spec.kind == "general":
        framings = list(enumerate_ample_framings((inst.d.n_inner, [(e.tail, e.head) for e in inst.d.edges])))
    else:
        framings = [inst.d]
    lab = [d for d in framings if is_locally_anti_blocking(g_polytope(d))]
    expect = shape in ("path", "cycle")
    if bool(lab) != expect:
        w = {"shape": shape, "framings": len(framings), "lab_framings": len(lab)}
        if lab:
            w["labels"] = [e.label for e in lab[0].edges]
        raise Found("LAB framing existence does not match the inner-graph shape", w)
    return {"shape": shape, "framings": len(framings), "lab_framings": len(lab)}


def check_lab_compressed(inst: Instance) -> dict:
    """T6: for LAB P with interior origin, reflexive iff every orthant restriction is compressed."""
    inst.need_geometry()
    P = inst.P
    if P.dim > 6:
        raise Skip("orthant enumeration is limited to dimension 6")
    if not is_locally_anti_blocking(P):
        raise Skip("g-polytope is not locally anti-blocking")
    refl = is_reflexive(P)
    comp = True
    for sigma in itertools.product((1, -1), repeat=P.dim):
        if not is_compressed(orthant_restriction(P, sigma)):
            comp = False
            bad = sigma
            break
    if refl != comp:
        raise Found("reflexivity and compressed orthants disagree", {"reflexive": refl, "sigma": list(bad) if not comp else None})
    return {"reflexive": refl, "orthants": 2**P.dim}


def check_faces(inst: Instance) -> dict:
    """T7: edge-set faces agree with minimal faces; proper ones are (kappa-1)-cubes."""
    inst.need_geometry()
    P = inst.P
    n = len(inst.routes)
    cubes = 0
    for i, j in _pairs(n):
        E = inst.edge_union(i, j)
        ef = face_from_edge_set(inst.d, E, P)
        mf = P.minimal_face([inst.g[i], inst.g[j]])
        w = inst.pair_witness(i, j)
        if not ef.proper:
            if not P.is_whole(mf):
                raise Found("edge set covers an exceptional route but the minimal face is proper", w)
            continue
        if ef.face != mf:
            raise Found("edge-set face differs from the minimal face", w)
        gverts = {inst.g[inst.routes.index(r)] for r in ef.routes}
        if gverts != set(P.face_vertices(mf)):
            raise Found("routes in the edge set are not the face vertices", w)
        kappa = len(common_components(inst.routes[i], inst.routes[j]))
        if P.face_dim(mf) != kappa - 1 or not is_lattice_cube(sorted(gverts)):
            raise Found("minimal face is not a (kappa-1)-cube", dict(w, kappa=kappa, face_dim=P.face_dim(mf)))
        m = len(inst.d.edges)
        if not is_lattice_cube([r.indicator(m) for r in ef.routes]):
            raise Found("flow face is not a (kappa-1)-cube", dict(w, kappa=kappa))
        cubes += 1
    return {"pairs": n * (n - 1) // 2, "proper_faces": cubes}


def check_incoherence_square(inst: Instance) -> dict:
    """T8: minimal faces of route pairs are P, a quadrilateral (conflict) or an edge (coherent)."""
    inst.need_geometry()
    inst.need_diagram()
    P = inst.P
    bad = []
    for i, j in _pairs(len(inst.routes)):
        E = inst.edge_union(i, j)
        f = P.minimal_face([inst.g[i], inst.g[j]])
        if inst.has_exceptional_in(E):
            if not P.is_whole(f):
                raise Found("(i) fails: exceptional route in the edge union but proper face", inst.pair_witness(i, j))
            continue
        inside = [r for r in inst.routes if r.edge_set <= E]
        co = coherent(inst.d, inst.routes[i], inst.routes[j]).coherent
        fd, nv = P.face_dim(f), len(f.vertices)
        if not co:
            if not (len(inside) == 4 and fd == 2 and nv == 4):
                raise Found("(ii)(a) fails: conflicting pair without a quadrilateral face", dict(inst.pair_witness(i, j), routes_inside=len(inside), face_dim=fd))
        elif not (len(inside) == 2 and fd == 1):
            bad.append(dict(inst.pair_witness(i, j), routes_inside=len(inside), face_dim=fd, face_vertices=nv))
    if bad:
        raise Found(
            f"(ii)(b) fails for {len(bad)} coherent pairs: edge union holds 4 routes and the minimal face is a square",
            {"count": len(bad), "first": bad[0]},
        )
    return {"pairs": len(inst.routes) * (len(inst.routes) - 1) // 2}


def check_coherence_predictions(inst: Instance) -> dict:
    """T9: diagram predictions equal the geometric classification for every ordered pair."""
    inst.need_geometry()
    inst.need_diagram()
    cd = inst.cd
    n = len(inst.routes)
    counts: dict[str, int] = {}
    region_misses = 0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            p = cd.predict(i, j)
            o = geometric_class(inst, i, j)
            if p.kind != o:
                raise Found("prediction differs from geometry", dict(inst.pair_witness(i, j), predicted=p.kind, geometric=o))
            if p.kind == "conflict_quadrilateral":
                sq = {inst.g[t] for t in p.squarette}
                f = inst.P.minimal_face([inst.g[i], inst.g[j]])
                if sq != set(inst.P.face_vertices(f)):
                    raise Found("squarette is not the quadrilateral face", inst.pair_witness(i, j))
            nw_se = bool(cd.relations(i, j) & {"NW", "SE"})
            if nw_se == coherent(inst.d, inst.routes[i], inst.routes[j]).coherent:
                if not (cd.boxes[i].anomalous and cd.boxes[j].anomalous):
                    raise Found("conflict is not NW or SE for a non-anomalous pair", inst.pair_witness(i, j))
                region_misses += 1
            counts[o] = counts.get(o, 0) + 1
    return {"classes": dict(sorted(counts.items())), "anomalous_region_misses": region_misses // 2}


def _random_prefix(inst: Instance, rng: random.Random) -> list[int]:
    order = random_pull_order(inst.cd, rng)
    return order[: rng.randint(0, len(order))]


def check_pull_step_refinement(inst: Instance) -> dict:
    """T10: DKK refines pull(S; R) iff R is a DKK pull step for V."""
    inst.need_geometry()
    inst.need_step_logic()
    cd = inst.cd
    rng = inst.rng("T10")
    tested = valid = 0
    todo_all = set(range(len(inst.routes))) - cd.exceptional_ids
    for _ in range(4):
        V = _random_prefix(inst, rng)
        S = inst.pulled(V)
        rest = sorted(todo_all - set(V))
        for R in rng.sample(rest, min(12, len(rest))):
            step = cd.is_dkk_pull_step(V, R)
            ref = refines(inst.dkk, pull(S, inst.g[R]))
            tested += 1
            valid += step
            if step != ref:
                raise Found("pull-step predicate disagrees with refinement", {"V": V, "R": R, "step": step, "refines": ref})
    return {"tested": tested, "valid_steps": valid}


def check_pull_orders(inst: Instance, limit: int = 500, negatives: int = 50) -> dict:
    """T11: DKK pull orders give DKK; a single non-DKK step breaks refinement."""
    inst.need_geometry()
    inst.need_step_logic()
    cd = inst.cd
    orders = 0
    for order in cd.enumerate_pull_orders(limit):
        S = inst.pulled(order)
        orders += 1
        if not equals_triangulation(S, inst.dkk):
            raise Found("a DKK pull order missed the DKK triangulation", {"order": order})
    rng = inst.rng("T11")
    seen = set()
    attempts = 0
    while len(seen) < negatives and attempts < 20 * negatives:
        attempts += 1
        V = _random_prefix(inst, rng)
        bad = [i for i in range(len(inst.routes)) if i not in V and i not in cd.exceptional_ids and not cd.is_dkk_pull_step(V, i)]
        if not bad:
            continue
        seq = tuple(V) + (rng.choice(bad),)
        if seq in seen:
            continue
        seen.add(seq)
        if refines(inst.dkk, inst.pulled(seq)):
            raise Found("a non-DKK step kept the subdivision refined by DKK", {"sequence": list(seq)})
    return {"orders": orders, "non_dkk_sequences": len(seen)}


def check_dkk_pulling(inst: Instance) -> dict:
    """T12: the canonical order (origin only for Cycle(1,1)) pulls to DKK."""
    inst.need_geometry()
    inst.need_diagram()
    order = inst.cd.canonical_pull_order()
    S = inst.pulled(order)
    if not equals_triangulation(S, inst.dkk):
        raise Found("canonical order does not give DKK", {"order": order})
    if not is_unimodular(S):
        raise Found("pulled triangulation is not unimodular", {"order": order})
    return {"order": order, "cells": len(S.cells)}


def check_redundancy(inst: Instance, orders: int = 40) -> dict:
    """T13: a valid step is redundant iff pulling it leaves the subdivision unchanged."""
    inst.need_geometry()
    inst.need_step_logic()
    cd = inst.cd
    seen = set()
    tested = redundant = 0
    for order in itertools.islice(cd.enumerate_pull_orders(orders), orders):
        S = inst.origin_pull
        V: list[int] = []
        for x in [None] + order:
            if x is not None:
                S = pull(S, inst.g[x])
                V.append(x)
            key = frozenset(V)
            if key in seen:
                continue
            seen.add(key)
            for R in range(len(inst.routes)):
                if R in key or R in cd.exceptional_ids or not cd.is_dkk_pull_step(key, R):
                    continue
                geo = pull(S, inst.g[R]).cells == S.cells
                tested += 1
                redundant += geo
                if geo != cd.is_redundant_step(key, R):
                    raise Found("redundancy predicate disagrees with subdivision equality", {"V": V, "R": R, "unchanged": geo})
    return {"steps_tested": tested, "redundant": redundant}


def _components(inst: Instance):
    comps = split_components_with_ids(inst.d)
    if len(comps) < 2:
        raise Skip("inner graph is connected")
    return comps


def _vertex_blocks(d: FramedDag, comps) -> list[list[int]]:
    """Parent inner vertices (1-based) of each component, in component order."""
    out = []
    for _, ids in comps:
        out.append(sorted({v for i in ids for v in (d.edges[i].tail, d.edges[i].head) if v not in (d.source, d.sink)}))
    return out


def check_decomposition(inst: Instance) -> dict:
    """T14: flow polytope is a join and g-polytope a free sum of the components."""
    inst.need_geometry()
    comps = _components(inst)
    d = inst.d
    m = len(d.edges)
    # lambda_j: flow on the source edges of component j, for j >= 1
    src_ids = [[i for i in ids if d.edges[i].tail == d.source] for _, ids in comps]

    def phi(x):
        out = []
        for _, ids in comps:
            out.extend(x[i] for i in ids)
        out.extend(sum(x[i] for i in s) for s in src_ids[1:])
        return tuple(out)

    flat = [i for _, ids in comps for i in ids]
    if sorted(flat) != list(range(m)):
        raise Found("component edge sets do not partition the edges", {"ids": flat})
    F = flow_polytope(d)
    J = flow_polytope(comps[0][0])
    for c, _ in comps[1:]:
        J = join(J, flow_polytope(c))
    if len(comps) > 2:
        raise Skip("join map is implemented for two components")
    image = {phi(v) for v in F.vertices}
    if image != set(J.vertices):
        raise Found("flow polytope is not the join of the components", {"missing": sorted(set(J.vertices) - image)[:3]})
    blocks = _vertex_blocks(d, comps)
    perm = [v - 1 for b in blocks for v in b]
    G = {tuple(p[i] for i in perm) for p in inst.P.vertices}
    FS = g_polytope(comps[0][0])
    for c, _ in comps[1:]:
        FS = free_sum(FS, g_polytope(c))
    if G != set(FS.vertices):
        raise Found("g-polytope is not the free sum of the components", {"permutation": perm})
    return {"components": len(comps), "join_vertices": len(J.vertices), "free_sum_vertices": len(FS.vertices), "permutation": perm}


def check_free_sum_pulling(inst: Instance) -> dict:
    """T15: origin, then each summand's pulling order, triangulates the free sum as a cone over the join."""
    inst.need_geometry()
    if inst.spec.kind != "union" or len(inst.spec.parts) != 2:
        raise Skip("needs a union of two named summands")
    A, B = (Instance(p, inst.seed) for p in inst.spec.parts)
    FS = free_sum(A.P, B.P)
    za, zb = A.origin, B.origin
    order = [za + zb] + [p + zb for p in A.canonical_points()[1:]] + [za + q for q in B.canonical_points()[1:]]
    S = pull_sequence(FS, order)
    TA = pull_sequence(A.P, A.canonical_points())
    TB = pull_sequence(B.P, B.canonical_points())
    expected = set()
    for a in TA.cells:
        for b in TB.cells:
            expected.add(frozenset({za + zb} | {p + zb for p in a if p != za} | {za + q for q in b if q != zb}))
    if S.cells != frozenset(expected):
        raise Found("free-sum pulling is not the cone over the join", {"order": [list(p) for p in order]})
    if not is_unimodular(S):
        raise Found("free-sum pulling triangulation is not unimodular", {"order": [list(p) for p in order]})
    return {"cells": len(S.cells), "summand_cells": [len(TA.cells), len(TB.cells)]}


def check_facet_transversal(inst: Instance) -> dict:
    """T16: routes share a facet iff some exceptional-route transversal avoids them."""
    inst.need_geometry()
    P = inst.P
    exc = [r for r in inst.routes if r.is_exceptional]

    def has_transversal(group):
        used = frozenset().union(*(inst.routes[i].edge_set for i in group))
        return all(not r.edge_set <= used for r in exc)

    nonexc = [i for i, r in enumerate(inst.routes) if not r.is_exceptional]
    pos = {g: i for i, g in zip(nonexc, (inst.g[i] for i in nonexc))}
    for fi, inc in enumerate(P.facet_vertices):
        group = [pos[P.vertices[v]] for v in inc]
        if not has_transversal(group):
            raise Found("facet route set has no avoided transversal", {"facet": fi, "routes": group})
    for i, j in _pairs(len(inst.routes)):
        common = not P.is_whole(P.minimal_face([inst.g[i], inst.g[j]]))
        if common != has_transversal([i, j]):
            raise Found("common-facet test disagrees with the transversal test", inst.pair_witness(i, j))
    return {"facets": len(P.facets)}


def check_outer_corners(inst: Instance) -> dict:
    """T17: the diagram is skew Ferrers with outer corners exactly the exceptional boxes."""
    inst.need_diagram()
    cd = inst.cd
    if not cd.is_skew_ferrers():
        raise Found("diagram is not skew Ferrers", {"boxes": [str(b) for b in cd.boxes]})
    corners = cd.outer_corners()
    if corners != cd.exceptional_ids:
        raise Found("outer corners differ from exceptional boxes", {"corners": sorted(corners), "exceptional": sorted(cd.exceptional_ids)})
    return {"outer_corners": len(corners)}


def check_kappa(inst: Instance) -> dict:
    """T18: 2 <= kappa <= 4, kappa = 4 only for the long exceptionals of Cycle(k1,k2), conflict means 3, coherent means 2."""
    inst.need_diagram()
    d = inst.d
    longs = long_exceptional_routes(d)
    two_leg_cycle = d.kind == "cycle" and len(d.k) == 2
    L = frozenset().union(*(r.edge_set for r in longs)) if two_leg_cycle else None
    hist: dict[str, int] = {}
    bad_b = []
    for i, j in _pairs(len(inst.routes)):
        R, S = inst.routes[i], inst.routes[j]
        kappa = len(common_components(R, S))
        E = inst.edge_union(i, j)
        w = dict(inst.pair_witness(i, j), kappa=kappa)
        if not 2 <= kappa <= 4:
            raise Found("(i) kappa out of range", w)
        if (kappa == 4) != (two_leg_cycle and E == L):
            raise Found("(ii) kappa = 4 characterization fails", w)
        co = coherent(d, R, S).coherent
        if not inst.has_exceptional_in(E):
            if kappa > 3:
                raise Found("(iii) kappa > 3 without an exceptional route", w)
            if not co and kappa != 3:
                raise Found("(iii)(a) conflicting pair with kappa != 3", w)
            if co and kappa != 2:
                bad_b.append(w)
        key = f"{kappa}:{'coherent' if co else 'conflict'}"
        hist[key] = hist.get(key, 0) + 1
    if bad_b:
        raise Found(f"(iii)(b) fails for {len(bad_b)} coherent pairs with kappa = 3", {"count": len(bad_b), "first": bad_b[0], "histogram": dict(sorted(hist.items()))})
    return {"histogram": dict(sorted(hist.items()))}


CHECKS: dict[str, Callable[[Instance], dict]] = {
    "T1": check_separation,
    "T2": check_iterated_pulling,
    "T3": check_lattice_points,
    "T4": check_switches,
    "T5": check_lab_characterization,
    "T6": check_lab_compressed,
    "T7": check_faces,
    "T8": check_incoherence_square,
    "T9": check_coherence_predictions,
    "T10": check_pull_step_refinement,
    "T11": check_pull_orders,
    "T12": check_dkk_pulling,
    "T13": check_redundancy,
    "T14": check_decomposition,
    "T15": check_free_sum_pulling,
    "T16": check_facet_transversal,
    "T17": check_outer_corners,
    "T18": check_kappa,
}

CHECK_TITLES = {
    "T1": "separation after pulling",
    "T2": "iterated pulling criterion",
    "T3": "lattice points are origin and vertices",
    "T4": "LAB iff at most two switches iff legs",
    "T5": "LAB framings exist exactly for paths and cycles",
    "T6": "LAB reflexive iff compressed orthants",
    "T7": "faces from edge sets; cube faces",
    "T8": "minimal faces of route pairs",
    "T9": "coherence diagram predictions",
    "T10": "pull steps and refinement",
    "T11": "DKK pull orders",
    "T12": "DKK is a pulling triangulation",
    "T13": "redundant pull steps",
    "T14": "join and free-sum decomposition",
    "T15": "free-sum pulling",
    "T16": "facets and exceptional transversals",
    "T17": "outer corners are exceptional boxes",
    "T18": "components of route intersections",
}


def run_check(check_id: str, spec: InstanceSpec, seed: int = 0, inst: Instance | None = None) -> TheoremReport:
    if check_id not in CHECKS:
        raise KeyError(f"unknown check {check_id!r}")
    inst = inst or Instance(spec, seed)
    try:
        witness = CHECKS[check_id](inst)
    except Skip as e:
        return TheoremReport(check_id, spec, SKIPPED, str(e), {}, seed)
    except ResourceLimitError as e:
        return TheoremReport(check_id, spec, SKIPPED, f"resource cap: {e}", {}, seed)
    except Found as e:
        return TheoremReport(check_id, spec, COUNTEREXAMPLE, e.detail, e.witness, seed)
    except ContractError as e:
        if inst.spec.kind == "claw":
            return TheoremReport(check_id, spec, SKIPPED, f"not applicable: {e}", {}, seed)
        raise
    return TheoremReport(check_id, spec, VERIFIED, "", witness, seed)


def run_suite(corpus, checks=None, seed: int = 0, progress: Callable[[TheoremReport], None] | None = None) -> list[TheoremReport]:
    ids = list(checks or CHECKS)
    out = []
    for spec in corpus:
        inst = Instance(spec, seed)
        for cid in ids:
            rep = run_check(cid, spec, seed, inst)
            out.append(rep)
            if progress:
                progress(rep)
    return out


def summary_table(reports: list[TheoremReport]) -> str:
    specs = list(dict.fromkeys(r.instance.name for r in reports))
    ids = list(dict.fromkeys(r.check_id for r in reports))
    mark = {VERIFIED: "ok", COUNTEREXAMPLE: "CE", SKIPPED: "-"}
    cell = {(r.instance.name, r.check_id): mark[r.status] for r in reports}
    w = max([len(s) for s in specs] + [8])
    lines = [" " * w + " " + " ".join(f"{c:>4}" for c in ids)]
    for s in specs:
        lines.append(f"{s:<{w}} " + " ".join(f"{cell.get((s, c), ''):>4}" for c in ids))
    counts = {k: sum(r.status == k for r in reports) for k in mark}
    lines.append(f"verified {counts[VERIFIED]}, counterexample {counts[COUNTEREXAMPLE]}, skipped {counts[SKIPPED]}")
    return "\n".join(lines)


def dkk_is_triangulation(inst: Instance, sample: int = 200) -> dict:
    """Maximal cliques as simplices of the flow polytope: dimensions, volume sum,
    sampled proper intersections and unimodularity."""
    F = flow_polytope(inst.d)
    m = len(inst.d.edges)
    cells = [sorted(inst.routes[r].indicator(m) for r in c) for c in inst.cliques]
    full = all(len(c) == F.dim + 1 and cached_hull(c).dim == F.dim for c in cells)
    vol = normalized_volume(F)
    total = sum(normalized_volume(cached_hull(c)) for c in cells)
    pairs = list(itertools.combinations(range(len(cells)), 2))
    rng = inst.rng("dkk")
    if len(pairs) > sample:
        pairs = rng.sample(pairs, sample)
    proper = all(simplices_intersect_properly(cells[a], cells[b]) for a, b in pairs)
    return {
        "triangulation": full,
        "volume": vol,
        "volume_sum": total,
        "proper_pairs": len(pairs),
        "proper": proper,
        "unimodular": all(simplex_is_unimodular(c) for c in cells),
    }
