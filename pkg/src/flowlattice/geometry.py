"""Exact lattice-polytope kernel.

Polytopes are given by integer points. Facets come from an integer double
description run in coordinates of the lattice of the affine hull, so
low-dimensional polytopes (flow polytopes live in a proper subspace of R^E)
are handled the same way as full-dimensional ones.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm
from typing import Iterable, Sequence

from .errors import ContractError, InvalidParameterError, ResourceLimitError
from .intlinalg import (
    det,
    dot,
    integer_kernel,
    inverse,
    primitive,
    rank,
    rref,
    saturated_basis,
    sub,
)

MAX_DIM = 10
MAX_POINTS = 200

Point = tuple[int, ...]


def extreme_rays(rows: Sequence[Sequence[int]], dim: int) -> list[tuple[tuple[int, ...], int]]:
    """Extreme rays of the pointed cone {x in R^dim : r.x >= 0 for every row r}.

    Incremental double description with the combinatorial adjacency test.
    Returns (primitive ray, zero mask) pairs; bit i of the mask is set when
    row i vanishes on the ray.
    """
    chosen: list[int] = []
    for i, row in enumerate(rows):
        if rank([rows[j] for j in chosen] + [row]) > len(chosen):
            chosen.append(i)
            if len(chosen) == dim:
                break
    if len(chosen) < dim:
        raise ContractError("constraint system does not define a pointed full-dimensional cone")
    inv = inverse([rows[i] for i in chosen])
    rays: list[tuple[tuple[int, ...], int]] = []
    full = 0
    for i in chosen:
        full |= 1 << i
    for j in range(dim):
        col = [inv[i][j] for i in range(dim)]
        den = lcm(*(x.denominator for x in col))
        ray = primitive([int(x * den) for x in col])
        rays.append((ray, full & ~(1 << chosen[j])))
    chosen_set = set(chosen)
    for t, row in enumerate(rows):
        if t in chosen_set:
            continue
        bit = 1 << t
        pos, neg, keep = [], [], []
        for ray, mask in rays:
            v = dot(row, ray)
            if v > 0:
                pos.append((ray, mask, v))
                keep.append((ray, mask))
            elif v < 0:
                neg.append((ray, mask, v))
            else:
                keep.append((ray, mask | bit))
        if not neg:
            rays = keep
            continue
        masks = [m for _, m in rays]
        new = []
        for pr, pm, pv in pos:
            for nr, nm, nv in neg:
                common = pm & nm
                if common.bit_count() < dim - 2:
                    continue
                if any(m & common == common and m != pm and m != nm for m in masks):
                    continue
                ray = primitive([pv * b - nv * a for a, b in zip(pr, nr)])
                new.append((ray, common | bit))
        rays = keep + new
    return rays


class AffineFrame:
    """Integer coordinates on the lattice aff(points) intersected with Z^m."""

    def __init__(self, points: Sequence[Point]):
        m = len(points[0])
        self.ambient_dim = m
        diffs = [sub(p, points[0]) for p in points[1:]]
        r = rank(diffs) if diffs else 0
        self.dim = r
        if r == m:
            self.full = True
            self.origin = tuple([0] * m)
            self.basis = [tuple(int(i == j) for j in range(m)) for i in range(m)]
            self.equations: list[tuple[int, ...]] = []
            return
        self.full = False
        self.origin = points[0]
        self.basis = saturated_basis(diffs, m) if r else []
        self.equations = integer_kernel(diffs, m) if diffs else [
            tuple(int(i == j) for j in range(m)) for i in range(m)
        ]
        if r:
            # coordinates on which the basis restricts to an invertible matrix
            _, self.pivots = rref(self.basis, m)
            self._inv = inverse([[b[p] for b in self.basis] for p in self.pivots])
        else:
            self.pivots = []
            self._inv = []

    def local(self, x: Sequence[int]):
        """Coordinates of x in the frame, or None when x is off the affine hull."""
        if self.full:
            return tuple(x)
        d = sub(x, self.origin)
        if self.dim == 0:
            return () if not any(d) else None
        dp = [d[p] for p in self.pivots]
        y = [sum(self._inv[i][j] * dp[j] for j in range(self.dim)) for i in range(self.dim)]
        for c in range(self.ambient_dim):
            if sum(y[i] * self.basis[i][c] for i in range(self.dim)) != d[c]:
                return None
        return tuple(int(v) if v.denominator == 1 else v for v in y)

    def ambient(self, y: Sequence) -> tuple:
        if self.full:
            return tuple(y)
        out = list(self.origin)
        for coef, b in zip(y, self.basis):
            for c in range(self.ambient_dim):
                out[c] += coef * b[c]
        return tuple(out)

    def ambient_inequality(self, normal: Sequence[int], offset: int) -> tuple[tuple[int, ...], int]:
        """An integer inequality on R^m cutting out the same half-space of aff."""
        if self.full:
            return tuple(normal), offset
        coef = [Fraction(0)] * self.ambient_dim
        for j, p in enumerate(self.pivots):
            coef[p] = sum(normal[i] * self._inv[i][j] for i in range(self.dim))
        rhs = offset + sum(c * o for c, o in zip(coef, self.origin))
        den = lcm(*(c.denominator for c in coef), Fraction(rhs).denominator)
        vec = primitive([int(c * den) for c in coef] + [int(rhs * den)])
        return tuple(vec[:-1]), vec[-1]


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]
    offset: int


@dataclass(frozen=True)
class FaceHandle:
    """A face given by its tight facets and the vertices lying on it."""

    facets: frozenset[int]
    vertices: frozenset[int]


class LatticePolytope:
    """Convex hull of integer points with exact V- and H-representations.

    ``strict=True`` rejects input points that are not vertices; otherwise
    they are filtered out.
    """

    def __init__(self, points: Iterable[Sequence[int]], *, strict: bool = False):
        pts = sorted({tuple(int(c) for c in p) for p in points})
        if not pts:
            raise InvalidParameterError("hull of an empty point set")
        if len({len(p) for p in pts}) != 1:
            raise InvalidParameterError("points of mixed dimension")
        if len(pts) > MAX_POINTS:
            raise ResourceLimitError(f"{len(pts)} points exceeds cap {MAX_POINTS}")
        self._points = pts
        self.ambient_dim = len(pts[0])
        self.frame = AffineFrame(pts)
        self.dim = self.frame.dim
        if self.dim > MAX_DIM:
            raise ResourceLimitError(f"dimension {self.dim} exceeds cap {MAX_DIM}")
        self.strict = strict

    def __repr__(self) -> str:
        return f"LatticePolytope(dim={self.dim}, vertices={len(self.vertices)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticePolytope) and self.vertex_set == other.vertex_set

    def __hash__(self) -> int:
        return hash(self.vertex_set)

    @cached_property
    def _hull(self):
        local = [self.frame.local(p) for p in self._points]
        d = self.dim
        if d == 0:
            return [self._points[0]], [local[0]], [], []
        rows = [(1,) + tuple(y) for y in local]
        rays = extreme_rays(rows, d + 1)
        facets = []
        for ray, _ in rays:
            normal = primitive([-c for c in ray[1:]])
            g = next(abs(a) // abs(b) for a, b in zip(ray[1:], normal) if b)
            facets.append(Facet(normal, ray[0] // g))
        facets.sort(key=lambda f: (f.normal, f.offset))
        tight = [
            frozenset(i for i, f in enumerate(facets) if dot(f.normal, y) == f.offset) for y in local
        ]
        keep = []
        for i, ti in enumerate(tight):
            if not any(j != i and ti <= tj for j, tj in enumerate(tight)):
                keep.append(i)
        if self.strict and len(keep) != len(local):
            raise InvalidParameterError("input contains points that are not vertices")
        verts = [self._points[i] for i in keep]
        lverts = [local[i] for i in keep]
        inc = [frozenset(j for j, y in enumerate(lverts) if dot(f.normal, y) == f.offset) for f in facets]
        return verts, lverts, facets, inc

    @property
    def vertices(self) -> tuple[Point, ...]:
        return tuple(self._hull[0])

    @cached_property
    def vertex_set(self) -> frozenset[Point]:
        return frozenset(self._hull[0])

    @property
    def local_vertices(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self._hull[1])

    @property
    def facets(self) -> tuple[Facet, ...]:
        """Primitive facet inequalities a.y <= b in frame coordinates."""
        return tuple(self._hull[2])

    @property
    def facet_vertices(self) -> tuple[frozenset[int], ...]:
        return tuple(self._hull[3])

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def ambient_facets(self) -> list[Facet]:
        return [Facet(*self.frame.ambient_inequality(f.normal, f.offset)) for f in self.facets]

    def slack(self, x: Sequence[int]):
        """Facet slacks b - a.y of x, or None when x is off the affine hull."""
        y = self.frame.local(x)
        if y is None:
            return None
        return [f.offset - dot(f.normal, y) for f in self.facets]

    def contains(self, x: Sequence) -> bool:
        s = self.slack(x)
        return s is not None and all(v >= 0 for v in s)

    def contains_in_interior(self, x: Sequence) -> bool:
        s = self.slack(x)
        return s is not None and all(v > 0 for v in s)

    def tight_facets(self, x: Sequence) -> frozenset[int]:
        s = self.slack(x)
        if s is None or any(v < 0 for v in s):
            raise ContractError(f"point {tuple(x)} is not in the polytope")
        return frozenset(i for i, v in enumerate(s) if v == 0)

    def minimal_face(self, points: Iterable[Sequence]) -> FaceHandle:
        """Smallest face containing all points: intersect facets tight on every point."""
        tight = None
        for p in points:
            t = self.tight_facets(p)
            tight = t if tight is None else tight & t
        if tight is None:
            raise ContractError("minimal_face needs at least one point")
        verts = frozenset(range(len(self.vertices)))
        for i in tight:
            verts &= self.facet_vertices[i]
        return FaceHandle(frozenset(tight), verts)

    def face_vertices(self, face: FaceHandle) -> list[Point]:
        return [self.vertices[i] for i in sorted(face.vertices)]

    def face_dim(self, face: FaceHandle) -> int:
        pts = self.face_vertices(face)
        return rank([sub(p, pts[0]) for p in pts[1:]]) if len(pts) > 1 else 0

    def is_whole(self, face: FaceHandle) -> bool:
        return not face.facets

    def to_json(self) -> dict:
        out = {
            "schema": "polytope.v1",
            "dim": self.dim,
            "ambient_dim": self.ambient_dim,
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"normal": list(f.normal), "offset": f.offset} for f in self.ambient_facets()],
        }
        if not self.frame.full:
            out["equations"] = [
                {"normal": list(e), "offset": dot(e, self.frame.origin)} for e in self.frame.equations
            ]
        return out


def hull(points: Iterable[Sequence[int]], *, strict: bool = False) -> LatticePolytope:
    return LatticePolytope(points, strict=strict)


@lru_cache(maxsize=None)
def _cached_hull(points: frozenset) -> LatticePolytope:
    return LatticePolytope(points)


def cached_hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    """Memoized hull keyed by the point set; used by the pulling engine."""
    return _cached_hull(frozenset(tuple(p) for p in points))


def vertices_from_inequalities(normals: Sequence[Sequence[int]], offsets: Sequence[int]) -> list[tuple]:
    """Vertices of the bounded full-dimensional {x : a.x <= b} (rational entries)."""
    d = len(normals[0])
    rows = [(b,) + tuple(-a for a in n) for n, b in zip(normals, offsets)]
    rows.append((1,) + (0,) * d)
    out = []
    for ray, _ in extreme_rays(rows, d + 1):
        t = ray[0]
        if t <= 0:
            raise ContractError("inequality system is unbounded")
        out.append(tuple(Fraction(c, t) if c % t else c // t for c in ray[1:]))
    return sorted(set(out))


def _integral(p) -> bool:
    return all(not isinstance(c, Fraction) or c.denominator == 1 for c in p)


def lattice_points(P: LatticePolytope) -> list[Point]:
    """All lattice points of P by a pruned bounding-box scan in frame coordinates."""
    lv = P.local_vertices
    d = P.dim
    if d == 0:
        return list(P.vertices)
    lo = [min(v[i] for v in lv) for i in range(d)]
    hi = [max(v[i] for v in lv) for i in range(d)]
    facets = P.facets
    found: list[tuple[int, ...]] = []

    def best_rest(f: Facet, i: int) -> int:
        # minimal possible contribution of coordinates i.. within the box
        return sum(min(a * lo[j], a * hi[j]) for j, a in enumerate(f.normal) if j >= i)

    rest = [[best_rest(f, i) for f in facets] for i in range(d + 1)]

    def rec(i: int, prefix: list[int], partial: list[int]):
        if i == d:
            if all(s <= f.offset for s, f in zip(partial, facets)):
                found.append(tuple(prefix))
            return
        for c in range(lo[i], hi[i] + 1):
            nxt = [s + f.normal[i] * c for s, f in zip(partial, facets)]
            if all(s + r <= f.offset for s, r, f in zip(nxt, rest[i + 1], facets)):
                rec(i + 1, prefix + [c], nxt)

    rec(0, [], [0] * len(facets))
    return sorted(P.frame.ambient(y) for y in found)


def lattice_points_by_slicing(P: LatticePolytope) -> list[Point]:
    """Lattice points of a full-dimensional P, one coordinate at a time.

    The projection onto each coordinate prefix is the hull of the projected
    vertices; for a fixed prefix, the projection onto one more coordinate
    gives an exact interval. Shares no code with the box scan in
    ``lattice_points``.
    """
    if not P.is_full_dimensional:
        raise ContractError("slicing strategy needs a full-dimensional polytope")
    d = P.dim
    # systems[i] constrains the first i+1 coordinates
    systems = []
    for i in range(1, d + 1):
        Q = LatticePolytope([v[:i] for v in P.vertices])
        systems.append([(f.normal, f.offset) for f in Q.ambient_facets()])
    out: list[Point] = []

    def rec(prefix: list[int]):
        i = len(prefix)
        if i == d:
            out.append(tuple(prefix))
            return
        lo, hi = None, None
        for a, b in systems[i]:
            rhs = b - dot(a[:i], prefix)
            c = a[i]
            if c > 0:
                v = math.floor(Fraction(rhs, c))
                hi = v if hi is None else min(hi, v)
            elif c < 0:
                v = math.ceil(Fraction(rhs, c))
                lo = v if lo is None else max(lo, v)
            elif rhs < 0:
                return
        for x in range(lo, hi + 1):
            rec(prefix + [x])

    rec([])
    return sorted(out)


def normalized_volume(P: LatticePolytope) -> int:
    """Normalized volume in the lattice of the affine hull (unit simplex = 1).

    Cone decomposition from the first vertex over the facets avoiding it,
    recursing into facets with their own lattices.
    """
    return _nvol(frozenset(P.vertices))


@lru_cache(maxsize=None)
def _nvol(vertices: frozenset) -> int:
    P = LatticePolytope(vertices)
    d = P.dim
    if d == 0:
        return 1
    lv = P.local_vertices
    if len(lv) == d + 1:
        return abs(det([sub(v, lv[0]) for v in lv[1:]]))
    apex = lv[0]
    total = 0
    for f, inc in zip(P.facets, P.facet_vertices):
        h = f.offset - dot(f.normal, apex)
        if h == 0:
            continue
        total += h * _nvol(frozenset(P.vertices[i] for i in inc))
    return total


def simplex_is_unimodular(vertices: Sequence[Sequence[int]]) -> bool:
    pts = [tuple(v) for v in vertices]
    diffs = [sub(p, pts[0]) for p in pts[1:]]
    if rank(diffs) != len(diffs) if diffs else False:
        raise ContractError("simplex vertices are affinely dependent")
    if not diffs:
        return True
    frame = AffineFrame(pts)
    local = [frame.local(p) for p in pts]
    return abs(det([sub(y, local[0]) for y in local[1:]])) == 1


def interior_lattice_points(P: LatticePolytope) -> list[Point]:
    return [p for p in lattice_points(P) if P.contains_in_interior(p)]


def is_reflexive(P: LatticePolytope) -> bool:
    if not P.is_full_dimensional:
        raise ContractError("reflexivity is defined for full-dimensional polytopes")
    inner = interior_lattice_points(P)
    if len(inner) != 1:
        return False
    v = inner[0]
    return all(f.offset - dot(f.normal, v) == 1 for f in P.facets)


def coordinate_projections(v: Sequence[int]) -> Iterable[tuple[int, ...]]:
    """Every point obtained from v by zeroing a subset of its coordinates."""
    support = [i for i, c in enumerate(v) if c]
    for r in range(1, len(support) + 1):
        for subset in itertools.combinations(support, r):
            w = list(v)
            for i in subset:
                w[i] = 0
            yield tuple(w)


def is_locally_anti_blocking(P: LatticePolytope) -> bool:
    return all(P.contains(w) for v in P.vertices for w in coordinate_projections(v))


def orthant_restriction(P: LatticePolytope, sigma: Sequence[int]) -> LatticePolytope:
    """The polytope (sigma P) intersected with the nonnegative orthant."""
    if not P.is_full_dimensional:
        raise ContractError("orthant restriction needs a full-dimensional polytope")
    d = P.dim
    normals = [tuple(a * s for a, s in zip(f.normal, sigma)) for f in P.facets]
    offsets = [f.offset for f in P.facets]
    for i in range(d):
        normals.append(tuple(-int(i == j) for j in range(d)))
        offsets.append(0)
    verts = vertices_from_inequalities(normals, offsets)
    if not all(_integral(v) for v in verts):
        raise ContractError(f"orthant restriction for {tuple(sigma)} is not a lattice polytope")
    return LatticePolytope([tuple(int(c) for c in v) for v in verts])


def is_compressed(P: LatticePolytope) -> bool:
    """Width one with respect to every facet."""
    lv = P.local_vertices
    return all(min(dot(f.normal, y) for y in lv) == f.offset - 1 for f in P.facets)


def _check_origin_interior(P: LatticePolytope) -> None:
    if not (P.is_full_dimensional and P.contains_in_interior((0,) * P.ambient_dim)):
        raise ContractError("free sum needs the origin in the interior of each summand")


def free_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    _check_origin_interior(P)
    _check_origin_interior(Q)
    zp, zq = (0,) * P.ambient_dim, (0,) * Q.ambient_dim
    return LatticePolytope([p + zq for p in P.vertices] + [zp + q for q in Q.vertices])


def join(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    zp, zq = (0,) * P.ambient_dim, (0,) * Q.ambient_dim
    return LatticePolytope([p + zq + (0,) for p in P.vertices] + [zp + q + (1,) for q in Q.vertices])


def is_lattice_cube(points: Sequence[Sequence[int]]) -> bool:
    """Whether the points are the vertices of a lattice-affine image of [0,1]^k.

    Picks the lexicographically first point as the corner, reads candidate
    generator vectors off the points adjacent to it, and checks both the
    0/1-combination bijection and saturation of the generators.
    """
    pts = sorted({tuple(p) for p in points})
    n = len(pts)
    k = n.bit_length() - 1
    if n != 1 << k:
        return False
    if k == 0:
        return True
    P = LatticePolytope(pts)
    if P.dim != k or len(P.vertices) != n:
        return False
    corner = P.vertices[0]
    ci = 0
    # neighbors of the corner along edges of P
    gens = []
    for j, v in enumerate(P.vertices):
        if j == ci:
            continue
        face = P.minimal_face([corner, v])
        if len(face.vertices) == 2:
            gens.append(sub(v, corner))
    if len(gens) != k:
        return False
    combos = set()
    for eps in itertools.product((0, 1), repeat=k):
        combos.add(tuple(c + sum(e * g[i] for e, g in zip(eps, gens)) for i, c in enumerate(corner)))
    if combos != set(pts):
        return False
    local = [P.frame.local(tuple(c + g for c, g in zip(corner, gv))) for gv in gens]
    base = P.frame.local(corner)
    return abs(det([sub(y, base) for y in local])) == 1


# -- polytopes of framed DAGs ---------------------------------------------------


def flow_polytope(d) -> LatticePolytope:
    """Hull of route indicator vectors in R^E."""
    from .routes import enumerate_routes

    m = len(d.edges)
    return LatticePolytope([r.indicator(m) for r in enumerate_routes(d)])


def g_polytope(d) -> LatticePolytope:
    from .routes import enumerate_routes, g_vector

    return LatticePolytope([g_vector(d, r) for r in enumerate_routes(d)])


@dataclass(frozen=True)
class EdgeSetFace:
    """Routes inside an edge set and the face they span (None when not proper)."""

    routes: tuple
    face: FaceHandle | None

    @property
    def proper(self) -> bool:
        return self.face is not None


def face_from_edge_set(d, edges: Iterable[int], P: LatticePolytope | None = None) -> EdgeSetFace:
    """Face of the g-polytope indexed by an edge set.

    An edge set holding all edges of some exceptional route indexes no
    proper face; that case returns ``face=None``.
    """
    from .routes import enumerate_routes, g_vector

    es = frozenset(edges)
    inside = tuple(r for r in enumerate_routes(d) if r.edge_set <= es)
    if any(r.is_exceptional for r in inside):
        return EdgeSetFace(inside, None)
    if not inside:
        raise ContractError("edge set contains no route")
    P = P or g_polytope(d)
    return EdgeSetFace(inside, P.minimal_face([g_vector(d, r) for r in inside]))
