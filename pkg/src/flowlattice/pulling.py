"""Pulling subdivisions over exact lattice polytopes.

A cell is a frozenset of points (its vertices). Pulling a cell at a point x
it contains replaces it by conv(F, x) for every facet F missing x.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import ContractError
from .geometry import LatticePolytope, cached_hull, normalized_volume, simplex_is_unimodular
from .intlinalg import rank, sub
from .lp import maximize

Point = tuple[int, ...]
Cell = frozenset


@lru_cache(maxsize=None)
def pull_cell(cell: Cell, x: Point) -> tuple[Cell, ...] | None:
    """Cells replacing ``cell`` after pulling at x, or None when x lies outside it."""
    P = cached_hull(cell)
    slack = P.slack(x)
    if slack is None or any(s < 0 for s in slack):
        return None
    verts = P.vertices
    out = []
    for s, inc in zip(slack, P.facet_vertices):
        if s > 0:
            out.append(frozenset(verts[i] for i in inc) | {x})
    return tuple(sorted(out, key=sorted))


@dataclass(frozen=True)
class Subdivision:
    base: LatticePolytope
    cells: frozenset[Cell]
    history: tuple[Point, ...] = ()
    steps: tuple[frozenset[Cell], ...] = field(default=(), compare=False, repr=False)

    @classmethod
    def trivial(cls, P: LatticePolytope) -> "Subdivision":
        return cls(P, frozenset([frozenset(P.vertices)]))

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def vertices(self) -> frozenset[Point]:
        return frozenset().union(*self.cells)

    def cells_containing(self, x: Sequence) -> list[Cell]:
        return [c for c in self.cells if cached_hull(c).contains(x)]

    def to_json(self, base_ref: str = "") -> dict:
        pts = sorted(self.vertices | set(self.history))
        idx = {p: i for i, p in enumerate(pts)}
        return {
            "schema": "subdivision.v1",
            "base_ref": base_ref,
            "points": [list(p) for p in pts],
            "cells": sorted(sorted(idx[p] for p in c) for c in self.cells),
            "history": [list(p) for p in self.history],
        }


def pull(S: Subdivision, x: Sequence[int]) -> Subdivision:
    x = tuple(x)
    if not S.base.contains(x):
        raise ContractError(f"pull point {x} is outside the polytope")
    new = set()
    for c in S.cells:
        rep = pull_cell(c, x)
        if rep is None:
            new.add(c)
        else:
            new.update(rep)
    cells = frozenset(new)
    return Subdivision(S.base, cells, S.history + (x,), S.steps + (S.cells,))


def pull_sequence(P: LatticePolytope | Subdivision, xs: Iterable[Sequence[int]]) -> Subdivision:
    S = P if isinstance(P, Subdivision) else Subdivision.trivial(P)
    for x in xs:
        S = pull(S, x)
    return S


def separated(S: Subdivision, u: Sequence, v: Sequence) -> bool:
    return not cell_neighboring(S, u, v)


def cell_neighboring(S: Subdivision, u: Sequence, v: Sequence) -> bool:
    return any(cached_hull(c).contains(u) and cached_hull(c).contains(v) for c in S.cells)


def barycenter(points: Iterable[Point]) -> tuple[Fraction, ...]:
    pts = list(points)
    k = len(pts)
    return tuple(Fraction(sum(col), k) for col in zip(*pts))


def refines(T: Subdivision, S: Subdivision) -> bool:
    """Every cell of T lies in some cell of S.

    A vertex-set superset is accepted outright; otherwise the candidate
    super-cell is the one containing T's barycenter.
    """
    if T.base != S.base:
        raise ContractError("subdivisions of different polytopes")
    for c in T.cells:
        if any(c <= s for s in S.cells):
            continue
        b = barycenter(c)
        if not any(cached_hull(s).contains(b) and all(cached_hull(s).contains(p) for p in c) for s in S.cells):
            return False
    return True


def is_triangulation(S: Subdivision) -> bool:
    return all(len(c) == S.base.dim + 1 for c in S.cells)


def equals_triangulation(S: Subdivision, T: Subdivision | Iterable[Iterable[Point]]) -> bool:
    other = T.cells if isinstance(T, Subdivision) else frozenset(frozenset(map(tuple, c)) for c in T)
    return S.cells == other


def is_unimodular(S: Subdivision) -> bool:
    return is_triangulation(S) and all(simplex_is_unimodular(sorted(c)) for c in S.cells)


def volume_sum(S: Subdivision) -> int:
    return sum(normalized_volume(cached_hull(c)) for c in S.cells)


def simplices_intersect_properly(A: Iterable[Point], B: Iterable[Point]) -> bool:
    """conv(A) ∩ conv(B) = conv(A ∩ B) for affinely independent A and B.

    Maximizes the barycentric weight on A \\ B over common points; it is
    zero exactly when the intersection is the common face.
    """
    A, B = sorted(set(A)), sorted(set(B))
    if rank([sub(a, A[0]) for a in A[1:]]) != len(A) - 1 or rank([sub(b, B[0]) for b in B[1:]]) != len(B) - 1:
        raise ContractError("simplices must have affinely independent vertices")
    common = set(A) & set(B)
    dim = len(A[0])
    nA, nB = len(A), len(B)
    rows = []
    for k in range(dim):
        rows.append([a[k] for a in A] + [-b[k] for b in B])
    rows.append([1] * nA + [0] * nB)
    rows.append([0] * nA + [1] * nB)
    rhs = [0] * dim + [1, 1]
    obj = [0 if a in common else 1 for a in A] + [0] * nB
    best = maximize(rows, rhs, obj)
    return best is None or best == 0


@dataclass(frozen=True)
class IteratedPullingCheck:
    refines_after_pull: bool
    criterion: bool

    @property
    def agree(self) -> bool:
        return self.refines_after_pull == self.criterion


def verify_iterated_pulling(S: Subdivision, T: Subdivision, v: Sequence[int]) -> IteratedPullingCheck:
    """Compare refinement of pull(S; v) by T against the cone-point criterion.

    The criterion: v is a vertex of T, and every simplex of T inside a cell of
    S containing v has v as a vertex.
    """
    v = tuple(v)
    direct = refines(T, pull(S, v))
    crit = v in T.vertices
    if crit:
        for c in S.cells:
            H = cached_hull(c)
            if not H.contains(v):
                continue
            for t in T.cells:
                if all(H.contains(p) for p in t) and v not in t:
                    crit = False
                    break
            if not crit:
                break
    return IteratedPullingCheck(direct, crit)
