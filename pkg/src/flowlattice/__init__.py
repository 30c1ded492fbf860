"""Exact flow polytopes, g-polytopes, coherence diagrams and pulling subdivisions."""

from .dag import EdgeName, FramedDag, build_cycle, build_path, disjoint_union, is_lab_framing, legs
from .diagram import CoherenceDiagram, build_diagram
from .geometry import LatticePolytope, flow_polytope, g_polytope, hull
from .pulling import Subdivision, pull, pull_sequence
from .routes import coherent, dkk_triangulation, enumerate_routes, g_vector, route_pair

__all__ = [
    "CoherenceDiagram",
    "EdgeName",
    "FramedDag",
    "LatticePolytope",
    "Subdivision",
    "build_cycle",
    "build_diagram",
    "build_path",
    "coherent",
    "disjoint_union",
    "dkk_triangulation",
    "enumerate_routes",
    "flow_polytope",
    "g_polytope",
    "g_vector",
    "hull",
    "is_lab_framing",
    "legs",
    "pull",
    "pull_sequence",
    "route_pair",
]
