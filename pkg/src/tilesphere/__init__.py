"""Edge-to-edge tilings of the sphere by a regular m-gon and an x,y,x,y quadrilateral."""

from .angles import AngleAssignment, RationalPi, UnresolvedParameters, VertexType, feasible, \
    solve_angles, vt
from .arrangements import Arrangement, enumerate_arrangements, forbidden_patterns, match_pattern
from .avc import AVC, Census, census, classify_remainders, enumerate_avcs, enumerate_vertex_types
from .catalog import CatalogEntry, build_catalog, get_entry, verify_all
from .export import export
from .geometry import NotRealizable, quad_solve_y, realize, regular_polygon_edge
from .search import SearchOptions, classify, verify_nonexistence
from .tiling import PartialTiling, canonical_code, tiling_from_json, tiling_to_json, validate

__all__ = [
    "AngleAssignment", "RationalPi", "UnresolvedParameters", "VertexType", "feasible",
    "solve_angles", "vt", "Arrangement", "enumerate_arrangements", "forbidden_patterns",
    "match_pattern", "AVC", "Census", "census", "classify_remainders", "enumerate_avcs",
    "enumerate_vertex_types", "CatalogEntry", "build_catalog", "get_entry", "verify_all",
    "export", "NotRealizable", "quad_solve_y", "realize", "regular_polygon_edge",
    "SearchOptions", "classify", "verify_nonexistence", "PartialTiling", "canonical_code",
    "tiling_from_json", "tiling_to_json", "validate",
]
