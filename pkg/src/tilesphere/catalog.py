"""Explicit constructions of the known tilings and the verification driver."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import math
import time

from .angles import AngleAssignment, VertexType, region_of, solve_angles, vt
from .geometry import (NotRealizable, Realization, realize, regular_polygon_edge, rhombus_case,
                       solve_quartic_case, triangle_quad_identity)
from .search import INCOMPLETE, SearchOptions, classify
from .tiling import PartialTiling, canonical_code, build_from_faces, validate


def prism(m: int) -> PartialTiling:
    """Two m-gon caps joined by a band of m quadrilaterals; every vertex is abc."""
    if m < 3:
        raise ValueError("m must be at least 3")
    top = [f"t{i}" for i in range(m)]
    bot = [f"b{i}" for i in range(m)]
    faces = [top, bot[::-1]]
    first = [None, None]
    y_edges = []
    for i in range(m):
        j = (i + 1) % m
        faces.append([top[j], top[i], bot[i], bot[j]])
        first.append("c")
        y_edges.append((top[i], bot[i]))
    return build_from_faces(m, faces, y_edges, first)


def _band(m_ring: int, first_of: Callable[[int], str]):
    """Quadrilateral band between rings t_i and b_i with y-edges t_i b_i."""
    faces, first, y_edges = [], [], []
    for i in range(m_ring):
        j = (i + 1) % m_ring
        faces.append([f"t{j}", f"t{i}", f"b{i}", f"b{j}"])
        first.append(first_of(i))
        y_edges.append((f"t{i}", f"b{i}"))
    return faces, first, y_edges


def sporadic_rhombus() -> PartialTiling:
    """Rhombus prism with both rhombi cut into two triangles along crossing diagonals."""
    faces, first, y = _band(4, lambda i: "c" if (i + 1) % 2 == 0 else "b")
    faces += [["t0", "t1", "t2"], ["t0", "t2", "t3"], ["b1", "b2", "b3"], ["b1", "b3", "b0"]]
    first += [None] * 4
    return build_from_faces(3, faces, y, first)


def sporadic_pentagonal() -> PartialTiling:
    """Pentagonal prism with each pentagon coned to a centre into five triangles."""
    faces, first, y = _band(5, lambda i: "c")
    for i in range(5):
        j = (i + 1) % 5
        faces.append(["N", f"t{i}", f"t{j}"])
        faces.append(["S", f"b{j}", f"b{i}"])
        first += [None, None]
    return build_from_faces(3, faces, y, first)


def sporadic_hexagonal_central() -> PartialTiling:
    """Hexagonal prism, each hexagon cut into a central triangle and three ears."""
    faces, first, y = _band(6, lambda i: "c" if (i + 1) % 2 == 0 else "b")
    faces += [["t0", "t2", "t4"], ["t0", "t1", "t2"], ["t2", "t3", "t4"], ["t4", "t5", "t0"]]
    faces += [["b1", "b3", "b5"], ["b1", "b2", "b3"], ["b3", "b4", "b5"], ["b5", "b0", "b1"]]
    first += [None] * 8
    return build_from_faces(3, faces, y, first)


def sporadic_hexagonal_zigzag() -> PartialTiling:
    """Hexagonal prism, each hexagon cut into four triangles along a zigzag."""
    pattern = ["b", "c", "b", "b", "c", "b"]
    faces, first, y = _band(6, lambda i: pattern[i])
    faces += [["t0", "t1", "t2"], ["t0", "t2", "t5"], ["t2", "t3", "t5"], ["t3", "t4", "t5"]]
    faces += [["b1", "b2", "b3"], ["b4", "b5", "b0"], ["b0", "b1", "b4"], ["b1", "b3", "b4"]]
    first += [None] * 8
    return build_from_faces(3, faces, y, first)


def sporadic_hexagonal_fine() -> PartialTiling:
    """Hexagonal prism, each hexagon cut into ten triangles around three inner points."""
    faces, first, y = _band(6, lambda i: "c" if i % 2 == 0 else "b")
    # top: p0 sees t5,t0,t1; p1 sees t1,t2,t3; p2 sees t3,t4,t5
    tp = {5: "p0", 0: "p0", 1: "p1", 2: "p1", 3: "p2", 4: "p2"}
    for k in range(6):
        faces.append([f"t{k}", f"t{(k + 1) % 6}", tp[k]])
    faces += [["t1", "p1", "p0"], ["t3", "p2", "p1"], ["t5", "p0", "p2"], ["p0", "p1", "p2"]]
    # bottom: q_j sees b_{2j}, b_{2j+1}, b_{2j+2}
    bq = {k: f"q{k // 2}" for k in range(6)}
    for k in range(6):
        faces.append([f"b{(k + 1) % 6}", f"b{k}", bq[k]])
    faces += [["b2", "q0", "q1"], ["b4", "q1", "q2"], ["b0", "q2", "q0"], ["q0", "q2", "q1"]]
    first += [None] * 20
    return build_from_faces(3, faces, y, first)


@dataclass
class CatalogEntry:
    id: str
    build: Callable[[], PartialTiling]
    vertex_set: frozenset[VertexType]
    f_P: int
    f_Q: int
    fixed_angles: dict = field(default_factory=dict)
    note: str = ""

    def tiling(self) -> PartialTiling:
        return self.build()

    @property
    def m(self) -> int:
        return int(self.id.split(":")[1]) if self.id.startswith("prism:") else 3


def _vs(*names: str) -> frozenset[VertexType]:
    return frozenset(vt(n) for n in names)


def prism_entry(m: int) -> CatalogEntry:
    return CatalogEntry(f"prism:{m}", lambda: prism(m), _vs("abc"), 2, m,
                        note="prism family, f = m + 2")


SPORADIC = {
    "S1": CatalogEntry("S1", sporadic_rhombus, _vs("ab2", "a2c2"), 4, 4,
                       note="rhombus prism with triangulated rhombi"),
    "S2": CatalogEntry("S2", sporadic_pentagonal, _vs("a2bc", "a5"), 10, 5,
                       fixed_angles={"alpha": Fraction(2, 5)},
                       note="pentagonal prism with triangulated pentagons"),
    "S3": CatalogEntry("S3", sporadic_hexagonal_zigzag, _vs("ab2", "a2bc", "a3c2"), 8, 6,
                       note="hexagonal prism, zigzag triangulation"),
    "S4": CatalogEntry("S4", sporadic_hexagonal_central, _vs("ab2", "a3c2"), 8, 6,
                       note="hexagonal prism, central triangle triangulation"),
    "S5": CatalogEntry("S5", sporadic_hexagonal_fine, _vs("a2b2", "a5", "a3c2"), 20, 6,
                       fixed_angles={"alpha": Fraction(2, 5), "beta": Fraction(3, 5),
                                     "gamma": Fraction(2, 5)},
                       note="hexagonal prism, fine triangulation"),
}


def build_catalog(max_m: int = 8) -> list[CatalogEntry]:
    return [prism_entry(m) for m in range(3, max_m + 1)] + list(SPORADIC.values())


def get_entry(entry_id: str) -> CatalogEntry:
    if entry_id.startswith("prism:"):
        return prism_entry(int(entry_id.split(":")[1]))
    try:
        return SPORADIC[entry_id]
    except KeyError:
        raise KeyError(f"unknown catalog id {entry_id!r}") from None


# -- anchors ---------------------------------------------------------------------

ANCHOR_GAP = Fraction(1, 5)


def _solve_for(expr, target: Fraction, fixed: dict, params) -> dict | None:
    """Value of the single unpinned parameter making ``expr`` equal ``target``."""
    free = [i for i, p in enumerate(params) if p not in fixed]
    if len(free) != 1:
        return None
    i = free[0]
    if expr.coeffs[i] == 0:
        return None
    point = [fixed.get(p, Fraction(0)) for p in params]
    point[i] = Fraction(0)
    value = (target - expr.at(point)) / expr.coeffs[i]
    return {**fixed, params[i]: value}


def default_anchor(solution: AngleAssignment, m: int, beta: Fraction | None = None) -> dict:
    """Reproducible parameter choice for a parametric angle solution.

    With two free angles alpha is pinned at (1 - 1/m) pi.  The last free
    angle is then chosen so that beta - gamma = pi/5 when that is feasible,
    or else at the midpoint of its feasible interval.  Passing ``beta``
    (pi units) pins beta instead of the gap.
    """
    params = solution.params
    if not params:
        return {}
    fixed: dict = {}
    if len(params) == 2:
        fixed["alpha"] = Fraction(m - 1, m)
    if beta is not None:
        point = _solve_for(solution.beta, Fraction(beta), fixed, params)
        if point is None:
            raise ValueError("beta does not determine the free angle")
        return point
    region = region_of(solution, m)
    if region.empty:
        raise NotRealizable("empty angle region")
    point = _solve_for(solution.beta - solution.gamma, ANCHOR_GAP, fixed, params)
    if point is not None and region.contains([point[p] for p in params]):
        return point
    free = [p for p in params if p not in fixed][0]
    idx = params.index(free)
    if len(params) == 1:
        lo, hi = region.interval
    else:
        # feasible interval of the free angle on the line through the pinned one
        lo, hi = None, None
        for con in region.constraints:
            a = con.expr.coeffs[idx]
            rest = con.expr.const + sum(c * fixed.get(p, 0) for c, p in zip(con.expr.coeffs, params)
                                        if p != free)
            if a > 0:
                lo = -rest / a if lo is None else max(lo, -rest / a)
            elif a < 0:
                hi = -rest / a if hi is None else min(hi, -rest / a)
    return {**fixed, free: (lo + hi) / 2}


def anchored(entry: CatalogEntry, beta: Fraction | None = None) -> Realization:
    """Realize a catalog entry at its default anchor (or at the given beta)."""
    t = entry.tiling()
    solution = solve_angles(t.census().counts)
    point = default_anchor(solution, t.m, beta)
    return realize(t, point or None)


# -- verification ----------------------------------------------------------------

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_ANCHOR = 3
EXIT_INCOMPLETE = 4

ANCHOR_TOL = 1e-9
RHOMBUS_TOL = 1.5e-3 * math.pi
RHOMBUS_PRINTED = {"alpha": 0.42965, "beta": 0.78518, "gamma": 0.57035, "x": 0.40941}


@dataclass
class AnchorCheck:
    name: str
    value: float
    expected: float
    tol: float

    @property
    def ok(self) -> bool:
        return abs(self.value - self.expected) <= self.tol

    def to_json(self) -> dict:
        return {"name": self.name, "value": self.value, "expected": self.expected,
                "tol": self.tol, "ok": self.ok}


@dataclass
class MReport:
    m: int
    status: str
    found: list[str]
    missing: list[str]
    extra: int
    nodes: int
    seconds: float

    @property
    def ok(self) -> bool:
        return self.status != INCOMPLETE and not self.missing and not self.extra

    def to_json(self) -> dict:
        return {"m": self.m, "status": self.status, "found": self.found, "missing": self.missing,
                "extra": self.extra, "nodes": self.nodes, "seconds": round(self.seconds, 3)}


@dataclass
class VerifyReport:
    per_m: list[MReport] = field(default_factory=list)
    realizations: dict[str, dict] = field(default_factory=dict)
    anchors: list[AnchorCheck] = field(default_factory=list)

    @property
    def incomplete(self) -> bool:
        return any(r.status == INCOMPLETE for r in self.per_m)

    @property
    def mismatch(self) -> bool:
        return any(r.missing or r.extra for r in self.per_m)

    @property
    def anchor_failure(self) -> bool:
        return (not all(a.ok for a in self.anchors)
                or any("error" in r for r in self.realizations.values()))

    @property
    def exit_code(self) -> int:
        if self.incomplete:
            return EXIT_INCOMPLETE
        if self.mismatch:
            return EXIT_MISMATCH
        if self.anchor_failure:
            return EXIT_ANCHOR
        return EXIT_OK

    def to_json(self) -> dict:
        return {"exit_code": self.exit_code, "per_m": [r.to_json() for r in self.per_m],
                "realizations": self.realizations,
                "anchors": [a.to_json() for a in self.anchors]}


def catalog_codes(max_m: int) -> dict[bytes, CatalogEntry]:
    return {canonical_code(e.tiling()): e for e in build_catalog(max_m)}


def numeric_anchors() -> list[AnchorCheck]:
    """Checks of the fixed angle values and the two x = y special cases."""
    checks = []
    x5 = math.acos(1 / math.sqrt(5))
    for entry in SPORADIC.values():
        if not entry.fixed_angles:
            continue
        solution = solve_angles(entry.tiling().census().counts)
        if solution.params:
            point = default_anchor(solution, 3)
            solution = solution.substitute(point)
        values = dict(zip(("alpha", "beta", "gamma"), solution.radians()))
        for name, v in entry.fixed_angles.items():
            checks.append(AnchorCheck(f"{entry.id}.{name}", values[name], float(v) * math.pi,
                                      ANCHOR_TOL))
        checks.append(AnchorCheck(f"{entry.id}.x", regular_polygon_edge(3, values["alpha"]), x5,
                                  ANCHOR_TOL))
    q = solve_quartic_case()
    checks.append(AnchorCheck("quartic.alpha", q.alpha, 2 * math.pi / 5, ANCHOR_TOL))
    checks.append(AnchorCheck("quartic.residual", max(q.residuals), 0.0, 1e-14))
    checks.append(AnchorCheck("quartic.identity",
                              triangle_quad_identity(2 * math.pi / 5, 4 * math.pi / 5, 2 * math.pi / 5),
                              0.0, 1e-12))
    rh = rhombus_case()
    for name, printed in RHOMBUS_PRINTED.items():
        checks.append(AnchorCheck(f"rhombus.{name}", rh[name], printed * math.pi, RHOMBUS_TOL))
    return checks


def verify_all(max_m: int, opts: SearchOptions | None = None) -> VerifyReport:
    """Classify m = 3..max_m and compare with the catalog."""
    if max_m < 3:
        raise ValueError("max_m must be at least 3")
    opts = opts or SearchOptions()
    expected = catalog_codes(max_m)
    report = VerifyReport()
    for m in range(3, max_m + 1):
        start = time.perf_counter()
        result = classify(m, opts)
        found, extra = [], 0
        for code in result.tilings:
            if code in expected and expected[code].m == m:
                found.append(expected[code].id)
            else:
                extra += 1
        wanted = sorted(e.id for e in expected.values() if e.m == m)
        missing = [i for i in wanted if i not in found]
        report.per_m.append(MReport(m, result.status, sorted(found), missing, extra,
                                    result.total_nodes, time.perf_counter() - start))
    for entry in expected.values():
        try:
            r = anchored(entry)
        except (NotRealizable, ValueError) as exc:
            report.realizations[entry.id] = {"error": str(exc)}
            continue
        report.realizations[entry.id] = r.to_json()
        report.anchors.append(AnchorCheck(f"{entry.id}.closure", r.max_residual, 0.0, ANCHOR_TOL))
    report.anchors += numeric_anchors()
    return report


def check_entry(entry: CatalogEntry) -> list[str]:
    """Problems with a catalog entry's construction (empty when it is sound)."""
    t = entry.tiling()
    problems = [str(v) for v in validate(t).violations]
    c = t.census()
    if set(c.counts) != set(entry.vertex_set):
        problems.append(f"vertex set {sorted(c.counts)}")
    if (c.f_P, c.f_Q) != (entry.f_P, entry.f_Q):
        problems.append(f"tile counts {c.f_P}, {c.f_Q}")
    return problems
