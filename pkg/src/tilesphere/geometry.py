"""Spherical metric data: edge lengths, the quadrilateral solver and closure checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .angles import (AngleAssignment, UnresolvedParameters, VertexType, region_of,
                     solve_angles, vertex_residual)

DEGENERATE_TOL = 1e-9
ROOT_TOL = 1e-12
SCAN_STEP = 1e-3


class NotRealizable(ValueError):
    pass


def regular_polygon_edge(m: int, alpha: float) -> float:
    """Edge length of the regular spherical m-gon with corner angle ``alpha``.

    Cutting the polygon into m isosceles triangles from its centre gives
    cos x = (cos(2pi/m) + cos^2(alpha/2)) / sin^2(alpha/2).
    """
    if not (1 - 2 / m) * math.pi < alpha < math.pi:
        raise NotRealizable("polygon not realizable")
    s2 = math.sin(alpha / 2) ** 2
    cos_x = (math.cos(2 * math.pi / m) + math.cos(alpha / 2) ** 2) / s2
    if not -1 < cos_x < 1:
        raise NotRealizable("polygon not realizable")
    return math.acos(cos_x)


def _triangle_angles(x: float, y: float, beta: float) -> tuple[float, float]:
    """Angles next to sides x and y of the triangle with sides x, y and included angle beta."""
    cos_d = math.cos(x) * math.cos(y) + math.sin(x) * math.sin(y) * math.cos(beta)
    cos_d = max(-1.0, min(1.0, cos_d))
    sin_d = math.sqrt(max(0.0, 1 - cos_d * cos_d))
    cp = (math.cos(y) - math.cos(x) * cos_d) / (math.sin(x) * sin_d)
    cq = (math.cos(x) - math.cos(y) * cos_d) / (math.sin(y) * sin_d)
    return math.acos(max(-1.0, min(1.0, cp))), math.acos(max(-1.0, min(1.0, cq)))


def quad_corner_angle(beta: float, x: float, y: float) -> float:
    """The gamma corner of the x,y,x,y quadrilateral built from its beta corners.

    The diagonal between the two gamma corners splits the quadrilateral into
    two congruent triangles with sides x, y and included angle beta; each
    gamma corner collects the two remaining angles of one triangle.
    """
    p, q = _triangle_angles(x, y, beta)
    return p + q


def quad_corner_slope(beta: float, x: float, y: float) -> float:
    """Derivative of :func:`quad_corner_angle` in y."""
    k = math.tan(x / 2)
    t = math.tan(y / 2)
    u = k * t * math.sin(beta)
    v = 1 + k * t * math.cos(beta)
    return k * math.sin(beta) * (1 + t * t) / (u * u + v * v)


def quad_solve_y(beta: float, gamma: float, x: float) -> float:
    """Second edge length of the quadrilateral with angles beta, gamma and edge x."""
    if beta <= gamma:
        raise ValueError("precondition: beta must exceed gamma")
    if not 0 < x < math.pi:
        raise ValueError("precondition: x must lie in (0, pi)")
    if beta + gamma <= math.pi:
        raise NotRealizable("quadrilateral not realizable")

    def f(y: float) -> float:
        return quad_corner_angle(beta, x, y) - gamma

    eps = SCAN_STEP
    grid = np.arange(eps, math.pi - eps / 2, SCAN_STEP)
    vals = [f(y) for y in grid]
    bracket = None
    for i in range(len(grid) - 1):
        if vals[i] == 0:
            return float(grid[i])
        if vals[i] * vals[i + 1] < 0:
            bracket = (float(grid[i]), float(grid[i + 1]))
            break
    if bracket is None:
        raise NotRealizable("quadrilateral not realizable")
    lo, hi = bracket
    flo = f(lo)
    while hi - lo > 1e-9:
        mid = (lo + hi) / 2
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    y = (lo + hi) / 2
    for _ in range(20):
        step = f(y) / quad_corner_slope(beta, x, y)
        y -= step
        if abs(step) < ROOT_TOL:
            break
    if not 0 < y < math.pi:
        raise NotRealizable("quadrilateral not realizable")
    return y


def triangle_quad_identity(alpha: float, beta: float, gamma: float) -> float:
    """Residual of the relation that holds when the quadrilateral has x = y."""
    lhs = 1 / math.tan(alpha / 2) ** 2 + math.cos(2 * math.pi / 3) / math.sin(alpha / 2) ** 2
    return lhs - 1 / (math.tan(beta / 2) * math.tan(gamma / 2))


@dataclass
class QuarticCase:
    roots: list[float]
    residuals: list[float]
    alpha: float
    beta: float
    gamma: float
    x: float
    t: float


def _quartic(t: float) -> float:
    return 5 * t ** 4 - 10 * t ** 2 + 1


def solve_quartic_case() -> QuarticCase:
    """The x = y point of the family beta = pi - alpha/2, gamma = pi - 3alpha/2.

    With t = tan(alpha/4) the x = y condition becomes 5t^4 - 10t^2 + 1 = 0,
    so t^2 = 1 +- 2/sqrt(5).
    """
    roots = []
    for sq in (1 - 2 / math.sqrt(5), 1 + 2 / math.sqrt(5)):
        r = math.sqrt(sq)
        roots += [-r, r]
    roots.sort()
    chosen = None
    for t in roots:
        if t <= 0:
            continue
        alpha = 4 * math.atan(t)
        beta = math.pi - alpha / 2
        gamma = math.pi - 1.5 * alpha
        if beta > alpha > 0 and gamma > 0:
            chosen = (t, alpha, beta, gamma)
    if chosen is None:
        raise RuntimeError("no admissible root")
    t, alpha, beta, gamma = chosen
    return QuarticCase(roots, [abs(_quartic(r)) for r in roots], alpha, beta, gamma,
                       regular_polygon_edge(3, alpha), t)


def rhombus_case() -> dict[str, float]:
    """The x = y point of the family beta = pi - alpha/2, gamma = pi - alpha.

    Here s = tan^2(alpha/4) solves s^3 + 9s^2 + 7s - 1 = 0 with root sqrt(17) - 4.
    """
    s = math.sqrt(17) - 4
    alpha = 4 * math.atan(math.sqrt(s))
    return {"s": s, "alpha": alpha, "beta": math.pi - alpha / 2, "gamma": math.pi - alpha,
            "x": regular_polygon_edge(3, alpha)}


# -- realizations ----------------------------------------------------------------

@dataclass
class Realization:
    assignment: AngleAssignment
    x: float
    y: float
    vertex_residuals: dict[VertexType, float]
    gauss_bonnet: float
    degenerate_xy: bool
    exact: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        vals = list(self.vertex_residuals.values()) + [self.gauss_bonnet]
        return max(abs(v) for v in vals)

    def to_json(self) -> dict:
        al, be, ga = self.assignment.radians()
        out = {"alpha": float(f"{al:.17g}"), "beta": float(f"{be:.17g}"),
               "gamma": float(f"{ga:.17g}"), "x": float(f"{self.x:.17g}"),
               "y": float(f"{self.y:.17g}"),
               "vertex_residuals": {str(v): r for v, r in sorted(self.vertex_residuals.items())},
               "gauss_bonnet_residual": self.gauss_bonnet,
               "degenerate_xy": self.degenerate_xy}
        if self.exact:
            out["exact"] = self.exact
        return out


def realize_angles(assignment: AngleAssignment, m: int, counts: Mapping[VertexType, int],
                   f_P: int, f_Q: int) -> Realization:
    al, be, ga = assignment.radians()
    x = regular_polygon_edge(m, al)
    y = quad_solve_y(be, ga, x)
    res = {v: vertex_residual(v, assignment) for v in counts}
    gb = f_P * (m * al - (m - 2) * math.pi) + f_Q * (2 * be + 2 * ga - 2 * math.pi) - 4 * math.pi
    exact = assignment.to_json() if assignment.is_exact else {}
    return Realization(assignment, x, y, res, gb, abs(x - y) < DEGENERATE_TOL, exact)


def pin(solution: AngleAssignment, free_params: Mapping[str, Fraction | float] | None) -> AngleAssignment:
    """Pin the free angles of a solution; exact solutions pass through."""
    if not solution.consistent:
        raise NotRealizable("vertex angle sums are inconsistent")
    if not solution.params:
        return solution
    if not free_params:
        raise UnresolvedParameters("unresolved parameters")
    return solution.substitute(free_params)


def realize(t, free_params: Mapping[str, Fraction | float] | None = None) -> Realization:
    """Edge lengths and closure residuals of a complete tiling."""
    census = t.census()
    solution = solve_angles(census.counts)
    assignment = pin(solution, free_params)
    return realize_angles(assignment, t.m, census.counts, census.f_P, census.f_Q)


def sample_points(region, n: int = 7) -> list[tuple[Fraction, ...]]:
    """Interior points spread over a feasible parameter region."""
    if region.empty:
        return []
    if not region.params:
        return [()]
    c = region.interior
    pts = [c]
    for v in region.vertices:
        for k in range(1, n):
            w = Fraction(k, n)
            p = tuple(ci + w * (vi - ci) for ci, vi in zip(c, v))
            if region.contains(p):
                pts.append(p)
    return pts


def geometrically_realizable(types, m: int) -> bool:
    """Some feasible angle point gives a quadrilateral with x != y."""
    solution = solve_angles(types)
    region = region_of(solution, m)
    for pt in sample_points(region):
        values = dict(zip(solution.params, pt))
        a = solution.substitute(values) if values else solution
        try:
            al, be, ga = a.radians()
            x = regular_polygon_edge(m, al)
            y = quad_solve_y(be, ga, x)
        except ValueError:
            continue
        if abs(x - y) >= DEGENERATE_TOL:
            return True
    return False
