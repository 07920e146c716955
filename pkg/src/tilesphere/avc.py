"""Vertex types, their remainder slices, AVCs and the tile census."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .angles import AngleAssignment, VertexType, feasible, region_of, solve_angles, tile_areas
from .arrangements import (Arrangement, adjacencies, dual_adjacency,
                           enumerate_arrangements)

DEFAULT_MAX_DEGREE = 12
DEFAULT_MAX_TILES = 100

# Two betas never share an x-edge at a vertex (no beta-squared vertex
# allows it), and the far end of such an edge would be gamma|gamma.
GLOBAL_FORBID = ("b|b", "c|c")


@lru_cache(maxsize=None)
def _type_feasible(v: VertexType, m: int, assume_convex: bool, abg_bound: bool) -> bool:
    # quick exact rejection: alpha > 1 - 2/m, beta + gamma > 1 and beta > 1/2
    # bound the angle sum from below (pi units)
    pairs = min(v.b, v.c)
    if v.a * (1 - Fraction(2, m)) + pairs + Fraction(max(v.b - v.c, 0), 2) >= 2:
        return False
    return bool(feasible(solve_angles([v]), m, assume_convex=assume_convex,
                         abg_bound=abg_bound))


@lru_cache(maxsize=None)
def _types(m: int, max_degree: int, assume_convex: bool, abg_bound: bool,
           forbid: tuple[str, ...], single_chirality: bool) -> tuple[VertexType, ...]:
    out = []
    for deg in range(3, max_degree + 1):
        for a in range(deg + 1):
            for b in range(deg - a + 1):
                c = deg - a - b
                if (b + c) % 2:
                    continue
                v = VertexType(a, b, c)
                if not _type_feasible(v, m, assume_convex, abg_bound):
                    continue
                if not enumerate_arrangements(v, forbid=forbid,
                                              single_chirality=single_chirality):
                    continue
                out.append(v)
    return tuple(sorted(out))


def enumerate_vertex_types(m: int, max_degree: int = DEFAULT_MAX_DEGREE, *,
                           assume_convex: bool = True, abg_bound: bool = True,
                           forbid=(), single_chirality: bool = False) -> list[VertexType]:
    """Vertex types with a feasible angle region and at least one arrangement.

    ``abg_bound`` imposes alpha + beta + gamma <= 2pi, which holds in every
    tiling: some vertex has alpha and beta together plus at least one more
    quadrilateral corner, each at least gamma.
    """
    if m < 3 or max_degree < 3:
        raise ValueError("need m >= 3 and max_degree >= 3")
    return list(_types(m, max_degree, assume_convex, abg_bound, tuple(forbid),
                       single_chirality))


def degree_slice(m: int, degrees=(3, 4, 5), *, forbid=GLOBAL_FORBID, **kw) -> set[VertexType]:
    """Admissible types of the given degrees, with the global pruning patterns."""
    types = enumerate_vertex_types(m, max(degrees), forbid=forbid, **kw)
    return {v for v in types if v.degree in degrees}


@dataclass
class Remainders:
    beta2: set[VertexType]
    gamma2: set[VertexType]
    beta_gamma: set[VertexType]

    def as_dict(self) -> dict[str, list[str]]:
        return {"beta2": [str(v) for v in sorted(self.beta2)],
                "gamma2": [str(v) for v in sorted(self.gamma2)],
                "beta_gamma": [str(v) for v in sorted(self.beta_gamma)]}


def classify_remainders(m: int, max_degree: int = DEFAULT_MAX_DEGREE) -> Remainders:
    """Types containing two betas, two gammas, or a beta and a gamma.

    The beta-squared slice uses angle feasibility alone; the other two
    also exclude ``b|b`` and ``c|c`` adjacencies, which the first slice
    shows to be impossible.
    """
    plain = enumerate_vertex_types(m, max_degree)
    beta2 = {v for v in plain if v.b >= 2}
    pruned = enumerate_vertex_types(m, max_degree, forbid=GLOBAL_FORBID)
    gamma2 = {v for v in pruned if v.c >= 2}
    beta_gamma = {v for v in pruned if v.b >= 1 and v.c >= 1}
    return Remainders(beta2, gamma2, beta_gamma)


@dataclass
class Census:
    """Vertex multiplicities and tile counts of a would-be tiling."""

    counts: dict[VertexType, int]
    f_P: int
    f_Q: int

    @property
    def V(self) -> int:
        return sum(self.counts.values())

    @property
    def F(self) -> int:
        return self.f_P + self.f_Q

    def E(self, m: int) -> int:
        return (m * self.f_P + 4 * self.f_Q) // 2

    def key(self) -> tuple:
        return (self.f_P, self.f_Q, tuple(sorted((v.as_tuple(), n) for v, n in self.counts.items())))

    def to_json(self, m: int) -> dict:
        return {"counts": [[list(v.as_tuple()), n] for v, n in sorted(self.counts.items())],
                "f_P": self.f_P, "f_Q": self.f_Q,
                "V": self.V, "E": self.E(m), "F": self.F}


@dataclass
class AVC:
    m: int
    members: tuple[VertexType, ...]
    solution: AngleAssignment = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self.members = tuple(sorted(set(self.members)))
        if self.solution is None:
            self.solution = solve_angles(self.members)

    def __contains__(self, v: VertexType) -> bool:
        return v in self.members

    def __str__(self) -> str:
        return "{" + ", ".join(str(v) for v in self.members) + "}"

    @property
    def region(self):
        return region_of(self.solution, self.m)

    def to_json(self) -> dict:
        return {"m": self.m, "members": [list(v.as_tuple()) for v in self.members],
                "solution": self.solution.to_json()}


def _weights(m: int, members) -> list[Fraction]:
    # Each vertex's share of V - E + F: 1 - deg/2 + a/m + (b+c)/4.
    return [1 - Fraction(v.degree, 2) + Fraction(v.a, m) + Fraction(v.b + v.c, 4)
            for v in members]


def _census_matrix(m: int, members) -> tuple[np.ndarray, np.ndarray]:
    """Equality system over (n_1..n_k, f_P, f_Q), scaled to integers."""
    k = len(members)
    rows, rhs = [], []
    rows.append([v.a for v in members] + [-m, 0])
    rows.append([v.b for v in members] + [0, -2])
    rows.append([v.c for v in members] + [0, -2])
    rhs += [0, 0, 0]
    w = _weights(m, members)
    scale = 4 * m
    rows.append([int(x * scale) for x in w] + [0, 0])
    rhs.append(2 * scale)
    return np.array(rows, dtype=float), np.array(rhs, dtype=float)


def census_exists(avc: AVC, max_tiles: int = DEFAULT_MAX_TILES, *, min_polygons: int = 1,
                  min_quads: int = 1, max_polygons: int | None = None,
                  max_quads: int | None = None) -> bool:
    """Is there an integral census with both tile kinds present (MILP)?"""
    return census_witness(avc, max_tiles, min_polygons=min_polygons, min_quads=min_quads,
                          max_polygons=max_polygons, max_quads=max_quads) is not None


def census_witness(avc: AVC, max_tiles: int = DEFAULT_MAX_TILES, *, min_polygons: int = 1,
                   min_quads: int = 1, max_polygons: int | None = None,
                   max_quads: int | None = None, required=()) -> Census | None:
    members = avc.members
    k = len(members)
    A, b = _census_matrix(avc.m, members)
    cons = [LinearConstraint(A, b, b),
            LinearConstraint(np.array([[0] * k + [1, 1]], dtype=float), 0, max_tiles)]
    lo = np.zeros(k + 2)
    hi = np.full(k + 2, np.inf)
    lo[k], lo[k + 1] = min_polygons, min_quads
    if max_polygons is not None:
        hi[k] = max_polygons
    if max_quads is not None:
        hi[k + 1] = max_quads
    for v, n in dict(required).items():
        if v not in members:
            return None
        lo[members.index(v)] = max(lo[members.index(v)], n)
    if np.any(lo > hi):
        return None
    res = milp(c=np.zeros(k + 2), constraints=cons, integrality=np.ones(k + 2),
               bounds=Bounds(lo, hi))
    if res.status != 0 or res.x is None:
        return None
    x = np.rint(res.x).astype(int)
    return Census({v: int(n) for v, n in zip(members, x[:k]) if n}, int(x[k]), int(x[k + 1]))


def census_unbounded(avc: AVC) -> bool:
    """True when the census cone has a nonzero ray, so tile counts are unbounded."""
    members = avc.members
    k = len(members)
    A, _ = _census_matrix(avc.m, members)
    from scipy.optimize import linprog
    res = linprog(c=-np.ones(k + 2), A_eq=A, b_eq=np.zeros(len(A)),
                  bounds=[(0, 1)] * (k + 2), method="highs")
    return res.status == 0 and -res.fun > 1e-9


def census_tile_bound(avc: AVC) -> float:
    """Upper bound on f_P + f_Q over all censuses (LP relaxation, inf if unbounded)."""
    members = avc.members
    k = len(members)
    A, b = _census_matrix(avc.m, members)
    from scipy.optimize import linprog
    c = np.zeros(k + 2)
    c[k] = c[k + 1] = -1
    res = linprog(c=c, A_eq=A, b_eq=b, bounds=[(0, None)] * (k + 2), method="highs")
    if res.status == 3:
        return math.inf
    if res.status != 0:
        return 0.0
    return -res.fun


def census(avc: AVC, max_tiles: int = DEFAULT_MAX_TILES) -> list[Census]:
    """All nonnegative integral censuses with at most ``max_tiles`` tiles."""
    if max_tiles < 2:
        raise ValueError("max_tiles must be at least 2")
    m = avc.m
    members = avc.members
    out = []
    for counts in _solve_counts(members, m, max_tiles):
        sum_a = sum(n * v.a for v, n in zip(members, counts))
        sum_b = sum(n * v.b for v, n in zip(members, counts))
        sum_c = sum(n * v.c for v, n in zip(members, counts))
        if sum_a % m or sum_b != sum_c or sum_b % 2:
            continue
        c = Census({v: n for v, n in zip(members, counts) if n}, sum_a // m, sum_b // 2)
        if _area_ok(avc, c):
            out.append(c)
    out.sort(key=Census.key)
    return out


def _solve_counts(members, m: int, max_tiles: int):
    """Multiplicities meeting the Euler relation within the tile budget.

    Everything is scaled by 4m: a vertex adds ``4a + m(b+c)`` to 4m times
    the tile count and its weight to 4m times V - E + F.
    """
    k = len(members)
    if k == 0:
        return
    load = [4 * v.a + m * (v.b + v.c) for v in members]
    weight = [4 * m - 2 * m * v.degree + 4 * v.a + m * (v.b + v.c) for v in members]
    order = sorted(range(k), key=lambda i: (weight[i] > 0, i))
    counts = [0] * k

    def rec(pos, budget, euler):
        if pos == k:
            if euler == 0:
                yield tuple(counts)
            return
        i = order[pos]
        w, ld = weight[i], load[i]
        if pos == k - 1 and w:
            if euler % w == 0 and euler // w >= 0 and (euler // w) * ld <= budget:
                counts[i] = euler // w
                yield tuple(counts)
                counts[i] = 0
            return
        cap = budget // ld
        if w > 0:
            cap = min(cap, euler // w) if euler >= 0 else -1
        for n in range(cap + 1):
            counts[i] = n
            yield from rec(pos + 1, budget - n * ld, euler - n * w)
        counts[i] = 0

    yield from rec(0, 4 * m * max_tiles, 8 * m)


def _area_ok(avc: AVC, c: Census) -> bool:
    """Tile areas add up to the sphere; an interval check for free angles."""
    sol = avc.solution
    if not sol.consistent:
        return False
    if sol.is_exact:
        p, q = tile_areas(sol, avc.m)
        return c.f_P * p + c.f_Q * q == 4
    region = avc.region
    if region.empty:
        return False
    vals = [c.f_P * p + c.f_Q * q for p, q in
            (tile_areas(sol, avc.m, pt) for pt in region.vertices)]
    return min(vals) <= 4 <= max(vals)


# -- AVC enumeration ---------------------------------------------------------

def _mixes_alpha_with_both(members) -> bool:
    # some vertex has alpha next to beta, and some has alpha next to gamma
    return (any(v.a and v.b for v in members) and any(v.a and v.c for v in members))


def _has_low_degree(members, m: int) -> bool:
    # a sphere tiling has a vertex of degree at most 5, and of degree 3 without triangles
    if m >= 4:
        return any(v.degree == 3 for v in members)
    return any(v.degree <= 5 for v in members)


def live_arrangements(members, *, single_chirality: bool = False,
                      forbid=GLOBAL_FORBID) -> dict[VertexType, set[Arrangement]]:
    """Arrangements that survive edge-duality closure.

    An adjacency ``p sep q`` at one end of an edge forces its dual at the
    other end; an arrangement is dead when one of its adjacencies has a
    dual that no live arrangement provides.
    """
    live = {v: set(enumerate_arrangements(v, forbid=forbid, single_chirality=single_chirality))
            for v in members}
    changed = True
    while changed:
        changed = False
        present: set[tuple[str, str, str]] = set()
        for arrs in live.values():
            for arr in arrs:
                for adj in adjacencies(arr):
                    present.add(adj)
                    present.add((adj[2], adj[1], adj[0]))
        for v, arrs in live.items():
            keep = {arr for arr in arrs
                    if all(dual_adjacency(*adj) in present for adj in adjacencies(arr))}
            if keep != arrs:
                live[v] = keep
                changed = True
    return {v: arrs for v, arrs in live.items() if arrs}


def reduce_avc(avc: AVC, *, single_chirality: bool = False,
               max_tiles: int = DEFAULT_MAX_TILES, assume_convex: bool = True) -> AVC | None:
    """Drop members that cannot occur; None when the candidate dies."""
    members = set(avc.members)
    while True:
        if not members or not _mixes_alpha_with_both(members) or not _has_low_degree(members, avc.m):
            return None
        live = live_arrangements(members, single_chirality=single_chirality)
        if set(live) != members:
            members = set(live)
            continue
        break
    red = AVC(avc.m, tuple(members))
    if not region_of(red.solution, red.m, assume_convex=assume_convex):
        return None
    if not census_exists(red, max_tiles):
        return None
    return red


def _maximal(sets):
    sets = sorted(set(sets), key=len, reverse=True)
    out = []
    for s in sets:
        if not any(s <= t for t in out):
            out.append(s)
    return out


def _point_sets(M: np.ndarray, m: int, assume_convex: bool = True) -> list[frozenset[int]]:
    """Type sets meeting at a feasible exact angle point."""
    n = len(M)
    if n < 3:
        return []
    idx = np.array(list(combinations(range(n), 3)), dtype=np.int64)
    A = M[idx]  # (T, 3, 3)
    det = np.round(np.linalg.det(A.astype(float))).astype(np.int64)
    ok = det != 0
    idx, A, det = idx[ok], A[ok], det[ok]
    nums = []
    for col in range(3):
        B = A.copy()
        B[:, :, col] = 2
        nums.append(np.round(np.linalg.det(B.astype(float))).astype(np.int64))
    N = np.stack(nums, axis=1)
    sign = np.sign(det)
    N, D = N * sign[:, None], det * sign
    g = np.gcd.reduce(np.concatenate([N, D[:, None]], axis=1), axis=1)
    N, D = N // g[:, None], D // g
    pts = np.unique(np.concatenate([N, D[:, None]], axis=1), axis=0)
    al, be, ga, D = pts[:, 0], pts[:, 1], pts[:, 2], pts[:, 3]
    be_ok = (be < D) if assume_convex else (2 * be < 3 * D)
    feas = ((m * al > (m - 2) * D) & (al < D) & (2 * be > D) & be_ok & (ga > 0)
            & (ga < D) & (be > ga) & (be + ga > D) & (al + be + ga <= 2 * D))
    pts = pts[feas]
    if not len(pts):
        return []
    on = (M @ pts[:, :3].T) == 2 * pts[:, 3][None, :]
    return [frozenset(np.nonzero(on[:, j])[0].tolist()) for j in range(on.shape[1])]


def _flat_sets(types, m: int, known, assume_convex: bool = True) -> list[frozenset[int]]:
    """Type sets along feasible lines and planes not already covered."""
    out = []
    n = len(types)
    rows = [np.array(v.as_tuple() + (2,)) for v in types]
    seen = set()
    for i, j in combinations(range(n), 2):
        pair = np.stack([rows[i], rows[j]])
        if np.linalg.matrix_rank(pair[:, :3]) < 2:
            continue
        s = frozenset(k for k in range(n)
                      if np.linalg.matrix_rank(np.vstack([pair, rows[k]])) == 2)
        if s in seen or any(s <= t for t in known):
            continue
        seen.add(s)
        if region_of(solve_angles([types[k] for k in s]), m, abg_bound=True,
                     assume_convex=assume_convex):
            out.append(s)
    covered = list(known) + out
    for i in range(n):
        s = frozenset([i])
        if not any(s <= t for t in covered):
            out.append(s)
    return out


@lru_cache(maxsize=None)
def _enumerate_avcs(m: int, max_degree: int, single_chirality: bool,
                    max_tiles: int, assume_convex: bool) -> tuple[AVC, ...]:
    types = enumerate_vertex_types(m, max_degree, forbid=GLOBAL_FORBID,
                                   single_chirality=single_chirality,
                                   assume_convex=assume_convex)
    M = np.array([v.as_tuple() for v in types], dtype=np.int64).reshape(-1, 3)
    points = _point_sets(M, m, assume_convex)
    flats = _flat_sets(types, m, _maximal(points), assume_convex)
    reduced = []
    for s in _maximal(points + flats):
        red = reduce_avc(AVC(m, tuple(types[k] for k in s)),
                         single_chirality=single_chirality, max_tiles=max_tiles,
                         assume_convex=assume_convex)
        if red is not None:
            reduced.append(red)
    keep = _maximal(frozenset(a.members) for a in reduced)
    by_members = {frozenset(a.members): a for a in reduced}
    return tuple(sorted((by_members[s] for s in keep), key=lambda a: a.members))


def enumerate_avcs(m: int, max_degree: int = DEFAULT_MAX_DEGREE, *,
                   single_chirality: bool = False,
                   max_tiles: int = DEFAULT_MAX_TILES,
                   assume_convex: bool = True) -> list[AVC]:
    """Maximal vertex-type sets that could be the vertex set of a tiling.

    Candidates are maximal sets of admissible types sharing a feasible
    angle point.  Each is reduced by the arrangement closure, must keep an
    alpha-beta and an alpha-gamma vertex plus a low degree vertex, and
    must admit an integral census with both tile kinds.
    """
    if m < 3:
        raise ValueError("m must be at least 3")
    return list(_enumerate_avcs(m, max_degree, single_chirality, max_tiles, assume_convex))
