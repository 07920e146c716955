"""Exact angle algebra in units of pi.

Angles are carried as affine expressions with rational coefficients in
units of pi.  A fully determined angle is an expression with no free
parameters; rank-deficient vertex systems leave one or two of the angles
themselves free, and the remaining angles are written in terms of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

NUMERIC_TOL = 1e-12

ANGLE_NAMES = ("alpha", "beta", "gamma")


class UnresolvedParameters(ValueError):
    pass


@dataclass(frozen=True, order=True)
class RationalPi:
    """The angle ``value * pi``, with ``value`` an exact rational."""

    value: Fraction

    def __init__(self, value: Fraction | int | str) -> None:
        object.__setattr__(self, "value", Fraction(value))

    def to_radians(self) -> float:
        return float(self.value) * math.pi

    def __str__(self) -> str:
        return f"{self.value.numerator}/{self.value.denominator} pi"

    @classmethod
    def parse(cls, text: str) -> RationalPi:
        body = text.strip()
        if not body.endswith("pi"):
            raise ValueError(f"not a multiple of pi: {text!r}")
        return cls(Fraction(body[:-2].strip() or "1"))


@dataclass(frozen=True)
class VertexType:
    """Counts of alpha, beta and gamma corners meeting at a vertex."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if min(self.a, self.b, self.c) < 0:
            raise ValueError("negative corner count")
        if self.a + self.b + self.c < 3:
            raise ValueError(f"vertex degree below 3: {self.as_tuple()}")
        if (self.b + self.c) % 2:
            raise ValueError(f"odd y-degree: {self.as_tuple()}")

    @property
    def degree(self) -> int:
        return self.a + self.b + self.c

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __lt__(self, other: VertexType) -> bool:
        return (self.degree, self.as_tuple()) < (other.degree, other.as_tuple())

    def __str__(self) -> str:
        parts = []
        for sym, n in zip("abc", self.as_tuple()):
            if n == 1:
                parts.append(sym)
            elif n > 1:
                parts.append(f"{sym}{n}")
        return "".join(parts)

    @classmethod
    def parse(cls, text: str) -> VertexType:
        """Parse compact names such as ``"a2bc"`` or ``"ab2"``."""
        counts = {"a": 0, "b": 0, "c": 0}
        i = 0
        while i < len(text):
            sym = text[i]
            if sym not in counts:
                raise ValueError(f"bad vertex name {text!r}")
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            counts[sym] += int(text[i + 1:j]) if j > i + 1 else 1
            i = j
        return cls(counts["a"], counts["b"], counts["c"])


def vt(name: str) -> VertexType:
    return VertexType.parse(name)


@dataclass(frozen=True)
class Affine:
    """``const + sum(coeffs[i] * p_i)`` in units of pi."""

    const: Fraction
    coeffs: tuple[Fraction, ...] = ()

    @property
    def is_constant(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def at(self, params: Sequence[Fraction | float]) -> Fraction | float:
        total = self.const
        for c, p in zip(self.coeffs, params):
            total = total + c * p
        return total

    def __add__(self, other: Affine) -> Affine:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Affine(self.const + other.const, tuple(x + y for x, y in zip(a, b)))

    def scale(self, k: Fraction | int) -> Affine:
        return Affine(self.const * k, tuple(c * k for c in self.coeffs))

    def __sub__(self, other: Affine) -> Affine:
        return self + other.scale(-1)

    def shift(self, k: Fraction | int) -> Affine:
        return Affine(self.const + k, self.coeffs)

    def describe(self, names: Sequence[str]) -> str:
        terms = []
        for c, name in zip(self.coeffs, names):
            if c:
                terms.append(f"{c}*{name}")
        if self.const or not terms:
            terms.insert(0, f"{self.const}")
        return " + ".join(terms) + " (pi units)"


@dataclass(frozen=True)
class AngleAssignment:
    """Values of (alpha, beta, gamma).

    Exact and parametric assignments hold :class:`Affine` expressions in
    pi units, with ``params`` naming the free angles.  Numeric assignments
    hold floats in radians.  ``consistent`` is False for an inconsistent
    vertex system (the empty solution space).
    """

    alpha: Affine | float
    beta: Affine | float
    gamma: Affine | float
    params: tuple[str, ...] = ()
    consistent: bool = True

    @classmethod
    def exact(cls, alpha, beta, gamma) -> AngleAssignment:
        return cls(*(Affine(Fraction(v)) for v in (alpha, beta, gamma)))

    @classmethod
    def numeric(cls, alpha: float, beta: float, gamma: float) -> AngleAssignment:
        return cls(float(alpha), float(beta), float(gamma))

    @classmethod
    def empty(cls) -> AngleAssignment:
        zero = Affine(Fraction(0))
        return cls(zero, zero, zero, consistent=False)

    @property
    def values(self) -> tuple:
        return (self.alpha, self.beta, self.gamma)

    @property
    def is_numeric(self) -> bool:
        return self.consistent and all(isinstance(v, float) for v in self.values)

    @property
    def is_exact(self) -> bool:
        return (self.consistent and not self.params
                and all(isinstance(v, Affine) and v.is_constant for v in self.values))

    @property
    def is_parametric(self) -> bool:
        return self.consistent and bool(self.params)

    def exact_values(self) -> tuple[Fraction, Fraction, Fraction]:
        if not self.is_exact:
            raise UnresolvedParameters("unresolved parameters")
        return tuple(v.const for v in self.values)

    def radians(self) -> tuple[float, float, float]:
        if not self.consistent:
            raise ValueError("inconsistent angle system")
        if self.is_numeric:
            return self.values
        if not self.is_exact:
            raise UnresolvedParameters("unresolved parameters")
        return tuple(float(v.const) * math.pi for v in self.values)

    def substitute(self, values: Mapping[str, Fraction | float]) -> AngleAssignment:
        """Pin the free angles.

        Rational values (pi units) keep the result exact; floats are
        taken as radians and give a numeric assignment.
        """
        missing = [p for p in self.params if p not in values]
        if missing:
            raise UnresolvedParameters(f"unresolved parameters: {missing}")
        pinned = [values[p] for p in self.params]
        if all(isinstance(v, (Fraction, int)) for v in pinned):
            exact = [Fraction(v) for v in pinned]
            return AngleAssignment.exact(*(e.at(exact) for e in self.values))
        in_pi = [float(v) / math.pi for v in pinned]
        return AngleAssignment.numeric(*(float(e.at(in_pi)) * math.pi for e in self.values))

    def to_json(self) -> dict:
        out = {}
        for name, v in zip(ANGLE_NAMES, self.values):
            if isinstance(v, float):
                out[name] = float(f"{v:.17g}")
            elif v.is_constant:
                out[name] = str(RationalPi(v.const))
            else:
                out[name] = v.describe(self.params)
        if self.params:
            out["free"] = list(self.params)
        return out


def vertex_residual(v: VertexType, assignment: AngleAssignment) -> float:
    """``a*alpha + b*beta + c*gamma - 2*pi`` in radians."""
    if assignment.is_exact:
        al, be, ga = assignment.exact_values()
        return float(v.a * al + v.b * be + v.c * ga - 2) * math.pi
    al, be, ga = assignment.radians()
    return v.a * al + v.b * be + v.c * ga - 2 * math.pi


def exact_residual(v: VertexType, assignment: AngleAssignment) -> Fraction:
    al, be, ga = assignment.exact_values()
    return v.a * al + v.b * be + v.c * ga - 2


# Elimination visits gamma, then beta, then alpha, so that free parameters
# are alpha first: the natural parametrisation of every vertex family here.
_PIVOT_ORDER = (2, 1, 0)


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    rows = [r[:] for r in rows]
    pivots: list[int] = []
    r = 0
    for col in _PIVOT_ORDER:
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][col]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    return rows, pivots


def solve_angles(types: Iterable[VertexType]) -> AngleAssignment:
    """Solve ``a*alpha + b*beta + c*gamma = 2*pi`` for every given type."""
    types = sorted(set(types))
    if not types:
        raise ValueError("no vertex types given")
    rows = [[Fraction(t.a), Fraction(t.b), Fraction(t.c), Fraction(2)] for t in types]
    red, pivots = _rref(rows)
    for row in red[len(pivots):]:
        if row[3] != 0:
            return AngleAssignment.empty()
    free = [col for col in (0, 1, 2) if col not in pivots]
    exprs: list[Affine] = [None, None, None]  # type: ignore[list-item]
    for k, col in enumerate(free):
        coeffs = [Fraction(0)] * len(free)
        coeffs[k] = Fraction(1)
        exprs[col] = Affine(Fraction(0), tuple(coeffs))
    for row, col in zip(red, pivots):
        coeffs = tuple(-row[f] for f in free)
        exprs[col] = Affine(row[3], coeffs)
    return AngleAssignment(*exprs, params=tuple(ANGLE_NAMES[c] for c in free))


@dataclass(frozen=True)
class Constraint:
    """``expr > 0`` when strict, ``expr >= 0`` otherwise (pi units)."""

    expr: Affine
    strict: bool = True
    label: str = ""


def angle_constraints(m: int, *, assume_convex: bool = True,
                      abg_bound: bool = False) -> list[tuple[tuple[int, int, int], Fraction, bool, str]]:
    """Linear constraints on (alpha, beta, gamma) as (coeffs, rhs, strict, label).

    Each means ``coeffs . angles > rhs`` (or ``>=`` when not strict).
    ``abg_bound`` adds ``alpha + beta + gamma <= 2`` which every tiling
    satisfies because some vertex contains alpha together with beta.
    """
    if m < 3:
        raise ValueError("m must be at least 3")
    beta_max = Fraction(1) if assume_convex else Fraction(3, 2)
    cons = [
        ((1, 0, 0), 1 - Fraction(2, m), True, "alpha > (1-2/m)pi"),
        ((-1, 0, 0), Fraction(-1), True, "alpha < pi"),
        ((0, 1, 0), Fraction(1, 2), True, "beta > pi/2"),
        ((0, -1, 0), -beta_max, True, f"beta < {beta_max}pi"),
        ((0, 0, 1), Fraction(0), True, "gamma > 0"),
        ((0, 0, -1), Fraction(-1), True, "gamma < pi"),
        ((0, 1, -1), Fraction(0), True, "beta > gamma"),
        ((0, 1, 1), Fraction(1), True, "beta + gamma > pi"),
    ]
    if abg_bound:
        cons.append(((-1, -1, -1), Fraction(-2), False, "alpha + beta + gamma <= 2pi"))
    return cons


@dataclass
class Region:
    """Feasible set of the free parameters (pi units).

    ``vertices`` are the corners of the closure; ``interior`` is a point of
    the set itself when it is nonempty.  For one free parameter
    ``interval`` gives the open interval (lo, hi).
    """

    params: tuple[str, ...]
    constraints: list[Constraint]
    vertices: list[tuple[Fraction, ...]] = field(default_factory=list)
    interior: tuple[Fraction, ...] | None = None

    @property
    def empty(self) -> bool:
        return self.interior is None

    def __bool__(self) -> bool:
        return not self.empty

    @property
    def interval(self) -> tuple[Fraction, Fraction] | None:
        if len(self.params) != 1 or self.empty:
            return None
        xs = [v[0] for v in self.vertices]
        return (min(xs), max(xs))

    def contains(self, point: Sequence[Fraction | float], tol: float = 0.0) -> bool:
        for con in self.constraints:
            val = con.expr.at(point)
            if con.strict and not val > tol:
                return False
            if not con.strict and not val >= -tol:
                return False
        return True


def _region(params: tuple[str, ...], constraints: list[Constraint]) -> Region:
    n = len(params)
    region = Region(params, constraints)
    if n == 0:
        if region.contains(()):
            region.interior = ()
        return region
    # Closure vertices: intersections of n boundary hyperplanes.
    pts: set[tuple[Fraction, ...]] = set()
    nontrivial = [c for c in constraints if not c.expr.is_constant]
    for combo in combinations(nontrivial, n):
        pt = _intersect([c.expr for c in combo])
        if pt is None:
            continue
        if all(c.expr.at(pt) >= 0 for c in constraints):
            pts.add(pt)
    if not pts:
        return region
    region.vertices = sorted(pts)
    centroid = tuple(sum(p[i] for p in pts) / len(pts) for i in range(n))
    if region.contains(centroid):
        region.interior = centroid
    return region


def _intersect(exprs: list[Affine]) -> tuple[Fraction, ...] | None:
    n = len(exprs)
    if n == 1:
        (e,) = exprs
        if e.coeffs[0] == 0:
            return None
        return (-e.const / e.coeffs[0],)
    (a, b), (c, d) = exprs[0].coeffs, exprs[1].coeffs
    det = a * d - b * c
    if det == 0:
        return None
    e, f = -exprs[0].const, -exprs[1].const
    return ((e * d - b * f) / det, (a * f - e * c) / det)


def feasible(assignment: AngleAssignment, m: int, *, assume_convex: bool = True,
             abg_bound: bool = False) -> bool | Region:
    """Check the prototile inequalities.

    Exact and numeric assignments give a bool.  Parametric assignments
    give the :class:`Region` of free-parameter values where all hold
    (falsy when empty).  All inequalities are strict.
    """
    cons = angle_constraints(m, assume_convex=assume_convex, abg_bound=abg_bound)
    if not assignment.consistent:
        return False if not assignment.params else Region(assignment.params, [])
    if assignment.is_numeric:
        vals = [v / math.pi for v in assignment.values]
        for coeffs, rhs, strict, _ in cons:
            lhs = sum(k * v for k, v in zip(coeffs, vals))
            if strict and not lhs > float(rhs) + NUMERIC_TOL / math.pi:
                return False
            if not strict and not lhs >= float(rhs) - NUMERIC_TOL / math.pi:
                return False
        return True
    exprs = assignment.values
    constraints = []
    for coeffs, rhs, strict, label in cons:
        total = Affine(Fraction(0), (Fraction(0),) * len(assignment.params))
        for k, e in zip(coeffs, exprs):
            if k:
                total = total + e.scale(k)
        constraints.append(Constraint(total.shift(-rhs), strict, label))
    region = _region(assignment.params, constraints)
    if not assignment.params:
        return not region.empty
    return region


def region_of(assignment: AngleAssignment, m: int, **kw) -> Region:
    """Like :func:`feasible` but always returns a :class:`Region`."""
    res = feasible(assignment, m, **kw)
    if isinstance(res, Region):
        return res
    region = Region((), [])
    if res:
        region.interior = ()
    return region


def tile_areas(assignment: AngleAssignment, m: int, point=()) -> tuple:
    """Areas of the m-gon and the quadrilateral, in pi units when exact."""
    al, be, ga = (e.at(point) if isinstance(e, Affine) else e / math.pi
                  for e in assignment.values)
    return m * al - (m - 2), 2 * be + 2 * ga - 2
