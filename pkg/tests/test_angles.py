import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from tilesphere.angles import (AngleAssignment, RationalPi, UnresolvedParameters, VertexType,
                               exact_residual, feasible, region_of, solve_angles, tile_areas,
                               vertex_residual, vt)


def exact(a, b, c):
    return AngleAssignment.exact(F(a), F(b), F(c))


class TestRationalPi:
    def test_lowest_terms(self):
        r = RationalPi(F(4, 10))
        assert str(r) == "2/5 pi"

    def test_to_radians(self):
        assert RationalPi(F(2, 5)).to_radians() == pytest.approx(2 * math.pi / 5, rel=1e-16)

    def test_parse_roundtrip(self):
        assert RationalPi.parse("3/7 pi").value == F(3, 7)


class TestVertexType:
    def test_odd_degree_rejected(self):
        with pytest.raises(ValueError, match="odd y-degree"):
            VertexType(2, 1, 0)

    def test_low_degree_rejected(self):
        with pytest.raises(ValueError):
            VertexType(2, 0, 0)

    def test_names(self):
        assert str(VertexType(2, 1, 1)) == "a2bc"
        assert vt("a3c2") == VertexType(3, 0, 2)
        assert VertexType.parse("abc3").as_tuple() == (1, 1, 3)


class TestResidual:
    def test_symmetric_split(self):
        third = F(2, 3)
        assert vertex_residual(VertexType(1, 1, 1), exact(third, third, third)) == pytest.approx(0, abs=1e-15)

    def test_pentagonal_values(self):
        a = exact(F(2, 5), F(4, 5), F(2, 5))
        assert exact_residual(VertexType(2, 1, 1), a) == 0
        assert exact_residual(VertexType(3, 0, 2), a) == 0

    def test_numeric(self):
        a = AngleAssignment.numeric(2 * math.pi / 5, 4 * math.pi / 5, 2 * math.pi / 5)
        assert abs(vertex_residual(VertexType(2, 1, 1), a)) < 1e-12

    def test_parametric_raises(self):
        sol = solve_angles([vt("abc")])
        with pytest.raises(UnresolvedParameters, match="unresolved parameters"):
            vertex_residual(vt("abc"), sol)


class TestSolve:
    def test_single_equation_two_parameters(self):
        sol = solve_angles([vt("abc")])
        assert sol.params == ("alpha", "beta")
        pinned = sol.substitute({"alpha": F(1, 2), "beta": F(3, 4)})
        assert pinned.exact_values() == (F(1, 2), F(3, 4), F(3, 4))

    def test_pentagonal_family(self):
        sol = solve_angles([vt("a2bc"), vt("a5")])
        assert sol.params == ("beta",)
        assert sol.alpha.is_constant and sol.alpha.const == F(2, 5)
        assert (sol.beta + sol.gamma).is_constant and (sol.beta + sol.gamma).const == F(6, 5)

    def test_fine_hexagonal_values(self):
        sol = solve_angles([vt("a2b2"), vt("a5"), vt("a3c2")])
        assert sol.exact_values() == (F(2, 5), F(3, 5), F(2, 5))

    def test_rhombus_family(self):
        sol = solve_angles([vt("ab2"), vt("a2c2")])
        assert sol.params == ("alpha",)
        for alpha in (F(2, 5), F(3, 7)):
            a, b, c = sol.substitute({"alpha": alpha}).exact_values()
            assert b == 1 - alpha / 2 and c == 1 - alpha

    def test_inconsistent(self):
        sol = solve_angles([vt("a3"), vt("a4")])
        assert not sol.consistent

    def test_empty_input(self):
        with pytest.raises(ValueError):
            solve_angles([])

    def test_float_substitution_is_numeric(self):
        sol = solve_angles([vt("a2bc"), vt("a5")])
        a = sol.substitute({"beta": 0.7 * math.pi})
        assert a.is_numeric
        assert a.radians()[2] == pytest.approx(0.5 * math.pi)


TYPES = [VertexType(a, b, c) for a in range(6) for b in range(5) for c in range(5)
         if a + b + c >= 3 and (b + c) % 2 == 0]


@given(st.lists(st.sampled_from(TYPES), min_size=1, max_size=4, unique=True), st.randoms())
def test_solve_order_independent(types, rnd):
    sol = solve_angles(types)
    shuffled = list(types)
    rnd.shuffle(shuffled)
    assert solve_angles(shuffled) == sol


@given(st.lists(st.sampled_from(TYPES), min_size=1, max_size=4, unique=True))
def test_exact_solutions_have_zero_residual(types):
    sol = solve_angles(types)
    if sol.consistent and not sol.params:
        for v in types:
            assert exact_residual(v, sol) == 0


class TestFeasible:
    def test_equal_thirds_fail_strict_beta_gamma(self):
        # beta > gamma is a standing strict inequality
        third = F(2, 3)
        assert feasible(exact(third, third, third), 3) is False

    def test_equal_thirds_with_distinct_beta(self):
        assert feasible(exact(F(2, 3), F(5, 6), F(1, 2)), 3) is True

    def test_alpha_bound(self):
        assert feasible(exact(F(2, 5), F(4, 5), F(2, 5)), 4) is False
        assert feasible(exact(F(2, 5), F(4, 5), F(2, 5)), 3) is True

    def test_boundaries_are_infeasible(self):
        assert feasible(exact(F(2, 3), F(1, 2), F(1, 3)), 3) is False
        assert feasible(exact(F(2, 3), F(3, 5), F(2, 5)), 3) is False  # beta + gamma = pi

    def test_prism_family_region(self):
        region = feasible(solve_angles([vt("abc")]), 5)
        assert region
        assert region.contains((F(4, 5), F(7, 10)))
        assert not region.contains((F(4, 5), F(3, 5)))  # beta = gamma
        assert not region.contains((F(3, 5), F(4, 5)))  # alpha on the m = 5 bound

    def test_one_parameter_interval(self):
        region = region_of(solve_angles([vt("ab2"), vt("a2c2")]), 3)
        lo, hi = region.interval
        # beta > pi/2 and gamma > 0 are automatic; beta + gamma > pi gives alpha < 2/3
        assert (lo, hi) == (F(1, 3), F(2, 3))

    def test_relaxed_beta_bound(self):
        a = exact(F(3, 5), F(6, 5), F(1, 5))
        assert feasible(a, 4) is False
        assert feasible(a, 4, assume_convex=False) is True

    @given(st.fractions(min_value=F(1, 100), max_value=F(99, 100)),
           st.fractions(min_value=F(1, 100), max_value=F(99, 100)),
           st.fractions(min_value=F(1, 100), max_value=F(99, 100)),
           st.integers(min_value=4, max_value=12))
    def test_monotone_in_m(self, a, b, c, m):
        A = exact(a, b, c)
        for smaller in range(3, m):
            if feasible(A, m) and a > 1 - F(2, smaller):
                assert feasible(A, smaller)


def test_tile_areas_cancel_for_prism():
    sol = solve_angles([vt("abc")])
    m = 5
    p, q = tile_areas(sol, m, (F(3, 5), F(4, 5)))
    assert 2 * p + m * q == 4


def test_json_strings():
    a = exact(F(2, 5), F(3, 5), F(2, 5))
    assert a.to_json() == {"alpha": "2/5 pi", "beta": "3/5 pi", "gamma": "2/5 pi"}
    n = AngleAssignment.numeric(1.0, 2.0, 0.5).to_json()
    assert n["alpha"] == 1.0


def test_random_pinning_keeps_vertex_sums():
    rnd = random.Random(3)
    sol = solve_angles([vt("a2bc"), vt("a5")])
    for _ in range(20):
        beta = F(rnd.randint(61, 119), 100)
        pinned = sol.substitute({"beta": beta})
        assert exact_residual(vt("a2bc"), pinned) == 0
