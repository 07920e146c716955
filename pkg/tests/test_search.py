import random
from concurrent.futures import ProcessPoolExecutor

import pytest
from hypothesis import given, settings, strategies as st

from tilesphere.angles import vt
from tilesphere.arrangements import Arrangement
from tilesphere.avc import AVC, enumerate_avcs
from tilesphere.catalog import catalog_codes, prism
from tilesphere.search import (COMPLETE, INCOMPLETE, SearchOptions, classify, propagate_forced,
                               random_walk, search_avc, seed_tiling, verify_nonexistence)
from tilesphere.tiling import canonical_code, validate

SERIAL = SearchOptions(parallel_branches=False)
CODES = catalog_codes(8)


def ids_of(result):
    return sorted(CODES[c].id if c in CODES else "unknown" for c in result.tilings)


@pytest.fixture(scope="module")
def triangle():
    return classify(3, SERIAL)


class TestPropagate:
    def test_prism_five_is_forced(self):
        seed = seed_tiling(5, Arrangement.parse("|a|b||c|"))
        r = propagate_forced(seed, AVC(5, [vt("abc")]), SERIAL)
        assert not r.contradiction and not r.branching
        assert r.tiling.is_complete and len(r.tiling.faces) == 7
        assert canonical_code(r.tiling) == canonical_code(prism(5))

    def test_square_alpha_beta_squared_dies(self):
        seed = seed_tiling(4, Arrangement.parse("||c|a|a|c||"))
        r = propagate_forced(seed, AVC(4, [vt("ab2"), vt("a2c2")]), SERIAL)
        assert r.contradiction and r.steps > 0

    def test_inconsistent_member_set_dies(self):
        seed = seed_tiling(4, Arrangement.parse("||c|a|a|c||"))
        members = [vt("ab2"), vt("a2c2"), vt("a4"), vt("a5")]
        assert propagate_forced(seed, AVC(4, members), SERIAL).contradiction

    def test_triangle_a3c2_seed(self):
        seed = seed_tiling(3, Arrangement.parse("||c|a|a|a|c||"))
        r = propagate_forced(seed, AVC(3, [vt("ab2"), vt("a3c2"), vt("a5")]), SERIAL)
        assert not r.contradiction
        assert r.steps >= 6
        assert r.branching or canonical_code(r.tiling) == [c for c, e in CODES.items() if e.id == "S4"][0]


class TestClassify:
    def test_triangle(self, triangle):
        assert triangle.status == COMPLETE
        assert ids_of(triangle) == ["S1", "S2", "S3", "S4", "prism:3"]

    @pytest.mark.parametrize("m", range(4, 9))
    def test_prism_only(self, m):
        r = classify(m, SERIAL)
        assert r.status == COMPLETE
        assert ids_of(r) == [f"prism:{m}"]
        (ct,) = r.tilings.values()
        assert ct.f == m + 2
        assert ct.realized == {vt("abc")}
        assert r.total_nodes > 0

    def test_realized_sets(self, triangle):
        got = {frozenset(str(v) for v in ct.realized) for ct in triangle.tilings.values()}
        want = [{"abc"}, {"a2bc", "a5"}, {"ab2", "a2c2"}, {"ab2", "a2bc", "a3c2"}, {"ab2", "a3c2"}]
        assert got == {frozenset(w) for w in want}

    def test_soundness(self, triangle):
        for ct in triangle.tilings.values():
            assert validate(ct.tiling, ct.avc).ok
            assert ct.realized <= set(ct.avc.members)
            assert any(v.a and v.b for v in ct.realized)
            assert any(v.a and v.c for v in ct.realized)

    def test_codes_unique(self, triangle):
        assert len({ct.code for ct in triangle.tilings.values()}) == len(triangle.tilings)

    def test_deterministic(self, triangle):
        again = classify(3, SERIAL)
        assert set(again.tilings) == set(triangle.tilings)

    def test_single_chirality(self):
        r = classify(3, SearchOptions(parallel_branches=False, allow_mirrored_quads=False))
        assert ids_of(r) == ["S2", "prism:3"]

    def test_forbidden_pattern_ablation(self, triangle):
        r = classify(3, SearchOptions(parallel_branches=False, use_forbidden_patterns=False))
        assert set(r.tilings) == set(triangle.tilings)
        assert r.total_nodes != triangle.total_nodes

    def test_memoization_keeps_result(self, triangle):
        r = classify(3, SearchOptions(parallel_branches=False, memoize=True))
        assert set(r.tilings) == set(triangle.tilings)

    def test_relaxed_beta_bound(self, triangle):
        r = classify(3, SearchOptions(parallel_branches=False, assume_convex=False))
        assert set(r.tilings) == set(triangle.tilings)

    def test_node_cap_reports_incomplete(self):
        r = classify(3, SearchOptions(parallel_branches=False, max_nodes=3))
        assert r.status == INCOMPLETE

    def test_tile_cap_reports_incomplete(self):
        r = classify(3, SearchOptions(parallel_branches=False, max_tiles=8))
        assert r.status == INCOMPLETE
        assert ids_of(r) == ["S1", "prism:3"]

    def test_max_tiles_precondition(self):
        with pytest.raises(ValueError):
            classify(5, SearchOptions(max_tiles=6))
        with pytest.raises(ValueError):
            classify(2)

    def test_json(self, triangle):
        data = triangle.to_json()
        assert data["m"] == 3 and data["status"] == COMPLETE
        assert len(data["tilings"]) == 5


def test_parallel_matches_serial():
    avc = next(a for a in enumerate_avcs(3) if str(a) == "{ab2, a2bc, a3c2, a5}")
    serial, _ = search_avc(avc, SERIAL)
    with ProcessPoolExecutor(2) as ex:
        parallel, _ = search_avc(avc, SERIAL, executor=ex)
    assert set(serial) == set(parallel)


@pytest.mark.parametrize("m", range(3, 9))
def test_doubled_caps_change_nothing(m):
    base = classify(m, SERIAL)
    wide = classify(m, SearchOptions(parallel_branches=False, max_degree=24, max_tiles=200))
    assert wide.status == COMPLETE
    assert set(wide.tilings) == set(base.tilings)


class TestNonexistence:
    @pytest.mark.parametrize("m", [4, 5])
    def test_no_alpha_beta_squared(self, m):
        assert verify_nonexistence(m, vt("ab2"), SERIAL)

    def test_triangle_has_it(self):
        assert not verify_nonexistence(3, vt("ab2"), SERIAL)

    @pytest.mark.parametrize("m", [4, 5])
    def test_search_actually_ran(self, m):
        r = classify(m, SERIAL)
        stats = [s for name, s in r.stats.items() if "ab2" in name]
        assert stats and all(s.nodes > 0 and s.prunes > 0 for s in stats)


AVCS = [a for m in range(3, 9) for a in enumerate_avcs(m)]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_random_gluing_sequences(seed):
    rng = random.Random(seed)
    walk = random_walk(rng.choice(AVCS), rng)
    for t in walk:
        for corners, closed in t.vertices():
            if closed:
                angs, seps = t.vertex_word(corners)
                assert sum(a != "a" for a in angs) == 2 * seps.count("y")
        assert t.genus() == 0
    if walk and walk[-1].is_complete:
        assert walk[-1].euler_characteristic() == 2
