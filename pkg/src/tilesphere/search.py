"""Exhaustive tile-by-tile search for complete tilings of an AVC."""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .angles import VertexType
from .arrangements import Arrangement, enumerate_arrangements
from .avc import (AVC, DEFAULT_MAX_DEGREE, DEFAULT_MAX_TILES, _mixes_alpha_with_both, census,
                  census_tile_bound, census_unbounded, enumerate_avcs, live_arrangements)
from .geometry import geometrically_realizable
from .tiling import (FREE, POLYGON, QUAD, PartialTiling, Tile, canonical_code,
                     tile_templates, validate)

COMPLETE, INCOMPLETE = "complete", "incomplete"
UNCAPPED_TILES = 10 ** 6


@dataclass
class SearchOptions:
    max_degree: int = DEFAULT_MAX_DEGREE
    max_tiles: int = DEFAULT_MAX_TILES
    allow_mirrored_quads: bool = True
    parallel_branches: bool = True
    max_nodes: int | None = None
    use_forbidden_patterns: bool = True
    memoize: bool = False
    assume_convex: bool = True

    @property
    def single_chirality(self) -> bool:
        return not self.allow_mirrored_quads

    def workers(self) -> int:
        if not self.parallel_branches:
            return 1
        n = os.cpu_count() or 1
        cap = os.environ.get("TILESPHERE_THREADS")
        if cap:
            n = min(n, max(1, int(cap)))
        return n


@dataclass
class SearchStats:
    nodes: int = 0
    dead_ends: int = 0
    genus_prunes: int = 0
    census_prunes: int = 0
    memo_hits: int = 0
    completions: int = 0
    seeds: int = 0
    capped: bool = False
    seconds: float = 0.0

    def merge(self, other: SearchStats) -> None:
        for name in ("nodes", "dead_ends", "genus_prunes", "census_prunes", "memo_hits",
                     "completions", "seeds"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.capped = self.capped or other.capped
        self.seconds += other.seconds

    @property
    def prunes(self) -> int:
        return self.dead_ends + self.genus_prunes + self.census_prunes + self.memo_hits

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "prunes": self.prunes, "dead_ends": self.dead_ends,
                "genus_prunes": self.genus_prunes, "census_prunes": self.census_prunes,
                "memo_hits": self.memo_hits, "completions": self.completions,
                "seeds": self.seeds, "capped": self.capped,
                "seconds": round(self.seconds, 3)}


@dataclass
class CompleteTiling:
    tiling: PartialTiling
    code: bytes
    avc: AVC
    realized: frozenset[VertexType]

    @property
    def m(self) -> int:
        return self.tiling.m

    @property
    def f(self) -> int:
        return len(self.tiling.faces)

    def to_json(self) -> dict:
        out = self.tiling.to_json()
        out["realized"] = [list(v.as_tuple()) for v in sorted(self.realized)]
        out["census"] = self.tiling.census().to_json(self.m)
        return out


@dataclass
class ClassificationResult:
    m: int
    tilings: dict[bytes, CompleteTiling] = field(default_factory=dict)
    stats: dict[str, SearchStats] = field(default_factory=dict)
    status: str = COMPLETE
    rejected: list[CompleteTiling] = field(default_factory=list)

    def sorted_tilings(self) -> list[CompleteTiling]:
        return [self.tilings[c] for c in sorted(self.tilings)]

    @property
    def total_nodes(self) -> int:
        return sum(s.nodes for s in self.stats.values())

    def to_json(self) -> dict:
        return {"m": self.m, "status": self.status,
                "tilings": [t.to_json() for t in self.sorted_tilings()],
                "stats": {k: v.to_json() for k, v in self.stats.items()}}


class _Rules:
    """Everything the search needs to know about one AVC."""

    def __init__(self, avc: AVC, opts: SearchOptions) -> None:
        self.avc = avc
        self.m = avc.m
        if opts.use_forbidden_patterns:
            self.live = live_arrangements(avc.members, single_chirality=opts.single_chirality)
        else:
            self.live = {v: enumerate_arrangements(v, single_chirality=opts.single_chirality)
                         for v in avc.members}
        self.arrangements = [a for arrs in self.live.values() for a in arrs]
        self.open_words: set[str] = set()
        self.closed_words: set[str] = set()
        for arr in self.arrangements:
            self._add(arr)
        self.censuses = census(avc, opts.max_tiles)
        self.unbounded = census_unbounded(avc)
        self.max_P = max((c.f_P for c in self.censuses), default=0)
        self.max_Q = max((c.f_Q for c in self.censuses), default=0)
        self.templates = []
        for tile in tile_templates(self.m, opts.single_chirality):
            k = len(tile)
            corner_words = [tile.boundary[i - 1][1] + tile.boundary[i][0] + tile.boundary[i][1]
                            for i in range(k)]
            if all(w in self.open_words for w in corner_words):
                self.templates.append(tile)

    def _add(self, arr: Arrangement) -> None:
        k = len(arr)
        pairs = [a + s for a, s in arr.pairs()]
        for r in range(k):
            rot = pairs[r:] + pairs[:r]
            self.closed_words.add("".join(rot))
            lead = arr.seps[r - 1]
            word = lead
            for j in range(k):
                word += rot[j]
                self.open_words.add(word)

    def dominated(self, f_P: int, f_Q: int, closed: dict) -> bool:
        for c in self.censuses:
            if c.f_P >= f_P and c.f_Q >= f_Q and all(c.counts.get(v, 0) >= n
                                                     for v, n in closed.items()):
                return True
        return False


def _closed_word(corners, t: PartialTiling) -> str:
    return "".join(t.angle[c] + t.label[c] for c in corners)


def _word_type(word: str) -> VertexType:
    return VertexType(word.count("a"), word.count("b"), word.count("c"))


class _Node:
    """Derived vertex data of a partial tiling used to generate moves."""

    __slots__ = ("t", "cid", "words", "masks", "free", "closed_types", "genus")

    def __init__(self, t: PartialTiling) -> None:
        self.t = t
        n = len(t.nxt)
        cid = [0] * n
        words, masks = [], []
        closed_types: dict[VertexType, int] = {}
        for i, (corners, closed) in enumerate(t.vertices()):
            mask = 0
            for c in corners:
                cid[c] = i
                mask |= 1 << t.face[c]
            masks.append(mask)
            if closed:
                w = _closed_word(corners, t)
                words.append(w)
                v = _word_type(w)
                closed_types[v] = closed_types.get(v, 0) + 1
            else:
                words.append(t.label[t.prv[corners[0]]] + _closed_word(corners, t))
        self.cid, self.words, self.masks = cid, words, masks
        self.free = [d for d in range(n) if t.partner[d] == FREE]
        self.closed_types = closed_types
        # boundary components from free darts: d ends at the chain starting at nxt[d]
        end_of = {}
        for corners, closed in t.vertices():
            if not closed:
                end_of[corners[0]] = corners[-1]
        seen = set()
        b = 0
        for d in self.free:
            if d in seen:
                continue
            b += 1
            e = d
            while e not in seen:
                seen.add(e)
                e = end_of[t.nxt[e]]
        V = len(words)
        E = (n + len(self.free)) // 2
        chi = V - E + len(t.faces)
        self.genus = (2 - b - chi) // 2


def _moves(node: _Node, rules: _Rules, d: int, limit: int | None = None) -> list:
    """All consistent ways to glue free dart ``d``."""
    t = node.t
    cid, words, masks = node.cid, node.words, node.masks
    OPEN, CLOSED = rules.open_words, rules.closed_words
    lab = t.label[d]
    ca, cb = cid[d], cid[t.nxt[d]]
    A, B = words[ca], words[cb]
    mA, mB = masks[ca], masks[cb]
    fd = t.face[d]
    out = []
    for e in node.free:
        if e == d or t.label[e] != lab or t.face[e] == fd:
            continue
        cs, ce = cid[t.nxt[e]], cid[e]
        if cs == ca:
            if A[1:] not in CLOSED:
                continue
        elif mA & masks[cs] or (A + words[cs][1:]) not in OPEN:
            continue
        if ce == cb:
            if words[ce][1:] not in CLOSED:
                continue
        elif masks[ce] & mB or (words[ce] + B[1:]) not in OPEN:
            continue
        out.append(("glue", e))
        if limit is not None and len(out) > limit:
            return out
    f_P, f_Q = t.f_P, t.f_Q
    for tile in rules.templates:
        if tile.kind == POLYGON and f_P + 1 > rules.max_P:
            continue
        if tile.kind == QUAD and f_Q + 1 > rules.max_Q:
            continue
        k = len(tile)
        for i in tile.attachments(lab):
            nxt_ang, nxt_lab = tile.boundary[(i + 1) % k]
            if (A + nxt_ang + nxt_lab) not in OPEN:
                continue
            if (tile.boundary[i - 1][1] + tile.boundary[i][0] + B) not in OPEN:
                continue
            out.append(("tile", tile, i))
            if limit is not None and len(out) > limit:
                return out
    return out


def _apply(t: PartialTiling, d: int, move) -> PartialTiling:
    if move[0] == "glue":
        return t.glue(d, move[1])
    return t.attach(d, move[1], move[2])


def _choose(node: _Node, rules: _Rules):
    """Free dart with the fewest moves (stopping early at a forced or dead dart)."""
    best = None
    for d in node.free:
        limit = None if best is None else len(best[1])
        mv = _moves(node, rules, d, limit)
        if best is None or len(mv) < len(best[1]):
            best = (d, mv)
            if len(mv) <= 1:
                break
    return best


@dataclass
class PropagationResult:
    tiling: PartialTiling
    contradiction: bool
    steps: int
    branching: bool


def propagate_forced(t: PartialTiling, avc: AVC, opts: SearchOptions | None = None) -> PropagationResult:
    """Apply moves while some free dart has exactly one consistent move."""
    rules = _Rules(avc, opts or SearchOptions())
    steps = 0
    while True:
        node = _Node(t)
        if not node.free:
            return PropagationResult(t, False, steps, False)
        if node.genus > 0:
            return PropagationResult(t, True, steps, False)
        d, mv = _choose(node, rules)
        if not mv:
            return PropagationResult(t, True, steps, False)
        if len(mv) > 1:
            return PropagationResult(t, False, steps, True)
        t = _apply(t, d, mv[0])
        steps += 1


def seed_tiling(m: int, arr: Arrangement) -> PartialTiling:
    """One closed vertex with the given arrangement and a tile at each corner."""
    t = PartialTiling(m)
    darts = []
    k = len(arr)
    chis = arr.chiralities
    for i, ang in enumerate(arr.corners):
        tile = Tile.polygon(m) if ang == "a" else Tile.quad(chis[i])
        j = next(j for j in range(len(tile))
                 if tile.boundary[j][0] == ang and tile.boundary[j][1] == arr.seps[i]
                 and tile.boundary[j - 1][1] == arr.seps[i - 1])
        t, base = t.add_tile(tile)
        darts.append(base + j)
    for i in range(k):
        c, c2 = darts[i], darts[(i + 1) % k]
        t = t.glue(c, t.prv[c2])
    return t


def _seeds(rules: _Rules, single_chirality: bool) -> list[Arrangement]:
    out = []
    for v in sorted(rules.live):
        if not v.b:
            continue
        reps = {a.normal(reflections=not single_chirality) for a in rules.live[v]}
        out += sorted(reps, key=str)
    return out


def _orbit_words(arr: Arrangement, single_chirality: bool) -> set[str]:
    variants = [arr] if single_chirality else [arr, arr.reflect()]
    out = set()
    for a in variants:
        for r in a.rotations():
            out.add("".join(x + s for x, s in r.pairs()))
    return out


def _search_seed(avc: AVC, opts: SearchOptions, index: int):
    """Depth-first search from one seed, excluding the vertices of earlier seeds."""
    rules = _Rules(avc, opts)
    seeds = _seeds(rules, opts.single_chirality)
    stats = SearchStats(seeds=1)
    found: dict[bytes, PartialTiling] = {}
    start = time.perf_counter()
    excluded = set()
    for s in seeds[:index]:
        excluded |= _orbit_words(s, opts.single_chirality)
    rules.closed_words -= excluded
    memo: set[bytes] = set()

    def dfs(t: PartialTiling) -> None:
        if opts.max_nodes is not None and stats.nodes >= opts.max_nodes:
            stats.capped = True
            return
        stats.nodes += 1
        node = _Node(t)
        if node.genus > 0:
            stats.genus_prunes += 1
            return
        if not rules.dominated(t.f_P, t.f_Q, node.closed_types):
            stats.census_prunes += 1
            if rules.unbounded:
                stats.capped = True
            return
        if not node.free:
            stats.completions += 1
            code = canonical_code(t)
            found.setdefault(code, t)
            return
        if opts.memoize:
            key = canonical_code(t)
            if key in memo:
                stats.memo_hits += 1
                return
            memo.add(key)
        d, mv = _choose(node, rules)
        if not mv:
            stats.dead_ends += 1
            return
        for move in mv:
            dfs(_apply(t, d, move))

    seed = seed_tiling(avc.m, seeds[index])
    dfs(seed)
    stats.seconds = time.perf_counter() - start
    return found, stats


def random_walk(avc: AVC, rng, max_steps: int = 200,
                opts: SearchOptions | None = None) -> list[PartialTiling]:
    """One random branch of the search: consistent moves chosen at random.

    Starts from a random seed and stops at a completed map, a dead end or
    after ``max_steps`` moves.  Returns every intermediate tiling; a move
    the search would prune (one that creates a handle) ends the walk and
    is not included.
    """
    opts = opts or SearchOptions()
    rules = _Rules(avc, opts)
    seeds = _seeds(rules, opts.single_chirality)
    if not seeds:
        return []
    t = seed_tiling(avc.m, rng.choice(seeds))
    out = [t]
    for _ in range(max_steps):
        node = _Node(t)
        if not node.free:
            break
        d = rng.choice(node.free)
        mv = _moves(node, rules, d)
        if not mv:
            break
        t = _apply(t, d, rng.choice(mv))
        if _Node(t).genus > 0:
            break
        out.append(t)
    return out


def _seed_count(avc: AVC, opts: SearchOptions) -> int:
    return len(_seeds(_Rules(avc, opts), opts.single_chirality))


def search_avc(avc: AVC, opts: SearchOptions | None = None, *, executor=None):
    """All complete tilings whose vertices are AVC members, keyed by canonical code."""
    opts = opts or SearchOptions()
    n = _seed_count(avc, opts)
    stats = SearchStats()
    found: dict[bytes, PartialTiling] = {}
    if executor is not None:
        results = list(executor.map(_search_seed, [avc] * n, [opts] * n, range(n)))
    else:
        results = [_search_seed(avc, opts, i) for i in range(n)]
    for f, s in results:
        stats.merge(s)
        for code, t in f.items():
            found.setdefault(code, t)
    return found, stats


def classify(m: int, opts: SearchOptions | None = None) -> ClassificationResult:
    """Every tiling of the sphere by regular m-gons and the quadrilateral."""
    if m < 3:
        raise ValueError("m must be at least 3")
    opts = opts or SearchOptions()
    if opts.max_tiles < m + 2:
        raise ValueError("max_tiles must be at least m + 2")
    result = ClassificationResult(m)
    avcs = enumerate_avcs(m, opts.max_degree, single_chirality=opts.single_chirality,
                          max_tiles=opts.max_tiles, assume_convex=opts.assume_convex)
    workers = opts.workers()
    executor = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for avc in avcs:
            found, stats = search_avc(avc, opts, executor=executor)
            result.stats[str(avc)] = stats
            if stats.capped:
                result.status = INCOMPLETE
            for code, t in found.items():
                realized = frozenset(t.vertex_types())
                ct = CompleteTiling(t, code, avc, realized)
                if not _accept(t, realized, m):
                    result.rejected.append(ct)
                    continue
                result.tilings.setdefault(code, ct)
    finally:
        if executor is not None:
            executor.shutdown()
    if result.status == COMPLETE and _tile_cap_bites(m, opts):
        result.status = INCOMPLETE
    return result


def _tile_cap_bites(m: int, opts: SearchOptions) -> bool:
    # the cap is harmless only if no vertex set could need more tiles than it allows
    wide = enumerate_avcs(m, opts.max_degree, single_chirality=opts.single_chirality,
                          max_tiles=UNCAPPED_TILES, assume_convex=opts.assume_convex)
    return any(census_tile_bound(a) > opts.max_tiles + 1e-9 for a in wide)


def _accept(t: PartialTiling, realized, m: int) -> bool:
    if t.f_P < 1 or t.f_Q < 1:
        return False
    if not validate(t, realized).ok:
        return False
    if not _mixes_alpha_with_both(realized):
        return False
    return geometrically_realizable(realized, m)


def verify_nonexistence(m: int, must_not_contain: VertexType,
                        opts: SearchOptions | None = None) -> bool:
    """True when no tiling for this m has a vertex of the given type."""
    result = classify(m, opts)
    if result.status != COMPLETE:
        return False
    return all(must_not_contain not in ct.realized for ct in result.tilings.values())
