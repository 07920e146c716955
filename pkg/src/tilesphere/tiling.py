"""Labeled combinatorial maps of tilings by m-gons and quadrilaterals.

Every tile is stored counterclockwise as a cycle of darts.  Dart ``d``
runs from corner ``d`` to corner ``nxt[d]`` of its tile; ``angle[d]`` is
the angle at its tail corner and ``label[d]`` the label (``x`` or ``y``)
of the edge it runs along.  Gluing pairs two darts of different tiles
with opposite directions.  Going once around a vertex moves from corner
``d`` to corner ``nxt[partner[d]]``.
"""

from __future__ import annotations

import json
import random
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .angles import VertexType
from .arrangements import MIRRORED, PLAIN, X, Y, Arrangement, chirality_of
from .avc import AVC, Census

POLYGON, QUAD = "polygon", "quad"
FREE = -1


@dataclass(frozen=True)
class Tile:
    """Prototile placement: kind, chirality and ccw boundary (angle, next label)."""

    kind: str
    boundary: tuple[tuple[str, str], ...]
    chirality: str | None = None

    @classmethod
    def polygon(cls, m: int) -> Tile:
        return cls(POLYGON, (("a", X),) * m)

    @classmethod
    def quad(cls, chirality: str = PLAIN) -> Tile:
        if chirality == PLAIN:
            bd = (("c", X), ("b", Y), ("c", X), ("b", Y))
        else:
            bd = (("c", Y), ("b", X), ("c", Y), ("b", X))
        return cls(QUAD, bd, chirality)

    def __len__(self) -> int:
        return len(self.boundary)

    def attachments(self, label: str) -> list[int]:
        """Boundary positions with this label, one per rotational class."""
        k = len(self.boundary)
        seen, out = set(), []
        for i in range(k):
            if self.boundary[i][1] != label:
                continue
            key = tuple(self.boundary[(i + j) % k] for j in range(k))
            if key not in seen:
                seen.add(key)
                out.append(i)
        return out


def tile_templates(m: int, single_chirality: bool = False) -> list[Tile]:
    out = [Tile.polygon(m), Tile.quad(PLAIN)]
    if not single_chirality:
        out.append(Tile.quad(MIRRORED))
    return out


class PartialTiling:
    """Oriented labeled map, possibly with unglued (free) darts.

    Values are treated as immutable: :meth:`attach` and :meth:`glue`
    return new objects.
    """

    __slots__ = ("m", "nxt", "prv", "partner", "angle", "label", "face",
                 "faces", "_vcache")

    def __init__(self, m: int) -> None:
        self.m = m
        self.nxt: list[int] = []
        self.prv: list[int] = []
        self.partner: list[int] = []
        self.angle: list[str] = []
        self.label: list[str] = []
        self.face: list[int] = []
        # per face: (kind, chirality, first dart)
        self.faces: list[tuple[str, str | None, int]] = []
        self._vcache = None

    def copy(self) -> PartialTiling:
        t = PartialTiling.__new__(PartialTiling)
        t.m = self.m
        t.nxt = self.nxt[:]
        t.prv = self.prv[:]
        t.partner = self.partner[:]
        t.angle = self.angle[:]
        t.label = self.label[:]
        t.face = self.face[:]
        t.faces = self.faces[:]
        t._vcache = None
        return t

    # -- construction ----------------------------------------------------

    def _add_tile(self, tile: Tile) -> int:
        base = len(self.nxt)
        k = len(tile)
        fid = len(self.faces)
        for i, (ang, lab) in enumerate(tile.boundary):
            self.nxt.append(base + (i + 1) % k)
            self.prv.append(base + (i - 1) % k)
            self.partner.append(FREE)
            self.angle.append(ang)
            self.label.append(lab)
            self.face.append(fid)
        self.faces.append((tile.kind, tile.chirality, base))
        self._vcache = None
        return base

    def add_tile(self, tile: Tile) -> tuple[PartialTiling, int]:
        """New tiling with an unattached tile; returns it and the tile's first dart."""
        t = self.copy()
        return t, t._add_tile(tile)

    def _glue(self, d: int, e: int) -> None:
        if self.partner[d] != FREE or self.partner[e] != FREE:
            raise ValueError("dart already glued")
        if d == e or self.face[d] == self.face[e]:
            raise ValueError("cannot glue a tile to itself")
        if self.label[d] != self.label[e]:
            raise ValueError("label mismatch")
        self.partner[d] = e
        self.partner[e] = d
        self._vcache = None

    def glue(self, d: int, e: int) -> PartialTiling:
        t = self.copy()
        t._glue(d, e)
        return t

    def attach(self, d: int, tile: Tile, attachment: int) -> PartialTiling:
        """Place a new tile across free dart ``d`` using its boundary edge ``attachment``."""
        if self.partner[d] != FREE:
            raise ValueError("dart already glued")
        if tile.boundary[attachment][1] != self.label[d]:
            raise ValueError("label mismatch")
        t = self.copy()
        base = t._add_tile(tile)
        t._glue(d, base + attachment)
        return t

    # -- structure -------------------------------------------------------

    def __len__(self) -> int:
        return len(self.nxt)

    @property
    def f_P(self) -> int:
        return sum(1 for f in self.faces if f[0] == POLYGON)

    @property
    def f_Q(self) -> int:
        return sum(1 for f in self.faces if f[0] == QUAD)

    def face_darts(self, f: int) -> list[int]:
        start = self.faces[f][2]
        out = [start]
        d = self.nxt[start]
        while d != start:
            out.append(d)
            d = self.nxt[d]
        return out

    def free_darts(self) -> list[int]:
        return [d for d, p in enumerate(self.partner) if p == FREE]

    @property
    def is_complete(self) -> bool:
        return bool(self.nxt) and FREE not in self.partner

    def vertices(self) -> list[tuple[list[int], bool]]:
        """Corner sequences around each vertex, with a closed flag.

        Open vertices are listed from the corner whose incoming edge is
        free to the corner whose outgoing edge is free.
        """
        if self._vcache is not None:
            return self._vcache
        n = len(self.nxt)
        seen = [False] * n
        out = []
        partner, nxt, prv = self.partner, self.nxt, self.prv
        for c in range(n):
            if seen[c] or partner[prv[c]] != FREE:
                continue
            chain = [c]
            seen[c] = True
            d = c
            while partner[d] != FREE:
                d = nxt[partner[d]]
                chain.append(d)
                seen[d] = True
            out.append((chain, False))
        for c in range(n):
            if seen[c]:
                continue
            cyc = [c]
            seen[c] = True
            d = nxt[partner[c]]
            while d != c:
                cyc.append(d)
                seen[d] = True
                d = nxt[partner[d]]
            out.append((cyc, True))
        self._vcache = out
        return out

    def vertex_of(self) -> list[int]:
        vid = [0] * len(self.nxt)
        for i, (corners, _) in enumerate(self.vertices()):
            for c in corners:
                vid[c] = i
        return vid

    def edges(self) -> list[tuple[int, int]]:
        """(dart, partner) pairs, partner FREE for boundary darts; sorted by dart."""
        out = []
        for d, p in enumerate(self.partner):
            if p == FREE or d < p:
                out.append((d, p))
        return out

    def euler_characteristic(self) -> int:
        return len(self.vertices()) - len(self.edges()) + len(self.faces)

    def boundary_components(self) -> int:
        """Number of boundary cycles formed by the free darts."""
        end_of = {}
        for corners, closed in self.vertices():
            if not closed:
                end_of[corners[0]] = corners[-1]
        seen = set()
        count = 0
        for d in self.free_darts():
            if d in seen:
                continue
            count += 1
            e = d
            while e not in seen:
                seen.add(e)
                e = end_of[self.nxt[e]]
        return count

    def genus(self) -> int:
        b = self.boundary_components()
        return (2 - b - self.euler_characteristic()) // 2

    def vertex_word(self, corners: Sequence[int]) -> tuple[list[str], list[str]]:
        return [self.angle[c] for c in corners], [self.label[c] for c in corners]

    def arrangement(self, corners: Sequence[int]) -> Arrangement:
        angs, seps = self.vertex_word(corners)
        return Arrangement(tuple(angs), tuple(seps))

    def vertex_types(self, closed_only: bool = True) -> Counter:
        out: Counter = Counter()
        for corners, closed in self.vertices():
            if closed or not closed_only:
                angs = [self.angle[c] for c in corners]
                out[(angs.count("a"), angs.count("b"), angs.count("c"))] += 1
        return Counter({VertexType(*k): n for k, n in out.items()})

    def census(self) -> Census:
        return Census(dict(self.vertex_types()), self.f_P, self.f_Q)

    def tile_chirality(self, f: int) -> str | None:
        """Chirality read off the boundary labels (None for polygons or bad tiles)."""
        kind, _, start = self.faces[f]
        if kind != QUAD:
            return None
        darts = self.face_darts(f)
        for d in darts:
            if self.angle[d] == "c":
                return PLAIN if self.label[d] == X else MIRRORED
        return None

    def relabeled(self, perm: Sequence[int] | None = None, rng: random.Random | None = None) -> PartialTiling:
        """The same map with dart ids permuted (random when ``perm`` is None)."""
        n = len(self.nxt)
        if perm is None:
            perm = list(range(n))
            (rng or random.Random()).shuffle(perm)
        inv = [0] * n
        for old, new in enumerate(perm):
            inv[new] = old
        t = PartialTiling(self.m)
        t.nxt = [perm[self.nxt[inv[i]]] for i in range(n)]
        t.prv = [perm[self.prv[inv[i]]] for i in range(n)]
        t.partner = [FREE if self.partner[inv[i]] == FREE else perm[self.partner[inv[i]]]
                     for i in range(n)]
        t.angle = [self.angle[inv[i]] for i in range(n)]
        t.label = [self.label[inv[i]] for i in range(n)]
        face_order = list(range(len(self.faces)))
        (rng or random.Random(0)).shuffle(face_order)
        new_fid = {old: new for new, old in enumerate(face_order)}
        t.face = [new_fid[self.face[inv[i]]] for i in range(n)]
        t.faces = [None] * len(self.faces)  # type: ignore[list-item]
        for old, (kind, chi, start) in enumerate(self.faces):
            t.faces[new_fid[old]] = (kind, chi, perm[start])
        return t

    def mirror(self) -> PartialTiling:
        """Reflection: every tile reversed, every quadrilateral's chirality flipped."""
        n = len(self.nxt)
        t = PartialTiling(self.m)
        t.nxt = [self.prv[d] for d in range(n)]
        t.prv = [self.nxt[d] for d in range(n)]
        t.partner = self.partner[:]
        t.angle = [self.angle[self.nxt[d]] for d in range(n)]
        t.label = self.label[:]
        t.face = self.face[:]
        flip = {PLAIN: MIRRORED, MIRRORED: PLAIN, None: None}
        t.faces = [(k, flip[chi], s) for k, chi, s in self.faces]
        return t

    def to_json(self) -> dict:
        return tiling_to_json(self)

    def __repr__(self) -> str:
        return (f"PartialTiling(m={self.m}, f_P={self.f_P}, f_Q={self.f_Q}, "
                f"free={len(self.free_darts())})")


# -- canonical codes -----------------------------------------------------------

def _bfs_code(t: PartialTiling, start: int, bound: tuple | None) -> tuple | None:
    n = len(t.nxt)
    order = {start: 0}
    queue = [start]
    out = []
    nxt, partner, angle, label = t.nxt, t.partner, t.angle, t.label
    i = 0
    while i < len(queue):
        d = queue[i]
        i += 1
        row = [angle[d], label[d]]
        for e in (nxt[d], partner[d]):
            if e == FREE:
                row.append(-1)
                continue
            if e not in order:
                order[e] = len(queue)
                queue.append(e)
            row.append(order[e])
        item = tuple(row)
        out.append(item)
        # Stop early once this start cannot beat the best code so far.
        if bound is not None:
            k = len(out) - 1
            if k < len(bound):
                if item > bound[k]:
                    return None
                if item < bound[k]:
                    bound = None
    if len(queue) != n:
        raise ValueError("map is not connected")
    return tuple(out)


def _min_code(t: PartialTiling) -> tuple:
    best = None
    for s in range(len(t.nxt)):
        code = _bfs_code(t, s, best)
        if code is not None and (best is None or code < best):
            best = code
    return best


def canonical_code(t: PartialTiling) -> bytes:
    """Isomorphism invariant up to relabeling, rotation and reflection."""
    best = min(_min_code(t), _min_code(t.mirror()))
    return _encode(best)


def _encode(code: tuple) -> bytes:
    parts = []
    for ang, lab, a, b in code:
        parts.append(f"{ang}{lab}{a},{b}")
    return ";".join(parts).encode()


# -- building from face lists --------------------------------------------------

def build_from_faces(m: int, faces: Sequence[Sequence[int]], y_edges: Iterable[tuple[int, int]] = (),
                     first_angles: Sequence[str | None] | None = None) -> PartialTiling:
    """Build a map from vertex cycles of the faces.

    Faces of length ``m`` are polygons unless a first angle is given;
    faces of length 4 with a first angle (``b`` or ``c``) are
    quadrilaterals whose corners alternate starting from that angle.
    Face orientations are made consistent automatically.
    """
    y_set = {frozenset(e) for e in y_edges}
    faces = [list(f) for f in faces]
    if first_angles is None:
        first_angles = [None] * len(faces)
    # orient: adjacent faces must use a shared edge in opposite directions
    edge_faces: dict[frozenset, list[tuple[int, tuple[int, int]]]] = {}
    for fi, f in enumerate(faces):
        k = len(f)
        for i in range(k):
            u, v = f[i], f[(i + 1) % k]
            edge_faces.setdefault(frozenset((u, v)), []).append((fi, (u, v)))
    flip = [None] * len(faces)
    flip[0] = False
    queue = deque([0])
    while queue:
        fi = queue.popleft()
        f = faces[fi]
        k = len(f)
        for i in range(k):
            u, v = f[i], f[(i + 1) % k]
            if flip[fi]:
                u, v = v, u
            for fj, (a, b) in edge_faces[frozenset((u, v))]:
                if fj == fi:
                    continue
                # want fj to traverse v->u
                need = not ((a, b) == (v, u))
                if flip[fj] is None:
                    flip[fj] = need
                    queue.append(fj)
                elif flip[fj] != need:
                    raise ValueError("faces cannot be oriented consistently")
    if any(x is None for x in flip):
        raise ValueError("faces are not connected")
    t = PartialTiling(m)
    dart_of: dict[tuple[int, int], int] = {}
    for fi, f in enumerate(faces):
        first = first_angles[fi]
        k = len(f)
        if first is None:
            if k != m:
                raise ValueError(f"face {fi} has {k} corners")
            angles = ["a"] * k
        else:
            other = "b" if first == "c" else "c"
            angles = [first if i % 2 == 0 else other for i in range(k)]
        order = list(range(k))
        if flip[fi]:
            order = [0] + list(range(k - 1, 0, -1))
        verts = [f[i] for i in order]
        angs = [angles[i] for i in order]
        boundary = []
        for i in range(k):
            u, v = verts[i], verts[(i + 1) % k]
            boundary.append((angs[i], Y if frozenset((u, v)) in y_set else X))
        if first is None:
            tile = Tile(POLYGON, tuple(boundary))
        else:
            probe = PartialTiling(m)
            probe._add_tile(Tile(QUAD, tuple(boundary)))
            tile = Tile(QUAD, tuple(boundary), probe.tile_chirality(0))
        base = t._add_tile(tile)
        for i in range(k):
            key = (verts[i], verts[(i + 1) % k])
            if key in dart_of:
                raise ValueError(f"edge {key} used twice in the same direction")
            dart_of[key] = base + i
    for (u, v), d in dart_of.items():
        e = dart_of.get((v, u))
        if e is not None and t.partner[d] == FREE:
            t.partner[d] = e
            t.partner[e] = d
    return t


# -- validation ----------------------------------------------------------------

@dataclass
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    census: Census | None = None

    def __bool__(self) -> bool:
        return not self.violations

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> list[str]:
        return [v.kind for v in self.violations]

    def add(self, kind: str, detail: str) -> None:
        self.violations.append(Violation(kind, detail))


def _tile_ok(t: PartialTiling, f: int) -> bool:
    kind, chi, _ = t.faces[f]
    darts = t.face_darts(f)
    if kind == POLYGON:
        return len(darts) == t.m and all(t.angle[d] == "a" and t.label[d] == X for d in darts)
    if len(darts) != 4:
        return False
    for d in darts:
        if t.angle[d] == "a":
            return False
        if t.angle[d] == t.angle[t.nxt[d]]:
            return False
        if chirality_of(t.angle[d], t.label[t.prv[d]], t.label[d]) != chi:
            return False
    return True


def validate(t: PartialTiling, avc: AVC | Iterable[VertexType] | None = None) -> ValidationReport:
    """Check a complete tiling; every problem found becomes a report entry.

    Vertex level checks skip vertices next to an already reported edge or
    tile so that one fault is not reported many times.
    """
    rep = ValidationReport()
    members = None
    if avc is not None:
        members = set(avc.members if isinstance(avc, AVC) else avc)
    bad_darts: set[int] = set()
    for d, p in enumerate(t.partner):
        if p == FREE:
            rep.add("open edge", f"dart {d} is not glued")
            bad_darts.add(d)
        elif d < p:
            if t.partner[p] != d:
                rep.add("edge-to-edge", f"darts {d},{p} not mutually glued")
            if t.label[d] != t.label[p]:
                rep.add("x-y gluing", f"edge {d}/{p} joins {t.label[d]} to {t.label[p]}")
                bad_darts.update((d, p))
            if t.face[d] == t.face[p]:
                rep.add("self-adjacent tile", f"tile {t.face[d]} glued to itself")
    for f in range(len(t.faces)):
        if not _tile_ok(t, f):
            rep.add("corner profile", f"tile {f} boundary does not match its prototile")
            bad_darts.update(t.face_darts(f))
    if rep.violations and "open edge" in rep.kinds():
        return rep
    for i, (corners, closed) in enumerate(t.vertices()):
        if not closed or any(c in bad_darts or t.prv[c] in bad_darts for c in corners):
            continue
        tiles = [t.face[c] for c in corners]
        if len(set(tiles)) != len(tiles):
            rep.add("repeated tile", f"vertex {i} meets a tile twice")
        angs, seps = t.vertex_word(corners)
        nbg = sum(1 for a in angs if a != "a")
        if nbg != 2 * seps.count(Y):
            rep.add("parity", f"vertex {i}: {nbg} quad corners but {seps.count(Y)} y-edges")
        try:
            arr = Arrangement(tuple(angs), tuple(seps))
        except ValueError:
            rep.add("corner profile", f"vertex {i} has inconsistent corners")
            continue
        if len(corners) < 3:
            rep.add("degree", f"vertex {i} has degree {len(corners)}")
        if members is not None and arr.vertex_type not in members:
            rep.add("vertex type", f"vertex {i} is {arr.vertex_type}, not in the AVC")
    c = t.census()
    rep.census = c
    m = t.m
    sum_a = sum(v.a * n for v, n in c.counts.items())
    sum_b = sum(v.b * n for v, n in c.counts.items())
    sum_c = sum(v.c * n for v, n in c.counts.items())
    if sum_a != m * c.f_P or sum_b != 2 * c.f_Q or sum_c != 2 * c.f_Q:
        rep.add("census", f"corner totals {(sum_a, sum_b, sum_c)} do not match tiles")
    if (m * c.f_P + 4 * c.f_Q) != 2 * len(t.edges()):
        rep.add("census", "edge count does not match tiles")
    if t.euler_characteristic() != 2:
        rep.add("euler", f"V - E + F = {t.euler_characteristic()}")
    return rep


# -- JSON ------------------------------------------------------------------------

def tiling_to_json(t: PartialTiling) -> dict:
    vid = t.vertex_of()
    edges = t.edges()
    edge_id = {}
    for i, (d, p) in enumerate(edges):
        edge_id[d] = i
        if p != FREE:
            edge_id[p] = i
    faces = []
    for f, (kind, chi, _) in enumerate(t.faces):
        corners = [{"vertex_id": vid[d], "angle": t.angle[d], "edge_id": edge_id[d]}
                   for d in t.face_darts(f)]
        faces.append({"id": f, "kind": kind, "chirality": chi, "corners": corners})
    edges_json = []
    for i, (d, p) in enumerate(edges):
        face_ids = [t.face[d]] + ([t.face[p]] if p != FREE else [])
        edges_json.append({"id": i, "label": t.label[d], "face_ids": face_ids})
    return {"m": t.m, "faces": faces, "edges": edges_json, "vertex_count": len(t.vertices())}


def tiling_from_json(data: dict | str) -> PartialTiling:
    if isinstance(data, str):
        data = json.loads(data)
    t = PartialTiling(int(data["m"]))
    labels = {e["id"]: e["label"] for e in data["edges"]}
    by_edge: dict[int, list[int]] = {}
    for face in data["faces"]:
        corners = face["corners"]
        boundary = tuple((c["angle"], labels[c["edge_id"]]) for c in corners)
        base = t._add_tile(Tile(face["kind"], boundary, face.get("chirality")))
        for i, c in enumerate(corners):
            by_edge.setdefault(c["edge_id"], []).append(base + i)
    for darts in by_edge.values():
        if len(darts) == 2:
            d, e = darts
            t.partner[d] = e
            t.partner[e] = d
        elif len(darts) > 2:
            raise ValueError("edge shared by more than two tiles")
    return t
