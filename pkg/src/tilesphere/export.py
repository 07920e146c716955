"""JSON and SVG output for tilings and classification results."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .tiling import POLYGON, PartialTiling, tiling_to_json

SVG_SIZE = 480
SVG_MARGIN = 30
FILL = {POLYGON: "#dbe8f6", "quad": "#f6e6cf"}
STROKE = {"x": 1.2, "y": 4.0}


def _as_tiling(obj) -> PartialTiling:
    if isinstance(obj, PartialTiling):
        return obj
    if hasattr(obj, "tiling"):
        t = obj.tiling
        return t() if callable(t) else t
    raise TypeError(f"cannot export {type(obj).__name__}")


def to_json(obj) -> dict | list:
    """JSON data for a tiling, a catalog entry or a classification result.

    A classification result becomes an array of tilings sorted by
    canonical code.
    """
    if hasattr(obj, "sorted_tilings"):
        out = []
        for ct in obj.sorted_tilings():
            data = tiling_to_json(ct.tiling)
            data["code"] = ct.code.hex()
            data["realized"] = sorted(str(v) for v in ct.realized)
            out.append(data)
        return out
    data = tiling_to_json(_as_tiling(obj))
    if hasattr(obj, "id"):
        data["id"] = obj.id
    return data


def _face_vertices(t: PartialTiling, vid: list[int], f: int) -> list[int]:
    return [vid[d] for d in t.face_darts(f)]


def tutte_layout(t: PartialTiling, outer: int | None = None) -> tuple[np.ndarray, int]:
    """Planar positions with one face pinned on the unit circle.

    Every other vertex sits at the average of its neighbours, which for a
    3-connected planar graph gives a convex drawing.
    """
    vid = t.vertex_of()
    n = len(t.vertices())
    if outer is None:
        outer = max(range(len(t.faces)), key=lambda f: (len(t.face_darts(f)), -f))
    ring = _face_vertices(t, vid, outer)
    pos = np.zeros((n, 2))
    k = len(ring)
    for i, v in enumerate(ring):
        ang = math.pi / 2 + 2 * math.pi * i / k
        pos[v] = (math.cos(ang), math.sin(ang))
    adj = [set() for _ in range(n)]
    for d, _ in t.edges():
        a, b = vid[d], vid[t.nxt[d]]
        adj[a].add(b)
        adj[b].add(a)
    inner = [v for v in range(n) if v not in set(ring)]
    if inner:
        index = {v: i for i, v in enumerate(inner)}
        L = np.zeros((len(inner), len(inner)))
        rhs = np.zeros((len(inner), 2))
        for v in inner:
            i = index[v]
            L[i, i] = len(adj[v])
            for w in adj[v]:
                if w in index:
                    L[i, index[w]] -= 1
                else:
                    rhs[i] += pos[w]
        pos[inner] = np.linalg.solve(L, rhs)
    return pos, outer


def to_svg(obj) -> str:
    """Schematic drawing; y-edges are stroked heavier than x-edges."""
    t = _as_tiling(obj)
    vid = t.vertex_of()
    pos, outer = tutte_layout(t)
    r = SVG_SIZE / 2 - SVG_MARGIN
    c = SVG_SIZE / 2

    def xy(v: int) -> str:
        return f"{c + r * pos[v][0]:.2f},{c - r * pos[v][1]:.2f}"

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
             f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">']
    # the pinned face is everything outside its boundary
    ring = " ".join(xy(v) for v in _face_vertices(t, vid, outer))
    kind = t.faces[outer][0]
    parts.append(f'<path class="face {kind} outer" data-face="{outer}" fill="{FILL[kind]}" '
                 f'fill-rule="evenodd" d="M0,0 H{SVG_SIZE} V{SVG_SIZE} H0 Z M{ring} Z"/>')
    for f, (kind, _, _) in enumerate(t.faces):
        if f == outer:
            continue
        pts = " ".join(xy(v) for v in _face_vertices(t, vid, f))
        parts.append(f'<polygon class="face {kind}" data-face="{f}" fill="{FILL[kind]}" '
                     f'points="{pts}"/>')
    for i, (d, _) in enumerate(t.edges()):
        a, b = xy(vid[d]).split(","), xy(vid[t.nxt[d]]).split(",")
        lab = t.label[d]
        parts.append(f'<line class="edge {lab}" data-edge="{i}" x1="{a[0]}" y1="{a[1]}" '
                     f'x2="{b[0]}" y2="{b[1]}" stroke="black" stroke-width="{STROKE[lab]}"/>')
    for v in range(len(pos)):
        x, y = xy(v).split(",")
        parts.append(f'<circle class="vertex" cx="{x}" cy="{y}" r="2.5"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def export(obj, fmt: str = "json", path: str | Path | None = None) -> str:
    """Render ``obj`` as json or svg text, writing it to ``path`` when given."""
    if fmt == "json":
        text = json.dumps(to_json(obj), indent=2) + "\n"
    elif fmt == "svg":
        text = to_svg(obj)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text
