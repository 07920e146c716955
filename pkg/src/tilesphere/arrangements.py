"""Angle arrangements around a vertex.

An arrangement is the cyclic sequence of corners at a vertex with the
edge label between consecutive corners: ``x`` is written ``|`` and ``y``
is written ``||``.  Corners are ``a``, ``b``, ``c`` for alpha, beta, gamma.
Every alpha corner sits between two x-edges and every quadrilateral
corner between one x-edge and one y-edge; which side carries the y-edge
is the corner's chirality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable

from .angles import VertexType

X, Y = "x", "y"
PLAIN, MIRRORED = "plain", "mirrored"

_GREEK = {"α": "a", "β": "b", "γ": "c"}


def side_profile(angle: str, chirality: str = PLAIN) -> tuple[str, str]:
    """(incoming, outgoing) edge labels of a corner in the vertex rotation."""
    if angle == "a":
        return (X, X)
    plain = (X, Y) if angle == "b" else (Y, X)
    return plain if chirality == PLAIN else plain[::-1]


def chirality_of(angle: str, incoming: str, outgoing: str) -> str | None:
    """Chirality giving this profile, or None if no corner fits it."""
    if angle == "a":
        return PLAIN if incoming == outgoing == X else None
    for chi in (PLAIN, MIRRORED):
        if side_profile(angle, chi) == (incoming, outgoing):
            return chi
    return None


def _sep_str(sep: str) -> str:
    return "|" if sep == X else "||"


@dataclass(frozen=True)
class Arrangement:
    """Cyclic arrangement; ``seps[i]`` lies between corner i and i+1."""

    corners: tuple[str, ...]
    seps: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.corners) != len(self.seps) or not self.corners:
            raise ValueError("corner and separator counts differ")
        for i, ang in enumerate(self.corners):
            if chirality_of(ang, self.seps[i - 1], self.seps[i]) is None:
                raise ValueError(f"inconsistent arrangement {self!s}")

    def __str__(self) -> str:
        out = [_sep_str(self.seps[-1])]
        for ang, sep in zip(self.corners, self.seps):
            out.append(ang)
            out.append(_sep_str(sep))
        return "".join(out)

    def __len__(self) -> int:
        return len(self.corners)

    @property
    def vertex_type(self) -> VertexType:
        return VertexType(self.corners.count("a"), self.corners.count("b"),
                          self.corners.count("c"))

    @property
    def chiralities(self) -> tuple[str, ...]:
        return tuple(chirality_of(a, self.seps[i - 1], self.seps[i])
                     for i, a in enumerate(self.corners))

    def rotations(self) -> Iterable[Arrangement]:
        k = len(self.corners)
        for r in range(k):
            yield Arrangement(self.corners[r:] + self.corners[:r],
                              self.seps[r:] + self.seps[:r])

    def reflect(self) -> Arrangement:
        """Read the cycle backwards; every quadrilateral corner flips chirality."""
        k = len(self.corners)
        corners = tuple(self.corners[j] for j in range(k - 1, -1, -1))
        seps = tuple(self.seps[j - 1] for j in range(k - 1, -1, -1))
        return Arrangement(corners, seps)

    def normal(self, reflections: bool = False) -> Arrangement:
        cands = list(self.rotations())
        if reflections:
            cands += list(self.reflect().rotations())
        return min(cands, key=lambda r: (r.corners, r.seps))

    def pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(zip(self.corners, self.seps))

    @classmethod
    def parse(cls, text: str) -> Arrangement:
        lead, corners, seps, trail = parse_word(text)
        if lead is None or trail is None or lead != trail:
            raise ValueError(f"not a closed arrangement: {text!r}")
        return cls(tuple(corners), tuple(seps) + (trail,))


def parse_word(text: str) -> tuple[str | None, list[str], list[str], str | None]:
    """Parse an alternating corner/separator word.

    Returns (leading separator, corners, inner separators, trailing
    separator); the outer separators are None when absent.
    """
    for g, a in _GREEK.items():
        text = text.replace(g, a)
    text = text.replace("‖", "||").replace(" ", "")
    tokens: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "|":
            if text[i:i + 2] == "||":
                tokens.append(Y)
                i += 2
            else:
                tokens.append(X)
                i += 1
        elif ch in "abc":
            tokens.append(ch)
            i += 1
        else:
            raise ValueError(f"malformed pattern {text!r}")
    lead = trail = None
    if tokens and tokens[0] in (X, Y):
        lead = tokens.pop(0)
    if tokens and tokens[-1] in (X, Y):
        trail = tokens.pop()
    corners = tokens[0::2]
    seps = tokens[1::2]
    if (not corners or any(c not in "abc" for c in corners)
            or any(s not in (X, Y) for s in seps) or len(seps) != len(corners) - 1):
        raise ValueError(f"malformed pattern {text!r}")
    return lead, corners, seps, trail


@lru_cache(maxsize=None)
def _arrangements(a: int, b: int, c: int, single_chirality: bool) -> frozenset[Arrangement]:
    counts = {"a": a, "b": b, "c": c}
    deg = a + b + c
    found: set[Arrangement] = set()
    corners: list[str] = []
    seps: list[str] = []
    chis = (PLAIN,) if single_chirality else (PLAIN, MIRRORED)

    def extend(incoming: str) -> None:
        if len(corners) == deg:
            if seps[-1] == first_in[0]:
                found.add(Arrangement(tuple(corners), tuple(seps)).normal())
            return
        for ang in "abc":
            if not counts[ang]:
                continue
            outs = {side_profile(ang, chi)[1] for chi in chis
                    if side_profile(ang, chi)[0] == incoming}
            for out in sorted(outs):
                counts[ang] -= 1
                corners.append(ang)
                seps.append(out)
                extend(out)
                corners.pop()
                seps.pop()
                counts[ang] += 1

    first_in = [X]
    for start_in in (X, Y):
        first_in[0] = start_in
        extend(start_in)
    return frozenset(found)


def enumerate_arrangements(v: VertexType | tuple[int, int, int], up_to_symmetry: bool = False,
                           *, single_chirality: bool = False,
                           forbid: Iterable[str] = ()) -> set[Arrangement]:
    """All consistent arrangements of a vertex type.

    Results are distinct up to rotation, or up to rotation and reflection
    when ``up_to_symmetry``.  Arrangements containing any ``forbid``
    pattern are dropped.
    """
    a, b, c = v.as_tuple() if isinstance(v, VertexType) else v
    if (b + c) % 2:
        raise ValueError("odd y-degree")
    arrs = _arrangements(a, b, c, single_chirality)
    forbid = list(forbid)
    if forbid:
        arrs = frozenset(x for x in arrs if not any(match_pattern(x, p) for p in forbid))
    if up_to_symmetry:
        return {x.normal(reflections=True) for x in arrs}
    return set(arrs)


def _matches_forward(arr: Arrangement, lead, corners, seps, trail) -> bool:
    k = len(arr.corners)
    n = len(corners)
    if n > k:
        return False
    for start in range(k):
        if lead is not None and arr.seps[start - 1] != lead:
            continue
        ok = True
        for j in range(n):
            if arr.corners[(start + j) % k] != corners[j]:
                ok = False
                break
            if j < n - 1 and arr.seps[(start + j) % k] != seps[j]:
                ok = False
                break
        if ok and trail is not None and arr.seps[(start + n - 1) % k] != trail:
            ok = False
        if ok:
            return True
    return False


def match_pattern(arr: Arrangement, pattern: str) -> bool:
    """True iff the pattern occurs contiguously in the cycle, in either direction."""
    lead, corners, seps, trail = parse_word(pattern)
    if _matches_forward(arr, lead, corners, seps, trail):
        return True
    return _matches_forward(arr, trail, corners[::-1], seps[::-1], lead)


def word_str(corners: Iterable[str], seps: Iterable[str]) -> str:
    corners = list(corners)
    seps = list(seps)
    out = [corners[0]]
    for sep, ang in zip(seps, corners[1:]):
        out.append(_sep_str(sep))
        out.append(ang)
    return "".join(out)


def _canonical_word(corners: tuple[str, ...], seps: tuple[str, ...]) -> str:
    return min(word_str(corners, seps), word_str(corners[::-1], seps[::-1]))


def _locally_consistent(corners: tuple[str, ...], seps: tuple[str, ...]) -> bool:
    n = len(corners)
    for i, ang in enumerate(corners):
        sides = []
        if i > 0:
            sides.append(seps[i - 1])
        if i < n - 1:
            sides.append(seps[i])
        if ang == "a" and any(s != X for s in sides):
            return False
        if ang != "a" and len(sides) == 2 and sides[0] == sides[1]:
            return False
    return True


@lru_cache(maxsize=None)
def short_patterns(max_corners: int = 3) -> frozenset[str]:
    """Every locally consistent word of 2..max_corners corners, up to reversal."""
    out = set()
    for n in range(2, max_corners + 1):
        for corners in product("abc", repeat=n):
            for seps in product((X, Y), repeat=n - 1):
                if _locally_consistent(corners, seps):
                    out.add(_canonical_word(corners, seps))
    return frozenset(out)


def occurring_patterns(arrs: Iterable[Arrangement], max_corners: int = 3) -> set[str]:
    out = set()
    for arr in arrs:
        k = len(arr.corners)
        for n in range(2, min(max_corners, k) + 1):
            for start in range(k):
                corners = tuple(arr.corners[(start + j) % k] for j in range(n))
                seps = tuple(arr.seps[(start + j) % k] for j in range(n - 1))
                out.add(_canonical_word(corners, seps))
    return out


def forbidden_patterns(avc: Iterable[VertexType], *, single_chirality: bool = False,
                       max_corners: int = 3) -> set[str]:
    """Short patterns that occur in no arrangement of any member type."""
    members = list(avc)
    if not members:
        raise ValueError("empty vertex set")
    arrs = set()
    for v in members:
        arrs |= enumerate_arrangements(v, single_chirality=single_chirality)
    return set(short_patterns(max_corners)) - occurring_patterns(arrs, max_corners)


# Across an edge shared by two tiles the corner pair at one end determines
# the pair at the other end: alpha stays alpha and beta/gamma swap.
_SWAP = {"a": "a", "b": "c", "c": "b"}


def dual_adjacency(p: str, sep: str, q: str) -> tuple[str, str, str]:
    """The adjacency seen at the far end of the edge between corners p and q."""
    return (_SWAP[q], sep, _SWAP[p])


def adjacencies(arr: Arrangement) -> set[tuple[str, str, str]]:
    k = len(arr.corners)
    return {(arr.corners[i], arr.seps[i], arr.corners[(i + 1) % k]) for i in range(k)}
