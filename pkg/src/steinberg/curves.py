"""Boundary multicurves of necklace subsets.

The boundary of a regular neighbourhood ``N(C')`` is traced on the polygonal
complex as dual loops (sequences of edge crossings).  Inessential loops and
parallel copies are removed with an Euler characteristic count on the
complementary regions, and every surviving loop is given a canonical name by
tracing its geodesic representative at the right-angled surface ``p``: the
cyclic list of tiles and vertices the geodesic passes through is an isotopy
invariant.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .hyperbolic import (
    HyperbolicSurface,
    axis_endpoints,
    critical_surface,
    disk_mobius,
    disk_to_klein,
    klein_to_disk,
    sl2_inverse,
    to_disk,
    mobius,
    to_su11,
    trace_length,
)
from .necklace import (
    DihedralElement,
    NecklaceError,
    PolygonalComplex,
    _check_genus,
    build_tesselation,
    chain_decomposition,
    realising_automorphism,
)

Crossing = tuple[int, int]

TIE_EXACT = 1e-9
TIE_AMBIGUOUS = 1e-6


class AmbiguousTraceError(RuntimeError):
    """A geodesic passes too close to a vertex to decide which side it takes."""


class FillingError(NecklaceError):
    pass


# --------------------------------------------------------------------------
# boundary walks


@dataclass(frozen=True)
class BoundaryWalk:
    darts: tuple[int, ...]
    crossings: tuple[Crossing, ...]
    face: int  # face containing the walk's starting point


def _restricted_rotation(cx: PolygonalComplex, kept: frozenset[int]) -> dict[int, tuple[int, list[int]]]:
    out = {}
    for d in range(len(cx.rho)):
        if cx.dart_curve(d) not in kept:
            continue
        crossed = []
        y = cx.rho[d]
        while cx.dart_curve(y) not in kept:
            crossed.append(y)
            y = cx.rho[y]
        out[d] = (y, crossed)
    return out


def boundary_walks(cx: PolygonalComplex, subset: Iterable[int]) -> list[BoundaryWalk]:
    """Boundary circles of the neighbourhood of the curves in ``subset``."""
    kept = frozenset(subset)
    rot = _restricted_rotation(cx, kept)
    seen = set()
    walks = []
    for d0 in sorted(rot):
        if d0 in seen:
            continue
        darts, crossings = [], []
        d = d0
        while d not in seen:
            seen.add(d)
            darts.append(d)
            nxt, crossed = rot[d ^ 1]
            crossings.extend((cx.dart_face[y], cx.dart_pos[y]) for y in crossed)
            d = nxt
        walks.append(BoundaryWalk(tuple(darts), tuple(crossings), cx.dart_face[cx.rho[darts[0] ^ 1]]))
    return walks


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


@dataclass
class Piece:
    kind: str  # "N" for a neighbourhood component, "R" for a complementary region
    euler: int
    walks: list[int] = field(default_factory=list)
    curves: tuple[int, ...] = ()
    faces: tuple[int, ...] = ()

    @property
    def boundary(self) -> int:
        return len(self.walks)

    @property
    def genus(self) -> int:
        return (2 - self.euler - self.boundary) // 2


@dataclass
class Cutting:
    """The decomposition of the surface along the boundary of ``N(C')``."""

    cx: PolygonalComplex
    subset: frozenset[int]
    walks: list[BoundaryWalk]
    pieces: list[Piece]
    walk_n: list[int]   # index of the N-piece on one side of each walk
    walk_r: list[int]   # index of the region on the other side

    @property
    def regions(self) -> list[Piece]:
        return [p for p in self.pieces if p.kind == "R"]

    def euler_total(self) -> int:
        return sum(p.euler for p in self.pieces)


def cut(cx: PolygonalComplex, subset: Iterable[int]) -> Cutting:
    kept = frozenset(subset)
    n = cx.n
    walks = boundary_walks(cx, kept)
    pieces: list[Piece] = []

    chain_of = {}
    for chain, cyclic in chain_decomposition(n, kept):
        k = len(chain)
        euler = -k if cyclic else -(k - 1)
        for c in chain:
            chain_of[c] = len(pieces)
        pieces.append(Piece("N", euler, curves=chain))

    uf = _UnionFind(cx.num_faces)
    for e in range(cx.num_edges):
        if cx.edge_curve(e) not in kept:
            uf.union(*cx.edge_faces(e))
    roots = sorted({uf.find(f) for f in range(cx.num_faces)})
    region_of = {}
    for r in roots:
        faces = tuple(f for f in range(cx.num_faces) if uf.find(f) == r)
        edges = sum(1 for e in range(cx.num_edges)
                    if cx.edge_curve(e) not in kept and uf.find(cx.edge_faces(e)[0]) == r)
        verts = 0
        for v in range(n):
            if v not in kept and (v + 1) % n not in kept:
                # the vertex c_v ∩ c_{v+1} lies in the region of any face at it
                if uf.find(cx.dart_face[4 * v + 1]) == r:
                    verts += 1
        region_of[r] = len(pieces)
        pieces.append(Piece("R", len(faces) - edges + verts, faces=faces))

    walk_n, walk_r = [], []
    for w_idx, w in enumerate(walks):
        a = chain_of[cx.dart_curve(w.darts[0])]
        b = region_of[uf.find(w.face)]
        pieces[a].walks.append(w_idx)
        pieces[b].walks.append(w_idx)
        walk_n.append(a)
        walk_r.append(b)
    return Cutting(cx, kept, walks, pieces, walk_n, walk_r)


def fills(g: int, subset: Iterable[int]) -> bool:
    """Whether every complementary region of ``N(subset)`` is a disk."""
    cx = build_tesselation(g)
    kept = frozenset(subset)
    if not kept:
        return False
    c = cut(cx, kept)
    return all(p.euler == 1 and p.boundary == 1 for p in c.regions)


# --------------------------------------------------------------------------
# separation tests


def _is_bridge(num_nodes: int, edges: Sequence[tuple[int, int]], e: int) -> bool:
    adj = [[] for _ in range(num_nodes)]
    for i, (a, b) in enumerate(edges):
        if i != e:
            adj[a].append(b)
            adj[b].append(a)
    a, b = edges[e]
    seen = {a}
    stack = [a]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return b not in seen


def _component(num_nodes: int, edges: Sequence[tuple[int, int]], skip: int, start: int) -> set[int]:
    adj = [[] for _ in range(num_nodes)]
    for i, (a, b) in enumerate(edges):
        if i != skip:
            adj[a].append(b)
            adj[b].append(a)
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


@lru_cache(maxsize=None)
def _cycle_basis(g: int) -> tuple[tuple[int, ...], ...]:
    """Fundamental cycles of the 1-skeleton, as edge sets."""
    cx = build_tesselation(g)
    n = cx.n
    ends = [(cx.dart_vertex(2 * e), cx.dart_vertex(2 * e + 1)) for e in range(cx.num_edges)]
    parent = {0: None}
    order = [0]
    tree = set()
    for v in order:
        for e, (a, b) in enumerate(ends):
            for x, y in ((a, b), (b, a)):
                if x == v and y not in parent:
                    parent[y] = (v, e)
                    tree.add(e)
                    order.append(y)

    def path(v):
        out = []
        while parent[v] is not None:
            v, e = parent[v]
            out.append(e)
        return out

    basis = []
    for e, (a, b) in enumerate(ends):
        if e in tree:
            continue
        cyc = {e}
        for x in path(a) + path(b):
            cyc ^= {x}
        basis.append(tuple(sorted(cyc)))
    assert len(basis) == cx.num_edges - n + 1
    return tuple(basis)


def homologically_trivial(cx: PolygonalComplex, crossings: Sequence[Crossing]) -> bool:
    """Mod 2 test: a dual loop separates iff it meets every cycle of the
    1-skeleton an even number of times."""
    parity = [0] * cx.num_edges
    for f, k in crossings:
        parity[cx.side_edge(f, k)] ^= 1
    return all(sum(parity[e] for e in cyc) % 2 == 0 for cyc in _cycle_basis(cx.genus))


# --------------------------------------------------------------------------
# geodesic tracing at p


class GeodesicTracer:
    """Follows geodesics through the tiles of a hyperbolic surface.

    Every tile is kept in its own standard position; a geodesic is stored by
    its two ideal endpoints in the disk and is moved to the neighbour's
    coordinates when it leaves the tile.
    """

    def __init__(self, surface: HyperbolicSurface):
        self.surface = surface
        cx = surface.cx
        self.cx = cx
        self.inv = [[to_su11(sl2_inverse(a)) for a in row] for row in surface.transition]
        self.klein = []
        self.walls = []
        for f in range(cx.num_faces):
            pts = [disk_to_klein(to_disk(mobius(s, 1j))) for s in surface.frames[f]]
            self.klein.append(pts)
            walls = []
            m = len(pts)
            for k in range(m):
                walls.append(_chord_endpoints(pts[k], pts[(k + 1) % m]))
            self.walls.append(walls)

    # geometry helpers
    def _halfplanes(self, f: int, p: complex, q: complex):
        pts = self.klein[f]
        m = len(pts)
        out = []
        for k in range(m):
            e = pts[(k + 1) % m] - pts[k]
            a = _cross(e, p - pts[k])
            b = _cross(e, q - p)
            out.append((a, b))
        return out

    def _move_point(self, f: int, k: int, p: complex) -> complex:
        return disk_to_klein(disk_mobius(self.inv[f][k], klein_to_disk(p)))

    def _move_ideal(self, f: int, k: int, w: complex) -> complex:
        z = disk_mobius(self.inv[f][k], w)
        return z / abs(z)

    def _contains(self, f: int, p: complex, tol: float = 1e-12) -> bool:
        return all(a >= -tol for a, _ in self._halfplanes(f, p, p))

    # -- locating the axis ---------------------------------------------------

    def locate(self, f: int, a: complex, b: complex, max_steps: int = 100000) -> tuple[int, complex, complex]:
        """Move the geodesic ``(a, b)`` (in coordinates of tile ``f``) to a tile it passes through."""
        target = (a + b) / 2
        pts = self.klein[f]
        start = sum(pts) / len(pts)
        entry = None
        for _ in range(max_steps):
            hp = self._halfplanes(f, start, target)
            best, side = math.inf, None
            for k, (al, be) in enumerate(hp):
                if k == entry or be >= 0:
                    continue
                t = -al / be
                if t > -1e-9 and t < best:
                    best, side = t, k
            if side is None or best >= 1:
                return f, a, b
            p = start + best * (target - start)
            f2, k2 = self.cx.twin(f, side)
            start = self._move_point(f, side, p)
            target = self._move_point(f, side, target)
            a = self._move_ideal(f, side, a)
            b = self._move_ideal(f, side, b)
            f, entry = f2, k2
        raise RuntimeError("axis location did not terminate")

    def on_wall(self, f: int, a: complex, b: complex, tol: float = 1e-8) -> int | None:
        for k, (u, v) in enumerate(self.walls[f]):
            if (abs(u - a) < tol and abs(v - b) < tol) or (abs(u - b) < tol and abs(v - a) < tol):
                return k
        return None

    def _interval(self, f: int, a: complex, b: complex):
        hp = self._halfplanes(f, a, b)
        lo, hi = -math.inf, math.inf
        exits = []
        for k, (al, be) in enumerate(hp):
            if be > 0:
                lo = max(lo, -al / be)
            elif be < 0:
                t = -al / be
                exits.append((t, k))
                hi = min(hi, t)
            elif al < 0:
                return None
        return lo, hi, sorted(exits)

    def trace(self, f: int, a: complex, b: complex, max_steps: int = 100000):
        """Cyclic token sequence of the closed geodesic through tile ``f``.

        Returns ``(tokens, reversed_tokens)`` aligned so that reversing the
        walk maps ``tokens[i]`` to ``reversed_tokens[i]``.
        """
        cx = self.cx
        iv = self._interval(f, a, b)
        if iv is None or iv[1] - iv[0] < TIE_EXACT:
            raise AmbiguousTraceError("geodesic does not enter the starting tile")
        start = (f, a, b)
        toks, revs = [], []
        for _ in range(max_steps):
            lo, hi, exits = self._interval(f, a, b)
            scale = abs(b - a)
            near = [(t, k) for t, k in exits if (t - hi) * scale < TIE_AMBIGUOUS]
            tied = [(t, k) for t, k in near if (t - hi) * scale < TIE_EXACT]
            if len(near) != len(tied):
                raise AmbiguousTraceError(f"near-vertex passage in tile {f}")
            m = len(cx.faces[f])
            if len(tied) == 1:
                k = tied[0][1]
                f2, k2 = cx.twin(f, k)
                toks.append(("s", f, k))
                revs.append(("s", f2, k2))
                a, b = self._move_ideal(f, k, a), self._move_ideal(f, k, b)
                f = f2
            elif len(tied) == 2:
                ks = sorted(k for _, k in tied)
                if (ks[0] + 1) % m == ks[1]:
                    k = ks[0]
                elif (ks[1] + 1) % m == ks[0]:
                    k = ks[1]
                else:
                    raise AmbiguousTraceError("exit through non-adjacent sides")
                f2, k2 = cx.twin(f, k)
                k3 = (k2 - 1) % len(cx.faces[f2])
                f3, j3 = cx.twin(f2, k3)
                toks.append(("v", f, (k + 1) % m))
                revs.append(("v", f3, j3))
                a, b = self._move_ideal(f, k, a), self._move_ideal(f, k, b)
                a, b = self._move_ideal(f2, k3, a), self._move_ideal(f2, k3, b)
                f = f3
            else:
                raise AmbiguousTraceError(f"{len(tied)} sides tied at exit")
            if f == start[0] and abs(a - start[1]) < 1e-7 and abs(b - start[2]) < 1e-7:
                return tuple(toks), tuple(revs)
        raise RuntimeError("geodesic trace did not close up")


def _cross(u: complex, v: complex) -> float:
    return u.real * v.imag - u.imag * v.real


def _chord_endpoints(p: complex, q: complex) -> tuple[complex, complex]:
    """Ideal endpoints of the Klein chord through ``p`` and ``q``."""
    d = q - p
    # |p + s d|^2 = 1
    A = abs(d) ** 2
    B = 2 * (p.real * d.real + p.imag * d.imag)
    C = abs(p) ** 2 - 1
    disc = math.sqrt(B * B - 4 * A * C)
    s1, s2 = (-B - disc) / (2 * A), (-B + disc) / (2 * A)
    return p + s1 * d, p + s2 * d


def _least_rotation(seq: Sequence) -> tuple:
    n = len(seq)
    return min(tuple(seq[i:]) + tuple(seq[:i]) for i in range(n))


@lru_cache(maxsize=None)
def _tracer(g: int) -> GeodesicTracer:
    return GeodesicTracer(critical_surface(g))


@dataclass(frozen=True)
class ClassId:
    """Canonical name of an isotopy class of essential simple closed curves."""

    key: tuple
    intersections: tuple[int, ...]  # geometric intersection with each necklace curve
    length: float  # length at p

    @property
    def necklace_index(self) -> int | None:
        return self.key[1] if self.key[0] == "c" else None


def identify(g: int, face: int, crossings: Sequence[Crossing]) -> ClassId:
    """Name the class of the dual loop starting in ``face``."""
    tracer = _tracer(g)
    surf = tracer.surface
    cx = surf.cx
    h = surf.holonomy(crossings)
    length = trace_length(h)
    a, b = axis_endpoints(h)
    f, a, b = tracer.locate(face, a, b)
    n = cx.n
    k = tracer.on_wall(f, a, b)
    if k is not None:
        c = cx.edge_curve(cx.side_edge(f, k))
        inter = [0] * n
        inter[(c - 1) % n] = inter[(c + 1) % n] = 1
        return ClassId(("c", c), tuple(inter), length)
    toks, revs = tracer.trace(f, a, b)
    key = ("geo", min(_least_rotation(toks), _least_rotation(revs[::-1])))
    inter = [0] * n
    for kind, f, k in toks:
        if kind == "s":
            inter[cx.edge_curve(cx.side_edge(f, k))] += 1
        else:
            v = cx.polygon_vertices(f)[k]
            inter[v] += 1
            inter[(v + 1) % n] += 1
    return ClassId(key, tuple(inter), length)


# --------------------------------------------------------------------------
# multicurves


@dataclass(frozen=True)
class CurveClass:
    ident: ClassId
    separating: bool
    complement_pieces: tuple[tuple[int, int], ...]
    face: int = field(compare=False)
    path: tuple[Crossing, ...] = field(compare=False)

    @property
    def key(self) -> tuple:
        return self.ident.key

    def signature(self) -> tuple:
        """Sort key: separating flag, complement data, intersection pattern, canonical key."""
        return (self.separating, self.complement_pieces, self.ident.intersections, _sortable(self.key))

    def label(self) -> str:
        c = self.ident.necklace_index
        if c is not None:
            return f"c{c}"
        tag = "s" if self.separating else "n"
        digest = hashlib.sha1(repr(self.key).encode()).hexdigest()[:4]
        return tag + "[" + "".join(str(x) for x in self.ident.intersections) + "]" + digest

    def to_json(self) -> dict:
        return {
            "label": self.label(),
            "separating": self.separating,
            "complement_pieces": [list(p) for p in self.complement_pieces],
            "intersections": list(self.ident.intersections),
            "length_at_p": self.ident.length,
            "key": _jsonable(self.key),
            "path": {"face": self.face, "crossings": [list(c) for c in self.path]},
        }


def _sortable(key):
    return repr(key)


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


@dataclass(frozen=True)
class Multicurve:
    genus: int
    components: tuple[CurveClass, ...]
    provenance: frozenset[int] | None = field(default=None, compare=False)

    def __post_init__(self):
        comps = tuple(sorted(set(self.components), key=CurveClass.signature))
        object.__setattr__(self, "components", comps)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    @property
    def keys(self) -> frozenset:
        return frozenset(c.key for c in self.components)

    def issubset(self, other: "Multicurve") -> bool:
        return self.keys <= other.keys

    def disjoint_from(self, other: "Multicurve") -> bool:
        """All components pairwise disjoint or equal (their union is a multicurve)."""
        for a in self.components:
            for b in other.components:
                if a.key != b.key and intersection_number(self.genus, a, b) > 0:
                    return False
        return True

    def labels(self) -> list[str]:
        return [c.label() for c in self.components]

    def signature(self) -> tuple:
        return tuple(c.signature() for c in self.components)

    def to_json(self) -> dict:
        return {
            "schema": "steinberg.multicurve/1",
            "genus": self.genus,
            "provenance": sorted(self.provenance) if self.provenance is not None else None,
            "components": [c.to_json() for c in self.components],
        }


def intersection_number(g: int, a: CurveClass, b: CurveClass) -> int:
    """Geometric intersection of two classes, counted at ``p`` by tracing both
    geodesics (necklace curves use their intersection pattern directly)."""
    if a.key == b.key:
        return 0
    ia, ib = a.ident.necklace_index, b.ident.necklace_index
    if ia is not None:
        return b.ident.intersections[ia]
    if ib is not None:
        return a.ident.intersections[ib]
    return _geodesic_crossings(g, a, b)


def _segments(g: int, c: CurveClass):
    """The geodesic of ``c`` as Klein chords, one per tile visited."""
    tracer = _tracer(g)
    surf = tracer.surface
    h = surf.holonomy(c.path)
    a, b = axis_endpoints(h)
    f, a, b = tracer.locate(c.face, a, b)
    toks, _ = tracer.trace(f, a, b)
    out = []
    for kind, f_, k in toks:
        lo, hi, _ = tracer._interval(f, a, b)
        out.append((f, a + lo * (b - a), a + hi * (b - a)))
        if kind == "s":
            a, b = tracer._move_ideal(f, k, a), tracer._move_ideal(f, k, b)
            f = tracer.cx.twin(f, k)[0]
        else:
            m = len(tracer.cx.faces[f])
            kk = (k - 1) % m
            f2, k2 = tracer.cx.twin(f, kk)
            k3 = (k2 - 1) % len(tracer.cx.faces[f2])
            a, b = tracer._move_ideal(f, kk, a), tracer._move_ideal(f, kk, b)
            a, b = tracer._move_ideal(f2, k3, a), tracer._move_ideal(f2, k3, b)
            f = tracer.cx.twin(f2, k3)[0]
    return out


def _geodesic_crossings(g: int, a: CurveClass, b: CurveClass) -> int:
    sa, sb = _segments(g, a), _segments(g, b)
    count = 0
    for fa, p1, p2 in sa:
        for fb, q1, q2 in sb:
            if fa != fb:
                continue
            d1 = _cross(p2 - p1, q1 - p1)
            d2 = _cross(p2 - p1, q2 - p1)
            d3 = _cross(q2 - q1, p1 - q1)
            d4 = _cross(q2 - q1, p2 - q1)
            if d1 * d2 < 0 and d3 * d4 < 0:
                count += 1
            elif min(abs(d1), abs(d2), abs(d3), abs(d4)) < 1e-9 and (d1 * d2 <= 0 and d3 * d4 <= 0):
                # crossing on a tile boundary is seen from both tiles
                count += 0.5
    return int(round(count))


def _groups(c: Cutting) -> tuple[list[list[int]], set[int]]:
    """Isotopy groups of walks and the set of inessential walks."""
    uf = _UnionFind(len(c.walks))
    disk = set()
    for p in c.pieces:
        if p.kind == "R" and p.euler == 1 and p.boundary == 1:
            disk.update(p.walks)
        if p.euler == 0 and p.boundary == 2:
            uf.union(*p.walks)
    groups: dict[int, list[int]] = {}
    for w in range(len(c.walks)):
        groups.setdefault(uf.find(w), []).append(w)
    out = [ws for ws in groups.values() if not disk.intersection(ws)]
    return out, disk


def _complement(c: Cutting, w: int, g: int) -> tuple[bool, tuple[tuple[int, int], ...]]:
    edges = [(c.walk_n[i], c.walk_r[i]) for i in range(len(c.walks))]
    sep = _is_bridge(len(c.pieces), edges, w)
    if not sep:
        return False, ((g - 1, 2),)
    side = _component(len(c.pieces), edges, w, edges[w][0])
    chi = sum(c.pieces[i].euler for i in side)
    other = c.euler_total() - chi
    pieces = tuple(sorted(((1 - chi) // 2, 1) for chi in (chi, other)))
    return True, pieces


def boundary_multicurve(g: int, subset: Iterable[int]) -> Multicurve:
    """Essential boundary classes of the neighbourhood of ``subset``."""
    _check_genus(g)
    kept = frozenset(subset)
    if not kept:
        raise NecklaceError("empty curve set has no neighbourhood")
    cx = build_tesselation(g)
    if any(not 0 <= i < cx.n for i in kept):
        raise NecklaceError(f"curve index out of range 0..{cx.n - 1}")
    c = cut(cx, kept)
    if c.euler_total() != 2 - 2 * g:
        raise NecklaceError("Euler characteristic bookkeeping failed")
    groups, _ = _groups(c)
    if not groups:
        raise FillingError(f"{sorted(kept)} fills the surface")
    classes = []
    for ws in groups:
        idents = {identify(g, c.walks[w].face, c.walks[w].crossings).key for w in ws}
        if len(idents) != 1:
            raise NecklaceError(f"parallel boundary circles traced to different classes: {idents}")
        w = ws[0]
        walk = c.walks[w]
        sep, pieces = _complement(c, w, g)
        if sep != homologically_trivial(cx, walk.crossings):
            raise NecklaceError("bridge test and homology test disagree")
        ident = identify(g, walk.face, walk.crossings)
        classes.append(CurveClass(ident, sep, pieces, walk.face, walk.crossings))
    keys = [cl.key for cl in classes]
    if len(set(keys)) != len(keys):
        raise NecklaceError("distinct boundary groups traced to the same class")
    return Multicurve(g, tuple(classes), kept)


_TRANSPORT_CACHE: dict = {}


def transport(g: int, el: DihedralElement, cl: CurveClass) -> CurveClass:
    """Image of a class under the cellular automorphism realising ``el``."""
    hit = _TRANSPORT_CACHE.get((g, el, cl))
    if hit is None:
        hit = _TRANSPORT_CACHE[(g, el, cl)] = _transport(g, el, cl)
    return hit


def _transport(g: int, el: DihedralElement, cl: CurveClass) -> CurveClass:
    cx = build_tesselation(g)
    aut = realising_automorphism(g, el)
    fmap = aut.face_map(cx)
    emap = aut.edge_map()
    path = tuple(
        (fmap[f], cx.crossing_side(fmap[f], emap[cx.side_edge(f, k)])) for f, k in cl.path
    )
    face = fmap[cl.face]
    return CurveClass(identify(g, face, path), cl.separating, cl.complement_pieces, face, path)


def relabel(el: DihedralElement, x):
    """Apply a dihedral relabelling to an index set or a multicurve."""
    if isinstance(x, Multicurve):
        prov = frozenset(el(i) for i in x.provenance) if x.provenance is not None else None
        return Multicurve(x.genus, tuple(transport(x.genus, el, c) for c in x.components), prov)
    return type(x)(el(i) for i in x) if not isinstance(x, (frozenset, set)) else frozenset(el(i) for i in x)
