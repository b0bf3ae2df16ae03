"""The necklace curve system and the four-polygon cell structure it cuts out.

Curves ``c_0 .. c_{n-1}`` (``n = 2g + 2``) are arranged cyclically; ``c_i``
meets ``c_{i+1}`` once at the vertex ``v_i`` and is disjoint from the rest.
Each curve is made of two edges, both joining ``v_{i-1}`` to ``v_i``.

Combinatorial conventions
-------------------------
* edge ``e = 2*i + s`` is edge ``s`` of curve ``i``;
* dart ``d = 2*e + end``; ``end = 0`` sits at ``v_{i-1}``, ``end = 1`` at ``v_i``;
* ``rho[d]`` is the next dart counter-clockwise around the vertex of ``d``;
* faces are orbits of ``d -> rho[other end of d]``; each face walk lists the
  darts leaving its polygon vertices in boundary order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np


class NecklaceError(ValueError):
    pass


def _check_genus(g: int) -> None:
    if int(g) != g or g < 2:
        raise NecklaceError(f"genus must be an integer >= 2, got {g!r}")


# --------------------------------------------------------------------------
# curve system


@dataclass(frozen=True)
class NecklaceSystem:
    genus: int

    @property
    def n(self) -> int:
        return 2 * self.genus + 2

    @property
    def curves(self) -> tuple[int, ...]:
        return tuple(range(self.n))

    @cached_property
    def intersection_matrix(self) -> np.ndarray:
        n = self.n
        m = np.zeros((n, n), dtype=int)
        for i in range(n):
            m[i, (i + 1) % n] = m[(i + 1) % n, i] = 1
        return m

    def intersects(self, i: int, j: int) -> bool:
        return bool(self.intersection_matrix[i % self.n, j % self.n])


def build_necklace(g: int) -> NecklaceSystem:
    _check_genus(g)
    return NecklaceSystem(g)


def chain_decomposition(n: int, subset: Iterable[int]) -> list[tuple[tuple[int, ...], bool]]:
    """Split a set of curve indices into maximal runs of cyclically
    consecutive indices.

    Returns ``[(chain, cyclic), ...]`` where ``cyclic`` flags the full cycle.
    Chains are ordered by their first element.
    """
    s = sorted({i % n for i in subset})
    if not s:
        return []
    if len(s) == n:
        return [(tuple(range(n)), True)]
    members = set(s)
    chains = []
    for i in s:
        if (i - 1) % n in members:
            continue
        run = [i]
        while (run[-1] + 1) % n in members:
            run.append((run[-1] + 1) % n)
        chains.append((tuple(run), False))
    chains.sort(key=lambda c: c[0][0])
    return chains


def chain_neighborhood_type(k: int) -> tuple[int, int]:
    """(genus, boundary count) of a regular neighbourhood of a linear chain of
    ``k`` curves meeting consecutively once."""
    return k // 2, 1 if k % 2 == 0 else 2


# --------------------------------------------------------------------------
# cell structure


def _theta(d: int) -> int:
    return d ^ 1


def _rotation(n: int, flips: Sequence[int]) -> list[int]:
    rho = [0] * (4 * n)
    for i in range(n):
        j = (i + 1) % n
        x = flips[i]
        cyc = [
            4 * i + 1,              # edge (i,0) at v_i
            4 * j + 2 * x,          # edge (j,x) at v_i
            4 * i + 3,              # edge (i,1) at v_i
            4 * j + 2 * (1 - x),    # edge (j,1-x) at v_i
        ]
        for a in range(4):
            rho[cyc[a]] = cyc[(a + 1) % 4]
    return rho


def _trace_faces(rho: Sequence[int]) -> list[tuple[int, ...]]:
    seen = set()
    faces = []
    for d in range(len(rho)):
        if d in seen:
            continue
        walk = []
        e = d
        while e not in seen:
            seen.add(e)
            walk.append(e)
            e = rho[_theta(e)]
        faces.append(tuple(walk))
    return faces


@dataclass(frozen=True)
class PolygonalComplex:
    """The necklace surface as four polygons glued along their edges."""

    genus: int
    flips: tuple[int, ...]
    rho: tuple[int, ...]
    faces: tuple[tuple[int, ...], ...]
    corner_type: tuple[int, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return 2 * self.genus + 2

    @property
    def num_vertices(self) -> int:
        return self.n

    @property
    def num_edges(self) -> int:
        return 2 * self.n

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    @staticmethod
    def dart_edge(d: int) -> int:
        return d >> 1

    @staticmethod
    def edge_curve(e: int) -> int:
        return e >> 1

    @staticmethod
    def dart_curve(d: int) -> int:
        return d >> 2

    def dart_vertex(self, d: int) -> int:
        return (self.dart_curve(d) - 1 + (d & 1)) % self.n

    def curve_edges(self, i: int) -> tuple[int, int]:
        return 2 * i, 2 * i + 1

    def curve_path(self, i: int) -> tuple[int, int]:
        """The closed two-edge path of curve ``i`` as darts ``v_{i-1} -> v_i -> v_{i-1}``."""
        return 4 * i, 4 * i + 3

    @cached_property
    def dart_face(self) -> tuple[int, ...]:
        out = [0] * len(self.rho)
        for f, walk in enumerate(self.faces):
            for d in walk:
                out[d] = f
        return tuple(out)

    @cached_property
    def dart_pos(self) -> tuple[int, ...]:
        out = [0] * len(self.rho)
        for walk in self.faces:
            for k, d in enumerate(walk):
                out[d] = k
        return tuple(out)

    def edge_faces(self, e: int) -> tuple[int, int]:
        return self.dart_face[2 * e], self.dart_face[2 * e + 1]

    def twin(self, f: int, k: int) -> tuple[int, int]:
        """Face and side index on the other side of side ``k`` of face ``f``."""
        d = _theta(self.faces[f][k])
        return self.dart_face[d], self.dart_pos[d]

    def side_edge(self, f: int, k: int) -> int:
        return self.dart_edge(self.faces[f][k])

    def crossing_side(self, f: int, e: int) -> int:
        """Side index of face ``f`` lying on edge ``e``."""
        for d in (2 * e, 2 * e + 1):
            if self.dart_face[d] == f:
                return self.dart_pos[d]
        raise NecklaceError(f"edge {e} is not a side of face {f}")

    def polygon_corner_types(self, f: int) -> tuple[int, ...]:
        """Corner type (0 or 1) at each polygon vertex of face ``f``.

        Vertex ``k`` is where side ``k - 1`` ends and side ``k`` starts.
        """
        walk = self.faces[f]
        m = len(walk)
        return tuple(self.corner_type[_theta(walk[(k - 1) % m])] for k in range(m))

    def polygon_vertices(self, f: int) -> tuple[int, ...]:
        return tuple(self.dart_vertex(d) for d in self.faces[f])

    def vertex_star(self, v: int) -> tuple[int, ...]:
        """Darts at vertex ``v`` in counter-clockwise order, starting at the
        dart of edge ``(v, 0)``."""
        d = 4 * v + 1
        out = [d]
        while (d := self.rho[d]) != out[0]:
            out.append(d)
        return tuple(out)

    # -- fundamental domain ------------------------------------------------

    @cached_property
    def star_faces(self) -> tuple[int, ...]:
        """Faces around vertex ``v_0`` in rotation order (the fundamental domain)."""
        return tuple(self.dart_face[d] for d in self.vertex_star(0))

    @cached_property
    def star_edges(self) -> frozenset[int]:
        return frozenset(self.dart_edge(d) for d in self.vertex_star(0))

    @cached_property
    def side_pairing(self) -> dict[tuple[int, int], tuple[int, int]]:
        """Involution on the boundary sides ``(face, side)`` of the fundamental
        domain built from the four polygons glued around ``v_0``."""
        out = {}
        for f, walk in enumerate(self.faces):
            for k, d in enumerate(walk):
                if self.dart_edge(d) in self.star_edges:
                    continue
                out[(f, k)] = self.twin(f, k)
        return out

    @property
    def fundamental_domain_sides(self) -> int:
        """Geodesic sides of the fundamental polygon: boundary edges, with the
        four straight-angle corners at the far ends of the interior edges
        merging two edges into one side."""
        return len(self.side_pairing) - 4

    def vertex_cycle_words(self) -> dict[int, tuple[tuple[int, int], ...]]:
        """For every vertex, the dual loop around it as ``(face, side)`` crossings.

        The loop at ``v`` crosses its four incident edges in rotation order; its
        holonomy is the identity (up to sign) in any hyperbolic structure.
        """
        out = {}
        for v in range(self.n):
            star = self.vertex_star(v)
            loop = []
            for d in star:
                # the corner between rho^-1(d) and d belongs to dart_face[d];
                # going ccw we leave it across the edge of rho(d)
                nxt = self.rho[d]
                loop.append((self.dart_face[nxt], self.dart_pos[nxt]))
            out[v] = tuple(loop)
        return out

    def to_json(self) -> dict:
        return {
            "schema": "steinberg.polygonal_complex/1",
            "genus": self.genus,
            "vertices": self.num_vertices,
            "edges": [
                {"id": e, "curve": self.edge_curve(e), "faces": list(self.edge_faces(e))}
                for e in range(self.num_edges)
            ],
            "faces": [
                {
                    "id": f,
                    "darts": list(w),
                    "edges": [self.dart_edge(d) for d in w],
                    "vertices": list(self.polygon_vertices(f)),
                    "corner_types": list(self.polygon_corner_types(f)),
                }
                for f, w in enumerate(self.faces)
            ],
            "curve_paths": {str(i): [self.dart_edge(d) for d in self.curve_path(i)] for i in range(self.n)},
            "fundamental_domain": {
                "star_faces": list(self.star_faces),
                "interior_edges": sorted(self.star_edges),
                "side_pairing": [[f, k, *self.side_pairing[(f, k)]] for (f, k) in sorted(self.side_pairing)],
                "geodesic_sides": self.fundamental_domain_sides,
            },
        }


def _two_colour_corners(n: int, rho: Sequence[int], faces) -> tuple[int, ...] | None:
    """Colour corners (named by their first dart) so that they alternate around
    every vertex and along every face boundary."""
    m = len(rho)
    adj = [[] for _ in range(m)]
    for x in range(m):
        adj[x].append(rho[x])
        adj[rho[x]].append(x)
    for walk in faces:
        corners = [_theta(walk[k - 1]) for k in range(len(walk))]
        for a, b in zip(corners, corners[1:] + corners[:1]):
            adj[a].append(b)
            adj[b].append(a)
    colour = [-1] * m
    for s in range(m):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if colour[y] < 0:
                    colour[y] = 1 - colour[x]
                    stack.append(y)
                elif colour[y] == colour[x]:
                    return None
    return tuple(colour)


def _valid_rotation(g: int, flips: Sequence[int]):
    n = 2 * g + 2
    rho = _rotation(n, flips)
    faces = _trace_faces(rho)
    if len(faces) != 4 or any(len(w) != n for w in faces):
        return None
    # a curve's two edges must not bound the same pair of faces
    face_of = {d: f for f, w in enumerate(faces) for d in w}
    for i in range(n):
        a = {face_of[4 * i], face_of[4 * i + 1]}
        b = {face_of[4 * i + 2], face_of[4 * i + 3]}
        if a == b or len(a) < 2 or len(b) < 2:
            return None
    return rho, faces


def tesselation_solutions(g: int) -> list[tuple[int, ...]]:
    """Every rotation system on the doubled cycle that yields four
    ``(2g+2)``-gons (exhaustive, lexicographic order)."""
    _check_genus(g)
    n = 2 * g + 2
    return [x for x in itertools.product((0, 1), repeat=n) if _valid_rotation(g, x) is not None]


@lru_cache(maxsize=None)
def build_tesselation(g: int) -> PolygonalComplex:
    """Recover the gluing of four ``(2g+2)``-gons with the necklace as 1-skeleton.

    Searches the rotation systems at the ``2g+2`` degree-4 vertices (each vertex
    has two transverse-crossing orders) in lexicographic order and returns the
    first one whose faces are four ``(2g+2)``-gons.
    """
    _check_genus(g)
    n = 2 * g + 2
    for flips in itertools.product((0, 1), repeat=n):
        found = _valid_rotation(g, flips)
        if found is None:
            continue
        rho, faces = found
        colour = _two_colour_corners(n, rho, faces)
        if colour is None:
            continue
        cx = PolygonalComplex(g, tuple(flips), tuple(rho), tuple(faces), colour)
        if cx.euler_characteristic != 2 - 2 * g:
            raise NecklaceError("gluing has the wrong Euler characteristic")
        return cx
    raise NecklaceError(f"no gluing of four {n}-gons found for genus {g}")


# --------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True, order=True)
class DihedralElement:
    """``i -> k + s*i (mod n)`` with ``s = -1`` when ``reflect``."""

    k: int
    reflect: bool
    n: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % self.n)

    def __call__(self, i: int) -> int:
        return (self.k + (-i if self.reflect else i)) % self.n

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        if other.n != self.n:
            raise ValueError("dihedral orders differ")
        s = -1 if self.reflect else 1
        return DihedralElement(self.k + s * other.k, self.reflect != other.reflect, self.n)

    def inverse(self) -> "DihedralElement":
        if self.reflect:
            return self
        return DihedralElement(-self.k, False, self.n)

    def apply_diagonal(self, d: tuple[int, int]) -> tuple[int, int]:
        a, b = self(d[0]), self(d[1])
        return (a, b) if a < b else (b, a)

    @staticmethod
    def identity(n: int) -> "DihedralElement":
        return DihedralElement(0, False, n)

    @staticmethod
    def all(n: int) -> list["DihedralElement"]:
        return [DihedralElement(k, r, n) for r in (False, True) for k in range(n)]

    def __str__(self) -> str:
        return f"{'r' if self.reflect else 'R'}{self.k}"


@dataclass(frozen=True)
class MapAutomorphism:
    """A cellular self-map of the complex, as a permutation of darts."""

    darts: tuple[int, ...]
    orientation: int  # +1 preserves the rotation, -1 reverses it
    curve_perm: tuple[int, ...]

    def face_map(self, cx: PolygonalComplex) -> tuple[int, ...]:
        edge_sets = {frozenset(cx.dart_edge(d) for d in w): f for f, w in enumerate(cx.faces)}
        return tuple(
            edge_sets[frozenset(cx.dart_edge(self.darts[d]) for d in w)] for w in cx.faces
        )

    def edge_map(self) -> tuple[int, ...]:
        return tuple(self.darts[2 * e] >> 1 for e in range(len(self.darts) // 2))


def _extend(cx: PolygonalComplex, target: int, orient: int) -> MapAutomorphism | None:
    m = len(cx.rho)
    rho = cx.rho
    rho_inv = [0] * m
    for d, r in enumerate(rho):
        rho_inv[r] = d
    img = [-1] * m
    img[0] = target
    stack = [0]
    while stack:
        d = stack.pop()
        a = img[d]
        for src, dst in ((_theta(d), _theta(a)), (rho[d], rho[a] if orient > 0 else rho_inv[a])):
            if img[src] < 0:
                img[src] = dst
                stack.append(src)
            elif img[src] != dst:
                return None
    if sorted(img) != list(range(m)):
        return None
    perm = [-1] * cx.n
    for d in range(m):
        i, j = cx.dart_curve(d), cx.dart_curve(img[d])
        if perm[i] not in (-1, j):
            return None
        perm[i] = j
    return MapAutomorphism(tuple(img), orient, tuple(perm))


@lru_cache(maxsize=None)
def map_automorphisms(g: int) -> tuple[MapAutomorphism, ...]:
    cx = build_tesselation(g)
    out = []
    for orient in (1, -1):
        for t in range(len(cx.rho)):
            a = _extend(cx, t, orient)
            if a is not None:
                out.append(a)
    return tuple(out)


def dihedral_of(perm: Sequence[int]) -> DihedralElement | None:
    n = len(perm)
    for el in DihedralElement.all(n):
        if all(el(i) == perm[i] for i in range(n)):
            return el
    return None


@lru_cache(maxsize=None)
def realising_automorphism(g: int, el: DihedralElement) -> MapAutomorphism:
    """A cellular automorphism inducing ``el`` on the curves; orientation
    preserving ones are preferred."""
    for a in map_automorphisms(g):
        if dihedral_of(a.curve_perm) == el:
            return a
    raise NecklaceError(f"{el} is not realised by a cellular automorphism")


def automorphism_kernel(g: int) -> tuple[MapAutomorphism, ...]:
    """Automorphisms fixing every curve of the necklace."""
    return tuple(a for a in map_automorphisms(g) if all(a.curve_perm[i] == i for i in range(2 * g + 2)))
