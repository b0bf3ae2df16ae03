"""Hyperbolic structures on the necklace surface.

A point of Teichmüller space is described by the geodesic tesselation cut
out by the necklace curves: an angle ``theta_v`` at each crossing (corners of
type 0 get ``theta_v``, type 1 get ``pi - theta_v``) and a length for each of
the ``4g + 4`` edges. The four polygons must close up; see ``closure_residual``.

Isometries are ``SL(2, R)`` matrices acting on the upper half-plane.  Points
are moved to the Poincaré disk (``w = (z - i)/(z + i)``) or Klein disk for
clipping, where polygons are Euclidean convex and geodesics are chords.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .necklace import PolygonalComplex, build_tesselation

RELATION_TOL = 1e-8
AREA_TOL = 1e-9
CLOSURE_TOL = 1e-10


class GeometryError(RuntimeError):
    pass


class NotHyperbolicError(GeometryError):
    """A word evaluated to an elliptic, parabolic or trivial element."""


# --------------------------------------------------------------------------
# SL(2,R) primitives


def translation(l: float) -> np.ndarray:
    """Translation by ``l`` along the imaginary axis (``i -> e^l i``)."""
    h = 0.5 * l
    return np.array([[math.exp(h), 0.0], [0.0, math.exp(-h)]])


def rotation(phi: float) -> np.ndarray:
    """Counter-clockwise rotation by ``phi`` about ``i``."""
    c, s = math.cos(0.5 * phi), math.sin(0.5 * phi)
    return np.array([[c, s], [-s, c]])


HALF_TURN = rotation(math.pi)


def sl2_inverse(m: np.ndarray) -> np.ndarray:
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def mobius(m: np.ndarray, z: complex) -> complex:
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def to_disk(z: complex) -> complex:
    return (z - 1j) / (z + 1j)


def from_disk(w: complex) -> complex:
    return 1j * (1 + w) / (1 - w)


def disk_to_klein(w: complex) -> complex:
    return 2 * w / (1 + abs(w) ** 2)


def klein_to_disk(k: complex) -> complex:
    r2 = abs(k) ** 2
    return k / (1 + math.sqrt(max(0.0, 1 - r2)))


_C = np.array([[1, -1j], [1, 1j]])
_C_INV = np.array([[1j, 1j], [-1, 1]]) / 2j


def to_su11(m: np.ndarray) -> np.ndarray:
    """The same isometry acting on the Poincaré disk."""
    return _C @ m @ _C_INV


def disk_mobius(u: np.ndarray, w: complex) -> complex:
    return (u[0, 0] * w + u[0, 1]) / (u[1, 0] * w + u[1, 1])


def hyperbolic_distance(z1: complex, z2: complex) -> float:
    """Distance between two points of the upper half-plane."""
    # the asinh form keeps full relative accuracy at short distances
    return 2 * math.asinh(abs(z1 - z2) / (2 * math.sqrt(z1.imag * z2.imag)))


def trace_length(m: np.ndarray) -> float:
    """Translation length ``2 arccosh(|tr|/2)`` of a hyperbolic element."""
    tr = abs(m[0, 0] + m[1, 1])
    if tr <= 2 + 1e-10:
        kind = "trivial" if np.allclose(np.abs(m), np.eye(2), atol=1e-10) else (
            "parabolic" if abs(tr - 2) <= 1e-10 else "elliptic")
        raise NotHyperbolicError(f"{kind} element, |trace| = {tr:.12g}")
    return 2 * math.acosh(tr / 2)


def is_identity_pm(m: np.ndarray, tol: float = RELATION_TOL) -> float:
    """Residual of ``m`` against ``+I`` or ``-I``."""
    return min(np.abs(m - np.eye(2)).max(), np.abs(m + np.eye(2)).max())


def axis_endpoints(m: np.ndarray) -> tuple[complex, complex]:
    """Repelling and attracting fixed points of a hyperbolic element, on the unit circle."""
    u = to_su11(m)
    a, b, c, d = u[0, 0], u[0, 1], u[1, 0], u[1, 1]
    # c w^2 + (d - a) w - b = 0
    disc = np.sqrt((d - a) ** 2 + 4 * b * c + 0j)
    roots = [(-(d - a) + disc) / (2 * c), (-(d - a) - disc) / (2 * c)]
    roots = [complex(r) / abs(r) for r in roots]
    # attracting fixed point has derivative modulus < 1
    deriv = [1 / abs(c * r + d) ** 2 for r in roots]
    if deriv[0] < deriv[1]:
        return roots[1], roots[0]
    return roots[0], roots[1]


# --------------------------------------------------------------------------
# polygons


def right_angled_regular_side(n: int) -> float:
    """Side length of the regular right-angled hyperbolic ``n``-gon.

    ``cosh(s/2) = sqrt(2) cos(pi/n)``.
    """
    if n <= 4:
        raise ValueError("a right-angled regular polygon needs at least 5 sides")
    return 2 * math.acosh(math.sqrt(2) * math.cos(math.pi / n))


def semiregular_side(n: int, t: float) -> float:
    """Side of the equilateral ``n``-gon with angles alternating ``pi/2 +- t``.

    Split from the centre into ``n`` triangles with angles ``2pi/n``,
    ``pi/4 + t/2`` and ``pi/4 - t/2``; the dual cosine rule gives
    ``cosh s = 1 + 2 cos(2pi/n) / cos t``.
    """
    if n < 6 or n % 2:
        raise ValueError("n must be even and >= 6")
    if not abs(t) < math.pi / 2:
        raise GeometryError(f"no semiregular {n}-gon for t = {t}")
    return math.acosh(1 + 2 * math.cos(2 * math.pi / n) / math.cos(t))


def _circumradii(n: int, t: float) -> tuple[float, float]:
    th = 2 * math.pi / n
    a, b = math.pi / 4 + t / 2, math.pi / 4 - t / 2
    ra = math.acosh((math.cos(b) + math.cos(th) * math.cos(a)) / (math.sin(th) * math.sin(a)))
    rb = math.acosh((math.cos(a) + math.cos(th) * math.cos(b)) / (math.sin(th) * math.sin(b)))
    return ra, rb


@dataclass(frozen=True)
class HyperbolicPolygon:
    """A convex polygon given by its vertices in the Poincaré disk."""

    vertices: tuple[complex, ...]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def side_lengths(self) -> tuple[float, ...]:
        v = [from_disk(w) for w in self.vertices]
        return tuple(hyperbolic_distance(v[k], v[(k + 1) % self.n]) for k in range(self.n))

    @cached_property
    def angles(self) -> tuple[float, ...]:
        out = []
        for k in range(self.n):
            p = self.vertices[k]
            # move p to the origin; geodesics through 0 are diameters
            q_prev = _recentre(p, self.vertices[k - 1])
            q_next = _recentre(p, self.vertices[(k + 1) % self.n])
            ang = math.atan2((q_prev / q_next).imag, (q_prev / q_next).real)
            out.append(ang % (2 * math.pi))
        return tuple(out)

    @property
    def area(self) -> float:
        return (self.n - 2) * math.pi - sum(self.angles)


def _recentre(p: complex, w: complex) -> complex:
    return (w - p) / (1 - p.conjugate() * w)


def semiregular_polygon(n: int, t: float) -> HyperbolicPolygon:
    """Equilateral ``n``-gon with angle ``pi/2 + t`` at even and ``pi/2 - t``
    at odd vertices, centred at the origin."""
    if n < 6 or n % 2:
        raise ValueError("n must be even and >= 6")
    if not abs(t) < math.pi / 2:
        raise GeometryError(f"no semiregular {n}-gon for t = {t}")
    ra, rb = _circumradii(n, t)
    verts = []
    for k in range(n):
        r = math.tanh((ra if k % 2 == 0 else rb) / 2)
        verts.append(r * complex(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)))
    return HyperbolicPolygon(tuple(verts))


def turtle_frames(lengths: Sequence[float], angles: Sequence[float]) -> tuple[list[np.ndarray], np.ndarray]:
    """Frames ``S_k`` at the start of each side of a polygon walked
    counter-clockwise, plus the closing product (``-I`` for a closed polygon).

    ``angles[k]`` is the interior angle at vertex ``k`` where side ``k`` starts.
    """
    n = len(lengths)
    frames = []
    m = np.eye(2)
    for k in range(n):
        frames.append(m)
        m = m @ translation(lengths[k]) @ rotation(math.pi - angles[(k + 1) % n])
    return frames, m


def closing_defect(close: np.ndarray) -> np.ndarray:
    """Three independent entries that vanish iff the polygon closes."""
    r = close + np.eye(2)
    return np.array([r[0, 1], r[1, 0], r[0, 0] - r[1, 1]])


# --------------------------------------------------------------------------
# tesselated surfaces


@dataclass(frozen=True)
class TesselationParams:
    """Vertex angles (``2g + 2``) and edge lengths (``4g + 4``)."""

    angles: tuple[float, ...]
    lengths: tuple[float, ...]

    def vector(self) -> np.ndarray:
        return np.array(self.angles + self.lengths)

    @staticmethod
    def from_vector(z: Sequence[float], n: int) -> "TesselationParams":
        z = [float(x) for x in z]
        return TesselationParams(tuple(z[:n]), tuple(z[n:]))


def symmetric_params(g: int, t: float) -> TesselationParams:
    """Parameters of the point ``gamma(t)``: equilateral polygons with angles
    ``pi/2 +- t``; ``gamma(0)`` is the right-angled critical point."""
    n = 2 * g + 2
    s = semiregular_side(n, t)
    return TesselationParams((math.pi / 2 + t,) * n, (s,) * (2 * n))


def face_data(cx: PolygonalComplex, params: TesselationParams, f: int) -> tuple[list[float], list[float]]:
    walk = cx.faces[f]
    verts = cx.polygon_vertices(f)
    types = cx.polygon_corner_types(f)
    lengths = [params.lengths[cx.dart_edge(d)] for d in walk]
    angles = [params.angles[v] if c == 0 else math.pi - params.angles[v] for v, c in zip(verts, types)]
    return lengths, angles


def closure_residual(cx: PolygonalComplex, params: TesselationParams) -> np.ndarray:
    """Stacked closing defects of the four polygons (12 numbers)."""
    out = []
    for f in range(cx.num_faces):
        lengths, angles = face_data(cx, params, f)
        out.append(closing_defect(turtle_frames(lengths, angles)[1]))
    return np.concatenate(out)


Crossing = tuple[int, int]  # (face, side): leave ``face`` across its side ``side``


class HyperbolicSurface:
    """A hyperbolic structure on the necklace surface with its holonomy."""

    def __init__(self, cx: PolygonalComplex, params: TesselationParams, check: bool = True):
        self.cx = cx
        self.params = params
        self.frames: list[list[np.ndarray]] = []
        self.face_lengths: list[list[float]] = []
        self.face_angles: list[list[float]] = []
        defect = 0.0
        for f in range(cx.num_faces):
            lengths, angles = face_data(cx, params, f)
            frames, close = turtle_frames(lengths, angles)
            defect = max(defect, float(np.abs(closing_defect(close)).max()))
            self.frames.append(frames)
            self.face_lengths.append(lengths)
            self.face_angles.append(angles)
        self.closure_defect = defect
        if check and defect > 1e-8:
            raise GeometryError(f"polygons do not close (defect {defect:.3e})")
        self.transition = [
            [self._transition(f, k) for k in range(len(cx.faces[f]))] for f in range(cx.num_faces)
        ]

    def _transition(self, f: int, k: int) -> np.ndarray:
        f2, k2 = self.cx.twin(f, k)
        s = self.frames[f][k] @ translation(self.face_lengths[f][k]) @ HALF_TURN
        return s @ sl2_inverse(self.frames[f2][k2])

    # -- holonomy ----------------------------------------------------------

    def holonomy(self, path: Iterable[Crossing]) -> np.ndarray:
        m = np.eye(2)
        for f, k in path:
            m = m @ self.transition[f][k]
        return m

    def length(self, path: Sequence[Crossing]) -> float:
        if not path:
            raise NotHyperbolicError("empty word is the identity")
        return trace_length(self.holonomy(path))

    def curve_lengths(self) -> np.ndarray:
        """Lengths of the necklace curves as sums of their two edges."""
        ls = self.params.lengths
        return np.array([ls[2 * i] + ls[2 * i + 1] for i in range(self.cx.n)])

    def area(self) -> float:
        n = self.cx.n
        return sum((n - 2) * math.pi - sum(a) for a in self.face_angles)

    def polygon(self, f: int) -> HyperbolicPolygon:
        return HyperbolicPolygon(tuple(to_disk(mobius(s, 1j)) for s in self.frames[f]))

    # -- fundamental domain --------------------------------------------------

    @cached_property
    def placements(self) -> dict[int, np.ndarray]:
        """Isometry placing each face's standard polygon in the fundamental domain."""
        cx = self.cx
        out = {cx.star_faces[0]: np.eye(2)}
        stack = [cx.star_faces[0]]
        while stack:
            f = stack.pop()
            for k, d in enumerate(cx.faces[f]):
                if cx.dart_edge(d) not in cx.star_edges:
                    continue
                f2, _ = cx.twin(f, k)
                if f2 not in out:
                    out[f2] = out[f] @ self.transition[f][k]
                    stack.append(f2)
        return out

    def generators(self) -> dict[Crossing, np.ndarray]:
        """Side-pairing isometries of the fundamental domain, keyed by the side
        ``(face, side)`` they glue across."""
        b = self.placements
        out = {}
        for (f, k), (f2, _) in self.cx.side_pairing.items():
            out[(f, k)] = b[f] @ self.transition[f][k] @ sl2_inverse(b[f2])
        return out

    def relation_residuals(self) -> dict[int, float]:
        out = {}
        for v, loop in self.cx.vertex_cycle_words().items():
            out[v] = is_identity_pm(self.holonomy(loop))
        return out

    def to_json(self) -> dict:
        gens = self.generators()
        return {
            "schema": "steinberg.holonomy/1",
            "genus": self.cx.genus,
            "angles": list(self.params.angles),
            "lengths": list(self.params.lengths),
            "generators": [
                {"side": [f, k], "paired_with": list(self.cx.side_pairing[(f, k)]), "matrix": gens[(f, k)].tolist()}
                for (f, k) in sorted(gens)
            ],
            "relation_residuals": {str(v): r for v, r in self.relation_residuals().items()},
            "area": self.area(),
            "closure_defect": self.closure_defect,
        }


def _mp_mul(a, b):
    return (a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3])


def _mp_translation(l):
    h = mpmath.exp(mpmath.mpf(l) / 2)
    return (h, mpmath.mpf(0), mpmath.mpf(0), 1 / h)


def _mp_rotation(phi):
    c, s = mpmath.cos(phi / 2), mpmath.sin(phi / 2)
    return (c, s, -s, c)


def precise_lengths(cx: PolygonalComplex, params: TesselationParams, paths: Sequence[Sequence[Crossing]],
                    dps: int = 40) -> list[float]:
    """Lengths of crossing paths with the holonomy evaluated in extended precision.

    Near a pinched curve the double precision products lose most digits to
    cancellation between entries of size ``exp(l/2)``.
    """
    with mpmath.workdps(dps):
        pi = mpmath.pi
        frames, sides = [], []
        for f in range(cx.num_faces):
            lengths, _ = face_data(cx, params, f)
            verts = cx.polygon_vertices(f)
            types = cx.polygon_corner_types(f)
            angles = [mpmath.mpf(params.angles[v]) if c == 0 else pi - mpmath.mpf(params.angles[v])
                      for v, c in zip(verts, types)]
            m = (mpmath.mpf(1), mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(1))
            fs = []
            for k in range(len(lengths)):
                fs.append(m)
                m = _mp_mul(_mp_mul(m, _mp_translation(lengths[k])), _mp_rotation(pi - angles[(k + 1) % len(lengths)]))
            frames.append(fs)
            sides.append(lengths)
        half = _mp_rotation(pi)
        cache = {}

        def transition(f, k):
            if (f, k) not in cache:
                f2, k2 = cx.twin(f, k)
                a = _mp_mul(_mp_mul(frames[f][k], _mp_translation(sides[f][k])), half)
                b = frames[f2][k2]
                cache[(f, k)] = _mp_mul(a, (b[3], -b[1], -b[2], b[0]))
            return cache[(f, k)]

        out = []
        for path in paths:
            if not path:
                raise NotHyperbolicError("empty word is the identity")
            m = (mpmath.mpf(1), mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(1))
            for f, k in path:
                m = _mp_mul(m, transition(f, k))
            tr = abs(m[0] + m[3])
            if tr <= 2 + mpmath.mpf(10) ** (-20):
                raise NotHyperbolicError(f"non-hyperbolic element, |trace| = {float(tr):.12g}")
            out.append(float(2 * mpmath.acosh(tr / 2)))
        return out


@dataclass
class HolonomyRep:
    """Side-pairing generators, vertex relations and a curve word dictionary."""

    surface: HyperbolicSurface
    generators: dict[Crossing, np.ndarray]
    relations: dict[int, tuple[Crossing, ...]]
    words: dict[str, tuple[Crossing, ...]] = field(default_factory=dict)

    def evaluate(self, word: Sequence[Crossing]) -> np.ndarray:
        return self.surface.holonomy(word)

    def length(self, name_or_word) -> float:
        word = self.words[name_or_word] if isinstance(name_or_word, str) else name_or_word
        return self.surface.length(word)


def geodesic_length(rep: HolonomyRep, word) -> float:
    """Translation length of a word (or named dictionary entry) of ``rep``."""
    return rep.length(word)


def curve_word(cx: PolygonalComplex, i: int) -> tuple[Crossing, ...]:
    """Dual loop running parallel to curve ``i`` on one side."""
    from .curves import boundary_walks  # local: curves imports this module

    walks = boundary_walks(cx, frozenset([i]))
    return walks[0].crossings


def holonomy_from_tesselation(g: int, t: float = 0.0, params: TesselationParams | None = None) -> HolonomyRep:
    cx = build_tesselation(g)
    surf = HyperbolicSurface(cx, params if params is not None else symmetric_params(g, t))
    res = surf.relation_residuals()
    bad = {v: r for v, r in res.items() if r > RELATION_TOL}
    if bad:
        raise GeometryError(f"vertex relations fail: {bad}")
    area = surf.area()
    if abs(area - 2 * math.pi * (2 * g - 2)) > AREA_TOL:
        raise GeometryError(f"area {area} != 2pi(2g-2)")
    rep = HolonomyRep(surf, surf.generators(), cx.vertex_cycle_words())
    for i in range(cx.n):
        rep.words[f"c{i}"] = curve_word(cx, i)
    return rep


@dataclass(frozen=True)
class GammaPoint:
    genus: int
    t: float
    polygon: HyperbolicPolygon
    side: float
    surface: HyperbolicSurface

    @property
    def curve_length(self) -> float:
        return 2 * self.side


def gamma_point(g: int, t: float) -> GammaPoint:
    """The surface ``gamma(t)`` tesselated by four equilateral polygons with
    alternating angles ``pi/2 +- t``."""
    n = 2 * g + 2
    poly = semiregular_polygon(n, t)
    a = poly.angles
    for k in range(0, n, 2):
        # corners meeting across an edge at a vertex form a straight angle
        if abs(a[k] + a[k + 1] - math.pi) > 1e-10:
            raise GeometryError("opposite edges do not meet at angle pi")
    surf = HyperbolicSurface(build_tesselation(g), symmetric_params(g, t))
    return GammaPoint(g, t, poly, semiregular_side(n, t), surf)


@lru_cache(maxsize=None)
def critical_surface(g: int) -> HyperbolicSurface:
    """The right-angled surface ``p = gamma(0)``."""
    return HyperbolicSurface(build_tesselation(g), symmetric_params(g, 0.0))


# --------------------------------------------------------------------------
# Keen collars


def collar_width(l: float) -> float:
    """Half-width ``arcsinh(1/sinh(l/2))`` of the embedded collar."""
    if l <= 0:
        raise ValueError("length must be positive")
    return math.asinh(1 / math.sinh(l / 2))


def collar_diameter(l: float) -> float:
    return 2 * collar_width(l)


def bisect(f, lo: float, hi: float, tol: float = 1e-13, maxiter: int = 400) -> float:
    flo = f(lo)
    if flo * f(hi) > 0:
        raise GeometryError("bisection bracket does not change sign")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def systole_at_p(g: int) -> float:
    return 2 * right_angled_regular_side(2 * g + 2)


def delta_star(g: int, tol: float = 1e-13) -> float:
    """Largest ``delta`` for which the systole at ``p`` is shorter than the
    collar diameter of a geodesic of length ``delta``."""
    ls = systole_at_p(g)
    return bisect(lambda d: collar_diameter(d) - ls, 1e-12, 50.0, tol=tol)


# --------------------------------------------------------------------------
# lengths along gamma


def opposite_pair(g: int, shift: int = 0) -> tuple[int, int]:
    """The curves ``c_1`` and ``c_{g+2}`` (rotated by ``shift``)."""
    n = 2 * g + 2
    return (1 + shift) % n, (g + 2 + shift) % n


def separating_lengths(g: int, t: float = 0.0, shift: int = 0) -> list[float]:
    """Lengths at ``gamma(t)`` of the components of ``m(C - {c_1, c_{g+2}})``.

    For even genus this is a single separating curve; for odd genus the
    multicurve has two non-separating components that separate jointly.
    """
    from .curves import boundary_multicurve

    n = 2 * g + 2
    m = boundary_multicurve(g, set(range(n)) - set(opposite_pair(g, shift)))
    surf = critical_surface(g) if t == 0 else HyperbolicSurface(build_tesselation(g), symmetric_params(g, t))
    return [surf.length(c.path) for c in m]


def separating_length_at_p(g: int, shift: int = 0) -> float:
    """Length at ``p`` of the multicurve ``m(C - {c_1, c_{g+2}})`` (of each
    component; they are congruent)."""
    ls = separating_lengths(g, 0.0, shift)
    if max(ls) - min(ls) > 1e-9:
        raise GeometryError(f"components have different lengths {ls}")
    return ls[0]


@dataclass
class LengthProfile:
    genus: int
    rows: list[tuple[float, float, float, float]]  # t, curve (formula), curve (trace), separating

    def checks(self, tol: float = 1e-9) -> dict[str, bool]:
        ts = [r[0] for r in self.rows]
        ls = {round(r[0], 12): r for r in self.rows}
        even = all(
            abs(r[1] - ls[round(-r[0], 12)][1]) <= tol and abs(r[3] - ls[round(-r[0], 12)][3]) <= 1e-8
            for r in self.rows if round(-r[0], 12) in ls
        )
        i0 = min(range(len(ts)), key=lambda i: abs(ts[i]))
        at_zero = abs(ts[i0]) < 1e-12
        minimum = at_zero and all(r[1] >= self.rows[i0][1] - tol for r in self.rows)
        convex = (at_zero and 0 < i0 < len(ts) - 1
                  and self.rows[i0 - 1][1] - 2 * self.rows[i0][1] + self.rows[i0 + 1][1] > 0)
        agree = all(abs(r[1] - r[2]) <= 1e-8 for r in self.rows)
        return {"even": even, "minimum_at_zero": minimum, "convex_at_zero": convex,
                "formula_matches_trace": agree}

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["t", "curve_length", "curve_length_trace", "separating_length"])
        for r in self.rows:
            w.writerow([f"{x:.15g}" for x in r])
        return out.getvalue()


def t_grid(start: float = -0.4, stop: float = 0.4, step: float = 0.02) -> list[float]:
    k = int(round((stop - start) / step))
    return [round(start + i * step, 12) for i in range(k + 1)]


def length_profile(g: int, ts: Iterable[float] | None = None) -> LengthProfile:
    from .curves import boundary_multicurve

    ts = t_grid() if ts is None else list(ts)
    n = 2 * g + 2
    cx = build_tesselation(g)
    m = boundary_multicurve(g, set(range(n)) - set(opposite_pair(g)))
    word = m.components[0].path
    rows = []
    for t in ts:
        surf = HyperbolicSurface(cx, symmetric_params(g, t))
        side = semiregular_side(n, t)
        trace = surf.length(curve_word(cx, 0))
        rows.append((t, 2 * side, trace, surf.length(word)))
    return LengthProfile(g, rows)


# --------------------------------------------------------------------------
# pictures


def _arc_path(p: complex, q: complex, scale: float) -> str:
    """SVG path of the geodesic segment from ``p`` to ``q`` in the disk."""
    def xy(z):
        return f"{scale * z.real:.4f},{-scale * z.imag:.4f}"

    cross = p.real * q.imag - p.imag * q.real
    if abs(cross) < 1e-9:
        return f"M{xy(p)} L{xy(q)}"
    # circle through p, q orthogonal to the unit circle: |c|^2 = r^2 + 1
    a = np.array([[p.real, p.imag], [q.real, q.imag]])
    b = np.array([(abs(p) ** 2 + 1) / 2, (abs(q) ** 2 + 1) / 2])
    cx_, cy_ = np.linalg.solve(a, b)
    r = math.sqrt(cx_ ** 2 + cy_ ** 2 - 1)
    sweep = 0 if cross > 0 else 1
    return f"M{xy(p)} A{scale * r:.4f},{scale * r:.4f} 0 0,{sweep} {xy(q)}"


def fundamental_domain_svg(g: int, t: float = 0.0, size: int = 600) -> str:
    """The four tiles around ``v_0`` in the disk, edges coloured by curve."""
    surf = HyperbolicSurface(build_tesselation(g), symmetric_params(g, t))
    cx = surf.cx
    scale = size / 2 - 10
    palette = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
               "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"]
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="{-size / 2} {-size / 2} {size} {size}">',
             f'<circle cx="0" cy="0" r="{scale}" fill="none" stroke="#999"/>']
    for f, b in surf.placements.items():
        verts = [to_disk(mobius(b @ s, 1j)) for s in surf.frames[f]]
        m = len(verts)
        for k in range(m):
            c = cx.edge_curve(cx.side_edge(f, k))
            colour = palette[c % len(palette)]
            parts.append(f'<path d="{_arc_path(verts[k], verts[(k + 1) % m], scale)}" fill="none" '
                         f'stroke="{colour}" stroke-width="2"><title>c{c}</title></path>')
    parts.append("</svg>")
    return "\n".join(parts)
