"""Length functions on Teichmüller space near the critical point ``p``.

A point is given by ``z = (theta_v, l_e)``: one angle per crossing of the
necklace and one length per edge of the tesselation, subject to the four
polygons closing up (three equations each).  This leaves a ``6g - 6``
dimensional manifold, parametrised locally by charts: a base point plus a
tangent displacement, pulled back onto the manifold by Newton's method along
the normal directions.  Necklace curves are geodesics made of two edges, so
``L(c_i) = l_{2i} + l_{2i+1}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import linprog, nnls

from .hyperbolic import (
    GeometryError,
    HolonomyRep,
    HyperbolicSurface,
    NotHyperbolicError,
    TesselationParams,
    holonomy_from_tesselation,
    precise_lengths,
    semiregular_side,
    symmetric_params,
)
from .necklace import DihedralElement, PolygonalComplex, build_tesselation, realising_automorphism

FD_STEP = 1e-5


class ChartError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# closure equations


def _mul(a, b):
    return (a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3])


_I = (1.0, 0.0, 0.0, 1.0)


class ClosureSystem:
    """The 12 closing equations of the four polygons as a function of ``z``."""

    def __init__(self, cx: PolygonalComplex):
        self.cx = cx
        self.n = cx.n
        self.dim = 3 * cx.n
        self.faces = []
        for f in range(cx.num_faces):
            walk = cx.faces[f]
            m = len(walk)
            verts = cx.polygon_vertices(f)
            types = cx.polygon_corner_types(f)
            sides = []
            for k in range(m):
                j = (k + 1) % m
                sides.append((self.n + cx.dart_edge(walk[k]), verts[j], 1.0 if types[j] == 0 else -1.0))
            self.faces.append(sides)

    def _angle(self, z, v, sgn):
        return z[v] if sgn > 0 else math.pi - z[v]

    def _factors(self, z):
        out = []
        for sides in self.faces:
            fs = []
            for li, v, sgn in sides:
                e = math.exp(0.5 * z[li])
                a = self._angle(z, v, sgn)
                # T(l) R(pi - a): cos((pi-a)/2) = sin(a/2)
                c, s = math.sin(0.5 * a), math.cos(0.5 * a)
                fs.append((e * c, e * s, -s / e, c / e))
            out.append(fs)
        return out

    def residual(self, z) -> np.ndarray:
        out = []
        for fs in self._factors(z):
            m = _I
            for f in fs:
                m = _mul(m, f)
            out += [m[1], m[2], m[0] - m[3]]
        return np.array(out)

    def jacobian(self, z) -> np.ndarray:
        jac = np.zeros((len(self.faces) * 3, self.dim))
        for fi, (sides, fs) in enumerate(zip(self.faces, self._factors(z))):
            m = len(fs)
            pre = [_I]
            for f in fs:
                pre.append(_mul(pre[-1], f))
            suf = [_I] * (m + 1)
            for k in range(m - 1, -1, -1):
                suf[k] = _mul(fs[k], suf[k + 1])
            for k, (li, v, sgn) in enumerate(sides):
                a, b, c, d = fs[k]
                dl = _mul(_mul(pre[k], (0.5 * a, 0.5 * b, -0.5 * c, -0.5 * d)), suf[k + 1])
                # d/d(alpha) of R(pi - alpha) is -R J / 2 with J = [[0,1],[-1,0]]
                da = _mul(_mul(pre[k], (0.5 * b, -0.5 * a, 0.5 * d, -0.5 * c)), suf[k + 1])
                r = 3 * fi
                jac[r, li] += dl[1]
                jac[r + 1, li] += dl[2]
                jac[r + 2, li] += dl[0] - dl[3]
                jac[r, v] += sgn * da[1]
                jac[r + 1, v] += sgn * da[2]
                jac[r + 2, v] += sgn * (da[0] - da[3])
        return jac

    def valid(self, z) -> bool:
        n = self.n
        return all(0 < z[i] < math.pi for i in range(n)) and all(x > 0 for x in z[n:])


@lru_cache(maxsize=None)
def closure_system(g: int) -> ClosureSystem:
    return ClosureSystem(build_tesselation(g))


def sym_vector(g: int, t: float) -> np.ndarray:
    p = symmetric_params(g, t)
    return np.array(p.angles + p.lengths)


# --------------------------------------------------------------------------
# charts


class Chart:
    """``y -> z`` with ``z = base(y) + N lam`` solving the closure equations."""

    def __init__(self, g: int, base: Callable[[np.ndarray], np.ndarray], normal: np.ndarray, dim: int,
                 tangent: np.ndarray | None = None, centre: np.ndarray | None = None, name: str = ""):
        self.g = g
        self.sys = closure_system(g)
        self.base = base
        self.normal = normal
        self.dim = dim
        self.tangent = tangent
        self.centre = centre
        self.name = name
        self._lam = np.zeros(normal.shape[1])

    def embed(self, y: Sequence[float], tol: float = 1e-13, maxiter: int = 40) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        try:
            b = self.base(y)
        except GeometryError as exc:
            raise ChartError(str(exc)) from None
        sys = self.sys
        for lam in (self._lam.copy(), np.zeros_like(self._lam)):
            err = prev = math.inf
            polish = 0
            for _ in range(maxiter):
                z = b + self.normal @ lam
                if not sys.valid(z):
                    break
                r = sys.residual(z)
                err = np.abs(r).max()
                # quadratic convergence stalls at the rounding floor of the residual
                if err < tol or (err < 1e-9 and err > 0.25 * prev):
                    polish += 1
                    if polish > 1:
                        self._lam = lam
                        return z
                elif err > 1e3 * prev:
                    break
                prev = min(prev, err)
                lam = lam - np.linalg.solve(sys.jacobian(z) @ self.normal, r)
                if not np.all(np.isfinite(lam)):
                    break
            if err < 1e-10:
                self._lam = lam
                return z
        raise ChartError(f"closure equations not solved (residual {err:.2e})")

    def point(self, y: Sequence[float]) -> "ChartPoint":
        return ChartPoint(self, tuple(float(v) for v in y))

    def coords_of(self, z: np.ndarray) -> np.ndarray:
        """Inverse of a tangent chart (``T^T (z - centre)``)."""
        if self.tangent is None:
            raise ChartError("chart has no linear inverse")
        return self.tangent.T @ (z - self.centre)


def _split(jac: np.ndarray, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    u, s, vt = np.linalg.svd(jac)
    rank = int((s > tol * s[0]).sum())
    if rank != jac.shape[0]:
        raise ChartError(f"closure equations degenerate (rank {rank})")
    return vt[:rank].T, vt[rank:].T


@lru_cache(maxsize=None)
def symmetric_chart(g: int) -> Chart:
    """Chart around ``p`` whose first coordinate is the path ``gamma(t)``:
    ``chart(t, 0, ..., 0) = gamma(t)``."""
    sys = closure_system(g)
    z0 = sym_vector(g, 0.0)
    normal, tangent = _split(sys.jacobian(z0))
    d = (sym_vector(g, 1e-4) - sym_vector(g, -1e-4)) / 2e-4
    d = tangent @ (tangent.T @ d)
    d /= np.linalg.norm(d)
    rest = tangent - np.outer(d, d @ tangent)
    u, s, _ = np.linalg.svd(rest, full_matrices=False)
    others = u[:, : tangent.shape[1] - 1]

    def base(y):
        return sym_vector(g, y[0]) + others @ y[1:]

    return Chart(g, base, normal, tangent.shape[1], name="symmetric")


def tangent_chart(g: int, z: np.ndarray) -> Chart:
    """Chart at an arbitrary point, coordinates along an orthonormal tangent basis."""
    sys = closure_system(g)
    normal, tangent = _split(sys.jacobian(z))
    z = np.array(z, dtype=float)
    return Chart(g, lambda y: z + tangent @ y, normal, tangent.shape[1], tangent, z, name="tangent")


@dataclass(frozen=True)
class ChartPoint:
    chart: Chart
    coords: tuple[float, ...]

    @cached_property
    def z(self) -> np.ndarray:
        return self.chart.embed(np.array(self.coords))

    @property
    def genus(self) -> int:
        return self.chart.g

    @property
    def params(self) -> TesselationParams:
        return TesselationParams.from_vector(self.z, 2 * self.genus + 2)

    def surface(self) -> HyperbolicSurface:
        return HyperbolicSurface(build_tesselation(self.genus), self.params)

    def holonomy(self) -> HolonomyRep:
        return holonomy_from_tesselation(self.genus, params=self.params)

    def recentred(self) -> "ChartPoint":
        return tangent_chart(self.genus, self.z).point(np.zeros(self.chart.dim))


def critical_point(g: int) -> ChartPoint:
    return symmetric_chart(g).point(np.zeros(6 * g - 6))


def gamma_chart_point(g: int, t: float) -> ChartPoint:
    y = np.zeros(6 * g - 6)
    y[0] = t
    return symmetric_chart(g).point(y)


def edge_curve_lengths(g: int, z: np.ndarray) -> np.ndarray:
    n = 2 * g + 2
    l = np.asarray(z[n:])
    return l[0::2] + l[1::2]


def curve_lengths(x: ChartPoint, method: str = "trace") -> np.ndarray:
    """Lengths of the necklace curves at ``x``."""
    if method == "edges":
        return edge_curve_lengths(x.genus, x.z)
    from .hyperbolic import curve_word

    surf = x.surface()
    cx = surf.cx
    return np.array([surf.length(curve_word(cx, i)) for i in range(cx.n)])


def act(el: DihedralElement, x: ChartPoint) -> ChartPoint:
    """Image of ``x`` under the isometry class realising ``el``: the structure
    in which the image tiles carry the original shapes."""
    g = x.genus
    cx = build_tesselation(g)
    aut = realising_automorphism(g, el)
    n = cx.n
    z = x.z
    out = np.empty_like(z)
    emap = aut.edge_map()
    for e in range(cx.num_edges):
        out[n + emap[e]] = z[n + e]
    rho_inv = [0] * len(cx.rho)
    for d, r in enumerate(cx.rho):
        rho_inv[r] = d
    for d in range(len(cx.rho)):
        v = cx.dart_vertex(d)
        a = aut.darts[d]
        # the corner (d, rho d) goes to (a, rho a) or, reversed, to (rho^-1 a, a)
        dst = a if aut.orientation > 0 else rho_inv[a]
        w = cx.dart_vertex(a)
        out[w] = z[v] if cx.corner_type[d] == cx.corner_type[dst] else math.pi - z[v]
    if np.abs(closure_system(g).residual(out)).max() > 1e-9:
        raise ChartError("relabelled parameters do not close")
    return tangent_chart(g, out).point(np.zeros(x.chart.dim))


# --------------------------------------------------------------------------
# length functionals


@dataclass(frozen=True)
class LengthFunctional:
    """``sum a_i L(c_i)`` over a subset of the necklace."""

    genus: int
    curves: tuple[int, ...]
    coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.curves) != len(self.coeffs):
            raise ValueError("one coefficient per curve")
        if any(not a > 0 for a in self.coeffs):
            raise ValueError("coefficients must be strictly positive")

    @staticmethod
    def uniform(g: int, curves: Iterable[int] | None = None) -> "LengthFunctional":
        cs = tuple(range(2 * g + 2)) if curves is None else tuple(curves)
        return LengthFunctional(g, cs, (1.0,) * len(cs))

    def scaled(self, s: float) -> "LengthFunctional":
        return LengthFunctional(self.genus, self.curves, tuple(s * a for a in self.coeffs))

    def fills(self) -> bool:
        from .curves import fills

        return fills(self.genus, self.curves)

    def __call__(self, z: np.ndarray) -> float:
        ls = edge_curve_lengths(self.genus, z)
        return float(sum(a * ls[i] for i, a in zip(self.curves, self.coeffs)))


# --------------------------------------------------------------------------
# descent


@dataclass
class MinimizeResult:
    point: ChartPoint
    value: float
    grad_norm: float
    iterations: int
    converged: bool
    status: str
    recentres: int = 0
    history: list = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "converged": self.converged,
            "value": self.value,
            "grad_norm": self.grad_norm,
            "iterations": self.iterations,
            "recentres": self.recentres,
            "trajectory": {"start": self.history[0] if self.history else None,
                           "end": self.history[-1] if self.history else None,
                           "samples": len(self.history)},
        }


def _safe(fun, chart, y):
    try:
        return fun(chart.embed(y))
    except ChartError:
        return math.inf


def fd_gradient(fun: Callable[[np.ndarray], float], chart: Chart, y: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    """Central differences with step ``h`` relative to the coordinate scale."""
    g = np.empty(len(y))
    for i in range(len(y)):
        hi = h * max(1.0, abs(y[i]))
        e = np.zeros(len(y))
        e[i] = hi
        g[i] = (_safe(fun, chart, y + e) - _safe(fun, chart, y - e)) / (2 * hi)
    return g


def descend(fun: Callable[[np.ndarray], float], x0: ChartPoint, gtol: float = 1e-8, maxiter: int = 100000,
            recentre_radius: float = 0.5, watch: Callable[[np.ndarray], str | None] | None = None) -> MinimizeResult:
    """Gradient descent with Armijo backtracking (``c = 1e-4``, halving)."""
    chart = x0.chart
    y = np.array(x0.coords, dtype=float)
    f = _safe(fun, chart, y)
    if not math.isfinite(f):
        raise ChartError("starting point outside the chart")
    step = 1.0
    trusted = 0.0
    prev = None
    recentres = 0
    history = [f]
    gn = math.inf
    for it in range(1, maxiter + 1):
        grad = fd_gradient(fun, chart, y)
        gn = float(np.linalg.norm(grad))
        if not np.all(np.isfinite(grad)):
            return MinimizeResult(chart.point(y), f, gn, it, False, "diverged: left the parameter domain",
                                  recentres, history)
        if gn < gtol:
            return MinimizeResult(chart.point(y), f, gn, it, True, "converged", recentres, history)
        # Barzilai-Borwein trial step, then Armijo backtracking
        if prev is not None and (curv := float((y - prev[0]) @ (grad - prev[1]))) > 0:
            step = min(float((y - prev[0]) @ (y - prev[0])) / curv, 1e3)
        else:
            step = min(step * 2.0, 1e3)
        prev = (y.copy(), grad)
        noise = 1e-13 * max(1.0, abs(f))
        while True:
            y_new = y - step * grad
            f_new = _safe(fun, chart, y_new)
            drop = 1e-4 * step * gn * gn
            if f_new <= f - drop:
                if f - f_new > noise:
                    trusted = step
                break
            # below the resolution of f keep descending with a verified step
            if drop < noise and step <= 0.5 * trusted and f_new <= f + noise:
                break
            step *= 0.5
            if step < 1e-20:
                return MinimizeResult(chart.point(y), f, gn, it, False, "line search failed", recentres, history)
        y, f = y_new, f_new
        if it % 50 == 0:
            history.append(f)
        if watch is not None:
            try:
                msg = watch(chart.embed(y))
            except ChartError:
                msg = "diverged: left the parameter domain"
            if msg:
                return MinimizeResult(chart.point(y), f, gn, it, False, msg, recentres, history)
        if np.linalg.norm(y) > recentre_radius:
            z = chart.embed(y)
            chart = tangent_chart(chart.g, z)
            y = np.zeros(chart.dim)
            prev = None
            recentres += 1
    return MinimizeResult(chart.point(y), f, gn, maxiter, False, "iteration cap reached", recentres, history)


def minimize(F: LengthFunctional, x0: ChartPoint | None = None, gtol: float = 1e-8, maxiter: int = 100000,
             pinch: float = 1e-3) -> MinimizeResult:
    """Minimise ``F``; a support curve shrinking below ``pinch`` is reported as
    divergence towards the boundary of Teichmüller space."""
    g = F.genus
    if x0 is None:
        x0 = critical_point(g)

    def watch(z):
        ls = edge_curve_lengths(g, z)
        short = [i for i in F.curves if ls[i] < pinch]
        if short:
            return f"diverged: no interior minimum (curves {short} pinching)"
        return None

    return descend(F, x0, gtol, maxiter, watch=watch)


def multistart(F: LengthFunctional, starts: int = 20, seed: int = 0, radius: float = 0.2) -> list[MinimizeResult]:
    """Minimise ``F`` from seeded uniform starts in a box of half-width
    ``radius`` around ``p`` in the symmetric chart."""
    rng = np.random.default_rng(seed)
    chart = symmetric_chart(F.genus)
    return [minimize(F, chart.point(rng.uniform(-radius, radius, chart.dim))) for _ in range(starts)]


# --------------------------------------------------------------------------
# first-order tests


def length_gradients(x: ChartPoint, curves: Sequence[int] | None = None) -> np.ndarray:
    g = x.genus
    cs = list(range(2 * g + 2)) if curves is None else list(curves)
    chart = x.chart
    y = np.array(x.coords, dtype=float)
    out = []
    for i in cs:
        out.append(fd_gradient(lambda z, i=i: float(edge_curve_lengths(g, z)[i]), chart, y))
    return np.array(out)


@dataclass
class Membership:
    member: bool
    residual: float
    coefficients: np.ndarray
    min_coefficient: float

    def to_json(self) -> dict:
        return {"member": self.member, "residual": self.residual,
                "coefficients": self.coefficients.tolist(), "min_coefficient": self.min_coefficient}


def min_membership(x: ChartPoint, curves: Sequence[int] | None = None, tol: float = 1e-6) -> Membership:
    """Whether ``0`` is a strictly positive combination of the length gradients."""
    grads = length_gradients(x, curves)
    k = grads.shape[0]
    # nonnegative least squares with sum(a) = 1 enforced by a heavy row
    w = 1e3
    A = np.vstack([grads.T, w * np.ones((1, k))])
    b = np.concatenate([np.zeros(grads.shape[1]), [w]])
    a, _ = nnls(A, b)
    a = a / a.sum()
    residual = float(np.linalg.norm(grads.T @ a))
    # most positive combination among those with residual within tol
    d = grads.shape[1]
    c = np.zeros(k + 1)
    c[-1] = -1.0
    A_ub = np.vstack([
        np.hstack([grads.T, np.zeros((d, 1))]),
        np.hstack([-grads.T, np.zeros((d, 1))]),
        np.hstack([-np.eye(k), np.ones((k, 1))]),
    ])
    slack = max(tol, 2 * residual) / math.sqrt(d)
    b_ub = np.concatenate([np.full(2 * d, slack), np.zeros(k)])
    A_eq = np.hstack([np.ones((1, k)), np.zeros((1, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0, None)] * k + [(None, None)], method="highs")
    if res.success:
        coeffs = res.x[:k]
        mn = float(res.x[-1])
        residual = min(residual, float(np.linalg.norm(grads.T @ coeffs))) if mn > 0 else residual
    else:
        coeffs, mn = a, float(a.min())
    return Membership(residual < tol and mn > 0, residual, coeffs, mn)


def length_jacobian(x: ChartPoint, curves: Sequence[int] | None = None) -> np.ndarray:
    return length_gradients(x, curves)


def jacobian_rank(x: ChartPoint, curves: Sequence[int] | None = None, tol: float = 1e-6,
                  scale: Sequence[float] | None = None) -> tuple[int, np.ndarray]:
    jac = length_jacobian(x, curves)
    if scale is not None:
        jac = np.asarray(scale)[:, None] * jac
    s = np.linalg.svd(jac, compute_uv=False)
    return int((s > tol * s[0]).sum()), s


def verify_min_equality_sample(samples: int = 10, seed: int = 1, pair: tuple[int, int] = (1, 2),
                               tol: float = 1e-5, g: int = 2) -> dict:
    """Minimise random positive weightings of ``C`` minus an adjacent pair and
    test each minimiser for membership in ``Min(C)``."""
    rng = np.random.default_rng(seed)
    n = 2 * g + 2
    support = tuple(i for i in range(n) if i not in pair)
    rows = []
    for s in range(samples):
        a = rng.uniform(0.5, 1.5, len(support)) if s else np.ones(len(support))
        F = LengthFunctional(g, support, tuple(float(v) for v in a))
        res = minimize(F)
        mem = min_membership(res.point, None, tol)
        rows.append({"weights": a.tolist(), "status": res.status, "grad_norm": res.grad_norm,
                     "member": mem.member, "residual": mem.residual, "min_coefficient": mem.min_coefficient})
    return {
        "schema": "steinberg.min_equality/1",
        "deleted": list(pair),
        "samples": rows,
        "pass_rate": sum(r["member"] and r["status"] == "converged" for r in rows) / len(rows),
        "worst_residual": max(r["residual"] for r in rows),
    }


# --------------------------------------------------------------------------
# systoles and admissible points


@lru_cache(maxsize=None)
def word_dictionary(g: int) -> tuple:
    """The necklace curves and every class in the image of the diagonal map."""
    from .curves import boundary_multicurve
    from .sphere import build_phi

    n = 2 * g + 2
    K = build_phi(g)
    seen = {}
    for i in range(n):
        for c in boundary_multicurve(g, [i]):
            seen.setdefault(c.key, c)
    for d in K.faces:
        for f in K.faces[d]:
            deleted = {v for x in f for v in K.labels[x]}
            for c in boundary_multicurve(g, set(range(n)) - deleted):
                seen.setdefault(c.key, c)
    return tuple(sorted(seen.values(), key=lambda c: c.signature()))


def dictionary_lengths(x: ChartPoint | np.ndarray, g: int | None = None, precise: bool = True) -> np.ndarray:
    """Lengths of the dictionary classes; ``precise`` evaluates the holonomy in
    extended precision, which keeps pinched curves accurate."""
    if isinstance(x, ChartPoint):
        g, z = x.genus, x.z
    else:
        z = x
    cx = build_tesselation(g)
    params = TesselationParams.from_vector(z, 2 * g + 2)
    words = word_dictionary(g)
    if precise:
        try:
            return np.array(precise_lengths(cx, params, [c.path for c in words]))
        except NotHyperbolicError:
            pass
    surf = HyperbolicSurface(cx, params, check=False)
    out = []
    for c in words:
        try:
            out.append(surf.length(c.path))
        except NotHyperbolicError:
            out.append(0.0)
    return np.array(out)


def systole_set(x: ChartPoint, tol: float = 1e-6) -> list:
    """Dictionary classes within ``tol`` of the shortest dictionary length."""
    ls = dictionary_lengths(x)
    m = ls.min()
    return [c for c, l in zip(word_dictionary(x.genus), ls) if l <= m + tol]


@dataclass
class AdmissibleResult:
    point: ChartPoint
    status: str
    converged: bool
    objective: float
    systole_length: float
    systoles: list
    contained: bool
    target: list
    stages: list

    def to_json(self) -> dict:
        return {
            "schema": "steinberg.admissible/1",
            "status": self.status,
            "converged": self.converged,
            "objective": self.objective,
            "systole_length": self.systole_length,
            "systoles": [c.label() for c in self.systoles],
            "boundary_multicurve": [c.label() for c in self.target],
            "contained": self.contained,
            "stages": self.stages,
            "note": "systoles are relative to a finite dictionary of curves",
        }


def locate_admissible_vertex(deleted: Sequence[int], delta: float = 0.05, g: int = 2, mu: float = 20.0,
                             outer: int = 30, gtol: float = 1e-7, maxiter: int = 3000,
                             tol: float = 1e-3) -> AdmissibleResult:
    """Minimise ``L(C')`` subject to every dictionary length staying ``>= delta``.

    Augmented Lagrangian penalty: the inner problems are plain descents, the
    multipliers are updated between them, and ``mu`` only grows when the
    violation stalls.
    """
    from .curves import boundary_multicurve

    n = 2 * g + 2
    support = tuple(i for i in range(n) if i not in set(deleted))
    target = list(boundary_multicurve(g, support))
    F = LengthFunctional.uniform(g, support)
    words = word_dictionary(g)
    lam = np.zeros(len(words))

    def penalised(mu, lam):
        def fun(z):
            ls = dictionary_lengths(z, g)
            if not ls.min() > 0:
                return math.inf
            shifted = np.maximum(0.0, lam - mu * (ls - delta))
            return F(z) + float((shifted ** 2 - lam ** 2).sum()) / (2 * mu)
        return fun

    x = critical_point(g)
    stages = []
    res = None
    violation = math.inf
    for _ in range(outer):
        res = descend(penalised(mu, lam), x, gtol=gtol, maxiter=maxiter)
        x = res.point
        ls = dictionary_lengths(x)
        new_violation = float(np.maximum(0.0, delta - ls).max())
        lam = np.maximum(0.0, lam - mu * (ls - delta))
        stages.append({"mu": mu, "status": res.status, "iterations": res.iterations, "grad_norm": res.grad_norm,
                       "systole": float(ls.min()), "violation": new_violation, "objective": F(x.z)})
        if res.converged and new_violation < 1e-8 and abs(ls.min() - delta) < 1e-6:
            break
        if new_violation > 0.25 * violation:
            mu *= 4.0
        violation = new_violation
    ls = dictionary_lengths(x)
    sys_len = float(ls.min())
    systoles = systole_set(x, tol)
    keys = {c.key for c in target}
    contained = all(c.key in keys for c in systoles)
    converged = bool(res is not None and res.converged and abs(sys_len - delta) < tol)
    status = "converged" if converged else f"not converged ({res.status if res else 'no run'})"
    return AdmissibleResult(x, status, converged, F(x.z), sys_len, systoles, contained, target, stages)
