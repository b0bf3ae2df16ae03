"""From the sphere of non-crossing diagonals to multicurves.

A set ``D`` of non-crossing diagonals of the ``(2g+2)``-gon, whose vertices
are the necklace curves, names the curves ``c(D)`` at the diagonals' ends.
Its image is the boundary multicurve of the remaining curves.  The map is
applied to the barycentric subdivision of ``Phi_g`` (a face goes to its
multicurve), which turns the fundamental cycle of ``Phi_g`` into a chain of
flags of multicurves.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Iterable, Sequence

from .curves import CurveClass, Multicurve, boundary_multicurve, intersection_number, relabel
from .necklace import DihedralElement
from .sphere import (
    Diagonal,
    IntegerChain,
    SimplicialComplex,
    build_phi,
    fundamental_cycle,
    make_diagonal,
    smith_normal_form,
)


@dataclass
class Report:
    name: str
    genus: int
    checks: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, **witness) -> None:
        self.failures.append(witness)

    def to_json(self) -> dict:
        return {
            "schema": "steinberg.report/1",
            "name": self.name,
            "genus": self.genus,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures[:50],
            "failure_count": len(self.failures),
            "details": self.details,
        }


def deleted_curves(D: Iterable[Sequence[int]]) -> frozenset[int]:
    return frozenset(v for d in D for v in d)


@lru_cache(maxsize=None)
def _q(g: int, deleted: frozenset[int]) -> Multicurve:
    n = 2 * g + 2
    return boundary_multicurve(g, frozenset(range(n)) - deleted)


def q_vertex(g: int, D: Iterable[Sequence[int]]) -> Multicurve:
    """Boundary multicurve of the necklace curves not touched by ``D``."""
    D = list(D)
    if not D:
        raise ValueError("empty diagonal set")
    n = 2 * g + 2
    for d in D:
        make_diagonal(d[0], d[1], n)
    return _q(g, deleted_curves(D))


def _face_diagonals(K: SimplicialComplex, face: Sequence[int]) -> list[Diagonal]:
    return [K.labels[v] for v in face]


MODELS = ("union", "literal")


def q_face(g: int, D: Iterable[Sequence[int]], model: str = "union") -> Multicurve:
    """Multicurve attached to the barycentre of the face ``D``.

    ``literal`` deletes every curve touched by ``D`` at once; ``union`` takes
    the union of the vertex images, which is monotone in ``D`` by construction.
    """
    D = list(D)
    if model == "literal":
        return q_vertex(g, D)
    if model != "union":
        raise ValueError(f"unknown model {model!r}")
    comps = {}
    for d in D:
        for c in q_vertex(g, [d]):
            comps.setdefault(c.key, c)
    return Multicurve(g, tuple(comps.values()))


def verify_flag_structure(g: int, model: str = "literal") -> Report:
    """Monotonicity ``q(D1) ⊆ q(D2)`` for all faces ``D1 ⊂ D2`` and pairwise
    disjointness of the vertex images of every face."""
    K = build_phi(g)
    rep = Report(f"flag_structure[{model}]", g)
    faces = [f for d in K.faces for f in K.faces[d]]
    images = {f: q_face(g, _face_diagonals(K, f), model) for f in faces}
    pairs = 0
    by_dim: dict[str, int] = {}
    for f in faces:
        for k in range(1, len(f) + 1):
            for sub in combinations(f, k):
                pairs += 1
                if not images[sub].issubset(images[f]):
                    tag = f"{k - 1}<{len(f) - 1}"
                    by_dim[tag] = by_dim.get(tag, 0) + 1
                    rep.fail(kind="monotonicity", small=[str(K.labels[v]) for v in sub],
                             large=[str(K.labels[v]) for v in f],
                             small_image=images[sub].labels(), large_image=images[f].labels())
    for a, b in K.faces.get(1, []):
        ma, mb = images[(a,)], images[(b,)]
        if not ma.disjoint_from(mb):
            rep.fail(kind="disjointness", edge=[str(K.labels[a]), str(K.labels[b])])
    rep.checks = pairs + len(K.faces.get(1, []))
    rep.details = {"model": model, "face_pairs": pairs, "edges": len(K.faces.get(1, [])),
                   "monotonicity_failures_by_dimension": by_dim}
    return rep


# --------------------------------------------------------------------------
# push-forward


def _perm_sign(p: Sequence[int]) -> int:
    p = list(p)
    s = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def _sort_with_sign(items: Sequence[int]) -> tuple[tuple[int, ...], int]:
    order = sorted(range(len(items)), key=lambda i: items[i])
    return tuple(items[i] for i in order), _perm_sign(order)


@dataclass
class ImageComplex:
    genus: int
    vertices: list[Multicurve]
    chain: IntegerChain
    complex: SimplicialComplex | None

    def vertex_index(self) -> dict[frozenset, int]:
        return {m.keys: i for i, m in enumerate(self.vertices)}

    def to_json(self) -> dict:
        return {
            "schema": "steinberg.image_complex/1",
            "genus": self.genus,
            "vertices": [m.labels() for m in self.vertices],
            "chain": self.chain.to_json(),
        }


def _order_key(m: Multicurve):
    return (len(m), m.signature())


def _image_vertices(g: int, model: str = "union") -> list[Multicurve]:
    K = build_phi(g)
    seen = {}
    for d in K.faces:
        for f in K.faces[d]:
            m = q_face(g, _face_diagonals(K, f), model)
            seen.setdefault(m.keys, m)
    return sorted(seen.values(), key=_order_key)


def push_chain(g: int, chain: IntegerChain, assign: Callable[[tuple[int, ...]], int]) -> IntegerChain:
    """Push a chain of ``Phi_g`` through its barycentric subdivision, sending
    the barycentre of a face to the vertex ``assign(face)``."""
    out: dict[tuple[int, ...], int] = {}
    for sigma, c in chain.coeffs.items():
        for perm in permutations(range(len(sigma))):
            flag = [assign(tuple(sorted(sigma[i] for i in perm[:k + 1]))) for k in range(len(sigma))]
            if len(set(flag)) < len(flag):
                continue
            simplex, s = _sort_with_sign(flag)
            out[simplex] = out.get(simplex, 0) + c * _perm_sign(perm) * s
    return IntegerChain(chain.dim, out)


def _flag_closure(facets: Iterable[tuple[int, ...]]) -> SimplicialComplex | None:
    facets = list(facets)
    return SimplicialComplex(facets) if facets else None


def pushforward_cycle(g: int, chain: IntegerChain | None = None, model: str = "union",
                      require_flags: bool = True) -> ImageComplex:
    K = build_phi(g)
    if chain is None:
        chain = fundamental_cycle(K)
    verts = _image_vertices(g, model)
    index = {m.keys: i for i, m in enumerate(verts)}
    cache: dict = {}

    def assign(face):
        if face not in cache:
            cache[face] = index[q_face(g, _face_diagonals(K, face), model).keys]
        return cache[face]

    img = push_chain(g, chain, assign)
    if require_flags and not all(is_flag(verts, s) for s in img.coeffs):
        raise AssertionError("image simplex is not a flag of multicurves")
    bd = _boundary(img)
    if not bd.is_zero():
        raise AssertionError(f"pushed-forward chain has nonzero boundary ({len(bd)} terms)")
    return ImageComplex(g, verts, img, _flag_closure(img.coeffs))


def is_flag(verts: Sequence[Multicurve], simplex: Sequence[int]) -> bool:
    ms = sorted((verts[v] for v in simplex), key=len)
    return all(a.issubset(b) for a, b in zip(ms, ms[1:]))


def _boundary(chain: IntegerChain) -> IntegerChain:
    out: dict = {}
    for s, c in chain.coeffs.items():
        if len(s) == 1:
            continue
        for k in range(len(s)):
            t = s[:k] + s[k + 1:]
            out[t] = out.get(t, 0) + (-1) ** k * c
    return IntegerChain(chain.dim - 1, out)


def order_complex(vertices: Sequence[Multicurve]) -> SimplicialComplex:
    """Chains of strictly nested multicurves among ``vertices`` (indices)."""
    n = len(vertices)
    below = [{j for j in range(n) if j != i and vertices[j].issubset(vertices[i])} for i in range(n)]
    above = [set() for _ in range(n)]
    for j in range(n):
        for i in below[j]:
            above[i].add(j)
    covers = [sorted(j for j in above[i] if not (above[i] & below[j])) for i in range(n)]
    chains = []

    def extend(ch):
        ups = covers[ch[-1]]
        if not ups:
            chains.append(tuple(ch))
        for i in ups:
            extend(ch + [i])

    for i in range(n):
        if not below[i]:
            extend([i])
    maximal = {tuple(sorted(c)) for c in chains}
    return SimplicialComplex(maximal)


def _rank_q(rows: list[list[int]]) -> int:
    """Rank over the rationals by fraction-free elimination."""
    a = [r[:] for r in rows if any(r)]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    rank, prev = 0, 1
    for c in range(n):
        piv = next((i for i in range(rank, m) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for i in range(rank + 1, m):
            a[i] = [(p * a[i][j] - a[i][c] * a[rank][j]) // prev for j in range(n)]
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def nonboundary_check(img: ImageComplex) -> dict:
    """Decide whether the image chain bounds in the order complex of the image
    vertices, by exact rank and Smith normal form computations."""
    oc = order_complex(img.vertices)
    d = img.chain.dim
    higher = oc.faces.get(d + 1, [])
    tops = oc.faces.get(d, [])
    top_set = set(tops)
    missing = [s for s in img.chain.coeffs if s not in top_set]
    if missing:
        raise AssertionError("image chain is not supported on the order complex")
    if not higher:
        return {"bounds": False, "reason": "no simplices above the chain's dimension",
                "order_complex_f_vector": list(oc.f_vector())}
    idx = {s: i for i, s in enumerate(tops)}
    cols = []
    for s in higher:
        col = [0] * len(tops)
        for k in range(len(s)):
            col[idx[s[:k] + s[k + 1:]]] = (-1) ** k
        cols.append(col)
    z = [0] * len(tops)
    for s, c in img.chain.coeffs.items():
        z[idx[s]] = c
    r1 = _rank_q(cols)
    r2 = _rank_q(cols + [z])
    if r2 > r1:
        return {"bounds": False, "reason": "not in the rational span of boundaries",
                "order_complex_f_vector": list(oc.f_vector())}
    # rational boundary: compare invariant factors with and without z
    rows_b = [{j: col[i] for j, col in enumerate(cols) if col[i]} for i in range(len(tops))]
    rows_bz = [dict(r, **({len(cols): z[i]} if z[i] else {})) for i, r in enumerate(rows_b)]
    bounds = smith_normal_form(rows_b) == smith_normal_form(rows_bz)
    return {"bounds": bounds, "reason": "integral comparison of invariant factors",
            "order_complex_f_vector": list(oc.f_vector())}


# --------------------------------------------------------------------------
# single components


def least_signature(m: Multicurve) -> CurveClass:
    return min(m.components, key=CurveClass.signature)


def choose_single_component(m: Multicurve, rule: Callable[[Multicurve], CurveClass] = least_signature) -> CurveClass:
    if not len(m):
        raise ValueError("empty multicurve")
    return rule(m)


def verify_qg_simpliciality(g: int, rule=least_signature) -> Report:
    """The chosen single components along the vertices of every facet are
    pairwise disjoint."""
    K = build_phi(g)
    rep = Report("qg_simpliciality", g)
    chosen = {v: choose_single_component(q_vertex(g, [K.labels[v]]), rule) for v in range(K.num_vertices)}
    for f in K.facets:
        for a, b in combinations(f, 2):
            rep.checks += 1
            ca, cb = chosen[a], chosen[b]
            if ca.key != cb.key and intersection_number(g, ca, cb) > 0:
                rep.fail(facet=[str(K.labels[v]) for v in f], pair=[str(K.labels[a]), str(K.labels[b])])
    rep.details = {"chosen": {str(K.labels[v]): c.label() for v, c in chosen.items()}}
    return rep


def selection_commutes(g: int, rule=least_signature) -> Report:
    """Compare ``rule(relabel(γ, m))`` with ``relabel(γ, rule(m))`` over all γ and all faces."""
    K = build_phi(g)
    n = 2 * g + 2
    rep = Report("selection_equivariance", g)
    for m in _image_vertices(g, "literal"):
        for el in DihedralElement.all(n):
            rep.checks += 1
            a = rule(relabel(el, m)).key
            b = relabel(el, Multicurve(g, (rule(m),))).components[0].key
            if a != b:
                rep.fail(multicurve=m.labels(), element=str(el))
    rep.details = {"note": "ties between components with equal topological data are "
                   "broken by the canonical key, which is not dihedrally invariant"}
    return rep


# --------------------------------------------------------------------------
# dihedral symmetry


@dataclass(frozen=True)
class SimplicialMap:
    perm: tuple[int, ...]

    def apply(self, s: Sequence[int]) -> tuple[tuple[int, ...], int]:
        return _sort_with_sign([self.perm[v] for v in s])

    def push(self, chain: IntegerChain) -> IntegerChain:
        out = {}
        for s, c in chain.coeffs.items():
            t, sg = self.apply(s)
            out[t] = out.get(t, 0) + sg * c
        return IntegerChain(chain.dim, out)


def dihedral_action(el: DihedralElement, K: SimplicialComplex) -> SimplicialMap:
    n = el.n
    index = {d: i for i, d in enumerate(K.labels)}
    perm = tuple(index[make_diagonal(el(d.i), el(d.j), n)] for d in K.labels)
    faces = set(K.faces[K.dimension])
    for f in K.facets:
        if tuple(sorted(perm[v] for v in f)) not in faces:
            raise AssertionError(f"{el} does not map facets to facets")
    return SimplicialMap(perm)


def action_sign(el: DihedralElement, g: int) -> int:
    K = build_phi(g)
    z = fundamental_cycle(K)
    w = dihedral_action(el, K).push(z)
    if w == z:
        return 1
    if w == -z:
        return -1
    raise AssertionError(f"{el} does not map the fundamental cycle to ±itself")


def image_action(el: DihedralElement, img: ImageComplex) -> SimplicialMap:
    index = img.vertex_index()
    perm = []
    for m in img.vertices:
        key = relabel(el, m).keys
        if key not in index:
            raise AssertionError(f"{el} moves {m.labels()} outside the image")
        perm.append(index[key])
    return SimplicialMap(tuple(perm))


def stabilizer_report(g: int, img: ImageComplex | None = None) -> Report:
    n = 2 * g + 2
    if img is None:
        img = pushforward_cycle(g)
    rep = Report("stabilizer", g)
    els = DihedralElement.all(n)
    maps, signs, table = {}, {}, []
    for el in els:
        rep.checks += 1
        maps[el] = image_action(el, img)
        w = maps[el].push(img.chain)
        if w == img.chain:
            signs[el] = 1
        elif w == -img.chain:
            signs[el] = -1
        else:
            rep.fail(kind="not ± the image cycle", element=str(el))
            continue
        phi_sign = action_sign(el, g)
        if phi_sign != signs[el]:
            rep.fail(kind="sign differs from the action on Phi", element=str(el))
        table.append({"element": str(el), "sign": signs[el], "sign_on_phi": phi_sign})
    for a in els:
        for b in els:
            rep.checks += 1
            ab = a * b
            composed = tuple(maps[a].perm[maps[b].perm[v]] for v in range(len(img.vertices)))
            if composed != maps[ab].perm:
                rep.fail(kind="composition", a=str(a), b=str(b))
            if a in signs and b in signs and signs[ab] != signs[a] * signs[b]:
                rep.fail(kind="sign character", a=str(a), b=str(b))
    rep.details = {"order": len(els), "elements": table,
                   "identity_fixes_exactly": maps[DihedralElement.identity(n)].push(img.chain) == img.chain}
    return rep


def equivariance_report(g: int) -> Report:
    """``q(γ·D) = relabel(γ, q(D))`` for every face ``D`` and every ``γ``."""
    K = build_phi(g)
    n = 2 * g + 2
    rep = Report("equivariance", g)
    for d in K.faces:
        for f in K.faces[d]:
            D = _face_diagonals(K, f)
            m = q_vertex(g, D)
            for el in DihedralElement.all(n):
                rep.checks += 1
                lhs = q_vertex(g, [el.apply_diagonal(x) for x in D])
                rhs = relabel(el, m)
                if lhs.keys != rhs.keys:
                    rep.fail(face=[str(x) for x in D], element=str(el))
    return rep


def vertex_table(g: int) -> list[dict]:
    n = 2 * g + 2
    from .sphere import diagonals

    out = []
    for d in diagonals(n):
        m = q_vertex(g, [d])
        out.append({"diagonal": list(d), "short": (d.j - d.i) % n in (2, n - 2),
                    "multicurve": m.labels(), "separating": [c.separating for c in m]})
    return out
