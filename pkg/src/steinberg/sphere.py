"""The complex of non-crossing diagonals of a polygon and exact homology.

``Phi_g`` has a vertex for every diagonal of the ``(2g+2)``-gon and a simplex
for every set of pairwise non-crossing diagonals; it is the boundary of the
dual associahedron, a ``(2g-2)``-sphere.  Homology is computed over the
integers by Smith normal form on Python ints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Hashable, Iterable, NamedTuple, Sequence


class Diagonal(NamedTuple):
    i: int
    j: int

    def __str__(self) -> str:
        return f"{{{self.i},{self.j}}}"


def make_diagonal(i: int, j: int, n: int) -> Diagonal:
    i, j = sorted((i % n, j % n))
    if i == j or (j - i) % n in (1, n - 1):
        raise ValueError(f"{{{i},{j}}} is not a diagonal of the {n}-gon")
    return Diagonal(i, j)


def diagonals(n: int) -> list[Diagonal]:
    if n < 4:
        raise ValueError("a polygon needs at least 4 vertices to have diagonals")
    return [Diagonal(i, j) for i in range(n) for j in range(i + 2, n) if (j - i) != n - 1]


def crossing(d1: Sequence[int], d2: Sequence[int]) -> bool:
    """Whether two diagonals cross in the interior of the polygon."""
    a, b = sorted(d1)
    c, d = sorted(d2)
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b) != (a < d < b)


class ComplexError(ValueError):
    pass


class NotPseudomanifoldError(ComplexError):
    pass


class NonOrientableError(ComplexError):
    def __init__(self, msg: str, witness: list):
        super().__init__(msg)
        self.witness = witness


Simplex = tuple[int, ...]


class SimplicialComplex:
    """A finite simplicial complex on vertices ``0..n-1`` given by facets."""

    def __init__(self, facets: Iterable[Iterable[int]], labels: Sequence[Hashable] | None = None):
        fs = sorted({tuple(sorted(f)) for f in facets}, key=lambda s: (len(s), s))
        proper = {sub for f in fs for k in range(1, len(f)) for sub in combinations(f, k)}
        for a in fs:
            if a in proper:
                raise ComplexError(f"facet {a} is a face of another facet")
        self.facets: list[Simplex] = fs
        verts = sorted({v for f in fs for v in f})
        if labels is None:
            labels = verts
        self.labels = list(labels)
        self.num_vertices = len(self.labels)

    @cached_property
    def faces(self) -> dict[int, list[Simplex]]:
        """All nonempty faces by dimension, sorted."""
        out: dict[int, set] = {}
        for f in self.facets:
            for k in range(1, len(f) + 1):
                for s in combinations(f, k):
                    out.setdefault(k - 1, set()).add(s)
        return {d: sorted(s) for d, s in sorted(out.items())}

    @property
    def dimension(self) -> int:
        return max(self.faces) if self.faces else -1

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces[d]) for d in range(self.dimension + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.f_vector()))

    @cached_property
    def _index(self) -> dict[int, dict[Simplex, int]]:
        return {d: {s: i for i, s in enumerate(fs)} for d, fs in self.faces.items()}

    def index(self, s: Simplex) -> int:
        return self._index[len(s) - 1][s]

    def boundary_matrix(self, d: int) -> list[dict[int, int]]:
        """``∂_d`` as sparse rows: one dict per ``(d-1)``-face, mapping ``d``-face
        index to coefficient.  ``∂_0`` is the augmentation to ``Z``."""
        if d == 0:
            return [{i: 1 for i in range(len(self.faces[0]))}]
        rows: list[dict[int, int]] = [dict() for _ in self.faces[d - 1]]
        idx = self._index[d - 1]
        for c, s in enumerate(self.faces[d]):
            for k in range(len(s)):
                r = idx[s[:k] + s[k + 1:]]
                rows[r][c] = (-1) ** k
        return rows

    def boundary(self, chain: "IntegerChain") -> "IntegerChain":
        out: dict[Simplex, int] = {}
        for s, c in chain.coeffs.items():
            if len(s) == 1:
                continue
            for k in range(len(s)):
                t = s[:k] + s[k + 1:]
                out[t] = out.get(t, 0) + (-1) ** k * c
        return IntegerChain(chain.dim - 1, out)

    def to_json(self) -> dict:
        return {
            "schema": "steinberg.simplicial_complex/1",
            "vertices": [list(l) if isinstance(l, tuple) else l for l in self.labels],
            "facets": [list(f) for f in self.facets],
            "f_vector": list(self.f_vector()),
            "euler_characteristic": self.euler_characteristic(),
        }


@dataclass
class IntegerChain:
    dim: int
    coeffs: dict[Simplex, int] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {s: c for s, c in self.coeffs.items() if c != 0}

    def is_zero(self) -> bool:
        return not self.coeffs

    def __neg__(self) -> "IntegerChain":
        return IntegerChain(self.dim, {s: -c for s, c in self.coeffs.items()})

    def __add__(self, other: "IntegerChain") -> "IntegerChain":
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out.get(s, 0) + c
        return IntegerChain(self.dim, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerChain) and self.coeffs == other.coeffs

    def __len__(self) -> int:
        return len(self.coeffs)

    def to_json(self) -> dict:
        return {
            "schema": "steinberg.chain/1",
            "dim": self.dim,
            "terms": [[list(s), c] for s, c in sorted(self.coeffs.items())],
        }


# --------------------------------------------------------------------------
# Phi_g


def _noncrossing_sets(diags: Sequence[Diagonal]) -> list[Simplex]:
    n = len(diags)
    ok = [[not crossing(diags[a], diags[b]) for b in range(n)] for a in range(n)]
    maximal = []

    def grow(current: list[int], cands: list[int]):
        extended = False
        for pos, c in enumerate(cands):
            extended = True
            grow(current + [c], [d for d in cands[pos + 1:] if ok[c][d]])
        if not extended:
            # maximal only if nothing earlier could be added either
            if all(any(not ok[x][y] for y in current) for x in range(n) if x not in current):
                maximal.append(tuple(current))

    grow([], list(range(n)))
    return maximal


@lru_cache(maxsize=None)
def build_phi(g: int) -> SimplicialComplex:
    if g < 2:
        raise ValueError("genus must be at least 2")
    n = 2 * g + 2
    diags = diagonals(n)
    facets = _noncrossing_sets(diags)
    if any(len(f) != n - 3 for f in facets):
        raise ComplexError("maximal non-crossing set that is not a triangulation")
    return SimplicialComplex(facets, labels=diags)


def count_triangulations(n: int) -> int:
    """Triangulations of a convex ``n``-gon by splitting off the triangle on a fixed side."""

    @lru_cache(maxsize=None)
    def t(m: int) -> int:
        if m <= 3:
            return 1
        # apex k of the triangle on side (0, m-1) leaves polygons of k+1 and m-k sides
        return sum(t(k + 1) * t(m - k) for k in range(1, m - 1))

    return t(n)


# --------------------------------------------------------------------------
# Smith normal form


def _dense_snf_diagonal(a: list[list[int]]) -> list[int]:
    a = [row[:] for row in a]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            changed = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        changed = True
                        break
            if changed:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        changed = True
                        break
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def smith_diagonal(rows: Sequence[dict[int, int]]) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix."""
    rows = [dict(r) for r in rows if r]
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j in r:
            cols.setdefault(j, set()).add(i)
    alive = set(range(len(rows)))
    units = 0
    while True:
        best = None
        for i in alive:
            r = rows[i]
            for j, v in r.items():
                if v in (1, -1):
                    cost = (len(r) - 1) * (len(cols[j]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, p, c = best
        prow = rows[p]
        pv = prow[c]
        for i in list(cols[c]):
            if i == p:
                continue
            r = rows[i]
            q = r[c] * pv  # pv = ±1 so r[c]/pv = r[c]*pv
            for j, v in prow.items():
                nv = r.get(j, 0) - q * v
                if nv:
                    if j not in r:
                        cols[j].add(i)
                    r[j] = nv
                elif j in r:
                    del r[j]
                    cols[j].discard(i)
            if not r:
                alive.discard(i)
        for j in prow:
            cols[j].discard(p)
        alive.discard(p)
        rows[p] = {}
        units += 1
    rest = [rows[i] for i in sorted(alive) if rows[i]]
    diag = [1] * units
    if rest:
        cs = sorted({j for r in rest for j in r})
        pos = {j: k for k, j in enumerate(cs)}
        dense = [[0] * len(cs) for _ in rest]
        for i, r in enumerate(rest):
            for j, v in r.items():
                dense[i][pos[j]] = v
        diag += _dense_snf_diagonal(dense)
    return diag


def smith_normal_form(rows: Sequence[dict[int, int]]) -> list[int]:
    """Invariant factors ``d_1 | d_2 | ...`` (unit pivots first, then the
    dense remainder, which is reduced with the divisibility fix-up)."""
    return smith_diagonal(rows)


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: tuple[int, ...]

    def __str__(self) -> str:
        parts = (["Z"] if self.betti == 1 else [f"Z^{self.betti}"] if self.betti else [])
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


def homology(K: SimplicialComplex) -> list[HomologyGroup]:
    """Reduced integral homology in dimensions ``0..dim K``."""
    top = K.dimension
    ranks, torsion = {}, {}
    for d in range(0, top + 1):
        inv = smith_normal_form(K.boundary_matrix(d))
        ranks[d] = len(inv)
        torsion[d] = tuple(x for x in inv if x > 1)
    ranks[top + 1] = 0
    torsion[top + 1] = ()
    out = []
    for d in range(top + 1):
        betti = len(K.faces[d]) - ranks[d] - ranks[d + 1]
        out.append(HomologyGroup(betti, torsion[d + 1]))
    return out


def homology_json(K: SimplicialComplex) -> dict:
    return {
        "schema": "steinberg.homology/1",
        "reduced": [{"dim": d, "betti": h.betti, "torsion": list(h.torsion), "group": str(h)}
                    for d, h in enumerate(homology(K))],
    }


# --------------------------------------------------------------------------
# orientation


def fundamental_cycle(K: SimplicialComplex, seed: int = 0) -> IntegerChain:
    """Coherently oriented sum of the facets, the facet ``K.facets[seed]`` with +1."""
    top = K.dimension
    facets = [f for f in K.facets if len(f) == top + 1]
    if len(facets) != len(K.facets):
        raise NotPseudomanifoldError("complex is not pure")
    ridges: dict[Simplex, list[tuple[int, int]]] = {}
    for fi, f in enumerate(facets):
        for k in range(len(f)):
            ridges.setdefault(f[:k] + f[k + 1:], []).append((fi, k))
    for r, inc in ridges.items():
        if len(inc) != 2:
            raise NotPseudomanifoldError(f"ridge {r} lies in {len(inc)} facets")
    sign = {seed: 1}
    parent = {seed: None}
    queue = [seed]
    adj: dict[int, list[tuple[int, int, int]]] = {}
    for (a, ka), (b, kb) in ridges.values():
        adj.setdefault(a, []).append((b, ka, kb))
        adj.setdefault(b, []).append((a, kb, ka))
    for fi in queue:
        for nb, k_self, k_nb in adj.get(fi, []):
            want = -sign[fi] * (-1) ** (k_self + k_nb)
            if nb not in sign:
                sign[nb] = want
                parent[nb] = fi
                queue.append(nb)
            elif sign[nb] != want:
                witness = _path(parent, fi)[::-1] + _path(parent, nb)
                raise NonOrientableError("orientations cannot be made coherent",
                                         [facets[i] for i in witness])
    if len(sign) != len(facets):
        raise NotPseudomanifoldError("facet adjacency graph is disconnected")
    return IntegerChain(top, {facets[i]: s for i, s in sign.items()})


def _path(parent: dict, x: int) -> list[int]:
    out = []
    while x is not None:
        out.append(x)
        x = parent[x]
    return out
