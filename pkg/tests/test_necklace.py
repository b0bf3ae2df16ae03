import json
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steinberg.curves import boundary_multicurve, cut, fills, FillingError, relabel
from steinberg.necklace import (
    DihedralElement,
    NecklaceError,
    automorphism_kernel,
    build_necklace,
    build_tesselation,
    chain_decomposition,
    chain_neighborhood_type,
    map_automorphisms,
    realising_automorphism,
    tesselation_solutions,
)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_necklace_intersections(g):
    nk = build_necklace(g)
    m = nk.intersection_matrix
    n = 2 * g + 2
    assert nk.curves == tuple(range(n))
    assert (m == m.T).all() and not m.diagonal().any()
    assert (m.sum(axis=1) == 2).all()
    for i in range(n):
        for j in range(n):
            assert m[i, j] == (1 if (i - j) % n in (1, n - 1) else 0)


def test_genus_two_adjacency_is_a_hexagon():
    m = build_necklace(2).intersection_matrix
    # a connected 2-regular graph on 6 vertices is the 6-cycle
    seen, frontier = {0}, [0]
    while frontier:
        i = frontier.pop()
        for j in np.flatnonzero(m[i]):
            if j not in seen:
                seen.add(int(j))
                frontier.append(int(j))
    assert len(seen) == 6


@pytest.mark.parametrize("g", [0, 1, -3])
def test_small_genus_rejected(g):
    with pytest.raises(NecklaceError):
        build_necklace(g)
    with pytest.raises(NecklaceError):
        build_tesselation(g)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_tesselation_counts(g):
    cx = build_tesselation(g)
    n = 2 * g + 2
    assert (cx.num_vertices, cx.num_edges, cx.num_faces) == (n, 2 * n, 4)
    assert cx.euler_characteristic == 2 - 2 * g
    assert (2 - cx.euler_characteristic) // 2 == g
    assert all(len(w) == n for w in cx.faces)
    # every vertex sees four corners
    corners = [0] * n
    for w in cx.faces:
        for v in cx.polygon_vertices(cx.faces.index(w)):
            corners[v] += 1
    assert corners == [4] * n


@pytest.mark.parametrize("g", [2, 3])
def test_curve_paths_cross_two_faces(g):
    cx = build_tesselation(g)
    for i in range(cx.n):
        e1, e2 = cx.curve_edges(i)
        assert len(cx.curve_path(i)) == 2
        assert set(cx.edge_faces(e1)) != set(cx.edge_faces(e2))
        for e in (e1, e2):
            assert cx.edge_curve(e) == i
            a, b = cx.edge_faces(e)
            assert a != b


@pytest.mark.parametrize("g", [2, 3])
def test_fundamental_domain(g):
    cx = build_tesselation(g)
    assert cx.fundamental_domain_sides == 8 * g - 4
    pairing = cx.side_pairing
    # polygon sides on the boundary of the star; collinear neighbours merge
    # into the 8g - 4 geodesic sides
    assert len(pairing) == 4 * cx.n - 2 * len(cx.star_edges)
    for a, b in pairing.items():
        assert pairing[b] == a and a != b


@pytest.mark.parametrize("g", [2, 3])
def test_search_is_exhaustive_and_symmetric(g):
    sols = tesselation_solutions(g)
    assert sols[0] == build_tesselation(g).flips
    n = 2 * g + 2
    # exactly the crossing choices of even parity close up into four n-gons
    assert len(sols) == 2 ** (n - 1)
    assert all(sum(x) % 2 == 0 for x in sols)
    assert len(map_automorphisms(g)) == 4 * (2 * n)
    assert len(automorphism_kernel(g)) == 4
    for el in DihedralElement.all(n):
        aut = realising_automorphism(g, el)
        assert tuple(el(i) for i in range(n)) == aut.curve_perm


def _isomorphic(rho1, rho2):
    """A dart bijection commuting with the edge involution and carrying one
    rotation to the other or to its inverse."""
    m = len(rho1)
    inv2 = [0] * m
    for d, r in enumerate(rho2):
        inv2[r] = d
    for target in range(m):
        for orient in (1, -1):
            img = [-1] * m
            img[0] = target
            stack, ok = [0], True
            while stack and ok:
                d = stack.pop()
                a = img[d]
                for src, dst in ((d ^ 1, a ^ 1), (rho1[d], rho2[a] if orient > 0 else inv2[a])):
                    if img[src] < 0:
                        img[src] = dst
                        stack.append(src)
                    elif img[src] != dst:
                        ok = False
            if ok and sorted(img) == list(range(m)):
                return True
    return False


@pytest.mark.parametrize("g", [2, 3])
def test_all_gluings_are_isomorphic(g):
    from steinberg.necklace import _rotation

    n = 2 * g + 2
    base = _rotation(n, build_tesselation(g).flips)
    assert all(_isomorphic(base, _rotation(n, x)) for x in tesselation_solutions(g))


def test_tesselation_json_is_stable():
    a = json.dumps(build_tesselation(2).to_json(), sort_keys=True)
    b = json.dumps(build_tesselation(2).to_json(), sort_keys=True)
    assert a == b and '"genus": 2' in a


@pytest.mark.parametrize("subset,lengths", [
    ({0, 2, 3, 5}, [2, 2]),
    ({0, 2, 4, 5}, [1, 3]),
])
def test_chain_decomposition_examples(subset, lengths):
    chains = chain_decomposition(6, subset)
    assert sorted(len(c) for c, _ in chains) == lengths
    assert not any(cyc for _, cyc in chains)


def test_full_necklace_is_one_cyclic_chain():
    assert chain_decomposition(6, range(6)) == [(tuple(range(6)), True)]
    assert chain_decomposition(6, []) == []


@given(st.integers(2, 4).flatmap(lambda g: st.tuples(st.just(g), st.sets(st.integers(0, 2 * g + 1)))))
def test_chain_decomposition_partitions(args):
    g, subset = args
    n = 2 * g + 2
    chains = chain_decomposition(n, subset)
    flat = [c for chain, _ in chains for c in chain]
    assert sorted(flat) == sorted(subset)
    for chain, cyclic in chains:
        assert all((b - a) % n == 1 for a, b in zip(chain, chain[1:]))
        if not cyclic:
            assert (chain[0] - 1) % n not in subset and (chain[-1] + 1) % n not in subset


@pytest.mark.parametrize("g", [2, 3])
def test_chain_rule_matches_traced_neighbourhoods(g):
    n = 2 * g + 2
    cx = build_tesselation(g)
    for k in range(1, 2 * g + 1):
        piece = next(p for p in cut(cx, range(k)).pieces if p.kind == "N")
        assert (piece.genus, piece.boundary) == chain_neighborhood_type(k)
        assert piece.euler == -(k - 1)


def _nonfilling(g):
    n = 2 * g + 2
    out = []
    for r in range(1, n):
        for s in combinations(range(n), r):
            if not fills(g, s):
                out.append(frozenset(s))
    return out


@pytest.mark.parametrize("g", [2, 3])
def test_euler_bookkeeping(g):
    cx = build_tesselation(g)
    for s in _nonfilling(g):
        c = cut(cx, s)
        assert c.euler_total() == 2 - 2 * g


def test_genus_two_multicurves():
    sep = boundary_multicurve(2, set(range(6)) - {1, 4})
    assert len(sep) == 1 and sep.components[0].separating
    assert sep.components[0].complement_pieces == ((1, 1), (1, 1))
    for i in range(6):
        assert boundary_multicurve(2, {i}).labels() == [f"c{i}"]


def test_c1_c3_deleted_gives_c2():
    kept = set(range(6)) - {1, 3}
    assert not fills(2, kept)
    m = boundary_multicurve(2, kept)
    assert m.labels() == ["c2"]
    assert not m.components[0].separating
    # all four boundary circles of the neighbourhood are parallel to c2
    c = cut(build_tesselation(2), kept)
    assert len(c.walks) == 4


def test_midpoint_deletion():
    m = boundary_multicurve(2, set(range(6)) - {1, 3, 4})
    assert len(m) == 2
    assert sorted(c.separating for c in m) == [False, True]
    assert "c2" in m.labels()


def test_filling_sets():
    assert fills(2, range(6))
    assert fills(2, set(range(6)) - {1, 2})
    assert not fills(2, set(range(6)) - {1, 4})
    with pytest.raises(FillingError):
        boundary_multicurve(2, set(range(6)) - {1, 2})
    with pytest.raises(NecklaceError):
        boundary_multicurve(2, set())
    with pytest.raises(NecklaceError):
        boundary_multicurve(2, {7})


@pytest.mark.parametrize("g", [2, 3])
def test_two_deleted_multicurves_avoid_the_kept_curves(g):
    n = 2 * g + 2
    for a, b in combinations(range(n), 2):
        if (b - a) % n in (1, n - 1):
            continue
        kept = set(range(n)) - {a, b}
        m = boundary_multicurve(g, kept)
        assert len(m) >= 1
        for c in m:
            assert all(c.ident.intersections[i] == 0 for i in kept)


def test_relabel_examples():
    n = 6
    ident = DihedralElement.identity(n)
    m = boundary_multicurve(2, set(range(6)) - {1, 3})
    assert relabel(ident, m) == m
    assert relabel(DihedralElement(1, False, n), m).labels() == ["c3"]
    # the reflection i -> 2 - i fixes c1 and c4
    r = DihedralElement(2, True, n)
    assert r(1) == 1 and r(4) == 4
    sep = boundary_multicurve(2, set(range(6)) - {1, 4})
    img = relabel(r, sep)
    direct = boundary_multicurve(2, relabel(r, frozenset(sep.provenance)))
    assert img.keys == direct.keys
    assert [c.separating for c in img] == [c.separating for c in sep]
    assert [c.complement_pieces for c in img] == [c.complement_pieces for c in sep]
    assert relabel(r, (1, 3)) == (1, 5)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_multicurve_equivariance(g, data):
    n = 2 * g + 2
    a, b = data.draw(st.sampled_from([p for p in combinations(range(n), 2) if (p[1] - p[0]) % n not in (1, n - 1)]))
    el = data.draw(st.sampled_from(DihedralElement.all(n)))
    kept = frozenset(range(n)) - {a, b}
    lhs = boundary_multicurve(g, relabel(el, kept))
    rhs = relabel(el, boundary_multicurve(g, kept))
    assert lhs.keys == rhs.keys


@given(st.integers(2, 5).flatmap(lambda g: st.tuples(*[st.sampled_from(DihedralElement.all(2 * g + 2))] * 3)))
def test_dihedral_group_law(els):
    a, b, c = els
    n = a.n
    for i in range(n):
        assert (a * b)(i) == a(b(i))
        assert (a * a.inverse())(i) == i
    assert (a * b) * c == a * (b * c)
