from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from steinberg.curves import Multicurve, relabel
from steinberg.necklace import DihedralElement
from steinberg.sphere import IntegerChain, build_phi
from steinberg.steinberg_map import (
    action_sign,
    choose_single_component,
    dihedral_action,
    equivariance_report,
    nonboundary_check,
    push_chain,
    pushforward_cycle,
    q_face,
    q_vertex,
    selection_commutes,
    stabilizer_report,
    verify_flag_structure,
    verify_qg_simpliciality,
    vertex_table,
)


def _bd(chain):
    out = Counter()
    for s, c in chain.coeffs.items():
        for k in range(len(s)):
            out[s[:k] + s[k + 1:]] += (-1) ** k * c
    return {s: c for s, c in out.items() if c}


def test_q_vertex_examples():
    sep = q_vertex(2, [(1, 4)])
    assert len(sep) == 1 and sep.components[0].separating
    assert q_vertex(2, [(1, 3)]).labels() == ["c2"]
    mid = q_vertex(2, [(1, 3), (1, 4)])
    assert len(mid) == 2
    assert mid.keys == (q_vertex(2, [(1, 3)]).keys | sep.keys)


def test_q_vertex_errors():
    with pytest.raises(ValueError):
        q_vertex(2, [])
    with pytest.raises(ValueError):
        q_vertex(2, [(1, 2)])


@pytest.mark.parametrize("g", [2, 3])
def test_short_diagonals_give_the_middle_curve(g):
    n = 2 * g + 2
    for row in vertex_table(g):
        i, j = row["diagonal"]
        if row["short"]:
            mid = (i + 1) % n if (j - i) % n == 2 else (j + 1) % n
            assert row["multicurve"] == [f"c{mid}"]


def test_opposite_diagonals_separate_in_genus_two():
    for row in vertex_table(2):
        if (row["diagonal"][1] - row["diagonal"][0]) % 6 == 3:
            assert row["separating"] == [True]


@pytest.mark.parametrize("g,failures", [(2, 42), (3, 7396)])
def test_literal_face_map_is_not_monotone(g, failures):
    rep = verify_flag_structure(g, "literal")
    assert not rep.passed
    mono = [f for f in rep.failures if f["kind"] == "monotonicity"]
    assert len(mono) == failures
    assert not [f for f in rep.failures if f["kind"] == "disjointness"]


def test_literal_monotonicity_witness():
    # the long diagonal {0,3} alone deletes c0, c3; adding the short diagonals
    # at 0 removes the separating curve from the image
    small = q_face(2, [(0, 3)], "literal")
    large = q_face(2, [(0, 2), (0, 3), (0, 4)], "literal")
    assert not small.issubset(large)


@pytest.mark.parametrize("g", [2, 3])
def test_union_model_is_monotone(g):
    rep = verify_flag_structure(g, "union")
    assert rep.passed
    K = build_phi(g)
    assert rep.details["face_pairs"] == sum(2 ** len(f) - 1 for d in K.faces for f in K.faces[d])


def test_singleton_face_is_nested_in_itself():
    m = q_face(2, [(0, 3)], "literal")
    assert m.issubset(m)


def test_push_chain_subdivides_a_circle():
    # boundary of a triangle, barycentres get fresh labels
    z = IntegerChain(1, {(0, 1): 1, (1, 2): 1, (0, 2): -1})
    labels = {}
    img = push_chain(0, z, lambda f: labels.setdefault(f, len(labels)))
    assert len(img) == 6 and not _bd(img)


@pytest.mark.parametrize("g", [2, 3])
def test_pushforward_is_a_nonzero_cycle(g):
    img = pushforward_cycle(g)
    assert not img.chain.is_zero()
    assert img.chain.dim == 2 * g - 2
    assert not _bd(img.chain)
    assert all(c != 0 for c in img.chain.coeffs.values())


def test_pushforward_of_zero_chain():
    img = pushforward_cycle(2, IntegerChain(2, {}))
    assert img.chain.is_zero()


def test_literal_pushforward_is_still_a_cycle():
    # chain maps commute with the boundary whatever the vertex assignment
    img = pushforward_cycle(2, model="literal", require_flags=False)
    assert not _bd(img.chain)


def test_nonboundary_in_image_complex():
    out = nonboundary_check(pushforward_cycle(2))
    assert out["bounds"] is False


def test_choose_single_component():
    one = q_vertex(2, [(1, 3)])
    assert choose_single_component(one) == one.components[0]
    mid = q_vertex(2, [(1, 3), (1, 4)])
    pick = choose_single_component(mid)
    assert pick == min(mid.components, key=lambda c: c.signature())
    with pytest.raises(ValueError):
        choose_single_component(Multicurve(2, ()))


@pytest.mark.parametrize("g", [2, 3])
def test_selection_caveat_only_concerns_several_components(g):
    rep = selection_commutes(g)
    assert rep.checks > 0
    assert all(len(f["multicurve"]) >= 2 for f in rep.failures)


@pytest.mark.parametrize("g", [2, 3])
def test_qg_simpliciality(g):
    assert verify_qg_simpliciality(g).passed


def test_single_curve_facet_agrees_with_q_image():
    K = build_phi(2)
    for f in K.facets:
        ms = [q_vertex(2, [K.labels[v]]) for v in f]
        if all(len(m) == 1 for m in ms):
            assert [choose_single_component(m) for m in ms] == [m.components[0] for m in ms]


def test_dihedral_action_orbits():
    K = build_phi(2)
    rot = dihedral_action(DihedralElement(1, False, 6), K)
    seen, orbits = set(), []
    for v in range(K.num_vertices):
        if v in seen:
            continue
        orb, w = [], v
        while w not in orb:
            orb.append(w)
            w = rot.perm[w]
        seen |= set(orb)
        orbits.append(orb)
    sizes = sorted(len(o) for o in orbits)
    assert sizes == [3, 6]
    longs = next(o for o in orbits if len(o) == 3)
    assert all((K.labels[v].j - K.labels[v].i) == 3 for v in longs)


@pytest.mark.parametrize("g", [2, 3])
def test_reflection_fixes_the_long_diagonal(g):
    n = 2 * g + 2
    K = build_phi(g)
    r = DihedralElement(0, True, n)
    assert r(0) == 0 and r(g + 1) == g + 1
    v = K.labels.index((0, g + 1))
    assert dihedral_action(r, K).perm[v] == v
    assert dihedral_action(DihedralElement.identity(n), K).perm == tuple(range(K.num_vertices))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_action_sign_is_a_homomorphism(g, data):
    n = 2 * g + 2
    a = data.draw(st.sampled_from(DihedralElement.all(n)))
    b = data.draw(st.sampled_from(DihedralElement.all(n)))
    assert action_sign(a * b, g) == action_sign(a, g) * action_sign(b, g)
    assert action_sign(a * a, g) == 1


def test_action_sign_values():
    assert action_sign(DihedralElement.identity(6), 2) == 1
    assert action_sign(DihedralElement(1, False, 6), 2) in (1, -1)


@pytest.mark.parametrize("g,order", [(2, 12), (3, 16)])
def test_stabilizer(g, order):
    rep = stabilizer_report(g)
    assert rep.passed
    assert rep.details["order"] == order
    assert rep.details["identity_fixes_exactly"]
    assert {row["sign"] for row in rep.details["elements"]} <= {1, -1}


@pytest.mark.parametrize("g", [2, 3])
def test_equivariance(g):
    rep = equivariance_report(g)
    assert rep.passed and rep.checks > 0


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_equivariance_on_random_faces(data):
    g = data.draw(st.sampled_from([2, 3]))
    K = build_phi(g)
    d = data.draw(st.sampled_from(sorted(K.faces)))
    f = data.draw(st.sampled_from(K.faces[d]))
    el = data.draw(st.sampled_from(DihedralElement.all(2 * g + 2)))
    D = [K.labels[v] for v in f]
    lhs = q_vertex(g, [el.apply_diagonal(x) for x in D])
    assert lhs.keys == relabel(el, q_vertex(g, D)).keys
