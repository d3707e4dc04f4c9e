import json

import pytest
from hypothesis import given, settings, strategies as st

from quasicrypt.algebra import CayleyTable, predicate
from quasicrypt.corpus import loops_of_order
from quasicrypt.isotopy import (
    InvalidKey,
    IsotopyKey,
    build_isotope,
    check_holomorph_isomorphism,
    derive_maps,
    dumps_key,
    isotopism_triple,
    loads_key,
    make_key,
    relation_witness,
    verify_relation,
)
from quasicrypt.keedwell import keedwell_cyclic
from quasicrypt.morphism import Permutation, automorphism_group, compose, conjugate, invert, is_isotopism

U = keedwell_cyclic(11, 3, 4)
AUM_U = automorphism_group(U)
I11 = Permutation.identity(11)
SIX = Permutation([(6 * x) % 11 for x in range(11)])


def keys():
    return st.tuples(
        st.sampled_from((I11,) + AUM_U.elements),
        st.sampled_from(AUM_U.elements),
        st.permutations(range(11)).map(Permutation),
    ).map(lambda t: IsotopyKey(*t))


def test_derived_maps_special_cases():
    a, b = SIX, Permutation([(2 * x) % 11 for x in range(11)])
    psi = Permutation([3, 1, 4, 0, 5, 9, 2, 6, 8, 7, 10])
    m = derive_maps(IsotopyKey(a, b, I11))
    assert m.delta == compose(a, b) and m.gamma == b
    m = derive_maps(IsotopyKey(I11, I11, psi))
    assert m.delta.is_identity() and m.gamma.is_identity()
    m = derive_maps(IsotopyKey(I11, b, psi))
    assert m.delta == m.gamma == conjugate(b, psi)


def test_identity_key_gives_back_u():
    assert build_isotope(U, IsotopyKey.identity(11)) == U
    assert verify_relation(U, U, IsotopyKey.identity(11))


def test_six_x_isotope_is_linear_and_not_cip():
    v = build_isotope(U, IsotopyKey(I11, SIX, I11))
    # ((6^-1 u) 6 times 3 + 4 * 6^-1 v) 6 = 7u + 4v mod 11 (hand-reduced)
    assert v.tolist() == [[(7 * a + 4 * b) % 11 for b in range(11)] for a in range(11)]
    # 7 * 4 = 28 = 6 mod 11, not 1, so no crossed inverse exists
    assert not predicate(v, "CIP")


def test_relation_fails_for_u_against_itself_with_nontrivial_beta():
    key = IsotopyKey(I11, SIX, I11)
    w = relation_witness(U, U, key)
    assert w is not None
    x, y = w
    m = derive_maps(key)
    t = U.table
    assert t[m.delta.image[x], m.gamma.image[y]] != m.delta.image[t[SIX.image[x], y]]


def test_triples_for_the_identity_key():
    v_to_u, u_to_v = isotopism_triple(IsotopyKey.identity(5))
    for t in (v_to_u, u_to_v):
        assert t.a.is_identity() and t.b.is_identity() and t.c.is_identity()


def test_key_validation():
    swap = Permutation([1, 0] + list(range(2, 11)))
    with pytest.raises(InvalidKey):
        make_key(U, swap, I11)
    with pytest.raises(InvalidKey):
        build_isotope(U, IsotopyKey(swap, I11, I11))
    with pytest.raises(InvalidKey):
        IsotopyKey(I11, I11, Permutation.identity(5))
    assert make_key(U, SIX, I11).alpha.is_identity()


def test_key_round_trip(tmp_path):
    key = IsotopyKey(SIX, SIX * SIX, Permutation([3, 1, 4, 0, 5, 9, 2, 6, 8, 7, 10]))
    path = tmp_path / "k.json"
    path.write_text(dumps_key(key))
    assert loads_key(path.read_text()) == key


def test_key_file_alpha_defaults_to_identity():
    doc = {"n": 11, "beta": list(SIX.image), "psi": list(range(11))}
    assert loads_key(json.dumps(doc)).alpha.is_identity()


@pytest.mark.parametrize("text", ["[", "[]", '{"n": 3, "beta": [0, 1], "psi": [0, 1, 2]}', '{"n": 2, "beta": [0, 0], "psi": [0, 1]}'])
def test_bad_key_files(text):
    with pytest.raises(InvalidKey):
        loads_key(text)


def phi_is_homomorphism(u, v, key, aum_u, aum_v):
    """Pure-python evaluation of (a, x) -> (psi^-1 a psi, x psi^-1 a psi)."""
    psi = key.psi
    n = u.n
    tu, tv = u.tolist(), v.tolist()

    def image(a, x):
        c = conjugate(a, psi)
        return c, c.image[x]

    for a in aum_u:
        for b in aum_u:
            for x in range(n):
                for y in range(n):
                    prod = (a * b, tu[b.image[x]][y])
                    (c, cx), (d, dy) = image(a, x), image(b, y)
                    lhs = image(*prod)
                    rhs = (c * d, tv[d.image[cx]][dy])
                    if lhs != rhs:
                        return False
    return True


def test_holomorph_map_for_the_identity_key_on_c11():
    # With psi = I the map is (a, x) -> (a, xa): not a homomorphism when AUM is non-trivial.
    rep = check_holomorph_isomorphism(U, U, IsotopyKey.identity(11), AUM_U, AUM_U)
    assert rep.conjugate and rep.bijective
    assert rep.homomorphism is False
    assert not phi_is_homomorphism(U, U, IsotopyKey.identity(11), AUM_U, AUM_U)


def test_holomorph_map_for_the_identity_key_with_trivial_aum():
    q = next(q for q in loops_of_order(5) if automorphism_group(q).is_trivial())
    aum = automorphism_group(q)
    key = IsotopyKey.identity(5)
    assert check_holomorph_isomorphism(q, q, key, aum, aum).ok


def test_holomorph_map_on_c11_with_six_x():
    key = IsotopyKey(I11, SIX, I11)
    v = build_isotope(U, key)
    aum_v = automorphism_group(v)
    rep = check_holomorph_isomorphism(U, v, key, AUM_U, aum_v)
    if rep.conjugate:
        assert rep.ok == phi_is_homomorphism(U, v, key, AUM_U, aum_v)
    assert not rep.ok
    assert rep.describe()


@settings(max_examples=40, deadline=None)
@given(keys())
def test_isotope_is_a_quasigroup_satisfying_the_relation(key):
    v = build_isotope(U, key)
    assert v.is_quasigroup
    assert verify_relation(U, v, key)
    v_to_u, u_to_v = isotopism_triple(key)
    assert is_isotopism(U, v, u_to_v)
    assert is_isotopism(v, U, v_to_u)
    back = u_to_v.then(v_to_u)
    assert back.a.is_identity() and back.b.is_identity() and back.c.is_identity()


@settings(max_examples=40, deadline=None)
@given(keys())
def test_relation_evaluated_pointwise(key):
    v = build_isotope(U, key)
    m = derive_maps(key)
    d, g, b = m.delta.image, m.gamma.image, key.beta.image
    tu, tv = U.tolist(), v.tolist()
    assert all(tv[d[x]][g[y]] == d[tu[b[x]][y]] for x in range(11) for y in range(11))


def test_isotope_of_a_loop_with_trivial_key_parts():
    q = next(iter(loops_of_order(4)))
    aum = automorphism_group(q)
    for beta in aum:
        key = IsotopyKey(Permutation.identity(4), beta, invert(beta))
        v = build_isotope(q, key)
        assert isinstance(v, CayleyTable) and verify_relation(q, v, key)
