import json

import numpy as np
import pytest

from quasicrypt.algebra import CayleyTable, predicate, validate
from quasicrypt.corpus import loops_of_order
from quasicrypt.holomorph import (
    NotAnAutomorphism,
    autotopism_family_holds,
    build_holomorph,
    check_aip_conditions,
    check_holomorph_cip_identity,
    cip_equivalents,
    dumps_legend,
    verify_corollaries,
)
from quasicrypt.keedwell import cyclic_group
from quasicrypt.morphism import PermGroup, Permutation, automorphism_group, find_isomorphism


def direct_product(q, aum, a, x, b, y):
    """(a, x) o (b, y) = (ab, xb . y), straight from the definition."""
    ga, gb = aum.elements[a], aum.elements[b]
    ab = aum.index(ga * gb)
    return ab, int(q.table[gb.image[x], y])


def test_c2_holomorph_is_c2():
    c2 = cyclic_group(2)
    h = build_holomorph(c2)
    assert h.base.n == 2
    assert find_isomorphism(h.base, c2) is not None


def test_c3_holomorph_is_an_order_6_loop():
    h = build_holomorph(cyclic_group(3))
    rep = validate(h.base.tolist())
    assert h.base.n == 6 and rep.is_loop and rep.identity == 0
    assert not predicate(h.base, "commutative")


@pytest.mark.parametrize("n", [3, 4, 5])
def test_holomorph_matches_the_definition(n):
    for q in loops_of_order(n):
        aum = automorphism_group(q)
        h = build_holomorph(q, aum)
        assert h.base.n == len(aum) * q.n
        for i in range(h.base.n):
            for j in range(h.base.n):
                assert h.pair(int(h.base.table[i, j])) == direct_product(q, aum, *h.pair(i), *h.pair(j))


def test_embedding_is_a_subloop_copy():
    q = cyclic_group(5)
    h = build_holomorph(q)
    emb = np.array(h.embedding())
    assert np.array_equal(h.base.table[emb[:, None], emb[None, :]], emb[q.table])


def test_rejects_non_automorphisms():
    q = cyclic_group(3)
    bogus = PermGroup([Permutation([0, 1, 2]), Permutation([1, 0, 2])], check=False)
    with pytest.raises(NotAnAutomorphism):
        build_holomorph(q, bogus)


def test_legend_round_trip():
    h = build_holomorph(cyclic_group(3))
    doc = json.loads(dumps_legend(h))
    assert doc == {"n": 3, "order": 6, "index": "a*n + x", "aum": [[0, 1, 2], [0, 2, 1]]}


def test_condition_report_c2():
    rep = check_aip_conditions(cyclic_group(2), mode="CIP")
    assert rep.aum_abelian and rep.autotopism_family and rep.base_property and rep.holomorph_property
    assert rep.iff_agrees and rep.trivial_aum_iff_agrees


def test_condition_report_c3():
    rep = check_aip_conditions(cyclic_group(3), mode="CIP")
    assert rep.holomorph_property is False
    assert rep.trivial_aum_iff_agrees


def test_autotopism_family_fails_on_c5():
    q = cyclic_group(5)
    assert not autotopism_family_holds(q, automorphism_group(q))


def test_cip_identity_variants():
    c3 = cyclic_group(3)
    ident = Permutation.identity(3)
    double = Permutation([0, 2, 1])
    for v in (1, 2, 3, 4):
        assert check_holomorph_cip_identity(c3, ident, ident, v)
    assert not check_holomorph_cip_identity(c3, double, ident, 1)


def test_cip_equivalents_on_loops_with_trivial_aum():
    for q in loops_of_order(5):
        aum = automorphism_group(q)
        if aum.is_trivial() and predicate(q, "CIP"):
            assert set(cip_equivalents(q, aum)) == {True}


def test_consequences_examples():
    rep = verify_corollaries(cyclic_group(2))
    assert rep.holomorph_cip and rep.isomorphic_to_holomorph and rep.flexible and rep.exponent2
    assert rep.ok
    assert verify_corollaries(cyclic_group(3)).vacuous
    c4 = cyclic_group(4)
    assert len(automorphism_group(c4)) == 2
    assert verify_corollaries(c4).vacuous


def test_biconditional_on_order_4_loops():
    for q in loops_of_order(4):
        aum = automorphism_group(q)
        h = build_holomorph(q, aum).base
        for mode in ("CIP", "AIP"):
            assert predicate(h, mode) == (aum.is_trivial() and predicate(q, mode))


def test_holomorph_limit():
    with pytest.raises(ValueError):
        build_holomorph(cyclic_group(7), limit=20)


def test_holomorph_of_a_group_is_associative():
    h = build_holomorph(cyclic_group(4)).base
    assert predicate(h, "associative")
    assert isinstance(h, CayleyTable)
