import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quasicrypt.algebra import (
    CayleyTable,
    InverseKind,
    NotAQuasigroup,
    PredicateUndefined,
    TableError,
    cip_identities,
    dumps_table,
    inverse_maps,
    left_translation,
    loads_table,
    mul,
    predicate,
    predicate_witness,
    rho_cycle_length,
    right_translation,
    validate,
)
from quasicrypt.corpus import loops_of_order
from quasicrypt.keedwell import cyclic_group, keedwell_cyclic

C2 = [[0, 1], [1, 0]]


def test_c2_is_a_quasigroup_with_identity_0():
    rep = validate(C2)
    assert rep.is_quasigroup and rep.identity == 0 and rep.is_loop


def test_constant_columns_are_only_a_groupoid():
    rep = validate([[0, 0], [1, 1]])
    assert rep.is_groupoid and not rep.is_quasigroup
    assert "row 0" in rep.latin_witness


def test_keedwell_c5_quasigroup_without_identity():
    rep = validate(keedwell_cyclic(5, 3, 2).tolist())
    assert rep.is_quasigroup and rep.identity is None


@pytest.mark.parametrize(
    "rows, fragment",
    [
        ([[0, 1], [1]], "row 1"),
        ([[0, 2], [1, 0]], "row 0, column 1"),
        ([[0, -1], [1, 0]], "row 0, column 1"),
        ([], "empty"),
    ],
)
def test_malformed_tables_name_the_offending_cell(rows, fragment):
    with pytest.raises(TableError, match=fragment):
        CayleyTable(rows)


def test_mul_examples():
    assert mul(CayleyTable(C2), 1, 1) == 0
    assert mul(keedwell_cyclic(5, 3, 2), 2, 3) == 2
    assert mul(keedwell_cyclic(11, 3, 4), 2, 4) == 0


def test_mul_rejects_out_of_range():
    with pytest.raises(IndexError):
        mul(CayleyTable(C2), 2, 0)


def test_translations():
    assert list(left_translation(CayleyTable(C2), 1).image) == [1, 0]
    k5 = keedwell_cyclic(5, 3, 2)
    assert list(right_translation(k5, 0).image) == [0, 3, 1, 4, 2]
    for q in loops_of_order(4):
        assert left_translation(q, q.identity).is_identity()


def test_translations_need_a_quasigroup():
    with pytest.raises(NotAQuasigroup):
        left_translation(CayleyTable([[0, 0], [1, 1]]), 0)


def test_c2_loop_inverses():
    maps = inverse_maps(CayleyTable(C2))
    assert maps.kind is InverseKind.LOOP
    assert maps.j_rho.is_identity() and maps.j_lambda.is_identity()


def test_keedwell_c11_crossed_inverse_is_6x():
    maps = inverse_maps(keedwell_cyclic(11, 3, 4))
    assert maps.kind is InverseKind.CROSSED
    assert list(maps.j_rho.image) == [(6 * x) % 11 for x in range(11)]


def test_keedwell_c5_crossed_inverse_is_not_identity():
    # Brute-force oracle: x -> 3x mod 5, not the identity.
    assert list(inverse_maps(keedwell_cyclic(5, 3, 2)).j_rho.image) == [0, 3, 1, 4, 2]


def test_non_cip_quasigroup_without_identity_has_no_inverse_maps():
    q = CayleyTable([[(2 * a + b + 1) % 3 for b in range(3)] for a in range(3)])
    assert q.identity is None
    assert inverse_maps(q) is None
    with pytest.raises(PredicateUndefined):
        predicate(q, "WIP")


def test_predicate_examples():
    assert predicate(keedwell_cyclic(5, 3, 2), "unipotent")
    assert predicate(keedwell_cyclic(11, 3, 4), "CIP")
    assert predicate(cyclic_group(3), "CIP")
    assert not predicate(cyclic_group(3), "exponent2")
    assert predicate_witness(cyclic_group(3), "exponent2") == (1,)


def test_predicate_names_are_case_insensitive():
    assert predicate(cyclic_group(4), "cip") == predicate(cyclic_group(4), "CIP")


def test_unknown_predicate():
    with pytest.raises(ValueError, match="unknown predicate"):
        predicate(cyclic_group(2), "moufang")


def test_associative_witness_is_a_triple():
    w = predicate_witness(keedwell_cyclic(11, 3, 4), "associative")
    t = keedwell_cyclic(11, 3, 4).table
    x, y, z = w
    assert t[t[x, y], z] != t[x, t[y, z]]


def test_flexible_witness_is_a_pair():
    q = keedwell_cyclic(11, 3, 4)
    x, y = predicate_witness(q, "flexible")
    t = q.table
    assert t[x, t[y, x]] != t[t[x, y], x]


def test_four_cip_identities_agree_on_keedwell():
    # variants 1, 2 solve for x^rho = 6x; variants 3, 4 for x^lambda = 2x
    expected = [6, 6, 2, 2]
    for (ok, jmap, witness), k in zip(cip_identities(keedwell_cyclic(11, 3, 4)), expected):
        assert ok and witness is None
        assert jmap.tolist() == [(k * x) % 11 for x in range(11)]


def test_rho_cycle_lengths():
    c11 = keedwell_cyclic(11, 3, 4)
    assert rho_cycle_length(c11, 1) == 10
    assert rho_cycle_length(c11, 0) == 1
    # Unipotent C5: J_rho is x -> 3x, of order 4.
    c5 = keedwell_cyclic(5, 3, 2)
    assert [rho_cycle_length(c5, x) for x in range(5)] == [1, 4, 4, 4, 4]
    for q in loops_of_order(4):
        assert rho_cycle_length(q, q.identity) == 1


def test_table_round_trip(tmp_path):
    q = keedwell_cyclic(11, 3, 4)
    path = tmp_path / "t.json"
    path.write_text(dumps_table(q))
    assert loads_table(path.read_text()) == q
    assert dumps_table(loads_table(dumps_table(q))) == dumps_table(q)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("{", "not valid JSON"),
        ('{"n": 2}', "keys"),
        ('{"n": 3, "table": [[0,1],[1,0]]}', "3"),
        ('{"n": 2, "table": [[0,1],[1,2]]}', "row 1, column 1"),
        ('{"n": 0, "table": []}', "positive"),
    ],
)
def test_loads_table_errors(text, fragment):
    with pytest.raises(TableError, match=fragment):
        loads_table(text)


def latin_squares():
    """Random isotopes of cyclic groups: always Latin."""
    return st.integers(1, 7).flatmap(
        lambda n: st.tuples(st.permutations(range(n)), st.permutations(range(n)), st.permutations(range(n))).map(
            lambda p: CayleyTable([[p[2][(p[0][a] + p[1][b]) % n] for b in range(n)] for a in range(n)])
        )
    )


@settings(max_examples=60, deadline=None)
@given(latin_squares())
def test_translations_of_quasigroups_are_bijections(q):
    for x in range(q.n):
        assert sorted(left_translation(q, x).image) == list(range(q.n))
        assert sorted(right_translation(q, x).image) == list(range(q.n))


@settings(max_examples=60, deadline=None)
@given(latin_squares())
def test_divisions_solve_the_equations(q):
    ldiv, rdiv = q.divisions()
    t = q.table
    idx = np.arange(q.n)
    assert np.array_equal(t[idx[:, None], ldiv], np.broadcast_to(idx[None, :], t.shape))
    assert np.array_equal(t[rdiv, idx[:, None]], np.broadcast_to(idx[None, :], t.shape))


@settings(max_examples=60, deadline=None)
@given(latin_squares())
def test_loops_have_mutually_inverse_maps(q):
    if not q.is_loop:
        return
    maps = inverse_maps(q)
    e, t = q.identity, q.table
    for x in range(q.n):
        assert t[x, maps.j_rho.image[x]] == e
        assert t[maps.j_lambda.image[x], x] == e


@settings(max_examples=60, deadline=None)
@given(latin_squares())
def test_cip_means_all_four_identities(q):
    flags = [ok for ok, _, _ in cip_identities(q)]
    if q.is_loop:
        assert len(set(flags)) == 1
    assert predicate(q, "CIP") == all(flags)
