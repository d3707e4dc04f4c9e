import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quasicrypt import _accel, kernels
from quasicrypt.corpus import loops_of_order
from quasicrypt.keedwell import keedwell_cyclic

pytestmark = pytest.mark.skipif("numba" not in kernels.BACKENDS, reason="numba not installed")

NP = kernels.BACKENDS["numpy"]
NB = kernels.BACKENDS.get("numba")


def tables():
    """Latin squares (isotopes of cyclic groups) and arbitrary groupoids."""
    latin = st.integers(1, 8).flatmap(
        lambda n: st.tuples(st.permutations(range(n)), st.permutations(range(n)), st.permutations(range(n))).map(
            lambda p: np.array([[p[2][(p[0][a] + p[1][b]) % n] for b in range(n)] for a in range(n)], dtype=np.int64)
        )
    )
    raw = st.integers(1, 6).flatmap(
        lambda n: st.lists(st.integers(0, n - 1), min_size=n * n, max_size=n * n).map(
            lambda v: np.array(v, dtype=np.int64).reshape(n, n)
        )
    )
    return st.one_of(latin, raw)


def as_tuple(v):
    return tuple(int(a) for a in v)


@settings(max_examples=100, deadline=None)
@given(tables())
def test_latin_and_identity_kernels_agree(t):
    assert as_tuple(NP.latin_violation(t)) == as_tuple(NB.latin_violation(t))
    assert as_tuple(NP.flexible_violation(t)) == as_tuple(NB.flexible_violation(t))
    assert as_tuple(NP.associative_violation(t)) == as_tuple(NB.associative_violation(t))


@settings(max_examples=100, deadline=None)
@given(tables())
def test_inverse_kernels_agree_on_quasigroups(t):
    if NP.latin_violation(t)[0] >= 0:
        return
    ldiv, rdiv = kernels.divisions(t)
    for variant in (1, 2, 3, 4):
        j1, v1 = NP.cip_check(t, ldiv, rdiv, variant)
        j2, v2 = NB.cip_check(t, ldiv, rdiv, variant)
        assert np.array_equal(j1, j2) and as_tuple(v1) == as_tuple(v2)
    j = ldiv[t[:, 0], 0]
    assert as_tuple(NP.wip_violation(t, j)) == as_tuple(NB.wip_violation(t, j))
    assert as_tuple(NP.aip_violation(t, j)) == as_tuple(NB.aip_violation(t, j))


@settings(max_examples=60, deadline=None)
@given(tables(), st.randoms(use_true_random=False))
def test_isotopism_kernel_agrees(t, rng):
    n = t.shape[0]
    a, b, c = (np.array(rng.sample(range(n), n), dtype=np.int64) for _ in range(3))
    t2 = c[t][np.argsort(a)][:, np.argsort(b)]
    assert as_tuple(NP.isotopism_violation(t, t2, a, b, c)) == (-1, -1)
    assert as_tuple(NB.isotopism_violation(t, t2, a, b, c)) == (-1, -1)
    t3 = t2.copy()
    t3[0, 0] = (t3[0, 0] + 1) % n
    assert as_tuple(NP.isotopism_violation(t, t3, a, b, c)) == as_tuple(NB.isotopism_violation(t, t3, a, b, c))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_search_kernels_agree(n):
    sq_np, sq_nb = NP.reduced_latin_squares(n), NB.reduced_latin_squares(n)
    assert np.array_equal(sq_np, sq_nb)
    for sq in sq_nb[:20]:
        assert np.array_equal(NP.morphism_search(sq, sq, True), NB.morphism_search(sq, sq, True))


def test_reduced_latin_square_counts():
    # OEIS A000315
    assert [len(NB.reduced_latin_squares(n)) for n in range(1, 7)] == [1, 1, 1, 4, 56, 9408]


def test_morphism_search_single_and_all():
    t = keedwell_cyclic(11, 3, 4).table
    every = NB.morphism_search(t, t, True)
    first = NB.morphism_search(t, t, False)
    assert len(every) == 10 and len(first) == 1
    assert any(np.array_equal(first[0], row) for row in every)


def test_divisions():
    for q in loops_of_order(4):
        ldiv, rdiv = kernels.divisions(q.table)
        idx = np.arange(q.n)
        assert (q.table[idx[:, None], ldiv] == idx[None, :]).all()


def test_env_flag_selects_numpy():
    code = "from quasicrypt import kernels, _accel; print(kernels.backend_name, _accel.USE_NUMBA)"
    env = dict(os.environ, QUASICRYPT_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "False"]
    env.pop("QUASICRYPT_NO_NUMBA")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numba", "True"]


def test_numpy_backend_runs_the_acceptance_fixtures():
    code = (
        "from quasicrypt.verify import osborn_suite, keedwell_suite;"
        "print(osborn_suite(4).passed, keedwell_suite(20).passed)"
    )
    env = dict(os.environ, QUASICRYPT_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["True", "True"]


def test_active_backend_matches_flag():
    assert kernels.backend_name == ("numba" if _accel.USE_NUMBA else "numpy")
