"""Hot inner loops over Cayley tables.

Every kernel exists twice: an explicit-loop version that numba compiles, and a
vectorized numpy version.  The backtracking searches have no sensible
vectorized form, so their numpy path is the same loop source run uncompiled.
``QUASICRYPT_NO_NUMBA=1`` selects the numpy path (see ``_accel``).

All kernels take int64 arrays.  Violation finders return an int64 array of
element indices for the first failing tuple in row-major order, or all -1.
"""
from types import SimpleNamespace

import numpy as np

from . import _accel

__all__ = ["BACKENDS", "active", "backend_name", "divisions"]


def divisions(t):
    """Left and right division tables of a Latin square.

    ``ldiv[a, b]`` solves ``a * x = b``; ``rdiv[a, b]`` solves ``y * a = b``.
    """
    n = t.shape[0]
    idx = np.arange(n)
    ldiv = np.empty_like(t)
    rdiv = np.empty_like(t)
    ldiv[idx[:, None], t] = idx[None, :]
    rdiv[idx[None, :], t] = idx[:, None]
    return ldiv, rdiv


# ---------------------------------------------------------------------------
# loop implementations (numba-compatible)
# ---------------------------------------------------------------------------


def _latin_violation_loop(t):
    n = t.shape[0]
    out = np.full(4, -1, np.int64)
    seen = np.full(n, -1, np.int64)
    for axis in range(2):
        for line in range(n):
            seen[:] = -1
            for pos in range(n):
                v = t[line, pos] if axis == 0 else t[pos, line]
                if seen[v] >= 0:
                    out[0] = axis
                    out[1] = line
                    out[2] = seen[v]
                    out[3] = pos
                    return out
                seen[v] = pos
    return out


def _cip_check_loop(t, ldiv, rdiv, variant):
    n = t.shape[0]
    j = np.empty(n, np.int64)
    viol = np.full(2, -1, np.int64)
    for x in range(n):
        if variant == 1:
            j[x] = ldiv[t[x, 0], 0]
        elif variant == 2:
            j[x] = ldiv[0, ldiv[x, 0]]
        elif variant == 3:
            j[x] = rdiv[t[0, x], 0]
        else:
            j[x] = rdiv[0, rdiv[x, 0]]
    for x in range(n):
        z = j[x]
        for y in range(n):
            if variant == 1:
                ok = t[t[x, y], z] == y
            elif variant == 2:
                ok = t[x, t[y, z]] == y
            elif variant == 3:
                ok = t[z, t[y, x]] == y
            else:
                ok = t[t[z, y], x] == y
            if not ok:
                viol[0] = x
                viol[1] = y
                return j, viol
    return j, viol


def _wip_violation_loop(t, j):
    n = t.shape[0]
    out = np.full(2, -1, np.int64)
    for x in range(n):
        for y in range(n):
            if t[x, j[t[y, x]]] != j[y]:
                out[0] = x
                out[1] = y
                return out
    return out


def _aip_violation_loop(t, j):
    n = t.shape[0]
    out = np.full(2, -1, np.int64)
    for x in range(n):
        for y in range(n):
            if j[t[x, y]] != t[j[x], j[y]]:
                out[0] = x
                out[1] = y
                return out
    return out


def _flexible_violation_loop(t):
    n = t.shape[0]
    out = np.full(2, -1, np.int64)
    for x in range(n):
        for y in range(n):
            if t[x, t[y, x]] != t[t[x, y], x]:
                out[0] = x
                out[1] = y
                return out
    return out


def _associative_violation_loop(t):
    n = t.shape[0]
    out = np.full(3, -1, np.int64)
    for x in range(n):
        for y in range(n):
            xy = t[x, y]
            for z in range(n):
                if t[xy, z] != t[x, t[y, z]]:
                    out[0] = x
                    out[1] = y
                    out[2] = z
                    return out
    return out


def _isotopism_violation_loop(t1, t2, a, b, c):
    n = t1.shape[0]
    out = np.full(2, -1, np.int64)
    for x in range(n):
        for y in range(n):
            if t2[a[x], b[y]] != c[t1[x, y]]:
                out[0] = x
                out[1] = y
                return out
    return out


def _morphism_search_loop(t1, t2, find_all):
    """Bijections phi with phi[t1[x, y]] == t2[phi[x], phi[y]].

    Depth-first over images of the smallest unassigned element; every
    assignment is closed under the operation before branching again, which
    prunes row by row.
    """
    n = t1.shape[0]
    phi = np.full(n, -1, np.int64)
    used = np.zeros(n, np.bool_)
    trail = np.empty(n, np.int64)
    lvl_x = np.empty(n + 1, np.int64)
    lvl_cand = np.empty(n + 1, np.int64)
    lvl_tlen = np.empty(n + 1, np.int64)
    out = np.empty((4, n), np.int64)
    count = 0
    tlen = 0
    depth = 0
    lvl_x[0] = 0
    lvl_cand[0] = 0
    lvl_tlen[0] = 0
    while depth >= 0:
        while tlen > lvl_tlen[depth]:
            tlen -= 1
            u = trail[tlen]
            used[phi[u]] = False
            phi[u] = -1
        c = lvl_cand[depth]
        while c < n and used[c]:
            c += 1
        if c >= n:
            depth -= 1
            continue
        lvl_cand[depth] = c + 1

        x = lvl_x[depth]
        phi[x] = c
        used[c] = True
        trail[tlen] = x
        tlen += 1
        ok = True
        q = tlen - 1
        while ok and q < tlen:
            v = trail[q]
            q += 1
            for i in range(q):
                a = trail[i]
                for side in range(2):
                    if side == 0:
                        p, r = v, a
                    else:
                        p, r = a, v
                    d = t1[p, r]
                    want = t2[phi[p], phi[r]]
                    if phi[d] < 0:
                        if used[want]:
                            ok = False
                            break
                        phi[d] = want
                        used[want] = True
                        trail[tlen] = d
                        tlen += 1
                    elif phi[d] != want:
                        ok = False
                        break
                if not ok:
                    break
        if not ok:
            continue
        if tlen == n:
            if count == out.shape[0]:
                grown = np.empty((2 * out.shape[0], n), np.int64)
                grown[:count] = out[:count]
                out = grown
            out[count] = phi
            count += 1
            if not find_all:
                break
            continue
        nx = 0
        while phi[nx] >= 0:
            nx += 1
        depth += 1
        lvl_x[depth] = nx
        lvl_cand[depth] = 0
        lvl_tlen[depth] = tlen
    return out[:count].copy()


def _reduced_latin_squares_loop(n):
    """All Latin squares of order n with row 0 and column 0 equal to 0..n-1."""
    out = np.empty((8, n, n), np.int64)
    count = 0
    sq = np.full((n, n), -1, np.int64)
    row_used = np.zeros((n, n), np.bool_)
    col_used = np.zeros((n, n), np.bool_)
    for i in range(n):
        sq[0, i] = i
        sq[i, 0] = i
        row_used[0, i] = True
        col_used[i, i] = True
        row_used[i, i] = True
        col_used[0, i] = True
    cells = (n - 1) * (n - 1)
    if cells == 0:
        out[0] = sq
        return out[:1].copy()
    cand = np.zeros(cells, np.int64)
    k = 0
    while k >= 0:
        if k == cells:
            if count == out.shape[0]:
                grown = np.empty((2 * out.shape[0], n, n), np.int64)
                grown[:count] = out[:count]
                out = grown
            out[count] = sq
            count += 1
            k -= 1
            continue
        i = 1 + k // (n - 1)
        j = 1 + k % (n - 1)
        if sq[i, j] >= 0:
            v = sq[i, j]
            row_used[i, v] = False
            col_used[j, v] = False
            sq[i, j] = -1
        v = cand[k]
        while v < n and (row_used[i, v] or col_used[j, v]):
            v += 1
        if v >= n:
            cand[k] = 0
            k -= 1
            continue
        cand[k] = v + 1
        sq[i, j] = v
        row_used[i, v] = True
        col_used[j, v] = True
        k += 1
    return out[:count].copy()


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def _first(mask, width):
    bad = np.argwhere(~mask)
    if bad.size == 0:
        return np.full(width, -1, np.int64)
    return bad[0].astype(np.int64)


def _latin_violation_np(t):
    n = t.shape[0]
    for axis, lines in ((0, t), (1, t.T)):
        counts = np.zeros((n, n), np.int64)
        np.add.at(counts, (np.repeat(np.arange(n), n), lines.ravel()), 1)
        bad = np.flatnonzero((counts > 1).any(axis=1))
        if bad.size:
            line = int(bad[0])
            row = lines[line]
            # earliest position repeating a value, paired with the first occurrence
            first = np.full(n, n, np.int64)
            np.minimum.at(first, row, np.arange(n))
            pos = int(np.flatnonzero(first[row] != np.arange(n))[0])
            return np.array([axis, line, first[row[pos]], pos], np.int64)
    return np.full(4, -1, np.int64)


def _cip_check_np(t, ldiv, rdiv, variant):
    n = t.shape[0]
    xs = np.arange(n)
    if variant == 1:
        j = ldiv[t[:, 0], 0]
        mask = t[t, j[:, None]] == xs[None, :]
    elif variant == 2:
        j = ldiv[0, ldiv[:, 0]]
        mask = t[xs[:, None], t[xs[None, :], j[:, None]]] == xs[None, :]
    elif variant == 3:
        j = rdiv[t[0, :], 0]
        mask = t[j[:, None], t.T] == xs[None, :]
    else:
        j = rdiv[0, rdiv[:, 0]]
        mask = t[t[j[:, None], xs[None, :]], xs[:, None]] == xs[None, :]
    return j.astype(np.int64), _first(mask, 2)


def _wip_violation_np(t, j):
    return _first(t[np.arange(t.shape[0])[:, None], j[t.T]] == j[None, :], 2)


def _aip_violation_np(t, j):
    return _first(j[t] == t[j[:, None], j[None, :]], 2)


def _flexible_violation_np(t):
    xs = np.arange(t.shape[0])
    return _first(t[xs[:, None], t.T] == t[t, xs[:, None]], 2)


def _associative_violation_np(t):
    n = t.shape[0]
    left = t[t[:, :, None], np.arange(n)[None, None, :]]
    right = t[np.arange(n)[:, None, None], t[None, :, :]]
    return _first(left == right, 3)


def _isotopism_violation_np(t1, t2, a, b, c):
    return _first(t2[a[:, None], b[None, :]] == c[t1], 2)


_LOOP_KERNELS = dict(
    latin_violation=_latin_violation_loop,
    cip_check=_cip_check_loop,
    wip_violation=_wip_violation_loop,
    aip_violation=_aip_violation_loop,
    flexible_violation=_flexible_violation_loop,
    associative_violation=_associative_violation_loop,
    isotopism_violation=_isotopism_violation_loop,
)

BACKENDS = {
    "numpy": SimpleNamespace(
        latin_violation=_latin_violation_np,
        cip_check=_cip_check_np,
        wip_violation=_wip_violation_np,
        aip_violation=_aip_violation_np,
        flexible_violation=_flexible_violation_np,
        associative_violation=_associative_violation_np,
        isotopism_violation=_isotopism_violation_np,
        morphism_search=_morphism_search_loop,
        reduced_latin_squares=_reduced_latin_squares_loop,
    ),
}

if _accel.NUMBA_AVAILABLE:
    BACKENDS["numba"] = SimpleNamespace(
        morphism_search=_accel.njit(_morphism_search_loop),
        reduced_latin_squares=_accel.njit(_reduced_latin_squares_loop),
        **{name: _accel.njit(fn) for name, fn in _LOOP_KERNELS.items()},
    )

backend_name = "numba" if _accel.USE_NUMBA else "numpy"
active = BACKENDS[backend_name]
