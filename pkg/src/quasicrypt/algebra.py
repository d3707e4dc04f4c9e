"""Cayley tables of finite groupoids, quasigroups and loops.

Elements are the integers ``0..n-1``; ``table[x][y]`` is the product ``x*y``.
Every identity predicate is an exhaustive check over the table, backed by the
kernels in :mod:`quasicrypt.kernels`.

Table file grammar (UTF-8 JSON)::

    table-file := {"n": <int n >= 1>, "table": [row_0, ..., row_{n-1}]}
    row_i      := [<int in 0..n-1>, ... n entries]

:func:`dumps_table` writes one row per line so files diff cleanly;
``loads_table(dumps_table(q)) == q`` always holds.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .morphism import Permutation

__all__ = [
    "CayleyTable",
    "InverseKind",
    "InverseMaps",
    "NotAQuasigroup",
    "PREDICATES",
    "PredicateUndefined",
    "StructureReport",
    "TableError",
    "cip_identities",
    "dumps_table",
    "inverse_maps",
    "left_translation",
    "loads_table",
    "mul",
    "predicate",
    "predicate_witness",
    "rho_cycle_length",
    "right_translation",
    "validate",
]


class TableError(ValueError):
    """Malformed Cayley table."""


class NotAQuasigroup(TableError):
    """Operation requires the Latin property and the table lacks it."""


class PredicateUndefined(ValueError):
    """The requested identity needs inverse maps that the table does not have."""


class CayleyTable:
    """Immutable n x n operation table."""

    __slots__ = ("_t", "_cache")

    def __init__(self, table):
        rows = table.table if isinstance(table, CayleyTable) else table
        arr = _coerce(rows)
        arr.setflags(write=False)
        self._t = arr
        self._cache = {}

    @property
    def n(self) -> int:
        return self._t.shape[0]

    @property
    def table(self) -> np.ndarray:
        """Read-only int64 array view of the table."""
        return self._t

    def __call__(self, x: int, y: int) -> int:
        return int(self._t[x, y])

    def tolist(self) -> list:
        return self._t.tolist()

    def __eq__(self, other):
        if not isinstance(other, CayleyTable):
            return NotImplemented
        return self._t.shape == other._t.shape and bool(np.array_equal(self._t, other._t))

    def __hash__(self):
        return hash((self.n, self._t.tobytes()))

    def __repr__(self):
        return f"CayleyTable(n={self.n})"

    # Derived data is cached; the table never changes after construction.
    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def latin_violation(self):
        """``(axis, line, i, j)``: positions i, j of ``line`` (axis 0 = row) hold
        the same entry; None for a Latin square."""

        def compute():
            v = kernels.active.latin_violation(self._t)
            return None if v[0] < 0 else tuple(int(a) for a in v)

        return self._memo("latin", compute)

    @property
    def is_quasigroup(self) -> bool:
        return self.latin_violation is None

    @property
    def identity(self) -> Optional[int]:
        """The two-sided identity element, if any."""
        return self._memo("identity", lambda: _find_identity(self._t))

    @property
    def is_loop(self) -> bool:
        return self.is_quasigroup and self.identity is not None

    def divisions(self):
        self._require_quasigroup()
        return self._memo("div", lambda: kernels.divisions(self._t))

    def _require_quasigroup(self):
        if not self.is_quasigroup:
            raise NotAQuasigroup(_describe_latin_violation(self.latin_violation))


def _coerce(rows) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
            raise TableError(f"table must be square, got shape {rows.shape}")
        if rows.shape[0] == 0:
            raise TableError("table must be non-empty")
        if not np.issubdtype(rows.dtype, np.integer):
            raise TableError(f"table entries must be integers, got {rows.dtype}")
        arr = rows.astype(np.int64, copy=True)
    else:
        rows = list(rows)
        n = len(rows)
        if n == 0:
            raise TableError("table must be non-empty")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise TableError(f"row {i} has {len(row)} entries, expected {n}")
            for j, v in enumerate(row):
                if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                    raise TableError(f"entry at row {i}, column {j} is not an integer: {v!r}")
        arr = np.array(rows, dtype=np.int64).reshape(n, n)
    n = arr.shape[0]
    bad = np.argwhere((arr < 0) | (arr >= n))
    if bad.size:
        i, j = bad[0]
        raise TableError(f"entry at row {i}, column {j} is {arr[i, j]}, outside 0..{n - 1}")
    return arr


def _find_identity(t: np.ndarray) -> Optional[int]:
    idx = np.arange(t.shape[0])
    hits = np.flatnonzero((t == idx[None, :]).all(axis=1) & (t.T == idx[None, :]).all(axis=1))
    return int(hits[0]) if hits.size else None


def _describe_latin_violation(v) -> str:
    axis, line, p, q = (int(a) for a in v)
    if axis == 0:
        return f"row {line} repeats an entry at columns {p} and {q}"
    return f"column {line} repeats an entry at rows {p} and {q}"


@dataclass(frozen=True)
class StructureReport:
    is_groupoid: bool
    is_quasigroup: bool
    identity: Optional[int]
    latin_witness: Optional[str] = None

    @property
    def is_loop(self) -> bool:
        return self.is_quasigroup and self.identity is not None


def validate(table) -> StructureReport:
    """Classify a table; raises :class:`TableError` if it is malformed."""
    q = table if isinstance(table, CayleyTable) else CayleyTable(table)
    witness = None if q.is_quasigroup else _describe_latin_violation(q.latin_violation)
    return StructureReport(True, q.is_quasigroup, q.identity, witness)


def mul(q: CayleyTable, x: int, y: int) -> int:
    n = q.n
    if not (0 <= x < n and 0 <= y < n):
        raise IndexError(f"elements ({x}, {y}) out of range for order {n}")
    return int(q.table[x, y])


def left_translation(q: CayleyTable, x: int) -> Permutation:
    """L_x : y -> x*y."""
    q._require_quasigroup()
    return Permutation(q.table[x, :])


def right_translation(q: CayleyTable, x: int) -> Permutation:
    """R_x : y -> y*x."""
    q._require_quasigroup()
    return Permutation(q.table[:, x])


class InverseKind(enum.Enum):
    LOOP = "loop-inverse"
    CROSSED = "crossed-inverse"


@dataclass(frozen=True)
class InverseMaps:
    j_rho: Permutation
    j_lambda: Permutation
    kind: InverseKind


def cip_identities(q: CayleyTable):
    """Check the four cross-inverse identities independently.

    Returns a tuple of four ``(holds, map, witness)`` triples for
    ``xy.x^r = y``, ``x.yx^r = y``, ``x^l.yx = y`` and ``x^l y.x = y``.  Each
    map is solved from the identity itself (the unique candidate forced at
    ``y = 0``), so no identity element is needed.
    """
    def compute():
        ldiv, rdiv = q.divisions()
        out = []
        for variant in (1, 2, 3, 4):
            j, viol = kernels.active.cip_check(q.table, ldiv, rdiv, variant)
            ok = bool(viol[0] < 0)
            out.append((ok, j, None if ok else (int(viol[0]), int(viol[1]))))
        return tuple(out)

    return q._memo("cip", compute)


def inverse_maps(q: CayleyTable) -> Optional[InverseMaps]:
    """Right/left inverse mappings J_rho, J_lambda.

    For a loop these are the ordinary inverses ``x*x^r = e = x^l*x``.
    Without an identity they are the crossed inverses defined by the CIP
    identities; ``None`` when no such maps exist.
    """
    def compute():
        ldiv, rdiv = q.divisions()
        e = q.identity
        if e is not None:
            return InverseMaps(Permutation(ldiv[:, e]), Permutation(rdiv[:, e]), InverseKind.LOOP)
        checks = cip_identities(q)
        if not (checks[0][0] and checks[2][0]):
            return None
        return InverseMaps(Permutation(checks[0][1]), Permutation(checks[2][1]), InverseKind.CROSSED)

    return q._memo("inverse", compute)


PREDICATES = (
    "WIP",
    "AIP",
    "CIP",
    "flexible",
    "unipotent",
    "exponent2",
    "commutative",
    "associative",
)

_CANON = {p.lower(): p for p in PREDICATES}


def _pair(v):
    return None if v[0] < 0 else tuple(int(a) for a in v)


def predicate_witness(q: CayleyTable, which: str):
    """Counterexample to property ``which``, or ``None`` if it holds.

    Witnesses are element tuples: ``(x, y)`` for two-variable identities,
    ``(x, y, z)`` for associativity, ``(x,)`` for unipotence/exponent 2.
    Raises :class:`PredicateUndefined` for WIP/AIP without inverse maps.
    """
    key = _CANON.get(which.lower())
    if key is None:
        raise ValueError(f"unknown predicate {which!r}; expected one of {', '.join(PREDICATES)}")
    t = q.table
    act = kernels.active
    if key == "commutative":
        bad = np.argwhere(t != t.T)
        return None if bad.size == 0 else tuple(int(a) for a in bad[0])
    if key == "associative":
        return _pair(act.associative_violation(t))
    if key == "flexible":
        return _pair(act.flexible_violation(t))
    if key == "unipotent":
        diag = np.diagonal(t)
        bad = np.flatnonzero(diag != diag[0])
        return None if bad.size == 0 else (int(bad[0]),)
    if key == "exponent2":
        e = q.identity
        if e is None or not q.is_quasigroup:
            raise PredicateUndefined("exponent 2 needs a loop (no two-sided identity)")
        bad = np.flatnonzero(np.diagonal(t) != e)
        return None if bad.size == 0 else (int(bad[0]),)

    q._require_quasigroup()
    if key == "CIP":
        for ok, _, witness in cip_identities(q):
            if not ok:
                return witness
        return None
    maps = inverse_maps(q)
    if maps is None:
        raise PredicateUndefined(f"{key} needs inverse maps; this quasigroup has neither an identity nor crossed inverses")
    j = maps.j_rho.array
    if key == "WIP":
        return _pair(act.wip_violation(t, j))
    return _pair(act.aip_violation(t, j))


def predicate(q: CayleyTable, which: str) -> bool:
    return predicate_witness(q, which) is None


def rho_cycle_length(q: CayleyTable, x: int) -> int:
    """Length of the orbit of ``x`` under J_rho."""
    maps = inverse_maps(q)
    if maps is None:
        raise PredicateUndefined("no inverse maps; J_rho cycles are undefined")
    img = maps.j_rho.image
    k, y = 1, img[x]
    while y != x:
        y = img[y]
        k += 1
    return k


def dumps_table(q: CayleyTable) -> str:
    rows = ",\n".join("  " + json.dumps(row) for row in q.tolist())
    return '{"n": %d, "table": [\n%s\n]}\n' % (q.n, rows)


def loads_table(text: str) -> CayleyTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "n" not in doc or "table" not in doc:
        raise TableError('expected an object with keys "n" and "table"')
    n, rows = doc["n"], doc["table"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise TableError(f'"n" must be a positive integer, got {n!r}')
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise TableError('"table" must be a list of rows')
    if len(rows) != n:
        raise TableError(f'"table" has {len(rows)} rows but n = {n}')
    return CayleyTable(rows)
