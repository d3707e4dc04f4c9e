"""Permutations, mapping triples and the AUM/AUT machinery.

Maps act on the right: ``x(pq) = (xp)q``, so ``compose(p, q)`` applies ``p``
first.  ``Permutation.image[x]`` is ``xp``.  Group elements are kept sorted
lexicographically by image.

File formats::

    {"n": <int>, "image": [<ints>]}                     permutation
    {"n": <int>, "elements": [[<ints>], ...]}           group, sorted
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels

log = logging.getLogger(__name__)

DEFAULT_LIMIT = 12


class OrderLimitError(ValueError):
    """Search refused: the table is larger than the configured bound."""


class Permutation:
    """A bijection of ``0..n-1``, stored as its image tuple."""

    __slots__ = ("image", "_arr")

    def __init__(self, image: Iterable[int]):
        img = tuple(int(v) for v in image)
        n = len(img)
        if sorted(img) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {list(img)}")
        self.image = img
        self._arr = None

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @property
    def n(self) -> int:
        return len(self.image)

    @property
    def array(self) -> np.ndarray:
        if self._arr is None:
            arr = np.array(self.image, dtype=np.int64)
            arr.setflags(write=False)
            self._arr = arr
        return self._arr

    def __call__(self, x: int) -> int:
        return self.image[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        return invert(self)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.image))

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.image == other.image

    def __lt__(self, other):
        return self.image < other.image

    def __hash__(self):
        return hash(self.image)

    def __len__(self):
        return len(self.image)

    def __repr__(self):
        return f"Permutation({list(self.image)})"

    def cycles(self) -> str:
        seen, out = set(), []
        for i in range(self.n):
            if i in seen or self.image[i] == i:
                continue
            cyc, j = [i], self.image[i]
            seen.add(i)
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.image[j]
            out.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(out) or "()"


def _same_degree(*ps: Permutation) -> int:
    n = ps[0].n
    for p in ps[1:]:
        if p.n != n:
            raise ValueError(f"degree mismatch: {n} vs {p.n}")
    return n


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``p`` then ``q``."""
    _same_degree(p, q)
    return Permutation(q.image[v] for v in p.image)


def invert(p: Permutation) -> Permutation:
    inv = [0] * p.n
    for x, v in enumerate(p.image):
        inv[v] = x
    return Permutation(inv)


def apply(p: Permutation, x: int) -> int:
    return p.image[x]


def conjugate(alpha: Permutation, psi: Permutation) -> Permutation:
    """psi^-1 alpha psi."""
    return compose(compose(invert(psi), alpha), psi)


@dataclass(frozen=True)
class MappingTriple:
    a: Permutation
    b: Permutation
    c: Permutation

    def __post_init__(self):
        _same_degree(self.a, self.b, self.c)

    @property
    def n(self) -> int:
        return self.a.n

    def inverse(self) -> "MappingTriple":
        return MappingTriple(invert(self.a), invert(self.b), invert(self.c))

    def then(self, other: "MappingTriple") -> "MappingTriple":
        """Componentwise composition, ``self`` first."""
        return MappingTriple(compose(self.a, other.a), compose(self.b, other.b), compose(self.c, other.c))


class PermGroup:
    """A finite permutation group given by all of its elements."""

    __slots__ = ("degree", "elements", "_index")

    def __init__(self, elements: Iterable[Permutation], degree: Optional[int] = None, check: bool = True):
        elems = sorted(set(elements))
        if not elems:
            raise ValueError("a group needs at least the identity")
        deg = elems[0].n if degree is None else degree
        if any(p.n != deg for p in elems):
            raise ValueError("all elements must have the same degree")
        self.degree = deg
        self.elements = tuple(elems)
        self._index = {p: i for i, p in enumerate(self.elements)}
        if check:
            bad = self.closure_violation()
            if bad is not None:
                raise ValueError(f"not a group: {bad}")

    @classmethod
    def trivial(cls, n: int) -> "PermGroup":
        return cls([Permutation.identity(n)])

    def closure_violation(self) -> Optional[str]:
        if Permutation.identity(self.degree) not in self._index:
            return "identity missing"
        for p in self.elements:
            if invert(p) not in self._index:
                return f"inverse of {p.cycles()} missing"
            for q in self.elements:
                if compose(p, q) not in self._index:
                    return f"product of {p.cycles()} and {q.cycles()} missing"
        return None

    def index(self, p: Permutation) -> int:
        """Canonical ordinal of ``p``."""
        return self._index[p]

    def __contains__(self, p) -> bool:
        return p in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.degree == other.degree and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={len(self)})"

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def multiplication_table(self) -> np.ndarray:
        """``M[i, j]`` is the ordinal of ``elements[i] * elements[j]``."""
        m = len(self.elements)
        arr = np.array([p.image for p in self.elements], dtype=np.int64).reshape(m, self.degree)
        lookup = {p.image: i for i, p in enumerate(self.elements)}
        out = np.empty((m, m), dtype=np.int64)
        for i in range(m):
            # row j of comp is elements[i] followed by elements[j]
            comp = arr[:, arr[i]]
            for j in range(m):
                out[i, j] = lookup[tuple(comp[j].tolist())]
        return out


def is_automorphism(q, p: Permutation) -> bool:
    if p.n != q.n:
        raise ValueError(f"degree mismatch: permutation {p.n}, table {q.n}")
    a = p.array
    return bool(kernels.active.isotopism_violation(q.table, q.table, a, a, a)[0] < 0)


def is_autotopism(q, t: MappingTriple) -> bool:
    return is_isotopism(q, q, t)


def is_isotopism(q1, q2, t: MappingTriple) -> bool:
    """True iff ``xA * yB = (x . y)C`` for all x, y (``.`` in q1, ``*`` in q2)."""
    return isotopism_witness(q1, q2, t) is None


def isotopism_witness(q1, q2, t: MappingTriple):
    if not (t.n == q1.n == q2.n):
        raise ValueError(f"degree mismatch: triple {t.n}, tables {q1.n}/{q2.n}")
    v = kernels.active.isotopism_violation(q1.table, q2.table, t.a.array, t.b.array, t.c.array)
    return None if v[0] < 0 else (int(v[0]), int(v[1]))


def _check_limit(n: int, limit: int):
    if n > limit:
        raise OrderLimitError(f"order {n} exceeds the search limit {limit}")


def automorphism_group(q, limit: int = DEFAULT_LIMIT) -> PermGroup:
    """AUM(q) by backtracking; every element is closed under the operation."""
    _check_limit(q.n, limit)
    found = kernels.active.morphism_search(q.table, q.table, True)
    group = PermGroup((Permutation(row) for row in found), degree=q.n, check=True)
    return group


def automorphisms_brute_force(q) -> PermGroup:
    """Filter all n! permutations; the oracle for :func:`automorphism_group`."""
    return PermGroup(
        (Permutation(p) for p in permutations(range(q.n)) if is_automorphism(q, Permutation(p))),
        degree=q.n,
    )


def _invariants(q):
    t = q.table
    diag = np.diagonal(t)
    idem = int(np.count_nonzero(diag == np.arange(q.n)))
    return idem, sorted(np.bincount(diag, minlength=q.n).tolist())


def find_isomorphism(q1, q2, limit: int = DEFAULT_LIMIT) -> Optional[Permutation]:
    """A bijection phi with ``(x.y)phi = xphi * yphi``, or None."""
    if q1.n != q2.n:
        log.debug("no isomorphism: orders %d and %d differ", q1.n, q2.n)
        return None
    _check_limit(q1.n, limit)
    if _invariants(q1) != _invariants(q2):
        log.debug("no isomorphism: squaring invariants differ")
        return None
    found = kernels.active.morphism_search(q1.table, q2.table, False)
    return Permutation(found[0]) if len(found) else None


def conjugate_group(g: PermGroup, psi: Permutation) -> PermGroup:
    if psi.n != g.degree:
        raise ValueError(f"degree mismatch: group {g.degree}, psi {psi.n}")
    return PermGroup((conjugate(a, psi) for a in g), degree=g.degree, check=False)


def is_abelian(g: PermGroup) -> bool:
    els = g.elements
    return all(compose(p, q) == compose(q, p) for i, p in enumerate(els) for q in els[i + 1:])


def symmetric_group(n: int) -> PermGroup:
    return PermGroup((Permutation(p) for p in permutations(range(n))), degree=n, check=False)


def dumps_permutation(p: Permutation) -> str:
    return json.dumps({"n": p.n, "image": list(p.image)}) + "\n"


def loads_permutation(text: str) -> Permutation:
    doc = json.loads(text)
    return _perm_from(doc.get("image"), doc.get("n"))


def dumps_group(g: PermGroup) -> str:
    rows = ",\n".join("  " + json.dumps(list(p.image)) for p in g)
    return '{"n": %d, "elements": [\n%s\n]}\n' % (g.degree, rows)


def loads_group(text: str) -> PermGroup:
    doc = json.loads(text)
    n = doc.get("n")
    return PermGroup((_perm_from(img, n) for img in doc.get("elements", [])), degree=n)


def _perm_from(image: Sequence[int], n) -> Permutation:
    if not isinstance(image, list) or not isinstance(n, int) or len(image) != n:
        raise ValueError(f"permutation record must have n={n} and a matching image list")
    return Permutation(image)
