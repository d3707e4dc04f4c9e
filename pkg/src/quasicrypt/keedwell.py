"""Abelian groups and Keedwell cross-inverse quasigroups.

Over an abelian group G of order n with ``r*s = n + 1`` the operation
``a o b = a^r b^s`` is a CIP quasigroup whose right crossed inverse is
``a -> a^u`` with ``u = (-r)^3 mod n``.  Powers are computed in G by
square-and-multiply on the Cayley table; :func:`keedwell_cyclic` is the
additive shortcut ``(r*a + s*b) mod n`` for cyclic G.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .algebra import CayleyTable, predicate

TABLE_LIMIT = 1024


@dataclass(frozen=True)
class AbelianGroupSpec:
    """Direct product of cyclic groups of the given orders."""

    factors: Tuple[int, ...]

    def __init__(self, factors: Sequence[int]):
        facs = tuple(int(f) for f in factors)
        if not facs:
            raise ValueError("need at least one cyclic factor")
        if any(f < 2 for f in facs):
            raise ValueError(f"cyclic factors must be >= 2, got {facs}")
        object.__setattr__(self, "factors", facs)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.factors)


def build_abelian_group(spec: AbelianGroupSpec, limit: int = TABLE_LIMIT) -> CayleyTable:
    """Cayley table of Z_{n1} x ... x Z_{nk}.

    Element indices are mixed-radix with the first factor most significant;
    0 is the identity.
    """
    n = spec.order
    if n > limit:
        raise ValueError(f"group order {n} exceeds the table limit {limit}")
    digits = np.array(np.unravel_index(np.arange(n), spec.factors)).T  # (n, k)
    summed = (digits[:, None, :] + digits[None, :, :]) % np.array(spec.factors)
    return CayleyTable(np.ravel_multi_index(tuple(np.moveaxis(summed, -1, 0)), spec.factors))


def cyclic_group(n: int) -> CayleyTable:
    return build_abelian_group(AbelianGroupSpec((n,)))


def crossed_inverse_exponent(r: int, n: int) -> int:
    if n < 2:
        raise ValueError("n must be >= 2")
    return (-r) ** 3 % n


def multiplicative_order(u: int, n: int) -> int:
    """Order of ``u`` in the unit group mod n (1 when n == 1)."""
    if math.gcd(u, n) != 1:
        raise ValueError(f"{u} is not a unit mod {n}")
    k, x = 1, u % n
    while x != 1 % n:
        x = x * u % n
        k += 1
    return k


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    return all(m % p for p in range(2, math.isqrt(m) + 1))


@dataclass(frozen=True)
class KeedwellParams:
    n: int
    r: int
    s: int
    u: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.r * self.s != self.n + 1:
            raise ValueError(f"r*s = {self.r * self.s} but n+1 = {self.n + 1}")
        if _is_prime(self.n + 1):
            raise ValueError(f"n+1 = {self.n + 1} is prime")
        if self.u != crossed_inverse_exponent(self.r, self.n):
            raise ValueError(f"u must be (-r)^3 mod n = {crossed_inverse_exponent(self.r, self.n)}")

    @classmethod
    def make(cls, n: int, r: int, s: int) -> "KeedwellParams":
        return cls(n, r, s, crossed_inverse_exponent(r, n))

    @property
    def nonunipotent(self) -> bool:
        return self.r + self.s != self.n

    @property
    def rho_order(self) -> int:
        """Order of J_rho (x -> x^u) on the cyclic group of order n."""
        return multiplicative_order(self.u, self.n)

    def to_dict(self) -> dict:
        return {"n": self.n, "r": self.r, "s": self.s, "u": self.u, "nonunipotent": self.nonunipotent}

    @classmethod
    def from_dict(cls, doc: dict) -> "KeedwellParams":
        return cls(int(doc["n"]), int(doc["r"]), int(doc["s"]), int(doc["u"]))


def find_params(n: int, require_nonunipotent: bool = False) -> List[KeedwellParams]:
    """Every split ``n + 1 = r*s`` with ``r, s >= 2``.

    Ordered by longest inverse cycle first (order of ``u`` mod n), then by r.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    out = []
    for r in range(2, n):
        if (n + 1) % r:
            continue
        s = (n + 1) // r
        if s < 2:
            continue
        p = KeedwellParams.make(n, r, s)
        if require_nonunipotent and not p.nonunipotent:
            continue
        out.append(p)
    out.sort(key=lambda p: (-p.rho_order, p.r))
    return out


def _check_abelian_group(g: CayleyTable):
    t = g.table
    if not g.is_loop:
        raise ValueError("base table is not a loop")
    if not np.array_equal(t, t.T):
        raise ValueError("base table is not commutative")
    if not predicate(g, "associative"):
        raise ValueError("base table is not associative")


def power_map(g: CayleyTable, k: int) -> np.ndarray:
    """``a -> a^k`` for every element, by square-and-multiply in ``g``."""
    t = g.table
    n = g.n
    result = np.full(n, g.identity, dtype=np.int64)
    base = np.arange(n, dtype=np.int64)
    while k:
        if k & 1:
            result = t[result, base]
        base = t[base, base]
        k >>= 1
    return result


def keedwell_table(g: CayleyTable, r: int, s: int) -> CayleyTable:
    """``a o b = a^r b^s`` over the abelian group ``g``."""
    _check_abelian_group(g)
    if r < 1 or s < 1 or r * s != g.n + 1:
        raise ValueError(f"need positive r, s with r*s = n+1 = {g.n + 1}, got r={r}, s={s}")
    pr, ps = power_map(g, r), power_map(g, s)
    return CayleyTable(g.table[pr[:, None], ps[None, :]])


def keedwell_cyclic(n: int, r: int, s: int) -> CayleyTable:
    a = np.arange(n)
    return CayleyTable((r * a[:, None] + s * a[None, :]) % n)


def keedwell_cipq(params: KeedwellParams, spec: AbelianGroupSpec | None = None) -> CayleyTable:
    spec = spec or AbelianGroupSpec((params.n,))
    if spec.order != params.n:
        raise ValueError(f"group order {spec.order} does not match n = {params.n}")
    return keedwell_table(build_abelian_group(spec), params.r, params.s)
