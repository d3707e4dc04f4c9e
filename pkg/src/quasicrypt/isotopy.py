"""Second-layer quasigroups obtained from a secret key (alpha, beta, psi).

With ``delta = psi^-1 alpha beta psi`` and ``gamma = psi^-1 beta psi`` the
isotope V of U is defined by ``x delta * y gamma = (x beta + y) delta``, i.e.
``u * v = ((u delta^-1) beta + v gamma^-1) delta``.  The U -> V isotopism is
``(beta^-1 delta, gamma, delta)``; its inverse is ``(delta^-1 beta, gamma^-1,
delta^-1)``.

Key file: ``{"n": <int>, "alpha": [...], "beta": [...], "psi": [...]}``.
Derived maps are never stored.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import CayleyTable, left_translation, right_translation
from .holomorph import build_holomorph
from .morphism import (
    MappingTriple,
    Permutation,
    PermGroup,
    compose,
    conjugate,
    conjugate_group,
    invert,
    is_automorphism,
    is_autotopism,
)


class InvalidKey(ValueError):
    pass


@dataclass(frozen=True)
class IsotopyKey:
    alpha: Permutation
    beta: Permutation
    psi: Permutation

    def __post_init__(self):
        if not (self.alpha.n == self.beta.n == self.psi.n):
            raise InvalidKey(f"degree mismatch: {self.alpha.n}, {self.beta.n}, {self.psi.n}")

    @property
    def n(self) -> int:
        return self.psi.n

    @classmethod
    def identity(cls, n: int) -> "IsotopyKey":
        i = Permutation.identity(n)
        return cls(i, i, i)

    def to_dict(self) -> dict:
        return {"n": self.n, "alpha": list(self.alpha.image), "beta": list(self.beta.image), "psi": list(self.psi.image)}

    @classmethod
    def from_dict(cls, doc: dict) -> "IsotopyKey":
        n = doc.get("n")
        perms = []
        for name in ("alpha", "beta", "psi"):
            img = doc.get(name, list(range(n)) if name == "alpha" and isinstance(n, int) else None)
            if not isinstance(img, list) or len(img) != n:
                raise InvalidKey(f'key field "{name}" must be a list of {n} ints')
            perms.append(Permutation(img))
        return cls(*perms)


def make_key(u: CayleyTable, beta: Permutation, psi: Permutation, alpha: Optional[Permutation] = None, aum: Optional[PermGroup] = None) -> IsotopyKey:
    """Key for U; alpha defaults to the identity.  alpha and beta are checked
    against ``aum`` when given, otherwise directly against the table."""
    key = IsotopyKey(alpha or Permutation.identity(u.n), beta, psi)
    check_key(u, key, aum)
    return key


def check_key(u: CayleyTable, key: IsotopyKey, aum: Optional[PermGroup] = None):
    if key.n != u.n:
        raise InvalidKey(f"key degree {key.n} does not match order {u.n}")
    for name in ("alpha", "beta"):
        p = getattr(key, name)
        member = (p in aum) if aum is not None else is_automorphism(u, p)
        if not member:
            raise InvalidKey(f"{name} = {p.cycles()} is not an automorphism of U")


@dataclass(frozen=True)
class DerivedMaps:
    delta: Permutation
    gamma: Permutation


def derive_maps(key: IsotopyKey) -> DerivedMaps:
    return DerivedMaps(
        delta=conjugate(compose(key.alpha, key.beta), key.psi),
        gamma=conjugate(key.beta, key.psi),
    )


def build_isotope(u: CayleyTable, key: IsotopyKey, check: bool = True) -> CayleyTable:
    if check:
        check_key(u, key)
    maps = derive_maps(key)
    d = maps.delta.array
    d_inv = invert(maps.delta).array
    g_inv = invert(maps.gamma).array
    b = key.beta.array
    return CayleyTable(d[u.table[b[d_inv][:, None], g_inv[None, :]]])


def relation_witness(u: CayleyTable, v: CayleyTable, key: IsotopyKey):
    """First ``(x, y)`` violating ``x delta * y gamma = (x beta + y) delta``."""
    maps = derive_maps(key)
    d, g, b = maps.delta.array, maps.gamma.array, key.beta.array
    bad = np.argwhere(v.table[d[:, None], g[None, :]] != d[u.table[b[:, None], np.arange(u.n)[None, :]]])
    return None if bad.size == 0 else (int(bad[0][0]), int(bad[0][1]))


def verify_relation(u: CayleyTable, v: CayleyTable, key: IsotopyKey) -> bool:
    if u.n != v.n:
        return False
    return relation_witness(u, v, key) is None


def isotopism_triple(key: IsotopyKey, maps: Optional[DerivedMaps] = None):
    """``(v_to_u, u_to_v)`` triples; v_to_u is ``(delta^-1 beta, gamma^-1, delta^-1)``."""
    maps = maps or derive_maps(key)
    v_to_u = MappingTriple(compose(invert(maps.delta), key.beta), invert(maps.gamma), invert(maps.delta))
    u_to_v = MappingTriple(compose(invert(key.beta), maps.delta), maps.gamma, maps.delta)
    return v_to_u, u_to_v


@dataclass(frozen=True)
class HolomorphIsoReport:
    """Outcome of checking ``(a, x) -> (psi^-1 a psi, x psi^-1 a psi)``."""

    conjugate: bool
    missing: Optional[Permutation] = None
    bijective: Optional[bool] = None
    homomorphism: Optional[bool] = None
    witness: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return bool(self.conjugate and self.bijective and self.homomorphism)

    def describe(self) -> str:
        if not self.conjugate and self.missing is None:
            return "an automorphism group is trivial"
        if not self.conjugate:
            return f"AUM(V) is not psi-conjugate to AUM(U): {self.missing.cycles()} has no counterpart"
        if not self.bijective:
            return "phi is not a bijection"
        if not self.homomorphism:
            (a, x), (b, y) = self.witness
            return f"phi fails at ((alpha#{a}, {x}), (beta#{b}, {y}))"
        return "phi is an isomorphism H(U) -> H(V)"


def check_holomorph_isomorphism(u: CayleyTable, v: CayleyTable, key: IsotopyKey, aum_u: PermGroup, aum_v: PermGroup) -> HolomorphIsoReport:
    psi = key.psi
    conj = conjugate_group(aum_u, psi)
    for g in conj:
        if g not in aum_v:
            return HolomorphIsoReport(False, missing=g)
    for g in aum_v:
        if g not in conj:
            return HolomorphIsoReport(False, missing=g)

    hu = build_holomorph(u, aum_u)
    hv = build_holomorph(v, aum_v)
    n = u.n
    m = len(aum_u)
    phi = np.empty(m * n, dtype=np.int64)
    for i, a in enumerate(aum_u):
        c = conjugate(a, psi)
        j = aum_v.index(c)
        phi[i * n:(i + 1) * n] = j * n + c.array
    if len(set(phi.tolist())) != m * n:
        return HolomorphIsoReport(True, bijective=False)
    lhs = phi[hu.base.table]
    rhs = hv.base.table[phi[:, None], phi[None, :]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        p, q = (int(k) for k in bad[0])
        return HolomorphIsoReport(True, bijective=True, homomorphism=False, witness=(hu.pair(p), hu.pair(q)))
    return HolomorphIsoReport(True, bijective=True, homomorphism=True)


def transfer_hypothesis(u, v, key, aum_u, aum_v) -> HolomorphIsoReport:
    """Hypothesis of the AIP/CIP transfer between U and V: non-trivial
    automorphism groups and the holomorph isomorphism induced by psi."""
    if aum_u.is_trivial() or aum_v.is_trivial():
        return HolomorphIsoReport(False, missing=None)
    return check_holomorph_isomorphism(u, v, key, aum_u, aum_v)


@dataclass(frozen=True)
class RelationDiagnostics:
    """Observed truth of the consequences listed alongside the U/V relation.

    Each entry is ``(premise, claim, observed)``; ``agrees`` compares the
    observed value with the claim whenever the premise holds.
    """

    items: dict = field(default_factory=dict)

    def disagreements(self):
        return {k: v for k, v in self.items.items() if v.get("agrees") is False}


def relation_diagnostics(u: CayleyTable, v: CayleyTable, key: IsotopyKey, aum_u: PermGroup, aum_v: PermGroup) -> RelationDiagnostics:
    maps = derive_maps(key)
    ident = Permutation.identity(u.n)
    items = {}
    gamma_in_u = maps.gamma in aum_u
    aut = is_autotopism(v, MappingTriple(ident, maps.gamma, maps.delta))
    items["gamma_in_AUM(U) iff (I,gamma,delta) in AUT(V)"] = {
        "lhs": gamma_in_u,
        "rhs": aut,
        "agrees": gamma_in_u == aut,
    }
    e = u.identity if u.is_loop else None
    if e is not None and v.is_quasigroup:
        l_e = left_translation(v, maps.delta.image[e])
        r_e = right_translation(v, maps.gamma.image[e])
        l_in = l_e in aum_v
        items["L_(e delta) in AUM(V)"] = {"observed": l_in, "agrees": l_in}
        b_in = key.beta in aum_v
        r_in = r_e in aum_v
        items["beta in AUM(V) iff R_(e gamma) in AUM(V)"] = {"lhs": b_in, "rhs": r_in, "agrees": b_in == r_in}
    if maps.delta.is_identity():
        orders = (len(aum_u), len(aum_v))
        items["delta = I => |AUM(U)| = |AUM(V)| = 3"] = {"observed": orders, "agrees": orders == (3, 3)}
    if maps.gamma.is_identity():
        orders = (len(aum_u), len(aum_v))
        items["gamma = I => |AUM(U)| = |AUM(V)| = 1"] = {"observed": orders, "agrees": orders == (1, 1)}
    return RelationDiagnostics(items)


def dumps_key(key: IsotopyKey) -> str:
    return json.dumps(key.to_dict()) + "\n"


def loads_key(text: str) -> IsotopyKey:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidKey(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InvalidKey("key file must hold a JSON object")
    try:
        return IsotopyKey.from_dict(doc)
    except ValueError as exc:
        raise InvalidKey(str(exc)) from None
