"""Holomorphs ``H(L) = AUM(L) x L`` and their AIP/CIP conditions.

The product is ``(a, x) o (b, y) = (ab, xb . y)``.  Pairs are indexed as
``a*n + x`` where ``a`` is the ordinal of the automorphism in the canonically
sorted group, so the identity automorphism is always ordinal 0.

The checks here evaluate both sides of each equivalence independently; a
disagreement is data, not an exception.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import CayleyTable, PredicateUndefined, inverse_maps, predicate
from .keedwell import TABLE_LIMIT
from .morphism import (
    DEFAULT_LIMIT,
    MappingTriple,
    Permutation,
    PermGroup,
    automorphism_group,
    compose,
    find_isomorphism,
    invert,
    is_abelian,
    is_automorphism,
    is_autotopism,
)


class NotAnAutomorphism(ValueError):
    pass


@dataclass(frozen=True)
class Holomorph:
    base: CayleyTable
    aum: PermGroup
    source: CayleyTable

    @property
    def n(self) -> int:
        return self.source.n

    def pair_index(self, a: int, x: int) -> int:
        return a * self.n + x

    def pair(self, i: int):
        """Inverse of :meth:`pair_index`: ``(automorphism ordinal, element)``."""
        return divmod(i, self.n)

    def embedding(self) -> list:
        """Indices of ``(I, x)`` for each x: the copy of the source inside H."""
        return [self.pair_index(0, x) for x in range(self.n)]

    def legend(self) -> dict:
        return {
            "n": self.n,
            "order": self.base.n,
            "index": "a*n + x",
            "aum": [list(p.image) for p in self.aum],
        }


def build_holomorph(source: CayleyTable, aum: Optional[PermGroup] = None, limit: int = TABLE_LIMIT) -> Holomorph:
    if aum is None:
        aum = automorphism_group(source)
    if aum.degree != source.n:
        raise ValueError(f"group degree {aum.degree} does not match order {source.n}")
    for p in aum:
        if not is_automorphism(source, p):
            raise NotAnAutomorphism(f"{p.cycles()} is not an automorphism of the source table")
    m, n = len(aum), source.n
    if m * n > limit:
        raise ValueError(f"holomorph order {m * n} exceeds the table limit {limit}")
    comp = aum.multiplication_table()
    images = np.array([p.image for p in aum], dtype=np.int64).reshape(m, n)
    # second[x, b, y] = (x b) . y
    second = source.table[images.T[:, :, None], np.arange(n)[None, None, :]]
    full = comp[:, None, :, None] * n + second[None, :, :, :]
    return Holomorph(CayleyTable(full.reshape(m * n, m * n)), aum, source)


@dataclass(frozen=True)
class HolomorphConditionReport:
    """Numbered conditions for H(L) to have ``mode``, each checked on its own.

    ``base_property``/``holomorph_property`` are None when the identity is
    undefined (no inverse maps).
    """

    mode: str
    aum_order: int
    aum_abelian: bool
    autotopism_family: bool
    base_property: Optional[bool]
    holomorph_property: Optional[bool]

    @property
    def conditions_hold(self) -> Optional[bool]:
        if self.base_property is None:
            return None
        return self.aum_abelian and self.autotopism_family and self.base_property

    @property
    def iff_agrees(self) -> Optional[bool]:
        """Does 'H has mode' match 'all three conditions hold'?"""
        if self.conditions_hold is None or self.holomorph_property is None:
            return None
        return self.holomorph_property == self.conditions_hold

    @property
    def trivial_aum_iff_agrees(self) -> Optional[bool]:
        """Does 'H has mode' match 'AUM = {I} and L has mode'?"""
        if self.base_property is None or self.holomorph_property is None:
            return None
        return self.holomorph_property == (self.aum_order == 1 and self.base_property)


def _safe_predicate(q, which):
    try:
        return predicate(q, which)
    except PredicateUndefined:
        return None


def autotopism_family_holds(source: CayleyTable, aum: PermGroup) -> bool:
    """``(b^-1, a, I)`` is an autotopism for every a, b in AUM."""
    ident = Permutation.identity(source.n)
    return all(is_autotopism(source, MappingTriple(invert(b), a, ident)) for a in aum for b in aum)


def check_aip_conditions(
    source: CayleyTable,
    aum: Optional[PermGroup] = None,
    mode: str = "AIP",
    holomorph: Optional[Holomorph] = None,
) -> HolomorphConditionReport:
    mode = mode.upper()
    if mode not in ("AIP", "CIP"):
        raise ValueError("mode must be AIP or CIP")
    if aum is None:
        aum = automorphism_group(source)
    if holomorph is None:
        holomorph = build_holomorph(source, aum)
    return HolomorphConditionReport(
        mode=mode,
        aum_order=len(aum),
        aum_abelian=is_abelian(aum),
        autotopism_family=autotopism_family_holds(source, aum),
        base_property=_safe_predicate(source, mode),
        holomorph_property=_safe_predicate(holomorph.base, mode),
    )


def check_holomorph_cip_identity(source: CayleyTable, alpha: Permutation, beta: Permutation, variant: int) -> bool:
    """One of the four holomorph-CIP identities for a fixed pair (alpha, beta).

    1. ``(x beta . y) x^r = y alpha``
    2. ``x beta . (y x^r) = y alpha``
    3. ``(x^l a^-1 b a . y alpha) . x = y``
    4. ``x^l a^-1 b a . (y alpha . x) = y``
    """
    maps = inverse_maps(source)
    if maps is None:
        raise PredicateUndefined("identity needs inverse maps")
    t = source.table
    n = source.n
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    a, b = alpha.array, beta.array
    rho, lam = maps.j_rho.array, maps.j_lambda.array
    if variant == 1:
        ok = t[t[b[x], y], rho[x]] == a[y]
    elif variant == 2:
        ok = t[b[x], t[y, rho[x]]] == a[y]
    elif variant in (3, 4):
        twisted = a[b[invert(alpha).array[lam]]]  # x^l alpha^-1 beta alpha
        if variant == 3:
            ok = t[t[twisted[x], a[y]], x] == y
        else:
            ok = t[twisted[x], t[a[y], x]] == y
    else:
        raise ValueError("variant must be 1..4")
    return bool(np.all(ok))


def holomorph_cip_identity_holds(source: CayleyTable, aum: PermGroup, variant: int) -> bool:
    """Variant ``variant`` for every pair in AUM."""
    return all(check_holomorph_cip_identity(source, a, b, variant) for a in aum for b in aum)


def cip_equivalents(source: CayleyTable, aum: PermGroup):
    """The six conditions listed as equivalent when H(L) is CIP.

    Returns a tuple of six booleans, each quantified over all a, b in AUM.
    """
    maps = inverse_maps(source)
    if maps is None:
        raise PredicateUndefined("conditions need inverse maps")
    out = []
    for jmap in (maps.j_rho, maps.j_lambda):
        out.append(
            all(
                is_autotopism(source, MappingTriple(compose(invert(b), jmap), compose(a, jmap), jmap))
                for a in aum
                for b in aum
            )
        )
    out.extend(holomorph_cip_identity_holds(source, aum, v) for v in (1, 2, 3, 4))
    return tuple(out)


def aum_triples_autotopic(source: CayleyTable, aum: PermGroup) -> bool:
    """(b,a,I), (a,b,I), (b,I,a), (I,a,b) are autotopisms for all a, b in AUM."""
    ident = Permutation.identity(source.n)
    for a in aum:
        for b in aum:
            for trip in ((b, a, ident), (a, b, ident), (b, ident, a), (ident, a, b)):
                if not is_autotopism(source, MappingTriple(*trip)):
                    return False
    return True


@dataclass(frozen=True)
class HolomorphConsequences:
    """Consequences claimed for loops/quasigroups whose holomorph is AIP or CIP.

    Consequence fields are None when their premise fails (vacuous).
    """

    holomorph_aip: Optional[bool]
    holomorph_cip: Optional[bool]
    aum_trivial: Optional[bool] = None
    isomorphic_to_holomorph: Optional[bool] = None
    flexible: Optional[bool] = None
    unipotent: Optional[bool] = None
    exponent2: Optional[bool] = None
    aum_triples: Optional[bool] = None
    cip_equivalents: Optional[tuple] = None
    findings: tuple = field(default=())

    @property
    def vacuous(self) -> bool:
        return not (self.holomorph_aip or self.holomorph_cip)

    @property
    def ok(self) -> bool:
        return not self.findings


def verify_corollaries(source: CayleyTable, aum: Optional[PermGroup] = None, limit: int = DEFAULT_LIMIT) -> HolomorphConsequences:
    if aum is None:
        aum = automorphism_group(source)
    hol = build_holomorph(source, aum)
    h_aip = _safe_predicate(hol.base, "AIP")
    h_cip = _safe_predicate(hol.base, "CIP")
    if not (h_aip or h_cip):
        return HolomorphConsequences(h_aip, h_cip)

    findings = []
    trivial = aum.is_trivial()
    if not trivial:
        findings.append(f"H(L) is AIP/CIP but |AUM(L)| = {len(aum)}")
    iso = hol.base.n == source.n and find_isomorphism(hol.base, source, limit=max(limit, source.n)) is not None
    if not iso:
        findings.append("H(L) is AIP/CIP but not isomorphic to L")
    fields = dict(aum_trivial=trivial, isomorphic_to_holomorph=iso)
    if h_cip:
        flex = predicate(source, "flexible")
        unip = predicate(source, "unipotent")
        exp2 = predicate(source, "exponent2") if source.is_loop else None
        triples = aum_triples_autotopic(source, aum)
        six = cip_equivalents(source, aum)
        for name, val in (("flexible", flex), ("unipotent", unip), ("exponent 2", exp2), ("AUM autotopism triples", triples)):
            if val is False:
                findings.append(f"H(L) is CIP but L fails: {name}")
        if len(set(six)) != 1:
            findings.append(f"H(L) is CIP but the six equivalent conditions disagree: {six}")
        fields.update(flexible=flex, unipotent=unip, exponent2=exp2, aum_triples=triples, cip_equivalents=six)
    return HolomorphConsequences(h_aip, h_cip, findings=tuple(findings), **fields)


def dumps_legend(hol: Holomorph) -> str:
    doc = hol.legend()
    rows = ",\n".join("  " + json.dumps(p) for p in doc.pop("aum"))
    head = json.dumps(doc)[:-1]
    return '%s, "aum": [\n%s\n]}\n' % (head, rows)
