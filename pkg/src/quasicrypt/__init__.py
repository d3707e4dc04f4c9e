"""Keedwell cross-inverse quasigroups, holomorphs, isotopes and a
double-encryption demo built on them."""
from .algebra import (
    CayleyTable,
    InverseMaps,
    NotAQuasigroup,
    PredicateUndefined,
    TableError,
    inverse_maps,
    left_translation,
    mul,
    predicate,
    rho_cycle_length,
    right_translation,
    validate,
)
from .morphism import (
    MappingTriple,
    Permutation,
    PermGroup,
    automorphism_group,
    compose,
    find_isomorphism,
    invert,
    is_automorphism,
    is_autotopism,
)

__version__ = "0.1.0"
