"""Finite categories, functors, transformations, groups and search-based (co)limits."""
from .build import (
    arrow_category,
    boolean_lattice,
    category_to_raw,
    chain_category,
    constant_functor,
    discrete_category,
    empty_category,
    functor_from_tables,
    indiscrete_category,
    lattice_from_sets,
    opposite,
    path_category,
    poset_category,
    product_category,
    terminal_category,
    transformation_monoid,
    validate_category,
)
from .core import (
    Adjunction,
    AdjunctionReport,
    Budget,
    CategoryError,
    FinCategory,
    FinFunctor,
    FunctorError,
    NatTrans,
    SizeGuardError,
    check_adjunction,
    compose_adjunctions,
    compose_functors,
    full_subcategory,
    identity_functor,
    identity_nat,
    vertical,
    whisker_left,
    whisker_right,
)
from .groups import Group, GroupError, GroupHom, automorphisms, conjugation, homomorphisms, inversion
from .limits import ColimitCocone, LimitCone, MissingLimitError, colimit, cones, limit
from .search import (
    FunctorData,
    NatData,
    aut_group,
    core,
    enumerate_functors,
    find_iso,
    functor_category,
    is_equivalence_functor,
    iso_classes,
    isomorphism_between,
    left_adjoint,
    pi0,
    right_adjoint,
)

__all__ = [n for n in dir() if not n.startswith("_")]
