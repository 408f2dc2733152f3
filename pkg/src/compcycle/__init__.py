"""Finite categories, functors and adjunctions, and verifiers that decide
whether a physical system computes a given abstraction."""

__version__ = "0.1.0"

from .core import (
    FinCategory,
    LawReport,
    Morphism,
    Quiver,
    Witness,
    check_category_laws,
    compose,
    free_category,
    hom_set,
    new_category,
    opposite,
)
from .cycle import (
    AuditReport,
    CycleClaim,
    Verdict,
    audit_simple_mappings,
    check_causal_counterfactual,
    check_composite_cycle,
    check_compute_cycle,
    check_multiple_realizability,
    check_nested,
    check_predict_cycle,
    check_refinement,
)
from .errors import CategoryError
from .maps import (
    Adjunction,
    Functor,
    NatTrans,
    check_adjunction,
    check_functor_laws,
    check_inverse_pair,
    check_naturality,
    compose_functors,
    enumerate_functors,
    enumerate_nat_trans,
    identity_functor,
    new_adjunction,
    new_functor,
    new_nat_trans,
)
from .physproc import (
    Transition,
    TransitionSystem,
    build_adder_category,
    build_comp_category,
    build_conversion_category,
    cogwheel_fixture,
    decode_functor,
    encode_functor,
    lts_to_category,
)

__all__ = [name for name in dir() if not name.startswith("_")]
