"""Finite quivers: homomorphisms, retracts, blow-ups and phi_n-injectivity."""

from .blowup import (
    BlowupSpec,
    BlowupWitness,
    blowup_retraction,
    construct_blowup,
    recognize_blowup,
    verify_blowup_witness,
)
from .core import (
    Quiver,
    QuiverMorphism,
    WalkWitness,
    component_quivers,
    coproduct,
    cycle_quiver,
    edges_between,
    find_walk,
    independent_set,
    is_loaded,
    loaded_quiver,
    min_closed_walk,
    path_quiver,
    product,
    product_projections,
    validate,
    walk_pairs,
    weak_components,
)
from .errors import (
    Budget,
    BudgetExceeded,
    InternalInconsistency,
    InvalidSize,
    InvalidSpec,
    ParseError,
    PrecondViolation,
    QuiverError,
    TotalityViolation,
    UnknownVertex,
    ValidationError,
)
from .formats import export_dot, format_quiver, load_morphism, load_quiver, parse_quiver
from .injectivity import (
    Classification,
    check_lemma_closures,
    classify,
    is_phi_injective_brute,
    is_phin_injective,
    layering,
    phi2_structure,
    phi_n,
    verify_classification,
)
from .morphisms import (
    check_morphism,
    enumerate_homs,
    extend_morphism,
    find_isomorphism,
    find_retraction,
    find_section,
    is_isomorphic,
    is_monic,
)

__version__ = "0.1.0"
