"""Exact persistent homology of finite measurement sets enriched with
monoid actions, equivariant operators, and graph encodings."""

from .errors import (
    DomainMismatch,
    EquivarianceError,
    GuardExceeded,
    HypothesisViolation,
    NotInvariant,
    NotOperation,
    SimplicialMapError,
    ValueMapMiss,
)
from .core import (
    CoproductResult,
    DataSet,
    Domain,
    Measurement,
    PointMap,
    ProductResult,
    PseudometricMatrix,
    ValueMap,
    change_units,
    copair,
    coproduct,
    coproduct_point_map,
    domain_change,
    pair,
    product,
    pseudometric,
    sup_distance,
)
from .actions import (
    Incarnation,
    OperationSet,
    Partition,
    block_incarnation,
    blocks,
    deformation_closure,
    dimension,
    enumerate_aut,
    enumerate_bases,
    enumerate_end,
    find_basis,
    generated_submonoid,
    indistinguishable,
    is_independent,
    is_operation,
    universal_incarnation,
)
from .operators import (
    SEO,
    Relation,
    canonical_seo,
    change_units_apply,
    change_units_seo,
    compose_seo,
    decompose,
    domain_change_incarnation,
    enumerate_geos,
    extend_from_basis,
    find_all_realizations,
    find_realization,
    find_seo_realization,
    identity_seo,
    restriction,
    validate_seo,
)
from .ggraph import (
    GraphFunctor,
    GrothendieckGraph,
    build_graph,
    category,
    compose_functor,
    is_monoid_compatible,
    validate_graph,
    validate_morphism,
    validate_pseudometric,
    verify_natural_transformation,
)
from .persistence import (
    BigradedPersistence,
    CriticalGrid,
    GridMap,
    HomologySpace,
    InterleavingResult,
    PHEvaluator,
    SimplicialComplex,
    bottleneck_distance,
    bottleneck_lower,
    critical_grid,
    homology,
    induced_map,
    interleave_upper,
    interleaving_bounds,
    ph_functor,
    ph_grid,
    ph_map,
    slice_barcode,
    sublevel,
    superlevel_duality_check,
    vr_complex,
)

__version__ = "0.1.0"
