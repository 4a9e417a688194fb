"""Exact graded linear algebra over Q or Z/p."""

from .field import QQ, Field, PrimeField, RationalField, Residue, field_from_env, field_from_name
from .graded import (
    GradedMap,
    GradedModule,
    GradingError,
    ShapeError,
    apply_map,
    compose_maps,
    element_map,
    ground_module,
    identity_map,
    tensor_maps,
    tensor_modules,
    zero_map,
    zero_module,
)
from .complexes import (
    ChainMap,
    Cohomology,
    Complex,
    ComplexError,
    ConeContraction,
    HomotopyEquivalence,
    NotACycleError,
    build_cone_contraction,
    cohomology,
    cohomology_map,
    cone,
    contract_cycle,
    contract_hom_cycle,
    find_chain_homotopy,
    hom_differential,
    homotopy_inverse,
    is_homotopy_invertible,
)
