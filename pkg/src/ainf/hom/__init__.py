"""The calculus of the functor category: theta, B, M and hom complexes."""

from .chain import TransformationChain, as_chain
from .differential import B_component, apply_B, check_B_squared, check_natural, check_theta_b, is_natural
from .theta import check_theta_comultiplicativity, check_theta_support, theta_block
from .composition import (
    M_component,
    apply_M,
    check_M_associativity,
    check_M_chain,
    check_M_identities,
    check_M_unit,
    check_theta_theta,
    composite,
    expand_M,
    expand_M_block,
)
from .homcomplex import (
    HomComplex,
    check_hom_complex,
    equivalent_transformations,
    hom_complex,
    solve_B1,
)
from .induced import (
    InducedFunctor,
    InducedTransformation,
    check_induced_composition,
    check_induced_differential,
    check_theta_tilde,
    induced,
    theta_tilde,
)
