"""Units, unit transformations, inversion, cancellation, quasi-inverses and H^0."""

from .units import (
    UnitAssignment,
    UnitCheck,
    act_left,
    act_right,
    check_unit_element,
    element,
    find_unit_elements,
    hom_chain_complex,
    idempotence_witness,
    strict_units,
    unit_element_data,
)
from .lift import LiftError, contraction_for, lift_at, lift_pair, tensor_complex
from .transform import (
    UnitError,
    UnitTransformation,
    build_unit_transformation,
    check_unit_transformation,
    unit_chain_map,
)
from .invert import (
    CompositeCheck,
    Inverse,
    InversionError,
    InvertibilityWitness,
    check_inverse,
    find_invertibility_witness,
    insertion_composites,
    invert_transformation,
    witness_defects,
)
from .equivalence import (
    EquivalenceError,
    QuasiInverse,
    build_quasi_inverse,
    cancel_functor,
    check_cancellation,
    check_quasi_inverse,
    check_unit_absorption,
    check_unital_functor,
    unit_elements_of,
    unit_from_transformation,
    unital_functor_witness,
)
from .h0 import FiniteLinearCategory, h0, h0_functor, h0_transformation
