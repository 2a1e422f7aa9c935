"""Unipotent torus dynamics, Weyl-sum equidistribution and polynomial
ergodic averages, with exact symbolic angles underneath the numerics."""

from .polynomial import (
    IntegerPolynomial,
    PolynomialFamily,
    binomial,
    binomial_of_poly,
    compose_binomial,
    is_independent,
    parse_family,
    parse_polynomial,
)
from .algebra import (
    RationalMatrix,
    UnipotentReduction,
    hermite_normal_form,
    integer_kernel,
    is_unipotent,
    unipotent_canonical_form,
)
from .torus import (
    AngleValue,
    Generator,
    GeneratorRegistry,
    ShearSystem,
    TorusPoint,
    UnipotentAffineMap,
    fixed_character_lattice,
    is_ergodic,
    is_totally_ergodic,
    normalize_shear,
    rationally_independent,
    reduce_to_shear,
    sample_generic_point,
    torus_congruent,
    torus_point,
)
from .nilexamples import (
    CosetRepr,
    NilElement1,
    NilElement2,
    commutator,
    conjugated_affine,
    phi,
    torus_coordinates,
)
from .equidist import (
    PhasePolynomial,
    WeylSumResult,
    all_frequencies,
    build_phase_polynomial,
    discrepancy_estimate,
    has_nonconstant_irrational_coeff,
    orbit_phase_polynomial,
    orbit_tuple_shadows,
    star_discrepancy_1d_exact,
    weyl_sum_phase,
    weyl_sum_sequence,
)
from .averages import (
    AverageReport,
    TrigPolynomial,
    l2_distance_to_product,
    multiple_ergodic_average,
    multiple_ergodic_average_direct,
    product_of_integrals,
)

__version__ = "0.1.0"
