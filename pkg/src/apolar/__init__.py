"""Macaulay inverse systems, apolarity and cohomology of toric bundles over the rationals."""

from .bundle import (
    BaseAlgebraData,
    ChernMap,
    bundle_cohomology,
    bundle_potential,
    horizontal_part,
    leray_hirsch_check,
)
from .exactcore import fit_homogeneous, kernel_basis, solve
from .inverse_system import (
    GradedQuotient,
    LocalQuotient,
    ann_graded,
    ann_local,
    ann_membership,
    pairing_matrices,
    reduce,
)
from .polyring import (
    LinearFunctional,
    Poly,
    RingSpec,
    apolar_pairing,
    apply_diffop,
    directional_derivative,
    functional_from_potential,
    parse_poly,
    potential_from_functional,
    quasi_homogeneous_components,
    substitute,
)
from .toricgeom import (
    Fan,
    VirtualPolytope,
    find_ample,
    integral_polynomial,
    integrate_convex,
    integrate_virtual,
    is_convex,
    is_strictly_convex,
    toric_cohomology,
    validate_fan,
    vertices,
    volume_polynomial,
)

__version__ = "0.1.0"
