"""Exact-arithmetic orbifold polyvector-field rings for torus quotients."""

__version__ = "0.1.0"

from .chenruan import (
    CRClass,
    CRLabel,
    compare_sides,
    cr_basis,
    fg_product,
    orbifold_hodge_table,
)
from .cli import load_scenario, parse_class_expression
from .exactfield import (
    CycField,
    CycScalar,
    IntMatrix,
    Matrix,
    QQ,
    congruence_superlattice,
    cyc_field,
    kernel_basis,
    lift_conductor,
    smith_normal_form,
    zeta,
)
from .fixedloci import (
    averaging_split_check,
    component_group,
    component_map,
    excess_bundle,
    fixed_subspace,
    pair_data,
    quotient_decomposition,
    sector_data,
    tangent_complex_cohomology,
)
from .htspace import (
    HTClass,
    HTLabel,
    bigrade,
    dimension_table,
    group_action,
    invariant_basis,
    sector_basis,
    unit_class,
)
from .product import (
    MiddleLabel,
    middle_term_table,
    multiply,
    verify_ring_axioms,
)
from .torusaction import Scenario, age, eigen_data, validate_scenario
