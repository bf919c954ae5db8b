"""Exact Spencer delta-cohomology calculator for constant-coefficient PDE
symbols: involutivity, characteristics, restrictions and reductions over Q
and Q(i)."""

from .field import GaussianRational, I, QQ
from .linalg import Matrix, Subspace, kernel, rref, sum_contains_quotient
from .tensor import Slot, delta_matrix, directional_derivative, \
    restriction_matrix, slot_dim, subspace_product, sym_multiply
from .system import (
    CapExceeded,
    OrderProfile,
    Precondition,
    SymbolicSystem,
    derived_system,
    descend,
    descend_fixpoint,
    equivalence_reduce,
    free_system,
    from_equations,
    from_functionals,
    from_levels,
    order_profile,
    prolong,
    prolong_iterated,
    restrict_system,
    transform_system,
)
from .cohomology import (
    acyclicity,
    aux_spaces,
    cartan_test,
    cohomology_dim,
    cohomology_table,
    dprime_cohomology,
    e1_grid,
    is_involutive,
    make_frame,
    nonzero_cohomology,
    property_i,
    spectral_term_dim,
)
from .characteristics import (
    char_report,
    guillemin_b_search,
    is_char_covector,
    pencil_char_search,
)
from .dsl import EquationSet, ParseError, parse, parse_subspace, pretty_print
from .theorems import corollary_euler_check, verify_thm1, verify_thm2

__version__ = "0.1.0"
