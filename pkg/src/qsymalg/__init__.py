"""Exact computations with quadratic quantum algebras: PBW and Koszul checks,
U_q-equivariance, R-matrices and braided powers, Noetherian certificates,
K_0-level bookkeeping and the quantum homogeneous space O_q(SL_2)."""

from .exactalg import Scalar, SparseMatrix, format_scalar, kernel_basis, parse_scalar, q_integer, q_power, rank
from .freeword import FreeElement, GradedSubspace
from .quadratic import (
    FilteredAlgebra,
    QuadraticAlgebra,
    RewriteError,
    SpecError,
    algebra_from_spec,
    algebra_preset,
    associated_graded,
    confluent_order,
    free_algebra,
    graded_dim,
    normal_form,
    pbw_check,
    quantum_matrices,
    quantum_plane,
    rees_algebra,
    so_even,
    weyl_q,
)
from .koszul import dual_algebra, hilbert_identity_check, koszul_report, koszul_slice, tor_dims
from .uqact import (
    CONVENTION,
    HopfActionSpec,
    action_preset,
    check_relations_submodule,
    invariants_of_degree,
    module_algebra_check,
)
from .rmatrix import (
    bk_form_check,
    bk_search,
    braided_product,
    build_rhat_sln,
    quantum_symmetric_algebra,
    relations_from_rhat,
    rmatrix_preset,
    sq_power,
)
from .kzero import RepRingElement, equivariant_hilbert, k0_report
from .homog import check_splitting, induce, invariant_subalgebra_dims, oqsl2_build, roundtrip_check, translate

__version__ = "0.1.0"
