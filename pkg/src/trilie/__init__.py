"""Exact computations with 3-Lie algebras, relative Rota-Baxter operators of
weight lambda, 3-post-Lie algebras, their controlling L-infinity structure and
deformation cohomology. All arithmetic is over the rationals."""

from .actions import (
    ActionData,
    PairMap,
    check_action,
    check_derivations,
    check_representation,
    semidirect_product,
)
from .algebra import (
    LinearMap,
    ThreeLieAlgebra,
    VerificationReport,
    adjoint_rep,
    bracket_eval,
    center,
    check_fundamental_identity,
    derived_algebra,
    is_homomorphism,
    is_subalgebra,
)
from .cohomology import (
    ComplexSlice,
    DeformationVerdict,
    classify_deformation,
    cohomology_dims,
    d_T,
    d_lie,
    delta_1,
    induced_rep,
    rb_complex,
)
from .errors import ComplexError, InputError
from .linalg import Matrix, Subspace, kernel_basis, quotient_dim, rank, solve
from .linfty import (
    Cochain,
    TableCochain,
    build_delta,
    circ,
    derived_l1,
    derived_l3,
    is_3lie_via_mc,
    mc_check,
    mc_twisted_check,
    nr_bracket,
    twisted_brackets,
)
from .post_lie import (
    ThreePostLie,
    check_post_lie,
    identity_is_rb,
    is_post_lie_homomorphism,
    left_action,
    post_lie_from_rb,
    subadjacent,
)
from .rota_baxter import (
    RBHomomorphism,
    RBOperator,
    check_nijenhuis,
    check_rb,
    check_rb_via_graph,
    check_rb_via_nijenhuis,
    descendent_algebra,
    is_rb_homomorphism,
    lift_nijenhuis,
    projection_rb,
    search_rb,
)

__version__ = "0.1.0"
