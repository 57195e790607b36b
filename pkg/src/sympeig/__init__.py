"""Eigenstates of symplectically transformed coordinate and momentum observables.

Given a symplectic mixing of the canonical observables, this package builds
the generalized eigenstates of the new coordinate and momentum blocks in
closed form (quadratic-phase states on affine supports), computes their
overlaps as structured delta products, and verifies everything numerically
on sampled grids and by oscillatory quadrature.
"""
from ._kernels import BACKEND as KERNEL_BACKEND
from .eigenstate import (
    FLAVOR_COORDINATE,
    FLAVOR_MOMENTUM,
    QuadraticPhaseState,
    ResidualReport,
    coordinate_eigenstate,
    momentum_eigenstate,
    residual_check,
)
from .errors import (
    DeltaSupportedStateError,
    InternalInconsistencyError,
    InvalidInputError,
    InvalidPairingError,
    NonSymplecticError,
    NotRepresentableError,
    QuadratureError,
    SympeigError,
)
from .numeric import (
    FresnelResult,
    GaussianTestFunction,
    GridSpec,
    GridWavefunction,
    QuadratureSpec,
    apply_observable,
    default_grid,
    delta_sequence_overlap,
    eigen_equation_residual,
    fresnel_closed_form,
    fresnel_integral,
    pair_against_test_function,
    sample_state,
)
from .overlap import (
    CrossFlavorOverlap,
    DeltaFactor,
    DeltaProduct,
    cross_flavor_overlap,
    forces_eta_zero,
    normalize,
    same_flavor_overlap,
)
from .subspace import (
    ConstrainedSolution,
    SubspaceData,
    decompose,
    projectors,
    pseudoinverse,
    solve_constrained,
)
from .symplectic import (
    BlockView,
    SymplecticMatrix,
    ccr_matrix,
    inverse,
    null_intersection_gaps,
    orthogonal_pair,
    random_symplectic,
    rotation_block,
    scaling,
    shear,
    symplectic_form,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "FLAVOR_COORDINATE",
    "FLAVOR_MOMENTUM",
    "QuadraticPhaseState",
    "ResidualReport",
    "coordinate_eigenstate",
    "momentum_eigenstate",
    "residual_check",
    "DeltaSupportedStateError",
    "InternalInconsistencyError",
    "InvalidInputError",
    "InvalidPairingError",
    "NonSymplecticError",
    "NotRepresentableError",
    "QuadratureError",
    "SympeigError",
    "FresnelResult",
    "GaussianTestFunction",
    "GridSpec",
    "GridWavefunction",
    "QuadratureSpec",
    "apply_observable",
    "default_grid",
    "delta_sequence_overlap",
    "eigen_equation_residual",
    "fresnel_closed_form",
    "fresnel_integral",
    "pair_against_test_function",
    "sample_state",
    "CrossFlavorOverlap",
    "DeltaFactor",
    "DeltaProduct",
    "cross_flavor_overlap",
    "forces_eta_zero",
    "normalize",
    "same_flavor_overlap",
    "ConstrainedSolution",
    "SubspaceData",
    "decompose",
    "projectors",
    "pseudoinverse",
    "solve_constrained",
    "BlockView",
    "SymplecticMatrix",
    "ccr_matrix",
    "inverse",
    "null_intersection_gaps",
    "orthogonal_pair",
    "random_symplectic",
    "rotation_block",
    "scaling",
    "shear",
    "symplectic_form",
    "validate",
]
