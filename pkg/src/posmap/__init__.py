"""Shift-coupled diagonal maps: positivity analysis, spanning sets, optimality certificates."""

from .maps import (
    DimensionMismatchError,
    DomainError,
    HadamardMap,
    HadamardPerturbation,
    MapSpec,
    NumericalAnomalyError,
    TauMap,
    alternating_vector,
    apply_perturbed,
    apply_reduction,
    apply_tau,
    as_square_matrix,
    choi_matrix,
    is_hermitian,
    require_hermitian,
    shift_coupling,
)
from .positivity import (
    DiagonalProfile,
    PositivityReport,
    analytic_det,
    degenerate_det_bound,
    f_value,
    form_value,
    hessian_shat,
    parity_witness_value,
    seesaw_minimize,
)
from .spanning import (
    ProductPair,
    SpanningSet,
    build_spanning_set,
    degenerate_pairs,
    gram_rank,
    sigma_projector,
    spanning_rank,
    unimodular_pairs,
)
from .certify import (
    CirculantConstraint,
    ConjectureEvidence,
    OptimalityCertificate,
    admissible_subtraction_check,
    build_circulant,
    certify_optimality,
    circulant_spectrum,
    conjecture_probe,
    kernel_basis,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "DimensionMismatchError",
    "DomainError",
    "NumericalAnomalyError",
    "MapSpec",
    "HadamardPerturbation",
    "TauMap",
    "HadamardMap",
    "alternating_vector",
    "apply_tau",
    "apply_reduction",
    "apply_perturbed",
    "choi_matrix",
    "shift_coupling",
    "as_square_matrix",
    "is_hermitian",
    "require_hermitian",
    "PositivityReport",
    "DiagonalProfile",
    "form_value",
    "seesaw_minimize",
    "f_value",
    "analytic_det",
    "hessian_shat",
    "degenerate_det_bound",
    "parity_witness_value",
    "ProductPair",
    "SpanningSet",
    "sigma_projector",
    "unimodular_pairs",
    "degenerate_pairs",
    "build_spanning_set",
    "spanning_rank",
    "gram_rank",
    "CirculantConstraint",
    "OptimalityCertificate",
    "ConjectureEvidence",
    "build_circulant",
    "circulant_spectrum",
    "kernel_basis",
    "certify_optimality",
    "admissible_subtraction_check",
    "conjecture_probe",
]
