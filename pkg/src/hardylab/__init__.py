"""hardylab: numerical operator theory on the Hardy space of the unit disk.

Weighted composition-differentiation operators f -> u * f^(m)(phi) are
represented as truncated matrices in the monomial basis. Closed-form
classifications (complex symmetry with respect to coefficientwise
conjugations, self-adjointness, a sufficient normality condition) are
cross-checked against brute-force matrix oracles, and the diagonal family
u = a z, phi = c z gets a full spectrum/norm audit.
"""

__version__ = "0.1.0"

from .series import (
    DiskCircle,
    MobiusMap,
    NotExpandableError,
    PowerSeries,
    SelfMapError,
    boundary_sup_norm,
    from_coeffs,
    monomial,
    symmetric_form_mobius,
    symmetric_form_phi,
    symmetric_form_u,
    unit,
    zeros,
)
from .operators import (
    CheckResult,
    Conjugation,
    KernelVector,
    OperatorMatrix,
    adjoint,
    apply_conjugation,
    apply_matrix,
    build_operator,
    check_complex_symmetric,
    check_normal,
    check_self_adjoint,
    check_unitary,
    conjugated_adjoint,
    inner_product,
    kernel_vector,
)
from .classify import (
    ClassificationReport,
    NormalityCondition,
    SymmetricFormParams,
    check_adjoint_identity,
    check_normality_condition,
    classify_full,
    classify_self_adjoint,
    classify_symmetry,
    extract_symmetric_params,
    sigma_map,
)
from .spectral import (
    DiagonalSpectrum,
    NormEstimate,
    StudyPoint,
    diagonal_spectrum,
    eigenvector_check,
    is_non_increasing,
    operator_norm_estimate,
    truncation_convergence_study,
)
from .matrixio import dump_matrix, dumps_matrix, load_matrix, loads_matrix

__all__ = [
    "__version__",
    "PowerSeries",
    "MobiusMap",
    "DiskCircle",
    "NotExpandableError",
    "SelfMapError",
    "boundary_sup_norm",
    "from_coeffs",
    "monomial",
    "unit",
    "zeros",
    "symmetric_form_u",
    "symmetric_form_phi",
    "symmetric_form_mobius",
    "OperatorMatrix",
    "Conjugation",
    "KernelVector",
    "CheckResult",
    "build_operator",
    "kernel_vector",
    "inner_product",
    "adjoint",
    "apply_matrix",
    "apply_conjugation",
    "conjugated_adjoint",
    "check_complex_symmetric",
    "check_self_adjoint",
    "check_normal",
    "check_unitary",
    "ClassificationReport",
    "SymmetricFormParams",
    "NormalityCondition",
    "extract_symmetric_params",
    "classify_symmetry",
    "classify_self_adjoint",
    "classify_full",
    "sigma_map",
    "check_adjoint_identity",
    "check_normality_condition",
    "DiagonalSpectrum",
    "NormEstimate",
    "StudyPoint",
    "diagonal_spectrum",
    "eigenvector_check",
    "operator_norm_estimate",
    "truncation_convergence_study",
    "is_non_increasing",
    "dump_matrix",
    "dumps_matrix",
    "load_matrix",
    "loads_matrix",
]
