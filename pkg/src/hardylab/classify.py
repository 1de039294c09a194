"""Closed-form class membership tests cross-validated against matrix oracles.

The analytic side reads u'(0), phi(0), phi'(0) off the coefficient vectors,
reconstructs the canonical rational forms they would generate, and accepts
only on an entrywise match. The matrix side measures residuals on the
truncated operator. The two verdicts are reported together; a disagreement is
surfaced as a consistency failure, never resolved silently.

The normality test implemented here is a sufficient condition only (it is
labeled as such); no claim of an if-and-only-if normality criterion is made.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .operators import (
    DEFAULT_TRUNC,
    TOL_ENTRYWISE,
    TOL_PRODUCT,
    CheckResult,
    Conjugation,
    adjoint,
    build_operator,
    check_complex_symmetric,
    check_normal,
    check_self_adjoint,
    check_unitary,
    kernel_vector,
)
from .series import (
    MobiusMap,
    NotExpandableError,
    PowerSeries,
    SelfMapError,
    symmetric_form_mobius,
    symmetric_form_phi,
    symmetric_form_u,
)

__all__ = [
    "REALITY_TOL",
    "CONDITION_TOL",
    "SymmetricFormParams",
    "ClassificationReport",
    "NormalityCondition",
    "extract_symmetric_params",
    "classify_symmetry",
    "classify_self_adjoint",
    "sigma_map",
    "check_adjoint_identity",
    "check_normality_condition",
]

# Parameters are read from coefficients, not fitted, so the noise floor for
# reality and condition tests is rounding level.
REALITY_TOL = 1e-12
CONDITION_TOL = 1e-12


@dataclass(frozen=True)
class SymmetricFormParams:
    """Parameters (a, b, c, alpha) of the canonical rational pair.

    a = u'(0), b = phi(0), c = phi'(0); alpha is the unimodular twist of the
    conjugation the form belongs to. The reconstructed symbol is
    u = a z/(1 - alpha b z)^2 and phi = b + c z/(1 - alpha b z).
    """

    a: complex
    b: complex
    c: complex
    alpha: complex

    def all_real(self, tol: float = REALITY_TOL) -> bool:
        return max(abs(self.a.imag), abs(self.b.imag), abs(self.c.imag)) <= tol


@dataclass(frozen=True)
class ClassificationReport:
    """Joint analytic/matrix verdict for one (u, phi) pair.

    ``symmetric_flag`` and ``self_adjoint_flag`` are the analytic verdicts
    (canonical-form membership, plus real parameters for self-adjointness).
    ``normal_flag`` and ``unitary_flag`` come from the matrix oracle, which is
    the only route available for them. ``oracle_flags`` holds all four matrix
    verdicts and ``residuals`` the measured residuals, so callers can always
    distinguish "barely fails" from "structurally fails". ``consistent`` is
    False when an analytic verdict contradicts its matrix counterpart.
    """

    params: SymmetricFormParams | None
    symmetric_flag: bool
    self_adjoint_flag: bool
    normal_flag: bool
    unitary_flag: bool
    oracle_flags: dict
    residuals: dict
    trunc: int
    phi_sup_norm: float
    consistent: bool


class NormalityCondition(NamedTuple):
    holds: bool
    details: dict


def _extract_with_residual(
    u: PowerSeries, phi: PowerSeries, alpha: complex, tol: float
) -> tuple[SymmetricFormParams | None, float]:
    """Read (a, b, c) and measure the entrywise reconstruction residual."""
    if u.is_zero():
        raise ValueError("u must be nonzero")
    if u.trunc != phi.trunc:
        raise ValueError(f"truncation mismatch: {u.trunc} != {phi.trunc}")
    trunc = u.trunc
    b = complex(phi.coeffs[0])
    c = complex(phi.coeffs[1]) if trunc > 1 else 0.0 + 0.0j
    a = complex(u.coeffs[1]) if trunc > 1 else 0.0 + 0.0j
    # The form requires u(0) = 0 and a convergent expansion (|b| < 1).
    if abs(u.coeffs[0]) > tol or abs(b) >= 1:
        return None, float("inf")
    u_rec = symmetric_form_u(a, b, alpha, trunc)
    phi_rec = symmetric_form_phi(b, c, alpha, trunc)
    residual = float(
        max(
            np.max(np.abs(u.coeffs - u_rec.coeffs)),
            np.max(np.abs(phi.coeffs - phi_rec.coeffs)),
        )
    )
    if residual <= tol:
        return SymmetricFormParams(a=a, b=b, c=c, alpha=complex(alpha)), residual
    return None, residual


def extract_symmetric_params(
    u: PowerSeries, phi: PowerSeries, alpha: complex, tol: float = TOL_ENTRYWISE
) -> SymmetricFormParams | None:
    """Parameters of the canonical pair if (u, phi) matches it entrywise, else None."""
    params, _ = _extract_with_residual(u, phi, complex(alpha), tol)
    return params


def _sup_norm_of(phi: PowerSeries, phi_sup_norm: float | None) -> float:
    return float(phi_sup_norm) if phi_sup_norm is not None else phi.sup_norm_estimate()


def _full_report(
    u: PowerSeries,
    phi: PowerSeries,
    conj: Conjugation,
    trunc: int,
    tol: float,
    tol_product: float,
    phi_sup_norm: float | None,
    scope: str,
) -> ClassificationReport:
    u = u.truncate(trunc) if u.trunc >= trunc else u
    phi = phi.truncate(trunc) if phi.trunc >= trunc else phi
    if u.trunc != trunc or phi.trunc != trunc:
        raise ValueError(f"u and phi must carry at least trunc={trunc} coefficients")
    sup = _sup_norm_of(phi, phi_sup_norm)

    params_sym, rec_sym = _extract_with_residual(u, phi, conj.alpha, tol)
    params_sa, rec_sa = _extract_with_residual(u, phi, 1.0, tol)
    symmetric_flag = params_sym is not None
    self_adjoint_flag = params_sa is not None and params_sa.all_real()

    mat = build_operator(u, phi, 1, trunc, phi_sup_norm=sup)
    sym = check_complex_symmetric(mat, conj, tol)
    sa = check_self_adjoint(mat, tol)
    nrm = check_normal(mat, tol_product)
    uni = check_unitary(mat, tol_product)

    oracle_flags = {
        "complex_symmetric": sym.flag,
        "self_adjoint": sa.flag,
        "normal": nrm.flag,
        "unitary": uni.flag,
    }
    residuals = {
        "complex_symmetric": sym.residual,
        "self_adjoint": sa.residual,
        "normal": nrm.residual,
        "unitary": uni.residual,
        "form_reconstruction": rec_sym,
        "form_reconstruction_untwisted": rec_sa,
    }
    agreements = {
        "symmetric": symmetric_flag == sym.flag,
        "self_adjoint": self_adjoint_flag == sa.flag,
    }
    if scope == "symmetric":
        consistent = agreements["symmetric"]
    elif scope == "self_adjoint":
        consistent = agreements["self_adjoint"]
    else:
        consistent = all(agreements.values())

    return ClassificationReport(
        params=params_sym if scope != "self_adjoint" else params_sa,
        symmetric_flag=symmetric_flag,
        self_adjoint_flag=self_adjoint_flag,
        normal_flag=nrm.flag,
        unitary_flag=uni.flag,
        oracle_flags=oracle_flags,
        residuals=residuals,
        trunc=trunc,
        phi_sup_norm=sup,
        consistent=consistent,
    )


def classify_symmetry(
    u: PowerSeries,
    phi: PowerSeries,
    conj: Conjugation,
    trunc: int = DEFAULT_TRUNC,
    tol: float = TOL_ENTRYWISE,
    tol_product: float = TOL_PRODUCT,
    *,
    phi_sup_norm: float | None = None,
) -> ClassificationReport:
    """Analytic canonical-form verdict for the given conjugation, cross-checked.

    The verdict depends only on the alpha of the conjugation: the matrix
    residual of T - C T* C is lam-free because the lam factors cancel, so the
    report is identical for any unimodular lam.
    """
    return _full_report(u, phi, conj, trunc, tol, tol_product, phi_sup_norm, "symmetric")


def classify_self_adjoint(
    u: PowerSeries,
    phi: PowerSeries,
    trunc: int = DEFAULT_TRUNC,
    tol: float = TOL_ENTRYWISE,
    tol_product: float = TOL_PRODUCT,
    *,
    phi_sup_norm: float | None = None,
) -> ClassificationReport:
    """Real-parameter canonical-form verdict, cross-checked against T = T*."""
    conj = Conjugation(1.0, 1.0)
    return _full_report(u, phi, conj, trunc, tol, tol_product, phi_sup_norm, "self_adjoint")


def classify_full(
    u: PowerSeries,
    phi: PowerSeries,
    conj: Conjugation,
    trunc: int = DEFAULT_TRUNC,
    tol: float = TOL_ENTRYWISE,
    tol_product: float = TOL_PRODUCT,
    *,
    phi_sup_norm: float | None = None,
) -> ClassificationReport:
    """Report with both analytic verdicts; consistent only if both agree with the oracle."""
    return _full_report(u, phi, conj, trunc, tol, tol_product, phi_sup_norm, "both")


def sigma_map(phi: MobiusMap) -> MobiusMap:
    """Companion map of (az+b)/(cz+d): z -> (conj(a) z - conj(c)) / (-conj(b) z + conj(d)).

    Appears in the adjoint identity for linear fractional symbols; applying it
    twice returns the original coefficients exactly.
    """
    return MobiusMap(
        np.conj(phi.a), -np.conj(phi.c), -np.conj(phi.b), np.conj(phi.d)
    )


def check_adjoint_identity(
    phi: MobiusMap, trunc: int = DEFAULT_TRUNC, tol: float = 1e-10
) -> CheckResult:
    """Adjoint identity between the two kernel-weighted operators.

    Builds M1 with weight K1 at sigma(0) and symbol phi, and M2 with weight K1
    at phi(0) and symbol sigma, then measures ||M1* - M2||_F. The identity is
    entrywise, so compression preserves it exactly and the tolerance is
    rounding level.
    """
    sup_phi = phi.require_strict_self_map()
    sigma = sigma_map(phi)
    sup_sigma = sigma.sup_norm()
    if sup_sigma >= 1.0:
        raise SelfMapError(
            f"companion map is not a strict self-map: sup-norm {sup_sigma:.6g} >= 1"
        )
    phi0 = phi(0.0)
    sigma0 = sigma(0.0)
    m1 = build_operator(
        kernel_vector(sigma0, 1, trunc).coeffs,
        phi.to_series(trunc),
        1,
        trunc,
        phi_sup_norm=sup_phi,
    )
    m2 = build_operator(
        kernel_vector(phi0, 1, trunc).coeffs,
        sigma.to_series(trunc),
        1,
        trunc,
        phi_sup_norm=sup_sigma,
    )
    residual = float(np.linalg.norm(adjoint(m1).entries - m2.entries))
    return CheckResult(residual <= tol, residual)


def check_normality_condition(phi: MobiusMap) -> NormalityCondition:
    """Sufficient condition for normality of the kernel-weighted operator.

    Checks a conj(b) = -conj(a) c and phi(0) = sigma(0) (both to 1e-12). When
    it holds, the operator with weight K1 at sigma(0) and symbol phi is
    normal. This is one-directional: failing the condition proves nothing.
    """
    if phi.d == 0:
        raise ValueError("condition requires d != 0 (phi(0) must be defined)")
    weight_residual = float(abs(phi.a * np.conj(phi.b) + np.conj(phi.a) * phi.c))
    sigma0 = complex(-np.conj(phi.c) / np.conj(phi.d))
    fixed_point_residual = float(abs(phi.b / phi.d - sigma0))
    holds = weight_residual <= CONDITION_TOL and fixed_point_residual <= CONDITION_TOL
    details = {
        "weight_product_residual": float(weight_residual),
        "fixed_point_residual": float(fixed_point_residual),
        "sigma0": complex(sigma0),
        "implied_weight": {"kind": "kernel_deriv", "w": complex(sigma0)},
    }
    return NormalityCondition(holds, details)


def reconstructed_sup_norm(params: SymmetricFormParams) -> float:
    """Exact sup-norm of the reconstructed phi, or |b| for the constant case c = 0."""
    if params.c == 0:
        return abs(params.b)
    try:
        return symmetric_form_mobius(params.b, params.c, params.alpha).sup_norm()
    except (ValueError, NotExpandableError):
        return symmetric_form_phi(params.b, params.c, params.alpha, 512).sup_norm_estimate()
