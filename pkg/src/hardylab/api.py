"""Handlers that turn validated requests into response models.

This is the single implementation layer behind both the HTTP endpoints and
the CLI subcommands: each handler is a pure function of its request model, so
a report produced over the wire is byte-identical to one produced in-process.
"""

from __future__ import annotations

from . import __version__
from .classify import classify_full
from .operators import Conjugation, build_operator, kernel_vector
from .schemas import (
    AnalyticVerdicts,
    CheckOutcome,
    CheckRequest,
    ClassificationModel,
    ClassifyRequest,
    ExtractedParams,
    FunctionSpec,
    KernelDerivSpec,
    MatrixRequest,
    MatrixResponse,
    MobiusSpec,
    PolySpec,
    PowerIterationInfo,
    RunReport,
    SpectrumAudit,
    SpectrumRequest,
    SymmetricPhiSpec,
    SymmetricUSpec,
    VerifyReport,
    VerifyRequest,
    complex_to_pair,
    pair_to_complex,
)
from .series import (
    MobiusMap,
    PowerSeries,
    from_coeffs,
    symmetric_form_mobius,
    symmetric_form_phi,
    symmetric_form_u,
)
from .spectral import diagonal_spectrum, operator_norm_estimate

__all__ = [
    "materialize_series",
    "spec_sup_norm",
    "handle_matrix",
    "handle_check",
    "handle_classify",
    "handle_spectrum",
    "handle_verify",
]

_NORM_SEED = 0


def materialize_series(spec: FunctionSpec, trunc: int) -> PowerSeries:
    """Expand a function spec into its first ``trunc`` Maclaurin coefficients."""
    if isinstance(spec, PolySpec):
        return from_coeffs([pair_to_complex(p) for p in spec.coeffs], trunc)
    if isinstance(spec, MobiusSpec):
        return _as_map(spec).to_series(trunc)
    if isinstance(spec, SymmetricUSpec):
        return symmetric_form_u(
            pair_to_complex(spec.a), pair_to_complex(spec.b), pair_to_complex(spec.alpha), trunc
        )
    if isinstance(spec, SymmetricPhiSpec):
        return symmetric_form_phi(
            pair_to_complex(spec.b), pair_to_complex(spec.c), pair_to_complex(spec.alpha), trunc
        )
    if isinstance(spec, KernelDerivSpec):
        return kernel_vector(pair_to_complex(spec.w), 1, trunc).coeffs
    raise ValueError(f"unsupported spec kind {spec!r}")


def _as_map(spec: MobiusSpec) -> MobiusMap:
    return MobiusMap(
        pair_to_complex(spec.a),
        pair_to_complex(spec.b),
        pair_to_complex(spec.c),
        pair_to_complex(spec.d),
    )


def spec_sup_norm(spec: FunctionSpec, series: PowerSeries) -> float:
    """Sup-norm on the closed disk: exact circle geometry for linear fractional
    specs, dense boundary sampling otherwise."""
    if isinstance(spec, MobiusSpec):
        return _as_map(spec).sup_norm()
    if isinstance(spec, SymmetricPhiSpec):
        b = pair_to_complex(spec.b)
        c = pair_to_complex(spec.c)
        alpha = pair_to_complex(spec.alpha)
        if c == 0:
            return abs(b)
        return symmetric_form_mobius(b, c, alpha).sup_norm()
    return series.sup_norm_estimate()


def handle_matrix(req: MatrixRequest) -> MatrixResponse:
    u = materialize_series(req.u, req.trunc)
    phi = materialize_series(req.phi, req.trunc)
    sup = spec_sup_norm(req.phi, phi)
    meta = {
        "u_spec": req.u.model_dump(),
        "phi_spec": req.phi.model_dump(),
        "m": req.m,
    }
    mat = build_operator(u, phi, req.m, req.trunc, phi_sup_norm=sup, meta=meta)
    entries = [
        [complex_to_pair(mat.entries[row, col]) for col in range(req.trunc)]
        for row in range(req.trunc)
    ]
    return MatrixResponse(
        trunc=req.trunc,
        m=req.m,
        u_spec=req.u.model_dump(),
        phi_spec=req.phi.model_dump(),
        phi_sup_norm=sup,
        entries=entries,
    )


def _classification(req: CheckRequest):
    u = materialize_series(req.u, req.trunc)
    phi = materialize_series(req.phi, req.trunc)
    sup = spec_sup_norm(req.phi, phi)
    conj = Conjugation(pair_to_complex(req.lam), pair_to_complex(req.alpha))
    report = classify_full(
        u,
        phi,
        conj,
        req.trunc,
        req.tol_entrywise,
        req.tol_product,
        phi_sup_norm=sup,
    )
    return report


def _params_model(params) -> ExtractedParams | None:
    if params is None:
        return None
    return ExtractedParams(
        a=complex_to_pair(params.a),
        b=complex_to_pair(params.b),
        c=complex_to_pair(params.c),
        alpha=complex_to_pair(params.alpha),
    )


def handle_check(req: CheckRequest) -> RunReport:
    report = _classification(req)
    checks = {
        "complex_symmetric": CheckOutcome(
            flag=report.oracle_flags["complex_symmetric"],
            residual=report.residuals["complex_symmetric"],
            tol=req.tol_entrywise,
        ),
        "self_adjoint": CheckOutcome(
            flag=report.oracle_flags["self_adjoint"],
            residual=report.residuals["self_adjoint"],
            tol=req.tol_entrywise,
        ),
        "normal": CheckOutcome(
            flag=report.oracle_flags["normal"],
            residual=report.residuals["normal"],
            tol=req.tol_product,
        ),
        "unitary": CheckOutcome(
            flag=report.oracle_flags["unitary"],
            residual=report.residuals["unitary"],
            tol=req.tol_product,
        ),
    }
    analytic = AnalyticVerdicts(
        symmetric=report.symmetric_flag,
        self_adjoint=report.self_adjoint_flag,
        params=_params_model(report.params),
    )
    return RunReport(
        command="check",
        version=__version__,
        inputs=req.model_dump(),
        trunc=req.trunc,
        phi_sup_norm=report.phi_sup_norm,
        checks=checks,
        analytic=analytic,
        consistent=report.consistent,
    )


def handle_classify(req: ClassifyRequest) -> ClassificationModel:
    report = _classification(req)
    return ClassificationModel(
        params=_params_model(report.params),
        symmetric_flag=report.symmetric_flag,
        self_adjoint_flag=report.self_adjoint_flag,
        normal_flag=report.normal_flag,
        unitary_flag=report.unitary_flag,
        oracle_flags=report.oracle_flags,
        residuals=report.residuals,
        trunc=report.trunc,
        phi_sup_norm=report.phi_sup_norm,
        consistent=report.consistent,
    )


def handle_spectrum(req: SpectrumRequest) -> SpectrumAudit:
    spectrum = diagonal_spectrum(req.a, req.c, req.trunc)
    u = from_coeffs([0.0, spectrum.a], req.trunc)
    phi = from_coeffs([0.0, spectrum.c], req.trunc)
    mat = build_operator(u, phi, 1, req.trunc, phi_sup_norm=spectrum.c)
    estimate = operator_norm_estimate(mat, seed=_NORM_SEED)
    ratio = spectrum.formula_norm / spectrum.norm if spectrum.norm > 0 else None
    return SpectrumAudit(
        a=spectrum.a,
        sign=spectrum.sign,
        c=spectrum.c,
        trunc=spectrum.trunc,
        entries=[float(x) for x in spectrum.entries],
        k_star=spectrum.k_star,
        oracle_norm=spectrum.norm,
        formula_k=spectrum.formula_k,
        formula_norm=spectrum.formula_norm,
        ratio=ratio,
        power_iteration=PowerIterationInfo(
            value=estimate.value,
            iterations=estimate.iterations,
            rel_change=estimate.rel_change,
            converged=estimate.converged,
            seed=_NORM_SEED,
        ),
    )


def handle_verify(req: VerifyRequest) -> VerifyReport:
    from .suite import run_suite

    return run_suite(
        trunc=req.trunc,
        seed=req.seed,
        skip=req.skip,
        tol_entrywise=req.tol_entrywise,
        tol_product=req.tol_product,
    )
