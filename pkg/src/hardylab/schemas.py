"""Request/response models shared by the HTTP service and the CLI.

Complex numbers cross the wire as two-element arrays [re, im], never as
strings; bare JSON numbers are accepted on input and read as reals. Reports
are deterministic for identical inputs: field order is fixed, floats
serialize in shortest round-trip form, and nothing volatile (timestamps,
timings) is emitted unless explicitly requested.
"""

from __future__ import annotations

import math
from typing import Annotated, Literal, Optional, Union

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    model_validator,
)

__all__ = [
    "ComplexPair",
    "pair_to_complex",
    "complex_to_pair",
    "PolySpec",
    "MobiusSpec",
    "SymmetricUSpec",
    "SymmetricPhiSpec",
    "KernelDerivSpec",
    "FunctionSpec",
    "parse_function_spec",
    "MatrixRequest",
    "CheckRequest",
    "ClassifyRequest",
    "SpectrumRequest",
    "VerifyRequest",
    "CheckOutcome",
    "ExtractedParams",
    "AnalyticVerdicts",
    "RunReport",
    "MatrixResponse",
    "ClassificationModel",
    "PowerIterationInfo",
    "SpectrumAudit",
    "SuiteCheckResult",
    "VerifyReport",
    "HealthResponse",
]

_UNIT_MODULUS_TOL = 1e-12


def _to_pair(value):
    if isinstance(value, bool):
        raise ValueError("complex values must be numbers or [re, im] pairs")
    if isinstance(value, (int, float)):
        value = (float(value), 0.0)
    elif isinstance(value, complex):
        value = (value.real, value.imag)
    elif isinstance(value, (list, tuple)) and len(value) == 2:
        value = (float(value[0]), float(value[1]))
    else:
        raise ValueError("complex values must be numbers or [re, im] pairs")
    if not (math.isfinite(value[0]) and math.isfinite(value[1])):
        raise ValueError("complex components must be finite")
    return value


ComplexPair = Annotated[tuple[float, float], BeforeValidator(_to_pair)]


def pair_to_complex(pair) -> complex:
    return complex(pair[0], pair[1])


def complex_to_pair(z) -> tuple[float, float]:
    z = complex(z)
    return (z.real, z.imag)


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PolySpec(_StrictModel):
    """Finite coefficient list; coeffs[n] is the z^n coefficient."""

    kind: Literal["poly"]
    coeffs: list[ComplexPair] = Field(min_length=1)


class MobiusSpec(_StrictModel):
    """Linear fractional map (a z + b)/(c z + d), nondegenerate."""

    kind: Literal["mobius"]
    a: ComplexPair
    b: ComplexPair
    c: ComplexPair
    d: ComplexPair

    @model_validator(mode="after")
    def _nondegenerate(self):
        det = pair_to_complex(self.a) * pair_to_complex(self.d) - pair_to_complex(
            self.b
        ) * pair_to_complex(self.c)
        if det == 0:
            raise ValueError("degenerate map: ad - bc = 0")
        return self


def _require_unit(pair, name: str):
    mod = abs(pair_to_complex(pair))
    if abs(mod - 1.0) > _UNIT_MODULUS_TOL:
        raise ValueError(f"|{name}| = {mod:.15g} is not 1 within {_UNIT_MODULUS_TOL}")


def _require_in_disk(pair, name: str):
    mod = abs(pair_to_complex(pair))
    if mod >= 1.0:
        raise ValueError(f"|{name}| = {mod:.6g} must be < 1")


class SymmetricUSpec(_StrictModel):
    """Weight a z / (1 - alpha b z)^2 with |b| < 1 and unimodular alpha."""

    kind: Literal["symmetric_form_u"]
    a: ComplexPair
    b: ComplexPair
    alpha: ComplexPair

    @model_validator(mode="after")
    def _valid(self):
        _require_in_disk(self.b, "b")
        _require_unit(self.alpha, "alpha")
        return self


class SymmetricPhiSpec(_StrictModel):
    """Symbol b + c z / (1 - alpha b z) with |b| < 1 and unimodular alpha."""

    kind: Literal["symmetric_form_phi"]
    b: ComplexPair
    c: ComplexPair
    alpha: ComplexPair

    @model_validator(mode="after")
    def _valid(self):
        _require_in_disk(self.b, "b")
        _require_unit(self.alpha, "alpha")
        return self


class KernelDerivSpec(_StrictModel):
    """Derivative-reproducing kernel z / (1 - conj(w) z)^2 at a disk point."""

    kind: Literal["kernel_deriv"]
    w: ComplexPair

    @model_validator(mode="after")
    def _valid(self):
        _require_in_disk(self.w, "w")
        return self


FunctionSpec = Annotated[
    Union[PolySpec, MobiusSpec, SymmetricUSpec, SymmetricPhiSpec, KernelDerivSpec],
    Field(discriminator="kind"),
]


class _SpecHolder(BaseModel):
    spec: FunctionSpec


def parse_function_spec(data) -> FunctionSpec:
    """Validate a raw dict (or JSON-decoded object) into a FunctionSpec."""
    return _SpecHolder(spec=data).spec


# ---------------------------------------------------------------------------
# requests


class MatrixRequest(_StrictModel):
    u: FunctionSpec
    phi: FunctionSpec
    m: int = Field(default=1, ge=0)
    trunc: int = Field(default=128, ge=1, le=4096)


class CheckRequest(_StrictModel):
    u: FunctionSpec
    phi: FunctionSpec
    lam: ComplexPair = (1.0, 0.0)
    alpha: ComplexPair = (1.0, 0.0)
    trunc: int = Field(default=128, ge=2, le=4096)
    tol_entrywise: float = Field(default=1e-9, gt=0)
    tol_product: float = Field(default=1e-6, gt=0)

    @model_validator(mode="after")
    def _valid(self):
        _require_unit(self.lam, "lam")
        _require_unit(self.alpha, "alpha")
        return self


class ClassifyRequest(CheckRequest):
    pass


class SpectrumRequest(_StrictModel):
    a: float = 1.0
    c: float
    trunc: int = Field(default=128, ge=2, le=4096)


class VerifyRequest(_StrictModel):
    trunc: int = Field(default=128, ge=2, le=1024)
    seed: int = 42
    skip: list[str] = Field(default_factory=list)
    tol_entrywise: float = Field(default=1e-9, gt=0)
    tol_product: float = Field(default=1e-6, gt=0)


# ---------------------------------------------------------------------------
# responses


class CheckOutcome(BaseModel):
    flag: bool
    residual: float
    tol: float


class ExtractedParams(BaseModel):
    a: ComplexPair
    b: ComplexPair
    c: ComplexPair
    alpha: ComplexPair


class AnalyticVerdicts(BaseModel):
    symmetric: bool
    self_adjoint: bool
    params: Optional[ExtractedParams] = None


class RunReport(BaseModel):
    """Deterministic record of one check run; reproducible byte for byte."""

    command: str
    version: str
    inputs: dict
    trunc: int
    phi_sup_norm: float
    checks: dict[str, CheckOutcome]
    analytic: AnalyticVerdicts
    consistent: bool
    timings: Optional[dict[str, float]] = None


class MatrixResponse(BaseModel):
    trunc: int
    m: int
    u_spec: dict
    phi_spec: dict
    phi_sup_norm: float
    entries: list[list[ComplexPair]]


class ClassificationModel(BaseModel):
    params: Optional[ExtractedParams] = None
    symmetric_flag: bool
    self_adjoint_flag: bool
    normal_flag: bool
    unitary_flag: bool
    oracle_flags: dict[str, bool]
    residuals: dict[str, float]
    trunc: int
    phi_sup_norm: float
    consistent: bool


class PowerIterationInfo(BaseModel):
    value: float
    iterations: int
    rel_change: float
    converged: bool
    seed: int


class SpectrumAudit(BaseModel):
    """Measured diagonal data next to the stated closed form, never merged."""

    a: float
    sign: int
    c: float
    trunc: int
    entries: list[float]
    k_star: int
    oracle_norm: float
    formula_k: int
    formula_norm: float
    ratio: Optional[float] = None
    power_iteration: PowerIterationInfo


class SuiteCheckResult(BaseModel):
    name: str
    group: str
    status: Literal["passed", "failed", "tail-limited", "skipped"]
    passed: bool
    detail: dict


class VerifyReport(BaseModel):
    version: str
    trunc: int
    seed: int
    skip: list[str]
    tol_entrywise: float
    tol_product: float
    checks: list[SuiteCheckResult]
    passed: bool


class HealthResponse(BaseModel):
    status: str
    version: str
