"""Monomial-basis matrices for weighted composition-differentiation operators.

The operator acts on the Hardy space by f -> u * (d^m f/dz^m)(phi). On the
monomial basis this sends z^n to u * (n!/(n-m)!) * phi^(n-m), so column n of
the truncated matrix is the coefficient vector of that image (a zero column
for n < m). The monomials are orthonormal in H^2, hence the adjoint of a
truncated matrix is its conjugate transpose with no Gram correction.

Truncation is compression P_N T P_N. Entrywise identities (symmetry,
self-adjointness, the adjoint-on-kernels identity) survive compression
exactly, so their residuals sit at rounding level. Product identities
(normality, unitarity) pick up a geometric tail O(sup_norm^N) and get the
looser default tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

from .series import PowerSeries, SelfMapError, unit

__all__ = [
    "DEFAULT_TRUNC",
    "TOL_ENTRYWISE",
    "TOL_PRODUCT",
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
]

DEFAULT_TRUNC = 128
TOL_ENTRYWISE = 1e-9
TOL_PRODUCT = 1e-6

_UNIT_MODULUS_TOL = 1e-12


class CheckResult(NamedTuple):
    flag: bool
    residual: float


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Square complex matrix of an operator in the monomial basis.

    ``entries[m, n]`` is the z^m coefficient of the image of z^n. ``meta`` is
    optional provenance (serialized input specs and the derivative order) used
    by the export format.
    """

    entries: np.ndarray
    meta: Mapping | None = None

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("entries must be a square matrix")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        if self.meta is not None:
            object.__setattr__(self, "meta", dict(self.meta))

    @property
    def trunc(self) -> int:
        return int(self.entries.shape[0])


def _unit_powers(alpha: complex, n: int) -> np.ndarray:
    """[1, alpha, alpha^2, ...] kept on the unit circle.

    A plain cumulative product drifts off the circle by ~sqrt(n) ulp, which is
    enough to spoil 1e-13 level identities at n ~ 256; renormalizing the
    moduli removes the drift while preserving exact values for real or
    quarter-turn alpha.
    """
    out = np.empty(n, dtype=np.complex128)
    out[0] = 1.0
    if n > 1:
        np.cumprod(np.full(n - 1, alpha, dtype=np.complex128), out=out[1:])
        out[1:] /= np.abs(out[1:])
    return out


@dataclass(frozen=True)
class Conjugation:
    """The antilinear involution f(z) -> lam * conj(f(conj(alpha z))).

    On coefficient vectors: (C x)_n = lam * alpha^n * conj(x_n). Both
    parameters must be unimodular (checked to 1e-12, then snapped onto the
    circle so that C^2 = I holds to rounding).
    """

    lam: complex = 1.0
    alpha: complex = 1.0

    def __post_init__(self):
        for name in ("lam", "alpha"):
            value = complex(getattr(self, name))
            mod = abs(value)
            if abs(mod - 1.0) > _UNIT_MODULUS_TOL:
                raise ValueError(f"|{name}| = {mod:.15g} is not 1 within {_UNIT_MODULUS_TOL}")
            object.__setattr__(self, name, value / mod)

    def diagonal(self, n: int) -> np.ndarray:
        """The factors lam * alpha^k for k < n."""
        return self.lam * _unit_powers(self.alpha, n)


@dataclass(frozen=True, eq=False)
class KernelVector:
    """Truncated reproducing kernel at a disk point.

    order 0 reproduces point evaluation (coeffs[n] = conj(w)^n); order 1
    reproduces the first derivative (coeffs[n] = n conj(w)^(n-1), coeffs[0]=0).
    """

    w: complex
    order: int
    coeffs: PowerSeries


def kernel_vector(w, order: int, trunc: int) -> KernelVector:
    """Reproducing kernel K_w (order 0) or derivative kernel (order 1)."""
    w = complex(w)
    if abs(w) >= 1:
        raise ValueError(f"|w| = {abs(w):.6g} >= 1: kernel point must lie in the open disk")
    if order not in (0, 1):
        raise ValueError("order must be 0 or 1")
    if trunc < 1:
        raise ValueError("trunc must be >= 1")
    out = np.zeros(trunc, dtype=np.complex128)
    wbar = np.conj(w)
    if order == 0:
        out[:] = wbar ** np.arange(trunc)
    elif trunc > 1:
        n = np.arange(1, trunc)
        out[1:] = n * wbar ** (n - 1)
    return KernelVector(w=w, order=order, coeffs=PowerSeries(out))


def build_operator(
    u: PowerSeries,
    phi: PowerSeries,
    m: int,
    trunc: int,
    *,
    phi_sup_norm: float | None = None,
    meta: Mapping | None = None,
) -> OperatorMatrix:
    """Truncated matrix of f -> u * f^(m)(phi) on the monomial basis.

    Column n is u * (n!/(n-m)!) * phi^(n-m) truncated to ``trunc`` terms
    (zero for n < m). The first ``trunc`` coefficients of each column are
    exact up to rounding because truncated products of truncated series agree
    with the true products on the retained range.

    ``phi_sup_norm`` may carry an exact sup-norm (for example from Mobius
    geometry); otherwise a boundary-sampling estimate is used. A sup-norm
    of 1 or more raises :class:`SelfMapError`.
    """
    if not isinstance(m, int) or m < 0:
        raise ValueError("derivative order m must be a nonnegative integer")
    if trunc < 1:
        raise ValueError("trunc must be >= 1")
    if u.trunc < trunc or phi.trunc < trunc:
        raise ValueError(
            f"u and phi must carry at least trunc={trunc} coefficients "
            f"(got {u.trunc}, {phi.trunc})"
        )
    u = u.truncate(trunc)
    phi = phi.truncate(trunc)
    sup = float(phi_sup_norm) if phi_sup_norm is not None else phi.sup_norm_estimate()
    if sup >= 1.0:
        raise SelfMapError(
            f"not a strict self-map; operator may be unbounded (sup-norm {sup:.6g} >= 1)"
        )
    entries = np.zeros((trunc, trunc), dtype=np.complex128)
    power = unit(trunc)  # phi^(n-m), advanced once per column from n = m on
    for n in range(m, trunc):
        entries[:, n] = float(math.perm(n, m)) * (u * power).coeffs
        power = power * phi
    info = dict(meta) if meta is not None else {}
    info.setdefault("m", m)
    info.setdefault("phi_sup_norm", sup)
    return OperatorMatrix(entries=entries, meta=info)


def inner_product(f: PowerSeries, g: PowerSeries) -> complex:
    """H^2 pairing sum_n f_n conj(g_n) over the shared truncation."""
    if f.trunc != g.trunc:
        raise ValueError(f"truncation mismatch: {f.trunc} != {g.trunc}")
    return complex(np.sum(f.coeffs * np.conj(g.coeffs)))


def adjoint(mat: OperatorMatrix) -> OperatorMatrix:
    """Conjugate transpose (the adjoint in the orthonormal monomial basis)."""
    return OperatorMatrix(entries=mat.entries.conj().T, meta=mat.meta)


def apply_matrix(mat: OperatorMatrix, f: PowerSeries) -> PowerSeries:
    """Matrix action on a coefficient vector of matching truncation."""
    if f.trunc != mat.trunc:
        raise ValueError(f"truncation mismatch: {f.trunc} != {mat.trunc}")
    return PowerSeries(mat.entries @ f.coeffs)


def apply_conjugation(conj: Conjugation, f: PowerSeries) -> PowerSeries:
    """Coefficientwise action (C f)_n = lam * alpha^n * conj(f_n)."""
    return PowerSeries(conj.diagonal(f.trunc) * np.conj(f.coeffs))


def conjugated_adjoint(mat: OperatorMatrix, conj: Conjugation) -> OperatorMatrix:
    """Matrix of C T* C for the coefficientwise conjugation C.

    With Lam_k = lam * alpha^k the entries are
    (C T* C)[m, n] = Lam_m * conj(Lam_n) * T[n, m] = alpha^m conj(alpha)^n T[n, m];
    the lam factors cancel exactly since |lam| = 1, so the result is lam-free.
    """
    powers = _unit_powers(conj.alpha, mat.trunc)
    factor = powers[:, None] * np.conj(powers)[None, :]
    return OperatorMatrix(entries=factor * mat.entries.T, meta=mat.meta)


def check_complex_symmetric(
    mat: OperatorMatrix, conj: Conjugation, tol: float = TOL_ENTRYWISE
) -> CheckResult:
    """Frobenius residual of T - C T* C; entrywise identity, rounding-level when true."""
    residual = float(np.linalg.norm(mat.entries - conjugated_adjoint(mat, conj).entries))
    return CheckResult(residual <= tol, residual)


def check_self_adjoint(mat: OperatorMatrix, tol: float = TOL_ENTRYWISE) -> CheckResult:
    """Frobenius residual of T - T*."""
    residual = float(np.linalg.norm(mat.entries - mat.entries.conj().T))
    return CheckResult(residual <= tol, residual)


def check_normal(mat: OperatorMatrix, tol: float = TOL_PRODUCT) -> CheckResult:
    """Frobenius residual of T T* - T* T.

    Involves matrix products, so truncation couples rows and columns; the
    tolerance must absorb a geometric tail O(sup_norm^N) on top of rounding.
    """
    a = mat.entries
    residual = float(np.linalg.norm(a @ a.conj().T - a.conj().T @ a))
    return CheckResult(residual <= tol, residual)


def check_unitary(mat: OperatorMatrix, tol: float = TOL_PRODUCT) -> CheckResult:
    """Frobenius residual of T* T - I."""
    a = mat.entries
    residual = float(np.linalg.norm(a.conj().T @ a - np.eye(mat.trunc)))
    return CheckResult(residual <= tol, residual)
