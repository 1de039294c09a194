"""Spectrum and norm of the diagonal family, plus generic norm estimation.

For u = a z and phi = c z (a real, 0 < c < 1) the operator acts diagonally on
monomials: z^n is an eigenvector with eigenvalue n a c^(n-1). Ground truth for
the norm is therefore the brute-force maximum of the measured diagonal
entries, certified complete because n c^(n-1) decreases past n = 1/(1-c). The
closed-form values k = floor(1/(1-c)) and a k c^k are recorded alongside for
audit; the two differ by exactly one factor of c at a shared argmax, and the
audit reports both rather than adjudicating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .operators import (
    DEFAULT_TRUNC,
    TOL_ENTRYWISE,
    TOL_PRODUCT,
    Conjugation,
    OperatorMatrix,
    build_operator,
    check_complex_symmetric,
    check_normal,
    check_self_adjoint,
    check_unitary,
    inner_product,
    kernel_vector,
)
from .series import PowerSeries, from_coeffs

__all__ = [
    "TIE_REL_TOL",
    "DiagonalSpectrum",
    "NormEstimate",
    "StudyPoint",
    "diagonal_spectrum",
    "eigenvector_check",
    "operator_norm_estimate",
    "truncation_convergence_study",
    "is_non_increasing",
]

# Diagonal values within this relative window of the maximum count as tied;
# the smallest tied index is reported. Exact ties (integer 1/(1-c)) land well
# inside the window, genuinely distinct values far outside it.
TIE_REL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DiagonalSpectrum:
    """Measured spectrum of the diagonal family at truncation ``trunc``.

    ``a`` is the magnitude actually applied (the sign of the input is kept in
    ``sign``); ``entries[n]`` is the measured diagonal entry on z^n.
    ``formula_k`` and ``formula_norm`` record the stated closed form
    floor(1/(1-c)) and a k c^k verbatim for comparison; they are never used
    as ground truth.
    """

    a: float
    sign: int
    c: float
    trunc: int
    entries: np.ndarray
    k_star: int
    norm: float
    formula_k: int
    formula_norm: float


class NormEstimate(NamedTuple):
    value: float
    iterations: int
    rel_change: float
    trunc: int
    converged: bool


class StudyPoint(NamedTuple):
    trunc: int
    residual: float


def diagonal_spectrum(a: float, c: float, trunc: int = DEFAULT_TRUNC) -> DiagonalSpectrum:
    """Diagonal entries, brute-force norm and argmax for u = a z, phi = c z.

    Requires 0 < c < 1 and trunc >= 2/(1-c), which certifies that the finite
    maximum is the supremum (the entry profile decreases beyond 1/(1-c)).
    """
    a = _require_real(a, "a")
    c = _require_real(c, "c")
    if not 0.0 < c < 1.0:
        raise ValueError(f"c = {c!r} must lie strictly inside (0, 1)")
    min_trunc = math.ceil(2.0 / (1.0 - c))
    if trunc < min_trunc:
        raise ValueError(
            f"trunc = {trunc} too small to certify the argmax tail; "
            f"need trunc >= 2/(1-c) = {min_trunc}"
        )
    magnitude = abs(a)
    sign = 0 if a == 0 else (1 if a > 0 else -1)
    u = from_coeffs([0.0, magnitude], trunc)
    phi = from_coeffs([0.0, c], trunc)
    mat = build_operator(u, phi, 1, trunc, phi_sup_norm=c)
    entries = np.real(np.diag(mat.entries)).copy()
    entries.setflags(write=False)
    magnitudes = np.abs(entries)
    norm = float(magnitudes.max())
    if norm == 0.0:
        k_star = 0
    else:
        tied = magnitudes >= norm * (1.0 - TIE_REL_TOL)
        k_star = int(np.flatnonzero(tied)[0])
    formula_k = math.floor(1.0 / (1.0 - c))
    formula_norm = magnitude * formula_k * c**formula_k
    return DiagonalSpectrum(
        a=magnitude,
        sign=sign,
        c=c,
        trunc=trunc,
        entries=entries,
        k_star=k_star,
        norm=norm,
        formula_k=formula_k,
        formula_norm=formula_norm,
    )


def _require_real(x, name: str) -> float:
    if isinstance(x, complex):
        raise ValueError(f"{name} must be real")
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite")
    return x


def eigenvector_check(a: float, c: float, n: int, trunc: int = DEFAULT_TRUNC) -> float:
    """||M e_n - entries[n] e_n||_2 for the diagonal family (should be rounding level)."""
    spectrum = diagonal_spectrum(a, c, trunc)
    if not 0 <= n < trunc:
        raise ValueError(f"basis index n = {n} out of range [0, {trunc})")
    u = from_coeffs([0.0, spectrum.a], trunc)
    phi = from_coeffs([0.0, c], trunc)
    mat = build_operator(u, phi, 1, trunc, phi_sup_norm=c)
    basis = np.zeros(trunc, dtype=np.complex128)
    basis[n] = 1.0
    return float(np.linalg.norm(mat.entries @ basis - spectrum.entries[n] * basis))


def operator_norm_estimate(
    mat: OperatorMatrix,
    max_iter: int = 20000,
    rel_tol: float = 1e-14,
    seed: int = 0,
) -> NormEstimate:
    """Largest singular value by power iteration on T* T.

    Runs a deterministic all-ones start plus one seeded random restart (a
    guard against a start orthogonal to the top singular vector) and keeps the
    larger converged value. Non-convergence is reported in the result, never
    silently absorbed.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    n = mat.trunc
    gram = mat.entries.conj().T @ mat.entries
    rng = np.random.default_rng(seed)
    starts = [
        np.ones(n, dtype=np.complex128),
        rng.standard_normal(n) + 1j * rng.standard_normal(n),
    ]
    best = (-1.0, 0, math.inf, False)
    total_iters = 0
    for start in starts:
        value, iters, rel, ok = _power_iteration(gram, start, max_iter, rel_tol)
        total_iters += iters
        if value > best[0]:
            best = (value, iters, rel, ok)
    value, _, rel, ok = best
    converged = ok
    return NormEstimate(
        value=value,
        iterations=total_iters,
        rel_change=rel,
        trunc=n,
        converged=converged,
    )


def _power_iteration(gram, start, max_iter, rel_tol):
    x = np.asarray(start, dtype=np.complex128)
    norm0 = np.linalg.norm(x)
    if norm0 == 0:
        raise ValueError("start vector must be nonzero")
    x = x / norm0
    prev = math.inf
    value = 0.0
    rel = math.inf
    for it in range(1, max_iter + 1):
        y = gram @ x
        rayleigh = float(np.real(np.vdot(x, y)))
        value = math.sqrt(max(rayleigh, 0.0))
        ynorm = float(np.linalg.norm(y))
        if ynorm == 0.0:
            # x sits in the kernel; the largest singular value along this
            # direction is exactly zero and the iterate cannot move.
            return 0.0, it, 0.0, True
        rel = abs(value - prev) / max(value, 1e-300)
        if rel <= rel_tol:
            return value, it, rel, True
        x = y / ynorm
        prev = value
    return value, max_iter, rel, False


_MATRIX_CHECKS = {
    "complex_symmetric": lambda mat, conj, tol, tol_product: check_complex_symmetric(
        mat, conj, tol
    ),
    "self_adjoint": lambda mat, conj, tol, tol_product: check_self_adjoint(mat, tol),
    "normal": lambda mat, conj, tol, tol_product: check_normal(mat, tol_product),
    "unitary": lambda mat, conj, tol, tol_product: check_unitary(mat, tol_product),
}


def truncation_convergence_study(
    u_builder: Callable[[int], PowerSeries],
    phi_builder: Callable[[int], PowerSeries],
    check: str,
    truncs: Sequence[int],
    *,
    conj: Conjugation | None = None,
    w: complex | None = None,
    tol: float = TOL_ENTRYWISE,
    tol_product: float = TOL_PRODUCT,
) -> list[StudyPoint]:
    """Residual of one named check across a grid of truncations.

    Matrix checks ("complex_symmetric", "self_adjoint", "normal", "unitary")
    rebuild the operator at every truncation from the supplied builders;
    "kernel_reproducing" instead measures the reproducing error at the point
    ``w`` for a fixed reference function with summable coefficients. For
    product checks the residual is expected to be non-increasing (up to slack
    and a rounding floor) and to end below the check tolerance; use
    :func:`is_non_increasing` to assert that.
    """
    truncs = list(truncs)
    if truncs != sorted(truncs) or len(set(truncs)) != len(truncs):
        raise ValueError("truncs must be strictly increasing")
    if check == "kernel_reproducing":
        if w is None:
            raise ValueError("kernel_reproducing needs the evaluation point w")
        return [StudyPoint(n, _reproducing_residual(complex(w), n)) for n in truncs]
    if check not in _MATRIX_CHECKS:
        raise ValueError(
            f"unknown check {check!r}; expected one of "
            f"{sorted(_MATRIX_CHECKS)} or 'kernel_reproducing'"
        )
    if check == "complex_symmetric" and conj is None:
        raise ValueError("complex_symmetric needs a conjugation")
    rows = []
    for n in truncs:
        mat = build_operator(u_builder(n), phi_builder(n), 1, n)
        result = _MATRIX_CHECKS[check](mat, conj, tol, tol_product)
        rows.append(StudyPoint(n, result.residual))
    return rows


def _reproducing_residual(w: complex, trunc: int) -> float:
    """|f(w) - <f_N, K_w,N>| for f with coefficients 1/(n+1)^2 (absolutely summable)."""
    if abs(w) >= 1:
        raise ValueError("w must lie in the open disk")
    reference_len = max(4096, 4 * trunc)
    coeffs = 1.0 / (np.arange(reference_len) + 1.0) ** 2
    reference = complex(np.polynomial.polynomial.polyval(w, coeffs))
    f = PowerSeries(coeffs[:trunc].astype(np.complex128))
    reproduced = inner_product(f, kernel_vector(w, 0, trunc).coeffs)
    return abs(reference - reproduced)


def is_non_increasing(
    residuals: Sequence[float], slack: float = 0.1, floor: float = 1e-9
) -> bool:
    """Non-increasing up to relative slack, ignoring jitter below a rounding floor.

    Residual sequences that reach the floating-point floor fluctuate there;
    values below ``floor`` are treated as converged rather than compared.
    """
    for prev, nxt in zip(residuals, residuals[1:]):
        if nxt > max((1.0 + slack) * prev, floor):
            return False
    return True
