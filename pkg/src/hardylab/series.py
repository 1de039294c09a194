"""Truncated complex Maclaurin series and linear fractional maps on the unit disk.

A :class:`PowerSeries` holds the first ``trunc`` Maclaurin coefficients of an
analytic function on the disk and is the concrete stand-in for elements of the
Hardy space H^2 (square-summable coefficient sequences, ell^2 inner product).
All arithmetic is truncated to a fixed length: within one computation every
series shares a single truncation, which keeps matrix algebra well defined.

Rational functions are expanded through the exact geometric-series recurrence
of their denominator, never by numerical sampling; sampling is only used as an
independent estimate of boundary sup-norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NotExpandableError",
    "SelfMapError",
    "PowerSeries",
    "MobiusMap",
    "DiskCircle",
    "zeros",
    "unit",
    "monomial",
    "from_coeffs",
    "symmetric_form_u",
    "symmetric_form_phi",
    "boundary_sup_norm",
    "DEFAULT_BOUNDARY_SAMPLES",
]

DEFAULT_BOUNDARY_SAMPLES = 4096


class NotExpandableError(ValueError):
    """The requested Maclaurin expansion is not valid on the closed unit disk."""


class SelfMapError(ValueError):
    """A symbol violates the strict self-map requirement (sup-norm >= 1)."""


def _as_coeff_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128).reshape(-1)
    if arr.size == 0:
        raise ValueError("a series needs at least one coefficient")
    if not np.all(np.isfinite(arr)):
        raise ValueError("series coefficients must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Immutable truncated Maclaurin coefficient vector; ``coeffs[n]`` is the z^n term."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeff_array(self.coeffs))

    @property
    def trunc(self) -> int:
        return int(self.coeffs.size)

    def _check_same_trunc(self, other: "PowerSeries"):
        if self.trunc != other.trunc:
            raise ValueError(
                f"truncation mismatch: {self.trunc} != {other.trunc}"
            )

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        self._check_same_trunc(other)
        return PowerSeries(self.coeffs + other.coeffs)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        self._check_same_trunc(other)
        return PowerSeries(self.coeffs - other.coeffs)

    def __mul__(self, other):
        """Cauchy product truncated to the common length (scalars also accepted)."""
        if isinstance(other, PowerSeries):
            self._check_same_trunc(other)
            return PowerSeries(np.convolve(self.coeffs, other.coeffs)[: self.trunc])
        return PowerSeries(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PowerSeries":
        """Truncated k-th power by binary exponentiation; ``f ** 0`` is the unit series."""
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = unit(self.trunc)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self) -> "PowerSeries":
        """Coefficient-shift derivative: out[n] = (n+1) * coeffs[n+1], last entry 0."""
        out = np.zeros(self.trunc, dtype=np.complex128)
        if self.trunc > 1:
            n = np.arange(1, self.trunc)
            out[:-1] = n * self.coeffs[1:]
        return PowerSeries(out)

    def truncate(self, trunc: int) -> "PowerSeries":
        """First ``trunc`` coefficients (zero-padded if the series is shorter)."""
        if trunc < 1:
            raise ValueError("trunc must be >= 1")
        if trunc <= self.trunc:
            return PowerSeries(self.coeffs[:trunc])
        out = np.zeros(trunc, dtype=np.complex128)
        out[: self.trunc] = self.coeffs
        return PowerSeries(out)

    def evaluate(self, z):
        """Evaluate the truncated polynomial at scalar or array arguments."""
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def h2_norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def h2_norm(self) -> float:
        return math.sqrt(self.h2_norm_sq())

    def is_zero(self) -> bool:
        return bool(np.all(self.coeffs == 0))

    def sup_norm_estimate(self, samples: int = DEFAULT_BOUNDARY_SAMPLES) -> float:
        """Boundary sup-norm of the truncated polynomial, by dense sampling.

        The estimate is resolution limited: the circle is scanned at ``samples``
        points and the winning neighborhood is rescanned on a fine local grid.
        For series obtained by truncating a non-polynomial symbol the tail is
        not accounted for; use exact geometry (``MobiusMap.sup_norm``) where
        available.
        """
        return boundary_sup_norm(self.coeffs, samples=samples)

    def __repr__(self):
        head = np.array2string(self.coeffs[:4], precision=6, separator=", ")
        tail = ", ..." if self.trunc > 4 else ""
        return f"PowerSeries(trunc={self.trunc}, coeffs={head[:-1]}{tail}])"


def zeros(trunc: int) -> PowerSeries:
    """The zero series at the given truncation."""
    if trunc < 1:
        raise ValueError("trunc must be >= 1")
    return PowerSeries(np.zeros(trunc, dtype=np.complex128))


def unit(trunc: int) -> PowerSeries:
    """The constant series 1."""
    out = np.zeros(trunc, dtype=np.complex128)
    out[0] = 1.0
    return PowerSeries(out)


def monomial(degree: int, trunc: int) -> PowerSeries:
    """The series of z^degree (zero if degree >= trunc)."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    out = np.zeros(trunc, dtype=np.complex128)
    if degree < trunc:
        out[degree] = 1.0
    return PowerSeries(out)


def from_coeffs(values, trunc: int | None = None) -> PowerSeries:
    """Series from an explicit coefficient list, optionally padded/cut to ``trunc``."""
    f = PowerSeries(np.asarray(values, dtype=np.complex128))
    return f if trunc is None else f.truncate(trunc)


def boundary_sup_norm(coeffs, samples: int = DEFAULT_BOUNDARY_SAMPLES) -> float:
    """max |p(z)| over |z| = 1 for the polynomial with the given coefficients.

    Coarse FFT scan followed by a fine rescan of the two sample intervals
    bracketing the winner, which pushes the resolution error of a smooth
    maximum to rounding level.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
    if samples < max(16, 2 * coeffs.size):
        samples = max(16, 2 * coeffs.size)
    padded = np.zeros(samples, dtype=np.complex128)
    padded[: coeffs.size] = coeffs
    vals = np.abs(np.fft.fft(padded))
    k = int(np.argmax(vals))
    step = 2.0 * math.pi / samples
    theta = np.linspace(k * step - step, k * step + step, 257)
    local = np.abs(np.polynomial.polynomial.polyval(np.exp(1j * theta), coeffs))
    return float(max(vals.max(), local.max()))


@dataclass(frozen=True)
class DiskCircle:
    """A circle in the plane, used as the image of the unit circle under a map."""

    center: complex
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    @property
    def sup_modulus(self) -> float:
        """max |w| over the circle, which bounds the map on the closed disk."""
        return abs(self.center) + self.radius


@dataclass(frozen=True)
class MobiusMap:
    """Linear fractional map z -> (a z + b) / (c z + d).

    ad - bc = 0 collapses the map to a constant; that is accepted (constant
    symbols are legitimate), but an identically zero denominator is not.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.c == 0 and self.d == 0:
            raise ValueError("invalid map: denominator is identically zero")

    @property
    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __call__(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def derivative(self, z):
        det = self.a * self.d - self.b * self.c
        return det / (self.c * z + self.d) ** 2

    def to_series(self, trunc: int) -> PowerSeries:
        """Maclaurin expansion valid on the closed disk.

        Uses 1/(cz+d) = (1/d) sum_n (-c/d)^n z^n, which converges on the
        closed disk exactly when the pole -d/c lies strictly outside it.
        """
        if trunc < 1:
            raise ValueError("trunc must be >= 1")
        if abs(self.d) <= abs(self.c):
            raise NotExpandableError(
                "not expandable on disk: pole of (az+b)/(cz+d) is not "
                f"strictly outside the closed unit disk (|d|={abs(self.d):.6g} "
                f"<= |c|={abs(self.c):.6g})"
            )
        t = -self.c / self.d
        geo = (t ** np.arange(trunc)) / self.d
        out = self.b * geo
        out[1:] = out[1:] + self.a * geo[:-1]
        return PowerSeries(out)

    def image_circle(self) -> DiskCircle:
        """Image of the unit circle, exact from the coefficients.

        center = (b conj(d) - a conj(c)) / (|d|^2 - |c|^2),
        radius = |ad - bc| / | |d|^2 - |c|^2 |.
        Requires |c| != |d|; otherwise the image is a line.
        """
        denom = abs(self.d) ** 2 - abs(self.c) ** 2
        if denom == 0:
            raise NotExpandableError(
                "image of the unit circle is a line (|c| = |d|); "
                "the map is unbounded near the circle"
            )
        center = (self.b * np.conj(self.d) - self.a * np.conj(self.c)) / denom
        radius = abs(self.a * self.d - self.b * self.c) / abs(denom)
        return DiskCircle(complex(center), float(radius))

    def sup_norm(self) -> float:
        """Exact sup of |map| over the closed unit disk (maximum principle)."""
        return self.image_circle().sup_modulus

    def require_strict_self_map(self) -> float:
        """Return the sup-norm, raising ``SelfMapError`` unless it is < 1."""
        sup = self.sup_norm()
        if sup >= 1.0:
            raise SelfMapError(
                f"not a strict self-map of the disk: sup-norm {sup:.6g} >= 1"
            )
        return sup


def symmetric_form_u(a, b, alpha, trunc: int) -> PowerSeries:
    """Expansion of a z / (1 - alpha b z)^2, i.e. sum_n a n (alpha b)^(n-1) z^n.

    Requires |b| < 1 so the expansion converges on the disk.
    """
    a, b, alpha = complex(a), complex(b), complex(alpha)
    if abs(b) >= 1:
        raise NotExpandableError(f"|b| = {abs(b):.6g} >= 1: expansion diverges on disk")
    if trunc < 1:
        raise ValueError("trunc must be >= 1")
    out = np.zeros(trunc, dtype=np.complex128)
    if trunc > 1:
        n = np.arange(1, trunc)
        out[1:] = a * n * (alpha * b) ** (n - 1)
    return PowerSeries(out)


def symmetric_form_phi(b, c, alpha, trunc: int) -> PowerSeries:
    """Expansion of b + c z / (1 - alpha b z): coefficients [b, c, c(alpha b), ...].

    Requires |b| < 1.
    """
    b, c, alpha = complex(b), complex(c), complex(alpha)
    if abs(b) >= 1:
        raise NotExpandableError(f"|b| = {abs(b):.6g} >= 1: expansion diverges on disk")
    if trunc < 1:
        raise ValueError("trunc must be >= 1")
    out = np.zeros(trunc, dtype=np.complex128)
    out[0] = b
    if trunc > 1:
        n = np.arange(1, trunc)
        out[1:] = c * (alpha * b) ** (n - 1)
    return PowerSeries(out)


def symmetric_form_mobius(b, c, alpha) -> MobiusMap:
    """The map b + c z/(1 - alpha b z) written as a single linear fraction.

    Useful for exact disk geometry (sup-norm) of the reconstructed symbol.
    """
    b, c, alpha = complex(b), complex(c), complex(alpha)
    return MobiusMap(c - alpha * b * b, b, -alpha * b, 1.0)
