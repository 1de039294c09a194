"""Series arithmetic, rational expansions, and disk geometry."""

import math

import numpy as np
import pytest

from hardylab.series import (
    MobiusMap,
    NotExpandableError,
    PowerSeries,
    from_coeffs,
    monomial,
    symmetric_form_mobius,
    symmetric_form_phi,
    symmetric_form_u,
    unit,
    zeros,
)

FEATURED = MobiusMap(1j, 1 + 1j, 1 - 1j, 8j)


def sampled_sup(func, coarse=4096, fine=4096):
    """Boundary max by coarse scan plus a fine rescan around the winner.

    Independent of the package's sampler: evaluates the callable directly.
    """
    theta = np.linspace(0.0, 2 * np.pi, coarse, endpoint=False)
    vals = np.abs(func(np.exp(1j * theta)))
    k = int(np.argmax(vals))
    h = 2 * np.pi / coarse
    local = np.linspace(theta[k] - h, theta[k] + h, fine)
    vals2 = np.abs(func(np.exp(1j * local)))
    return max(float(vals.max()), float(vals2.max()))


class TestArithmetic:
    def test_add(self):
        out = from_coeffs([1, 2]) + from_coeffs([0, -2])
        np.testing.assert_array_equal(out.coeffs, [1, 0])

    def test_add_identity(self):
        f = from_coeffs([3, 1j, -2])
        np.testing.assert_array_equal((f + zeros(3)).coeffs, f.coeffs)

    def test_add_inverse(self):
        out = from_coeffs([1j]) + from_coeffs([-1j])
        np.testing.assert_array_equal(out.coeffs, [0])

    def test_add_trunc_mismatch(self):
        with pytest.raises(ValueError, match="truncation mismatch"):
            from_coeffs([1, 2]) + from_coeffs([1, 2, 3])

    def test_mul_truncates(self):
        out = from_coeffs([1, 1]) * from_coeffs([1, 1])
        np.testing.assert_array_equal(out.coeffs, [1, 2])  # z^2 term dropped

    def test_mul_identity(self):
        f = from_coeffs([2, 1j, 0.5, -1])
        np.testing.assert_array_equal((f * unit(4)).coeffs, f.coeffs)

    def test_mul_monomials(self):
        out = monomial(1, 4) * monomial(1, 4)
        np.testing.assert_array_equal(out.coeffs, [0, 0, 1, 0])

    def test_mul_trunc_mismatch(self):
        with pytest.raises(ValueError, match="truncation mismatch"):
            from_coeffs([1]) * from_coeffs([1, 2])

    def test_derivative(self):
        np.testing.assert_array_equal(
            from_coeffs([5, 3, 2]).derivative().coeffs, [3, 4, 0]
        )

    def test_derivative_constant(self):
        np.testing.assert_array_equal(from_coeffs([7, 0, 0]).derivative().coeffs, [0, 0, 0])

    def test_derivative_monomial(self):
        np.testing.assert_array_equal(
            from_coeffs([0, 0, 1, 0]).derivative().coeffs, [0, 2, 0, 0]
        )

    def test_pow_geometric(self):
        out = from_coeffs([0, 0.5, 0]) ** 2
        np.testing.assert_allclose(out.coeffs, [0, 0, 0.25])

    def test_pow_zero_exponent(self):
        f = from_coeffs([2, 3, 4])
        np.testing.assert_array_equal((f ** 0).coeffs, unit(3).coeffs)

    def test_pow_cube(self):
        np.testing.assert_array_equal((monomial(1, 4) ** 3).coeffs, [0, 0, 0, 1])

    def test_pow_rejects_negative(self):
        with pytest.raises(ValueError):
            from_coeffs([1, 1]) ** -1

    def test_mul_associative_commutative(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(2, 64))
            f, g, h = (
                PowerSeries(rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n))
                for _ in range(3)
            )
            left = (f * g) * h
            right = f * (g * h)
            scale = max(1.0, float(np.linalg.norm(left.coeffs)))
            assert np.linalg.norm(left.coeffs - right.coeffs) <= 1e-13 * scale
            ab = f * g
            ba = g * f
            np.testing.assert_allclose(ab.coeffs, ba.coeffs, rtol=0, atol=1e-13)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            from_coeffs([1, float("inf")])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            PowerSeries(np.array([], dtype=complex))

    def test_coeffs_readonly(self):
        f = from_coeffs([1, 2])
        with pytest.raises(ValueError):
            f.coeffs[0] = 5


class TestMobiusExpansion:
    def test_geometric_example(self):
        # z / (-z + 2) = (z/2) * 1/(1 - z/2)
        out = MobiusMap(1, 0, -1, 2).to_series(4)
        np.testing.assert_allclose(out.coeffs, [0, 0.5, 0.25, 0.125], atol=1e-15)

    def test_constant(self):
        out = MobiusMap(0, 2 + 1j, 0, 1).to_series(3)
        np.testing.assert_allclose(out.coeffs, [2 + 1j, 0, 0], atol=0)

    def test_fft_recovery_oracle(self):
        # Independent route: Maclaurin coefficients recovered from 1024
        # boundary samples; aliasing is negligible at this decay rate.
        samples = 1024
        roots = np.exp(2j * np.pi * np.arange(samples) / samples)
        recovered = np.fft.fft(FEATURED(roots)) / samples
        got = FEATURED.to_series(64).coeffs
        assert np.max(np.abs(got - recovered[:64])) <= 1e-10

    def test_pole_on_or_inside_disk_rejected(self):
        with pytest.raises(NotExpandableError, match="not expandable"):
            MobiusMap(1, 0, 1, 1).to_series(8)
        with pytest.raises(NotExpandableError):
            MobiusMap(1, 0, 2, 1).to_series(8)

    def test_collapsed_map_expands_as_constant(self):
        # ad - bc = 0 collapses to the constant a/c = b/d
        out = MobiusMap(1, 2, 2, 4).to_series(4)
        np.testing.assert_allclose(out.coeffs, [0.5, 0, 0, 0], atol=1e-15)

    def test_zero_denominator_rejected(self):
        with pytest.raises(ValueError, match="denominator"):
            MobiusMap(1, 2, 0, 0)

    def test_coefficient_ratio_converges(self):
        # For (az+b)/(cz+d) the coefficients are geometric from index 1 on,
        # with ratio |c/d|.
        rng = np.random.default_rng(3)
        for _ in range(10):
            while True:
                a, b = (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1) for _ in range(2))
                c = 0.4 * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
                d = 1.0 + rng.uniform(0, 1)
                if abs(a * d - b * c) > 0.1 and abs(c) > 0.05:
                    break
            coeffs = MobiusMap(a, b, c, d).to_series(40).coeffs
            ratios = np.abs(coeffs[2:]) / np.abs(coeffs[1:-1])
            np.testing.assert_allclose(ratios, abs(c / d), rtol=1e-8)


class TestSymmetricForms:
    def test_u_b_zero(self):
        np.testing.assert_array_equal(
            symmetric_form_u(1, 0, 1, 4).coeffs, [0, 1, 0, 0]
        )

    def test_u_closed_form(self):
        out = symmetric_form_u(2, 0.5, 1, 4)
        np.testing.assert_allclose(out.coeffs, [0, 2, 2, 1.5], atol=1e-15)

    def test_u_series_algebra_oracle(self):
        # a z * (1/(1 + 0.3 z))^2 assembled from the geometric series directly.
        n = 64
        geo = PowerSeries((-0.3) ** np.arange(n, dtype=float) + 0j)
        assembled = monomial(1, n) * geo * geo
        got = symmetric_form_u(1, 0.3, -1, n)
        assert np.max(np.abs(got.coeffs - assembled.coeffs)) <= 1e-13

    def test_u_rejects_large_b(self):
        with pytest.raises(NotExpandableError):
            symmetric_form_u(1, 1.0, 1, 8)

    def test_phi_b_zero(self):
        np.testing.assert_array_equal(
            symmetric_form_phi(0, 0.5, 1, 4).coeffs, [0, 0.5, 0, 0]
        )

    def test_phi_geometric_tail(self):
        out = symmetric_form_phi(0.3, 0.1, 1, 4)
        np.testing.assert_allclose(out.coeffs, [0.3, 0.1, 0.03, 0.009], atol=1e-15)

    def test_phi_pointwise_oracle(self):
        rng = np.random.default_rng(11)
        b, c, alpha = 0.3, 0.1, 1.0
        f = symmetric_form_phi(b, c, alpha, 256)
        for _ in range(64):
            z = 0.9 * math.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            direct = b + c * z / (1 - alpha * b * z)
            assert abs(f.evaluate(z) - direct) <= 1e-12

    def test_forms_pointwise_at_full_truncation(self):
        rng = np.random.default_rng(13)
        for _ in range(8):
            a = rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform())
            b = rng.uniform(0.1, 0.7) * np.exp(2j * np.pi * rng.uniform())
            c = rng.uniform(0.1, 0.7) * np.exp(2j * np.pi * rng.uniform())
            alpha = np.exp(2j * np.pi * rng.uniform())
            fu = symmetric_form_u(a, b, alpha, 256)
            fphi = symmetric_form_phi(b, c, alpha, 256)
            for _ in range(8):
                z = 0.9 * math.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
                assert abs(fu.evaluate(z) - a * z / (1 - alpha * b * z) ** 2) <= 1e-10
                assert abs(fphi.evaluate(z) - (b + c * z / (1 - alpha * b * z))) <= 1e-10

    def test_phi_rejects_large_b(self):
        with pytest.raises(NotExpandableError):
            symmetric_form_phi(1.2, 0.1, 1, 8)

    def test_single_fraction_matches(self):
        b, c, alpha = 0.3, 0.1, np.exp(0.4j)
        as_map = symmetric_form_mobius(b, c, alpha).to_series(64)
        as_form = symmetric_form_phi(b, c, alpha, 64)
        assert np.max(np.abs(as_map.coeffs - as_form.coeffs)) <= 1e-14


class TestImageCircle:
    def test_identity_map(self):
        circ = MobiusMap(1, 0, 0, 1).image_circle()
        assert circ.center == 0 and circ.radius == 1

    def test_half_scale(self):
        circ = MobiusMap(0.5, 0, 0, 1).image_circle()
        assert circ.center == 0 and circ.radius == 0.5

    def test_featured_map_against_sampling(self):
        sup = FEATURED.sup_norm()
        assert sup < 1
        assert abs(sup - sampled_sup(FEATURED)) <= 1e-9

    def test_random_maps_against_sampling(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            while True:
                a, b = (0.5 * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)) for _ in range(2))
                c = 0.3 * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
                d = 1.0
                if abs(a * d - b * c) > 0.05:
                    break
            mob = MobiusMap(a, b, c, d)
            assert abs(mob.sup_norm() - sampled_sup(mob)) <= 1e-9

    def test_line_image_rejected(self):
        with pytest.raises(NotExpandableError, match="line"):
            MobiusMap(1, 0, 1, 1j).image_circle()

    def test_series_sampler_matches_exact_geometry(self):
        mob = MobiusMap(1, 0.2, 0.1, 2)
        series = mob.to_series(256)
        # the truncation tail is ~ (|c|/|d|)^256, far below the tolerance
        assert abs(series.sup_norm_estimate() - mob.sup_norm()) <= 1e-9
