import unittest

import sys

sys.path.insert(1, "..")

import numpy as np
from scipy.integrate import quad
from scipy.special import beta

from wcolab.exceptions import (
    ConfigError,
    ConvergenceRadiusTooSmall,
    IndexBeyondStoredWeights,
    PointNotInDisk,
    TailTooLarge,
)
from wcolab.series import (
    PowerSeries,
    RationalPower,
    SpaceSpec,
    beta_norm,
    compose_poly,
    differentiate,
    evaluate_series,
    inner_product,
    kernel_norm,
    kernel_series,
    kernel_value,
    kernel_vector,
    multiply,
    rational_power_series,
    series_tail_bound,
)

# alpha: orders checked against (alpha + 1) * int_0^1 2 r^(2n+1) (1 - r^2)^alpha dr
BERGMAN_ORDERS = {
    0.0: range(33),
    0.5: range(33),
    1.0: range(6),
    1.5: range(33),
    2.5: range(4),
}


class TestWeights(unittest.TestCase):
    def test_hardy(self):
        np.testing.assert_array_equal(SpaceSpec.hardy().weights(10), np.ones(11))

    def test_bergman_against_quadrature(self):
        for alpha, orders in BERGMAN_ORDERS.items():
            space = SpaceSpec.bergman(alpha)
            for n in orders:
                # u = r^2 turns the integral into int_0^1 u^n (1 - u)^alpha du
                integral, _ = quad(lambda u: u**n, 0, 1, weight="alg", wvar=(0.0, alpha),
                                   epsabs=1e-15, epsrel=1e-13)
                expected = (alpha + 1) * integral
                self.assertLess(abs(beta_norm(space, n) ** 2 - expected), 1e-10 * expected,
                                msg=f"alpha={alpha}, n={n}")
                self.assertLess(abs(expected - (alpha + 1) * beta(n + 1, alpha + 1)), 1e-10 * expected)

    def test_bergman_closed_form(self):
        # A^2_0: |z^n|^2 = 1/(n+1)
        b = SpaceSpec.bergman(0).weights(20)
        np.testing.assert_allclose(b**2, 1 / np.arange(1, 22), rtol=1e-13)

    def test_weighted(self):
        space = SpaceSpec.weighted([1, 0.5, 0.25])
        np.testing.assert_allclose(space.weights(2), [1, 0.5, 0.25])
        self.assertEqual(space.max_order, 2)
        with self.assertRaises(IndexBeyondStoredWeights):
            space.weights(3)

    def test_bad_spaces(self):
        with self.assertRaises(ConfigError):
            SpaceSpec.bergman(-1)
        with self.assertRaises(ConfigError):
            SpaceSpec.weighted([2, 1])
        with self.assertRaises(ConfigError):
            SpaceSpec.weighted([1, 0])

    def test_gamma(self):
        self.assertEqual(SpaceSpec.hardy().gamma, 1)
        self.assertEqual(SpaceSpec.bergman(1).gamma, 3)
        self.assertIsNone(SpaceSpec.weighted([1, 1]).gamma)


class TestArithmetic(unittest.TestCase):
    def test_multiply_truncates(self):
        f = PowerSeries([1, 1, 0, 0])
        g = PowerSeries([1, -1, 0])
        np.testing.assert_allclose(multiply(f, g).coeffs, [1, 0, -1])

    def test_compose_poly(self):
        f = PowerSeries([1, 0, 1])  # 1 + z^2
        phi = PowerSeries([0, 0.5]).padded(5)
        np.testing.assert_allclose(compose_poly(f, phi, 5).coeffs, [1, 0, 0.25, 0, 0, 0])

    def test_differentiate(self):
        np.testing.assert_allclose(differentiate(PowerSeries([3, 2, 1])).coeffs, [2, 2])

    def test_read_only(self):
        f = PowerSeries([1, 2])
        with self.assertRaises(ValueError):
            f.coeffs[0] = 5


class TestRationalPower(unittest.TestCase):
    def test_inverse_square(self):
        # (1 + z/2)^(-2) = sum (k + 1) (-1/2)^k z^k
        r = RationalPower(1, 0.5, 1, 0, -2)
        k = np.arange(12)
        np.testing.assert_allclose(rational_power_series(r, 11).coeffs, (k + 1) * (-0.5) ** k, rtol=1e-13)

    def test_series_matches_closed_form(self):
        r = RationalPower(2, 1j, 1, -0.3, 1.5)
        value, _ = evaluate_series(rational_power_series(r, 80), 0.3 + 0.2j)
        self.assertAlmostEqual(abs(value - r(0.3 + 0.2j)), 0, places=12)

    def test_small_radius(self):
        with self.assertRaises(ConvergenceRadiusTooSmall):
            rational_power_series(RationalPower(1, 2, 1, 0, 0.5), 10)

    def test_zero_leading(self):
        with self.assertRaises(ValueError):
            RationalPower(0, 1, 1, 0, 1)


class TestEvaluate(unittest.TestCase):
    def test_polynomial_is_exact(self):
        value, tail = evaluate_series(PowerSeries([1, 2, 3]), 0.5)
        self.assertAlmostEqual(value, 2.75)
        self.assertEqual(tail, 0)

    def test_tail_too_large(self):
        with self.assertRaises(TailTooLarge):
            evaluate_series(PowerSeries(np.ones(41)), 0.99)

    def test_geometric(self):
        value, tail = evaluate_series(PowerSeries(0.5 ** np.arange(120)), 0.5)
        self.assertAlmostEqual(value, 1 / (1 - 0.25), places=12)
        self.assertLess(tail, 1e-12)

    def test_tail_bound(self):
        f = PowerSeries(0.5 ** np.arange(41))
        self.assertGreaterEqual(float(series_tail_bound(f, 0.5)), 0.25**41 / 0.75)
        self.assertEqual(float(series_tail_bound(PowerSeries([1, 2, 3]), 0.9)), 0)

    def test_rounding_noise_tail(self):
        coeffs = 0.5 ** np.arange(81)
        coeffs[64:] = 1e-15 * 1.3 ** np.arange(17)
        f = PowerSeries(coeffs)
        self.assertEqual(float(series_tail_bound(f, 0.5)), 0)
        value, tail = evaluate_series(f, 0.5)
        self.assertAlmostEqual(value, (1 - 0.25**64) / 0.75, places=12)
        self.assertEqual(tail, 0)

        coeffs[64:] = 1e-17 * 1.2 ** np.arange(17)
        self.assertEqual(float(series_tail_bound(PowerSeries(coeffs), 0.99)), 0)


class TestKernels(unittest.TestCase):
    def test_reproducing_property(self):
        f = PowerSeries([1, 2, 3])
        w = 0.3 + 0.2j
        for space in (SpaceSpec.hardy(), SpaceSpec.bergman(0), SpaceSpec.bergman(1)):
            got = inner_product(f, kernel_series(space, w, 10), space)
            self.assertAlmostEqual(abs(got - (1 + 2 * w + 3 * w * w)), 0, places=12, msg=str(space))

    def test_kernel_norm(self):
        w = 0.5
        for space in (SpaceSpec.hardy(), SpaceSpec.bergman(0), SpaceSpec.bergman(1)):
            k = kernel_series(space, w, 200)
            self.assertAlmostEqual(inner_product(k, k, space).real, kernel_norm(space, w) ** 2, places=9)

    def test_kernel_value(self):
        self.assertAlmostEqual(kernel_value(SpaceSpec.hardy(), 0.5, 0.5), 1 / 0.75)
        self.assertAlmostEqual(kernel_value(SpaceSpec.bergman(0), 0.5j, -0.5j), 1 / 1.25**2)

    def test_kernel_vector(self):
        np.testing.assert_allclose(kernel_vector(SpaceSpec.hardy(), 0.5j, 4), [1, -0.5j, -0.25, 0.125j])
        space = SpaceSpec.bergman(0)
        self.assertAlmostEqual(np.linalg.norm(kernel_vector(space, 0.3, 200)), kernel_norm(space, 0.3), places=12)

    def test_weighted_kernel(self):
        space = SpaceSpec.weighted([1, 1, 1, 1])
        self.assertAlmostEqual(kernel_norm(space, 0.5) ** 2, 1 + 0.25 + 0.0625 + 0.015625)

    def test_outside_disk(self):
        with self.assertRaises(PointNotInDisk):
            kernel_series(SpaceSpec.hardy(), 1.0, 5)


if __name__ == "__main__":
    unittest.main()
