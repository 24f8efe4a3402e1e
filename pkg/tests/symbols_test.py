import unittest

import sys

sys.path.insert(1, "..")

import numpy as np

from wcolab.exceptions import PointNotInDisk
from wcolab.series import RationalPower, SpaceSpec, kernel_series
from wcolab.symbols import Polynomial, Product, RationalPowerSymbol, ScaledKernel, Sum

POINTS = [0, 0.5, -0.3 + 0.4j, 0.9j]


class TestPolynomial(unittest.TestCase):
    def test_values(self):
        p = Polynomial([1, 2, 3])
        for z in POINTS:
            self.assertAlmostEqual(p(z), 1 + 2 * z + 3 * z * z)

    def test_series_padded(self):
        np.testing.assert_allclose(Polynomial([1, 2]).series(4).coeffs, [1, 2, 0, 0, 0])
        self.assertEqual(Polynomial([1, 2]).radius, np.inf)


class TestKernelSymbol(unittest.TestCase):
    def test_matches_kernel_series(self):
        for space in (SpaceSpec.hardy(), SpaceSpec.bergman(1)):
            k = ScaledKernel(2j, 0.4, space)
            np.testing.assert_allclose(k.series(30).coeffs, 2j * kernel_series(space, 0.4, 30).coeffs)

    def test_values(self):
        k = ScaledKernel(1, -0.5)
        self.assertAlmostEqual(k(1), 1 / 1.5)
        self.assertAlmostEqual(k.radius, 2)

    def test_outside_disk(self):
        with self.assertRaises(PointNotInDisk):
            ScaledKernel(1, 1.2)


class TestCombinations(unittest.TestCase):
    def test_product(self):
        p = Polynomial([1, 1]) * Polynomial([1, -1])
        self.assertIsInstance(p, Product)
        np.testing.assert_allclose(p.series(4).coeffs, [1, 0, -1, 0, 0])
        self.assertAlmostEqual(p(0.5), 0.75)

    def test_sum_with_scalar(self):
        s = Polynomial([1, 1]) + 2
        self.assertIsInstance(s, Sum)
        np.testing.assert_allclose(s.series(2).coeffs, [3, 1, 0])

    def test_kernel_product(self):
        # K_{1/2} * (1 - z/2) = 1 in H^2
        p = ScaledKernel(1, 0.5) * Polynomial([1, -0.5])
        np.testing.assert_allclose(p.series(20).coeffs, np.eye(21)[0], atol=1e-14)
        self.assertAlmostEqual(p.radius, 2)

    def test_rational_power(self):
        r = RationalPowerSymbol(RationalPower(1, 0.5, 1, 0, -2))
        for z in POINTS:
            self.assertAlmostEqual(r(z), (1 + z / 2) ** -2)


class TestSerialization(unittest.TestCase):
    def test_types(self):
        symbols = {
            "poly": Polynomial([1]),
            "kernel": ScaledKernel(1, 0.2),
            "rational-power": RationalPowerSymbol(RationalPower(1, 0.5, 1, 0, 1)),
            "product": Polynomial([1]) * Polynomial([2]),
            "sum": Polynomial([1]) + Polynomial([2]),
        }
        for name, symbol in symbols.items():
            self.assertEqual(symbol.to_dict()["type"], name)


if __name__ == "__main__":
    unittest.main()
