import unittest

import sys

sys.path.insert(1, "..")

import json

import numpy as np

from wcolab.exceptions import ConfigError, NotHermitian, PowerIterationStalled, SchemaError
from wcolab.utils import disk_samples, dumps, from_pair, jacobi_eigh, power_norm, to_pair, tolerances

SIZES = [1, 2, 5, 12, 30]


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


class TestJacobi(unittest.TestCase):
    def test_against_lapack(self):
        for n in SIZES:
            h = random_hermitian(n, n)
            vals, vecs = jacobi_eigh(h)
            np.testing.assert_allclose(vals, np.linalg.eigvalsh(h), atol=1e-10 * np.linalg.norm(h))
            np.testing.assert_allclose(h @ vecs, vecs * vals, atol=1e-9 * np.linalg.norm(h))

    def test_trace(self):
        h = random_hermitian(20, 7)
        self.assertAlmostEqual(jacobi_eigh(h)[0].sum(), np.trace(h).real, places=9)

    def test_diagonal(self):
        vals, _ = jacobi_eigh(np.diag([3.0, -1.0, 2.0]))
        np.testing.assert_allclose(vals, [-1, 2, 3])

    def test_not_hermitian(self):
        with self.assertRaises(NotHermitian):
            jacobi_eigh(np.array([[0, 1], [0, 0]], dtype=complex))
        with self.assertRaises(NotHermitian):
            jacobi_eigh(np.ones((2, 3)))


class TestPowerNorm(unittest.TestCase):
    def test_against_svd(self):
        rng = np.random.default_rng(3)
        for shape in ((5, 5), (12, 8), (30, 30)):
            a = rng.normal(size=shape) + 1j * rng.normal(size=shape)
            est, vec = power_norm(a)
            self.assertAlmostEqual(est.value, np.linalg.norm(a, 2), delta=1e-6 * est.value)
            self.assertAlmostEqual(np.linalg.norm(vec), 1)

    def test_zero(self):
        est, _ = power_norm(np.zeros((3, 3)))
        self.assertEqual(est.value, 0)

    def test_stall_raises_with_bound(self):
        with self.assertRaises(PowerIterationStalled) as ctx:
            power_norm(np.diag([1.0, 0.999]), start=[1, 1], max_iter=3)
        self.assertEqual(ctx.exception.estimate.iterations, 3)
        self.assertGreater(ctx.exception.estimate.value, 0.99)
        self.assertLessEqual(ctx.exception.estimate.value, 1)
        self.assertEqual(ctx.exception.vector.shape, (2,))


class TestTolerances(unittest.TestCase):
    def test_override(self):
        tol = tolerances({"commutator": 1e-4})
        self.assertEqual(tol["commutator"], 1e-4)
        self.assertEqual(tol["geometry"], tolerances()["geometry"])

    def test_unknown_key(self):
        with self.assertRaises(ConfigError):
            tolerances({"nonsense": 1})

    def test_nonpositive(self):
        with self.assertRaises(ConfigError):
            tolerances({"geometry": 0})


class TestSamples(unittest.TestCase):
    def test_deterministic(self):
        a = disk_samples(25, 0.6, seed=4)
        b = disk_samples(25, 0.6, seed=4)
        np.testing.assert_array_equal(a, b)
        self.assertEqual(a.shape, (25, 1))
        self.assertTrue(np.all(np.abs(a) <= 0.6))

    def test_pairs(self):
        self.assertEqual(disk_samples(8, 0.5, dim=2).shape, (8, 2))


class TestJson(unittest.TestCase):
    def test_pairs(self):
        self.assertEqual(from_pair([1, 2], "x"), 1 + 2j)
        self.assertEqual(from_pair(3, "x"), 3)
        self.assertEqual(to_pair(1 - 1j), [1, -1])
        for bad in ("a", [1], [1, 2, 3], True, [1, "b"]):
            with self.assertRaises(SchemaError):
                from_pair(bad, "x")

    def test_schema_path(self):
        try:
            from_pair("a", "psi.w")
        except SchemaError as e:
            self.assertEqual(e.path, "psi.w")

    def test_dumps(self):
        text = dumps({"b": np.float64(1.5), "a": 2j, "c": np.arange(2)})
        self.assertEqual(json.loads(text), {"a": [0.0, 2.0], "b": 1.5, "c": [0, 1]})


if __name__ == "__main__":
    unittest.main()
