import unittest

import sys

sys.path.insert(1, "..")

import cmath

import numpy as np
import sympy

from wcolab.exceptions import BadFixedPoint, BadTranslation, NotAutomorphism, NotParabolic, NotSelfMap, PoleHit
from wcolab.moebius import (
    LftMap,
    MapKind,
    adjoint_symbols,
    automorphism,
    automorphism_form,
    classify,
    compose,
    derivative_at,
    evaluate,
    fixed_points,
    hyperbolic_from,
    image_disk,
    invert,
    is_automorphism,
    is_self_map,
    iterate,
    orbit,
    parabolic_from,
    translation_number,
)
from wcolab.series import evaluate_series

HALF_DISK_SHIFT = LftMap(1, 0.5, 0.5, 1)  # (z + 1/2)/(1 + z/2), hyperbolic, fixes -1 and 1
PARABOLIC_T1 = LftMap(1, 1, -1, 3)  # (z + 1)/(3 - z), parabolic non-automorphism at 1

# map: (kind, Denjoy-Wolff point, phi' there)
KINDS = [
    (LftMap.identity(), MapKind.IDENTITY, None),
    (LftMap(1j, 0, 0, 1), MapKind.ELLIPTIC_AUTOMORPHISM, None),
    (HALF_DISK_SHIFT, MapKind.HYPERBOLIC_AUTOMORPHISM, (1, 1 / 3)),
    (parabolic_from(1j, 2j), MapKind.PARABOLIC_AUTOMORPHISM, (1j, 1)),
    (LftMap(0.5, 0, 0, 1), MapKind.NON_AUTO_INTERIOR_CLOSURE, (0, 0.5)),
    (PARABOLIC_T1, MapKind.NON_AUTO_BOUNDARY_CONTACT, (1, 1)),
    (LftMap(1, 1, 0, 2), MapKind.NON_AUTO_BOUNDARY_CONTACT, (1, 0.5)),  # (z + 1)/2
]


class TestGroup(unittest.TestCase):
    def test_normalized(self):
        m = LftMap(2, 1, 0, 4)
        self.assertAlmostEqual(m.d, 1)
        self.assertTrue(m.is_close(LftMap(0.5, 0.25, 0, 1)))

    def test_degenerate(self):
        with self.assertRaises(ValueError):
            LftMap(1, 2, 2, 4)

    def test_compose_invert(self):
        m = LftMap(1 + 1j, 0.3, -0.2j, 2)
        self.assertTrue(compose(m, invert(m)).is_close(LftMap.identity()))
        z = 0.1 - 0.4j
        self.assertAlmostEqual(evaluate(compose(m, HALF_DISK_SHIFT), z), m(HALF_DISK_SHIFT(z)))

    def test_iterate(self):
        rotation = LftMap(1j, 0, 0, 1)
        self.assertTrue(iterate(rotation, 4).is_close(LftMap.identity()))
        self.assertAlmostEqual(iterate(HALF_DISK_SHIFT, 2)(0), HALF_DISK_SHIFT(0.5))

    def test_pole(self):
        with self.assertRaises(PoleHit):
            evaluate(LftMap(1, 0, 1, -0.5), 0.5)

    def test_derivative(self):
        self.assertAlmostEqual(derivative_at(HALF_DISK_SHIFT, 1), 1 / 3)
        self.assertAlmostEqual(derivative_at(HALF_DISK_SHIFT, -1), 3)

    def test_series(self):
        f = HALF_DISK_SHIFT.series(60)
        z = 0.3 + 0.3j
        self.assertAlmostEqual(evaluate_series(f, z)[0], HALF_DISK_SHIFT(z), places=12)

    def test_formula(self):
        z = sympy.Symbol("z")
        rendered = sympy.sympify(HALF_DISK_SHIFT.formula, locals={"z": z})
        self.assertEqual(sympy.simplify(rendered - (2 * z + 1) / (z + 2)), 0)
        self.assertEqual(LftMap.identity().formula, "z")


class TestGeometry(unittest.TestCase):
    def test_image_disk(self):
        center, radius = image_disk(LftMap(1, 1, 0, 2))
        self.assertAlmostEqual(center, 0.5)
        self.assertAlmostEqual(radius, 0.5)
        self.assertIsNone(image_disk(LftMap(1, 0, 1, 0.5)))

    def test_self_map(self):
        self.assertTrue(is_self_map(HALF_DISK_SHIFT))
        self.assertTrue(is_self_map(PARABOLIC_T1))
        self.assertFalse(is_self_map(LftMap(2, 0, 0, 1)))
        self.assertFalse(is_self_map(LftMap(1, 0.5, 0, 1)))

    def test_automorphism(self):
        self.assertTrue(is_automorphism(HALF_DISK_SHIFT))
        self.assertFalse(is_automorphism(PARABOLIC_T1))

    def test_fixed_points(self):
        values = sorted(fp.value.real for fp in fixed_points(HALF_DISK_SHIFT))
        np.testing.assert_allclose(values, [-1, 1])
        fps = fixed_points(LftMap(0.5, 0, 0, 1))
        self.assertEqual(len(fps), 2)
        self.assertTrue(any(fp.infinite for fp in fps))
        self.assertEqual(len(fixed_points(PARABOLIC_T1)), 1)


class TestClassify(unittest.TestCase):
    def test_kinds(self):
        for m, kind, dw in KINDS:
            cls = classify(m)
            self.assertEqual(cls.kind, kind, msg=repr(m))
            if dw is None:
                self.assertIsNone(cls.denjoy_wolff, msg=repr(m))
            else:
                self.assertAlmostEqual(cls.denjoy_wolff[0], dw[0], places=9, msg=repr(m))
                self.assertAlmostEqual(cls.denjoy_wolff[1], dw[1], places=9, msg=repr(m))

    def test_not_self_map(self):
        with self.assertRaises(NotSelfMap):
            classify(LftMap(2, 0, 0, 1))

    def test_parabolic_non_automorphism(self):
        cls = classify(PARABOLIC_T1)
        self.assertTrue(cls.parabolic)
        self.assertAlmostEqual(cls.translation_number, 1)
        self.assertAlmostEqual(cls.boundary_contact[0], 1)
        self.assertAlmostEqual(cls.boundary_contact[1], 1)

    def test_boundary_contact_not_parabolic(self):
        cls = classify(LftMap(1, 1, 0, 2))
        self.assertFalse(cls.parabolic)
        self.assertAlmostEqual(cls.boundary_contact[0], 1)

    def test_to_dict(self):
        d = classify(HALF_DISK_SHIFT).to_dict()
        self.assertEqual(d["kind"], "HyperbolicAutomorphism")
        self.assertEqual(len(d["fixed_points"]), 2)


class TestConstructors(unittest.TestCase):
    def test_parabolic_roundtrip(self):
        for zeta in (1, 1j, cmath.exp(0.7j)):
            for t in (2j, -1j, 0.5, 1 + 1j):
                m = parabolic_from(zeta, t)
                self.assertAlmostEqual(translation_number(m), t, places=10, msg=f"{zeta}, {t}")
                self.assertAlmostEqual(m(zeta), zeta, places=12)

    def test_parabolic_roundtrip_seeded(self):
        rng = np.random.default_rng(7)
        for i in range(100):
            zeta = cmath.exp(1j * rng.uniform(-np.pi, np.pi))
            x = 0.0 if i % 2 else rng.uniform(0.1, 3)
            t = complex(x, rng.uniform(-3, 3))
            m = parabolic_from(zeta, t)
            self.assertLess(abs(translation_number(m) - t), 1e-12, msg=f"zeta={zeta}, t={t}")

    def test_parabolic_kinds(self):
        self.assertEqual(classify(parabolic_from(1, 2j)).kind, MapKind.PARABOLIC_AUTOMORPHISM)
        self.assertEqual(classify(parabolic_from(1, 1)).kind, MapKind.NON_AUTO_BOUNDARY_CONTACT)

    def test_parabolic_errors(self):
        with self.assertRaises(BadFixedPoint):
            parabolic_from(0.5, 1)
        with self.assertRaises(BadTranslation):
            parabolic_from(1, -1)
        with self.assertRaises(BadTranslation):
            parabolic_from(1, 0)

    def test_translation_of_hyperbolic(self):
        with self.assertRaises(NotParabolic):
            translation_number(HALF_DISK_SHIFT)

    def test_automorphism_roundtrip(self):
        lam, a = cmath.exp(1.1j), 0.3 + 0.1j
        got_lam, got_a = automorphism_form(automorphism(lam, a))
        self.assertAlmostEqual(got_lam, lam)
        self.assertAlmostEqual(got_a, a)
        with self.assertRaises(NotAutomorphism):
            automorphism_form(PARABOLIC_T1)

    def test_hyperbolic_from(self):
        self.assertTrue(hyperbolic_from(1, -1, 1 / 3).is_close(HALF_DISK_SHIFT))
        m = hyperbolic_from(1j, cmath.exp(2j), 0.4)
        cls = classify(m)
        self.assertEqual(cls.kind, MapKind.HYPERBOLIC_AUTOMORPHISM)
        self.assertAlmostEqual(cls.denjoy_wolff[0], 1j, places=9)
        self.assertAlmostEqual(cls.denjoy_wolff[1], 0.4, places=9)


class TestOrbit(unittest.TestCase):
    def test_rotation(self):
        result = orbit(LftMap(1j, 0, 0, 1), 1, 50)
        self.assertTrue(result.finite)
        self.assertEqual(result.period, 4)

    def test_fixed_point(self):
        result = orbit(HALF_DISK_SHIFT, 1, 50)
        self.assertTrue(result.finite)
        self.assertEqual(result.period, 1)

    def test_attracted(self):
        result = orbit(HALF_DISK_SHIFT, 0, 50)
        self.assertFalse(result.finite)
        self.assertEqual(len(result.points), 51)
        self.assertLess(abs(result.points[-1] - 1), 1e-6)


class TestAdjointSymbols(unittest.TestCase):
    def test_sigma_at_zero(self):
        sigma, _, _ = adjoint_symbols(parabolic_from(1, 2j), 1)
        self.assertAlmostEqual(sigma(0), (1 - 1j) / 2)

    def test_normal_identity(self):
        # psi (g o phi) is constant for psi = K_{sigma(0)} and phi an automorphism
        phi = HALF_DISK_SHIFT
        for gamma in (1, 2, 3):
            sigma, g, _ = adjoint_symbols(phi, gamma)
            s0 = sigma(0)
            z = 0.8 * np.exp(2j * np.pi * np.arange(16) / 16)
            values = (1 - np.conj(s0) * z) ** (-gamma) * g(phi(z))
            np.testing.assert_allclose(values, (1 - abs(s0) ** 2) ** (-gamma), rtol=1e-12)


if __name__ == "__main__":
    unittest.main()
