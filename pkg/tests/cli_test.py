import unittest

import sys

sys.path.insert(1, "..")

import json
import os
import tempfile

from wcolab.cli import CHECKS, main, parse_scenario, run, run_preset, sweep
from wcolab.exceptions import NotSelfMap, SchemaError
from wcolab.presets import PRESETS
from wcolab.utils import dumps

HALF_DISK_SHIFT = {"type": "lft", "coeffs": [[1, 0], [0.5, 0], [0.5, 0], [1, 0]]}
PARABOLIC_T1 = {"type": "lft", "coeffs": [[1, 0], [1, 0], [-1, 0], [3, 0]]}
NORMAL = {
    "name": "normal",
    "phi": HALF_DISK_SHIFT,
    "psi": {"type": "kernel", "w": [-0.5, 0]},
    "N": 128,
    "M": 16,
    "k_max": 8,
}

# document change: schema path of the resulting error
BAD_DOCUMENTS = [
    ({"phi": None}, "phi"),
    ({"checks": ["classify", "nonsense"]}, "checks[1]"),
    ({"M": 65}, "M"),
    ({"space": {"type": "banach"}}, "space.type"),
    ({"psi": {"type": "kernel", "w": [1.5, 0]}}, "psi"),
    ({"psi": {"type": "poly", "coeffs": [[1, 0], "x"]}}, "psi.coeffs[1]"),
    ({"bogus": 1}, "bogus"),
    ({"tol": {"commutator": -1}}, "tol"),
    ({"expect": {"normaloid-inequality": "CONSISTENT"}}, "expect.normaloid-inequality"),
]


def document(**changes):
    doc = dict(NORMAL)
    doc.update(changes)
    return {k: v for k, v in doc.items() if v is not None}


class TestParse(unittest.TestCase):
    def test_defaults(self):
        scenario = parse_scenario({"phi": HALF_DISK_SHIFT, "psi": {"type": "poly", "coeffs": [1]}})
        self.assertEqual(scenario.N, 256)
        self.assertEqual(scenario.M, 32)
        self.assertEqual(scenario.checks, ["classify"])
        self.assertEqual(scenario.space.variant, "hardy")

    def test_json_text(self):
        scenario = parse_scenario(json.dumps(NORMAL))
        self.assertEqual(scenario.name, "normal")
        self.assertEqual(scenario.op.psi.w, -0.5)

    def test_schema_errors(self):
        for changes, path in BAD_DOCUMENTS:
            with self.assertRaises(SchemaError, msg=path) as ctx:
                parse_scenario(document(**changes))
            self.assertEqual(ctx.exception.path, path)
        with self.assertRaises(SchemaError) as ctx:
            parse_scenario("{not json")
        self.assertEqual(ctx.exception.path, "$")

    def test_not_self_map(self):
        with self.assertRaises(NotSelfMap):
            parse_scenario(document(phi={"type": "lft", "coeffs": [2, 0, 0, 1]}))
        with self.assertRaises(NotSelfMap):
            parse_scenario(document(phi={"type": "series", "coeffs": [0, 1]}))

    def test_phi_descriptors(self):
        for phi in (
            {"type": "hyperbolic", "attracting": [1, 0], "repelling": [-1, 0], "multiplier": 1 / 3},
            {"type": "parabolic", "zeta": [1, 0], "t": [0, 2]},
            {"type": "automorphism", "lam": [-1, 0], "a": [-0.5, 0]},
        ):
            scenario = parse_scenario(document(phi=phi, psi={"type": "poly", "coeffs": [1]}))
            self.assertTrue(scenario.op.is_lft)
        scenario = parse_scenario(document(phi={"type": "hyperbolic", "attracting": [1, 0], "repelling": [-1, 0],
                                                "multiplier": 1 / 3}))
        self.assertTrue(scenario.phi.is_close(parse_scenario(NORMAL).phi))

    def test_normal_auto(self):
        scenario = parse_scenario(document(psi={"type": "normal-auto", "psi0": 2}))
        self.assertAlmostEqual(scenario.psi.w, -0.5)
        self.assertAlmostEqual(scenario.psi(0), 2)
        with self.assertRaises(SchemaError):
            parse_scenario(document(phi=PARABOLIC_T1, psi={"type": "normal-auto"}))

    def test_preset_checks(self):
        scenario = parse_scenario(document(preset="prop34-kernel"))
        self.assertEqual(scenario.checks, ["hyponormality", "kernel-modulus"])

    def test_overrides(self):
        scenario = parse_scenario(NORMAL, seed=7, tol_overrides={"commutator": 1e-3})
        self.assertEqual(scenario.seed, 7)
        self.assertEqual(scenario.tol["commutator"], 1e-3)


class TestRun(unittest.TestCase):
    def test_registry_order(self):
        scenario = parse_scenario(document(checks=["kernel-modulus", "classify", "hyponormality"]))
        report = run(scenario)
        self.assertEqual(list(report["checks"]), ["classify", "hyponormality", "kernel-modulus"])
        self.assertTrue(report["passed"])
        self.assertEqual(report["checks"]["hyponormality"]["verdict"], "NORMAL_CONSISTENT")
        self.assertEqual(report["classification"]["kind"], "HyperbolicAutomorphism")
        self.assertEqual(report["checks"]["kernel-modulus"]["details"]["section_verdict"], "NORMAL_CONSISTENT")

    def test_deterministic(self):
        scenario = document(checks=["kernel-defect", "normaloid", "kernel-adjoint"])
        self.assertEqual(dumps(run(parse_scenario(scenario))), dumps(run(parse_scenario(scenario))))

    def test_expectation_mismatch(self):
        scenario = document(checks=["normaloid-inequality"], expect={"normaloid-inequality": "VIOLATED"})
        report = run(parse_scenario(scenario))
        self.assertFalse(report["passed"])
        self.assertEqual(report["failures"], ["normaloid-inequality"])
        self.assertEqual(report["checks"]["normaloid-inequality"]["expected"], "VIOLATED")

    def test_gate(self):
        report = run(parse_scenario(document(checks=["parabolic-kernel"])))
        self.assertEqual(report["checks"]["parabolic-kernel"]["verdict"], "NotParabolicNonAutomorphism")
        self.assertEqual(report["checks"]["parabolic-kernel"]["status"], "NOT_APPLICABLE")
        self.assertTrue(report["passed"])

    def test_orbit(self):
        report = run(parse_scenario(document(checks=["orbit"], orbit={"z0": [-1, 0], "n_max": 10})))
        self.assertEqual(report["checks"]["orbit"]["verdict"], "FINITE")

    def test_normal_symbol_compares_psi(self):
        report = run(parse_scenario(document(checks=["normal-symbol"])))
        self.assertEqual(report["checks"]["normal-symbol"]["verdict"], "CONSISTENT")
        report = run(parse_scenario(document(checks=["normal-symbol"], psi={"type": "kernel", "w": [-0.4, 0]})))
        entry = report["checks"]["normal-symbol"]
        self.assertEqual(entry["verdict"], "VIOLATED")
        self.assertLess(entry["details"]["residual"], 1e-10)
        self.assertGreater(entry["details"]["distance_to_psi"], 1e-3)
        self.assertGreater(entry["details"]["identity_residual"], 1e-3)

    def test_registry_covers_presets(self):
        for preset in PRESETS.values():
            for scenario in preset["scenarios"]:
                for check in scenario["checks"]:
                    self.assertIn(check, CHECKS)

    def test_cheap_presets(self):
        for preset in ("prop32-kernel", "cor35-parabolic", "prop34-kernel", "lemma46-orbit",
                       "prop43-boundary-zero", "prop44-eigenweight"):
            for doc in PRESETS[preset]["scenarios"]:
                report = run(parse_scenario(doc))
                self.assertTrue(report["passed"], msg=f"{preset}/{doc['name']}: {report['checks']}")

    def test_every_preset_twice(self):
        for preset in PRESETS:
            first = run_preset(preset)
            second = run_preset(preset)
            failing = {r["name"]: r["failures"] for r in first["reports"] if not r["passed"]}
            self.assertTrue(first["passed"], msg=f"{preset}: {failing}")
            self.assertEqual(dumps(first), dumps(second), msg=preset)

    def test_spectral_radius_within_five_percent(self):
        for preset in ("lemma31-radius", "cor33-parabolic"):
            for report in run_preset(preset)["reports"]:
                details = report["checks"]["spectral-radius"]["details"]
                self.assertLessEqual(details["relative_gap"], 0.05, msg=report["name"])
                self.assertLessEqual(details["section_gelfand"], details["section_norm"] * (1 + 1e-9))

    def test_perturbed_normal_is_separated(self):
        for report in run_preset("thm45-perturbed")["reports"]:
            details = report["checks"]["normality-gap"]["details"]
            self.assertGreaterEqual(details["commutator_max_abs_eig"], 1e-3, msg=report["name"])
            self.assertGreaterEqual(details["kernel_max_defect"], 1e-3, msg=report["name"])


class TestSweep(unittest.TestCase):
    def test_frame(self):
        frame = sweep(parse_scenario(NORMAL), [32, 64])
        self.assertEqual(list(frame.columns), ["order", "metric", "value"])
        sigma = frame[frame.metric == "sigma_min"]
        self.assertEqual(list(sigma.order), [32, 64])
        self.assertEqual(len(frame[frame.metric == "gelfand"]), 8)


class TestMain(unittest.TestCase):
    def setUp(self):
        self.dir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.dir.cleanup()

    def write(self, name, doc):
        path = os.path.join(self.dir.name, name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(doc if isinstance(doc, str) else json.dumps(doc))
        return path

    def test_verify(self):
        out = os.path.join(self.dir.name, "out.json")
        csv = os.path.join(self.dir.name, "out.csv")
        self.assertEqual(main(["verify", "prop32-kernel", "--out", out, "--csv", csv]), 0)
        with open(out, encoding="utf-8") as f:
            bundle = json.load(f)
        self.assertTrue(bundle["passed"])
        self.assertEqual(len(bundle["reports"]), 3)
        self.assertIn("timestamp", bundle)
        self.assertTrue(os.path.exists(csv))

    def test_classify(self):
        out = os.path.join(self.dir.name, "out.json")
        self.assertEqual(main(["classify", self.write("s.json", NORMAL), "--out", out]), 0)
        with open(out, encoding="utf-8") as f:
            self.assertEqual(json.load(f)["classification"]["kind"], "HyperbolicAutomorphism")

    def test_failing_exit_code(self):
        path = self.write("s.json", document(checks=["kernel-modulus"], expect={"kernel-modulus": "VIOLATED"}))
        out = os.path.join(self.dir.name, "out.json")
        self.assertEqual(main(["diagnose", path, "--out", out]), 1)

    def test_bad_input(self):
        out = os.path.join(self.dir.name, "out.json")
        self.assertEqual(main(["classify", self.write("bad.json", "{oops"), "--out", out]), 2)
        self.assertEqual(main(["classify", os.path.join(self.dir.name, "missing.json")]), 2)
        self.assertEqual(main(["verify", "prop32-kernel", "--tol", "commutator"]), 2)

    def test_presets(self):
        self.assertEqual(main(["presets"]), 0)


if __name__ == "__main__":
    unittest.main()
