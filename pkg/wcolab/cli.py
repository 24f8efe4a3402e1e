"""Command-line entry point: scenario ingestion, preset verification and reports.

A scenario is a JSON document; complex numbers are written as [re, im]::

    {"name": "hyperbolic", "space": {"type": "hardy"},
     "phi": {"type": "lft", "coeffs": [[1, 0], [0.5, 0], [0.5, 0], [1, 0]]},
     "psi": {"type": "kernel", "w": [-0.5, 0]}, "N": 256, "M": 32,
     "checks": ["hyponormality", "kernel-defect"],
     "expect": {"hyponormality": "NORMAL_CONSISTENT"}}
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from wcolab import __version__
from wcolab.constants import (
    BOUNDARY_GRID,
    DEFAULT_ORDER,
    DEFAULT_SEED,
    GELFAND_POWERS,
    SAMPLE_PAIRS,
    SAMPLE_RADIUS,
)
from wcolab.diagnostics import (
    GELFAND_SLACK,
    Hyponormality,
    bounded_below_probe,
    boundary_weight_profile,
    boundary_zero_check,
    defect_report,
    eigen_weight_check,
    hermitian_spectrum,
    hyponormality_verdict,
    invertibility_check,
    kernel_defect_scan,
    kernel_modulus_check,
    normal_identity_residual,
    normal_symbol_for,
    normaloid_inequality_check,
    normaloid_verdict,
    parabolic_kernel_check,
    self_commutator,
    smallest_singular_value,
    spectral_radius_closed,
    spectral_radius_gelfand,
    spectral_radius_orbit,
    zero_count,
)
from wcolab.exceptions import (
    ConfigError,
    HypothesesNotMet,
    NotApplicable,
    NotAutomorphism,
    NotParabolicNonAutomorphism,
    NotSelfMap,
    SchemaError,
    UnboundedSymbol,
    WcoError,
    WrongMapClass,
)
from wcolab.moebius import (
    LftMap,
    MapKind,
    automorphism,
    classify,
    compose,
    hyperbolic_from,
    is_self_map,
    orbit,
    parabolic_from,
)
from wcolab.presets import PRESETS
from wcolab.series import PowerSeries, RationalPower, SpaceSpec
from wcolab.symbols import Polynomial, Product, RationalPowerSymbol, ScaledKernel, Sum, SymbolSpec
from wcolab.utils import disk_samples, dumps, from_pair, to_pair, tolerances
from wcolab.wco import WcoSpec, kernel_adjoint_residual, truncate_operator

logger = logging.getLogger(__name__)

GATES = (HypothesesNotMet, NotApplicable, NotAutomorphism, NotParabolicNonAutomorphism, WrongMapClass)

BATTERY_CASES = 50

FIELDS = {
    "name", "space", "phi", "psi", "N", "M", "seed", "checks", "preset", "tol", "expect",
    "orbit", "samples", "orders", "k_max", "zero_radius",
}


@dataclass
class Scenario:
    name: str
    space: SpaceSpec
    phi: object
    psi: SymbolSpec
    N: int = DEFAULT_ORDER
    M: int = DEFAULT_ORDER // 8
    seed: int = DEFAULT_SEED
    checks: List[str] = field(default_factory=list)
    expect: Dict[str, str] = field(default_factory=dict)
    tol: Dict[str, float] = field(default_factory=tolerances)
    orbit: Dict = field(default_factory=lambda: {"z0": 0j, "n_max": 100})
    samples: Optional[List[complex]] = None
    orders: Optional[List[int]] = None
    k_max: int = GELFAND_POWERS
    zero_radius: float = 0.9
    document: Dict = field(default_factory=dict)

    @property
    def op(self) -> WcoSpec:
        return WcoSpec(self.psi, self.phi, self.space)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "space": self.space.to_dict(),
            "phi": self.document.get("phi"),
            "psi": self.document.get("psi"),
            "N": self.N,
            "M": self.M,
            "seed": self.seed,
            "checks": list(self.checks),
            "expect": dict(self.expect),
            "tol": dict(self.tol),
            "orbit": {"z0": to_pair(self.orbit["z0"]), "n_max": self.orbit["n_max"]},
            "samples": None if self.samples is None else [to_pair(w) for w in self.samples],
            "orders": self.orders,
            "k_max": self.k_max,
            "zero_radius": self.zero_radius,
        }


# ------------------------------------------------------------------ parsing


def _require(node: dict, key: str, path: str):
    if key not in node:
        raise SchemaError(f"{path}.{key}" if path else key, "missing required field")
    return node[key]


def _as_dict(node, path: str) -> dict:
    if not isinstance(node, dict):
        raise SchemaError(path, f"expected an object, got {type(node).__name__}")
    return node


def _as_list(node, path: str, nonempty: bool = True) -> list:
    if not isinstance(node, list) or (nonempty and not node):
        raise SchemaError(path, "expected a non-empty list")
    return node


def _as_int(node, path: str, low: Optional[int] = None) -> int:
    if isinstance(node, bool) or not isinstance(node, int):
        raise SchemaError(path, f"expected an integer, got {node!r}")
    if low is not None and node < low:
        raise SchemaError(path, f"expected an integer >= {low}, got {node}")
    return node


def _as_real(node, path: str) -> float:
    if isinstance(node, bool) or not isinstance(node, (int, float)) or not np.isfinite(node):
        raise SchemaError(path, f"expected a finite number, got {node!r}")
    return float(node)


def _pairs(node, path: str) -> List[complex]:
    return [from_pair(x, f"{path}[{i}]") for i, x in enumerate(_as_list(node, path))]


def parse_space(node, path: str = "space") -> SpaceSpec:
    node = _as_dict(node, path)
    kind = _require(node, "type", path)
    try:
        if kind == "hardy":
            return SpaceSpec.hardy()
        if kind == "bergman":
            return SpaceSpec.bergman(_as_real(node.get("alpha", 0), f"{path}.alpha"))
        if kind == "weighted":
            beta = _as_list(_require(node, "beta", path), f"{path}.beta")
            return SpaceSpec.weighted([_as_real(b, f"{path}.beta[{i}]") for i, b in enumerate(beta)])
    except ConfigError as e:
        raise SchemaError(path, str(e)) from e
    raise SchemaError(f"{path}.type", f"unknown space type {kind!r}")


def parse_phi(node, path: str = "phi"):
    node = _as_dict(node, path)
    kind = _require(node, "type", path)
    try:
        if kind == "lft":
            coeffs = _pairs(_require(node, "coeffs", path), f"{path}.coeffs")
            if len(coeffs) != 4:
                raise SchemaError(f"{path}.coeffs", f"expected 4 coefficients, got {len(coeffs)}")
            phi = LftMap(*coeffs)
        elif kind == "series":
            return PowerSeries(_pairs(_require(node, "coeffs", path), f"{path}.coeffs"))
        elif kind == "automorphism":
            phi = automorphism(from_pair(_require(node, "lam", path), f"{path}.lam"),
                               from_pair(_require(node, "a", path), f"{path}.a"))
        elif kind == "hyperbolic":
            phi = hyperbolic_from(from_pair(_require(node, "attracting", path), f"{path}.attracting"),
                                  from_pair(_require(node, "repelling", path), f"{path}.repelling"),
                                  _as_real(_require(node, "multiplier", path), f"{path}.multiplier"))
        elif kind == "parabolic":
            phi = parabolic_from(from_pair(_require(node, "zeta", path), f"{path}.zeta"),
                                 from_pair(_require(node, "t", path), f"{path}.t"))
        else:
            raise SchemaError(f"{path}.type", f"unknown map type {kind!r}")
    except (SchemaError, NotSelfMap):
        raise
    except ValueError as e:
        raise SchemaError(path, str(e)) from e
    if not is_self_map(phi):
        raise NotSelfMap(f"{path}: {phi!r} does not map the unit disk into itself")
    return phi


def parse_psi(node, space: SpaceSpec, phi, path: str = "psi") -> SymbolSpec:
    node = _as_dict(node, path)
    kind = _require(node, "type", path)
    try:
        if kind == "poly":
            return Polynomial(_pairs(_require(node, "coeffs", path), f"{path}.coeffs"))
        if kind == "kernel":
            w = from_pair(_require(node, "w", path), f"{path}.w")
            scale = from_pair(node.get("scale", 1), f"{path}.scale")
            return ScaledKernel(scale, w, space)
        if kind == "rational-power":
            p, q, u, v = (from_pair(_require(node, k, path), f"{path}.{k}") for k in "pquv")
            return RationalPowerSymbol(RationalPower(p, q, u, v, _as_real(_require(node, "s", path), f"{path}.s")))
        if kind == "product":
            factors = _as_list(_require(node, "factors", path), f"{path}.factors")
            return Product([parse_psi(f, space, phi, f"{path}.factors[{i}]") for i, f in enumerate(factors)])
        if kind == "sum":
            terms = _as_list(_require(node, "terms", path), f"{path}.terms")
            return Sum([parse_psi(t, space, phi, f"{path}.terms[{i}]") for i, t in enumerate(terms)])
        if kind == "normal-auto":
            if not isinstance(phi, LftMap):
                raise SchemaError(path, "normal-auto needs a linear-fractional phi")
            psi0 = from_pair(node.get("psi0", 1), f"{path}.psi0")
            return normal_symbol_for(phi, psi0, space).psi
    except SchemaError:
        raise
    except (ValueError, WcoError) as e:
        raise SchemaError(path, str(e)) from e
    raise SchemaError(f"{path}.type", f"unknown symbol type {kind!r}")


def parse_scenario(document, seed: Optional[int] = None,
                   tol_overrides: Optional[Dict[str, float]] = None) -> Scenario:
    """Validate a scenario document (a dict or JSON text)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise SchemaError("$", f"not valid JSON: {e}") from e
    doc = _as_dict(document, "$")
    unknown = sorted(set(doc) - FIELDS)
    if unknown:
        raise SchemaError(unknown[0], "unknown field")

    name = doc.get("name", "scenario")
    if not isinstance(name, str):
        raise SchemaError("name", "expected a string")
    space = parse_space(doc.get("space", {"type": "hardy"}))
    phi = parse_phi(_require(doc, "phi", ""))
    psi = parse_psi(_require(doc, "psi", ""), space, phi)

    N = _as_int(doc.get("N", DEFAULT_ORDER), "N", low=2)
    M = _as_int(doc.get("M", max(1, N // 8)), "M", low=1)
    if N < 2 * M:
        raise SchemaError("M", f"expected N >= 2M, got N = {N}, M = {M}")

    if "checks" in doc:
        checks = _as_list(doc["checks"], "checks")
    elif "preset" in doc:
        preset = doc["preset"]
        if preset not in PRESETS:
            raise SchemaError("preset", f"unknown preset {preset!r}")
        wanted = {c for s in PRESETS[preset]["scenarios"] for c in s["checks"]}
        checks = [c for c in CHECKS if c in wanted]
    else:
        checks = ["classify"]
    for i, c in enumerate(checks):
        if c not in CHECKS:
            raise SchemaError(f"checks[{i}]", f"unknown check {c!r}")

    expect = _as_dict(doc.get("expect", {}), "expect")
    for key, value in expect.items():
        if key not in checks:
            raise SchemaError(f"expect.{key}", "expectation for a check that is not run")
        if not isinstance(value, str):
            raise SchemaError(f"expect.{key}", "expected a verdict name")

    try:
        tol = tolerances(_as_dict(doc.get("tol", {}), "tol"))
        tol = tolerances(dict(tol, **(tol_overrides or {})))
    except ConfigError as e:
        raise SchemaError("tol", str(e)) from e

    orbit_node = _as_dict(doc.get("orbit", {}), "orbit")
    orbit_spec = {
        "z0": from_pair(orbit_node.get("z0", 0), "orbit.z0"),
        "n_max": _as_int(orbit_node.get("n_max", 100), "orbit.n_max", low=1),
    }
    samples = None
    if "samples" in doc:
        samples = _pairs(doc["samples"], "samples")
        for i, w in enumerate(samples):
            if not abs(w) < 1:
                raise SchemaError(f"samples[{i}]", f"expected |w| < 1, got {abs(w):.6g}")
    orders = None
    if "orders" in doc:
        orders = [_as_int(n, f"orders[{i}]", low=2) for i, n in enumerate(_as_list(doc["orders"], "orders"))]
        if orders != sorted(orders):
            raise SchemaError("orders", "expected an ascending list")
    zero_radius = _as_real(doc.get("zero_radius", 0.9), "zero_radius")
    if not 0 < zero_radius < 1:
        raise SchemaError("zero_radius", f"expected 0 < r < 1, got {zero_radius}")

    try:
        WcoSpec(psi, phi, space)
    except UnboundedSymbol as e:
        raise SchemaError("psi", str(e)) from e

    return Scenario(
        name=name,
        space=space,
        phi=phi,
        psi=psi,
        N=N,
        M=M,
        seed=_as_int(doc.get("seed", DEFAULT_SEED), "seed", low=0) if seed is None else seed,
        checks=checks,
        expect=dict(expect),
        tol=tol,
        orbit=orbit_spec,
        samples=samples,
        orders=orders,
        k_max=_as_int(doc.get("k_max", GELFAND_POWERS), "k_max", low=1),
        zero_radius=zero_radius,
        document=doc,
    )


# ------------------------------------------------------------------- checks


class _Context:
    """Per-run cache shared by the checks of one scenario."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.op = scenario.op
        self.results: Dict[str, tuple] = {}
        self._section = None

    @property
    def section(self):
        if self._section is None:
            self._section = truncate_operator(self.op, self.scenario.N)
        return self._section

    @property
    def samples(self) -> List[complex]:
        if self.scenario.samples is not None:
            return self.scenario.samples
        return [0j] + list(disk_samples(SAMPLE_PAIRS, SAMPLE_RADIUS, self.scenario.seed)[:, 0])

    def verdict_of(self, name: str) -> Optional[str]:
        return self.results[name][0] if name in self.results else None


def _unpack(result):
    return result.verdict.value, result.margin, result.details


def _check_classify(ctx: _Context):
    if not ctx.op.is_lft:
        raise HypothesesNotMet("classification needs a linear-fractional phi")
    cls = classify(ctx.op.phi)
    return cls.kind.value, 0.0, dict(cls.to_dict(), formula=str(ctx.op.phi))


def _check_orbit(ctx: _Context):
    if not ctx.op.is_lft:
        raise HypothesesNotMet("orbits need a linear-fractional phi")
    spec = ctx.scenario.orbit
    result = orbit(ctx.op.phi, spec["z0"], spec["n_max"])
    kind = classify(ctx.op.phi).kind
    details = {"period": result.period, "length": len(result.points), "last": to_pair(result.points[-1]),
               "kind": kind.value}
    if not result.finite:
        return "INFINITE", 0.0, details
    periodic_ok = kind in (MapKind.IDENTITY, MapKind.ELLIPTIC_AUTOMORPHISM) or result.period == 1
    return ("FINITE" if periodic_ok else "VIOLATED"), 0.0, details


def _check_kernel_adjoint(ctx: _Context):
    T = ctx.section
    residuals = [kernel_adjoint_residual(ctx.op, w, T.order, T=T) for w in ctx.samples]
    worst = max(residuals)
    tol = ctx.scenario.tol["kernel_adjoint"]
    return ("CONSISTENT" if worst <= tol else "VIOLATED"), tol - worst, {
        "max_residual": worst, "threshold": tol, "samples": len(residuals)}


def _random_case(rng: np.random.Generator, index: int):
    space = (SpaceSpec.hardy(), SpaceSpec.bergman(0), SpaceSpec.bergman(1))[index % 3]
    lam = np.exp(2j * np.pi * rng.random())
    a = 0.6 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
    s = rng.uniform(0.3, 1.0)
    b0 = 0.9 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
    phi = compose(LftMap(s, (1 - s) * b0, 0, 1), automorphism(lam, a))
    if rng.random() < 0.5:
        degree = int(rng.integers(0, 4))
        psi = Polynomial(rng.uniform(-1, 1, degree + 1) + 1j * rng.uniform(-1, 1, degree + 1))
    else:
        psi = ScaledKernel(1, 0.5 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()), space)
    w = 0.6 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
    return WcoSpec(psi, phi, space), complex(w)


def _check_kernel_adjoint_battery(ctx: _Context):
    rng = np.random.default_rng(ctx.scenario.seed)
    tol = ctx.scenario.tol["kernel_adjoint"]
    residuals = []
    for i in range(BATTERY_CASES):
        op, w = _random_case(rng, i)
        residuals.append(kernel_adjoint_residual(op, w, ctx.scenario.N))
    passed = sum(r <= tol for r in residuals)
    worst = max(residuals)
    return ("CONSISTENT" if passed == BATTERY_CASES else "VIOLATED"), tol - worst, {
        "cases": BATTERY_CASES, "passed": passed, "max_residual": worst, "threshold": tol}


def _check_hyponormality(ctx: _Context):
    s = ctx.scenario
    return _unpack(hyponormality_verdict(ctx.op, s.N, s.M, s.tol["commutator"], T=ctx.section))


def _check_kernel_defect(ctx: _Context):
    s = ctx.scenario
    return _unpack(kernel_defect_scan(ctx.op, s.N, SAMPLE_PAIRS, SAMPLE_RADIUS, s.seed, s.tol["kernel_defect"]))


def _check_normality_gap(ctx: _Context):
    s = ctx.scenario
    floor = s.tol["nonnormal_gap"]
    eigs = hermitian_spectrum(self_commutator(ctx.section, s.M))
    commutator = float(np.max(np.abs(eigs)))
    kernel = kernel_defect_scan(ctx.op, s.N, SAMPLE_PAIRS, SAMPLE_RADIUS, s.seed, s.tol["kernel_defect"])
    defect = kernel.details["max_defect"]
    details = {"commutator_max_abs_eig": commutator, "kernel_max_defect": defect, "threshold": floor,
               "N": ctx.section.order, "M": s.M}
    margin = min(commutator, defect) - floor
    return ("SEPARATED" if margin >= 0 else "NOT_SEPARATED"), margin, details


def _check_spectral_radius(ctx: _Context):
    s = ctx.scenario
    closed = spectral_radius_closed(ctx.op)
    orbit = spectral_radius_orbit(ctx.op, ctx.samples, s.k_max)
    gelfand = spectral_radius_gelfand(ctx.section, s.k_max)
    norm = float(np.linalg.norm(ctx.section.matrix[: ctx.section.order], 2))
    gap = abs(orbit.value - closed) / closed
    details = {"closed_form": closed, "orbit": orbit.value, "orbit_steps": len(orbit.sequence),
               "relative_gap": gap, "threshold": GELFAND_SLACK, "section_gelfand": gelfand.value,
               "section_norm": norm}
    ok = gap <= GELFAND_SLACK and gelfand.value <= norm * (1 + 1e-9)
    return ("CONSISTENT" if ok else "VIOLATED"), GELFAND_SLACK - gap, details


def _check_normaloid(ctx: _Context):
    s = ctx.scenario
    return _unpack(normaloid_verdict(ctx.op, ctx.samples, s.N, s.k_max, s.tol["normaloid"], T=ctx.section))


def _check_normaloid_inequality(ctx: _Context):
    return _unpack(normaloid_inequality_check(ctx.op, ctx.scenario.tol["identity"]))


def _check_kernel_modulus(ctx: _Context):
    try:
        hypo = Hyponormality(ctx.verdict_of("hyponormality"))
    except ValueError:
        hypo = None
    return _unpack(kernel_modulus_check(ctx.op, hypo, ctx.scenario.tol["modulus"]))


def _check_parabolic_kernel(ctx: _Context):
    return _unpack(parabolic_kernel_check(ctx.op, ctx.scenario.tol["parabolic"]))


def _check_boundary_profile(ctx: _Context):
    tol = ctx.scenario.tol["profile"]
    profile = boundary_weight_profile(ctx.op, BOUNDARY_GRID, tol)
    section = ctx.verdict_of("hyponormality")
    margins = []
    if section in ("NORMAL_CONSISTENT", "HYPONORMAL_CONSISTENT"):
        margins.append(profile.hyponormal_margin)
    if section in ("NORMAL_CONSISTENT", "COHYPONORMAL_CONSISTENT"):
        margins.append(profile.cohyponormal_margin)
    details = profile.to_dict()
    details["section_verdict"] = section
    margin = min(margins) if margins else min(profile.hyponormal_margin, profile.cohyponormal_margin)
    if margins and margin < -tol:
        return "VIOLATED", margin, details
    return ("CONSTANT" if profile.constant else "CONSISTENT"), margin, details


def _check_eigen_weight(ctx: _Context):
    value = eigen_weight_check(ctx.op)
    tol = ctx.scenario.tol["profile"]
    return ("FIXED" if value <= tol else "NOT_FIXED"), tol - value, {"sup": value, "threshold": tol}


def _check_normal_symbol(ctx: _Context):
    if not ctx.op.is_lft:
        raise HypothesesNotMet("normal symbols are built for linear-fractional phi")
    psi0 = complex(ctx.op.psi(0))
    built = normal_symbol_for(ctx.op.phi, psi0, ctx.scenario.space)
    z = 0.9 * np.exp(2j * np.pi * np.arange(256) / 256)
    distance = float(np.max(np.abs(built.psi(z) - ctx.op.psi(z))))
    identity = normal_identity_residual(ctx.op)
    tol = ctx.scenario.tol["identity"]
    details = {"sigma0": to_pair(built.sigma0), "residual": built.residual, "distance_to_psi": distance,
               "identity_residual": identity, "threshold": tol}
    worst = max(built.residual, distance, identity)
    return ("CONSISTENT" if worst <= tol else "VIOLATED"), tol - worst, details


def _check_zero_count(ctx: _Context):
    r = ctx.scenario.zero_radius
    count = zero_count(ctx.op.psi, r)
    return ("ZERO_FREE" if count == 0 else "HAS_ZEROS"), float(count), {"zeros": count, "radius": r}


def _check_boundary_zero(ctx: _Context):
    return _unpack(boundary_zero_check(ctx.op))


def _orders(scenario: Scenario) -> List[int]:
    if scenario.orders:
        return scenario.orders
    return [max(2, scenario.N // 4), max(2, scenario.N // 2), scenario.N]


def _check_bounded_below(ctx: _Context):
    trend = bounded_below_probe(ctx.op, _orders(ctx.scenario))
    return trend.verdict.value, trend.floor, trend.to_dict()


def _check_invertibility(ctx: _Context):
    verdict, margin, details = _unpack(invertibility_check(ctx.op))
    below = ctx.verdict_of("bounded-below")
    if below is not None:
        details = dict(details, bounded_below=below)
        if (verdict == "INVERTIBLE") != (below == "BOUNDED_BELOW_CONSISTENT"):
            logger.warning("%s: invertibility %s but finite sections say %s", ctx.scenario.name, verdict, below)
    return verdict, margin, details


CHECKS: Dict[str, Callable] = {
    "classify": _check_classify,
    "orbit": _check_orbit,
    "kernel-adjoint": _check_kernel_adjoint,
    "kernel-adjoint-battery": _check_kernel_adjoint_battery,
    "hyponormality": _check_hyponormality,
    "kernel-defect": _check_kernel_defect,
    "normality-gap": _check_normality_gap,
    "spectral-radius": _check_spectral_radius,
    "normaloid": _check_normaloid,
    "normaloid-inequality": _check_normaloid_inequality,
    "kernel-modulus": _check_kernel_modulus,
    "parabolic-kernel": _check_parabolic_kernel,
    "boundary-profile": _check_boundary_profile,
    "eigen-weight": _check_eigen_weight,
    "normal-symbol": _check_normal_symbol,
    "zero-count": _check_zero_count,
    "boundary-zero": _check_boundary_zero,
    "bounded-below": _check_bounded_below,
    "invertibility": _check_invertibility,
}


# ---------------------------------------------------------------------- run


def _status(verdict: str, expected: Optional[str]) -> str:
    if expected is not None:
        return "PASS" if verdict == expected else "FAIL"
    if verdict in ("ERROR", "VIOLATED"):
        return "FAIL"
    if verdict == "NOT_APPLICABLE" or verdict in {g.__name__ for g in GATES}:
        return "NOT_APPLICABLE"
    return "PASS"


def _classification(op: WcoSpec) -> Optional[dict]:
    if not op.is_lft:
        return None
    return dict(classify(op.phi).to_dict(), formula=str(op.phi))


def run(scenario: Scenario) -> dict:
    """Run the scenario's checks in registry order and collect a report."""
    ctx = _Context(scenario)
    checks = {}
    for name, fn in CHECKS.items():
        if name not in scenario.checks:
            continue
        expected = scenario.expect.get(name)
        error = None
        try:
            verdict, margin, details = fn(ctx)
        except GATES as e:
            verdict, margin, details, error = type(e).__name__, None, {}, str(e)
        except (WcoError, ValueError) as e:
            logger.exception("%s: check %s raised", scenario.name, name)
            verdict, margin, details, error = "ERROR", None, {}, f"{type(e).__name__}: {e}"
        ctx.results[name] = (verdict, margin, details)
        status = _status(verdict, expected)
        entry = {"status": status, "verdict": verdict, "margin": margin, "details": details}
        if expected is not None:
            entry["expected"] = expected
        if error is not None:
            entry["error"] = error
        checks[name] = entry
        log = logger.warning if status == "FAIL" else logger.info
        log("%s: %s -> %s (%s)", scenario.name, name, verdict, status)
    failures = sorted(name for name, entry in checks.items() if entry["status"] == "FAIL")
    return {
        "name": scenario.name,
        "scenario": scenario.to_dict(),
        "classification": _classification(ctx.op),
        "checks": checks,
        "failures": failures,
        "passed": not failures,
        "version": __version__,
    }


def run_preset(preset: str, seed: Optional[int] = None,
               tol_overrides: Optional[Dict[str, float]] = None) -> dict:
    if preset not in PRESETS:
        raise SchemaError("preset", f"unknown preset {preset!r}; known: {', '.join(PRESETS)}")
    entry = PRESETS[preset]
    reports = [run(parse_scenario(doc, seed, tol_overrides)) for doc in entry["scenarios"]]
    return {
        "preset": preset,
        "claim": entry["claim"],
        "reports": reports,
        "passed": all(r["passed"] for r in reports),
    }


def sweep(scenario: Scenario, orders: Optional[Sequence[int]] = None) -> pd.DataFrame:
    """Defect metrics against the truncation order, plus Gelfand values against k at the largest order."""
    orders = sorted(orders or _orders(scenario))
    op, tol = scenario.op, scenario.tol
    samples = [0j] + list(disk_samples(SAMPLE_PAIRS, SAMPLE_RADIUS, scenario.seed)[:, 0])
    metrics = {
        "kernel_defect_max": lambda n, T: kernel_defect_scan(
            op, n, SAMPLE_PAIRS, SAMPLE_RADIUS, scenario.seed, tol["kernel_defect"]).details["max_defect"],
        "commutator_max_abs_eig": lambda n, T: float(np.max(np.abs(hermitian_spectrum(
            self_commutator(T, max(1, n // 8)))))),
        "sigma_min": lambda n, T: smallest_singular_value(truncate_operator(op, n, rows=4 * n)),
        "kernel_adjoint_residual": lambda n, T: max(kernel_adjoint_residual(op, w, n, T=T) for w in samples),
    }
    rows = []
    T = None
    for n in orders:
        T = truncate_operator(op, n)
        for metric, fn in metrics.items():
            try:
                rows.append((n, metric, float(fn(n, T))))
            except WcoError as e:
                logger.warning("sweep %s at N = %d skipped %s: %s", scenario.name, n, metric, e)
    frame = pd.DataFrame(rows, columns=["order", "metric", "value"])
    powers = [spectral_radius_gelfand(T, scenario.k_max).to_frame()]
    try:
        powers.append(spectral_radius_orbit(op, samples, max(2, scenario.k_max)).to_frame())
    except HypothesesNotMet as e:
        logger.info("sweep %s: no kernel orbit estimate: %s", scenario.name, e)
    gelfand = pd.concat(powers, ignore_index=True).rename(columns={"k": "order"})
    return pd.concat([frame, gelfand], ignore_index=True)


# ---------------------------------------------------------------------- CLI


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _parse_tol(items: Optional[List[str]]) -> Dict[str, float]:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise SchemaError("--tol", f"expected key=value, got {item!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError as e:
            raise SchemaError(f"--tol {key}", f"not a number: {value!r}") from e
    return out


def _load(path: str, args) -> Scenario:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    return parse_scenario(text, args.seed, _parse_tol(args.tol))


def _emit(payload: dict, args) -> None:
    text = dumps(dict(payload, timestamp=_timestamp()))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        logger.info("wrote %s", args.out)
    else:
        print(text)


def _write_csv(frame: pd.DataFrame, args) -> None:
    if args.csv:
        frame.to_csv(args.csv, index=False)
        logger.info("wrote %s", args.csv)


def _check_rows(bundle: dict) -> List[tuple]:
    return [
        (bundle.get("preset", ""), report["name"], name, entry["status"], entry["verdict"], entry["margin"])
        for report in bundle["reports"]
        for name, entry in report["checks"].items()
    ]


def _cmd_classify(args) -> int:
    scenario = _load(args.scenario, args)
    if not scenario.op.is_lft:
        raise SchemaError("phi", "classification needs a linear-fractional phi")
    _emit({"name": scenario.name, "classification": _classification(scenario.op), "version": __version__}, args)
    return 0


def _cmd_diagnose(args) -> int:
    scenario = _load(args.scenario, args)
    report = run(scenario)
    defects = defect_report(scenario.op, scenario.N, scenario.M, scenario.seed, scenario.k_max,
                            tolerances=scenario.tol)
    report["defects"] = defects.to_dict()
    _write_csv(defects.to_frame(), args)
    _emit(report, args)
    return _exit(report["failures"])


def _cmd_verify(args) -> int:
    bundle = run_preset(args.preset, args.seed, _parse_tol(args.tol))
    bundle["version"] = __version__
    _write_csv(pd.DataFrame(_check_rows(bundle), columns=["preset", "scenario", "check", "status", "verdict",
                                                          "margin"]), args)
    _emit(bundle, args)
    return _exit([f"{r['name']}:{c}" for r in bundle["reports"] for c in r["failures"]])


def _cmd_sweep(args) -> int:
    scenario = _load(args.scenario, args)
    frame = sweep(scenario, args.orders)
    _write_csv(frame, args)
    _emit({"name": scenario.name, "scenario": scenario.to_dict(), "sweep": frame.to_dict(orient="records"),
           "version": __version__}, args)
    return 0


def _cmd_report(args) -> int:
    tol = _parse_tol(args.tol)
    bundles = {preset: run_preset(preset, args.seed, tol) for preset in PRESETS}
    rows = [row for bundle in bundles.values() for row in _check_rows(bundle)]
    _write_csv(pd.DataFrame(rows, columns=["preset", "scenario", "check", "status", "verdict", "margin"]), args)
    failures = [f"{p}/{r['name']}:{c}" for p, b in bundles.items() for r in b["reports"] for c in r["failures"]]
    _emit({"presets": bundles, "passed": not failures, "failures": failures, "version": __version__}, args)
    return _exit(failures)


def _cmd_presets(args) -> int:
    for preset, entry in PRESETS.items():
        print(f"{preset:<22} {len(entry['scenarios']):>2}  {entry['claim']}")
    return 0


def _exit(failures: List[str]) -> int:
    if failures:
        print("failing checks: " + ", ".join(failures), file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--csv", help="also write a CSV table here")
    common.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    common.add_argument("--tol", action="append", metavar="KEY=VALUE", help="override a tolerance")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="wcolab", description="Numerical checks for weighted composition operators")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify phi")
    p.add_argument("scenario", help="scenario JSON file, or - for stdin")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("diagnose", parents=[common], help="run a scenario's checks and the defect report")
    p.add_argument("scenario")
    p.set_defaults(func=_cmd_diagnose)

    p = sub.add_parser("verify", parents=[common], help="run a preset")
    p.add_argument("preset", choices=sorted(PRESETS))
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="defects against the truncation order")
    p.add_argument("scenario")
    p.add_argument("--orders", type=int, nargs="+")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("report", parents=[common], help="run every preset")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("presets", parents=[common], help="list presets")
    p.set_defaults(func=_cmd_presets)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (SchemaError, NotSelfMap) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
