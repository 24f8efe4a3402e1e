"""Numerical verdicts for weighted composition operators.

Finite sections are evidence, not proof: every verdict built on a matrix
truncation is named ``*_CONSISTENT``. The certified outcomes are the ones
resting on closed forms only: NOT_NORMALOID from the kernel norm bound, and
the rule-outs of :func:`normaloid_inequality_check`,
:func:`kernel_modulus_check` and :func:`parabolic_kernel_check`.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.linalg import svdvals
from scipy.optimize import minimize_scalar

from wcolab.constants import (
    BOUNDARY_GRID,
    BOUNDED_BELOW_OVERSAMPLE,
    DEFAULT_ORDER,
    DEFAULT_SEED,
    GELFAND_POWERS,
    INTERIOR_GRID,
    INTERIOR_RADIUS,
    ORBIT_EDGE,
    SAMPLE_PAIRS,
    SAMPLE_RADIUS,
    TOLERANCES,
    WINDING_MAX_ORDER,
    WINDING_NODES,
)
from wcolab.exceptions import (
    BlockTooLarge,
    HypothesesNotMet,
    NonIntegralWinding,
    NotApplicable,
    NotAutomorphism,
    NotParabolicNonAutomorphism,
    PowerIterationStalled,
    TailTooLarge,
    WrongMapClass,
    ZeroNearContour,
)
from wcolab.moebius import (
    LftMap,
    MapKind,
    adjoint_symbols,
    classify,
    evaluate,
    invert,
)
from wcolab.series import (
    PowerSeries,
    SpaceSpec,
    _check_disk,
    differentiate,
    evaluate_series,
    inner_product,
    kernel_norm,
    kernel_value,
    multiply,
    series_tail_bound,
)
from wcolab.symbols import ScaledKernel, SymbolSpec
from wcolab.utils import disk_samples, jacobi_eigh, power_norm, tolerances as merge_tolerances
from wcolab.wco import (
    TruncatedOperator,
    WcoSpec,
    kernel_composed,
    norm_lower_bound,
    symbol_series,
    truncate_operator,
)

logger = logging.getLogger(__name__)

GELFAND_SLACK = 0.05  # Relative gap between |T_N| and the Gelfand estimate still called normaloid
COLLAPSE_RATIO = 1e-3  # sigma_min shrinking by this factor over the sweep reads as "not bounded below"


class Verdict(Enum):
    CONSISTENT = "CONSISTENT"
    VIOLATED = "VIOLATED"
    NOT_APPLICABLE = "NOT_APPLICABLE"


class Hyponormality(Enum):
    NORMAL_CONSISTENT = "NORMAL_CONSISTENT"
    HYPONORMAL_CONSISTENT = "HYPONORMAL_CONSISTENT"
    COHYPONORMAL_CONSISTENT = "COHYPONORMAL_CONSISTENT"
    NEITHER = "NEITHER"


class Normaloid(Enum):
    NORMALOID_CONSISTENT = "NORMALOID_CONSISTENT"
    NOT_NORMALOID = "NOT_NORMALOID"
    INCONCLUSIVE = "INCONCLUSIVE"


class RuleOut(Enum):
    RULED_OUT = "RULED_OUT"
    NOT_RULED_OUT = "NOT_RULED_OUT"


class ParabolicKernel(Enum):
    NORMAL_NOT_RULED_OUT = "NORMAL_NOT_RULED_OUT"
    NORMAL_RULED_OUT = "NORMAL_RULED_OUT"


class BelowTrend(Enum):
    BOUNDED_BELOW_CONSISTENT = "BOUNDED_BELOW_CONSISTENT"
    NOT_BOUNDED_BELOW_CONSISTENT = "NOT_BOUNDED_BELOW_CONSISTENT"


class Invertibility(Enum):
    INVERTIBLE = "INVERTIBLE"
    NOT_INVERTIBLE = "NOT_INVERTIBLE"


@dataclass(frozen=True)
class CheckResult:
    """A verdict with its numeric margin; ``details`` holds both sides of each inequality."""

    verdict: Enum
    margin: float
    details: Dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "margin": self.margin, "details": self.details}


def _kernel_point(op: WcoSpec) -> complex:
    if not isinstance(op.psi, ScaledKernel):
        raise HypothesesNotMet(f"Expected psi = c K_a, got {op.psi!r}")
    return op.psi.w


def _require_lft(op: WcoSpec) -> LftMap:
    if not op.is_lft:
        raise HypothesesNotMet("phi must be a linear-fractional map")
    return op.phi


def _require_gamma(space: SpaceSpec) -> float:
    if space.gamma is None:
        raise HypothesesNotMet(f"{space} has no kernel exponent gamma")
    return space.gamma


def _circle(nodes: int, r: float = 1.0) -> np.ndarray:
    return r * np.exp(2j * np.pi * np.arange(nodes) / nodes)


# ---------------------------------------------------------------- commutators


def self_commutator(T: TruncatedOperator, M: int) -> np.ndarray:
    """Leading M x M block of T*T - TT*, symmetrized.

    T may be tall; its extra rows sharpen the T*T part.
    """
    if M > T.order // 2:
        raise BlockTooLarge(f"Expected M <= N/2 = {T.order // 2}, got M = {M}")
    a = T.matrix
    gram = a[:, :M].conj().T @ a[:, :M]
    outer = a[:M, :] @ a[:M, :].conj().T
    c = gram - outer
    return 0.5 * (c + c.conj().T)


def hermitian_spectrum(H, tol: Optional[float] = None) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in ascending order."""
    return jacobi_eigh(H, tol)[0]


def operator_norm(T: TruncatedOperator, seed: int = DEFAULT_SEED) -> float:
    try:
        return power_norm(T.matrix, seed=seed)[0].value
    except PowerIterationStalled as exc:
        logger.warning("%s; using the lower bound", exc)
        return exc.estimate.value


def hyponormality_verdict(op: WcoSpec, N: int = DEFAULT_ORDER, M: Optional[int] = None,
                          tol: Optional[float] = None, T: Optional[TruncatedOperator] = None) -> CheckResult:
    tol = TOLERANCES["commutator"] if tol is None else tol
    M = N // 8 if M is None else M
    T = truncate_operator(op, N) if T is None else T
    block = self_commutator(T, M)
    eigs = hermitian_spectrum(block)
    scale = max(1.0, operator_norm(T) ** 2)
    lo, hi = float(eigs[0]), float(eigs[-1])
    hypo = lo >= -tol * scale
    cohypo = hi <= tol * scale
    if hypo and cohypo:
        verdict = Hyponormality.NORMAL_CONSISTENT
    elif hypo:
        verdict = Hyponormality.HYPONORMAL_CONSISTENT
    elif cohypo:
        verdict = Hyponormality.COHYPONORMAL_CONSISTENT
    else:
        verdict = Hyponormality.NEITHER
    logger.debug("commutator block M=%d of N=%d: eigenvalues in [%.3g, %.3g]", M, N, lo, hi)
    return CheckResult(
        verdict,
        max(abs(lo), abs(hi)),
        {
            "min_eig": lo,
            "max_eig": hi,
            "frobenius": float(np.linalg.norm(block)),
            "threshold": tol * scale,
            "N": T.order,
            "M": M,
        },
    )


def _norm_tail_sq(f: PowerSeries, space: SpaceSpec) -> float:
    b = space.weights(f.order)
    return float(series_tail_bound(PowerSeries((np.abs(f.coeffs) * b) ** 2), 1.0))


def normality_defect_kernel(op: WcoSpec, w: complex, v: complex, N: int = DEFAULT_ORDER,
                            tol: Optional[float] = None) -> complex:
    """<C K_w, C K_v> - conj(psi(w)) psi(v) K_{phi(w)}(phi(v)); zero for every pair iff C is normal."""
    tol = TOLERANCES["series_tail"] if tol is None else tol
    _check_disk(w)
    _check_disk(v)
    psi = symbol_series(op.psi, N)
    fw = multiply(psi, kernel_composed(op, w, N))
    fv = multiply(psi, kernel_composed(op, v, N))
    lhs = inner_product(fw, fv, op.space)
    tail = math.sqrt(_norm_tail_sq(fw, op.space) * _norm_tail_sq(fv, op.space))
    if tail > tol * max(1.0, abs(lhs)):
        raise TailTooLarge(f"Inner product tail {tail:.3g} at N = {N}; raise N")
    sw, pw = complex(np.conj(op.psi(w))), op.phi_at(w)
    pv = op.phi_at(v)
    rhs = sw * complex(op.psi(v)) * complex(kernel_value(op.space, pw, pv))
    return complex(lhs - rhs)


def kernel_defect_scan(op: WcoSpec, N: int = DEFAULT_ORDER, pairs: int = SAMPLE_PAIRS,
                       radius: float = SAMPLE_RADIUS, seed: int = DEFAULT_SEED,
                       tol: Optional[float] = None) -> CheckResult:
    """Largest kernel normality defect over low-discrepancy (w, v) pairs, relative to max(1, |K_w||K_v|)."""
    tol = TOLERANCES["kernel_defect"] if tol is None else tol
    points = disk_samples(pairs, radius, seed, dim=2)
    worst, worst_raw, at = 0.0, 0.0, (0j, 0j)
    for w, v in points:
        d = abs(normality_defect_kernel(op, w, v, N))
        rel = d / max(1.0, kernel_norm(op.space, w) * kernel_norm(op.space, v))
        if rel >= worst:
            worst, worst_raw, at = rel, d, (complex(w), complex(v))
    verdict = Verdict.CONSISTENT if worst <= tol else Verdict.VIOLATED
    return CheckResult(
        verdict,
        tol - worst,
        {"max_defect": worst_raw, "max_relative": worst, "at": [_pair(at[0]), _pair(at[1])], "pairs": pairs},
    )


def _pair(z: complex) -> List[float]:
    return [z.real, z.imag]


# --------------------------------------------------------------- spectral radius


def spectral_radius_closed(op: WcoSpec) -> float:
    """|psi(zeta)| phi'(zeta)^(-gamma/2) at the boundary Denjoy-Wolff point zeta."""
    phi = _require_lft(op)
    gamma = _require_gamma(op.space)
    cls = classify(phi)
    if cls.kind in (MapKind.IDENTITY, MapKind.ELLIPTIC_AUTOMORPHISM) or not cls.boundary_denjoy_wolff:
        raise HypothesesNotMet(f"{cls.kind.value} map without a boundary Denjoy-Wolff point")
    if not op.psi.radius > 1:
        raise HypothesesNotMet(f"psi is not analytic across the unit circle (radius {op.psi.radius:.6g})")
    zeta, deriv = cls.denjoy_wolff
    return float(abs(op.psi(zeta)) * deriv.real ** (-gamma / 2))


@dataclass(frozen=True)
class GelfandEstimate:
    value: float
    sequence: tuple
    metric: str = "gelfand"

    def to_frame(self) -> pd.DataFrame:
        k = np.arange(1, len(self.sequence) + 1)
        return pd.DataFrame({"k": k, "metric": self.metric, "value": self.sequence})


def spectral_radius_gelfand(T: TruncatedOperator, k_max: int = GELFAND_POWERS) -> GelfandEstimate:
    """|T_N^k|^(1/k) for k = 1..k_max, with T_N^k carried as a scaled product.

    This is the spectral radius of the section, not of the operator: for a
    polynomial section of order N every power is bounded by a power of sqrt(N),
    so the sequence cannot climb much above 1 once k is large. Use
    :func:`spectral_radius_orbit` for the operator itself.
    """
    if k_max < 1:
        raise ValueError(f"Expected k_max >= 1, got {k_max}")
    a = T.matrix[: T.order, :]
    power = np.eye(a.shape[0], dtype=complex)
    log_scale = 0.0
    seq = []
    for k in range(1, k_max + 1):
        power = a @ power
        s = float(svdvals(power, check_finite=False)[0])
        if s == 0:
            seq.extend([0.0] * (k_max - k + 1))
            break
        power /= s
        log_scale += math.log(s)
        seq.append(math.exp(log_scale / k))
    return GelfandEstimate(seq[-1], tuple(seq))


def spectral_radius_orbit(op: WcoSpec, samples: Sequence[complex],
                          k_max: int = GELFAND_POWERS) -> GelfandEstimate:
    """Root test on |C^{*k} K_w| along kernel orbits, with no truncation.

    For a linear-fractional phi, C^{*k} K_w = conj(psi(z_0) ... psi(z_{k-1})) K_{z_k}
    with z_j = phi_j(w), so |C^{*k}| >= prod |psi(z_j)| |K_{z_k}| / |K_w| exactly.
    Each orbit stops at k_max or when it comes within ORBIT_EDGE of the circle;
    the growth rate is read off the second half of the orbit and the largest
    rate over the samples is returned.
    """
    phi = _require_lft(op)
    if k_max < 2:
        raise ValueError(f"Expected k_max >= 2, got {k_max}")
    best, best_logs = -math.inf, None
    for w in samples:
        _check_disk(w)
        z = complex(w)
        base = math.log(kernel_norm(op.space, z))
        logs, acc = [0.0], 0.0
        for _ in range(k_max):
            p = abs(complex(op.psi(z)))
            if p == 0:
                break
            acc += math.log(p)
            z = complex(evaluate(phi, z))
            if not abs(z) < 1 - ORBIT_EDGE:
                break
            logs.append(acc + math.log(kernel_norm(op.space, z)) - base)
        k = len(logs) - 1
        if k < 2:
            continue
        h = k // 2
        rate = (logs[k] - logs[h]) / (k - h)
        if rate > best:
            best, best_logs = rate, logs
    if best_logs is None:
        raise HypothesesNotMet("no kernel orbit stays inside the disk for two steps")
    logger.debug("kernel orbit root test: %d steps, rate %.6g", len(best_logs) - 1, best)
    sequence = tuple(math.exp(v / j) for j, v in enumerate(best_logs) if j)
    return GelfandEstimate(math.exp(best), sequence, "gelfand_orbit")


def normaloid_verdict(op: WcoSpec, samples: Sequence[complex], N: int = DEFAULT_ORDER,
                      k_max: int = GELFAND_POWERS, tol: Optional[float] = None,
                      T: Optional[TruncatedOperator] = None) -> CheckResult:
    """NOT_NORMALOID is certified when the kernel bound beats the closed-form spectral radius."""
    tol = TOLERANCES["normaloid"] if tol is None else tol
    bound = norm_lower_bound(op, samples)
    try:
        radius = spectral_radius_closed(op)
    except HypothesesNotMet:
        radius = None
    if radius is not None:
        details = {"norm_lower_bound": bound, "spectral_radius": radius, "mode": "closed-form"}
        if bound > radius * (1 + tol):
            return CheckResult(Normaloid.NOT_NORMALOID, bound - radius, details)
        return CheckResult(Normaloid.NORMALOID_CONSISTENT, radius - bound, details)

    T = truncate_operator(op, N) if T is None else T
    gelfand = spectral_radius_gelfand(T, k_max).value
    norm = operator_norm(T)
    details = {"norm_lower_bound": bound, "section_norm": norm, "gelfand": gelfand, "mode": "gelfand"}
    gap = norm - gelfand
    if gap <= GELFAND_SLACK * max(gelfand, 1e-300):
        return CheckResult(Normaloid.NORMALOID_CONSISTENT, -gap, details)
    return CheckResult(Normaloid.INCONCLUSIVE, -gap, details)


# ------------------------------------------------------------- kernel symbols


def _boundary_dw(phi: LftMap):
    cls = classify(phi)
    if not cls.boundary_denjoy_wolff or cls.kind in (MapKind.IDENTITY, MapKind.ELLIPTIC_AUTOMORPHISM):
        return cls, None
    return cls, cls.denjoy_wolff


def normaloid_inequality_check(op: WcoSpec, tol: Optional[float] = None) -> CheckResult:
    """(1 - |phi(a)|^2)(1 + |a|)/(1 - |a|) >= phi'(zeta) for psi = c K_a, else not normaloid."""
    tol = TOLERANCES["identity"] if tol is None else tol
    a = _kernel_point(op)
    phi = _require_lft(op)
    cls, dw = _boundary_dw(phi)
    if dw is None:
        return CheckResult(Verdict.NOT_APPLICABLE, 0.0, {"kind": cls.kind.value})
    zeta, deriv = dw
    pa = abs(evaluate(phi, a))
    lhs = (1 - pa**2) * (1 + abs(a)) / (1 - abs(a))
    rhs = deriv.real
    details = {"lhs": lhs, "rhs": rhs, "zeta": _pair(zeta)}
    ok = lhs >= rhs - tol
    if abs(rhs - 1) <= tol:
        left, right = 2 * abs(a), pa**2 * (1 + abs(a))
        details["parabolic_lhs"] = left
        details["parabolic_rhs"] = right
        ok = ok and left >= right - tol
    return CheckResult(Verdict.CONSISTENT if ok else Verdict.VIOLATED, lhs - rhs, details)


def kernel_modulus_check(op: WcoSpec, hyponormality: Optional[Hyponormality] = None,
                         tol: Optional[float] = None) -> CheckResult:
    """|phi(0)| against |a| for psi = c K_a.

    Cohyponormal needs |phi(0)| >= |a|, hyponormal needs |phi(0)| <= |a|, normal
    needs equality. VIOLATED means a numerically normal section contradicts this.
    """
    tol = TOLERANCES["modulus"] if tol is None else tol
    a = _kernel_point(op)
    diff = abs(op.phi_at(0)) - abs(a)

    def rule(ok):
        return (RuleOut.NOT_RULED_OUT if ok else RuleOut.RULED_OUT).value

    details = {
        "phi0_minus_a": diff,
        "normal": rule(abs(diff) <= tol),
        "hyponormal": rule(diff <= tol),
        "cohyponormal": rule(diff >= -tol),
    }
    if hyponormality is not None:
        details["section_verdict"] = hyponormality.value
    if hyponormality is Hyponormality.NORMAL_CONSISTENT and abs(diff) > tol:
        logger.warning("numerically normal section with |phi(0)| - |a| = %.3g", diff)
        return CheckResult(Verdict.VIOLATED, -abs(diff), details)
    return CheckResult(Verdict.CONSISTENT, tol - abs(diff), details)


def parabolic_kernel_check(op: WcoSpec, tol: Optional[float] = None) -> CheckResult:
    """For psi = c K_a, normality needs phi parabolic non-automorphism with |a| = |t/(2+t)| = |sigma(0)|."""
    tol = TOLERANCES["parabolic"] if tol is None else tol
    a = _kernel_point(op)
    phi = _require_lft(op)
    gamma = _require_gamma(op.space)
    cls = classify(phi)
    if cls.kind is not MapKind.NON_AUTO_BOUNDARY_CONTACT:
        raise NotParabolicNonAutomorphism(f"phi is {cls.kind.value}")
    if not cls.parabolic:
        return CheckResult(ParabolicKernel.NORMAL_RULED_OUT, -math.inf, {"parabolic": False})
    t = cls.translation_number
    sigma, _, _ = adjoint_symbols(phi, gamma)
    ratio = abs(t / (2 + t))
    s0 = abs(evaluate(sigma, 0))
    gap = max(abs(abs(a) - ratio), abs(ratio - s0))
    details = {"abs_a": abs(a), "abs_t_ratio": ratio, "abs_sigma0": s0, "t": _pair(t)}
    verdict = ParabolicKernel.NORMAL_NOT_RULED_OUT if gap <= tol else ParabolicKernel.NORMAL_RULED_OUT
    return CheckResult(verdict, tol - gap, details)


# ------------------------------------------------------------ boundary weights


@dataclass(frozen=True)
class BoundaryWeight:
    """w(z) = (1 - conj(a) z)^gamma psi(z) with phi(a) = 0."""

    a: complex
    gamma: float
    psi: SymbolSpec

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return (1 - np.conj(self.a) * z) ** self.gamma * self.psi(z)


def boundary_weight(op: WcoSpec) -> BoundaryWeight:
    phi = _require_lft(op)
    if not classify(phi).is_automorphism:
        raise NotAutomorphism(f"{phi!r} is not a disk automorphism")
    gamma = _require_gamma(op.space)
    return BoundaryWeight(evaluate(invert(phi), 0), gamma, op.psi)


def _refine(f, theta: float, h: float, sign: float) -> float:
    res = minimize_scalar(lambda t: sign * f(t), bounds=(theta - h, theta + h), method="bounded",
                          options={"xatol": 1e-12})
    return float(res.x)


@dataclass(frozen=True, eq=False)
class BoundaryProfile:
    theta: np.ndarray
    modulus: np.ndarray
    modulus_image: np.ndarray
    hyponormal_margin: float
    cohyponormal_margin: float
    constant: bool
    argmax: float
    argmin: float
    fixed_point_distance: Optional[float]
    level_set_fraction: float

    @property
    def extrema_at_fixed_points(self) -> bool:
        step = 2 * np.pi / self.theta.size
        return self.fixed_point_distance is not None and self.fixed_point_distance <= step

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"theta": self.theta, "w": self.modulus, "w_phi": self.modulus_image})

    def to_dict(self) -> dict:
        return {
            "hyponormal_margin": self.hyponormal_margin,
            "cohyponormal_margin": self.cohyponormal_margin,
            "constant": self.constant,
            "argmax": self.argmax,
            "argmin": self.argmin,
            "fixed_point_distance": self.fixed_point_distance,
            "extrema_at_fixed_points": self.extrema_at_fixed_points,
            "level_set_fraction": self.level_set_fraction,
        }


def boundary_weight_profile(op: WcoSpec, grid_size: int = BOUNDARY_GRID,
                            tol: Optional[float] = None) -> BoundaryProfile:
    """|w| on the circle against |w o phi|, with extrema located and compared to the fixed points."""
    tol = TOLERANCES["profile"] if tol is None else tol
    weight = boundary_weight(op)
    if not op.psi.radius > 1:
        raise HypothesesNotMet("psi must be analytic on the closed disk")
    theta = 2 * np.pi * np.arange(grid_size) / grid_size
    zeta = np.exp(1j * theta)
    mod = np.abs(weight(zeta))
    mod_img = np.abs(weight(evaluate(op.phi, zeta)))
    diff = mod - mod_img
    top = float(np.max(mod))
    constant = bool(top - np.min(mod) <= tol * max(1.0, top))

    def modulus(t):
        return float(abs(weight(np.exp(1j * t))))

    h = 2 * np.pi / grid_size
    argmax = _refine(modulus, theta[np.argmax(mod)], h, -1.0) % (2 * np.pi)
    argmin = _refine(modulus, theta[np.argmin(mod)], h, 1.0) % (2 * np.pi)

    fixed = [fp.value for fp in classify(op.phi).fixed_points
             if not fp.infinite and abs(abs(fp.value) - 1) <= TOLERANCES["geometry"]]
    distance = None
    if fixed and not constant:
        distance = max(
            min(abs(np.exp(1j * argmax) - z) for z in fixed),
            min(abs(np.exp(1j * argmin) - z) for z in fixed),
        )
    near = (np.abs(mod - top) <= tol * max(1.0, top)) | (np.abs(mod - np.min(mod)) <= tol * max(1.0, top))
    return BoundaryProfile(
        theta=theta,
        modulus=mod,
        modulus_image=mod_img,
        hyponormal_margin=float(np.min(diff)),
        cohyponormal_margin=float(np.min(-diff)),
        constant=constant,
        argmax=argmax,
        argmin=argmin,
        fixed_point_distance=distance,
        level_set_fraction=float(np.mean(near)),
    )


def weight_chain(op: WcoSpec, zeta: complex, n: int, tol: Optional[float] = None):
    """|w(phi_k(zeta))| for k = 0..n and whether the chain is nondecreasing."""
    tol = TOLERANCES["profile"] if tol is None else tol
    weight = boundary_weight(op)
    z = complex(zeta)
    values = []
    for _ in range(n + 1):
        values.append(float(abs(weight(z))))
        z = evaluate(op.phi, z)
    steps = np.diff(values)
    return values, bool(np.all(steps >= -tol * max(1.0, max(values))))


def eigen_weight_check(op: WcoSpec, r: float = INTERIOR_RADIUS, nodes: int = INTERIOR_GRID) -> float:
    """sup |w(phi(z)) - w(z)| on |z| = r; zero when w is a fixed vector of C_phi."""
    weight = boundary_weight(op)
    kind = classify(op.phi).kind
    if kind in (MapKind.IDENTITY, MapKind.ELLIPTIC_AUTOMORPHISM):
        raise NotApplicable(f"phi is {kind.value}")
    z = _circle(nodes, r)
    return float(np.max(np.abs(weight(evaluate(op.phi, z)) - weight(z))))


def normal_identity_residual(op: WcoSpec, r: float = INTERIOR_RADIUS, nodes: int = INTERIOR_GRID) -> float:
    """sup over |z| = r of |psi (g o phi) - psi(0) |K_{sigma(0)}|^2|.

    Zero exactly when psi is the normal symbol psi(0) K_{sigma(0)} of the automorphism phi.
    """
    phi = _require_lft(op)
    gamma = _require_gamma(op.space)
    sigma, g, _ = adjoint_symbols(phi, gamma)
    target = kernel_norm(op.space, evaluate(sigma, 0)) ** 2 * complex(op.psi(0))
    z = _circle(nodes, r)
    return float(np.max(np.abs(op.psi(z) * g(evaluate(phi, z)) - target)))


@dataclass(frozen=True)
class NormalSymbol:
    psi: ScaledKernel
    sigma0: complex
    residual: float


def normal_symbol_for(phi: LftMap, psi0: complex, space: Optional[SpaceSpec] = None,
                      r: float = INTERIOR_RADIUS, nodes: int = INTERIOR_GRID) -> NormalSymbol:
    """psi = psi0 K_{sigma(0)}, the weight making C_{psi,phi} normal, with its identity residual.

    The residual is sup |psi (g o phi) - |K_{sigma(0)}|^2 psi0| / |psi0 K_{sigma(0)}|^2
    over |z| = r.
    """
    space = SpaceSpec.hardy() if space is None else space
    gamma = _require_gamma(space)
    kind = classify(phi).kind
    if kind not in (MapKind.HYPERBOLIC_AUTOMORPHISM, MapKind.PARABOLIC_AUTOMORPHISM):
        raise WrongMapClass(f"Expected a hyperbolic or parabolic automorphism, got {kind.value}")
    psi0 = complex(psi0)
    if psi0 == 0:
        raise ValueError("Expected psi0 != 0")
    sigma, _, _ = adjoint_symbols(phi, gamma)
    s0 = evaluate(sigma, 0)
    psi = ScaledKernel(psi0, s0, space)
    target = kernel_norm(space, s0) ** 2 * psi0
    residual = normal_identity_residual(WcoSpec(psi, phi, space), r, nodes) / abs(target)
    logger.debug("normal symbol for %r: sigma(0) = %s, residual %.3g", phi, s0, residual)
    return NormalSymbol(psi, s0, residual)


# ------------------------------------------------------------------- zeros


def _log_derivative(psi: SymbolSpec, z: np.ndarray, values: np.ndarray) -> np.ndarray:
    """psi'/psi on ``z`` with psi' summed from the differentiated Taylor series."""
    order = DEFAULT_ORDER
    while True:
        try:
            deriv, _ = evaluate_series(differentiate(symbol_series(psi, order)), z)
            return deriv / values
        except TailTooLarge:
            if order >= WINDING_MAX_ORDER:
                raise
            order *= 2
            logger.debug("psi' series not settled on the contour; retrying at order %d", order)


def _winding(psi: SymbolSpec, r: float, nodes: int, tol: Optional[float] = None) -> int:
    tol = TOLERANCES["winding"] if tol is None else tol
    z = _circle(nodes, r)
    values = np.asarray(psi(z), dtype=complex)
    floor = float(np.min(np.abs(values)))
    if floor < TOLERANCES["zero_contour"]:
        raise ZeroNearContour(f"min |psi| = {floor:.3g} on |z| = {r}")
    winding = np.mean(z * _log_derivative(psi, z, values))
    count = int(round(winding.real))
    residual = abs(winding - count)
    if residual >= tol:
        raise NonIntegralWinding(f"winding {winding:.6g} is {residual:.3g} from an integer")
    return count


def zero_count(psi: SymbolSpec, r: float, N: int = WINDING_NODES, tol: Optional[float] = None) -> int:
    """Zeros of psi in |z| < r by the argument principle.

    The mean of z psi'/psi over the circle is the winding number; psi' comes
    from the differentiated Taylor series of psi.
    """
    if not 0 < r < 1:
        raise ValueError(f"Expected 0 < r < 1, got {r}")
    return _winding(psi, r, max(N, WINDING_NODES), tol)


def _boundary_zeros(psi: SymbolSpec, grid_size: int) -> List[complex]:
    theta = 2 * np.pi * np.arange(grid_size) / grid_size
    mod = np.abs(psi(np.exp(1j * theta)))
    h = 2 * np.pi / grid_size
    local = (mod <= np.roll(mod, 1)) & (mod <= np.roll(mod, -1)) & (mod < 10 * h * (1 + np.max(mod)))
    zeros = []
    for k in np.flatnonzero(local):
        t = _refine(lambda s: float(abs(psi(np.exp(1j * s)))), theta[k], h, 1.0)
        z = complex(np.exp(1j * t))
        if abs(psi(z)) < TOLERANCES["zero_contour"] and all(abs(z - y) > h for y in zeros):
            zeros.append(z)
    return zeros


def boundary_zero_check(op: WcoSpec, grid_size: int = BOUNDARY_GRID) -> CheckResult:
    """A boundary zero of psi must be a fixed point of phi other than its Denjoy-Wolff point.

    For a non-hyperbolic automorphism psi must be zero-free on the closed disk.
    """
    if not op.is_lft or not classify(op.phi).is_automorphism or not op.psi.radius > 1:
        return CheckResult(Verdict.NOT_APPLICABLE, 0.0, {})
    cls = classify(op.phi)
    zeros = _boundary_zeros(op.psi, grid_size)
    dw = cls.denjoy_wolff[0] if cls.denjoy_wolff else None
    fixed_tol = 1e-6
    bad = []
    for z in zeros:
        moved = abs(evaluate(op.phi, z) - z)
        if moved > fixed_tol or (dw is not None and abs(z - dw) <= fixed_tol):
            bad.append(z)
    details = {"boundary_zeros": [_pair(z) for z in zeros], "inadmissible": [_pair(z) for z in bad],
               "kind": cls.kind.value}
    if cls.kind is not MapKind.HYPERBOLIC_AUTOMORPHISM:
        details["interior_zeros"] = _winding(op.psi, 1.0, WINDING_NODES) if not zeros else None
        if zeros or details["interior_zeros"]:
            return CheckResult(Verdict.VIOLATED, -1.0, details)
        return CheckResult(Verdict.CONSISTENT, 0.0, details)
    if bad:
        return CheckResult(Verdict.VIOLATED, -float(len(bad)), details)
    return CheckResult(Verdict.CONSISTENT, float(len(zeros)), details)


def invertibility_check(op: WcoSpec, grid_size: int = BOUNDARY_GRID) -> CheckResult:
    """Invertible iff phi is an automorphism and psi is bounded away from zero on the disk."""
    phi = _require_lft(op)
    _require_gamma(op.space)
    auto = classify(phi).is_automorphism
    r = 1.0 if op.psi.radius > 1 else op.psi.radius * (1 - 1e-9)
    values = np.abs(op.psi(_circle(grid_size, r)))
    floor = float(np.min(values))
    inside = None
    if floor >= TOLERANCES["zero_contour"]:
        inside = _winding(op.psi, r, max(grid_size, WINDING_NODES))
    invertible = auto and inside == 0
    details = {"automorphism": auto, "min_boundary_modulus": floor, "interior_zeros": inside}
    verdict = Invertibility.INVERTIBLE if invertible else Invertibility.NOT_INVERTIBLE
    return CheckResult(verdict, floor, details)


# ------------------------------------------------------------- bounded below


@dataclass(frozen=True)
class BoundedBelowTrend:
    orders: tuple
    sigma_min: tuple
    verdict: BelowTrend

    @property
    def floor(self) -> float:
        return min(self.sigma_min)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"N": self.orders, "metric": "sigma_min", "value": self.sigma_min})

    def to_dict(self) -> dict:
        return {"orders": list(self.orders), "sigma_min": list(self.sigma_min),
                "floor": self.floor, "verdict": self.verdict.value}


def smallest_singular_value(T: TruncatedOperator) -> float:
    gram = T.matrix.conj().T @ T.matrix
    return math.sqrt(max(float(hermitian_spectrum(0.5 * (gram + gram.conj().T))[0]), 0.0))


def bounded_below_probe(op: WcoSpec, N_list: Sequence[int],
                        oversample: int = BOUNDED_BELOW_OVERSAMPLE) -> BoundedBelowTrend:
    """sigma_min of the first N columns over increasing N; evidence only."""
    orders = tuple(int(n) for n in N_list)
    values = tuple(
        smallest_singular_value(truncate_operator(op, n, rows=oversample * n)) for n in orders
    )
    collapsing = values[-1] < COLLAPSE_RATIO * values[0] or values[-1] == 0
    verdict = BelowTrend.NOT_BOUNDED_BELOW_CONSISTENT if collapsing else BelowTrend.BOUNDED_BELOW_CONSISTENT
    return BoundedBelowTrend(orders, values, verdict)


# ------------------------------------------------------------------- report


@dataclass(frozen=True)
class DefectReport:
    commutator_min_eig: float
    commutator_max_eig: float
    frobenius_defect: float
    kernel_defect_max: float
    norm_lower_bound: float
    spectral_radius_closed: Optional[float]
    spectral_radius_gelfand: float
    verdicts: Dict[str, CheckResult]
    config: Dict

    def to_dict(self) -> dict:
        return {
            "commutator_min_eig": self.commutator_min_eig,
            "commutator_max_eig": self.commutator_max_eig,
            "frobenius_defect": self.frobenius_defect,
            "kernel_defect_max": self.kernel_defect_max,
            "norm_lower_bound": self.norm_lower_bound,
            "spectral_radius_closed": self.spectral_radius_closed,
            "spectral_radius_gelfand": self.spectral_radius_gelfand,
            "verdicts": {k: v.to_dict() for k, v in sorted(self.verdicts.items())},
            "config": self.config,
        }

    def to_frame(self) -> pd.DataFrame:
        rows = [
            (name, getattr(self, name))
            for name in (
                "commutator_min_eig",
                "commutator_max_eig",
                "frobenius_defect",
                "kernel_defect_max",
                "norm_lower_bound",
                "spectral_radius_closed",
                "spectral_radius_gelfand",
            )
        ]
        return pd.DataFrame(rows, columns=["metric", "value"])


def defect_report(op: WcoSpec, N: int = DEFAULT_ORDER, M: Optional[int] = None,
                  seed: int = DEFAULT_SEED, k_max: int = GELFAND_POWERS,
                  pairs: int = SAMPLE_PAIRS, tolerances: Optional[Dict[str, float]] = None) -> DefectReport:
    tol = merge_tolerances(tolerances)
    M = N // 8 if M is None else M
    T = truncate_operator(op, N)
    hypo = hyponormality_verdict(op, N, M, tol["commutator"], T=T)
    kernel = kernel_defect_scan(op, N, pairs, SAMPLE_RADIUS, seed, tol["kernel_defect"])
    samples = disk_samples(pairs, SAMPLE_RADIUS, seed)[:, 0]
    normaloid = normaloid_verdict(op, samples, N, k_max, tol["normaloid"], T=T)
    try:
        closed = spectral_radius_closed(op)
    except HypothesesNotMet:
        closed = None
    gelfand = spectral_radius_gelfand(T, k_max)
    return DefectReport(
        commutator_min_eig=hypo.details["min_eig"],
        commutator_max_eig=hypo.details["max_eig"],
        frobenius_defect=hypo.details["frobenius"],
        kernel_defect_max=kernel.details["max_defect"],
        norm_lower_bound=norm_lower_bound(op, samples),
        spectral_radius_closed=closed,
        spectral_radius_gelfand=gelfand.value,
        verdicts={"hyponormality": hypo, "kernel_defect": kernel, "normaloid": normaloid},
        config={"N": N, "M": M, "seed": seed, "k_max": k_max, "pairs": pairs, "tolerances": tol},
    )
