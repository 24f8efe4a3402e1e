"""Linear-fractional self-maps of the unit disk.

An :class:`LftMap` is z -> (az + b)/(cz + d) with ad - bc != 0, stored with
its largest-modulus coefficient scaled to 1. The module gives the group
operations, an exact self-map test from the image circle, fixed points and
their classification, parabolic and hyperbolic constructors, orbits and the
adjoint symbols sigma, g, h with C_phi* = T_g C_sigma T_h*.
"""

import cmath
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
import sympy

from wcolab.constants import ORBIT_REVISIT, TOLERANCES
from wcolab.exceptions import (
    BadFixedPoint,
    BadTranslation,
    NotAutomorphism,
    NotParabolic,
    NotSelfMap,
    PointNotInDisk,
    PoleHit,
)
from wcolab.series import PowerSeries, RationalPower
from wcolab.symbols import RationalPowerSymbol

logger = logging.getLogger(__name__)

_POLE_THRESHOLD = 1e-14


class LftMap:
    """z -> (az + b)/(cz + d)."""

    __slots__ = ("coeffs",)

    def __init__(self, a: complex, b: complex, c: complex, d: complex):
        coeffs = np.array([a, b, c, d], dtype=complex)
        if not np.all(np.isfinite(coeffs)):
            raise ValueError(f"Expected finite coefficients, got {coeffs}")
        scale = np.max(np.abs(coeffs))
        if scale == 0:
            raise ValueError("Expected ad - bc != 0, got the zero matrix")
        coeffs = coeffs / coeffs[np.argmax(np.abs(coeffs))]
        a, b, c, d = coeffs
        if abs(a * d - b * c) < 1e-14:
            raise ValueError(f"Expected ad - bc != 0, got {a * d - b * c:.3g}")
        coeffs.setflags(write=False)
        self.coeffs = coeffs

    @classmethod
    def identity(cls) -> "LftMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, m) -> "LftMap":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def a(self) -> complex:
        return complex(self.coeffs[0])

    @property
    def b(self) -> complex:
        return complex(self.coeffs[1])

    @property
    def c(self) -> complex:
        return complex(self.coeffs[2])

    @property
    def d(self) -> complex:
        return complex(self.coeffs[3])

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def matrix(self) -> np.ndarray:
        return self.coeffs.reshape(2, 2)

    def __call__(self, z):
        return evaluate(self, z)

    def is_close(self, other: "LftMap", tol: float = 1e-12) -> bool:
        """Equality up to a scalar multiple of the coefficient vector."""
        u, v = self.coeffs, other.coeffs
        lam = np.vdot(v, u) / np.vdot(v, v)
        return bool(np.linalg.norm(u - lam * v) <= tol * np.linalg.norm(u))

    def series(self, N: int) -> PowerSeries:
        """Taylor coefficients at 0; requires d != 0."""
        a, b, c, d = self.coeffs
        if d == 0:
            raise PoleHit("The map has a pole at 0")
        geo = np.power(-c / d, np.arange(N + 1)) / d
        out = b * geo
        out[1:] += a * geo[:-1]
        return PowerSeries(out)

    @property
    def formula(self) -> str:
        """Human-readable rendering, coefficients rationalized where they are close to simple fractions."""
        z = sympy.Symbol("z")
        coeffs = self.coeffs / self.coeffs[3] if self.coeffs[3] != 0 else self.coeffs
        a, b, c, d = (_exact(x) for x in coeffs)
        return str(sympy.cancel((a * z + b) / (c * z + d)))

    def to_list(self) -> List[List[float]]:
        return [[x.real, x.imag] for x in self.coeffs]

    def __str__(self):
        return self.formula

    def __repr__(self):
        return "LftMap({}, {}, {}, {})".format(*(f"{x:.6g}" for x in self.coeffs))


def _exact(x: complex):
    re = sympy.nsimplify(float(x.real), rational=True, tolerance=1e-12)
    im = sympy.nsimplify(float(x.imag), rational=True, tolerance=1e-12)
    return re + sympy.I * im


class MapKind(Enum):
    IDENTITY = "Identity"
    ELLIPTIC_AUTOMORPHISM = "EllipticAutomorphism"
    HYPERBOLIC_AUTOMORPHISM = "HyperbolicAutomorphism"
    PARABOLIC_AUTOMORPHISM = "ParabolicAutomorphism"
    NON_AUTO_INTERIOR_CLOSURE = "NonAutoInteriorClosure"
    NON_AUTO_BOUNDARY_CONTACT = "NonAutoBoundaryContact"

    @property
    def is_automorphism(self) -> bool:
        return self in (
            MapKind.IDENTITY,
            MapKind.ELLIPTIC_AUTOMORPHISM,
            MapKind.HYPERBOLIC_AUTOMORPHISM,
            MapKind.PARABOLIC_AUTOMORPHISM,
        )


@dataclass(frozen=True)
class FixedPoint:
    """A fixed point on the Riemann sphere; ``infinite`` marks the point at infinity."""

    value: complex = 0j
    infinite: bool = False

    def to_json(self):
        return "inf" if self.infinite else [self.value.real, self.value.imag]

    def __str__(self):
        return "∞" if self.infinite else f"{self.value:.6g}"


@dataclass(frozen=True)
class MapClassification:
    kind: MapKind
    fixed_points: Tuple[FixedPoint, ...] = ()
    denjoy_wolff: Optional[Tuple[complex, complex]] = None
    translation_number: Optional[complex] = None
    boundary_contact: Optional[Tuple[complex, complex]] = None
    parabolic: bool = False

    @property
    def is_automorphism(self) -> bool:
        return self.kind.is_automorphism

    @property
    def boundary_denjoy_wolff(self) -> bool:
        return self.denjoy_wolff is not None and abs(abs(self.denjoy_wolff[0]) - 1) <= TOLERANCES["geometry"]

    def to_dict(self) -> dict:
        def pair(x):
            return None if x is None else [x.real, x.imag]

        return {
            "kind": self.kind.value,
            "fixed_points": [fp.to_json() for fp in self.fixed_points],
            "denjoy_wolff": None
            if self.denjoy_wolff is None
            else {"point": pair(self.denjoy_wolff[0]), "derivative": pair(self.denjoy_wolff[1])},
            "translation_number": pair(self.translation_number),
            "boundary_contact": None
            if self.boundary_contact is None
            else {"zeta": pair(self.boundary_contact[0]), "eta": pair(self.boundary_contact[1])},
            "parabolic": self.parabolic,
        }


@dataclass(frozen=True)
class Orbit:
    points: Tuple[complex, ...]
    finite: bool
    period: Optional[int] = None


def evaluate(m: LftMap, z):
    a, b, c, d = m.coeffs
    z = np.asarray(z, dtype=complex)
    den = c * z + d
    if np.any(np.abs(den) <= _POLE_THRESHOLD * np.maximum(1.0, np.abs(z))):
        raise PoleHit(f"cz + d vanishes at z = {z}")
    out = (a * z + b) / den
    return complex(out) if out.ndim == 0 else out


def derivative_at(m: LftMap, z):
    a, b, c, d = m.coeffs
    z = np.asarray(z, dtype=complex)
    den = c * z + d
    if np.any(np.abs(den) <= _POLE_THRESHOLD * np.maximum(1.0, np.abs(z))):
        raise PoleHit(f"cz + d vanishes at z = {z}")
    out = (a * d - b * c) / den**2
    return complex(out) if out.ndim == 0 else out


def compose(m1: LftMap, m2: LftMap) -> LftMap:
    """m1 after m2."""
    return LftMap.from_matrix(m1.matrix @ m2.matrix)


def invert(m: LftMap) -> LftMap:
    a, b, c, d = m.coeffs
    return LftMap(d, -b, -c, a)


def iterate(m: LftMap, n: int) -> LftMap:
    """phi_n, the n-fold composition."""
    out = LftMap.identity()
    for _ in range(n):
        out = compose(m, out)
    return out


def image_disk(m: LftMap, tol: Optional[float] = None) -> Optional[Tuple[complex, float]]:
    """Center and radius of the image of the unit disk, or None when it is unbounded.

    With the pole -d/c outside the closed disk the unit circle maps to the circle
    with center (b conj(d) - a conj(c)) / (|d|^2 - |c|^2) and radius
    |ad - bc| / (|d|^2 - |c|^2), and the disk maps onto its inside.
    """
    tol = TOLERANCES["geometry"] if tol is None else tol
    a, b, c, d = m.coeffs
    gap = abs(d) ** 2 - abs(c) ** 2
    if gap <= tol:
        return None
    center = (b * np.conj(d) - a * np.conj(c)) / gap
    radius = abs(a * d - b * c) / gap
    return complex(center), float(radius)


def is_self_map(m: LftMap, tol: Optional[float] = None) -> bool:
    tol = TOLERANCES["geometry"] if tol is None else tol
    disk = image_disk(m, tol)
    if disk is None:
        return False
    center, radius = disk
    return abs(center) + radius <= 1 + tol


def is_automorphism(m: LftMap, tol: Optional[float] = None) -> bool:
    tol = TOLERANCES["geometry"] if tol is None else tol
    disk = image_disk(m, tol)
    if disk is None:
        return False
    center, radius = disk
    return abs(center) <= tol and abs(radius - 1) <= tol


def _is_identity(m: LftMap, tol: float) -> bool:
    a, b, c, d = m.coeffs
    return abs(b) <= tol and abs(c) <= tol and abs(a - d) <= tol


def _double_root(m: LftMap, tol: float) -> bool:
    """(a + d)^2 = 4(ad - bc): the two fixed points coincide."""
    a, b, c, d = m.coeffs
    return abs((a + d) ** 2 / m.det - 4) <= tol


def fixed_points(m: LftMap, tol: Optional[float] = None) -> Tuple[FixedPoint, ...]:
    """Roots of c z^2 + (d - a) z - b = 0; a double root is listed once."""
    tol = TOLERANCES["geometry"] if tol is None else tol
    a, b, c, d = (complex(x) for x in m.coeffs)
    if _is_identity(m, tol):
        return ()
    if abs(c) <= tol:
        if abs(d - a) <= tol:
            return (FixedPoint(infinite=True),)
        return FixedPoint(b / (d - a)), FixedPoint(infinite=True)
    B, C = d - a, -b
    if _double_root(m, tol):
        return (FixedPoint(-B / (2 * c)),)
    root = cmath.sqrt(B * B - 4 * c * C)
    s = B + root if abs(B + root) >= abs(B - root) else B - root
    q = -s / 2
    return FixedPoint(q / c), FixedPoint(C / q)


def _translation(m: LftMap, zeta: complex) -> complex:
    phi0 = evaluate(m, 0)
    return 2 * phi0 / (zeta - phi0)


def classify(m: LftMap, tol: Optional[float] = None) -> MapClassification:
    tol = TOLERANCES["geometry"] if tol is None else tol
    if not is_self_map(m, tol):
        raise NotSelfMap(f"{m!r} does not map the unit disk into itself")
    if _is_identity(m, tol):
        return MapClassification(MapKind.IDENTITY)

    fps = fixed_points(m, tol)
    finite = [fp.value for fp in fps if not fp.infinite]
    on_circle = [z for z in finite if abs(abs(z) - 1) <= tol]
    inside = [z for z in finite if abs(z) < 1 - tol]
    parabolic = len(fps) == 1 and len(on_circle) == 1

    if is_automorphism(m, tol):
        if inside:
            return MapClassification(MapKind.ELLIPTIC_AUTOMORPHISM, fps)
        if parabolic:
            zeta = on_circle[0]
            return MapClassification(
                MapKind.PARABOLIC_AUTOMORPHISM,
                fps,
                denjoy_wolff=(zeta, derivative_at(m, zeta)),
                translation_number=_translation(m, zeta),
                parabolic=True,
            )
        zeta = min(on_circle, key=lambda z: abs(derivative_at(m, z)))
        return MapClassification(
            MapKind.HYPERBOLIC_AUTOMORPHISM, fps, denjoy_wolff=(zeta, derivative_at(m, zeta))
        )

    closed = [z for z in finite if abs(z) <= 1 + tol]
    candidates = [z for z in closed if abs(derivative_at(m, z)) <= 1 + tol]
    dw = None
    if candidates:
        zeta = min(candidates, key=lambda z: abs(derivative_at(m, z)))
        if abs(abs(zeta) - 1) <= tol:
            zeta = zeta / abs(zeta)
        dw = (zeta, derivative_at(m, zeta))

    center, radius = image_disk(m, tol)
    if abs(center) + radius < 1 - tol:
        return MapClassification(MapKind.NON_AUTO_INTERIOR_CLOSURE, fps, denjoy_wolff=dw)
    eta = center / abs(center)
    contact = (evaluate(invert(m), eta), eta)
    t = _translation(m, on_circle[0]) if parabolic else None
    return MapClassification(
        MapKind.NON_AUTO_BOUNDARY_CONTACT,
        fps,
        denjoy_wolff=dw,
        translation_number=t,
        boundary_contact=contact,
        parabolic=parabolic,
    )


def parabolic_from(zeta: complex, t: complex, tol: Optional[float] = None) -> LftMap:
    """((2 - t) z + t zeta) / (2 + t - t conj(zeta) z): parabolic with fixed point zeta."""
    tol = TOLERANCES["geometry"] if tol is None else tol
    zeta, t = complex(zeta), complex(t)
    if abs(abs(zeta) - 1) > tol:
        raise BadFixedPoint(f"Expected |zeta| = 1, got |zeta| = {abs(zeta):.12g}")
    if t.real < -tol or t == 0:
        raise BadTranslation(f"Expected Re(t) >= 0 and t != 0, got t = {t}")
    return LftMap(2 - t, t * zeta, -t * zeta.conjugate(), 2 + t)


def translation_number(m: LftMap, tol: Optional[float] = None) -> complex:
    cls = classify(m, tol)
    if not cls.parabolic:
        raise NotParabolic(f"{m!r} is {cls.kind.value}, not parabolic")
    return cls.translation_number


def automorphism(lam: complex, a: complex, tol: Optional[float] = None) -> LftMap:
    """lambda (a - z) / (1 - conj(a) z)."""
    tol = TOLERANCES["geometry"] if tol is None else tol
    lam, a = complex(lam), complex(a)
    if abs(abs(lam) - 1) > tol:
        raise BadFixedPoint(f"Expected |lambda| = 1, got {abs(lam):.12g}")
    if not abs(a) < 1:
        raise PointNotInDisk(f"Expected |a| < 1, got |a| = {abs(a):.6g}")
    return LftMap(-lam, lam * a, -a.conjugate(), 1)


def automorphism_form(m: LftMap, tol: Optional[float] = None) -> Tuple[complex, complex]:
    """The (lambda, a) with m = automorphism(lambda, a)."""
    if not is_automorphism(m, tol):
        raise NotAutomorphism(f"{m!r} is not a disk automorphism")
    a, b, c, d = m.coeffs
    return complex(-a / d), evaluate(invert(m), 0)


def hyperbolic_from(attracting: complex, repelling: complex, multiplier: float,
                    tol: Optional[float] = None) -> LftMap:
    """Hyperbolic automorphism fixing both points, with phi'(attracting) = multiplier."""
    tol = TOLERANCES["geometry"] if tol is None else tol
    z1, z2 = complex(attracting), complex(repelling)
    if abs(abs(z1) - 1) > tol or abs(abs(z2) - 1) > tol:
        raise BadFixedPoint(f"Expected unimodular fixed points, got {z1} and {z2}")
    if abs(z1 - z2) <= tol:
        raise BadFixedPoint("The two fixed points coincide")
    if not 0 < multiplier < 1:
        raise BadTranslation(f"Expected 0 < multiplier < 1, got {multiplier}")
    s = LftMap(1, -z1, 1, -z2)
    return compose(invert(s), compose(LftMap(multiplier, 0, 0, 1), s))


def orbit(m: LftMap, z0: complex, n_max: int, tol: float = ORBIT_REVISIT) -> Orbit:
    """phi_n(z0) for n <= n_max, flagged finite when it returns to z0.

    An LFT is injective, so a revisit can only close a cycle through z0 itself.
    """
    if not is_self_map(m):
        raise NotSelfMap(f"{m!r} does not map the unit disk into itself")
    z0 = complex(z0)
    if abs(z0) > 1 + TOLERANCES["geometry"]:
        raise PointNotInDisk(f"Expected |z0| <= 1, got |z0| = {abs(z0):.6g}")
    points = [z0]
    z = z0
    for n in range(1, n_max + 1):
        z = evaluate(m, z)
        if abs(z - z0) < tol:
            w, confirmed = z, True
            for k in range(1, n + 1):
                w = evaluate(m, w)
                if abs(w - points[k % n]) >= tol:
                    confirmed = False
                    break
            if confirmed:
                logger.debug("orbit of %s closes with period %d", z0, n)
                return Orbit(tuple(points), True, n)
        points.append(z)
    return Orbit(tuple(points), False, None)


def adjoint_symbols(m: LftMap, gamma: float):
    """sigma, g, h with C_phi* = T_g C_sigma T_h*.

    sigma(z) = (conj(a) z - conj(c)) / (-conj(b) z + conj(d)),
    g(z) = (-conj(b) z + conj(d))^(-gamma), h(z) = (c z + d)^gamma,
    for the representative with d = 1.
    """
    if not is_self_map(m):
        raise NotSelfMap(f"{m!r} does not map the unit disk into itself")
    if not gamma > 0:
        raise ValueError(f"Expected gamma > 0, got {gamma}")
    a, b, c, d = (complex(x) for x in m.coeffs / m.coeffs[3])
    sigma = LftMap(a.conjugate(), -c.conjugate(), -b.conjugate(), d.conjugate())
    if not is_self_map(sigma):
        raise NotSelfMap(f"sigma = {sigma!r} does not map the unit disk into itself")
    g = RationalPowerSymbol(RationalPower(d.conjugate(), -b.conjugate(), 1, 0, -gamma))
    h = RationalPowerSymbol(RationalPower(d, c, 1, 0, gamma))
    return sigma, g, h
