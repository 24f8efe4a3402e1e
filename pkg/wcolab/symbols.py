"""Closed-form analytic weight symbols psi.

Every symbol renders to a :class:`~wcolab.series.PowerSeries` at any order
and evaluates pointwise on the disk; the two agree inside the convergence
radius. Symbols combine with ``+`` and ``*``.
"""

from typing import List, Sequence

import numpy as np

from wcolab.constants import GUARD_BAND
from wcolab.series import (
    PowerSeries,
    RationalPower,
    SpaceSpec,
    kernel_series,
    kernel_value,
    multiply,
    rational_power_series,
)
from wcolab.exceptions import PointNotInDisk


def _pair(x: complex) -> List[float]:
    x = complex(x)
    return [x.real, x.imag]


class SymbolSpec:
    """Base class of the symbol variants."""

    def series(self, N: int) -> PowerSeries:
        raise NotImplementedError

    def __call__(self, z):
        raise NotImplementedError

    @property
    def radius(self) -> float:
        """Convergence radius of the Taylor expansion at 0."""
        return np.inf

    def to_dict(self) -> dict:
        raise NotImplementedError

    def boundary_values(self, nodes: int = 1024, r: float = 1.0) -> np.ndarray:
        """Values on the circle |z| = r, pulled just inside when r reaches the radius."""
        r = min(r, self.radius * (1 - 1e-9))
        theta = 2 * np.pi * np.arange(nodes) / nodes
        return np.asarray(self(r * np.exp(1j * theta)), dtype=complex)

    def is_bounded(self, nodes: int = 1024) -> bool:
        return bool(np.all(np.isfinite(self.boundary_values(nodes))))

    def __add__(self, other):
        if not isinstance(other, SymbolSpec):
            other = Polynomial([other])
        return Sum([self, other])

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, SymbolSpec):
            other = Polynomial([other])
        return Product([self, other])

    __rmul__ = __mul__


class Polynomial(SymbolSpec):
    def __init__(self, coeffs: Sequence[complex]):
        self.coeffs = np.array(coeffs, dtype=complex).ravel()
        if self.coeffs.size == 0:
            self.coeffs = np.zeros(1, dtype=complex)

    def series(self, N: int) -> PowerSeries:
        return PowerSeries(self.coeffs).padded(N)

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def to_dict(self) -> dict:
        return {"type": "poly", "coeffs": [_pair(c) for c in self.coeffs]}

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"


class ScaledKernel(SymbolSpec):
    """scale * K_w for the reproducing kernel of ``space``."""

    def __init__(self, scale: complex, w: complex, space: SpaceSpec = SpaceSpec()):
        if not abs(w) < 1:
            raise PointNotInDisk(f"Expected |w| < 1, got |w| = {abs(w):.6g}")
        self.scale = complex(scale)
        self.w = complex(w)
        self.space = space

    def series(self, N: int) -> PowerSeries:
        return kernel_series(self.space, self.w, N) * self.scale

    def __call__(self, z):
        return self.scale * kernel_value(self.space, self.w, z)

    @property
    def radius(self) -> float:
        return 1 / abs(self.w) if self.w else np.inf

    def to_dict(self) -> dict:
        return {"type": "kernel", "w": _pair(self.w), "scale": _pair(self.scale)}

    def __repr__(self):
        return f"ScaledKernel({self.scale}, {self.w}, {self.space})"


class RationalPowerSymbol(SymbolSpec):
    def __init__(self, r: RationalPower):
        self.r = r

    def series(self, N: int) -> PowerSeries:
        return rational_power_series(self.r, N)

    def __call__(self, z):
        return self.r(z)

    @property
    def radius(self) -> float:
        return self.r.radius

    def to_dict(self) -> dict:
        r = self.r
        return {
            "type": "rational-power",
            "p": _pair(r.p),
            "q": _pair(r.q),
            "u": _pair(r.u),
            "v": _pair(r.v),
            "s": r.s,
        }

    def __repr__(self):
        return f"RationalPowerSymbol({self.r})"


class Product(SymbolSpec):
    def __init__(self, factors: Sequence[SymbolSpec]):
        if not factors:
            raise ValueError("A product needs at least one factor")
        self.factors = list(factors)

    def series(self, N: int) -> PowerSeries:
        acc = self.factors[0].series(N + GUARD_BAND)
        for f in self.factors[1:]:
            acc = multiply(acc, f.series(N + GUARD_BAND))
        return acc.truncate(N)

    def __call__(self, z):
        out = self.factors[0](z)
        for f in self.factors[1:]:
            out = out * f(z)
        return out

    @property
    def radius(self) -> float:
        return min(f.radius for f in self.factors)

    def to_dict(self) -> dict:
        return {"type": "product", "factors": [f.to_dict() for f in self.factors]}

    def __repr__(self):
        return f"Product({self.factors})"


class Sum(SymbolSpec):
    def __init__(self, terms: Sequence[SymbolSpec]):
        if not terms:
            raise ValueError("A sum needs at least one term")
        self.terms = list(terms)

    def series(self, N: int) -> PowerSeries:
        acc = self.terms[0].series(N + GUARD_BAND)
        for t in self.terms[1:]:
            acc = acc + t.series(N + GUARD_BAND)
        return acc.truncate(N)

    def __call__(self, z):
        out = self.terms[0](z)
        for t in self.terms[1:]:
            out = out + t(z)
        return out

    @property
    def radius(self) -> float:
        return min(t.radius for t in self.terms)

    def to_dict(self) -> dict:
        return {"type": "sum", "terms": [t.to_dict() for t in self.terms]}

    def __repr__(self):
        return f"Sum({self.terms})"
