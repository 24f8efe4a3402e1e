"""Power series arithmetic and the weighted Hardy space model.

Functions are analytic on the unit disk and are carried around as finite
Taylor coefficient vectors (:class:`PowerSeries`). A :class:`SpaceSpec`
says which weighted Hardy space the coefficients live in; it supplies the
monomial norms ``beta(n) = |z^n|`` from which inner products and
reproducing kernels follow.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaln

from wcolab.constants import ROUNDING_FLOOR, TAIL_WINDOW, TOLERANCES
from wcolab.exceptions import (
    ConfigError,
    ConvergenceRadiusTooSmall,
    IndexBeyondStoredWeights,
    PointNotInDisk,
    TailTooLarge,
)

logger = logging.getLogger(__name__)

HARDY = "hardy"
BERGMAN = "bergman"
WEIGHTED = "weighted"

Number = Union[int, float, complex]


@dataclass(frozen=True)
class SpaceSpec:
    """Hardy space, weighted Bergman space A^2_alpha, or H^2(beta)."""

    variant: str = HARDY
    alpha: float = 0.0
    beta: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.variant not in (HARDY, BERGMAN, WEIGHTED):
            raise ConfigError(f"Unknown space variant {self.variant!r}")
        if self.variant == BERGMAN and not self.alpha > -1:
            raise ConfigError(f"Expected alpha > -1, got {self.alpha}")
        if self.variant == WEIGHTED:
            table = np.asarray(self.beta, dtype=float)
            if table.size == 0:
                raise ConfigError("A weighted Hardy space needs a non-empty beta table")
            if not np.all(np.isfinite(table)) or np.any(table <= 0):
                raise ConfigError("beta must be a sequence of positive finite reals")
            if abs(table[0] - 1) > 1e-12:
                raise ConfigError(f"Expected beta(0) = 1, got {table[0]}")
            if not np.all(np.isfinite(table[1:] / table[:-1])):
                raise ConfigError("sup beta(j+1)/beta(j) is not finite over the stored range")

    @classmethod
    def hardy(cls) -> "SpaceSpec":
        return cls(HARDY)

    @classmethod
    def bergman(cls, alpha: float = 0.0) -> "SpaceSpec":
        return cls(BERGMAN, alpha=float(alpha))

    @classmethod
    def weighted(cls, beta: Sequence[float]) -> "SpaceSpec":
        return cls(WEIGHTED, beta=tuple(float(b) for b in beta))

    @property
    def gamma(self) -> Optional[float]:
        """Kernel exponent: 1 for H^2, alpha + 2 for A^2_alpha, None otherwise."""
        if self.variant == HARDY:
            return 1.0
        if self.variant == BERGMAN:
            return self.alpha + 2.0
        return None

    @property
    def max_order(self) -> Optional[int]:
        return len(self.beta) - 1 if self.variant == WEIGHTED else None

    def weights(self, N: int) -> np.ndarray:
        """beta(0), ..., beta(N) as a read-only array."""
        return _weights(self, int(N))

    def to_dict(self) -> dict:
        if self.variant == BERGMAN:
            return {"type": BERGMAN, "alpha": self.alpha}
        if self.variant == WEIGHTED:
            return {"type": WEIGHTED, "beta": list(self.beta)}
        return {"type": HARDY}

    def __str__(self):
        if self.variant == BERGMAN:
            return f"A^2_{self.alpha:g}"
        if self.variant == WEIGHTED:
            return f"H^2(beta), {len(self.beta)} stored weights"
        return "H^2"


@lru_cache(maxsize=128)
def _weights(space: SpaceSpec, N: int) -> np.ndarray:
    n = np.arange(N + 1, dtype=float)
    if space.variant == HARDY:
        out = np.ones(N + 1)
    elif space.variant == BERGMAN:
        a = space.alpha
        out = np.exp(0.5 * (gammaln(n + 1) + gammaln(a + 2) - gammaln(n + a + 2)))
    else:
        if N > space.max_order:
            raise IndexBeyondStoredWeights(
                f"beta is stored up to n = {space.max_order}, requested n = {N}"
            )
        out = np.array(space.beta[: N + 1], dtype=float)
    out.setflags(write=False)
    return out


def beta_norm(space: SpaceSpec, n: int) -> float:
    """beta(n) = |z^n| in the given space."""
    if n < 0:
        raise ValueError(f"Expected n >= 0, got {n}")
    return float(space.weights(n)[n])


class PowerSeries:
    """Taylor coefficients f_0, ..., f_N of an analytic function at 0.

    Binary arithmetic truncates to the smaller of the two orders.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def constant(cls, value: Number, N: int = 0) -> "PowerSeries":
        c = np.zeros(N + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def monomial(cls, k: int, N: int) -> "PowerSeries":
        c = np.zeros(max(N, k) + 1, dtype=complex)
        c[k] = 1
        return cls(c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient (0 for the zero series)."""
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else 0

    def truncate(self, N: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[: N + 1])

    def padded(self, N: int) -> "PowerSeries":
        """Order exactly N: truncated, or extended with zero coefficients."""
        if N <= self.order:
            return self.truncate(N)
        c = np.zeros(N + 1, dtype=complex)
        c[: self.coeffs.size] = self.coeffs
        return PowerSeries(c)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.coeffs.size

    def __add__(self, other):
        if isinstance(other, PowerSeries):
            n = min(self.order, other.order)
            return PowerSeries(self.coeffs[: n + 1] + other.coeffs[: n + 1])
        c = self.coeffs.copy()
        c[0] += other
        return PowerSeries(c)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return multiply(self, other)
        return PowerSeries(self.coeffs * other)

    __rmul__ = __mul__

    def __call__(self, z):
        return evaluate_series(self, z)[0]

    def __repr__(self):
        head = ", ".join(f"{c:.4g}" for c in self.coeffs[:4])
        more = ", ..." if self.order > 3 else ""
        return f"PowerSeries([{head}{more}], order={self.order})"


@dataclass(frozen=True)
class RationalPower:
    """z -> ((p + q z) / (u + v z))^s, principal branch with value (p/u)^s at 0."""

    p: complex
    q: complex
    u: complex
    v: complex
    s: float

    def __post_init__(self):
        if self.p == 0 or self.u == 0:
            raise ValueError(f"Expected p != 0 and u != 0, got p = {self.p}, u = {self.u}")

    @property
    def radius(self) -> float:
        """Convergence radius of the expansion at 0."""
        r = np.inf
        if self.q != 0:
            r = min(r, abs(self.p / self.q))
        if self.v != 0:
            r = min(r, abs(self.u / self.v))
        return float(r)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        lead = complex(self.p / self.u) ** self.s
        logs = np.log(1 + (self.q / self.p) * z) - np.log(1 + (self.v / self.u) * z)
        return lead * np.exp(self.s * logs)


def binomial_series(s: float, x: complex, N: int) -> np.ndarray:
    """Coefficients of (1 + x z)^s to order N, via binom(s,k) = binom(s,k-1)(s-k+1)/k."""
    k = np.arange(1, N + 1, dtype=float)
    out = np.ones(N + 1, dtype=complex)
    out[1:] = np.cumprod((s - k + 1) / k * x)
    return out


def rational_power_series(r: RationalPower, N: int) -> PowerSeries:
    if r.radius < 1 - TOLERANCES["geometry"]:
        raise ConvergenceRadiusTooSmall(
            f"((p+qz)/(u+vz))^s converges only on |z| < {r.radius:.6g}"
        )
    lead = complex(r.p / r.u) ** r.s
    up = binomial_series(r.s, r.q / r.p, N)
    down = binomial_series(-r.s, r.v / r.u, N)
    return PowerSeries(lead * np.convolve(up, down)[: N + 1])


def multiply(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Cauchy product truncated to the smaller order."""
    n = min(f.order, g.order)
    return PowerSeries(np.convolve(f.coeffs[: n + 1], g.coeffs[: n + 1])[: n + 1])


def compose_poly(f: PowerSeries, phi: PowerSeries, N: int) -> PowerSeries:
    """Coefficients of f(phi(z)) to order N, f a polynomial, by Horner's rule."""
    n = min(N, phi.order)
    p = phi.coeffs[: n + 1]
    top = f.coeffs[: f.degree + 1]
    acc = np.zeros(n + 1, dtype=complex)
    acc[0] = top[-1]
    for c in top[-2::-1]:
        acc = np.convolve(acc, p)[: n + 1]
        acc[0] += c
    return PowerSeries(acc)


def differentiate(f: PowerSeries) -> PowerSeries:
    if f.order == 0:
        return PowerSeries([0])
    return PowerSeries(f.coeffs[1:] * np.arange(1, f.order + 1))


def _horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def _noise_floor(coeffs: np.ndarray) -> float:
    """Magnitude below which a coefficient is rounding noise."""
    return ROUNDING_FLOOR * float(np.max(np.abs(coeffs), initial=0.0))


def _decay_rate(coeffs: np.ndarray) -> float:
    """Estimated 1/R from the trailing coefficients; 0 when they vanish into rounding noise."""
    order = coeffs.size - 1
    start = max(0, order - TAIL_WINDOW)
    mags = np.abs(coeffs[start:])
    idx = np.flatnonzero(mags > _noise_floor(coeffs)) + start
    if idx.size == 0:
        return 0.0
    if idx.size == 1:
        k = idx[0]
        return float(abs(coeffs[k]) ** (1.0 / k)) if k > 0 else 0.0
    a = np.abs(coeffs[idx[:-1]])
    b = np.abs(coeffs[idx[1:]])
    return float(np.max((b / a) ** (1.0 / np.diff(idx))))


def series_tail_bound(f: PowerSeries, z) -> np.ndarray:
    """Geometric estimate of the neglected tail sum_{k>N} f_k z^k."""
    z = np.abs(np.asarray(z, dtype=complex))
    if f.order < TAIL_WINDOW:
        return np.zeros_like(z)
    rho = _decay_rate(f.coeffs)
    q = rho * z
    start = f.order - TAIL_WINDOW
    k = np.arange(start, f.order + 1)
    env = np.max(np.abs(f.coeffs[start:])[:, None] * z.ravel()[None, :] ** k[:, None], axis=0)
    env = env.reshape(z.shape)
    peak = np.max(np.abs(f.coeffs)[:, None] * z.ravel()[None, :] ** np.arange(f.order + 1)[:, None], axis=0)
    settled = env <= ROUNDING_FLOOR * peak.reshape(z.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        tail = np.where(q < 1, env * q / (1 - q), np.inf)
    return np.where((env == 0) | settled, 0.0, tail)


def evaluate_series(f: PowerSeries, z, tol: Optional[float] = None):
    """Horner partial sum at z and its a-posteriori tail estimate.

    Raises TailTooLarge when the estimate exceeds ``tol`` relative to
    max(1, |value|) anywhere in ``z``.
    """
    tol = TOLERANCES["series_tail"] if tol is None else tol
    zz = np.asarray(z, dtype=complex)
    value = _horner(f.coeffs, zz)
    tail = series_tail_bound(f, zz)
    worst = np.max(tail / np.maximum(1.0, np.abs(value))) if tail.size else 0.0
    if worst > tol:
        raise TailTooLarge(
            f"Tail estimate {worst:.3g} exceeds {tol:.3g} at order {f.order}; raise N or shrink |z|"
        )
    if np.ndim(z) == 0:
        return complex(value), float(tail)
    return value, tail


def inner_product(f: PowerSeries, g: PowerSeries, space: SpaceSpec) -> complex:
    n = min(f.order, g.order)
    b = space.weights(n)
    return complex(np.sum(f.coeffs[: n + 1] * np.conj(g.coeffs[: n + 1]) * b**2))


def _check_disk(w: complex, name: str = "w") -> None:
    if not abs(w) < 1:
        raise PointNotInDisk(f"Expected |{name}| < 1, got |{name}| = {abs(w):.6g}")


def kernel_series(space: SpaceSpec, w: complex, N: int) -> PowerSeries:
    """Reproducing kernel K_w: coefficients conj(w)^j / beta(j)^2."""
    _check_disk(w)
    j = np.arange(N + 1)
    return PowerSeries(np.power(np.conj(complex(w)), j) / space.weights(N) ** 2)


def kernel_vector(space: SpaceSpec, w: complex, size: int) -> np.ndarray:
    """Coordinates of K_w in the orthonormal basis z^j / beta(j), j < size."""
    _check_disk(w)
    j = np.arange(size)
    return np.power(np.conj(complex(w)), j) / space.weights(size - 1)


def kernel_norm(space: SpaceSpec, w: complex) -> float:
    _check_disk(w)
    if space.gamma is not None:
        return float((1 - abs(w) ** 2) ** (-space.gamma / 2))
    b = space.weights(space.max_order)
    j = np.arange(b.size)
    return float(np.sqrt(np.sum(abs(w) ** (2 * j) / b**2)))


def kernel_value(space: SpaceSpec, w: complex, z):
    """K_w(z) = <K_w, K_z>; closed form where the space has a kernel exponent."""
    _check_disk(w)
    z = np.asarray(z, dtype=complex)
    x = np.conj(complex(w)) * z
    if space.gamma is not None:
        return (1 - x) ** (-space.gamma)
    b = space.weights(space.max_order)
    return _horner(1 / b**2, x)
