"""Numerical kernels and small helpers shared across wcolab."""

import json
import logging
import math
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Tuple

import numpy as np
from numba import njit
from scipy.stats import qmc

from wcolab.constants import (
    DEFAULT_SEED,
    JACOBI_MAX_SWEEPS,
    POWER_ITERATIONS,
    TOLERANCES,
)
from wcolab.exceptions import ConfigError, NotHermitian, PowerIterationStalled, SchemaError

logger = logging.getLogger(__name__)


def tolerances(overrides: Optional[Mapping[str, float]] = None) -> Dict[str, float]:
    """The tolerance table with ``overrides`` merged in."""
    merged = dict(TOLERANCES)
    for key, value in (overrides or {}).items():
        if key not in TOLERANCES:
            raise ConfigError(f"Unknown tolerance {key!r}; known: {', '.join(sorted(TOLERANCES))}")
        value = float(value)
        if not value > 0 or not math.isfinite(value):
            raise ConfigError(f"Tolerance {key!r} must be a positive finite number, got {value}")
        merged[key] = value
    return merged


@njit(cache=True)
def _jacobi_sweeps(a, v, threshold, max_sweeps):
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += abs(a[i, j]) ** 2
        if math.sqrt(off) <= threshold:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                theta = 0.5 * math.atan2(2.0 * mag, (a[q, q] - a[p, p]).real)
                c = math.cos(theta)
                s = math.sin(theta)
                ph = apq / mag
                phc = ph.conjugate()
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * phc * akq
                    a[k, q] = s * akp + c * phc * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * ph * aqk
                    a[q, k] = s * apk + c * ph * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * phc * vkq
                    v[k, q] = s * vkp + c * phc * vkq
    return max_sweeps


def jacobi_eigh(h, tol: Optional[float] = None, rel_threshold: float = 1e-13) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix by cyclic Jacobi rotations."""
    tol = TOLERANCES["hermitian"] if tol is None else tol
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NotHermitian(f"Expected a square matrix, got shape {h.shape}")
    scale = np.linalg.norm(h)
    asym = np.linalg.norm(h - h.conj().T)
    if asym > tol * max(1.0, scale):
        raise NotHermitian(f"|H - H*| = {asym:.3g} exceeds {tol:.3g} * max(1, |H|)")
    n = h.shape[0]
    if n == 0 or scale == 0:
        return np.zeros(n), np.eye(n, dtype=complex)
    a = np.ascontiguousarray(0.5 * (h + h.conj().T))
    v = np.eye(n, dtype=complex)
    sweeps = _jacobi_sweeps(a, v, rel_threshold * scale, JACOBI_MAX_SWEEPS)
    if sweeps >= JACOBI_MAX_SWEEPS:
        logger.warning("Jacobi did not reach the off-diagonal threshold in %d sweeps", sweeps)
    else:
        logger.debug("Jacobi converged in %d sweeps for n = %d", sweeps, n)
    vals = np.diag(a).real.copy()
    order = np.argsort(vals)
    return vals[order], v[:, order]


@dataclass(frozen=True)
class NormEstimate:
    value: float
    iterations: int


def power_norm(a, start=None, tol: Optional[float] = None, max_iter: int = POWER_ITERATIONS,
               seed: int = DEFAULT_SEED) -> Tuple[NormEstimate, np.ndarray]:
    """Largest singular value of ``a`` by power iteration on a* a.

    The Rayleigh quotients increase monotonically, so every iterate is a lower bound.
    Returns the estimate and the final unit vector, which can warm-start the next call.
    Raises PowerIterationStalled, carrying the last lower bound, when max_iter steps
    pass without the quotient settling.
    """
    tol = TOLERANCES["power_iteration"] if tol is None else tol
    a = np.asarray(a, dtype=complex)
    n = a.shape[1]
    if start is None:
        rng = np.random.default_rng(seed)
        x = rng.normal(size=n) + 1j * rng.normal(size=n)
    else:
        x = np.array(start, dtype=complex)
    norm = np.linalg.norm(x)
    if norm == 0:
        x = np.ones(n, dtype=complex)
        norm = np.linalg.norm(x)
    x = x / norm

    lam = 0.0
    for it in range(1, max_iter + 1):
        y = a.conj().T @ (a @ x)
        lam_new = float(np.vdot(x, y).real)
        y_norm = np.linalg.norm(y)
        if y_norm == 0:
            return NormEstimate(0.0, it), x
        x = y / y_norm
        if abs(lam_new - lam) <= tol * max(lam_new, 1e-300):
            return NormEstimate(math.sqrt(max(lam_new, 0.0)), it), x
        lam = lam_new
    raise PowerIterationStalled(NormEstimate(math.sqrt(max(lam, 0.0)), max_iter), x)


def disk_samples(n: int, r_max: float, seed: int = DEFAULT_SEED, dim: int = 1) -> np.ndarray:
    """Deterministic low-discrepancy points in |z| <= r_max, shape (n, dim)."""
    sampler = qmc.Halton(d=2 * dim, scramble=True, seed=seed)
    u = sampler.random(n)
    radius = r_max * np.sqrt(u[:, 0::2])
    angle = 2 * np.pi * u[:, 1::2]
    return radius * np.exp(1j * angle)


def to_pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def from_pair(value, path: str) -> complex:
    """[re, im] (or a bare real) to complex, failing with the field path."""
    if isinstance(value, bool):
        raise SchemaError(path, f"expected a number or [re, im], got {value!r}")
    if isinstance(value, (int, float)):
        z = complex(value)
    elif isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    ):
        z = complex(value[0], value[1])
    else:
        raise SchemaError(path, f"expected a number or [re, im], got {value!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise SchemaError(path, f"expected a finite value, got {value!r}")
    return z


def _jsonable(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return to_pair(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON: sorted keys, numpy scalars and complex pairs converted."""
    return json.dumps(obj, indent=indent, sort_keys=True, default=_jsonable, allow_nan=True)
