"""The weighted composition operator C_{psi,phi} f = psi * (f o phi).

Matrix convention: entry (i, j) of a finite section is the coefficient of
e_i in C e_j, where e_j = z^j / beta(j) is the orthonormal monomial basis.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np
from scipy.linalg import toeplitz

from wcolab.constants import BOUNDARY_GRID
from wcolab.exceptions import NotSelfMap, UnboundedSymbol
from wcolab.moebius import LftMap, evaluate, is_self_map
from wcolab.series import (
    BERGMAN,
    HARDY,
    PowerSeries,
    RationalPower,
    SpaceSpec,
    _check_disk,
    _horner,
    compose_poly,
    kernel_norm,
    kernel_series,
    kernel_vector,
    multiply,
    rational_power_series,
)
from wcolab.symbols import SymbolSpec

logger = logging.getLogger(__name__)

SERIES_SELF_MAP_MARGIN = 1e-6

SelfMap = Union[LftMap, PowerSeries]


class WcoSpec:
    """psi, phi and the space the operator acts on."""

    def __init__(self, psi: SymbolSpec, phi: SelfMap, space: Optional[SpaceSpec] = None):
        self.psi = psi
        self.phi = phi
        self.space = SpaceSpec.hardy() if space is None else space

        if isinstance(phi, LftMap):
            if not is_self_map(phi):
                raise NotSelfMap(f"{phi!r} does not map the unit disk into itself")
        elif isinstance(phi, PowerSeries):
            theta = 2 * np.pi * np.arange(BOUNDARY_GRID) / BOUNDARY_GRID
            peak = np.max(np.abs(_horner(phi.coeffs, np.exp(1j * theta))))
            if not peak < 1 - SERIES_SELF_MAP_MARGIN:
                raise NotSelfMap(f"max |phi| on the boundary grid is {peak:.9g}")
        else:
            raise TypeError(f"phi must be an LftMap or a PowerSeries, got {type(phi).__name__}")

        if not psi.is_bounded():
            raise UnboundedSymbol(f"{psi!r} is not bounded on the unit circle")

    @property
    def is_lft(self) -> bool:
        return isinstance(self.phi, LftMap)

    def phi_series(self, N: int) -> PowerSeries:
        if self.is_lft:
            return self.phi.series(N)
        return self.phi.padded(N)

    def phi_at(self, z):
        if self.is_lft:
            return evaluate(self.phi, z)
        z = np.asarray(z, dtype=complex)
        out = _horner(self.phi.coeffs, z)
        return complex(out) if out.ndim == 0 else out

    def with_psi(self, psi: SymbolSpec) -> "WcoSpec":
        return WcoSpec(psi, self.phi, self.space)

    def to_dict(self) -> dict:
        if self.is_lft:
            phi = {"type": "lft", "coeffs": self.phi.to_list()}
        else:
            phi = {"type": "series", "coeffs": [[c.real, c.imag] for c in self.phi.coeffs]}
        return {"psi": self.psi.to_dict(), "phi": phi, "space": self.space.to_dict()}

    def __repr__(self):
        return f"WcoSpec(psi={self.psi!r}, phi={self.phi!r}, space={self.space})"


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Finite section in the orthonormal basis; ``order`` is the number of columns."""

    matrix: np.ndarray
    space: SpaceSpec
    order: int

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def shape(self):
        return self.matrix.shape

    def block(self, M: int) -> np.ndarray:
        """Leading M x M block."""
        return self.matrix[:M, :M]


def symbol_series(s: SymbolSpec, N: int) -> PowerSeries:
    return s.series(N)


def apply(op: WcoSpec, f: PowerSeries, N: int) -> PowerSeries:
    """Coefficients of psi * (f o phi) to order N for a polynomial f."""
    return multiply(symbol_series(op.psi, N), compose_poly(f, op.phi_series(N), N))


def _rescale(matrix: np.ndarray, space: SpaceSpec) -> np.ndarray:
    rows, cols = matrix.shape
    b = space.weights(max(rows, cols) - 1)
    return matrix * b[:rows, None] / b[None, :cols]


def truncate_operator(op: WcoSpec, N: int, rows: Optional[int] = None) -> TruncatedOperator:
    """N columns of C_{psi,phi}; ``rows`` >= N keeps more of each column."""
    rows = N if rows is None else rows
    if rows < N:
        raise ValueError(f"Expected rows >= N, got rows = {rows}, N = {N}")
    psi = symbol_series(op.psi, rows - 1).coeffs
    phi = op.phi_series(rows - 1).coeffs
    matrix = np.empty((rows, N), dtype=complex)
    col = psi.copy()
    for j in range(N):
        matrix[:, j] = col
        col = np.convolve(col, phi)[:rows]
    return TruncatedOperator(_rescale(matrix, op.space), op.space, N)


def adjoint_matrix(T: TruncatedOperator) -> TruncatedOperator:
    adj = np.ascontiguousarray(T.matrix.conj().T)
    return TruncatedOperator(adj, T.space, adj.shape[1])


def adjoint_on_kernel(op: WcoSpec, w: complex):
    """C* K_w = conj(psi(w)) K_{phi(w)}, returned as (scale, point)."""
    _check_disk(w)
    w = complex(w)
    return complex(np.conj(op.psi(w))), complex(op.phi_at(w))


def kernel_adjoint_residual(op: WcoSpec, w: complex, N: int, T: Optional[TruncatedOperator] = None) -> float:
    """|T* k_w - conj(psi(w)) k_{phi(w)}| / |k_{phi(w)}| on the N x N section."""
    T = truncate_operator(op, N) if T is None else T
    scale, point = adjoint_on_kernel(op, w)
    size = T.order
    lhs = T.matrix.conj().T @ kernel_vector(op.space, w, T.shape[0])
    rhs = kernel_vector(op.space, point, size)
    return float(np.linalg.norm(lhs - scale * rhs) / np.linalg.norm(rhs))


def kernel_composed(op: WcoSpec, w: complex, N: int) -> PowerSeries:
    """Taylor coefficients of K_w o phi to order N."""
    _check_disk(w)
    w = complex(w)
    space = op.space
    if op.is_lft and space.variant in (HARDY, BERGMAN):
        a, b, c, d = op.phi.coeffs
        wc = w.conjugate()
        r = RationalPower(d - wc * b, c - wc * a, d, c, -space.gamma)
        return rational_power_series(r, N)
    n = N if space.max_order is None else min(N, space.max_order)
    return compose_poly(kernel_series(space, w, n), op.phi_series(N), N)


def toeplitz_truncation(b: SymbolSpec, space: SpaceSpec, N: int) -> TruncatedOperator:
    """N x N section of multiplication by the analytic symbol b."""
    coeffs = symbol_series(b, N - 1).coeffs
    first_row = np.zeros(N, dtype=complex)
    first_row[0] = coeffs[0]
    return TruncatedOperator(_rescale(toeplitz(coeffs, first_row), space), space, N)


def norm_lower_bound(op: WcoSpec, samples: Iterable[complex]) -> float:
    """max over w of |C* k_w| = |psi(w)| |K_{phi(w)}| / |K_w|."""
    best = 0.0
    for w in samples:
        _check_disk(w)
        scale, point = adjoint_on_kernel(op, w)
        value = abs(scale) * kernel_norm(op.space, point) / kernel_norm(op.space, w)
        best = max(best, value)
    return best
