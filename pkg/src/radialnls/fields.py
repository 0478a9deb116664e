"""Radial grids, sampled radial profiles, and their sine-series representation.

A spherically symmetric function u(x) = u(|x|) on the ball of radius L is
stored through the substitution v(r) = r*u(r), which turns the radial
Laplacian u_rr + (2/r) u_r into the plain second derivative v_rr.  With
Dirichlet conditions v(0) = v(L) = 0 the natural basis is

    v(r) = sum_k b_k sin(pi k r / L),      k = 1 .. n-1,

so the Laplacian is exactly diagonal and the free Schrodinger flow is a
pure phase rotation of the coefficients.  The mode with index k oscillates
like exp(2*pi*i*rho_k*r) with rho_k = k / (2 L), which is the frequency
variable used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft

__all__ = [
    "RadialGrid",
    "RadialField",
    "SpectralField",
    "to_spectral",
    "from_spectral",
    "inner_product",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid r_k = k*dr, k = 1..n-1, on the interval (0, L).

    n must be a power of two (>= 8) so that dr*n == L holds exactly and the
    DST sizes stay fast.  Only interior nodes are stored; v = r*u carries
    implicit zeros at r = 0 and r = L.
    """

    n: int
    L: float
    r: np.ndarray = field(init=False, repr=False, compare=False)
    rho: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 8 or (self.n & (self.n - 1)) != 0:
            raise ValueError(f"n must be a power of two >= 8, got {self.n}")
        if not (self.L > 0):
            raise ValueError(f"L must be positive, got {self.L}")
        k = np.arange(1, self.n)
        object.__setattr__(self, "r", _readonly(k * self.dr))
        object.__setattr__(self, "rho", _readonly(k / (2.0 * self.L)))

    @property
    def dr(self) -> float:
        return self.L / self.n

    @property
    def rho_max(self) -> float:
        """Largest representable frequency (n-1)/(2L)."""
        return (self.n - 1) / (2.0 * self.L)

    def __eq__(self, other):
        return isinstance(other, RadialGrid) and self.n == other.n and self.L == other.L

    def __hash__(self):
        return hash((self.n, self.L))


@dataclass(frozen=True)
class RadialField:
    """Complex amplitude u(r_k) sampled on the interior nodes of a grid."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.n - 1,):
            raise ValueError(
                f"values must have shape ({self.grid.n - 1},), got {v.shape}"
            )
        bad = ~np.isfinite(v)
        if bad.any():
            idx = int(np.flatnonzero(bad.real | bad.imag)[0])
            raise ValueError(f"non-finite field value at node index {idx}")
        object.__setattr__(self, "values", _readonly(v))

    @classmethod
    def zero(cls, grid: RadialGrid) -> "RadialField":
        return cls(grid, np.zeros(grid.n - 1, dtype=np.complex128))

    @classmethod
    def from_profile(cls, grid: RadialGrid, func) -> "RadialField":
        """Sample a callable profile u(r) on the grid nodes."""
        return cls(grid, np.asarray(func(grid.r), dtype=np.complex128))

    def conj(self) -> "RadialField":
        return RadialField(self.grid, np.conj(self.values))

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.max(np.abs(self.values.imag)) <= tol)

    def __add__(self, other: "RadialField") -> "RadialField":
        self._check_same_grid(other)
        return RadialField(self.grid, self.values + other.values)

    def __sub__(self, other: "RadialField") -> "RadialField":
        self._check_same_grid(other)
        return RadialField(self.grid, self.values - other.values)

    def __mul__(self, scalar) -> "RadialField":
        return RadialField(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "RadialField":
        return RadialField(self.grid, -self.values)

    def _check_same_grid(self, other: "RadialField"):
        if self.grid != other.grid:
            raise ValueError("fields live on different grids")


@dataclass(frozen=True)
class SpectralField:
    """Sine coefficients b_k of v(r) = r*u(r) = sum b_k sin(pi k r / L)."""

    grid: RadialGrid
    coefficients: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.coefficients, dtype=np.complex128)
        if b.shape != (self.grid.n - 1,):
            raise ValueError(
                f"coefficients must have shape ({self.grid.n - 1},), got {b.shape}"
            )
        bad = ~np.isfinite(b)
        if bad.any():
            idx = int(np.flatnonzero(bad.real | bad.imag)[0])
            raise ValueError(f"non-finite coefficient at mode index {idx}")
        object.__setattr__(self, "coefficients", _readonly(b))

    @property
    def rho(self) -> np.ndarray:
        return self.grid.rho


def to_spectral(f: RadialField) -> SpectralField:
    """Forward transform: DST-I of v = r*u, normalized so that
    v(r_m) = sum_k b_k sin(pi k m / n) inverts it exactly."""
    v = f.grid.r * f.values
    b = _fft.dst(v, type=1) / f.grid.n
    return SpectralField(f.grid, b)


def from_spectral(s: SpectralField) -> RadialField:
    """Inverse transform back to the sampled profile u = v/r."""
    v = _fft.dst(s.coefficients, type=1) / 2.0
    return RadialField(s.grid, v / s.grid.r)


def inner_product(f: RadialField, g: RadialField) -> complex:
    """L2(R^3) inner product <f, g> = integral f * conj(g) dx by radial
    trapezoid quadrature (endpoint contributions vanish)."""
    f._check_same_grid(g)
    r = f.grid.r
    return 4.0 * np.pi * f.grid.dr * complex(np.sum(f.values * np.conj(g.values) * r * r))
