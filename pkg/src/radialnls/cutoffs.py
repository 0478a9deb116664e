"""Smooth radial cutoffs and dyadic frequency-band multipliers.

The ramp is the explicit C^1 profile

    psi(s) = 1                      s <= 1/2
           = cos^2(pi (s - 1/2))    1/2 < s < 1
           = 0                      s >= 1

so eta_R(x) = psi(|x|/R) equals 1 on B(0, R/2) and vanishes outside
B(0, R).  Band multipliers m_j(rho) = psi(rho/2^(j+1)) - psi(rho/2^j)
telescope exactly for any ramp, which is all the decomposition identities
need.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import RadialField, from_spectral, to_spectral

__all__ = [
    "ramp",
    "ramp_derivative",
    "CutoffSpec",
    "LittlewoodPaleyBank",
    "lp_project",
    "lp_lowpass",
    "max_band_index",
]


def ramp(s):
    """The cos^2 ramp psi(s): 1 below 1/2, 0 above 1."""
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros_like(s)
    out[s <= 0.5] = 1.0
    mid = (s > 0.5) & (s < 1.0)
    out[mid] = np.cos(np.pi * (s[mid] - 0.5)) ** 2
    return out


def ramp_derivative(s, order: int = 1):
    """Piecewise derivative of the ramp.  On the open ramp interval
    psi(s) = (1 - cos(2 pi s))/2, so derivatives are trigonometric;
    outside it they vanish.  The ramp is C^1: order >= 2 jumps at the
    joints, which is harmless for quadrature."""
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros_like(s)
    mid = (s > 0.5) & (s < 1.0)
    w = 2.0 * np.pi
    phase = w * s[mid]
    if order == 1:
        out[mid] = np.pi * np.sin(phase)
    elif order == 2:
        out[mid] = 2.0 * np.pi**2 * np.cos(phase)
    elif order == 3:
        out[mid] = -4.0 * np.pi**3 * np.sin(phase)
    elif order == 4:
        out[mid] = -8.0 * np.pi**4 * np.cos(phase)
    else:
        raise ValueError(f"unsupported derivative order {order}")
    return out


@dataclass(frozen=True)
class CutoffSpec:
    """eta_R(x) = psi(|x|/R): 1 on B(0, R/2), 0 outside B(0, R)."""

    R: float

    def __post_init__(self):
        if not (self.R > 0):
            raise ValueError(f"cutoff radius must be positive, got {self.R}")

    def eta(self, r):
        return ramp(np.asarray(r) / self.R)

    def eta_derivative(self, r, order: int = 1):
        return ramp_derivative(np.asarray(r) / self.R, order) / self.R**order

    def apply(self, f: RadialField) -> RadialField:
        return RadialField(f.grid, self.eta(f.grid.r) * f.values)

    def apply_complement(self, f: RadialField) -> RadialField:
        return RadialField(f.grid, (1.0 - self.eta(f.grid.r)) * f.values)


def band_multiplier(rho, j: int):
    """m_j(rho) = psi(rho/2^(j+1)) - psi(rho/2^j), supported on
    2^(j-1) <= rho <= 2^(j+1)."""
    rho = np.asarray(rho, dtype=np.float64)
    return ramp(rho / 2.0 ** (j + 1)) - ramp(rho / 2.0**j)


def max_band_index(grid) -> int:
    """Largest j with 2^(j+1) <= rho_max, i.e. the band fits under Nyquist."""
    return int(np.floor(np.log2(grid.rho_max))) - 1


@dataclass(frozen=True)
class LittlewoodPaleyBank:
    """Dyadic band indices j_min..j_max with multipliers on the rho grid.

    The telescoping identity

        sum_j m_j(rho) + psi(rho/2^j_min) = psi(rho/2^(j_max+1))

    holds exactly for every rho, so a low-pass remainder plus all bands
    reconstructs any field whose spectrum sits under 2^j_max.
    """

    j_min: int
    j_max: int

    def __post_init__(self):
        if self.j_max < self.j_min:
            raise ValueError("j_max must be >= j_min")

    @property
    def bands(self):
        return range(self.j_min, self.j_max + 1)

    def multiplier(self, rho, j: int):
        return band_multiplier(rho, j)

    def lowpass_multiplier(self, rho):
        """psi(rho/2^j_min): everything below the first band."""
        return ramp(np.asarray(rho) / 2.0**self.j_min)

    def telescoped(self, rho):
        """Sum of all band multipliers plus the low-pass remainder;
        equals psi(rho/2^(j_max+1)) identically."""
        total = self.lowpass_multiplier(rho)
        for j in self.bands:
            total = total + self.multiplier(rho, j)
        return total


def lp_project(f: RadialField, j: int) -> RadialField:
    """Littlewood-Paley band restriction P_j f.

    The output spectrum is confined to 2^(j-1) <= rho <= 2^(j+1); real
    input gives real output since the multiplier is real.
    """
    jmax = max_band_index(f.grid)
    if j > jmax:
        raise ValueError(
            f"band j={j} exceeds the grid Nyquist; largest representable band is j={jmax}"
        )
    s = to_spectral(f)
    m = band_multiplier(s.rho, j)
    out = from_spectral(type(s)(f.grid, m * s.coefficients))
    if f.is_real():
        out = RadialField(f.grid, out.values.real.astype(np.complex128))
    return out


def lp_lowpass(f: RadialField, j: int) -> RadialField:
    """Low-pass through all bands up to and including j: multiplier
    psi(rho/2^(j+1))."""
    s = to_spectral(f)
    m = ramp(s.rho / 2.0 ** (j + 1))
    out = from_spectral(type(s)(f.grid, m * s.coefficients))
    if f.is_real():
        out = RadialField(f.grid, out.values.real.astype(np.complex128))
    return out
