"""Exact free Schrodinger evolution and its decay diagnostics.

In the sine basis the flow i u_t + Lap u = 0 is the diagonal phase map
b_k -> b_k exp(-i (pi k / L)^2 t): exactly unitary, exact group law, valid
for both time directions until radiation reaches the Dirichlet wall.

kernel_oracle re-evaluates the same evolution through the closed-form
kernel

    (4 pi i t)^(-3/2) integral exp(i|x-y|^2 / 4t) f(y) dy

by direct quadrature, giving an independent cross-check of the spectral
route.  The square-root branch is the principal one, the unique choice
continuous at t -> 0+ with value 1; it reproduces the Gaussian law
exp(-r^2) -> (1+4it)^(-3/2) exp(-r^2/(1+4it)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import RadialField, SpectralField, from_spectral, to_spectral
from .functionals import (
    gradient_profile,
    lp_norm,
    sup_amplitude,
    wall_contact,
)

__all__ = [
    "propagate_free",
    "DispersiveFit",
    "dispersive_fit",
    "kernel_oracle",
    "LocalDecaySeries",
    "local_decay_probe",
]


def propagate_free(f: RadialField, t: float) -> RadialField:
    """Apply exp(i t Lap) by phase-rotating the sine coefficients."""
    if t == 0.0:
        return f
    s = to_spectral(f)
    w = (np.pi * np.arange(1, f.grid.n) / f.grid.L) ** 2
    return from_spectral(SpectralField(f.grid, s.coefficients * np.exp(-1j * w * t)))


@dataclass(frozen=True)
class DispersiveFit:
    """Least-squares decay exponent of log sup|exp(itLap) f| vs log t."""

    exponent: float
    times: np.ndarray
    sup_values: np.ndarray
    reliable: bool


def dispersive_fit(f: RadialField, times) -> DispersiveFit:
    """Fit the sup-norm decay rate over the given times (all >= 1,
    spanning at least a decade).  The result is flagged unreliable as soon
    as any evolved state shows wall contact, since reflections break the
    free-space decay law."""
    times = np.sort(np.asarray(times, dtype=np.float64))
    if times[0] < 1.0:
        raise ValueError("dispersive fit requires times >= 1")
    if times[-1] / times[0] < 10.0:
        raise ValueError("dispersive fit requires times spanning at least a decade")
    sups = np.empty_like(times)
    reliable = True
    for i, t in enumerate(times):
        g = propagate_free(f, t)
        sups[i] = sup_amplitude(g)
        if wall_contact(g):
            reliable = False
    slope = float(np.polyfit(np.log(times), np.log(sups), 1)[0])
    return DispersiveFit(slope, times, sups, reliable)


def kernel_oracle(f: RadialField, t: float, r: float, n_angular: int = 512) -> complex:
    """Evaluate exp(itLap) f at radius r straight from the kernel integral.

    The angular integral uses the substitution s = cos(theta), handled by
    Gauss-Legendre; the radial integral is the trapezoid rule on the
    field's own grid.  Agreement with propagate_free on smooth data is at
    the 1e-4 level for the reference 4096-node grid.
    """
    if t == 0.0:
        raise ValueError("kernel is singular at t = 0")
    y = f.grid.r
    s_nodes, s_weights = np.polynomial.legendre.leggauss(n_angular)
    # phase (r^2 - 2 r y s + y^2) / 4t over the (y, s) product grid
    phase = (r * r + y[:, None] ** 2 - 2.0 * r * y[:, None] * s_nodes[None, :]) / (4.0 * t)
    ang = np.exp(1j * phase) @ s_weights
    radial = np.sum(f.values * y * y * ang) * f.grid.dr
    return complex((4j * np.pi * t) ** -1.5 * 2.0 * np.pi * radial)


@dataclass(frozen=True)
class LocalDecaySeries:
    times: np.ndarray
    weighted_h1: np.ndarray   # integral <x>^(-eps) (|u|^2 + |grad u|^2) dx
    l4_fourth: np.ndarray     # ||u||_L4^4 along the same run
    reliable: bool


def local_decay_probe(f: RadialField, eps: float, times) -> LocalDecaySeries:
    """Track the <x>^(-eps)-weighted H1 content of the free evolution.

    Both series tend to zero for H1 data before wall effects; the run is
    flagged once wall contact appears.
    """
    times = np.asarray(times, dtype=np.float64)
    grid = f.grid
    weight = (1.0 + grid.r**2) ** (-eps / 2.0) * grid.r**2
    wvals = np.empty_like(times)
    l4 = np.empty_like(times)
    reliable = True
    for i, t in enumerate(times):
        g = propagate_free(f, t) if t != 0.0 else f
        du = gradient_profile(g)
        dens = np.abs(g.values) ** 2 + np.abs(du) ** 2
        wvals[i] = 4.0 * np.pi * grid.dr * float(np.sum(weight * dens))
        l4[i] = lp_norm(g, 4) ** 4
        if wall_contact(g):
            reliable = False
    return LocalDecaySeries(times, wvals, l4, reliable)
