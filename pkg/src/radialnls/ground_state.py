"""Ground and excited radial states of -omega*Q + Lap Q = -Q^3 by shooting.

The profile equation Q'' + (2/r) Q' = omega*Q - Q^3 is integrated by
fixed-step RK4 from the regular series start
Q(h) ~ q0 + (omega*q0 - q0^3) h^2/6.  In the mechanical analogy (r as
time, friction 2/r) the particle moves in the confining well
W(Q) = Q^4/4 - omega*Q^2/2, so the trajectory type is decided by the
energy H = P^2/2 + W(Q): once H < 0 the solution can never reach Q = 0
again (friction only drains H, and reaching zero needs H >= W(0) = 0).
That gives a clean, total classification:

  * crosses_zero(r) -- Q changes sign at r,
  * diverges(r)     -- the amplitude ceiling 2*q0 is exceeded, or the
                       trajectory is trapped (H < 0) and flees zero,
  * decays          -- |Q| falls below the decay floor by r_max.

Bisection between a trapped and a crossing bracket converges to the
separatrix, which is the decaying state.  Node counts for excited states
are the number of sign changes before trapping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .fields import RadialField, RadialGrid
from .functionals import energy, kinetic_energy, mass, quartic_power

__all__ = [
    "ShootResult",
    "GroundStateProfile",
    "shoot",
    "solve_ground_state",
    "solve_excited",
    "rescale",
]

DEFAULT_SHOOT_STEP = 1e-3


@dataclass(frozen=True)
class ShootResult:
    kind: str  # "decays" | "crosses_zero" | "diverges"
    r: Optional[float]
    crossings: int


@dataclass(frozen=True)
class GroundStateProfile:
    """A solver output: samples of Q on a grid plus its invariants.

    Beyond the stitch radius the stored samples follow the fitted
    asymptotic tail c * exp(-sqrt(omega) r) / r.
    """

    omega: float
    field: RadialField
    shoot_value: float
    node_count: int
    mass: float
    energy: float
    pohozaev_residual: float
    ode_residual: float
    tail_coefficient: float
    stitch_radius: float
    dense_r: np.ndarray
    dense_q: np.ndarray

    @property
    def grid(self) -> RadialGrid:
        return self.field.grid


def _rk4_batch(q0s: np.ndarray, omega: float, dr: float, r_max: float,
               amp_factor: float = 2.0, floor_rel: float = 1e-8,
               keep_dense: bool = False, stop_after_crossings: Optional[int] = None):
    """Integrate a batch of shoot values simultaneously.

    Returns per-trajectory (kind, r_event, crossings) and optionally the
    dense trajectory of the first (single) entry.  When
    stop_after_crossings is set, a trajectory reaching that count is
    classified crosses_zero at the crossing radius and retired.
    """
    q0s = np.atleast_1d(np.asarray(q0s, dtype=np.float64))
    m = q0s.size
    h = dr
    r = h
    # series start removes the 2/r singularity
    a0 = omega * q0s - q0s**3
    Q = q0s + a0 * h * h / 6.0
    P = a0 * h / 3.0

    kind = np.array(["" for _ in range(m)], dtype=object)
    r_event = np.full(m, np.nan)
    crossings = np.zeros(m, dtype=int)
    active = np.ones(m, dtype=bool)
    floor = floor_rel * q0s

    dense_r, dense_q, dense_p = [], [], []
    if keep_dense:
        dense_r.append(r)
        dense_q.append(Q[0])
        dense_p.append(P[0])

    def accel(r_, Q_, P_):
        return omega * Q_ - Q_**3 - 2.0 * P_ / r_

    nsteps = int(np.ceil((r_max - h) / h))
    for _ in range(nsteps):
        k1q = P
        k1p = accel(r, Q, P)
        k2q = P + 0.5 * h * k1p
        k2p = accel(r + 0.5 * h, Q + 0.5 * h * k1q, P + 0.5 * h * k1p)
        k3q = P + 0.5 * h * k2p
        k3p = accel(r + 0.5 * h, Q + 0.5 * h * k2q, P + 0.5 * h * k2p)
        k4q = P + h * k3p
        k4p = accel(r + h, Q + h * k3q, P + h * k3p)
        Qn = Q + (h / 6.0) * (k1q + 2 * k2q + 2 * k3q + k4q)
        Pn = P + (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
        rn = r + h

        crossed = active & (np.sign(Qn) * np.sign(Q) < 0)
        crossings[crossed] += 1
        if stop_after_crossings is not None:
            done = crossed & (crossings >= stop_after_crossings)
            kind[done] = "crosses_zero"
            r_event[done] = rn
            active &= ~done

        # trapped: mechanical energy below the barrier at Q = 0
        H = 0.5 * Pn**2 + 0.25 * Qn**4 - 0.5 * omega * Qn**2
        trapped = active & (H < 0.0) & (np.abs(Qn) > floor)
        kind[trapped] = "diverges"
        r_event[trapped] = rn
        active &= ~trapped

        big = active & (np.abs(Qn) > amp_factor * q0s)
        kind[big] = "diverges"
        r_event[big] = rn
        active &= ~big

        Q, P, r = Qn, Pn, rn
        if keep_dense:
            dense_r.append(r)
            dense_q.append(Q[0])
            dense_p.append(P[0])
        if not active.any() and not keep_dense:
            break

    small = active & (np.abs(Q) <= floor)
    kind[small] = "decays"
    leftover = active & ~small
    kind[leftover] = "diverges"
    r_event[leftover] = r_max

    out = [(str(kind[i]), float(r_event[i]) if np.isfinite(r_event[i]) else None,
            int(crossings[i])) for i in range(m)]
    if keep_dense:
        return out, (np.asarray(dense_r), np.asarray(dense_q), np.asarray(dense_p))
    return out


def shoot(omega: float, q0: float, dr: float = DEFAULT_SHOOT_STEP,
          r_max: Optional[float] = None) -> ShootResult:
    """Classify a single shooting trajectory by its first event."""
    if not (omega > 0 and q0 > 0):
        raise ValueError("need omega > 0 and q0 > 0")
    if r_max is None:
        r_max = 40.0 / np.sqrt(omega)
    (kind, r, ncross), = _rk4_batch(np.array([q0]), omega, dr, r_max,
                                    stop_after_crossings=1)
    return ShootResult(kind, r, ncross)


def _refine(lo: float, hi: float, stop_after, omega, dr, r_max, tol,
            fanout: int = 64, max_rounds: int = 40) -> float:
    """Multisection: split [lo, hi] into `fanout` panels per round and keep
    the panel across which the classification flips to crossing."""
    for _ in range(max_rounds):
        if hi - lo < tol:
            break
        qs = np.linspace(lo, hi, fanout + 1)
        res = _rk4_batch(qs[1:-1], omega, dr, r_max,
                         stop_after_crossings=stop_after)
        flags = [False] + [k == "crosses_zero" for (k, _, _) in res] + [True]
        pivot = next(i for i, fl in enumerate(flags) if fl)
        lo, hi = qs[pivot - 1], qs[pivot]
    return 0.5 * (lo + hi)


def solve_ground_state(omega: float, tol: float = 1e-12,
                       grid: Optional[RadialGrid] = None,
                       dr_shoot: float = DEFAULT_SHOOT_STEP,
                       nodes: int = 0) -> GroundStateProfile:
    """Bisect the shoot value to the separatrix with `nodes` sign changes
    (0 = ground state) and sample the profile on `grid`."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    if grid is None:
        grid = RadialGrid(4096, 40.0 / np.sqrt(omega))
    r_max = 40.0 / np.sqrt(omega)
    stop_after = nodes + 1

    # bracket: geometric scan upward from the well edge sqrt(2 omega)
    scan = np.sqrt(2.0 * omega) * 1.1 ** np.arange(0, 75)
    scan = scan[scan <= 1e3]
    if scan.size == 0 or scan[0] < 1e-3:
        raise ValueError("bracket scan range [1e-3, 1e3] is empty")
    res = _rk4_batch(scan, omega, dr_shoot, r_max, stop_after_crossings=stop_after)
    flips = [k == "crosses_zero" for (k, _, _) in res]
    if not any(flips):
        raise ValueError(
            f"no q0 in [1e-3, 1e3] produces {nodes + 1} crossings at omega={omega}"
        )
    i = flips.index(True)
    if i == 0:
        raise ValueError(f"bracket scan starts already crossing at q0={scan[0]}")
    lo, hi = scan[i - 1], scan[i]
    qstar = _refine(lo, hi, stop_after, omega, dr_shoot, r_max, tol)
    return _build_profile(omega, qstar, nodes, grid, dr_shoot, r_max)


def solve_excited(omega: float, nodes: int, tol: float = 1e-12,
                  grid: Optional[RadialGrid] = None,
                  dr_shoot: float = DEFAULT_SHOOT_STEP) -> GroundStateProfile:
    """Excited state with the given number of sign changes; nodes = 0
    delegates to the ground-state solver."""
    if nodes < 0:
        raise ValueError("nodes must be >= 0")
    return solve_ground_state(omega, tol, grid, dr_shoot, nodes=nodes)


def _build_profile(omega, qstar, nodes, grid, dr_shoot, r_max) -> GroundStateProfile:
    _, (rs, qs, ps) = _rk4_batch(np.array([qstar]), omega, dr_shoot, r_max,
                                 keep_dense=True)
    sw = np.sqrt(omega)

    # trusted range: stop two e-foldings before the trajectory's |Q| minimum
    # past the last node, where the unstable mode has not yet contaminated
    # the tail
    sign = np.sign(qs)
    cross = np.flatnonzero(sign[1:] * sign[:-1] < 0)
    start = int(cross[-1] + 1) if cross.size else 0
    absq = np.abs(qs)
    floor_idx = start + np.flatnonzero(absq[start:] < 1e-10 * qstar)
    i_dev = start + int(np.argmin(absq[start:])) if floor_idx.size == 0 else int(floor_idx[0])
    r_dev = rs[i_dev]
    r_stitch = max(r_dev - 2.0 / sw, 5.0 / sw)
    i_stitch = int(np.searchsorted(rs, r_stitch))
    r_stitch = float(rs[i_stitch])

    # fit the tail coefficient on one e-folding before the stitch radius
    i_fit = int(np.searchsorted(rs, r_stitch - 1.0 / sw))
    window = slice(max(i_fit, 1), i_stitch + 1)
    c = float(np.mean(qs[window] * rs[window] * np.exp(sw * rs[window])))

    spline = CubicSpline(rs[: i_stitch + 1], qs[: i_stitch + 1])
    samples = np.where(
        grid.r <= r_stitch,
        spline(np.minimum(grid.r, r_stitch)),
        c * np.exp(-sw * grid.r) / grid.r,
    )
    field = RadialField(grid, samples.astype(np.complex128))

    # ODE residual by 4th-order central differences on the dense trajectory
    res = _ode_residual(rs, qs, omega, i_stitch)

    k = kinetic_energy(field)
    p = quartic_power(field)
    pohozaev = abs(4.0 * k - 3.0 * p) / (4.0 * k)
    return GroundStateProfile(
        omega=omega,
        field=field,
        shoot_value=float(qstar),
        node_count=nodes,
        mass=mass(field),
        energy=energy(field),
        pohozaev_residual=pohozaev,
        ode_residual=res,
        tail_coefficient=c,
        stitch_radius=r_stitch,
        dense_r=rs[: i_stitch + 1],
        dense_q=qs[: i_stitch + 1],
    )


def _ode_residual(rs, qs, omega, i_end) -> float:
    h = rs[1] - rs[0]
    lo, hi = 2, i_end - 2
    if hi <= lo:
        return float("nan")
    q = qs
    d1 = (-q[lo + 2 : hi + 2] + 8 * q[lo + 1 : hi + 1]
          - 8 * q[lo - 1 : hi - 1] + q[lo - 2 : hi - 2]) / (12 * h)
    d2 = (-q[lo + 2 : hi + 2] + 16 * q[lo + 1 : hi + 1] - 30 * q[lo:hi]
          + 16 * q[lo - 1 : hi - 1] - q[lo - 2 : hi - 2]) / (12 * h * h)
    r = rs[lo:hi]
    resid = d2 + 2.0 * d1 / r - omega * q[lo:hi] + q[lo:hi] ** 3
    return float(np.max(np.abs(resid)))


def rescale(profile: GroundStateProfile, omega_new: float) -> GroundStateProfile:
    """Scaling symmetry Q_w'(r) = sqrt(w'/w) Q(sqrt(w'/w) r), resampled on
    the same grid (tail formula used beyond the rescaled dense range)."""
    if not omega_new > 0:
        raise ValueError("omega_new must be positive")
    if omega_new == profile.omega:
        return profile
    s = np.sqrt(omega_new / profile.omega)
    grid = profile.grid
    sw_new = np.sqrt(omega_new)

    new_dense_r = profile.dense_r / s
    new_dense_q = s * profile.dense_q
    r_stitch = profile.stitch_radius / s
    spline = CubicSpline(new_dense_r, new_dense_q)
    samples = np.where(
        grid.r <= r_stitch,
        spline(np.minimum(grid.r, r_stitch)),
        profile.tail_coefficient * np.exp(-sw_new * grid.r) / grid.r,
    )
    field = RadialField(grid, samples.astype(np.complex128))
    k = kinetic_energy(field)
    p = quartic_power(field)
    return GroundStateProfile(
        omega=omega_new,
        field=field,
        shoot_value=s * profile.shoot_value,
        node_count=profile.node_count,
        mass=mass(field),
        energy=energy(field),
        pohozaev_residual=abs(4.0 * k - 3.0 * p) / (4.0 * k),
        ode_residual=profile.ode_residual,
        tail_coefficient=profile.tail_coefficient,
        stitch_radius=r_stitch,
        dense_r=new_dense_r,
        dense_q=new_dense_q,
    )
