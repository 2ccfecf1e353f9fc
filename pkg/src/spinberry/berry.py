"""Geometric phase of adiabatic cycles as a loop integral.

For a closed cycle of the field orientation and coupling ratio, the phase
acquired by the level labeled m is

    beta(m) = - int [m - p(m, lambda) cos(theta)] phi_dot dt
              - int [m - p(m, lambda)] alpha_dot dt

with p the polarization of the instantaneous eigenstate.  The integrand is
the pullback of an Abelian gauge field with components

    A_phi = -m + p cos(theta),   A_alpha = -m + p,

so beta is invariant under gauge functions periodic in phi (period 2 pi)
and alpha (period pi).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .hamiltonian import SpectrumTracker, polarization
from .schedules import CycleSchedule
from .spin_algebra import SpinRep


@dataclass(frozen=True)
class GaugeField:
    """Components of the loop-integral gauge field at one parameter point."""

    a_phi: float
    a_alpha: float


@dataclass(frozen=True)
class BerryPhaseResult:
    """Un-wrapped geometric phase plus its mod-2pi companion.

    ``winding_phase`` is the pure winding contribution -m (2 n_phi + n_alpha) pi
    that the phase formula contains independently of the polarization.
    """

    value: float
    mod_2pi: float
    winding_phase: float
    quad_points: int


def _wrap(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = np.remainder(angle + np.pi, 2 * np.pi) - np.pi
    return float(2 * np.pi + wrapped if wrapped == -np.pi else wrapped)


def _quad_grid(duration: float, quad_points: int):
    n = int(quad_points)
    if n < 3:
        raise ValueError("quad_points must be at least 3")
    if n % 2 == 0:
        n += 1  # composite Simpson needs an odd node count
    return np.linspace(0.0, duration, n)


def _polarizations(rep: SpinRep, m: float, lams: np.ndarray,
                   grid_step: float = 0.01) -> np.ndarray:
    """p(m, lambda(t)) along a continuous lambda path, label-tracked."""
    tracker = SpectrumTracker(rep, grid_step=grid_step)
    out = np.empty(lams.size)
    last_lam = None
    last_p = None
    for i, lam in enumerate(lams):
        if last_lam is not None and lam == last_lam:
            out[i] = last_p
            continue
        out[i] = tracker.advance(lam).polarization(m)
        last_lam, last_p = lam, out[i]
    return out


def berry_phase_adiabatic(rep: SpinRep, m: float, schedule: CycleSchedule,
                          quad_points: int = 4097) -> BerryPhaseResult:
    """Geometric phase of the cycle for the level labeled m.

    Composite Simpson quadrature on a uniform time grid; the polarization
    is re-solved at every node with labels continued along the path.
    """
    schedule.validate()
    ts = _quad_grid(schedule.duration, quad_points)
    lams = np.array([schedule.lam(t) for t in ts])
    p = _polarizations(rep, m, lams)
    cos_theta = np.cos([schedule.theta(t) for t in ts])
    phi_dot = np.array([schedule.phi_dot(t) for t in ts])
    alpha_dot = np.array([schedule.alpha_dot(t) for t in ts])
    integrand = -(m - p * cos_theta) * phi_dot - (m - p) * alpha_dot
    value = float(simpson(integrand, x=ts))
    winding = -m * (2 * schedule.n_phi + schedule.n_alpha) * np.pi
    return BerryPhaseResult(value=value, mod_2pi=_wrap(value),
                            winding_phase=winding, quad_points=ts.size)


def gauge_field(rep: SpinRep, m: float, lam: float, theta: float,
                grid_step: float = 0.01) -> GaugeField:
    """Gauge-field components at the parameter point (lambda, theta, m)."""
    p = polarization(rep, m, lam, grid_step)
    return GaugeField(a_phi=-m + p * np.cos(theta), a_alpha=-m + p)


def gauge_field_sphere(rep: SpinRep, m: float, theta_tilde: float,
                       grid_step: float = 0.01) -> float:
    """A_alpha on the spherical section lambda = -2 cot(theta_tilde).

    The map sends the open interval 0 < theta_tilde < pi onto the whole
    lambda axis; the poles are excluded because lambda diverges there.
    """
    if not 0.0 < theta_tilde < np.pi:
        raise ValueError("theta_tilde must lie strictly inside (0, pi)")
    lam = -2.0 / np.tan(theta_tilde)
    return gauge_field(rep, m, lam, theta=0.0, grid_step=grid_step).a_alpha


def gauge_invariance_check(rep: SpinRep, m: float, schedule: CycleSchedule,
                           g, quad_points: int = 4097,
                           fd_step: float = 1e-6) -> float:
    """|beta_gauged - beta| for a gauge function g(phi, theta, alpha, lambda).

    The gauge transformation shifts A_phi and A_alpha by the respective
    partial derivatives of g (taken by central differences), so only the
    added term needs to be integrated.  For admissible g (periodic in phi
    and alpha with periods 2 pi and pi) the result is quadrature noise.
    """
    schedule.validate()
    ts = _quad_grid(schedule.duration, quad_points)

    def dg_dphi(phi, theta, alpha, lam):
        return (g(phi + fd_step, theta, alpha, lam)
                - g(phi - fd_step, theta, alpha, lam)) / (2 * fd_step)

    def dg_dalpha(phi, theta, alpha, lam):
        return (g(phi, theta, alpha + fd_step, lam)
                - g(phi, theta, alpha - fd_step, lam)) / (2 * fd_step)

    integrand = np.empty(ts.size)
    for i, t in enumerate(ts):
        args = (schedule.phi(t), schedule.theta(t), schedule.alpha(t),
                schedule.lam(t))
        integrand[i] = (dg_dphi(*args) * schedule.phi_dot(t)
                        + dg_dalpha(*args) * schedule.alpha_dot(t))
    return abs(float(simpson(integrand, x=ts)))
