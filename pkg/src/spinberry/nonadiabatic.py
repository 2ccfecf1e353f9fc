"""Non-adiabatic corrections from the rotating-frame analysis.

In the frame co-rotating with the fields, the Coriolis effect adds an
effective magnetic field.  Its longitudinal part enters only through the
ratio eta = (cos(theta) phi_dot + alpha_dot) / (gamma_S B) and produces a
purely dynamical phase whose odd-in-eta content is captured, to all
orders, by the kernel

    Delta_p(m, lambda, eta) = [ (1+eta) E(m, lambda/(1+eta))
                               - (1-eta) E(m, lambda/(1-eta)) ] / (2 eta)
                              - p(m, lambda),

an even function of eta with small-eta limit q(m, lambda) eta^2 where
q = -(lambda^3 E''' + 3 lambda^2 E'') / 6.  For the m = 0 level there is
a "magic" coupling lambda*(S, eta) at which Delta_p vanishes identically,
cancelling every odd-order correction at once.

The transverse part mixes opposite-parity levels and contributes at
second order in mu = sin(theta) phi_dot / (gamma_S B): an energy shift
E_perp2 computed from two auxiliary problems H(lambda) - mu Sigma_{x,y},
its phase-relevant combination p2 = (1 + lambda d/dlambda) E_perp2, and a
rotating-frame geometric term C_xy built from the first-order
perturbation vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq

from .hamiltonian import SpectrumTracker, labeled_spectrum, polarization
from .schedules import CycleSchedule
from .spin_algebra import SpinRep

# Taylor branch threshold for the eta -> 0 limit of delta_p; below this the
# direct odd difference of O(1) energies is dominated by float cancellation.
_ETA_SERIES_THRESHOLD = 1e-3

# Gap handling for the transverse perturbation sums.
_GAP_ERROR = 1e-6
_GAP_WARN = 1e-2

# Even-power polynomial fits of the magic coupling against eta, valid for
# |eta| <= 0.5, quoted to six significant digits.
MAGIC_LAMBDA_FIT_COEFFS = {
    2: (0.838213, -0.0837823, -0.0431478, -0.0231887, -0.0207986),
    4: (0.509982, -0.0900927, -0.0349985, -0.0436495, 0.0373634),
}

# Root brackets for the magic-coupling search, per spin.
_MAGIC_BRACKETS = {2: (0.3, 1.2), 4: (0.2, 0.8)}
_MAGIC_BRACKET_DEFAULT = (0.05, 2.0)


class NearDegeneracyError(RuntimeError):
    """A perturbation-sum denominator fell below the safe gap threshold."""


class NoRootError(RuntimeError):
    """The magic-coupling search bracket contains no sign change."""


@dataclass(frozen=True)
class CoriolisParams:
    """Rotating-frame field ratios: longitudinal eta and transverse mu."""

    eta: float
    mu: float
    mu_tilde: float

    def __post_init__(self):
        if abs(self.eta) >= 1.0:
            raise ValueError(f"|eta| must be < 1, got {self.eta}")
        expected = self.mu / (1.0 - self.eta)
        if abs(self.mu_tilde - expected) > 1e-12 * max(1.0, abs(expected)):
            raise ValueError("mu_tilde inconsistent with mu and eta")

    @classmethod
    def from_rates(cls, theta: float, phi_dot: float, alpha_dot: float,
                   gamma_b: float = 1.0) -> "CoriolisParams":
        eta = (np.cos(theta) * phi_dot + alpha_dot) / gamma_b
        mu = np.sin(theta) * phi_dot / gamma_b
        return cls(eta=eta, mu=mu, mu_tilde=mu / (1.0 - eta))


def q_coefficient(rep: SpinRep, m: float, lam: float,
                  grid_step: float = 0.01) -> float:
    """Leading even-order kernel q(m, lambda) = -(lam^3 E''' + 3 lam^2 E'')/6.

    Evaluated through the algebraically identical form
    (lam^2 p'' + 2 lam p') / 6 so that only derivatives of the exactly
    computed polarization are needed; third differences of E alone are too
    noisy in float64 for the accuracy this quantity deserves.
    """
    h = 1e-3 * max(1.0, abs(lam))

    def p(x):
        return polarization(rep, m, x, grid_step)

    def d1(hh):
        return (p(lam + hh) - p(lam - hh)) / (2 * hh)

    def d2(hh):
        return (p(lam + hh) - 2 * p(lam) + p(lam - hh)) / hh**2

    p1 = (4 * d1(h / 2) - d1(h)) / 3
    p2 = (4 * d2(h / 2) - d2(h)) / 3
    return (lam**2 * p2 + 2 * lam * p1) / 6.0


def delta_p(rep: SpinRep, m: float, lam: float, eta: float,
            grid_step: float = 0.01) -> float:
    """All-orders even-in-eta correction kernel Delta_p(m, lambda, eta).

    |eta| must be below one (the rescaled coupling lambda/(1 -+ eta) would
    diverge otherwise).  For |eta| below the series threshold the value is
    q(m, lambda) eta^2, whose truncation error O(eta^4) is far below the
    float cancellation noise of the direct difference there.
    """
    if abs(eta) >= 1.0:
        raise ValueError(f"|eta| must be < 1, got {eta}")
    if abs(eta) < _ETA_SERIES_THRESHOLD:
        if eta == 0.0:
            return 0.0
        return q_coefficient(rep, m, lam, grid_step) * eta**2
    plus = (1.0 + eta) * labeled_spectrum(rep, lam / (1.0 + eta), grid_step).energy(m)
    minus = (1.0 - eta) * labeled_spectrum(rep, lam / (1.0 - eta), grid_step).energy(m)
    return (plus - minus) / (2.0 * eta) - polarization(rep, m, lam, grid_step)


def magic_lambda_fit(two_s: int, eta: float) -> float:
    """Published polynomial fit of the magic coupling (S = 2 or 4 only)."""
    s = two_s // 2
    if two_s % 2 or s not in MAGIC_LAMBDA_FIT_COEFFS:
        raise ValueError(f"no fit available for two_s={two_s}")
    coeffs = MAGIC_LAMBDA_FIT_COEFFS[s]
    return float(sum(c * eta ** (2 * k) for k, c in enumerate(coeffs)))


def magic_lambda(rep: SpinRep, eta: float, grid_step: float = 0.01) -> float:
    """Root lambda*(S, eta) of Delta_p(0, lambda, eta) = 0.

    Defined for integer spins with an m = 0 level; at eta = 0 the equation
    degenerates (Delta_p is identically zero), so the root of the limiting
    kernel q(0, lambda) is returned instead.  Valid for |eta| <= 0.5.
    """
    if rep.two_s % 2 != 0:
        raise ValueError("magic coupling needs an m = 0 level (integer spin)")
    if abs(eta) > 0.5:
        raise ValueError(f"|eta| <= 0.5 required, got {eta}")

    if abs(eta) < _ETA_SERIES_THRESHOLD:
        def objective(lam):
            return q_coefficient(rep, 0.0, lam, grid_step)
    else:
        def objective(lam):
            return delta_p(rep, 0.0, lam, eta, grid_step) / eta**2

    lo, hi = _MAGIC_BRACKETS.get(rep.two_s // 2, _MAGIC_BRACKET_DEFAULT)
    flo, fhi = objective(lo), objective(hi)
    if max(abs(flo), abs(fhi)) < 1e-9:
        raise NoRootError(
            f"correction kernel is numerically zero on [{lo}, {hi}]; "
            f"no isolated magic coupling exists for this spin")
    if flo * fhi > 0.0:
        raise NoRootError(
            f"no sign change of Delta_p(0, lambda, eta={eta}) in [{lo}, {hi}]")
    root = brentq(objective, lo, hi, xtol=1e-13, rtol=8.9e-16)
    residual = abs(delta_p(rep, 0.0, root, eta, grid_step))
    if residual > 1e-10:
        raise NoRootError(f"root polish failed, |Delta_p| = {residual:.2e}")
    return float(root)


@dataclass(frozen=True)
class TransverseShift:
    """Second-order transverse energy shift with its cross-validation data.

    ``value`` is the half-sum of the x and y auxiliary shifts from the
    explicit sum over opposite-parity states; ``mu_interpolated`` is the
    same quantity recovered from finite-mu auxiliary spectra extrapolated
    to mu = 0 (an independent solver path kept for cross-checks).
    """

    value: float
    ex: float
    ey: float
    mu_interpolated: float
    min_gap: float
    large_correction: bool


def _transverse_elements(rep: SpinRep, m: float, lam: float, grid_step: float):
    """Matrix elements and gaps entering the opposite-parity sums."""
    spec = labeled_spectrum(rep, lam, grid_step)
    i = spec.index_of(m)
    vi = spec.vectors[:, i]
    sy_real = (rep.sigma_y / 1j).real  # Sigma_y = i * A with A real
    rows = []
    min_gap = np.inf
    for n in range(rep.dim):
        if n == i or (n - i) % 2 == 0:
            continue
        gap = spec.energies[i] - spec.energies[n]
        min_gap = min(min_gap, abs(gap))
        vn = spec.vectors[:, n]
        x_nm = float(vn @ rep.sigma_x @ vi)
        y_nm = float(vn @ sy_real @ vi)  # <n|Sigma_y|m> = i * y_nm
        rows.append((gap, x_nm, y_nm))
    if min_gap < _GAP_ERROR:
        raise NearDegeneracyError(
            f"opposite-parity gap {min_gap:.2e} below {_GAP_ERROR:.0e} "
            f"at lambda={lam}")
    return spec, rows, float(min_gap)


def transverse_second_order(rep: SpinRep, m: float, lam: float,
                            grid_step: float = 0.01,
                            mu_probe: float = 1e-3) -> TransverseShift:
    """Second-order transverse energy shift E_perp2(m, lambda).

    Two routes are computed: the explicit sum over opposite-parity states,
    and Richardson extrapolation of the auxiliary spectra of
    H(lambda) - mu Sigma_{x,y} toward mu = 0.  Cross terms in Sigma_x
    Sigma_y cancel by symmetry, so the shift is the plain half-sum of the
    two auxiliary shifts (the squared rotation factors average to 1/2 for
    slowly varying rotation rates).
    """
    spec, rows, min_gap = _transverse_elements(rep, m, lam, grid_step)
    ex = sum(x * x / gap for gap, x, _ in rows)
    ey = sum(y * y / gap for gap, _, y in rows)

    i = spec.index_of(m)
    vi = spec.vectors[:, i]
    e0 = spec.energies[i]
    h0 = rep.sigma_z + lam * (rep.sigma_x @ rep.sigma_x)
    interpolated = {}
    for name, op in (("x", rep.sigma_x), ("y", rep.sigma_y)):
        ratios = []
        for mu in (mu_probe, 2 * mu_probe):
            w, v = np.linalg.eigh(h0 - mu * op)
            j = int(np.argmax(np.abs(vi @ v)))
            ratios.append((w[j] - e0) / mu**2)
        interpolated[name] = (4 * ratios[0] - ratios[1]) / 3
    return TransverseShift(value=0.5 * (ex + ey), ex=float(ex), ey=float(ey),
                           mu_interpolated=float(0.5 * (interpolated["x"]
                                                        + interpolated["y"])),
                           min_gap=min_gap,
                           large_correction=min_gap < _GAP_WARN)


def p2_coefficient(rep: SpinRep, m: float, lam: float,
                   grid_step: float = 0.01) -> float:
    """Transverse phase coefficient p2 = (1 + lambda d/dlambda) E_perp2."""
    h = 1e-3 * max(1.0, abs(lam))

    def e2(x):
        return transverse_second_order(rep, m, x, grid_step).value

    def d1(hh):
        return (e2(lam + hh) - e2(lam - hh)) / (2 * hh)

    derivative = (4 * d1(h / 2) - d1(h)) / 3
    return e2(lam) + lam * derivative


def cxy_coefficient(rep: SpinRep, m: float, lam: float,
                    grid_step: float = 0.01) -> float:
    """Rotating-frame geometric coefficient C_xy = Im <psi_y^1 | psi_x^1>.

    The first-order perturbation vectors of the two auxiliary problems
    live in the opposite-parity subspace; with real eigenvectors the x
    elements are real and the y elements purely imaginary, so the overlap
    is purely imaginary and the sum below is exact.
    """
    _, rows, _ = _transverse_elements(rep, m, lam, grid_step)
    return float(sum(-x * y / gap**2 for gap, x, y in rows))


def longitudinal_phase(rep: SpinRep, m: float, schedule: CycleSchedule,
                       eta_of_t=None, quad_points: int = 4097,
                       grid_step: float = 0.01):
    """Rotating-frame longitudinal dynamical phase and its O(eta) part.

    Returns ``(full, first_order)`` where

        full        = - int b (1 - eta) E(m, lambda/(1 - eta)) dt
        first_order = + int b eta p(m, lambda) dt

    The first-order part equals the geometric phase minus the winding term
    whenever ``eta_of_t`` is the rotation-rate ratio of the schedule itself
    (the default).  Supplying ``eta_of_t`` explicitly allows reversed or
    rescaled rotation rates without rebuilding the schedule.
    """
    schedule.validate()
    if eta_of_t is None:
        eta_of_t = schedule.eta
    ts = np.linspace(0.0, schedule.duration,
                     quad_points + 1 if quad_points % 2 == 0 else quad_points)
    etas = np.array([eta_of_t(t) for t in ts])
    if np.any(np.abs(etas) >= 1.0):
        raise ValueError("|eta(t)| must stay below 1 on the whole cycle")
    bs = np.array([schedule.b(t) for t in ts])
    lams = np.array([schedule.lam(t) for t in ts])

    tracker = SpectrumTracker(rep, grid_step=grid_step)
    full_integrand = np.empty(ts.size)
    for i in range(ts.size):
        spec = tracker.advance(lams[i] / (1.0 - etas[i]))
        full_integrand[i] = -bs[i] * (1.0 - etas[i]) * spec.energy(m)
    full = float(simpson(full_integrand, x=ts))

    tracker = SpectrumTracker(rep, grid_step=grid_step)
    p_integrand = np.empty(ts.size)
    for i in range(ts.size):
        p_integrand[i] = bs[i] * etas[i] * tracker.advance(lams[i]).polarization(m)
    first_order = float(simpson(p_integrand, x=ts))
    return full, first_order
