"""Time-parameterized cycles of the Hamiltonian parameters.

A :class:`CycleSchedule` bundles theta(t), phi(t), alpha(t), lambda(t) and
the field magnitude b(t) = B(t)/B0 over [0, T], together with the winding
integers of the two periodic angles.  Closed cycles obey

    theta(T) = theta(0),  lambda(T) = lambda(0),
    phi(T) = phi(0) + 2 pi n_phi,  alpha(T) = alpha(0) + pi n_alpha.

Time is measured in units of 1/(gamma_S B0) everywhere.

Schedules are built from segment lists (ramp / rotate / hold), from
tabulated samples (cubic-spline interpolated), or loaded from a flat
key-value text file; see :func:`from_file` for the format.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .pulses import PulseShape


class ScheduleError(ValueError):
    """A schedule violates the cycle boundary conditions or is malformed."""


def _const(value):
    v = float(value)
    return lambda t: v


@dataclass(frozen=True)
class CycleSchedule:
    duration: float
    theta: Callable[[float], float]
    phi: Callable[[float], float]
    alpha: Callable[[float], float]
    lam: Callable[[float], float]
    theta_dot: Callable[[float], float]
    phi_dot: Callable[[float], float]
    alpha_dot: Callable[[float], float]
    lam_dot: Callable[[float], float]
    n_phi: int = 0
    n_alpha: int = 0
    b: Callable[[float], float] = field(default_factory=lambda: _const(1.0))

    def validate(self, tol: float = 1e-9) -> None:
        """Raise :class:`ScheduleError` if the boundary conditions fail."""
        T = self.duration
        if not (np.isfinite(T) and T > 0):
            raise ScheduleError(f"duration must be positive, got {T}")
        checks = [
            ("theta", self.theta(T) - self.theta(0.0)),
            ("lambda", self.lam(T) - self.lam(0.0)),
            ("phi", self.phi(T) - self.phi(0.0) - 2 * np.pi * self.n_phi),
            ("alpha", self.alpha(T) - self.alpha(0.0) - np.pi * self.n_alpha),
        ]
        for name, residual in checks:
            if abs(residual) > tol:
                raise ScheduleError(
                    f"boundary condition violated for {name}: residual {residual:.3e}")

    def eta(self, t: float) -> float:
        """Longitudinal rotation-rate ratio (cos(theta) phi_dot + alpha_dot)/b."""
        return (np.cos(self.theta(t)) * self.phi_dot(t) + self.alpha_dot(t)) / self.b(t)

    def mirror(self) -> "CycleSchedule":
        """The image cycle with phi and alpha (and their windings) negated."""
        phi, alpha = self.phi, self.alpha
        phi_dot, alpha_dot = self.phi_dot, self.alpha_dot
        return replace(self,
                       phi=lambda t: -phi(t), alpha=lambda t: -alpha(t),
                       phi_dot=lambda t: -phi_dot(t),
                       alpha_dot=lambda t: -alpha_dot(t),
                       n_phi=-self.n_phi, n_alpha=-self.n_alpha)

    def scaled_field(self, xi: float) -> "CycleSchedule":
        """Same cycle with the field magnitude b(t) multiplied by xi > 0."""
        if xi <= 0:
            raise ScheduleError("field scale must be positive")
        b = self.b
        return replace(self, b=lambda t: xi * b(t))


@dataclass(frozen=True)
class Segment:
    """One stage of a piecewise schedule.

    kind ``ramp``  : lambda moves to ``lambda_to`` (shape-profiled).
    kind ``rotate``: phi advances by 2 pi ``phi_turns`` and alpha by
                     pi ``alpha_half_turns`` (shape-profiled rates).
    kind ``hold``  : nothing changes.
    """

    kind: str
    duration: float
    shape: str = "blackman"
    lambda_to: float | None = None
    phi_turns: int = 0
    alpha_half_turns: int = 0

    def __post_init__(self):
        if self.kind not in ("ramp", "rotate", "hold"):
            raise ScheduleError(f"unknown segment kind {self.kind!r}")
        if self.duration <= 0:
            raise ScheduleError("segment duration must be positive")
        if self.kind == "ramp" and self.lambda_to is None:
            raise ScheduleError("ramp segment needs lambda_to")
        PulseShape(self.shape)


class _PiecewiseParam:
    """Value/rate of one parameter across a segment list."""

    def __init__(self, starts, durations, base_values, deltas, shapes):
        self.starts = starts
        self.durations = durations
        self.base_values = base_values
        self.deltas = deltas
        self.shapes = shapes
        self.total = starts[-1] + durations[-1]

    def _locate(self, t):
        t = min(max(t, 0.0), self.total)
        i = bisect.bisect_right(self.starts, t) - 1
        i = max(0, min(i, len(self.starts) - 1))
        s = (t - self.starts[i]) / self.durations[i]
        return i, min(max(s, 0.0), 1.0)

    def value(self, t):
        i, s = self._locate(t)
        if self.deltas[i] == 0.0:
            return self.base_values[i]
        return self.base_values[i] + self.deltas[i] * self.shapes[i].fraction(s)

    def rate(self, t):
        i, s = self._locate(t)
        if self.deltas[i] == 0.0:
            return 0.0
        return self.deltas[i] * self.shapes[i].rate(s) / self.durations[i]


def from_segments(segments, theta0: float = 0.0, phi0: float = 0.0,
                  alpha0: float = 0.0, lambda0: float = 0.0,
                  b: float = 1.0) -> CycleSchedule:
    """Assemble a schedule from a list of :class:`Segment`."""
    if not segments:
        raise ScheduleError("need at least one segment")
    starts, durations = [], []
    t = 0.0
    for seg in segments:
        starts.append(t)
        durations.append(seg.duration)
        t += seg.duration

    def build(initial, delta_of):
        # delta_of(seg, value) -> change over the segment given the running value
        bases, deltas, shapes = [], [], []
        value = initial
        for seg in segments:
            d = delta_of(seg, value)
            bases.append(value)
            deltas.append(d)
            shapes.append(PulseShape(seg.shape))
            value += d
        return _PiecewiseParam(starts, durations, bases, deltas, shapes)

    lam = build(lambda0, lambda seg, v: float(seg.lambda_to) - v
                if seg.kind == "ramp" else 0.0)
    phi = build(phi0, lambda seg, v: 2 * np.pi * seg.phi_turns
                if seg.kind == "rotate" else 0.0)
    alpha = build(alpha0, lambda seg, v: np.pi * seg.alpha_half_turns
                  if seg.kind == "rotate" else 0.0)

    n_phi = sum(seg.phi_turns for seg in segments if seg.kind == "rotate")
    n_alpha = sum(seg.alpha_half_turns for seg in segments if seg.kind == "rotate")

    return CycleSchedule(
        duration=t,
        theta=_const(theta0), phi=phi.value, alpha=alpha.value, lam=lam.value,
        theta_dot=_const(0.0), phi_dot=phi.rate, alpha_dot=alpha.rate,
        lam_dot=lam.rate, n_phi=n_phi, n_alpha=n_alpha, b=_const(b))


def alpha_rotation_cycle(lambda0: float, n_alpha: int, duration: float,
                         shape: str = "blackman", theta0: float = 0.0) -> CycleSchedule:
    """Cycle in which alpha winds by n_alpha * pi at fixed lambda."""
    seg = Segment(kind="rotate", duration=duration, shape=shape,
                  alpha_half_turns=n_alpha)
    return from_segments([seg], theta0=theta0, lambda0=lambda0)


def phi_rotation_cycle(theta0: float, n_phi: int, duration: float,
                       lambda0: float = 0.0, shape: str = "blackman") -> CycleSchedule:
    """Cycle in which phi winds by 2 pi n_phi at fixed cone angle theta0."""
    seg = Segment(kind="rotate", duration=duration, shape=shape, phi_turns=n_phi)
    return from_segments([seg], theta0=theta0, lambda0=lambda0)


def three_stage_cycle(lambda0: float, stage_duration: float, n_alpha: int = 3,
                      stretch: float = 1.0, shape: str = "blackman") -> CycleSchedule:
    """Ramp to lambda0, rotate alpha by n_alpha * pi over twice the stage
    time, ramp back.  ``stretch`` scales the two ramp durations."""
    if stretch <= 0:
        raise ScheduleError("stretch must be positive")
    segs = [
        Segment(kind="ramp", duration=stage_duration * stretch, shape=shape,
                lambda_to=lambda0),
        Segment(kind="rotate", duration=2 * stage_duration, shape=shape,
                alpha_half_turns=n_alpha),
        Segment(kind="ramp", duration=stage_duration * stretch, shape=shape,
                lambda_to=0.0),
    ]
    return from_segments(segs)


def from_table(t, theta, phi, alpha, lam, b=None, n_phi: int = 0,
               n_alpha: int = 0, max_curvature: float | None = None) -> CycleSchedule:
    """Schedule from tabulated samples, cubic-spline interpolated.

    Splines use not-a-knot ends.  A finite-difference curvature bound
    guards against tables with derivative kinks; pass ``max_curvature``
    to override the heuristic default.
    """
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size < 4 or np.any(np.diff(t) <= 0):
        raise ScheduleError("need at least 4 strictly increasing time samples")
    T = t[-1] - t[0]
    columns = {"theta": np.asarray(theta, float), "phi": np.asarray(phi, float),
               "alpha": np.asarray(alpha, float), "lambda": np.asarray(lam, float)}
    for name, y in columns.items():
        if y.shape != t.shape:
            raise ScheduleError(f"{name} table length mismatch")
        dt = np.diff(t)
        curv = np.abs(np.diff(np.diff(y) / dt) / dt[1:])
        bound = max_curvature
        if bound is None:
            scale = max(1.0, float(np.ptp(y)))
            bound = 10.0 * scale * (2 * np.pi / T) ** 2
        if curv.size and curv.max() > bound:
            raise ScheduleError(
                f"{name} table fails the smoothness bound "
                f"(curvature {curv.max():.3g} > {bound:.3g})")

    t0 = t[0]
    splines = {k: CubicSpline(t - t0, v, bc_type="not-a-knot")
               for k, v in columns.items()}
    rates = {k: sp.derivative() for k, sp in splines.items()}
    if b is None:
        b_fun = _const(1.0)
    else:
        b_spline = CubicSpline(t - t0, np.asarray(b, float), bc_type="not-a-knot")
        b_fun = lambda x: float(b_spline(x))

    def as_scalar(f):
        return lambda x: float(f(x))

    return CycleSchedule(
        duration=float(T),
        theta=as_scalar(splines["theta"]), phi=as_scalar(splines["phi"]),
        alpha=as_scalar(splines["alpha"]), lam=as_scalar(splines["lambda"]),
        theta_dot=as_scalar(rates["theta"]), phi_dot=as_scalar(rates["phi"]),
        alpha_dot=as_scalar(rates["alpha"]), lam_dot=as_scalar(rates["lambda"]),
        n_phi=n_phi, n_alpha=n_alpha, b=b_fun)


def from_dict(entries: dict) -> CycleSchedule:
    """Build a schedule from flat key-value entries (see :func:`from_file`)."""
    scalars = {"theta0": 0.0, "phi0": 0.0, "alpha0": 0.0, "lambda0": 0.0, "b": 1.0}
    seg_fields: dict[int, dict] = {}
    for key, raw in entries.items():
        if key in scalars:
            scalars[key] = float(raw)
            continue
        if key.startswith("segment"):
            head, _, fieldname = key.partition(".")
            if not fieldname:
                raise ScheduleError(f"malformed segment key {key!r}")
            try:
                index = int(head[len("segment"):])
            except ValueError:
                raise ScheduleError(f"malformed segment key {key!r}") from None
            seg_fields.setdefault(index, {})[fieldname] = raw
            continue
        raise ScheduleError(f"unknown schedule key {key!r}")
    if not seg_fields:
        raise ScheduleError("schedule declares no segments")
    indices = sorted(seg_fields)
    if indices != list(range(1, len(indices) + 1)):
        raise ScheduleError(f"segments must be numbered 1..N, got {indices}")

    segments = []
    for i in indices:
        f = seg_fields[i]
        kind = f.get("kind")
        if kind is None:
            raise ScheduleError(f"segment{i} is missing its kind")
        seg = Segment(
            kind=kind,
            duration=float(f.get("duration", 0.0)),
            shape=f.get("shape", "blackman"),
            lambda_to=float(f["lambda_to"]) if "lambda_to" in f else None,
            phi_turns=int(f.get("phi_turns", 0)),
            alpha_half_turns=int(f.get("alpha_half_turns", 0)))
        segments.append(seg)
    return from_segments(segments, theta0=scalars["theta0"], phi0=scalars["phi0"],
                         alpha0=scalars["alpha0"], lambda0=scalars["lambda0"],
                         b=scalars["b"])


def from_file(path) -> CycleSchedule:
    """Load a schedule from a flat ``key = value`` text file.

    Lines starting with ``#`` (or inline ``#`` tails) are comments.  Keys:
    ``theta0 phi0 alpha0 lambda0 b`` plus numbered segments, e.g.::

        lambda0 = 0.0
        segment1.kind = ramp
        segment1.duration = 25
        segment1.shape = blackman
        segment1.lambda_to = -0.97
        segment2.kind = rotate
        segment2.duration = 50
        segment2.alpha_half_turns = 3
        segment3.kind = ramp
        segment3.duration = 25
        segment3.lambda_to = 0.0
    """
    entries = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ScheduleError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = text.partition("=")
            key, value = key.strip(), value.strip()
            if not key or not value:
                raise ScheduleError(f"{path}:{lineno}: expected 'key = value'")
            if key in entries:
                raise ScheduleError(f"{path}:{lineno}: duplicate key {key!r}")
            entries[key] = value
    return from_dict(entries)
