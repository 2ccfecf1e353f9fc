"""Pulse shapes for parameter ramps and rotation rates.

A shape prescribes the *rate* profile of a parameter change over a unit
interval; its integral is normalized to one analytically so a ramp always
lands exactly on its target.  The smooth option is the Blackman window
0.42 - 0.5 cos(2 pi s) + 0.08 cos(4 pi s), whose mean over [0, 1] is 0.42
and whose value and slope vanish at both ends.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BLACKMAN_MEAN = 0.42


def blackman(s: float) -> float:
    """Blackman window value at fraction s in [0, 1]."""
    s = float(s)
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"fraction must lie in [0, 1], got {s}")
    return 0.42 - 0.5 * np.cos(2 * np.pi * s) + 0.08 * np.cos(4 * np.pi * s)


def blackman_integral(s: float) -> float:
    """Integral of the Blackman window from 0 to s (s in [0, 1])."""
    s = float(s)
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"fraction must lie in [0, 1], got {s}")
    return (0.42 * s - 0.5 * np.sin(2 * np.pi * s) / (2 * np.pi)
            + 0.08 * np.sin(4 * np.pi * s) / (4 * np.pi))


@dataclass(frozen=True)
class PulseShape:
    """Normalized rate profile over a unit interval: ``linear`` or ``blackman``."""

    kind: str

    def __post_init__(self):
        if self.kind not in ("linear", "blackman"):
            raise ValueError(f"unknown pulse shape {self.kind!r}")

    def fraction(self, s: float) -> float:
        """Completed fraction of the total change after a fraction s of time."""
        if self.kind == "linear":
            if not 0.0 <= s <= 1.0:
                raise ValueError(f"fraction must lie in [0, 1], got {s}")
            return float(s)
        return blackman_integral(s) / BLACKMAN_MEAN

    def rate(self, s: float) -> float:
        """d fraction / d s; integrates to exactly one over [0, 1]."""
        if self.kind == "linear":
            if not 0.0 <= s <= 1.0:
                raise ValueError(f"fraction must lie in [0, 1], got {s}")
            return 1.0
        return blackman(s) / BLACKMAN_MEAN
