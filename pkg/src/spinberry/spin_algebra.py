"""Exact spin operators and rotation unitaries for arbitrary spin.

Basis convention throughout the package: the standard |S, m> angular
momentum basis ordered by descending m (m = S, S-1, ..., -S), with the
standard phase convention so that Sigma_x and Sigma_z are real symmetric
and Sigma_y is purely imaginary antisymmetric.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class EulerAngles:
    """z-y-z Euler angles; theta restricted to [0, pi], the others may wind."""

    theta: float
    phi: float
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")


@dataclass(frozen=True)
class SpinRep:
    """Spin-S representation: dimensionless spin matrices in the |S, m> basis.

    ``two_s`` is the doubled spin (so S = two_s / 2, integer or half-integer).
    """

    two_s: int
    dim: int
    sigma_x: np.ndarray
    sigma_y: np.ndarray
    sigma_z: np.ndarray
    _sy_eig: tuple = field(default=None, repr=False, compare=False)

    @property
    def s(self) -> float:
        return self.two_s / 2.0

    @property
    def m_values(self) -> np.ndarray:
        """m quantum numbers in basis order (descending)."""
        return (self.two_s - 2 * np.arange(self.dim)) / 2.0

    def sy_eigensystem(self):
        """Cached eigendecomposition of Sigma_y, used by rotation_unitary."""
        return self._sy_eig


def spin_matrices(two_s: int) -> SpinRep:
    """Build the (2S+1)-dimensional spin matrices from ladder operators."""
    if not isinstance(two_s, (int, np.integer)) or two_s < 0:
        raise ValueError(f"two_s must be a non-negative integer, got {two_s!r}")
    two_s = int(two_s)
    dim = two_s + 1
    s = two_s / 2.0
    m = (two_s - 2 * np.arange(dim)) / 2.0
    raising = np.zeros((dim, dim))
    for i in range(1, dim):
        raising[i - 1, i] = np.sqrt(s * (s + 1) - m[i] * (m[i] + 1))
    sx = (raising + raising.T) / 2.0
    sy = (raising - raising.T) / 2j
    sz = np.diag(m)
    w, v = np.linalg.eigh(sy)
    return SpinRep(two_s=two_s, dim=dim, sigma_x=sx, sigma_y=sy, sigma_z=sz,
                   _sy_eig=(w, v))


def m_parity(two_s: int, m: float) -> int:
    """Eigenvalue (-1)^(S-m) of the pi-rotation parity about the z axis."""
    s = two_s / 2.0
    k = s - m
    if abs(k - round(k)) > 1e-12 or abs(m) > s + 1e-12:
        raise ValueError(f"invalid m={m} for two_s={two_s}")
    return 1 if round(k) % 2 == 0 else -1


def rotation_unitary(rep: SpinRep, angles: EulerAngles) -> np.ndarray:
    """Unitary exp(-i Sz phi) exp(-i Sy theta) exp(-i Sz alpha).

    The two z-factors are diagonal; the y-factor comes from the cached
    eigendecomposition of Sigma_y, so the result is unitary to rounding.
    """
    m = rep.m_values
    left = np.exp(-1j * m * angles.phi)
    right = np.exp(-1j * m * angles.alpha)
    w, v = rep.sy_eigensystem()
    mid = (v * np.exp(-1j * w * angles.theta)) @ v.conj().T
    return left[:, None] * mid * right[None, :]


def rotation_matrix_3d(angles: EulerAngles) -> np.ndarray:
    """3x3 orthogonal matrix Rz(phi) Ry(theta) Rz(alpha)."""

    def rz(c):
        return np.array([[np.cos(c), -np.sin(c), 0.0],
                         [np.sin(c), np.cos(c), 0.0],
                         [0.0, 0.0, 1.0]])

    def ry(c):
        return np.array([[np.cos(c), 0.0, np.sin(c)],
                         [0.0, 1.0, 0.0],
                         [-np.sin(c), 0.0, np.cos(c)]])

    return rz(angles.phi) @ ry(angles.theta) @ rz(angles.alpha)
