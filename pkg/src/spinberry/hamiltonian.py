"""Reduced spin Hamiltonian Sigma_z + lambda * Sigma_x**2 and its spectrum.

The Hamiltonian conserves the parity (-1)^(S-m), so it splits into two
blocks that never mix.  Eigenvalues are labeled by the magnetic number m
of the basis state they connect to as lambda -> 0; labels are propagated
along a lambda grid by eigenvector-overlap continuation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import jacobi_eigh, monic_characteristic_coefficients
from .spin_algebra import SpinRep


class ContinuationError(RuntimeError):
    """Eigenvector continuation could not assign labels unambiguously."""


@dataclass(frozen=True)
class ReducedHamiltonian:
    """Dimensionless Hamiltonian Sigma_z + lambda * Sigma_x**2."""

    rep: SpinRep
    lam: float
    matrix: np.ndarray


@dataclass(frozen=True)
class ParityBlock:
    """One parity sub-block of the reduced Hamiltonian.

    ``m_values`` maps block indices to the m of the underlying basis state.
    For integer spins the even/odd names follow the parity of m itself;
    for half-integer spins they follow the parity of S - m.
    """

    name: str
    matrix: np.ndarray
    m_values: np.ndarray


def reduced_hamiltonian(rep: SpinRep, lam: float) -> ReducedHamiltonian:
    lam = float(lam)
    if not np.isfinite(lam):
        raise ValueError("lambda must be finite")
    matrix = rep.sigma_z + lam * (rep.sigma_x @ rep.sigma_x)
    return ReducedHamiltonian(rep=rep, lam=lam, matrix=matrix)


def _even_block_mask(two_s: int) -> np.ndarray:
    idx = np.arange(two_s + 1)
    if two_s % 2 == 0:
        doubled_m = two_s - 2 * idx
        return doubled_m % 4 == 0
    return idx % 2 == 0


def parity_blocks(h: ReducedHamiltonian) -> tuple[ParityBlock, ParityBlock]:
    """Split the reduced Hamiltonian into its (even, odd) parity blocks."""
    mask = _even_block_mask(h.rep.two_s)
    m = h.rep.m_values
    blocks = []
    for name, sel in (("even", mask), ("odd", ~mask)):
        sub = h.matrix[np.ix_(sel, sel)]
        blocks.append(ParityBlock(name=name, matrix=sub, m_values=m[sel]))
    # cross-block couplings are structural zeros; guard against regressions
    cross = h.matrix[np.ix_(mask, ~mask)]
    if cross.size and np.any(cross != 0.0):
        raise AssertionError("parity selection rule violated")
    return blocks[0], blocks[1]


def characteristic_polynomial(block) -> np.ndarray:
    """Monic characteristic polynomial coefficients, descending powers."""
    matrix = block.matrix if isinstance(block, ParityBlock) else np.asarray(block)
    return monic_characteristic_coefficients(matrix)


@dataclass(frozen=True)
class LabeledSpectrum:
    """Labeled eigensystem of the reduced Hamiltonian at one lambda.

    Columns of ``vectors`` are real eigenvectors aligned with ``m_labels``
    (descending m).  Each eigenvector has support only on basis states of
    its own parity, and its sign is fixed by a positive overlap with the
    parent basis state whenever that overlap is resolvable.
    """

    rep: SpinRep
    lam: float
    m_labels: np.ndarray
    energies: np.ndarray
    vectors: np.ndarray

    def index_of(self, m: float) -> int:
        i = int(round(self.rep.s - m))
        if not 0 <= i < self.rep.dim or abs(self.m_labels[i] - m) > 1e-12:
            raise ValueError(f"no level labeled m={m}")
        return i

    def energy(self, m: float) -> float:
        return float(self.energies[self.index_of(m)])

    def vector(self, m: float) -> np.ndarray:
        return self.vectors[:, self.index_of(m)].copy()

    def polarization(self, m: float) -> float:
        v = self.vectors[:, self.index_of(m)]
        return float(np.sum(self.rep.m_values * v * v))


class SpectrumTracker:
    """Follows the labeled eigensystem continuously along a lambda path.

    Starting from the trivial spectrum at lambda = 0, each move is cut into
    sub-steps no longer than ``grid_step``; at every sub-step the new block
    eigenvectors are matched to the previous ones by maximal overlap.  A
    match whose two best overlaps differ by less than ``ambiguity_gap`` is
    rejected as unresolvable (the grid is too coarse for a near-crossing).
    """

    def __init__(self, rep: SpinRep, grid_step: float = 0.01,
                 ambiguity_gap: float = 1e-3):
        if grid_step <= 0:
            raise ValueError("grid_step must be positive")
        self.rep = rep
        self.grid_step = float(grid_step)
        self.ambiguity_gap = float(ambiguity_gap)
        mask = _even_block_mask(rep.two_s)
        self._masks = (mask, ~mask)
        self._lam = 0.0
        self._vectors = np.eye(rep.dim)
        self._energies = rep.m_values.astype(float).copy()

    @property
    def lam(self) -> float:
        return self._lam

    def advance(self, lam: float) -> LabeledSpectrum:
        lam = float(lam)
        delta = lam - self._lam
        if delta == 0.0:
            return self.snapshot()
        start = self._lam
        nsub = max(1, int(np.ceil(abs(delta) / self.grid_step)))
        for k in range(1, nsub + 1):
            self._step(start + delta * k / nsub if k < nsub else lam)
        return self.snapshot()

    def _step(self, lam: float):
        rep = self.rep
        h = rep.sigma_z + lam * (rep.sigma_x @ rep.sigma_x)
        vectors = np.zeros_like(self._vectors)
        energies = np.empty(rep.dim)
        for mask in self._masks:
            sel = np.flatnonzero(mask)
            if sel.size == 0:
                continue
            w, v = jacobi_eigh(h[np.ix_(sel, sel)])
            prev = self._vectors[np.ix_(sel, sel)]
            overlaps = np.abs(prev.T @ v)
            taken = set()
            for row in range(sel.size):
                order = np.argsort(overlaps[row])[::-1]
                best = order[0]
                if sel.size > 1:
                    gap = overlaps[row, best] - overlaps[row, order[1]]
                    if gap < self.ambiguity_gap:
                        raise ContinuationError(
                            f"ambiguous label continuation at lambda={lam:.6g} "
                            f"(overlap gap {gap:.2e}); reduce grid_step")
                if best in taken:
                    raise ContinuationError(
                        f"label collision at lambda={lam:.6g}; reduce grid_step")
                taken.add(best)
                col = v[:, best]
                sign = np.sign(prev[:, row] @ col)
                vectors[sel, sel[row]] = col * (sign if sign != 0 else 1.0)
                energies[sel[row]] = w[best]
        self._vectors = vectors
        self._energies = energies
        self._lam = lam

    def snapshot(self) -> LabeledSpectrum:
        vectors = self._vectors.copy()
        # sign convention: positive overlap with the parent basis state,
        # falling back to the continuity sign when that overlap vanishes
        parent = vectors.diagonal()
        flip = parent < -1e-12
        vectors[:, flip] *= -1.0
        return LabeledSpectrum(rep=self.rep, lam=self._lam,
                               m_labels=self.rep.m_values.copy(),
                               energies=self._energies.copy(), vectors=vectors)


def labeled_spectrum(rep: SpinRep, lam: float, grid_step: float = 0.01) -> LabeledSpectrum:
    """Labeled spectrum at ``lam`` by continuation from lambda = 0."""
    return SpectrumTracker(rep, grid_step=grid_step).advance(lam)


def polarization(rep: SpinRep, m: float, lam: float, grid_step: float = 0.01) -> float:
    """<Sigma_z> in the eigenstate labeled m (exact eigenvector expectation)."""
    return labeled_spectrum(rep, lam, grid_step).polarization(m)


def energy_derivative(rep: SpinRep, m: float, lam: float, order: int = 1,
                      rel_step: float = 1e-3, grid_step: float = 0.01) -> float:
    """d^order E(m, lambda) / d lambda^order.

    Central differences with step ``rel_step * max(1, |lambda|)`` and one
    Richardson extrapolation level.  Good to ~1e-9 for order 1, degrading
    to ~1e-5 for order 3 (float64 roundoff divided by h^3).
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    h = rel_step * max(1.0, abs(lam))

    def e(x):
        return labeled_spectrum(rep, x, grid_step).energy(m)

    def diff(hh):
        if order == 1:
            return (e(lam + hh) - e(lam - hh)) / (2 * hh)
        if order == 2:
            return (e(lam + hh) - 2 * e(lam) + e(lam - hh)) / hh**2
        return (e(lam + 2 * hh) - 2 * e(lam + hh)
                + 2 * e(lam - hh) - e(lam - 2 * hh)) / (2 * hh**3)

    return (4 * diff(h / 2) - diff(h)) / 3


def polarization_hellmann_feynman(rep: SpinRep, m: float, lam: float,
                                  grid_step: float = 0.01) -> float:
    """p = E - lambda dE/dlambda, the B-field gradient of the eigenenergy."""
    spec = labeled_spectrum(rep, lam, grid_step)
    return spec.energy(m) - lam * energy_derivative(rep, m, lam, order=1,
                                                    grid_step=grid_step)


def perturbative_polarization_m0(rep: SpinRep, lam: float) -> float:
    """Leading-order polarization of the m = 0 level, (1/8) lam^3 S(S+2)(S^2-1).

    Cubic in the coupling; useful for |lambda| <~ 0.4 at S = 2 and the
    validity window shrinks quickly with S (|lambda| <~ 0.12 at S = 3).
    """
    if rep.two_s % 2 != 0:
        raise ValueError("m = 0 level requires integer spin")
    s = rep.s
    if s < 2:
        raise ValueError("formula applies to integer S >= 2")
    return lam**3 * s * (s + 2) * (s**2 - 1) / 8.0
