"""Adiabatic quantum cycles of spins with dipole plus quadrupole coupling.

Core functionality:

- exact spin operators and rotation unitaries (:mod:`spinberry.spin_algebra`)
- the reduced Hamiltonian Sigma_z + lambda Sigma_x^2, its parity blocks and
  label-tracked spectrum (:mod:`spinberry.hamiltonian`)
- geometric phases as loop integrals over cycle schedules
  (:mod:`spinberry.berry`, :mod:`spinberry.schedules`)
- rotating-frame non-adiabatic corrections and magic couplings
  (:mod:`spinberry.nonadiabatic`)
- exact time integration, pulse shaping and mirror-cycle phase extraction
  (:mod:`spinberry.dynamics`, :mod:`spinberry.pulses`)
- holonomic entanglement of four spin-1/2 particles (:mod:`spinberry.entangle`)
"""

__version__ = "0.1.0"

from .berry import (BerryPhaseResult, GaugeField, berry_phase_adiabatic,
                    gauge_field, gauge_field_sphere, gauge_invariance_check)
from .dynamics import (CycleResult, MirrorResult, RampResult, evolve,
                       mirror_phase_difference, ramp_fidelity, run_cycle,
                       rotating_basis_transform, two_level_rotating_hamiltonian)
from .entangle import (DeltaBeta, EntangleResult, FourSpinState,
                       SymmetricBasis, closed_form_delta_beta,
                       collective_hamiltonian, entangling_cycle,
                       lambda_max_solve, symmetric_basis_m1,
                       tune_stage_stretch)
from .hamiltonian import (ContinuationError, LabeledSpectrum, ParityBlock,
                          ReducedHamiltonian, SpectrumTracker,
                          characteristic_polynomial, energy_derivative,
                          labeled_spectrum, parity_blocks,
                          perturbative_polarization_m0, polarization,
                          polarization_hellmann_feynman, reduced_hamiltonian)
from .nonadiabatic import (CoriolisParams, NearDegeneracyError, NoRootError,
                           TransverseShift, cxy_coefficient, delta_p,
                           longitudinal_phase, magic_lambda, magic_lambda_fit,
                           p2_coefficient, q_coefficient,
                           transverse_second_order)
from .pulses import PulseShape, blackman, blackman_integral
from .schedules import (CycleSchedule, ScheduleError, Segment,
                        alpha_rotation_cycle, from_dict, from_file,
                        from_segments, from_table, phi_rotation_cycle,
                        three_stage_cycle)
from .spin_algebra import (EulerAngles, SpinRep, m_parity, rotation_matrix_3d,
                           rotation_unitary, spin_matrices)

__all__ = [name for name in dir() if not name.startswith("_")]
