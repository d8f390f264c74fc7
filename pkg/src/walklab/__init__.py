"""Numerical laboratory for lattice walks.

Discrete-time and continuous-time quantum walks on a periodic ring, the
coin-flip limit connecting them, their classical analogs (persistent
random walk and lattice diffusion), long-time density asymptotics, and
the three-dimensional automaton, all evolved by exact spectral methods.
"""

from .asymptotics import (WeakLimitDensity, ctqw_weak_density, dtqw_weak_density,
                          empirical_density_compare, normalization_integral,
                          time_averaged_density)
from .bessel import (bessel_i, bessel_i_scaled, bessel_i_scaled_array, bessel_j,
                     bessel_j_array)
from .classical import (PersistentParams, classical_limit_evolve, combined_density,
                        combined_density_diffusion_check, diffusion_evolve,
                        persistent_step, persistent_two_step,
                        persistent_two_step_check)
from .ctqw import (ChiralPair, CtqwParams, chiral_decompose, chiral_recombine,
                   ctqw_analytic, ctqw_analytic_field, ctqw_evolve, limit_analytic,
                   limit_analytic_field, limit_pair_evolve)
from .dtqw import (DtqwParams, MomentumOperator2, dispersion, dtqw_evolve,
                   dtqw_evolve_spectral, dtqw_step, initial_symmetric_entangled,
                   max_group_velocity, mirror, momentum_propagator)
from .lattice import (ChiralProbabilityField, MomentumGrid, ProbabilityField,
                      ScalarWaveField, SpinorField, WraparoundRiskWarning,
                      check_window, density, dft_ring, idft_ring, l1_distance,
                      site_coordinates)
from .limits import (LatticeHamiltonian, LimitScanResult, ScanEntry, bch_order_fit,
                     bch_residual, coinless_propagator,
                     coinless_spectral_equivalence, convergence_scan,
                     even_odd_split, lattice_laplacian, limit_hamiltonian,
                     limit_propagator, spectral_matching_distance)
from .walk3d import (MomentumOperator4, NoContinuousTimeLimitError, Scalar3DField,
                     ctqw3d_evolve, effective_generator_3d, limit_coefficients_3d,
                     limit_hamiltonian_3d, propagator_3d, zeroth_order_defect)

__version__ = "0.1.0"
