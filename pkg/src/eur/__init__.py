"""Entropic uncertainty of the two-dimensional oscillator with x^2 y^2 coupling."""
from .adiabatic import (LargeAlphaState, MomentumDomainError, NormalizationDrift, SmallAlphaState,
                        adiabatic_ground_energy, momentum_gs_large_alpha, momentum_gs_small_alpha,
                        position_gs_large_alpha, position_gs_small_alpha, solve_variational_b,
                        variational_energy)
from .basis import BasisSpec, gauss_hermite_rule, hermite_function, hermite_functions
from .entropy import (BBM_BOUND, EntropyResult, check_eur, entropies_from_coefficients, entropy_from_coefficients,
                      shannon_entropy)
from .spectral import (EigensolverError, HamiltonianParams, LostTrack, assemble_hamiltonian, ground_state,
                       spectrum, track_state)
from .sweep import (EntropyRecord, FitModel, SweepConfig, compare_methods, fit, read_records, run_sweep,
                    write_records)

__version__ = "0.1.0"
