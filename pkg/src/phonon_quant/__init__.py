"""Piezoelectric resonator admittances to quantized circuit Hamiltonians."""

__version__ = "0.1.0"

from .bbq import (BbqReport, BbqTransmon, PolaritonMode, bbq_report,
                  detuning_sweep, dressed_admittance, kerr_matrix, lamb_shift,
                  polariton_modes)
from .constants import E_CHARGE, HBAR, PHI0_RED
from .fbar import (AdmittanceSamples, FbarGeometry, MaterialParams,
                   fbar_admittance, fbar_pole_zero, load_admittance_csv,
                   sample_grid, write_admittance_csv)
from .foster import (FosterMode, FosterNetwork, foster_from_admittance,
                     foster_from_model, scale_unit_cells, single_mode_truncation,
                     synth_admittance)
from .oracle import (HilbertSpec, SpectrumReport, build_multimode_hamiltonian,
                     build_single_mode_hamiltonian, check_convergence,
                     extract_g_avoided_crossing, lowest_eigenvalues,
                     multimode_anharmonicities, multimode_transitions)
from .ratfit import (FitOptions, RationalModel, enforce_lossless, model_zeros,
                     vector_fit)
from .single_mode import (CouplingReport, TransmonParams, capacitance_energies,
                          coupling_rate, fbar_single_mode_network,
                          quantize_single_mode, sweep_coupling)

__all__ = [name for name in dir() if not name.startswith("_")]
