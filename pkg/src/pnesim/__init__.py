"""Photon-number entangled states of two bosonic modes in a thermal lossy
channel: exact sector-structured evolution, negativity under partial
transposition, and comparison against Gaussian twin-beam references at the
Gaussian separability time.
"""

from .channel import (ChannelParams, SectorGenerator, TransferTensor, energy_closed_form,
                      evolve_pnes, evolve_state, liouvillian_sector, policy_cutoff,
                      propagator, single_mode_superoperator, support_dim)
from .entanglement import (NegativityResult, SeparationTime, is_sector_structured,
                           negativity, partial_transpose, separation_time)
from .errors import (ConvergenceError, CutoffError, MonotonicityError, PnesimError,
                     StateSpecError, TargetRangeError)
from .fock import (DEFAULT_TOLERANCES, SanityReport, ToleranceProfile, TwoModeState,
                   index_pack, index_unpack, mean_total_photons, sanity_check,
                   state_from_coeff_vector, thermal_product_state)
from .gaussian import (SymmetricStdForm, cm_from_fock, evolve_cm, gaussian_negativity,
                       nu_tilde_minus, nu_tilde_minus_general, reference_ng,
                       simon_separable, std_form_from_cm, std_form_to_cm, t_g_closed,
                       t_g_numeric, twb_cm)
from .states import (MatchTarget, PnesCoefficients, TwbParams, custom_coeffs,
                     family_at_cutoff, family_tail_cutoff, pad_coeffs,
                     parse_state_spec, pnes_energy, psi01_coeffs, pssv_coeffs,
                     pure_entropy, pure_entropy_bits, pure_negativity,
                     solve_family_param, twb_coeffs)
from .sweep import (DEFAULT_GRID, FIG1_CASES, Fig1Result, SweepConfig, SweepPointError,
                    SweepRecord, matched_twb_lambda, render_csv, run_fig1, run_sweep,
                    thermal_occupation, write_csv)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams", "ConvergenceError", "CutoffError", "DEFAULT_GRID",
    "DEFAULT_TOLERANCES", "FIG1_CASES", "Fig1Result", "MatchTarget",
    "MonotonicityError", "NegativityResult", "PnesCoefficients", "PnesimError",
    "SanityReport", "SectorGenerator", "SeparationTime", "StateSpecError",
    "SweepConfig", "SweepPointError", "SweepRecord", "SymmetricStdForm",
    "TargetRangeError", "ToleranceProfile", "TransferTensor", "TwbParams",
    "TwoModeState", "cm_from_fock", "custom_coeffs", "energy_closed_form",
    "evolve_cm", "evolve_pnes", "evolve_state", "family_at_cutoff", "family_tail_cutoff",
    "gaussian_negativity", "index_pack", "index_unpack", "is_sector_structured",
    "liouvillian_sector", "matched_twb_lambda", "mean_total_photons", "negativity",
    "nu_tilde_minus", "nu_tilde_minus_general", "pad_coeffs", "parse_state_spec",
    "partial_transpose", "pnes_energy", "policy_cutoff", "propagator",
    "psi01_coeffs", "pssv_coeffs", "pure_entropy", "pure_entropy_bits",
    "pure_negativity", "reference_ng", "render_csv", "run_fig1", "run_sweep",
    "sanity_check", "separation_time", "simon_separable", "single_mode_superoperator",
    "solve_family_param", "state_from_coeff_vector", "std_form_from_cm",
    "std_form_to_cm", "support_dim", "t_g_closed", "t_g_numeric",
    "thermal_occupation", "thermal_product_state", "twb_cm", "twb_coeffs",
    "write_csv",
]
