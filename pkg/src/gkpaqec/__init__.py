"""Deviation-tracking Monte Carlo simulator and decoders for GKP-qubit QEC."""
from .bitflip import (
    BlockState,
    Syndrome,
    decode_analog,
    decode_digital,
    extract_syndrome,
    m_values,
    oracle_failure_probability,
    run_trial,
    true_pattern,
)
from .c4c6 import (
    CssCodeSpec,
    MessageVector,
    RoundResult,
    TeleportationRound,
    block_message,
    c4_spec,
    c6_spec,
    css_from_json,
    decode_top,
    run_level_sweep,
    simulate_round,
    validate_css,
)
from .csvio import CSV_HEADER, render_csv, write_csv
from .gkp import (
    LikelihoodPair,
    MeasurementOutcome,
    NoiseParams,
    find_threshold,
    fold,
    hashing_rate_analog,
    hashing_rate_digital,
    leaf_pair,
    likelihood_f,
    measure,
    p_corr,
    posterior_flip,
    sample_displacement,
    sigma_to_db,
)
from .montecarlo import Estimate, TrialPlan, derive_stream, run_plan, wilson_interval

__version__ = "0.1.0"

__all__ = [
    "BlockState",
    "CSV_HEADER",
    "CssCodeSpec",
    "Estimate",
    "LikelihoodPair",
    "MeasurementOutcome",
    "MessageVector",
    "NoiseParams",
    "RoundResult",
    "Syndrome",
    "TeleportationRound",
    "TrialPlan",
    "block_message",
    "c4_spec",
    "c6_spec",
    "css_from_json",
    "decode_analog",
    "decode_digital",
    "decode_top",
    "derive_stream",
    "extract_syndrome",
    "find_threshold",
    "fold",
    "hashing_rate_analog",
    "hashing_rate_digital",
    "leaf_pair",
    "likelihood_f",
    "m_values",
    "measure",
    "oracle_failure_probability",
    "p_corr",
    "posterior_flip",
    "render_csv",
    "run_level_sweep",
    "run_plan",
    "run_trial",
    "sample_displacement",
    "sigma_to_db",
    "simulate_round",
    "true_pattern",
    "validate_css",
    "wilson_interval",
    "write_csv",
]
