"""Deadline-constrained multi-service downlink scheduling over a high-speed rail link."""

from ._core import (
    ConfigError,
    ContractError,
    ExperimentConfig,
    Policy,
    RadioConfig,
    ServiceSpec,
    SimConfig,
    TrajectoryConfig,
    brute_force_lex_min_drops,
    capacity_profile,
    check_lemma1,
    check_sample_drift,
    constant_B,
    distance_at,
    load_config,
    parse_config,
    path_loss_db,
    rate_bps,
    run,
    snr_db,
    truncated_poisson_pmf,
)

__version__ = "0.1.0"
