"""Noise model of electro-optic phase feed-forward amplification."""

from ._ffamp import (
    FitResult,
    NetworkParams,
    OracleRow,
    SnrReport,
    SweepTrace,
    detected_variance,
    estimate_psd,
    fit_gain,
    ideal_gain,
    infer_snr,
    max_transfer_ratio,
    optimal_gain,
    oracle_compare,
    output_expansion,
    phase_variance,
    pia_transfer_ratio,
    report_snr,
    run_sweep,
    signal_power_gain,
    spectrum_coefficient,
    spectrum_paper,
    transfer_ratio,
)

__all__ = [name for name in dir() if not name.startswith("_")]
