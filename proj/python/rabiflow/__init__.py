"""Wave-packet Rabi dynamics in the Jaynes-Cummings model."""

from ._core import (
    AtomicPrep,
    ConfigError,
    FitError,
    ModelParams,
    ScenarioConfig,
    SpectralError,
    ValidityWindow,
    WavePacketPrep,
    dressed_energy,
    field_amplitude,
    fit_collapse,
    format_double,
    gauss_hermite,
    mixing,
    normalized_deviation,
    oracle_field,
    oracle_sigma3,
    parse_config,
    phase_frequency_h,
    preset,
    preset_names,
    run_scenario,
    sigma3_collapse,
    sigma3_dressed,
    validate,
    validity_window,
)

__all__ = [name for name in dir() if not name.startswith("_")]
