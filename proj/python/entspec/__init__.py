"""Python bindings for the entspec simulator.

Every function taking ``config_json`` accepts a JSON document in the same
format as the command-line ``--config`` file; ``None`` means the defaults.
"""

from ._core import (
    FLAG_LOW_STATISTICS,
    FLAG_UNDEFINED,
    AnalysisError,
    ConfigError,
    DataMismatchError,
    DomainError,
    Error,
    Histogram,
    IoError,
    NoRootError,
    RangeError,
    RunRecord,
    ScanSetting,
    absorbance,
    calibrate,
    coincidence_spectrum,
    conjugate_wavelength,
    default_config_json,
    expected_rates,
    normalize_config,
    read_bundle,
    reconstruct,
    resolution,
    run_cli,
    signal_marginal,
    simulate,
    write_bundle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
