"""Sea-ice thermodynamic simulation and boundary-observer estimation.

Thin re-export of the compiled extension module. All heavy lifting lives in
C++; this package only provides the import name and version metadata.
"""

from ._core import (
    AnnualSample,
    AnnualSeries,
    CompareResult,
    Config,
    ConfigError,
    EstimationResult,
    EstimationSample,
    ForcingLookup,
    ForcingSchedule,
    GainEvaluation,
    GainParams,
    IceVanishedError,
    IoError,
    MonthlyForcing,
    ObserverState,
    PlantState,
    ProfileSnapshot,
    QuadRule,
    RunSettings,
    SalinityParams,
    SolverError,
    SweepRow,
    ThermalParams,
    bessel_ratio_I,
    bessel_ratio_J,
    default_config,
    fitted_decay_rate,
    from_target,
    gain_p3,
    gain_p4,
    gains,
    kernel_f,
    kernel_phi,
    kernel_psi,
    kernel_q,
    kernel_r,
    load_config,
    parse_config,
    run_annual,
    run_compare,
    run_estimation,
    run_sweep,
    to_target,
)

__version__ = "0.1.0"

__all__ = [
    "AnnualSample",
    "AnnualSeries",
    "CompareResult",
    "Config",
    "ConfigError",
    "EstimationResult",
    "EstimationSample",
    "ForcingLookup",
    "ForcingSchedule",
    "GainEvaluation",
    "GainParams",
    "IceVanishedError",
    "IoError",
    "MonthlyForcing",
    "ObserverState",
    "PlantState",
    "ProfileSnapshot",
    "QuadRule",
    "RunSettings",
    "SalinityParams",
    "SolverError",
    "SweepRow",
    "ThermalParams",
    "bessel_ratio_I",
    "bessel_ratio_J",
    "default_config",
    "fitted_decay_rate",
    "from_target",
    "gain_p3",
    "gain_p4",
    "gains",
    "kernel_f",
    "kernel_phi",
    "kernel_psi",
    "kernel_q",
    "kernel_r",
    "load_config",
    "parse_config",
    "run_annual",
    "run_compare",
    "run_estimation",
    "run_sweep",
    "to_target",
]
