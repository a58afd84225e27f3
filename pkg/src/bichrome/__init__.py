"""Pump-probe simulator for a driven quantum-dot-cavity system.

Solves the time-periodic Lindblad master equation of a bichromatically
driven Jaynes-Cummings system with the method of continued fractions
and computes steady states, cavity emission spectra and probe-sweep
observables.
"""

__version__ = "0.1.0"

from .params import CFConfig, DriveTarget, HilbertConfig, SystemParams
from .operators import SpaceOperators, annihilation, build_h0, lowering, tensor
from .liouville import build_liouvillians, dissipator, unvectorize, vectorize
from .floquet import (
    FloquetHarmonics,
    cf_ladders,
    rho0_laplace,
    steady_state,
    time_domain_integrate,
)
from .spectra import (
    Observable,
    Spectrum,
    SweepResult,
    cavity_intensity,
    emission_spectrum,
    find_extrema,
    probe_sweep,
    qd_population,
)
from .analytic import (
    AnalyticParams,
    fit_asymmetry,
    fit_peak_ratio,
    jc_eigenvalues,
    phonon_occupation,
    polariton_peaks,
    rho_ee_second_order,
    transmission_analytic,
)
from .scenarios import (
    ResultTable,
    ScenarioConfig,
    SweepSpec,
    detect_knee,
    read_config,
    run_scenario,
    write_config,
    write_csv,
)

__all__ = [
    "AnalyticParams", "CFConfig", "DriveTarget", "FloquetHarmonics",
    "HilbertConfig", "Observable", "ResultTable", "ScenarioConfig",
    "SpaceOperators", "Spectrum", "SweepResult", "SweepSpec", "SystemParams",
    "annihilation", "build_h0", "build_liouvillians", "cavity_intensity",
    "cf_ladders", "detect_knee", "dissipator", "emission_spectrum",
    "find_extrema", "fit_asymmetry", "fit_peak_ratio", "jc_eigenvalues",
    "lowering", "phonon_occupation", "polariton_peaks", "probe_sweep",
    "qd_population", "read_config", "rho0_laplace", "rho_ee_second_order",
    "run_scenario", "steady_state", "tensor", "time_domain_integrate",
    "transmission_analytic", "unvectorize", "vectorize", "write_config",
    "write_csv",
]
