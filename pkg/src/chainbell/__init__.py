"""Chained Bell experiments: relativistic timing, outcome models, estimators and bounds."""

from .analysis import ExtensionClaim, Verdict, admissible_envelope, check_extension, cr_bound
from .chainedbell import (
    ChainedConfig,
    ChainedSettings,
    InequalityReport,
    InterferometerParams,
    closed_form_I,
    equipartition_settings,
    minimize_I_over_N,
    phase,
    prob_equal,
)
from .estimators import (
    EstimateWithError,
    VisibilityRegressor,
    estimate_distance,
    estimate_I,
    fit_visibility,
    nonsignaling_test,
)
from .models import (
    LocalDeterministicModel,
    QuantumModel,
    SignalingToyModel,
    SuarezScaraniModel,
    make_model,
)
from .montecarlo import CountsTable, InsufficientDataError, run_all_pairs, run_chain, run_trials, scan_phase
from .spacetime import ApparatusGeometry, Boost, Event, TimingClass, classify_timing, interval_class, time_in_frame

__all__ = [
    "ApparatusGeometry",
    "Boost",
    "ChainedConfig",
    "ChainedSettings",
    "CountsTable",
    "EstimateWithError",
    "Event",
    "ExtensionClaim",
    "InequalityReport",
    "InsufficientDataError",
    "InterferometerParams",
    "LocalDeterministicModel",
    "QuantumModel",
    "SignalingToyModel",
    "SuarezScaraniModel",
    "TimingClass",
    "Verdict",
    "VisibilityRegressor",
    "admissible_envelope",
    "check_extension",
    "classify_timing",
    "closed_form_I",
    "cr_bound",
    "equipartition_settings",
    "estimate_I",
    "estimate_distance",
    "fit_visibility",
    "interval_class",
    "make_model",
    "minimize_I_over_N",
    "nonsignaling_test",
    "phase",
    "prob_equal",
    "run_all_pairs",
    "run_chain",
    "run_trials",
    "scan_phase",
    "time_in_frame",
]

__version__ = "0.1.0"
