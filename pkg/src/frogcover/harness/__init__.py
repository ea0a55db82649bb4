"""Seeded trial batches, statistical verdicts, the check registry and the regime fit."""
from .checks import PARAMS, REGISTRY, HypothesisError, verify
from .experiment import ConfigError, ExperimentConfig, run_trials
from .regime import RegimeFitResult, regime_fit
from .stats import CheckReport

__all__ = ["PARAMS", "REGISTRY", "HypothesisError", "verify", "ConfigError",
           "ExperimentConfig", "run_trials", "RegimeFitResult", "regime_fit", "CheckReport"]
