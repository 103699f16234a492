"""Experiment configs, drivers, acceptance checks and the CLI."""
from .acceptance import CRITERIA, CriterionResult, run_acceptance
from .config import (ArraySpec, ConfigError, ExperimentConfig, SceneSpec, SolverSpec,
                     default_config, load_config, random_scene)
from .experiments import (Table, bounds_record, run_coherence_sweep, run_eta_sweep,
                          run_recovery_phase, run_surface)

__all__ = [
    "ArraySpec", "CRITERIA", "ConfigError", "CriterionResult", "ExperimentConfig", "SceneSpec",
    "SolverSpec", "Table", "bounds_record", "default_config", "load_config", "random_scene",
    "run_acceptance", "run_coherence_sweep", "run_eta_sweep", "run_recovery_phase", "run_surface",
]
