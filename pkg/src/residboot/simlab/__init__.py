"""Monte Carlo harness: configs, seeding, the study runner, and table emitters."""

from .config import ConfigError, ExperimentConfig, Scenario, build_config, load_config_file, parse_config_text
from .runner import WorkerFailure, run_study
from .seeding import boot_stream, data_stream, seed_stream
from .tables import RejectionTable, TableCell, emit

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "Scenario",
    "build_config",
    "load_config_file",
    "parse_config_text",
    "WorkerFailure",
    "run_study",
    "seed_stream",
    "data_stream",
    "boot_stream",
    "RejectionTable",
    "TableCell",
    "emit",
]
