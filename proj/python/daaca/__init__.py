"""Ant-colony data aggregation simulator for wireless sensor networks."""

from ._daaca import (
    AlgorithmConfig,
    ConfigError,
    EnergyModelParams,
    ExperimentConfig,
    MetricsReport,
    RoundOutcome,
    SignTest,
    Simulation,
    SimulationConfig,
    SimulationEnded,
    algorithms,
    load_config,
    parse_config,
    preset,
    run_experiment,
    run_simulation,
    run_sweep,
    rx_cost,
    sign_test,
    tx_cost,
)

__all__ = [
    "AlgorithmConfig",
    "ConfigError",
    "EnergyModelParams",
    "ExperimentConfig",
    "MetricsReport",
    "RoundOutcome",
    "SignTest",
    "Simulation",
    "SimulationConfig",
    "SimulationEnded",
    "algorithms",
    "load_config",
    "parse_config",
    "preset",
    "run_experiment",
    "run_simulation",
    "run_sweep",
    "rx_cost",
    "sign_test",
    "tx_cost",
]
