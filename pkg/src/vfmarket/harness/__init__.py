"""Scenario configuration, agent templates, runs and the command line."""
from .config import ConfigError, ScenarioConfig, load_config, parse_config
from .runner import ConvergenceReport, RunResult, convergence_report, run_scenario
from .templates import TEMPLATES, instaplayer

__all__ = ["ConfigError", "ConvergenceReport", "RunResult", "ScenarioConfig", "TEMPLATES",
           "convergence_report", "instaplayer", "load_config", "parse_config", "run_scenario"]
