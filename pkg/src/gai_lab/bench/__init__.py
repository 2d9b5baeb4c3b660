"""Experiment harness: configs, presets, batch execution and the CLI."""
from .config import ConfigError, ExperimentConfig, load_config, parse_config, preset_means
from .runner import RunRecord, SummaryRow, execute, summarize

__all__ = ["ConfigError", "ExperimentConfig", "RunRecord", "SummaryRow", "execute",
           "load_config", "parse_config", "preset_means", "summarize"]
