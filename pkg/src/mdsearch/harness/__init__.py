"""Experiment harness: config files, generators, runner, CLI."""

from .configio import RunConfig, load_config, parse_config, render_config
from .generators import random_formula, random_puzzle
from .runner import (
    RunResult,
    SampleRecord,
    ablate,
    build_instance,
    instance_rng,
    load_results,
    paired_feasibility,
    presets,
    render_summary_csv,
    run_experiment,
    sample_rng,
    search_config,
    summarize_records,
    write_results,
)

__all__ = [
    "RunConfig",
    "load_config",
    "parse_config",
    "render_config",
    "random_formula",
    "random_puzzle",
    "RunResult",
    "SampleRecord",
    "ablate",
    "build_instance",
    "instance_rng",
    "load_results",
    "paired_feasibility",
    "presets",
    "render_summary_csv",
    "run_experiment",
    "sample_rng",
    "search_config",
    "summarize_records",
    "write_results",
]
