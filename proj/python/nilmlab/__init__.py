"""Power-meter thresholding, reconstruction scoring and a small dual-head
convolutional disaggregator, backed by the C++ core."""

import json as _json

from nilmlab._core import *  # noqa: F401,F403
from nilmlab._core import (
    RunConfig,
    run_evaluate_json,
    run_sweep_json,
    run_synth_json,
    run_threshold_json,
    run_train_json,
)

__all__ = [name for name in dir() if not name.startswith("_")]


def _as_dict(payload):
    return _json.loads(payload)


def run_synth(config: RunConfig, write: bool = True) -> dict:
    """Generate a synthetic household; returns the report as a dict."""
    return _as_dict(run_synth_json(config, write))


def run_threshold(config: RunConfig, write: bool = True) -> dict:
    return _as_dict(run_threshold_json(config, write))


def run_train(config: RunConfig, write: bool = True) -> dict:
    return _as_dict(run_train_json(config, write))


def run_evaluate(config: RunConfig, write: bool = True) -> dict:
    return _as_dict(run_evaluate_json(config, write))


def run_sweep(config: RunConfig, write: bool = True) -> dict:
    return _as_dict(run_sweep_json(config, write))
