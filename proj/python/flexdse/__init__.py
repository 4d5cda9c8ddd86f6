"""Map-space and design-space exploration for flexible DNN accelerators.

Models, accelerators, mappings and results are plain dicts with the same
layout as the JSON files the command-line tool reads and writes.
"""

import json
from pathlib import Path

from . import _flexdse
from ._flexdse import ParseError, SpaceTooLarge, ValidationError

__all__ = [
    "ParseError",
    "SpaceTooLarge",
    "ValidationError",
    "evaluate",
    "fixtures",
    "flexion",
    "load",
    "mse",
    "overhead",
    "run_cli",
    "run_experiment",
]


def _dump(value):
    if value is None:
        return ""
    return value if isinstance(value, str) else json.dumps(value)


def load(path):
    """Read a JSON file into a dict."""
    return json.loads(Path(path).read_text())


def flexion(model, accel, cap=None):
    """Per-layer map-space counts, flexion and Venn sizes."""
    args = (_dump(model), _dump(accel)) + (() if cap is None else (cap,))
    return json.loads(_flexdse.flexion(*args))


def evaluate(layer, accel, mapping, energy=None):
    """Legality verdict and, when legal, the cost report of one mapping."""
    return json.loads(_flexdse.evaluate(_dump(layer), _dump(accel), _dump(mapping), _dump(energy)))


def mse(model, accel, objective="runtime", seed=None, mode="auto", jobs=1, energy=None, cost_table=None):
    """Best mapping per layer of `model` on `accel`."""
    out = _flexdse.mse(_dump(model), _dump(accel), objective, seed, mode, jobs, _dump(energy), _dump(cost_table))
    return json.loads(out)


def overhead(accel, cost_table=None):
    """Area and per-access energy overhead of the accelerator's flexibility."""
    return json.loads(_flexdse.overhead(_dump(accel), _dump(cost_table)))


def run_experiment(path, jobs=1):
    """Run an experiment file; returns {file name: contents} as the dse command would write."""
    return _flexdse.run_experiment(str(path), jobs)


def run_cli(*args):
    """Run the command-line tool in-process; returns (exit code, stdout, stderr)."""
    return _flexdse.run_cli([str(a) for a in args])


def fixtures():
    """Built-in example suite as {relative path: dict}."""
    return {name: json.loads(text) for name, text in _flexdse.fixture_files().items()}
