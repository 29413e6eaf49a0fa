"""Cube complex tools for periodic walls in flats and lattice obstructions."""

import json

from ._cubeflat import ValidationError, binomial, hnf
from . import _cubeflat

__all__ = [
    "ValidationError",
    "binomial",
    "dichotomy",
    "dual",
    "hnf",
    "obstruct",
    "obstruct_presentation",
    "run",
    "validate",
]


def dichotomy(data, rank, radius=6):
    return json.loads(_cubeflat.dichotomy_json(json.dumps(data), rank, radius))


def dual(wallspace):
    return json.loads(_cubeflat.dual_json(json.dumps(wallspace)))


def obstruct(data):
    return json.loads(_cubeflat.obstruct_json(json.dumps(data)))


def obstruct_presentation(text):
    return json.loads(_cubeflat.presentation_json(text))


def validate(data):
    _cubeflat.validate_json(json.dumps(data))


def run(name, inputs=(), rank=0, radius=6, strict=True):
    """Runs a CLI subcommand in-process; returns (exit_code, report)."""
    code, text = _cubeflat.run_json(name, [str(p) for p in inputs], rank, radius, strict)
    return code, json.loads(text)
