"""Python bindings for the roster optimizer.

Instances, rosters and results are plain dicts in the same JSON layout the
CLI and the HTTP service use.
"""

import json

from . import _core
from ._core import InvalidInputError, RosterError, compute_gap

__all__ = [
    "InvalidInputError",
    "RosterError",
    "check",
    "compute_gap",
    "generate_instance",
    "model_size",
    "optimize",
    "reoptimize",
    "roster_from_csv",
    "roster_to_csv",
    "validate_instance",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def generate_instance(employees=12, weeks=8, shift_types=3, seed=1, preference_density=0.2):
    return json.loads(_core.generate_instance(employees, weeks, shift_types, seed, preference_density))


def validate_instance(instance):
    return _core.validate_instance(_text(instance))


def optimize(instance, config=None, weights=None, progress=None):
    """Solve and return the result document.

    ``progress`` receives one dict per progress event.
    """
    callback = None if progress is None else (lambda line: progress(json.loads(line)))
    return json.loads(_core.optimize(_text(instance), _text(config or {}), _text(weights or {}), callback))


def reoptimize(instance, roster, changes, config=None, weights=None):
    return json.loads(
        _core.reoptimize(_text(instance), _text(roster), _text(changes), _text(config or {}), _text(weights or {}))
    )


def check(instance, roster):
    return json.loads(_core.check(_text(instance), _text(roster)))


def roster_to_csv(instance, roster):
    return _core.roster_to_csv(_text(instance), _text(roster))


def roster_from_csv(instance, csv_text):
    return json.loads(_core.roster_from_csv(_text(instance), csv_text))


def model_size(instance, weights=None):
    """(columns, rows, nonzeros) of the base MILP."""
    return _core.model_size(_text(instance), _text(weights or {}))
