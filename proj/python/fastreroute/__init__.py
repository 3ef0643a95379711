"""Local fast-reroute simulator."""

import csv
import io
import json

from ._core import (
    FrrError,
    Topology,
    all_to_one,
    clos,
    complete,
    csv_columns,
    protocols,
)
from . import _core

__all__ = [
    "FrrError",
    "Topology",
    "all_to_one",
    "calibrate",
    "clos",
    "complete",
    "csv_columns",
    "protocols",
    "sweep",
    "sweep_rows",
]


def sweep(**settings):
    """Run a sweep; keyword arguments are config keys. Returns CSV text."""
    return _core.sweep({key: str(value) if not isinstance(value, bool) else value
                        for key, value in settings.items()})


def sweep_rows(**settings):
    """Like sweep, parsed into a list of dicts."""
    return list(csv.DictReader(io.StringIO(sweep(**settings))))


def calibrate(sizes=(256, 4096), seeds=50, seed=1, interval_n=1024, interval_seeds=50):
    return json.loads(_core.calibrate(list(sizes), seeds, seed, interval_n, interval_seeds))
