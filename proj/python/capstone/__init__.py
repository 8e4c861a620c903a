"""Logarithmic capacity, Cauchy transforms and weighted Bergman space dimensions."""

import json as _json

from ._capstone import *  # noqa: F401,F403
from ._capstone import __version__, run_job as _run_job


def run(config):
    """Run a job given as a dict or a JSON string; returns the report as a dict."""
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _run_job(config)
