"""Multi-domain sparse dictionary classification."""

import json as _json

from ._mddl import *  # noqa: F401,F403
from ._mddl import __version__, _run_bench_json


def run_bench(spec, base_dir="", sweep=False):
    """Run a bench spec (dict or JSON string) and return the report as a dict."""
    text = spec if isinstance(spec, str) else _json.dumps(spec)
    return _json.loads(_run_bench_json(text, base_dir, sweep))
