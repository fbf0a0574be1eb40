"""Run configuration: the small-case deny-list and sweep bounds.

Defaults can be overridden by a JSON file passed with ``--config`` or named
in ``DIAGCX_CONFIG``; keys missing from the file keep their defaults.
"""

from __future__ import annotations

import copy
import json
import os
from functools import lru_cache

DEFAULTS: dict = {
    # surfaces too small to carry an admissible arrangement (conservative)
    "small_cases": [
        {"g": 0, "b": 0, "n": 1, "f": 0},
        {"g": 0, "b": 0, "n": 2, "f": 0},
        {"g": 0, "b": 0, "n": 1, "f": 1},
        {"g": 0, "b": 1, "n": 0, "f": 0, "n_i": [1]},
        {"g": 0, "b": 1, "n": 0, "f": 0, "n_i": [2]},
        {"g": 0, "b": 1, "n": 0, "f": 1, "n_i": [1]},
    ],
    "sweeps": {
        "plain_n": [4, 8],
        "punctured_n": [2, 5],
        "axis_k": [2, 5],
        "projection_n": [2, 4],
        "morse_max_k": 3,
        "morse_max_block": 2,
        "morse_max_q": 4,
        "fiber_n": [3, 5],
    },
}


def _merge(base: dict, extra: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


@lru_cache(maxsize=8)
def _load(path: str | None) -> str:
    if path is None:
        return json.dumps(DEFAULTS)
    with open(path) as fh:
        return json.dumps(_merge(DEFAULTS, json.load(fh)))


def load_config(path: str | None = None) -> dict:
    path = path or os.environ.get("DIAGCX_CONFIG") or None
    return json.loads(_load(path))
