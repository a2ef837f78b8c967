# Copyright 2026 The datackpt Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Data checkpoint analysis and protocol simulation.

Report functions return ``(report, exit_code)`` with the report decoded
from JSON. Invalid input raises :class:`InputError` (a ``ValueError``).
"""

import json

from ._core import (
    InputError,
    Scenario,
    builtin_names,
    consistent_globals,
    dp_reachable,
    happened_before,
    load_scenario,
    parse_scenario,
    theorem_condition,
)
from . import _core

__all__ = [
    "InputError",
    "Scenario",
    "analyze",
    "builtin_names",
    "check",
    "consistent_globals",
    "dp_reachable",
    "extend",
    "generate_random",
    "happened_before",
    "load_scenario",
    "parse_scenario",
    "simulate",
    "theorem_condition",
    "verify_batch",
    "verify_trace",
]


def generate_random(workload):
    """Random scenario from a workload dict (same fields as a workload file)."""
    return _core.generate_random(json.dumps(workload))


def _decoded(pair):
    text, code = pair
    return json.loads(text), code


def _scenario(s):
    return load_scenario(s) if isinstance(s, str) else s


def analyze(scenario, matrix_cap=64):
    return _decoded(_core.analyze(_scenario(scenario), matrix_cap))


def check(scenario, members, bound=1_000_000):
    return _decoded(_core.check(_scenario(scenario), list(members), bound))


def extend(scenario, members):
    return _decoded(_core.extend(_scenario(scenario), list(members)))


def simulate(workload, config=None):
    """Returns (report, trace) as dicts."""
    report, trace = _core.simulate(json.dumps(workload), json.dumps(config) if config else "")
    return json.loads(report), json.loads(trace)


def verify_trace(trace):
    return _decoded(_core.verify_trace(json.dumps(trace)))


def verify_batch(batch):
    return _decoded(_core.verify_batch(json.dumps(batch)))
