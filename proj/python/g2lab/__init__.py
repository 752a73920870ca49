"""Definite 3-forms, homogeneous cobordism flows, and horizontal lifts."""

import json as _json

from ._core import (
    NotDecomposableError,
    NotDefiniteError,
    ScenarioError,
    assemble_omega,
    assemble_psi,
    classify,
    curvature,
    decompose_psi,
    einstein_tensor,
    lambda_invariant,
    levi_civita,
    metric_of,
    omega0,
    phi0,
    psi0,
)
from ._core import run_scenario as _run_scenario_raw

__all__ = [
    "NotDecomposableError",
    "NotDefiniteError",
    "ScenarioError",
    "assemble_omega",
    "assemble_psi",
    "classify",
    "curvature",
    "decompose_psi",
    "einstein_tensor",
    "lambda_invariant",
    "levi_civita",
    "metric_of",
    "omega0",
    "phi0",
    "psi0",
    "run_scenario",
]


def run_scenario(scenario, paper_literal=False, name="scenario"):
    """Run a scenario given as a dict or a JSON string.

    Returns a dict with exit_code, the parsed report, and CSV artifacts.
    """
    text = scenario if isinstance(scenario, str) else _json.dumps(scenario)
    raw = _run_scenario_raw(text, paper_literal, name)
    raw["report"] = _json.loads(raw["report"])
    return raw
