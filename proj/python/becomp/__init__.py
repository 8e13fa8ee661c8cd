"""Comparison-geometry toolkit for weighted manifolds.

Model objects are plain dicts in the run-configuration shape, for example
``{"family": "exponential", "params": {"lambda0": 1, "a": 1}}``.
"""

from ._becomp import (
    AdmissibilityError,
    CompatibilityError,
    ConfigError,
    Error,
    HypothesisError,
    InputError,
    IntegrationError,
    avr,
    be_ricci,
    eval_lambda,
    moments,
    required_envelope,
    run,
    solve_h,
    solve_neumann_radial,
    verify_isoperimetric,
    verify_sobolev,
)

__all__ = [
    "AdmissibilityError",
    "CompatibilityError",
    "ConfigError",
    "Error",
    "HypothesisError",
    "InputError",
    "IntegrationError",
    "avr",
    "be_ricci",
    "eval_lambda",
    "moments",
    "required_envelope",
    "run",
    "solve_h",
    "solve_neumann_radial",
    "verify_isoperimetric",
    "verify_sobolev",
]
