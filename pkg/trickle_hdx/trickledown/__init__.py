"""Trickle-down conditions, bounds and certificates."""

from trickle_hdx.trickledown.bounds import (
    ClassicalBound,
    MaxDegreeBounds,
    classical_bound,
    main_bound,
    main_constant,
    max_degree_bounds,
    trickle_step,
)
from trickle_hdx.trickledown.certificates import (
    FVectors,
    FVectorsReport,
    InequalityDiagnostics,
    build_f_vectors,
    f_vectors_report,
    inequality_diagnostics,
)
from trickle_hdx.trickledown.conditions import (
    ConditionReport,
    Ordering,
    Variant,
    check_averaged_conditions,
    check_conditions,
    check_delta_uniform_conditions,
    check_main_conditions,
    delta_sweep,
    max_feasible_delta,
    per_link_conditions,
)
from trickle_hdx.trickledown.harmonic import harmonic, harmonic_tail
from trickle_hdx.trickledown.profile import BoundProfile, bound_profile
from trickle_hdx.trickledown.scenario import (
    SCENARIOS,
    ScenarioReport,
    coloring_scenario,
    family_scenario,
    minimal_passing_p,
    scenario_calculator,
)
from trickle_hdx.trickledown.verify import (
    MatrixVerificationReport,
    ScalarVerificationReport,
    verify_matrix_conditions,
    verify_scalar_conditions,
)

__all__ = [
    "BoundProfile",
    "ClassicalBound",
    "ConditionReport",
    "FVectors",
    "FVectorsReport",
    "InequalityDiagnostics",
    "MatrixVerificationReport",
    "Ordering",
    "SCENARIOS",
    "ScalarVerificationReport",
    "ScenarioReport",
    "MaxDegreeBounds",
    "Variant",
    "bound_profile",
    "build_f_vectors",
    "check_averaged_conditions",
    "check_conditions",
    "check_delta_uniform_conditions",
    "check_main_conditions",
    "classical_bound",
    "coloring_scenario",
    "delta_sweep",
    "f_vectors_report",
    "family_scenario",
    "harmonic",
    "harmonic_tail",
    "inequality_diagnostics",
    "main_bound",
    "main_constant",
    "max_feasible_delta",
    "minimal_passing_p",
    "per_link_conditions",
    "scenario_calculator",
    "max_degree_bounds",
    "trickle_step",
    "verify_matrix_conditions",
    "verify_scalar_conditions",
]
