"""walkwait: walk-or-wait decisions for a traveler on a bus route.

The library answers one question: a traveler must cover ``d`` miles along a
bus line and the next bus arrives after a random time; should they walk now,
wait for the bus, or wait up to a break-even threshold and then walk?  The analytic
machinery (threshold solve, deadline clamp, multi-stop collapse) is
cross-checked by an independent Monte Carlo simulator and a quadrature
evaluator of the same expectation.
"""

from ._kernel import backend_name
from .decision import (
    BISECT_INTERVAL_TOL,
    CDF_ONE_TOL,
    RESIDUAL_TOL,
    Decision,
    DeadlinedSolution,
    SolutionKind,
    SolveDiagnostics,
    TravelerProfile,
    WaitSolution,
    clamp_deadline,
    expected_travel_time,
    indifference_residual,
    solve_wait_threshold,
    solve_wait_threshold_detailed,
    uniform_closed_form_t_w,
    walk_decision_deterministic,
)
from .distributions import (
    ArrivalDistribution,
    Deterministic,
    Empirical,
    Exponential,
    SupportHorizon,
    Uniform,
    cdf,
    dist_from_json,
    dist_to_json,
    mean_arrival_time,
    partial_expectation,
    pdf,
    sample,
    support_upper,
)
from .errors import InfeasibleDeadline, SolverFailure, UnsupportedDistribution
from .route import (
    IDENTITY_TOL,
    PolicyAction,
    RouteSpec,
    StopIdentityCheck,
    WaitPolicy,
    laziness_check,
    plan_route,
    stop_decision,
    validate_route,
)
from .simulate import (
    CSV_HEADER,
    SimulationReport,
    Strategy,
    StrategyKind,
    compare_strategies,
    oracle_expected_time,
    report_csv_row,
    report_json_dict,
    simulate_strategy,
)

__version__ = "0.1.0"

__all__ = [
    "ArrivalDistribution",
    "BISECT_INTERVAL_TOL",
    "CDF_ONE_TOL",
    "CSV_HEADER",
    "Decision",
    "DeadlinedSolution",
    "Deterministic",
    "Empirical",
    "Exponential",
    "IDENTITY_TOL",
    "InfeasibleDeadline",
    "PolicyAction",
    "RESIDUAL_TOL",
    "RouteSpec",
    "SimulationReport",
    "SolutionKind",
    "SolveDiagnostics",
    "SolverFailure",
    "StopIdentityCheck",
    "Strategy",
    "StrategyKind",
    "SupportHorizon",
    "TravelerProfile",
    "Uniform",
    "UnsupportedDistribution",
    "WaitPolicy",
    "WaitSolution",
    "backend_name",
    "cdf",
    "clamp_deadline",
    "compare_strategies",
    "dist_from_json",
    "dist_to_json",
    "expected_travel_time",
    "indifference_residual",
    "laziness_check",
    "mean_arrival_time",
    "oracle_expected_time",
    "partial_expectation",
    "pdf",
    "plan_route",
    "report_csv_row",
    "report_json_dict",
    "sample",
    "simulate_strategy",
    "solve_wait_threshold",
    "solve_wait_threshold_detailed",
    "stop_decision",
    "support_upper",
    "uniform_closed_form_t_w",
    "validate_route",
    "walk_decision_deterministic",
]
