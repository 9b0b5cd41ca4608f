"""Multi-stop routes and the collapse to a single decision.

A route is the ordered list of stop distances from the starting point; the
traveler starts at the first stop and the destination is the last.  At any
stop short of the destination the walk-or-wait analysis applies to the
distance still remaining.

Key structural fact: waiting at a later stop i after walking to it yields a
total expected time of ``d_i/v_w + (d - d_i)/v_w = d/v_w`` whenever stop i's
threshold is an interior break-even point, i.e. exactly the full walking
time.  Walking ahead to wait therefore never strictly beats waiting at the
first stop, so a full-route policy either walks the whole way or boards at
stop 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .decision import (
    DeadlinedSolution,
    SolutionKind,
    TravelerProfile,
    WaitSolution,
    clamp_deadline,
    expected_travel_time,
    solve_wait_threshold,
)
from .distributions import ArrivalDistribution, support_upper
from .errors import InfeasibleDeadline

#: Tolerance on the waiting-at-stop-i substitution identity (hours).
IDENTITY_TOL = 1e-8


@dataclass(frozen=True)
class RouteSpec:
    """Stop distances in miles from the start; ``stops[0]`` is the origin."""

    stops: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "stops", tuple(float(s) for s in self.stops))

    @property
    def n_stops(self) -> int:
        return len(self.stops)

    @property
    def total_distance(self) -> float:
        return self.stops[-1]


class PolicyAction(enum.Enum):
    WALK_ENTIRE_ROUTE = "walk-entire-route"
    WAIT_AT_STOP = "wait-at-stop"


@dataclass(frozen=True)
class WaitPolicy:
    """Full-route policy: either walk everything or wait at ``board_stop``.

    ``board_stop`` is 1-based and is always 1 for waiting policies; walking
    policies carry neither a stop nor a threshold.
    """

    action: PolicyAction
    board_stop: int | None = None
    threshold: WaitSolution | DeadlinedSolution | None = None


def validate_route(route: RouteSpec) -> RouteSpec:
    """Check the route invariants; raises naming the offending stop index."""
    stops = route.stops
    if len(stops) < 2:
        raise ValueError(f"a route needs at least 2 stops, got {len(stops)}")
    if stops[0] != 0.0:
        raise ValueError(f"stop 1 must sit at distance 0, got {stops[0]}")
    for j in range(1, len(stops)):
        if not stops[j] > stops[j - 1]:
            raise ValueError(
                f"stop distances must be strictly increasing; stop {j + 1} "
                f"is at {stops[j]} after {stops[j - 1]}"
            )
    return route


def stop_decision(
    route: RouteSpec, i: int, dist: ArrivalDistribution, traveler: TravelerProfile
) -> WaitSolution:
    """Walk-or-wait solve at stop ``i`` (1-based) over the remaining distance."""
    validate_route(route)
    n = route.n_stops
    if i == n:
        raise ValueError(f"stop {i} is the destination; there is no decision to make")
    if not 1 <= i < n:
        raise ValueError(f"stop index must be in [1, {n - 1}], got {i}")
    remaining = route.total_distance - route.stops[i - 1]
    return solve_wait_threshold(dist, remaining, traveler)


@dataclass(frozen=True)
class StopIdentityCheck:
    """Substitution identity at one stop: walking there and then waiting up
    to the stop's break-even threshold should cost exactly the full walking
    time."""

    stop: int
    t_w: float
    residual: float
    passed: bool


def laziness_check(
    route: RouteSpec, dist: ArrivalDistribution, traveler: TravelerProfile
) -> list[StopIdentityCheck]:
    """Verify the substitution identity at every stop with an interior threshold.

    For each stop i whose decision over the remaining distance is an
    interior WaitUntil with threshold ``t_w_i``, checks that

        stops[i-1]/v_w + E_remaining(t_w_i)  ==  total_distance/v_w

    within ``IDENTITY_TOL``.  Stops that resolve to WalkNow or WaitForBus
    carry no interior threshold and are skipped; failures are reported, not
    raised.
    """
    validate_route(route)
    d = route.total_distance
    walk_total = d / traveler.v_w
    report = []
    for i in range(1, route.n_stops):
        solution = stop_decision(route, i, dist, traveler)
        if solution.kind is not SolutionKind.WAIT_UNTIL:
            continue
        d_i = route.stops[i - 1]
        expected_from_stop = expected_travel_time(dist, d - d_i, traveler, solution.t_w)
        residual = d_i / traveler.v_w + expected_from_stop - walk_total
        report.append(
            StopIdentityCheck(
                stop=i,
                t_w=solution.t_w,
                residual=residual,
                passed=abs(residual) < IDENTITY_TOL,
            )
        )
    return report


def plan_route(
    route: RouteSpec,
    dist: ArrivalDistribution,
    traveler: TravelerProfile,
    deadline: float | None = None,
) -> WaitPolicy:
    """Build the full-route policy.

    Solves at stop 1 over the full distance.  WalkNow collapses to walking
    the entire route (waiting at a later stop can never strictly beat it and
    costs the walk there); anything else waits at stop 1, with the threshold
    clamped when a deadline is given.
    """
    validate_route(route)
    d = route.total_distance
    if deadline is not None and deadline < d / traveler.v_w:
        raise InfeasibleDeadline(
            f"deadline {deadline} h is infeasible: walking already takes {d / traveler.v_w} h"
        )
    solution = solve_wait_threshold(dist, d, traveler)
    if solution.kind is SolutionKind.WALK_NOW:
        return WaitPolicy(action=PolicyAction.WALK_ENTIRE_ROUTE)
    threshold: WaitSolution | DeadlinedSolution = solution
    if deadline is not None:
        threshold = clamp_deadline(solution, deadline, d, traveler, horizon=support_upper(dist))
    return WaitPolicy(action=PolicyAction.WAIT_AT_STOP, board_stop=1, threshold=threshold)
