"""Route validation, per-stop decisions, and the collapse to stop 1."""

import numpy as np
import pytest

from walkwait import (
    InfeasibleDeadline,
    PolicyAction,
    RouteSpec,
    SolutionKind,
    TravelerProfile,
    Uniform,
    laziness_check,
    plan_route,
    solve_wait_threshold,
    stop_decision,
    uniform_closed_form_t_w,
    validate_route,
)

from scenario_gen import random_distribution, random_route, random_traveler

TR = TravelerProfile(v_w=4.0, v_b=20.0)
UNIFORM = Uniform(t_b=0.5)
ROUTE = RouteSpec(stops=(0.0, 1.0, 2.0))


def test_validate_route_ok():
    assert validate_route(ROUTE) is ROUTE


def test_validate_route_errors_name_the_stop():
    with pytest.raises(ValueError, match="stop 1"):
        validate_route(RouteSpec(stops=(0.5, 1.0, 2.0)))
    with pytest.raises(ValueError, match="stop 3"):
        validate_route(RouteSpec(stops=(0.0, 2.0, 1.0)))
    with pytest.raises(ValueError, match="at least 2"):
        validate_route(RouteSpec(stops=(0.0,)))


def test_stop_decision_remaining_distance():
    # remaining distance 1: candidate root 2*(0.5 + 0.05 - 0.25) = 0.6 > t_b,
    # so the decision at stop 2 is to sit for the (certain) bus
    assert uniform_closed_form_t_w(1.0, TR, 0.5) == pytest.approx(0.6, abs=1e-12)
    assert stop_decision(ROUTE, 2, UNIFORM, TR).kind is SolutionKind.WAIT_FOR_BUS


def test_stop_decision_at_origin_is_the_full_solve():
    assert stop_decision(ROUTE, 1, UNIFORM, TR) == solve_wait_threshold(UNIFORM, 2.0, TR)


def test_stop_decision_index_errors():
    with pytest.raises(ValueError, match="destination"):
        stop_decision(ROUTE, 3, UNIFORM, TR)
    with pytest.raises(ValueError):
        stop_decision(ROUTE, 0, UNIFORM, TR)
    with pytest.raises(ValueError):
        stop_decision(ROUTE, 4, UNIFORM, TR)


def test_threshold_limit_as_remaining_distance_vanishes():
    # closed form tends to 2 t_b as the leg shrinks
    assert uniform_closed_form_t_w(1e-9, TR, 0.5) == pytest.approx(1.0, abs=1e-6)


def test_laziness_identity_on_interior_stops():
    route = RouteSpec(stops=(0.0, 0.5, 2.0))
    report = laziness_check(route, UNIFORM, TR)
    assert [c.stop for c in report] == [1, 2]
    # stop 1 reduces to the root certificate itself
    solution = solve_wait_threshold(UNIFORM, 2.0, TR)
    assert report[0].residual == pytest.approx(solution.residual, abs=1e-15)
    for check in report:
        assert check.passed
        assert abs(check.residual) < 1e-8
    # stop 2: remaining 1.5 miles, interior root 2*(0.5 + 0.075 - 0.375) = 0.4
    assert report[1].t_w == pytest.approx(0.4, abs=1e-9)


def test_laziness_empty_when_every_stop_walks():
    # t_b below the gap at every stop: all decisions are WalkNow
    slow_bus = TravelerProfile(v_w=4.0, v_b=5.0)
    report = laziness_check(ROUTE, Uniform(t_b=0.02), slow_bus)
    assert report == []


def test_plan_route_collapses_to_stop_one():
    policy = plan_route(ROUTE, UNIFORM, TR)
    assert policy.action is PolicyAction.WAIT_AT_STOP
    assert policy.board_stop == 1
    assert policy.threshold.kind is SolutionKind.WAIT_UNTIL
    assert policy.threshold.t_w == pytest.approx(0.2, abs=1e-9)


def test_plan_route_deadline_clamp():
    policy = plan_route(ROUTE, UNIFORM, TR, deadline=0.55)
    assert policy.board_stop == 1
    assert policy.threshold.t_w_prime == pytest.approx(0.05, abs=1e-15)
    assert policy.threshold.t_w_star == pytest.approx(0.05, abs=1e-15)


def test_plan_route_walks_when_bus_is_pointless():
    # barely faster bus with a tiny support: candidate root is negative
    nearly_walking = TravelerProfile(v_w=4.0, v_b=4.0001)
    policy = plan_route(ROUTE, Uniform(t_b=1e-6), nearly_walking)
    assert policy.action is PolicyAction.WALK_ENTIRE_ROUTE
    assert policy.board_stop is None
    assert policy.threshold is None


def test_plan_route_infeasible_deadline():
    with pytest.raises(InfeasibleDeadline):
        plan_route(ROUTE, UNIFORM, TR, deadline=0.49)


def test_policy_collapse_property():
    rng = np.random.default_rng(61)
    for _ in range(60):
        route = random_route(rng)
        dist = random_distribution(rng, kinds=("uniform", "empirical"))
        traveler = random_traveler(rng)
        policy = plan_route(route, dist, traveler)
        assert policy.action is PolicyAction.WALK_ENTIRE_ROUTE or policy.board_stop == 1


def test_route_invariance_to_interior_stops():
    rng = np.random.default_rng(71)
    for _ in range(20):
        dist = random_distribution(rng, kinds=("uniform", "empirical"))
        traveler = random_traveler(rng)
        base = plan_route(RouteSpec(stops=(0.0, 2.0)), dist, traveler)
        more = plan_route(RouteSpec(stops=(0.0, 0.3, 1.1, 1.7, 2.0)), dist, traveler)
        assert base == more


def test_route_spec_normalizes_to_floats():
    route = RouteSpec(stops=(0, 1, 2))
    assert route.stops == (0.0, 1.0, 2.0)
    assert route.total_distance == 2.0
    assert route.n_stops == 3
