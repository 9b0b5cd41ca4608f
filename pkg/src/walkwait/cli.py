"""Command-line front-end: decide | solve | simulate | sweep.

Scenarios are single JSON documents (see ``parse_config``); all numeric CSV
output uses shortest round-trip float formatting, and undefined cells are
written as ``NA``.  Exit codes: 0 success, 2 usage/validation problems,
3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from dataclasses import dataclass

from .decision import (
    Decision,
    DeadlinedSolution,
    SolutionKind,
    TravelerProfile,
    clamp_deadline,
    expected_travel_time,
    solve_wait_threshold_detailed,
    walk_decision_deterministic,
)
from .distributions import (
    ArrivalDistribution,
    Deterministic,
    Exponential,
    Uniform,
    dist_from_json,
    dist_to_json,
    mean_arrival_time,
    support_upper,
)
from .errors import InfeasibleDeadline, SolverFailure
from .route import PolicyAction, RouteSpec, plan_route, validate_route
from .simulate import (
    CSV_HEADER,
    Strategy,
    compare_strategies,
    report_csv_row,
    report_json_dict,
)

SWEEP_CSV_HEADER = "param,value,variant,t_w,t_w_star,expected_time"
SWEEP_PARAMS = ("t_b", "d", "v_b", "v_w", "rate")


@dataclass(frozen=True)
class ScenarioConfig:
    route: RouteSpec
    traveler: TravelerProfile
    distribution: ArrivalDistribution
    deadline: float | None = None


def _require_fields(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise ValueError(f"{where} must be a JSON object, got {type(obj).__name__}")
    extra = set(obj) - allowed
    if extra:
        raise ValueError(f"{where}: unknown fields {sorted(extra)}")
    missing = required - set(obj)
    if missing:
        raise ValueError(f"{where}: missing fields {sorted(missing)}")


def parse_config(obj: dict) -> ScenarioConfig:
    """Strict scenario parser; unknown fields are rejected at every level."""
    _require_fields(
        obj,
        allowed={"route", "traveler", "distribution", "deadline"},
        required={"route", "traveler", "distribution"},
        where="config",
    )
    _require_fields(obj["route"], {"stops"}, {"stops"}, "config.route")
    _require_fields(obj["traveler"], {"v_w", "v_b"}, {"v_w", "v_b"}, "config.traveler")
    route = validate_route(RouteSpec(stops=tuple(obj["route"]["stops"])))
    traveler = TravelerProfile(
        v_w=float(obj["traveler"]["v_w"]), v_b=float(obj["traveler"]["v_b"])
    )
    distribution = dist_from_json(obj["distribution"])
    deadline = obj.get("deadline")
    if deadline is not None:
        deadline = float(deadline)
    return ScenarioConfig(
        route=route, traveler=traveler, distribution=distribution, deadline=deadline
    )


def config_to_dict(cfg: ScenarioConfig) -> dict:
    out = {
        "route": {"stops": list(cfg.route.stops)},
        "traveler": {"v_w": cfg.traveler.v_w, "v_b": cfg.traveler.v_b},
        "distribution": dist_to_json(cfg.distribution),
    }
    if cfg.deadline is not None:
        out["deadline"] = cfg.deadline
    return out


def _load_config(path: str) -> ScenarioConfig:
    text = sys.stdin.read() if path == "-" else open(path, "r", encoding="utf-8").read()
    return parse_config(json.loads(text))


def _na(value) -> str:
    if value is None or (isinstance(value, float) and value != value):
        return "NA"
    return repr(value) if isinstance(value, float) else str(value)


# ---------------------------------------------------------------------------
# decide
# ---------------------------------------------------------------------------

def _decide_deterministic(cfg: ScenarioConfig) -> str:
    d = cfg.route.total_distance
    t_b = cfg.distribution.t_b
    walk = d / cfg.traveler.v_w
    bus_total = t_b + d / cfg.traveler.v_b
    decision = walk_decision_deterministic(d, cfg.traveler, t_b)
    if cfg.deadline is not None:
        if cfg.deadline < walk:
            raise InfeasibleDeadline(
                f"deadline {cfg.deadline} h is infeasible: walking already takes {walk} h"
            )
        if decision is Decision.WAIT and bus_total > cfg.deadline:
            return (
                f"walk (bus total {bus_total:.4f} h misses deadline "
                f"t_d={cfg.deadline:.4f} h; walk {walk:.4f} h)"
            )
    if decision is Decision.WAIT:
        op = "<" if bus_total < walk else "<="
        return f"wait (bus arrives {t_b:.4f} h; bus total {bus_total:.4f} h {op} walk {walk:.4f} h)"
    return f"walk (walk {walk:.4f} h < bus total {bus_total:.4f} h)"


def cmd_decide(cfg: ScenarioConfig) -> str:
    """Full-route policy plus its expected travel time, one line of text."""
    if isinstance(cfg.distribution, Deterministic):
        return _decide_deterministic(cfg)
    d = cfg.route.total_distance
    traveler = cfg.traveler
    dist = cfg.distribution
    policy = plan_route(cfg.route, dist, traveler, deadline=cfg.deadline)
    if policy.action is PolicyAction.WALK_ENTIRE_ROUTE:
        return f"walk the entire route; expected {d / traveler.v_w:.4f} h"
    threshold = policy.threshold
    if isinstance(threshold, DeadlinedSolution):
        star, prime = threshold.t_w_star, threshold.t_w_prime
        expected = expected_travel_time(dist, d, traveler, star)
        if threshold.unclamped.kind is SolutionKind.WAIT_UNTIL:
            detail = f"t_w={threshold.unclamped.t_w:.4f} h, t_w'={prime:.4f} h, t_w*={star:.4f} h"
        else:
            detail = f"wait-for-bus clamped; t_w'={prime:.4f} h, t_w*={star:.4f} h"
        return f"wait at stop 1 until t={star:.4f} h ({detail}); expected {expected:.4f} h"
    if threshold.kind is SolutionKind.WAIT_FOR_BUS:
        expected = mean_arrival_time(dist) + d / traveler.v_b
        return f"wait at stop 1 for the bus; expected {expected:.4f} h"
    expected = expected_travel_time(dist, d, traveler, threshold.t_w)
    return f"wait at stop 1 until t={threshold.t_w:.4f} h; expected {expected:.4f} h"


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def cmd_solve(cfg: ScenarioConfig) -> str:
    """Threshold solve with bracketing diagnostics (stochastic arrivals only)."""
    d = cfg.route.total_distance
    solution, diag = solve_wait_threshold_detailed(cfg.distribution, d, cfg.traveler)
    if solution.kind is SolutionKind.WAIT_UNTIL:
        head = f"WaitUntil {solution.t_w:.9f} residual {solution.residual:.1e}"
    else:
        head = solution.kind.value
    source = "support" if diag.horizon_from_support else "expansion"
    bracket = "none" if diag.bracket is None else f"[{diag.bracket[0]!r}, {diag.bracket[1]!r}]"
    detail = (
        f"horizon={diag.horizon!r} ({source}) grid={diag.grid_points} "
        f"sign_changes={diag.sign_changes} bracket={bracket} "
        f"cdf_at_horizon={diag.cdf_at_horizon!r}"
    )
    return f"{head}\n{detail}"


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _planner_strategy(cfg: ScenarioConfig) -> Strategy:
    if isinstance(cfg.distribution, Deterministic):
        decision = walk_decision_deterministic(
            cfg.route.total_distance, cfg.traveler, cfg.distribution.t_b
        )
        if decision is Decision.WALK:
            return Strategy.walk_all()
        return Strategy.wait_for_bus_at(1)
    policy = plan_route(cfg.route, cfg.distribution, cfg.traveler, deadline=cfg.deadline)
    if policy.action is PolicyAction.WALK_ENTIRE_ROUTE:
        return Strategy.walk_all()
    threshold = policy.threshold
    if isinstance(threshold, DeadlinedSolution):
        return Strategy.wait_then_walk(1, threshold.t_w_star)
    if threshold.kind is SolutionKind.WAIT_FOR_BUS:
        return Strategy.wait_for_bus_at(1)
    return Strategy.wait_then_walk(1, threshold.t_w)


def _parse_strategy_token(token: str, cfg: ScenarioConfig) -> Strategy:
    parts = token.strip().split(":")
    name = parts[0]
    if name == "walk":
        if len(parts) != 1:
            raise ValueError(f"strategy 'walk' takes no arguments, got {token!r}")
        return Strategy.walk_all()
    if name == "waitbus":
        if len(parts) == 1:
            return Strategy.wait_for_bus_at(1)
        if len(parts) == 2:
            return Strategy.wait_for_bus_at(int(parts[1]))
        raise ValueError(f"bad strategy token {token!r}; expected waitbus[:STOP]")
    if name == "wait":
        if len(parts) == 2:
            return Strategy.wait_then_walk(1, float(parts[1]))
        if len(parts) == 3:
            return Strategy.wait_then_walk(int(parts[2]), float(parts[1]))
        raise ValueError(f"bad strategy token {token!r}; expected wait:TAU[:STOP]")
    if name == "plan":
        return _planner_strategy(cfg)
    raise ValueError(
        f"unknown strategy {token!r}; expected walk | waitbus[:STOP] | wait:TAU[:STOP] | plan"
    )


def _simulate_table(reports) -> str:
    header = CSV_HEADER.split(",")
    rows = [report_csv_row(r).split(",") for r in reports]
    widths = [max(len(h), *(len(row[j]) for row in rows)) for j, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def cmd_simulate(cfg: ScenarioConfig, args: argparse.Namespace) -> str:
    """Compare the requested strategies (plus the planner's pick) by simulation."""
    strategies = []
    tokens = [t for t in args.strategies.split(",") if t.strip()]
    tokens.append("plan")
    for token in tokens:
        strategy = _parse_strategy_token(token, cfg)
        if strategy not in strategies:
            strategies.append(strategy)
    reports = compare_strategies(
        strategies, cfg.distribution, cfg.route, cfg.traveler, args.trials, args.seed
    )
    csv_text = "\n".join([CSV_HEADER] + [report_csv_row(r) for r in reports]) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(csv_text)
    if args.format == "json":
        return json.dumps([report_json_dict(r) for r in reports], indent=2)
    if args.format == "csv":
        return csv_text.rstrip("\n")
    return _simulate_table(reports)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _apply_sweep_value(cfg: ScenarioConfig, param: str, value: float) -> ScenarioConfig:
    route, traveler, dist = cfg.route, cfg.traveler, cfg.distribution
    if param == "t_b":
        if not isinstance(dist, Uniform):
            raise ValueError(
                "sweeping t_b requires a uniform distribution in the scenario, "
                f"got {type(dist).__name__.lower()}"
            )
        dist = Uniform(t_b=value)
    elif param == "rate":
        if not isinstance(dist, Exponential):
            raise ValueError(
                "sweeping rate requires an exponential distribution in the scenario, "
                f"got {type(dist).__name__.lower()}"
            )
        dist = Exponential(rate=value)
    elif param == "d":
        if not value > 0:
            raise ValueError(f"swept distance must be positive, got {value}")
        factor = value / route.total_distance
        route = RouteSpec(stops=tuple(s * factor for s in route.stops))
    elif param == "v_w":
        traveler = TravelerProfile(v_w=value, v_b=traveler.v_b)
    elif param == "v_b":
        traveler = TravelerProfile(v_w=traveler.v_w, v_b=value)
    else:
        raise ValueError(f"unknown sweep parameter {param!r}; expected one of {SWEEP_PARAMS}")
    return ScenarioConfig(
        route=route, traveler=traveler, distribution=dist, deadline=cfg.deadline
    )


def _sweep_row(cfg: ScenarioConfig, param: str, value: float) -> dict:
    d = cfg.route.total_distance
    dist, traveler = cfg.distribution, cfg.traveler
    solution, _ = solve_wait_threshold_detailed(dist, d, traveler)
    t_w = solution.t_w if solution.kind is SolutionKind.WAIT_UNTIL else None
    if cfg.deadline is not None:
        clamped = clamp_deadline(
            solution, cfg.deadline, d, traveler, horizon=support_upper(dist)
        )
        t_w_star = clamped.t_w_star
        expected = expected_travel_time(dist, d, traveler, t_w_star)
    elif solution.kind is SolutionKind.WALK_NOW:
        t_w_star = 0.0
        expected = d / traveler.v_w
    elif solution.kind is SolutionKind.WAIT_UNTIL:
        t_w_star = t_w
        expected = expected_travel_time(dist, d, traveler, t_w)
    else:
        t_w_star = None
        expected = mean_arrival_time(dist) + d / traveler.v_b
    return {
        "param": param,
        "value": value,
        "variant": solution.kind.value,
        "t_w": t_w,
        "t_w_star": t_w_star,
        "expected_time": expected,
    }


def cmd_sweep(cfg: ScenarioConfig, args: argparse.Namespace) -> str:
    """One solve per grid point of the swept parameter; CSV for plotting."""
    if args.steps < 1:
        raise ValueError(f"--steps must be >= 1, got {args.steps}")
    if isinstance(cfg.distribution, Deterministic):
        raise ValueError("sweep requires a stochastic distribution in the scenario")
    if args.steps == 1:
        values = [args.start]
    else:
        step = (args.stop - args.start) / (args.steps - 1)
        values = [args.start + k * step for k in range(args.steps)]
    rows = [_sweep_row(_apply_sweep_value(cfg, args.param, v), args.param, v) for v in values]
    if args.format == "json":
        return json.dumps(rows, indent=2)
    lines = [SWEEP_CSV_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                [row["param"], _na(row["value"]), row["variant"],
                 _na(row["t_w"]), _na(row["t_w_star"]), _na(row["expected_time"])]
            )
        )
    csv_text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(csv_text)
    return csv_text.rstrip("\n")


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH",
                        help="scenario JSON file, or '-' for stdin")
    common.add_argument("--out", metavar="PATH", help="write CSV output to this file")
    common.add_argument("--seed", type=int, default=0, help="simulation seed (default 0)")
    common.add_argument("--trials", type=int, default=100_000,
                        help="simulation trials per strategy (default 100000)")
    common.add_argument("--format", choices=("csv", "json"),
                        help="machine-readable stdout format")
    common.add_argument("--dump-config", action="store_true",
                        help="print the normalized scenario JSON and exit")

    parser = argparse.ArgumentParser(prog="walkwait",
                                     description="walk-or-wait decisions for a bus route")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("decide", parents=[common],
                   help="full-route policy and its expected travel time")
    sub.add_parser("solve", parents=[common],
                   help="break-even wait threshold with solver diagnostics")
    p_sim = sub.add_parser("simulate", parents=[common],
                           help="Monte Carlo comparison of strategies")
    p_sim.add_argument("--strategies", default="",
                       help="comma list: walk | waitbus[:STOP] | wait:TAU[:STOP] | plan "
                            "(the planner's pick is always included)")
    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="solve across a parameter range, CSV output")
    p_sweep.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    p_sweep.add_argument("--start", type=float, required=True)
    p_sweep.add_argument("--stop", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _load_config(args.config)
        if args.dump_config:
            print(json.dumps(config_to_dict(cfg), indent=2, sort_keys=True))
            return 0
        if args.command == "decide":
            print(cmd_decide(cfg))
        elif args.command == "solve":
            print(cmd_solve(cfg))
        elif args.command == "simulate":
            print(cmd_simulate(cfg, args))
        else:
            print(cmd_sweep(cfg, args))
        return 0
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    raise SystemExit(main())
