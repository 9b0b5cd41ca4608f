"""Monte Carlo validation of the walk-or-wait analysis.

Strategies are simulated exactly as a traveler would execute them: walk to
the chosen stop, wait up to the threshold with the arrival clock restarting
on arrival at the stop, board if the bus comes, otherwise walk the rest.
A dense-quadrature evaluator of the same expectation provides a second,
non-sampling opinion.

Randomness: trial ``k`` consumes the ``k``-th output of a Philox 4x64
counter-based generator keyed by the seed, so per-trial draws are a pure
function of ``(seed, k)`` and results are independent of evaluation order.
Repeated calls with the same seed therefore reuse the same draws, which
gives common random numbers across strategies for free.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .decision import TravelerProfile
from .distributions import (
    ArrivalDistribution,
    Deterministic,
    Empirical,
    Exponential,
    Uniform,
    inverse_cdf_vec,
    pdf_vec,
    support_upper,
)
from .route import RouteSpec, validate_route

#: Quantile at which an unbounded support is truncated for quadrature.
ORACLE_TAIL_MASS = 1e-12
#: Minimum total number of quadrature nodes across the support.
ORACLE_MIN_NODES = 100_000

_EMPTY = np.empty(0, dtype=np.float64)


class StrategyKind(enum.Enum):
    WALK_ALL = "walk"
    WAIT_THEN_WALK = "wait"
    WAIT_FOR_BUS_AT = "waitbus"


@dataclass(frozen=True)
class Strategy:
    """An explicit, committed traveler strategy.

    ``stop`` is 1-based; ``tau`` is the wait threshold in hours for the
    wait-then-walk variant.
    """

    kind: StrategyKind
    stop: int | None = None
    tau: float | None = None

    def __post_init__(self):
        if self.kind is StrategyKind.WALK_ALL:
            if self.stop is not None or self.tau is not None:
                raise ValueError("a walk-everything strategy carries no stop or threshold")
            return
        if self.stop is None or self.stop < 1:
            raise ValueError(f"waiting strategies need a stop index >= 1, got {self.stop}")
        if self.kind is StrategyKind.WAIT_THEN_WALK:
            if self.tau is None or self.tau < 0:
                raise ValueError(f"wait-then-walk needs a threshold >= 0, got {self.tau}")
        elif self.tau is not None:
            raise ValueError("wait-for-bus carries no threshold")

    @classmethod
    def walk_all(cls) -> "Strategy":
        return cls(StrategyKind.WALK_ALL)

    @classmethod
    def wait_then_walk(cls, stop: int, tau: float) -> "Strategy":
        return cls(StrategyKind.WAIT_THEN_WALK, stop=stop, tau=float(tau))

    @classmethod
    def wait_for_bus_at(cls, stop: int) -> "Strategy":
        return cls(StrategyKind.WAIT_FOR_BUS_AT, stop=stop)


@dataclass(frozen=True)
class SimulationReport:
    """Mean travel time with its standard error over ``n_trials`` trials.

    ``stderr`` is the sample standard deviation divided by ``sqrt(n_trials)``;
    it is NaN for a single trial (serialized as ``NA``/``null``) and exactly
    0 for the deterministic walk-everything strategy.
    """

    strategy: Strategy
    n_trials: int
    mean_time: float
    stderr: float
    seed: int


CSV_HEADER = "strategy,stop,tau,n_trials,seed,mean_time,stderr"


def _csv_cell(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, float) and math.isnan(value):
        return "NA"
    return repr(value) if isinstance(value, float) else str(value)


def report_csv_row(report: SimulationReport) -> str:
    s = report.strategy
    cells = [s.kind.value, s.stop, s.tau, report.n_trials, report.seed,
             report.mean_time, report.stderr]
    return ",".join(_csv_cell(c) for c in cells)


def report_json_dict(report: SimulationReport) -> dict:
    s = report.strategy
    return {
        "strategy": {"kind": s.kind.value, "stop": s.stop, "tau": s.tau},
        "n_trials": report.n_trials,
        "seed": report.seed,
        "mean_time": report.mean_time,
        "stderr": None if math.isnan(report.stderr) else report.stderr,
    }


def trial_uniforms(seed: int, n_trials: int) -> np.ndarray:
    """The ``n_trials`` Philox outputs for this seed; draw k belongs to trial k."""
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    return np.random.Generator(np.random.Philox(key=seed)).random(n_trials)


def _kernel_args(dist: ArrivalDistribution) -> tuple[int, float, np.ndarray, np.ndarray, np.ndarray]:
    if isinstance(dist, Deterministic):
        return _kernel.KIND_DETERMINISTIC, dist.t_b, _EMPTY, _EMPTY, _EMPTY
    if isinstance(dist, Uniform):
        return _kernel.KIND_UNIFORM, dist.t_b, _EMPTY, _EMPTY, _EMPTY
    if isinstance(dist, Exponential):
        return _kernel.KIND_EXPONENTIAL, dist.rate, _EMPTY, _EMPTY, _EMPTY
    edges = np.asarray(dist.bin_edges, dtype=np.float64)
    masses = np.asarray(dist.bin_masses, dtype=np.float64)
    return _kernel.KIND_EMPIRICAL, 0.0, edges, np.cumsum(masses), masses


def _strategy_legs(strategy: Strategy, route: RouteSpec, traveler: TravelerProfile):
    """(lead walk time, wait threshold, bus ride time, fallback walk time)."""
    n = route.n_stops
    if strategy.stop is not None and not 1 <= strategy.stop < n:
        raise ValueError(
            f"strategy stop {strategy.stop} is not a waiting stop of a {n}-stop route"
        )
    d_i = route.stops[strategy.stop - 1]
    remaining = route.total_distance - d_i
    tau = strategy.tau if strategy.kind is StrategyKind.WAIT_THEN_WALK else math.inf
    return d_i / traveler.v_w, tau, remaining / traveler.v_b, remaining / traveler.v_w


def simulate_trial_totals(
    strategy: Strategy,
    dist: ArrivalDistribution,
    route: RouteSpec,
    traveler: TravelerProfile,
    u: np.ndarray,
) -> np.ndarray:
    """Travel totals for one uniform draw per trial (the simulator hot path)."""
    lead, tau, ride, walk_rem = _strategy_legs(strategy, route, traveler)
    kind, p, edges, cum, masses = _kernel_args(dist)
    return _kernel.trial_totals(
        np.ascontiguousarray(u, dtype=np.float64),
        kind, p, edges, cum, masses, lead, tau, ride, walk_rem,
    )


def simulate_strategy(
    strategy: Strategy,
    dist: ArrivalDistribution,
    route: RouteSpec,
    traveler: TravelerProfile,
    n_trials: int,
    seed: int,
) -> SimulationReport:
    """Estimate a strategy's expected travel time from ``n_trials`` trials.

    Bit-identical for identical inputs.  Walking everything is deterministic,
    so its report is computed exactly rather than sampled.
    """
    validate_route(route)
    if n_trials < 1:
        raise ValueError(f"need at least one trial, got {n_trials}")
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    if strategy.kind is StrategyKind.WALK_ALL:
        return SimulationReport(
            strategy=strategy,
            n_trials=n_trials,
            mean_time=route.total_distance / traveler.v_w,
            stderr=0.0,
            seed=seed,
        )
    u = trial_uniforms(seed, n_trials)
    totals = simulate_trial_totals(strategy, dist, route, traveler, u)
    mean = float(np.mean(totals))
    if n_trials == 1:
        stderr = math.nan
    else:
        stderr = float(np.std(totals, ddof=1) / math.sqrt(n_trials))
    return SimulationReport(
        strategy=strategy, n_trials=n_trials, mean_time=mean, stderr=stderr, seed=seed
    )


def compare_strategies(
    strategies: list[Strategy],
    dist: ArrivalDistribution,
    route: RouteSpec,
    traveler: TravelerProfile,
    n_trials: int,
    seed: int,
) -> list[SimulationReport]:
    """Simulate several strategies on the same per-trial draws.

    Sharing the draws (common random numbers) makes pairwise comparisons far
    sharper than independent runs for near-indifferent strategies.  Reports
    come back sorted by mean time, ascending; ties keep input order.
    """
    if not strategies:
        raise ValueError("need at least one strategy to compare")
    reports = [
        simulate_strategy(s, dist, route, traveler, n_trials, seed) for s in strategies
    ]
    return sorted(reports, key=lambda r: r.mean_time)


# ---------------------------------------------------------------------------
# Quadrature oracle.
# ---------------------------------------------------------------------------

def _simpson(ys: np.ndarray, xs: np.ndarray) -> float:
    """Composite Simpson on an evenly spaced, odd-length grid."""
    h = (xs[-1] - xs[0]) / (xs.size - 1)
    w = np.ones(xs.size)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float(h / 3.0 * np.dot(w, ys))


def oracle_expected_time(
    strategy: Strategy,
    dist: ArrivalDistribution,
    route: RouteSpec,
    traveler: TravelerProfile,
) -> float:
    """Expected travel time by dense numerical quadrature over the density.

    This path never touches the closed-form cdf/partial-expectation code:
    both the boarding mass and the boarding-time integral come from composite
    Simpson over at least ``ORACLE_MIN_NODES`` nodes, split at histogram bin
    edges (the integrand is linear inside a bin, so Simpson is exact there).
    Unbounded supports are truncated at the ``1 - ORACLE_TAIL_MASS`` quantile.
    The point-mass arrival has no density and is evaluated by case split.
    """
    validate_route(route)
    d = route.total_distance
    if strategy.kind is StrategyKind.WALK_ALL:
        return d / traveler.v_w
    lead, tau, ride, walk_rem = _strategy_legs(strategy, route, traveler)

    if isinstance(dist, Deterministic):
        if dist.t_b <= tau:
            return lead + dist.t_b + ride
        return lead + tau + walk_rem

    horizon = support_upper(dist)
    if horizon.is_finite:
        trunc = horizon.bound
    else:
        trunc = float(inverse_cdf_vec(dist, np.asarray([1.0 - ORACLE_TAIL_MASS]))[0])
    upper = min(tau, trunc)

    boarding_mass = 0.0
    boarding_time = 0.0
    if upper > 0.0:
        cuts = {0.0, upper}
        if isinstance(dist, Empirical):
            cuts.update(e for e in dist.bin_edges if 0.0 < e < upper)
        bounds = sorted(cuts)
        for a, b in zip(bounds, bounds[1:]):
            intervals = max(4, int(math.ceil((b - a) / upper * ORACLE_MIN_NODES)))
            intervals += intervals % 2
            xs = np.linspace(a, b, intervals + 1)
            if isinstance(dist, Empirical):
                # Segments never straddle a bin edge, so the density is one
                # constant throughout; sample it at the midpoint, where it is
                # unambiguous (at a shared edge the density belongs to the
                # right-hand bin).
                ps = np.full(xs.size, pdf_vec(dist, np.asarray([(a + b) / 2.0]))[0])
            else:
                ps = pdf_vec(dist, xs)
            boarding_mass += _simpson(ps, xs)
            boarding_time += _simpson(ps * (ride + xs), xs)

    if strategy.kind is StrategyKind.WAIT_FOR_BUS_AT:
        return lead + boarding_time
    return lead + boarding_time + max(0.0, 1.0 - boarding_mass) * (tau + walk_rem)
