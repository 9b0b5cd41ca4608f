"""Two-stop walk-or-wait analysis.

Setting: a traveler must cover ``d`` miles served by a single bus line.
Walking takes ``d / v_w`` hours; boarding a bus that shows up after ``t``
hours takes ``t + d / v_b`` hours.  A committed strategy is described by a
wait threshold ``tau``: wait at the stop until ``tau``, board the bus if it
arrives, otherwise give up and walk the whole way.

Its expected travel time is

    E(tau) = integral_0^tau density(t) * (d/v_b + t) dt
             + (1 - cdf(tau)) * (d/v_w + tau)

``E(0)`` is exactly the pure walking time, so ``tau = 0`` is always a root
of the indifference equation ``E(tau) = d/v_w``.  The decision rule solves
for the largest break-even threshold ``t_w`` in ``(0, horizon]``; the sign
of the scaled residual ``h(tau) = (E(tau) - d/v_w) / tau`` classifies the
no-root cases.  Ties go to the bus (the traveler would rather ride than
walk when the times are equal).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .distributions import (
    ArrivalDistribution,
    Deterministic,
    Empirical,
    SupportHorizon,
    cdf,
    cdf_vec,
    partial_expectation_vec,
    support_upper,
)
from .errors import InfeasibleDeadline, SolverFailure, UnsupportedDistribution

#: Bisection stops when the bracket is narrower than this (hours).
BISECT_INTERVAL_TOL = 1e-12
#: A reported threshold must satisfy |E(t_w) - d/v_w| below this (hours).
RESIDUAL_TOL = 1e-9
#: cdf values this close to 1 are treated as "the bus is certain by then".
CDF_ONE_TOL = 1e-9

_GRID_POINTS = 4096
_BIN_REFINEMENT = 257
_BRACKET_START_HOURS = 1.0
_BRACKET_CAP_HOURS = 2.0**20
_EXPANSION_GRID = 512


class Decision(enum.Enum):
    WALK = "walk"
    WAIT = "wait"


class SolutionKind(enum.Enum):
    WALK_NOW = "WalkNow"
    WAIT_UNTIL = "WaitUntil"
    WAIT_FOR_BUS = "WaitForBus"


@dataclass(frozen=True)
class TravelerProfile:
    """Walking and bus speeds in miles per hour; the bus must be faster."""

    v_w: float
    v_b: float

    def __post_init__(self):
        if not self.v_w > 0:
            raise ValueError(f"walking speed must be positive, got {self.v_w}")
        if not self.v_b > self.v_w:
            raise ValueError(
                f"bus speed must exceed walking speed, got v_b={self.v_b} <= v_w={self.v_w}"
            )


@dataclass(frozen=True)
class WaitSolution:
    """Outcome of the threshold solve.

    ``residual`` is ``E(t_w) - d/v_w`` at the reported threshold; it is 0 by
    convention for the WalkNow and WaitForBus variants.
    """

    kind: SolutionKind
    t_w: float | None = None
    residual: float = 0.0

    def __post_init__(self):
        if self.kind is SolutionKind.WAIT_UNTIL:
            if self.t_w is None or not self.t_w > 0:
                raise ValueError(f"WaitUntil threshold must be positive, got {self.t_w}")
        elif self.t_w is not None:
            raise ValueError(f"{self.kind.value} carries no threshold")

    @classmethod
    def walk_now(cls) -> "WaitSolution":
        return cls(SolutionKind.WALK_NOW)

    @classmethod
    def wait_for_bus(cls) -> "WaitSolution":
        return cls(SolutionKind.WAIT_FOR_BUS)

    @classmethod
    def wait_until(cls, t_w: float, residual: float) -> "WaitSolution":
        return cls(SolutionKind.WAIT_UNTIL, t_w=t_w, residual=residual)


@dataclass(frozen=True)
class DeadlinedSolution:
    """A solution clamped by a hard arrival deadline.

    ``t_w_prime`` is the latest departure that still allows walking the full
    distance in time; ``t_w_star`` is the effective threshold actually used.
    """

    unclamped: WaitSolution
    t_w_prime: float
    t_w_star: float


@dataclass(frozen=True)
class SolveDiagnostics:
    """How the root search went; attached to solver failures and CLI output."""

    horizon: float
    horizon_from_support: bool
    grid_points: int
    sign_changes: int
    bracket: tuple[float, float] | None
    cdf_at_horizon: float


def walk_decision_deterministic(d: float, traveler: TravelerProfile, t_b: float) -> Decision:
    """Walk/wait comparison when the bus arrival time ``t_b`` is known.

    Walk exactly when ``d/v_w < t_b + d/v_b``; on a tie the traveler saves
    the effort and boards the bus.
    """
    if not d > 0:
        raise ValueError(f"distance must be positive, got {d}")
    if t_b < 0:
        raise ValueError(f"arrival time must be nonnegative, got {t_b}")
    if d / traveler.v_w < t_b + d / traveler.v_b:
        return Decision.WALK
    return Decision.WAIT


def _check_expectation_args(dist: ArrivalDistribution, d: float, tau: float) -> None:
    if isinstance(dist, Deterministic):
        raise UnsupportedDistribution(
            "expected travel time needs an evaluable density; "
            "use walk_decision_deterministic for a point-mass arrival"
        )
    if not d > 0:
        raise ValueError(f"distance must be positive, got {d}")
    if tau < 0:
        raise ValueError(f"wait threshold must be nonnegative, got {tau}")


def _expected_travel_time_vec(
    dist: ArrivalDistribution, d: float, traveler: TravelerProfile, taus: np.ndarray
) -> np.ndarray:
    """Vectorized E(tau); thresholds beyond a finite support are clamped."""
    horizon = support_upper(dist)
    if horizon.is_finite:
        taus = np.minimum(taus, horizon.bound)
    mass = cdf_vec(dist, taus)
    ride = d / traveler.v_b
    walk = d / traveler.v_w
    return mass * ride + partial_expectation_vec(dist, taus) + (1.0 - mass) * (walk + taus)


def expected_travel_time(
    dist: ArrivalDistribution, d: float, traveler: TravelerProfile, tau: float
) -> float:
    """Expected total time of "wait until ``tau``, then walk if no bus came".

    At ``tau = 0`` this is exactly the walking time ``d/v_w``.  Thresholds
    beyond a finite support horizon are clamped to it: once the bus is
    certain to have arrived, a larger threshold changes nothing.
    """
    _check_expectation_args(dist, d, tau)
    return float(_expected_travel_time_vec(dist, d, traveler, np.asarray([tau]))[0])


def indifference_residual(
    dist: ArrivalDistribution, d: float, traveler: TravelerProfile, tau: float
) -> float:
    """``expected_travel_time(tau) - d/v_w``; zero exactly at ``tau = 0``."""
    return expected_travel_time(dist, d, traveler, tau) - d / traveler.v_w


def uniform_closed_form_t_w(d: float, traveler: TravelerProfile, t_b: float) -> float:
    """Nonzero break-even threshold for the uniform arrival, in closed form.

    For the uniform density the indifference equation is the quadratic
    ``-t_w**2 / (2 t_b) + (d (1/v_b - 1/v_w) / t_b + 1) t_w = 0`` whose
    nonzero root is ``2 (t_b + d/v_b - d/v_w)``.  (Flipping the sign of the
    ``d/v_w`` term looks plausible but the result then fails to satisfy the
    indifference equation; the tests pin this down.)

    The value may be negative or exceed ``t_b``; interpreting those cases is
    the job of :func:`solve_wait_threshold`.
    """
    if not d > 0:
        raise ValueError(f"distance must be positive, got {d}")
    if not t_b > 0:
        raise ValueError(f"support length must be positive, got {t_b}")
    return 2.0 * (t_b + d / traveler.v_b - d / traveler.v_w)


def _scaled_residual_vec(
    dist: ArrivalDistribution, d: float, traveler: TravelerProfile, taus: np.ndarray
) -> np.ndarray:
    walk = d / traveler.v_w
    return (_expected_travel_time_vec(dist, d, traveler, taus) - walk) / taus


def _scan_grid(dist: ArrivalDistribution, lo: float, hi: float) -> np.ndarray:
    """Strictly positive probe points in (lo, hi], refined inside histogram bins."""
    taus = np.linspace(lo, hi, _GRID_POINTS + 1)[1:]
    if isinstance(dist, Empirical):
        extra = [
            np.linspace(max(a, lo), b, _BIN_REFINEMENT)
            for a, b in zip(dist.bin_edges, dist.bin_edges[1:])
            if b > lo
        ]
        taus = np.unique(np.concatenate([taus, *extra]))
        taus = taus[(taus > lo) & (taus <= hi)]
    return taus


def _last_crossing(taus: np.ndarray, h: np.ndarray) -> tuple[float, float] | float | None:
    """Largest root evidence in a scan: a bracketing pair, an exact zero, or None."""
    zero_idx = np.flatnonzero(h == 0.0)
    sign_flip = np.flatnonzero(h[:-1] * h[1:] < 0.0)
    best_zero = float(taus[zero_idx[-1]]) if zero_idx.size else None
    best_pair = (
        (float(taus[sign_flip[-1]]), float(taus[sign_flip[-1] + 1])) if sign_flip.size else None
    )
    if best_zero is not None and (best_pair is None or best_zero >= best_pair[1]):
        return best_zero
    return best_pair


def _bisect_scaled_residual(
    dist: ArrivalDistribution,
    d: float,
    traveler: TravelerProfile,
    lo: float,
    hi: float,
) -> float:
    h = lambda tau: float(_scaled_residual_vec(dist, d, traveler, np.asarray([tau]))[0])
    f_lo = h(lo)
    if f_lo == 0.0:
        return lo
    while hi - lo >= BISECT_INTERVAL_TOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # bracket at floating-point resolution
        f_mid = h(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_wait_threshold_detailed(
    dist: ArrivalDistribution, d: float, traveler: TravelerProfile
) -> tuple[WaitSolution, SolveDiagnostics]:
    """Solve the indifference equation and report how the search went.

    The trivial root at ``tau = 0`` is factored out by classifying the
    scaled residual ``h(tau) = (E(tau) - d/v_w) / tau`` on ``(0, horizon]``:

    - a sign change locates the largest break-even threshold (bisection to a
      bracket below ``BISECT_INTERVAL_TOL``, residual below ``RESIDUAL_TOL``);
    - ``h >= 0`` throughout with the bus certain by the horizon resolves to
      WaitForBus (ride-preferring tie-break at the horizon);
    - ``h < 0`` at small thresholds with no sign change resolves to WalkNow.

    Unbounded supports are scanned by doubling the horizon from 1 hour up to
    ``2**20`` hours; running out of horizon while the bus is still not
    certain raises :class:`SolverFailure`.
    """
    _check_expectation_args(dist, d, 0.0)
    horizon = support_upper(dist)

    if horizon.is_finite:
        hi = horizon.bound
        taus = _scan_grid(dist, 0.0, hi)
        h = _scaled_residual_vec(dist, d, traveler, taus)
        crossing = _last_crossing(taus, h)
    else:
        hi = _BRACKET_START_HOURS
        crossing = None
        taus = np.empty(0)
        h = np.empty(0)
        lo = 0.0
        while True:
            seg = np.linspace(lo, hi, _EXPANSION_GRID + 1)[1:]
            seg_h = _scaled_residual_vec(dist, d, traveler, seg)
            taus = np.concatenate([taus, seg])
            h = np.concatenate([h, seg_h])
            crossing = _last_crossing(taus, h)
            if crossing is not None or hi >= _BRACKET_CAP_HOURS:
                break
            lo, hi = hi, hi * 2.0

    cdf_at_hi = cdf(dist, hi)
    sign_changes = int(np.count_nonzero(h[:-1] * h[1:] < 0.0)) if h.size > 1 else 0
    diag = SolveDiagnostics(
        horizon=hi,
        horizon_from_support=horizon.is_finite,
        grid_points=int(taus.size),
        sign_changes=sign_changes,
        bracket=crossing if isinstance(crossing, tuple) else None,
        cdf_at_horizon=cdf_at_hi,
    )

    if crossing is not None:
        if isinstance(crossing, tuple):
            root = _bisect_scaled_residual(dist, d, traveler, *crossing)
        else:
            root = crossing
        residual = indifference_residual(dist, d, traveler, root)
        if abs(residual) >= RESIDUAL_TOL:
            raise SolverFailure(
                "bisection converged but the residual check failed",
                {"root": root, "residual": residual, **diag.__dict__},
            )
        # A root at the horizon of a certain arrival is just waiting for the
        # bus; the tie goes to riding.
        if horizon.is_finite and hi - root <= RESIDUAL_TOL and cdf_at_hi >= 1.0 - CDF_ONE_TOL:
            return WaitSolution.wait_for_bus(), diag
        return WaitSolution.wait_until(float(root), float(residual)), diag

    if bool(np.any(h < 0.0)):
        return WaitSolution.walk_now(), diag
    # h >= 0 throughout (possibly identically zero): ride-preferring.
    if cdf_at_hi >= 1.0 - CDF_ONE_TOL:
        return WaitSolution.wait_for_bus(), diag
    raise SolverFailure(
        "no break-even threshold below the horizon cap and the bus is not "
        "certain to arrive by it",
        diag.__dict__,
    )


def solve_wait_threshold(
    dist: ArrivalDistribution, d: float, traveler: TravelerProfile
) -> WaitSolution:
    """See :func:`solve_wait_threshold_detailed`; drops the diagnostics."""
    solution, _ = solve_wait_threshold_detailed(dist, d, traveler)
    return solution


def clamp_deadline(
    solution: WaitSolution,
    t_d: float,
    d: float,
    traveler: TravelerProfile,
    horizon: SupportHorizon | None = None,
) -> DeadlinedSolution:
    """Clamp a threshold to a hard arrival deadline ``t_d``.

    The latest departure that still gets the traveler there on foot is
    ``t_w' = t_d - d/v_w``; the effective threshold is ``min(t_w, t_w')``.
    WaitForBus uses the support horizon as its unclamped threshold when one
    is known (pass ``horizon``), otherwise the deadline slack itself.
    """
    walk = d / traveler.v_w
    if t_d < walk:
        raise InfeasibleDeadline(
            f"deadline {t_d} h is infeasible: walking already takes {walk} h"
        )
    t_w_prime = t_d - walk
    if solution.kind is SolutionKind.WALK_NOW:
        t_w_star = 0.0
    elif solution.kind is SolutionKind.WAIT_UNTIL:
        t_w_star = min(solution.t_w, t_w_prime)
    else:
        if horizon is not None and horizon.is_finite:
            t_w_star = min(horizon.bound, t_w_prime)
        else:
            t_w_star = t_w_prime
    return DeadlinedSolution(unclamped=solution, t_w_prime=t_w_prime, t_w_star=t_w_star)
