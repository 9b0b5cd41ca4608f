"""Bus-arrival distributions.

The time until the next bus reaches a stop is modeled by one of four
variants, all with support on t >= 0 (hours):

- ``Deterministic(t_b)``: the bus arrives at exactly ``t_b``.  This is a
  point mass, so it has no finite density; ``pdf`` rejects it and consumers
  work through ``cdf``/``partial_expectation``, which are well defined.
- ``Uniform(t_b)``: density ``1/t_b`` on ``[0, t_b]``.
- ``Exponential(rate)``: density ``rate * exp(-rate * t)``.
- ``Empirical(bin_edges, bin_masses)``: piecewise-constant density over
  contiguous bins; masses must sum to one.

All values are immutable after construction and safe to share between
threads.  Sampling takes an explicit ``numpy.random.Generator`` so callers
own their randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedDistribution

#: Tolerance on the total probability mass of an Empirical histogram.
MASS_TOL = 1e-12


@dataclass(frozen=True)
class Deterministic:
    """Point mass: the next bus arrives at exactly ``t_b`` hours."""

    t_b: float

    def __post_init__(self):
        if not self.t_b > 0:
            raise ValueError(f"deterministic arrival time must be positive, got {self.t_b}")


@dataclass(frozen=True)
class Uniform:
    """Uniform arrival on ``[0, t_b]`` with density ``1/t_b``."""

    t_b: float

    def __post_init__(self):
        if not self.t_b > 0:
            raise ValueError(f"uniform support length must be positive, got {self.t_b}")


@dataclass(frozen=True)
class Exponential:
    """Memoryless arrival with the given rate (buses per hour)."""

    rate: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError(f"exponential rate must be positive, got {self.rate}")


@dataclass(frozen=True)
class Empirical:
    """Histogram density: ``bin_masses[j]`` spread uniformly over
    ``[bin_edges[j], bin_edges[j + 1])``.

    Edges must be strictly increasing with ``bin_edges[0] >= 0`` (mass may
    begin at t = 0, i.e. a bus may be imminent the moment the traveler
    arrives); masses must be nonnegative and sum to one within ``MASS_TOL``.
    """

    bin_edges: tuple[float, ...]
    bin_masses: tuple[float, ...]

    def __post_init__(self):
        edges = tuple(float(e) for e in self.bin_edges)
        masses = tuple(float(m) for m in self.bin_masses)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "bin_masses", masses)
        if len(edges) < 2 or len(masses) != len(edges) - 1:
            raise ValueError(
                f"need len(bin_edges) == len(bin_masses) + 1 >= 2, "
                f"got {len(edges)} edges and {len(masses)} masses"
            )
        if edges[0] < 0:
            raise ValueError(f"bin_edges[0] must be >= 0, got {edges[0]}")
        for j in range(len(edges) - 1):
            if not edges[j + 1] > edges[j]:
                raise ValueError(f"bin_edges must be strictly increasing at index {j}")
        if any(m < 0 for m in masses):
            raise ValueError("bin_masses must be nonnegative")
        if abs(math.fsum(masses) - 1.0) > MASS_TOL:
            raise ValueError(f"bin_masses must sum to 1 within {MASS_TOL}, got {math.fsum(masses)}")


ArrivalDistribution = Deterministic | Uniform | Exponential | Empirical


@dataclass(frozen=True)
class SupportHorizon:
    """Upper end of a distribution's support; ``bound is None`` means unbounded."""

    bound: float | None

    @classmethod
    def finite(cls, bound: float) -> "SupportHorizon":
        if not bound > 0:
            raise ValueError(f"finite horizon must be positive, got {bound}")
        return cls(float(bound))

    @classmethod
    def unbounded(cls) -> "SupportHorizon":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self.bound is not None


def _empirical_arrays(dist: Empirical) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Edges, per-bin masses and cumulative masses as float64 arrays."""
    edges = np.asarray(dist.bin_edges, dtype=np.float64)
    masses = np.asarray(dist.bin_masses, dtype=np.float64)
    return edges, masses, np.cumsum(masses)


# ---------------------------------------------------------------------------
# Vectorized primitives.  The scalar API below wraps these; the threshold
# solver and the quadrature oracle call them directly on whole grids.
# ---------------------------------------------------------------------------

def pdf_vec(dist: ArrivalDistribution, t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    if isinstance(dist, Deterministic):
        raise UnsupportedDistribution(
            "a point-mass arrival has no finite density; use cdf/partial_expectation"
        )
    if isinstance(dist, Uniform):
        inside = (t >= 0.0) & (t <= dist.t_b)
        return np.where(inside, 1.0 / dist.t_b, 0.0)
    if isinstance(dist, Exponential):
        with np.errstate(over="ignore"):
            dens = dist.rate * np.exp(-dist.rate * np.maximum(t, 0.0))
        return np.where(t >= 0.0, dens, 0.0)
    edges, masses, _ = _empirical_arrays(dist)
    dens_bins = masses / np.diff(edges)
    idx = np.clip(np.searchsorted(edges, t, side="right") - 1, 0, masses.size - 1)
    inside = (t >= edges[0]) & (t <= edges[-1])
    return np.where(inside, dens_bins[idx], 0.0)


def cdf_vec(dist: ArrivalDistribution, t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    if isinstance(dist, Deterministic):
        return np.where(t >= dist.t_b, 1.0, 0.0)
    if isinstance(dist, Uniform):
        return np.clip(t / dist.t_b, 0.0, 1.0)
    if isinstance(dist, Exponential):
        return np.where(t > 0.0, -np.expm1(-dist.rate * np.maximum(t, 0.0)), 0.0)
    edges, _, cum = _empirical_arrays(dist)
    knots = np.concatenate(([0.0], cum))
    return np.interp(t, edges, knots, left=0.0, right=1.0)


def partial_expectation_vec(dist: ArrivalDistribution, t: np.ndarray) -> np.ndarray:
    """Integral of ``s * density(s)`` from 0 to each entry of ``t`` (closed form)."""
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 0):
        raise ValueError("partial expectation requires t >= 0")
    if isinstance(dist, Deterministic):
        return np.where(t >= dist.t_b, dist.t_b, 0.0)
    if isinstance(dist, Uniform):
        tc = np.minimum(t, dist.t_b)
        return tc * tc / (2.0 * dist.t_b)
    if isinstance(dist, Exponential):
        r = dist.rate
        return -np.expm1(-r * t) / r - t * np.exp(-r * t)
    edges, masses, _ = _empirical_arrays(dist)
    dens_bins = masses / np.diff(edges)
    lo = edges[:-1]
    # Per-bin overlap [lo, min(t, hi)]; empty overlaps contribute exactly 0.
    up = np.clip(np.minimum(t[..., None], edges[1:]), lo, None)
    contrib = dens_bins * (up * up - lo * lo) / 2.0
    return contrib.sum(axis=-1)


def inverse_cdf_vec(dist: ArrivalDistribution, u: np.ndarray) -> np.ndarray:
    """Map uniforms in [0, 1) to arrival times (inverse-transform sampling).

    Mirrors the trial kernels in ``walkwait._kernel`` operation for
    operation so scalar sampling and bulk simulation agree.
    """
    u = np.asarray(u, dtype=np.float64)
    if isinstance(dist, Deterministic):
        return np.full_like(u, dist.t_b)
    if isinstance(dist, Uniform):
        return u * dist.t_b
    if isinstance(dist, Exponential):
        return -np.log1p(-u) / dist.rate
    edges, masses, cum = _empirical_arrays(dist)
    idx = np.searchsorted(cum, u, side="right")
    overflow = idx >= masses.size  # cumulative mass can fall a few ulp short of 1
    idx = np.minimum(idx, masses.size - 1)
    c_lo = np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = edges[idx] + ((u - c_lo) / masses[idx]) * (edges[idx + 1] - edges[idx])
    return np.where(overflow, edges[-1], t)


# ---------------------------------------------------------------------------
# Scalar API.
# ---------------------------------------------------------------------------

def pdf(dist: ArrivalDistribution, t: float) -> float:
    """Density at time ``t``; zero before time zero and beyond finite support."""
    return float(pdf_vec(dist, np.asarray([t]))[0])


def cdf(dist: ArrivalDistribution, t: float) -> float:
    """Probability that the bus has arrived by time ``t``, clamped to [0, 1]."""
    return float(cdf_vec(dist, np.asarray([t]))[0])


def partial_expectation(dist: ArrivalDistribution, t: float) -> float:
    """Integral of ``s * density(s)`` over [0, t]; requires ``t >= 0``."""
    return float(partial_expectation_vec(dist, np.asarray([t]))[0])


def mean_arrival_time(dist: ArrivalDistribution) -> float:
    """Expected arrival time of the next bus."""
    if isinstance(dist, Deterministic):
        return dist.t_b
    if isinstance(dist, Uniform):
        return dist.t_b / 2.0
    if isinstance(dist, Exponential):
        return 1.0 / dist.rate
    mids = [(a + b) / 2.0 for a, b in zip(dist.bin_edges, dist.bin_edges[1:])]
    return math.fsum(m * c for m, c in zip(dist.bin_masses, mids))


def sample(dist: ArrivalDistribution, rng: np.random.Generator) -> float:
    """One arrival-time draw via the inverse CDF.

    Every call consumes exactly one uniform from ``rng`` (the point-mass
    variant included), so draw positions stay aligned across variants.
    """
    u = rng.random()
    return float(inverse_cdf_vec(dist, np.asarray([u]))[0])


def support_upper(dist: ArrivalDistribution) -> SupportHorizon:
    """Upper end of the support: ``t_b`` / last bin edge / unbounded."""
    if isinstance(dist, (Deterministic, Uniform)):
        return SupportHorizon.finite(dist.t_b)
    if isinstance(dist, Empirical):
        return SupportHorizon.finite(dist.bin_edges[-1])
    return SupportHorizon.unbounded()


# ---------------------------------------------------------------------------
# JSON wire format: {"kind": ..., <parameters>}.
# ---------------------------------------------------------------------------

_KIND_NAMES = {
    Deterministic: "deterministic",
    Uniform: "uniform",
    Exponential: "exponential",
    Empirical: "empirical",
}


def dist_to_json(dist: ArrivalDistribution) -> dict:
    if isinstance(dist, (Deterministic, Uniform)):
        return {"kind": _KIND_NAMES[type(dist)], "t_b": dist.t_b}
    if isinstance(dist, Exponential):
        return {"kind": "exponential", "rate": dist.rate}
    return {
        "kind": "empirical",
        "bin_edges": list(dist.bin_edges),
        "bin_masses": list(dist.bin_masses),
    }


def dist_from_json(obj: dict) -> ArrivalDistribution:
    if not isinstance(obj, dict):
        raise ValueError(f"distribution must be a JSON object, got {type(obj).__name__}")
    kind = obj.get("kind")
    expected_fields = {
        "deterministic": {"kind", "t_b"},
        "uniform": {"kind", "t_b"},
        "exponential": {"kind", "rate"},
        "empirical": {"kind", "bin_edges", "bin_masses"},
    }
    if kind not in expected_fields:
        raise ValueError(f"unknown distribution kind {kind!r}")
    extra = set(obj) - expected_fields[kind]
    missing = expected_fields[kind] - set(obj)
    if extra or missing:
        raise ValueError(
            f"distribution kind {kind!r}: unexpected fields {sorted(extra)}, "
            f"missing fields {sorted(missing)}"
        )
    if kind == "deterministic":
        return Deterministic(t_b=float(obj["t_b"]))
    if kind == "uniform":
        return Uniform(t_b=float(obj["t_b"]))
    if kind == "exponential":
        return Exponential(rate=float(obj["rate"]))
    return Empirical(bin_edges=tuple(obj["bin_edges"]), bin_masses=tuple(obj["bin_masses"]))
