"""Seeded random scenario generators shared by the test modules."""

from __future__ import annotations

import numpy as np

from walkwait import Empirical, Exponential, RouteSpec, TravelerProfile, Uniform

ALL_KINDS = ("uniform", "exponential", "empirical")


def random_traveler(rng: np.random.Generator) -> TravelerProfile:
    v_w = float(rng.uniform(2.0, 6.0))
    return TravelerProfile(v_w=v_w, v_b=v_w + float(rng.uniform(0.5, 30.0)))


def random_distribution(rng: np.random.Generator, kinds=ALL_KINDS):
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind == "uniform":
        return Uniform(t_b=float(rng.uniform(0.05, 2.0)))
    if kind == "exponential":
        return Exponential(rate=float(rng.uniform(0.2, 8.0)))
    n_bins = int(rng.integers(1, 6))
    start = float(rng.uniform(0.0, 0.3)) if rng.random() < 0.5 else 0.0
    widths = rng.uniform(0.05, 0.6, size=n_bins)
    edges = start + np.concatenate([[0.0], np.cumsum(widths)])
    masses = rng.dirichlet(np.ones(n_bins))
    return Empirical(bin_edges=tuple(edges), bin_masses=tuple(masses))


def random_route(rng: np.random.Generator, max_stops: int = 10) -> RouteSpec:
    n = int(rng.integers(2, max_stops + 1))
    d = float(rng.uniform(0.5, 5.0))
    interior = np.sort(rng.uniform(0.0, d, size=n - 2)) if n > 2 else np.empty(0)
    # nudge apart any coincident interior stops
    for j in range(1, interior.size):
        if interior[j] <= interior[j - 1]:
            interior[j] = interior[j - 1] + 1e-6
    stops = (0.0, *interior.tolist(), max(d, float(interior[-1]) + 1e-6) if interior.size else d)
    return RouteSpec(stops=stops)


def interior_root_uniform(rng: np.random.Generator):
    """(dist, d, traveler) with a break-even threshold strictly inside the support.

    The uniform closed form ``2 (t_b + d/v_b - d/v_w)`` is interior exactly
    when ``gap < t_b < 2 * gap`` with ``gap = d/v_w - d/v_b``.
    """
    traveler = random_traveler(rng)
    d = float(rng.uniform(0.3, 5.0))
    gap = d / traveler.v_w - d / traveler.v_b
    t_b = gap * float(rng.uniform(1.05, 1.95))
    return Uniform(t_b=t_b), d, traveler
