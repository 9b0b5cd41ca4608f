"""Benchmark the compiled trial kernel against its numpy fallback.

Usage: python benchmarks/bench_kernel.py [--trials N] [--repeats K]

Reports per-variant wall time for mapping N uniform draws to travel totals,
the speedup of the compiled kernel, and the largest absolute deviation
between the two backends (expected: 0 everywhere; the backends are
bit-compatible by construction).
"""

import argparse
import time

import numpy as np

from walkwait._kernel import (
    KIND_DETERMINISTIC,
    KIND_EMPIRICAL,
    KIND_EXPONENTIAL,
    KIND_UNIFORM,
)
from walkwait._kernel import _pykernel

try:
    from walkwait._kernel import _ckernel
except ImportError:
    _ckernel = None

EMPTY = np.empty(0)


def variant_args(n_bins: int = 24):
    edges = np.linspace(0.0, 1.2, n_bins + 1)
    masses = np.full(n_bins, 1.0 / n_bins)
    return {
        "deterministic": (KIND_DETERMINISTIC, 0.3, EMPTY, EMPTY, EMPTY),
        "uniform": (KIND_UNIFORM, 0.5, EMPTY, EMPTY, EMPTY),
        "exponential": (KIND_EXPONENTIAL, 2.0, EMPTY, EMPTY, EMPTY),
        "empirical": (KIND_EMPIRICAL, 0.0, edges, np.cumsum(masses), masses),
    }


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=2_000_000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if _ckernel is None:
        print("compiled kernel not available; build it with: pip install -e . "
              "--no-build-isolation")
        return

    u = np.random.Generator(np.random.Philox(key=123)).random(args.trials)
    legs = (0.0, 0.25, 0.1, 0.5)  # lead, tau, ride, walk_rem

    print(f"trials={args.trials}  repeats={args.repeats} (best-of)")
    header = f"{'variant':<14}{'numpy ms':>10}{'cython ms':>11}{'speedup':>9}{'max |diff|':>12}"
    print(header)
    print("-" * len(header))
    for name, params in variant_args().items():
        py = _pykernel.trial_totals(u, *params, *legs)
        cy = _ckernel.trial_totals(u, *params, *legs)
        diff = float(np.max(np.abs(py - cy)))
        t_py = best_of(lambda: _pykernel.trial_totals(u, *params, *legs), args.repeats)
        t_cy = best_of(lambda: _ckernel.trial_totals(u, *params, *legs), args.repeats)
        print(f"{name:<14}{t_py * 1e3:>10.2f}{t_cy * 1e3:>11.2f}"
              f"{t_py / t_cy:>9.2f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
