"""Numpy fallback for the trial kernel; the Cython twin of this file is
``_ckernel.pyx``.  Keep the arithmetic expression order in the two files
identical: the backend parity tests compare them bit for bit."""

import numpy as np

_KIND_DETERMINISTIC = 0
_KIND_UNIFORM = 1
_KIND_EXPONENTIAL = 2
_KIND_EMPIRICAL = 3


def trial_totals(u, kind, p, edges, cum, masses, lead, tau, ride, walk_rem):
    """Per-trial travel totals from uniform draws ``u``.

    Each trial draws the arrival time through the inverse CDF, boards if it
    comes within ``tau`` (total ``lead + t + ride``) and otherwise walks the
    rest (total ``lead + tau + walk_rem``).  ``tau = inf`` waits forever.
    """
    u = np.asarray(u, dtype=np.float64)
    if kind == _KIND_DETERMINISTIC:
        t = np.full_like(u, p)
    elif kind == _KIND_UNIFORM:
        t = u * p
    elif kind == _KIND_EXPONENTIAL:
        t = -np.log1p(-u) / p
    elif kind == _KIND_EMPIRICAL:
        idx = np.searchsorted(cum, u, side="right")
        overflow = idx >= masses.size
        idx = np.minimum(idx, masses.size - 1)
        c_lo = np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = edges[idx] + ((u - c_lo) / masses[idx]) * (edges[idx + 1] - edges[idx])
        t = np.where(overflow, edges[-1], t)
    else:
        raise ValueError(f"unknown distribution code {kind}")
    return np.where(t <= tau, (lead + t) + ride, (lead + tau) + walk_rem)
