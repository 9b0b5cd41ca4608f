# cython: boundscheck=False, wraparound=False, cdivision=True
"""Single-pass trial kernel; the numpy twin of this file is ``_pykernel.py``.
Keep the arithmetic expression order in the two files identical: the two
backends must agree bit for bit.  (That is also why the exponential branch
takes its log1p values from numpy rather than libm: the results differ in
the last ulp, and numpy's SIMD loop is the faster of the two anyway.)"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef enum:
    KIND_DETERMINISTIC = 0
    KIND_UNIFORM = 1
    KIND_EXPONENTIAL = 2
    KIND_EMPIRICAL = 3


def trial_totals(
    const double[::1] u,
    int kind,
    double p,
    const double[::1] edges,
    const double[::1] cum,
    const double[::1] masses,
    double lead,
    double tau,
    double ride,
    double walk_rem,
):
    """Per-trial travel totals from uniform draws ``u``; see the numpy twin."""
    cdef Py_ssize_t n = u.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, lo, hi, mid, nb
    cdef double uu, t, c_lo
    cdef const double[::1] logs = u
    if kind < KIND_DETERMINISTIC or kind > KIND_EMPIRICAL:
        raise ValueError(f"unknown distribution code {kind}")
    if kind == KIND_EXPONENTIAL:
        logs = np.log1p(np.negative(u))
    nb = masses.shape[0]
    for k in range(n):
        uu = u[k]
        if kind == KIND_DETERMINISTIC:
            t = p
        elif kind == KIND_UNIFORM:
            t = uu * p
        elif kind == KIND_EXPONENTIAL:
            t = -logs[k] / p
        else:
            # upper bound: first index with cum[idx] > uu (searchsorted side="right")
            lo = 0
            hi = nb
            while lo < hi:
                mid = (lo + hi) >> 1
                if cum[mid] > uu:
                    hi = mid
                else:
                    lo = mid + 1
            if lo >= nb:
                t = edges[nb]  # cumulative mass fell a few ulp short of 1
            else:
                c_lo = cum[lo - 1] if lo > 0 else 0.0
                t = edges[lo] + ((uu - c_lo) / masses[lo]) * (edges[lo + 1] - edges[lo])
        if t <= tau:
            out[k] = (lead + t) + ride
        else:
            out[k] = (lead + tau) + walk_rem
    return out_arr
