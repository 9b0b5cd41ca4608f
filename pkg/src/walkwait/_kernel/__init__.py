"""Trial-kernel backend selection.

The hot loop of the simulator maps a block of uniform draws to per-trial
travel totals.  A compiled Cython kernel does this in a single pass; a
vectorized numpy twin provides the fallback.  Selection happens once at
import: set ``WALKWAIT_PURE_PYTHON=1`` to force the fallback (useful for
benchmarking and debugging).

Both backends implement ``trial_totals`` with identical operation order and
produce bit-identical results, so simulation reports do not depend on which
backend an installation ended up with.
"""

import os

#: Distribution codes shared by both backends.
KIND_DETERMINISTIC = 0
KIND_UNIFORM = 1
KIND_EXPONENTIAL = 2
KIND_EMPIRICAL = 3

_force_python = os.environ.get("WALKWAIT_PURE_PYTHON", "").strip() not in ("", "0")

if _force_python:
    from . import _pykernel as _impl

    BACKEND = "python"
else:
    try:
        from . import _ckernel as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _pykernel as _impl

        BACKEND = "python"

trial_totals = _impl.trial_totals


def backend_name() -> str:
    """Which kernel is active: ``"compiled"`` or ``"python"``."""
    return BACKEND
