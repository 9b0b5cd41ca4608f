"""Exception types shared across the package."""

from __future__ import annotations


class UnsupportedDistribution(ValueError):
    """Raised when an operation has no meaning for the given arrival variant.

    The point-mass (deterministic) arrival has no finite density, so the
    density-based expected-time machinery rejects it; callers should use the
    direct walk/wait comparison instead.
    """


class InfeasibleDeadline(ValueError):
    """Raised when the deadline cannot be met even by walking immediately."""


class SolverFailure(RuntimeError):
    """Root search failed; carries bracketing diagnostics for the caller.

    Attributes:
        diagnostics: free-form mapping with the horizon reached, the sign of
            the scaled residual at the probe points, and the cdf mass covered.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})

    def __str__(self) -> str:
        base = super().__str__()
        if self.diagnostics:
            detail = ", ".join(f"{k}={v!r}" for k, v in sorted(self.diagnostics.items()))
            return f"{base} [{detail}]"
        return base
