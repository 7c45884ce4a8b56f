"""Iteration traces shared by every solver."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TracePoint:
    """One observation along a solver run.

    modeled_ops is the analytic operation count charged up to iteration k;
    the error fields are filled only when the caller supplies the reference
    solution / spectral data needed to evaluate them.
    """

    k: int
    modeled_ops: float
    residual: float
    error_sq: float | None = None
    weighted_error_sq: float | None = None


@dataclass
class Trace:
    """Trace of one solver run: strided observations plus optional snapshots."""

    solver: str
    points: list[TracePoint] = field(default_factory=list)
    captures: dict[int, dict[str, np.ndarray]] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def final(self) -> TracePoint:
        return self.points[-1]

    def ks(self) -> np.ndarray:
        return np.array([p.k for p in self.points], dtype=np.int64)

    def residuals(self) -> np.ndarray:
        return np.array([p.residual for p in self.points])

    def ops(self) -> np.ndarray:
        return np.array([p.modeled_ops for p in self.points])

    def first_k_below(self, target: float) -> int | None:
        """Earliest traced iteration with residual <= target, if any."""
        for p in self.points:
            if p.residual <= target:
                return p.k
        return None

    def first_ops_below(self, target: float) -> float | None:
        """Modeled ops at the earliest traced point with residual <= target."""
        for p in self.points:
            if p.residual <= target:
                return p.modeled_ops
        return None
