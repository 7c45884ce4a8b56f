"""Analytic per-iteration operation counts and the solver-choice region map.

Operation counts are modeled, not measured: each solver kind is charged a
fixed flop estimate per iteration as a function of the column count n, the
nonzero fraction delta, and (for the cached solver) the cycle length T. These
counts are the x-axis used for cost-fair benchmark comparisons.
"""

import math
from dataclasses import dataclass

SOLVER_KINDS = ("rk", "ark", "ark-ref", "sark", "cgne")


def optimal_cycle_length(delta: float) -> float:
    """Real-valued cycle length minimizing the cached solver's per-iteration cost."""
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    return 2.0 / math.sqrt(delta)


def auto_cycle_length(delta: float) -> int:
    """Integer cycle length used by cycle='auto': max(1, round(2/sqrt(delta)))."""
    return max(1, round(optimal_cycle_length(delta)))


def modeled_ops(kind: str, n: int, delta: float, T: int | None = None,
                m: int | None = None) -> float:
    """Modeled operations per iteration for one solver kind.

    For 'sark' with an explicit T, returns the general cycle-averaged count
    1.5 (T-1) delta n + 6 n / T + 12 delta n; with T=None, the count at the
    optimal cycle length, 6 sqrt(delta) n + 10.5 delta n. 'cgne' requires m
    (one normal-equations application costs about 4 delta m n).
    """
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    if kind == "rk":
        return 4.0 * delta * n
    if kind == "ark":
        return 3.0 * n + 6.0 * delta * n
    if kind == "ark-ref":
        # three-sequence form: about 11n in the dense analysis
        return 11.0 * n
    if kind == "sark":
        if T is None:
            return 6.0 * math.sqrt(delta) * n + 10.5 * delta * n
        if T < 1:
            raise ValueError("T must be a positive integer")
        return 1.5 * (T - 1) * delta * n + 6.0 * n / T + 12.0 * delta * n
    if kind == "cgne":
        if m is None:
            raise ValueError("cgne cost needs the row count m")
        return 4.0 * delta * m * n
    raise ValueError(f"unknown solver kind {kind!r}")


@dataclass(frozen=True)
class CostModel:
    """Per-iteration modeled operation counts for one problem size."""

    m: int
    n: int
    delta: float
    rk: float
    ark_efficient: float
    sark: float
    cgne: float

    @classmethod
    def for_instance(cls, m: int, n: int, delta: float) -> "CostModel":
        return cls(
            m=m,
            n=n,
            delta=delta,
            rk=modeled_ops("rk", n, delta),
            ark_efficient=modeled_ops("ark", n, delta),
            sark=modeled_ops("sark", n, delta),
            cgne=modeled_ops("cgne", n, delta, m=m),
        )


@dataclass(frozen=True)
class RegionVerdict:
    """Which solver the per-operation rate analysis favors at (delta, lambda_min)."""

    delta: float
    lambda_min: float
    best: str


def classify_region(delta: float, lambda_min: float) -> RegionVerdict:
    """Pick the approximately best solver for a (delta, lambda_min) pair.

    The plain randomized solver wins when lambda_min is at least the larger of
    (4 delta/(3+6 delta))^2 and (4 sqrt(delta)/(6+10.5 sqrt(delta)))^2; the
    cached solver wins when lambda_min is below the second threshold and
    delta <= 0.1; otherwise the dense accelerated solver wins.
    """
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    if not lambda_min > 0.0:
        raise ValueError("lambda_min must be positive")
    sd = math.sqrt(delta)
    rk_threshold = max(
        (4.0 * delta / (3.0 + 6.0 * delta)) ** 2,
        (4.0 * sd / (6.0 + 10.5 * sd)) ** 2,
    )
    sark_threshold = (4.0 * sd / (6.0 + 10.5 * sd)) ** 2
    if lambda_min >= rk_threshold:
        best = "rk"
    elif lambda_min <= sark_threshold and delta <= 0.1:
        best = "sark"
    else:
        best = "ark"
    return RegionVerdict(delta, lambda_min, best)


def sweep_regions(delta_grid, lambda_grid) -> list[RegionVerdict]:
    """Verdicts over the cross product, ordered by (delta, lambda_min)."""
    deltas = list(delta_grid)
    lams = list(lambda_grid)
    if not deltas or not lams:
        raise ValueError("grids must be nonempty")
    return [classify_region(d, lam) for d in deltas for lam in lams]
