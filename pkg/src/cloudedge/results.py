# cloudedge/results.py
"""Shared result types for the three optimizers."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["LatencyBreakdown", "SolverConfig", "SolveReport", "LATENCY_SENTINEL"]

#: finite stand-in for an infinite latency so reports/CSV stay numeric
LATENCY_SENTINEL = 1e9


def clip_latency(x: float) -> float:
    return float(min(x, LATENCY_SENTINEL))


@dataclass(frozen=True)
class LatencyBreakdown:
    """The six end-to-end latency components (seconds) and their total.

    total = ul_air + max(edge_exe, fh_ul + cloud_exe + fh_dl) + dl_air.
    For the distributed architectures the components belong to the
    bottleneck UE; for the centralized architecture they are network-wide.
    """

    ul_air: float
    edge_exe: float
    fh_ul: float
    cloud_exe: float
    fh_dl: float
    dl_air: float
    total: float

    def recompose(self) -> float:
        return self.ul_air + max(self.edge_exe, self.fh_ul + self.cloud_exe + self.fh_dl) + self.dl_air


@dataclass(frozen=True)
class SolverConfig:
    """Outer-loop stopping rule and inner conic-solver tolerances."""

    delta: float = 1e-4  # |tau_T(t) - tau_T(t-1)| stop threshold, seconds
    t_max: int = 30
    feas_tol: float = 1e-7
    opt_tol: float = 1e-5
    max_iters: int = 200  # inner interior-point iteration budget

    def __post_init__(self):
        if self.delta <= 0.0:
            raise ValueError("delta must be positive")
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")


@dataclass
class SolveReport:
    """Outcome of one optimizer run on one channel realization."""

    arch: str
    history: list  # tau_T per iteration, starting from the initial point
    iterations: int
    converged: bool
    status: str  # converged | max-iter | failed
    variables: object
    breakdown: LatencyBreakdown
    max_residual: float
    wall_clock_s: float
    # per-UE quantities used by the energy metric
    tau_ul_air_per_ue: np.ndarray = field(default_factory=lambda: np.zeros(0))
    tau_dl_air_per_ue: np.ndarray = field(default_factory=lambda: np.zeros(0))
    ue_tx_power: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def total_latency(self) -> float:
        return self.breakdown.total

    @property
    def mean_split(self) -> float:
        split = getattr(self.variables, "split", None)
        if split is None:
            return float("nan")
        return float(np.mean(split))
