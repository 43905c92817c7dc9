# cloudedge
"""Latency-minimal collaborative cloud/edge offloading over D-RAN and C-RAN.

Library layout:
  model     scenarios, topologies, Rayleigh channels, association
  numerics  Hermitian helpers and the log-det functionals
  convex    declarative convex subproblem layer (cone-program backend)
  dran      TDMA and non-orthogonal D-RAN optimizers
  cran      quantized-fronthaul C-RAN optimizer
  harness   baselines, energy metric, Monte Carlo sweeps, CSV/figures, CLI presets
"""
from .model import ChannelSet, Scenario, TopologyParams, associate, generate_topology, make_scenario, path_loss, sample_channels
from .results import LatencyBreakdown, SolveReport, SolverConfig
from .dran import algorithm1, algorithm2
from .cran import algorithm3

__version__ = "0.1.0"

__all__ = [
    "ChannelSet",
    "Scenario",
    "TopologyParams",
    "LatencyBreakdown",
    "SolveReport",
    "SolverConfig",
    "associate",
    "generate_topology",
    "make_scenario",
    "path_loss",
    "sample_channels",
    "algorithm1",
    "algorithm2",
    "algorithm3",
    "__version__",
]
