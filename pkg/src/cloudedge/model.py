# cloudedge/model.py
"""Scenario definition, random topologies, Rayleigh channel draws, and
UE–EN association.

Conventions:
  * noise powers are normalized (default 1.0), so transmit power equals the
    maximum SNR in linear units and channels carry the path loss;
  * all randomness flows through an explicit numpy Generator (PCG64), making
    every draw reproducible from a seed;
  * EN/UE indices are 0-based throughout the code.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "TopologyParams",
    "Scenario",
    "ChannelSet",
    "make_scenario",
    "generate_topology",
    "path_loss",
    "sample_channels",
    "associate",
]

#: redraws allowed per point before topology generation fails
RESAMPLE_BUDGET = 10_000


@dataclass(frozen=True)
class TopologyParams:
    """Square deployment area and distance-based power gain model."""

    side_m: float = 500.0
    min_sep_m: float = 10.0
    ref_dist_m: float = 30.0
    ref_gain: float = 10.0  # linear gain at ref_dist_m (10 dB default)
    pl_exp: float = 3.0

    def __post_init__(self):
        if not (self.side_m > self.min_sep_m >= 0.0):
            raise ValueError("require side_m > min_sep_m >= 0")
        if self.ref_dist_m <= 0.0:
            raise ValueError("ref_dist_m must be positive")
        if self.pl_exp <= 0.0:
            raise ValueError("pl_exp must be positive")


@dataclass(frozen=True)
class Scenario:
    """All static system parameters for one deployment.

    Per-UE quantities (bits, cycles/bit) and per-EN quantities (antennas,
    edge compute) are stored as tuples; `make_scenario` broadcasts scalars.
    """

    num_ues: int
    num_ens: int
    antennas: tuple[int, ...]
    bw_ul: float
    bw_dl: float
    cf_ul: float
    cf_dl: float
    snr_max_ul: float  # linear
    snr_max_dl: float  # linear
    noise_ul: float
    noise_dl: float
    input_bits: tuple[float, ...]
    output_bits: tuple[float, ...]
    cycles_per_bit: tuple[float, ...]
    edge_cycles: tuple[float, ...]
    cloud_cycles: float
    association: tuple[int, ...]
    served_sets: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        if self.num_ues < 1 or self.num_ens < 1:
            raise ValueError("need at least one UE and one EN")
        if len(self.antennas) != self.num_ens or any(n < 1 for n in self.antennas):
            raise ValueError("antennas must list a count >= 1 per EN")
        for name in ("bw_ul", "bw_dl", "cf_ul", "cf_dl", "snr_max_ul",
                     "snr_max_dl", "noise_ul", "noise_dl", "cloud_cycles"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        for name in ("input_bits", "output_bits", "cycles_per_bit"):
            vals = getattr(self, name)
            if len(vals) != self.num_ues or any(v <= 0.0 for v in vals):
                raise ValueError(f"{name} must be positive per UE")
        if len(self.edge_cycles) != self.num_ens or any(v <= 0.0 for v in self.edge_cycles):
            raise ValueError("edge_cycles must be positive per EN")
        if len(self.association) != self.num_ues:
            raise ValueError("association must assign an EN per UE")
        if any(not (0 <= i < self.num_ens) for i in self.association):
            raise ValueError("association indices out of range")
        served = tuple(
            tuple(k for k in range(self.num_ues) if self.association[k] == i)
            for i in range(self.num_ens)
        )
        if self.served_sets == ():
            object.__setattr__(self, "served_sets", served)
        elif self.served_sets != served:
            raise ValueError("served_sets inconsistent with association")

    @property
    def total_antennas(self) -> int:
        return int(sum(self.antennas))

    @property
    def power_ul(self) -> float:
        return self.snr_max_ul * self.noise_ul

    @property
    def power_dl(self) -> float:
        return self.snr_max_dl * self.noise_dl

    def antenna_span(self, i: int) -> tuple[int, int]:
        """Row range of EN i inside stacked (total_antennas) vectors."""
        start = int(sum(self.antennas[:i]))
        return start, start + self.antennas[i]


def make_scenario(
    *,
    num_ues: int,
    num_ens: int,
    antennas: int | Sequence[int],
    bw_ul: float,
    bw_dl: float,
    cf_ul: float,
    cf_dl: float,
    snr_max_ul: float,
    snr_max_dl: float,
    association: Sequence[int],
    input_bits: float | Sequence[float] = 1e6,
    output_bits: float | Sequence[float] = 1e6,
    cycles_per_bit: float | Sequence[float] = 700.0,
    edge_cycles: float | Sequence[float] = 1e10,
    cloud_cycles: float = 1e11,
    noise_ul: float = 1.0,
    noise_dl: float = 1.0,
) -> Scenario:
    """Build a Scenario, broadcasting scalar per-UE/per-EN parameters."""

    def per(n, v):
        if np.isscalar(v):
            return tuple(float(v) for _ in range(n))
        vals = tuple(float(x) for x in v)
        if len(vals) != n:
            raise ValueError(f"expected {n} values, got {len(vals)}")
        return vals

    ant = (int(antennas),) * num_ens if np.isscalar(antennas) else tuple(int(a) for a in antennas)
    return Scenario(
        num_ues=int(num_ues),
        num_ens=int(num_ens),
        antennas=ant,
        bw_ul=float(bw_ul),
        bw_dl=float(bw_dl),
        cf_ul=float(cf_ul),
        cf_dl=float(cf_dl),
        snr_max_ul=float(snr_max_ul),
        snr_max_dl=float(snr_max_dl),
        noise_ul=float(noise_ul),
        noise_dl=float(noise_dl),
        input_bits=per(num_ues, input_bits),
        output_bits=per(num_ues, output_bits),
        cycles_per_bit=per(num_ues, cycles_per_bit),
        edge_cycles=per(num_ens, edge_cycles),
        cloud_cycles=float(cloud_cycles),
        association=tuple(int(i) for i in association),
    )


@dataclass(frozen=True)
class ChannelSet:
    """One realization of every uplink/downlink channel vector.

    h_ul[i][k]      EN i <- UE k uplink vector, length antennas[i]
    h_dl[k][i]      UE k <- EN i downlink vector, length antennas[i]
    h_ul_stacked[k] uplink vector stacked over all ENs (total_antennas)
    h_ul_tilde[k]   h_ul_stacked[k] with the serving EN's block zeroed
    h_dl_stacked[k] downlink vector stacked over all ENs
    selector[i]     0/1 matrix (total_antennas x antennas[i]) picking EN i's rows
    """

    h_ul: tuple
    h_dl: tuple
    h_ul_stacked: np.ndarray
    h_ul_tilde: np.ndarray
    h_dl_stacked: np.ndarray
    selector: tuple


def path_loss(d: float, params: TopologyParams) -> float:
    """Distance-based linear power gain ref_gain * (d / ref_dist)^(-pl_exp)."""
    if d <= 0.0:
        raise ValueError("distance must be positive")
    return float(params.ref_gain * (d / params.ref_dist_m) ** (-params.pl_exp))


def generate_topology(
    rng: np.random.Generator,
    params: TopologyParams,
    num_ues: int,
    num_ens: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw EN and UE positions uniformly in the square, rejecting UE draws
    closer than min_sep_m to any EN. Returns (ue_xy, en_xy) in meters."""
    en_xy = rng.uniform(0.0, params.side_m, size=(num_ens, 2))
    ue_xy = np.empty((num_ues, 2))
    for k in range(num_ues):
        for _ in range(RESAMPLE_BUDGET):
            p = rng.uniform(0.0, params.side_m, size=2)
            if params.min_sep_m == 0.0 or np.min(np.hypot(*(en_xy - p).T)) >= params.min_sep_m:
                ue_xy[k] = p
                break
        else:
            raise RuntimeError(
                f"could not place UE {k} at separation >= {params.min_sep_m} m "
                f"within {RESAMPLE_BUDGET} redraws"
            )
    return ue_xy, en_xy


def associate(positions: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    """Serve each UE from its closest EN; ties break to the lowest EN index."""
    ue_xy, en_xy = positions
    if len(en_xy) < 1:
        raise ValueError("need at least one EN")
    d = np.hypot(
        ue_xy[:, None, 0] - en_xy[None, :, 0],
        ue_xy[:, None, 1] - en_xy[None, :, 1],
    )
    return np.argmin(d, axis=1)


def sample_channels(
    rng: np.random.Generator,
    positions: tuple[np.ndarray, np.ndarray],
    params: TopologyParams,
    scenario: Scenario,
) -> ChannelSet:
    """Independent Rayleigh fading on every link: each coefficient is
    sqrt(path_loss(d)) * g with g standard circularly symmetric complex
    Gaussian, independent across antennas, links and directions."""
    ue_xy, en_xy = positions
    if len(ue_xy) != scenario.num_ues or len(en_xy) != scenario.num_ens:
        raise ValueError("positions inconsistent with scenario counts")

    def draw(n):
        return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)

    gains = np.empty((scenario.num_ens, scenario.num_ues))
    for i in range(scenario.num_ens):
        for k in range(scenario.num_ues):
            d = float(np.hypot(*(en_xy[i] - ue_xy[k])))
            gains[i, k] = path_loss(d, params)

    h_ul = tuple(
        tuple(np.sqrt(gains[i, k]) * draw(scenario.antennas[i]) for k in range(scenario.num_ues))
        for i in range(scenario.num_ens)
    )
    h_dl = tuple(
        tuple(np.sqrt(gains[i, k]) * draw(scenario.antennas[i]) for i in range(scenario.num_ens))
        for k in range(scenario.num_ues)
    )

    n_tot = scenario.total_antennas
    ul_stacked = np.zeros((scenario.num_ues, n_tot), dtype=complex)
    ul_tilde = np.zeros_like(ul_stacked)
    dl_stacked = np.zeros_like(ul_stacked)
    for k in range(scenario.num_ues):
        serving = scenario.association[k]
        for i in range(scenario.num_ens):
            lo, hi = scenario.antenna_span(i)
            ul_stacked[k, lo:hi] = h_ul[i][k]
            dl_stacked[k, lo:hi] = h_dl[k][i]
            if i != serving:
                ul_tilde[k, lo:hi] = h_ul[i][k]

    selector = []
    for i in range(scenario.num_ens):
        lo, hi = scenario.antenna_span(i)
        e = np.zeros((n_tot, scenario.antennas[i]))
        e[lo:hi, :] = np.eye(scenario.antennas[i])
        selector.append(e)

    return ChannelSet(
        h_ul=h_ul,
        h_dl=h_dl,
        h_ul_stacked=ul_stacked,
        h_ul_tilde=ul_tilde,
        h_dl_stacked=dl_stacked,
        selector=tuple(selector),
    )
