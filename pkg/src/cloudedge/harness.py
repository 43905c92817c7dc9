# cloudedge/harness.py
"""Experiment harness: baselines, the UE energy metric, Monte Carlo sweeps,
config files, CSV emission, and figure rendering.

Config file format (INI, parsed with configparser). Keys:

  [scenario] num_ues, num_ens, antennas, bw_ul_hz, bw_dl_hz, cf_ul_bps,
             cf_dl_bps, snr_max_db_ul, snr_max_db_dl, input_bits,
             output_bits, cycles_per_bit, edge_cycles, cloud_cycles,
             noise_ul (optional, default 1), noise_dl (optional, default 1)
  [topology] side_m, min_sep_m, ref_dist_m, ref_gain_db, pl_exp
  [solver]   delta, t_max, feas_tol, opt_tol
  [sweep]    param (cf | snr | antennas | num_ens | edge_cycles),
             values (comma list), archs (comma list, subset of
             dran-tdma dran-noma cran edge-only cloud-only hybrid)
  [seeds]    base, count

Reproducibility: realization r uses seed base+r for topology and channels;
each architecture then gets its own deterministic stream derived from
(seed, architecture), so runs of different architectures on the same seed
see identical channels and are independent of each other.
"""
from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass, replace

import numpy as np

from . import cran, dran
from .cran import CranVariables, algorithm3
from .dran import NomaVariables, TdmaVariables, algorithm1, algorithm2
from .model import (
    Scenario,
    TopologyParams,
    associate,
    generate_topology,
    make_scenario,
    sample_channels,
)
from .results import SolveReport, SolverConfig

__all__ = [
    "ScenarioSpec",
    "ExperimentConfig",
    "RunRecord",
    "ARCHITECTURES",
    "SWEEP_PARAMS",
    "realize",
    "run_architecture",
    "run_edge_only",
    "run_cloud_only",
    "run_hybrid",
    "ue_energy",
    "recompute_total",
    "sweep",
    "emit_csv",
    "parse_csv",
    "emit_plot_script",
    "render_figure",
    "load_config",
    "save_config",
    "preset",
    "PRESET_NAMES",
]

#: mobile receive energy draw in downlink, joules per second
DOWNLINK_RX_JOULES_PER_S = 0.625

ARCHITECTURES = ("dran-tdma", "dran-noma", "cran", "edge-only", "cloud-only", "hybrid")
SWEEP_PARAMS = ("cf", "snr", "antennas", "num_ens", "edge_cycles")

# stable per-architecture stream labels (never reorder)
_ARCH_STREAM = {
    "dran-tdma": 1,
    "dran-noma": 2,
    "cran": 3,
    "edge-only": 4,
    "cloud-only": 5,
}


@dataclass(frozen=True)
class ScenarioSpec:
    """Scenario template; the association is decided per realization."""

    num_ues: int = 4
    num_ens: int = 2
    antennas: int = 2
    bw_ul_hz: float = 20e6
    bw_dl_hz: float = 20e6
    cf_ul_bps: float = 1e9
    cf_dl_bps: float = 1e9
    snr_max_db_ul: float = 20.0
    snr_max_db_dl: float = 20.0
    input_bits: float = 1e6
    output_bits: float = 1e6
    cycles_per_bit: float = 700.0
    edge_cycles: float = 1e10
    cloud_cycles: float = 1e11
    noise_ul: float = 1.0
    noise_dl: float = 1.0


@dataclass(frozen=True)
class ExperimentConfig:
    spec: ScenarioSpec = ScenarioSpec()
    topology: TopologyParams = TopologyParams()
    solver: SolverConfig = SolverConfig()
    architectures: tuple = ("dran-tdma", "dran-noma", "cran")
    sweep_param: str = "cf"
    sweep_values: tuple = (1e9,)
    base_seed: int = 1
    num_seeds: int = 1

    def __post_init__(self):
        if not self.sweep_values:
            raise ValueError("sweep needs at least one value")
        if self.sweep_param not in SWEEP_PARAMS:
            raise ValueError(f"unknown sweep param {self.sweep_param!r}")
        for a in self.architectures:
            if a not in ARCHITECTURES:
                raise ValueError(f"unknown architecture {a!r}")
        if self.num_seeds < 1:
            raise ValueError("need at least one seed")


@dataclass(frozen=True)
class RunRecord:
    seed: int
    arch: str
    sweep_param: str
    sweep_value: float
    tau_t: float
    iterations: int
    energy_avg: float
    c_mean: float
    status: str


def apply_sweep_value(spec: ScenarioSpec, param: str, value: float) -> ScenarioSpec:
    if param == "cf":
        return replace(spec, cf_ul_bps=float(value), cf_dl_bps=float(value))
    if param == "snr":
        return replace(spec, snr_max_db_ul=float(value), snr_max_db_dl=float(value))
    if param == "antennas":
        return replace(spec, antennas=int(value))
    if param == "num_ens":
        return replace(spec, num_ens=int(value))
    if param == "edge_cycles":
        return replace(spec, edge_cycles=float(value))
    raise ValueError(f"unknown sweep param {param!r}")


def realize(spec: ScenarioSpec, topo: TopologyParams, seed: int):
    """Draw one topology + channel realization for the given spec."""
    rng = np.random.default_rng(seed)
    positions = generate_topology(rng, topo, spec.num_ues, spec.num_ens)
    scenario = make_scenario(
        num_ues=spec.num_ues,
        num_ens=spec.num_ens,
        antennas=spec.antennas,
        bw_ul=spec.bw_ul_hz,
        bw_dl=spec.bw_dl_hz,
        cf_ul=spec.cf_ul_bps,
        cf_dl=spec.cf_dl_bps,
        snr_max_ul=10.0 ** (spec.snr_max_db_ul / 10.0),
        snr_max_dl=10.0 ** (spec.snr_max_db_dl / 10.0),
        association=associate(positions),
        input_bits=spec.input_bits,
        output_bits=spec.output_bits,
        cycles_per_bit=spec.cycles_per_bit,
        edge_cycles=spec.edge_cycles,
        cloud_cycles=spec.cloud_cycles,
        noise_ul=spec.noise_ul,
        noise_dl=spec.noise_dl,
    )
    channels = sample_channels(rng, positions, topo, scenario)
    return scenario, channels


def _arch_rng(seed: int, arch: str) -> np.random.Generator:
    return np.random.default_rng([int(seed), _ARCH_STREAM[arch]])


def run_edge_only(scenario, channels, config: SolverConfig, rng=None, seed: int = 0) -> SolveReport:
    """Everything executes at the serving ENs (split pinned to 1); the
    fronthaul plays no role, so the result is independent of its capacity."""
    rng = rng if rng is not None else _arch_rng(seed, "edge-only")
    return algorithm2(scenario, channels, config, rng=rng, pin_split=1.0)


def run_cloud_only(scenario, channels, config: SolverConfig, rng=None, seed: int = 0) -> SolveReport:
    """Everything executes at the cloud (split pinned to 0) over the
    centralized architecture."""
    rng = rng if rng is not None else _arch_rng(seed, "cloud-only")
    return algorithm3(scenario, channels, config, rng=rng, pin_split=0.0)


def run_hybrid(scenario, channels, config: SolverConfig, seed: int = 0) -> SolveReport:
    """Per realization, pick the better of the edge-only and cloud-only
    baselines."""
    edge = run_edge_only(scenario, channels, config, seed=seed)
    cloud = run_cloud_only(scenario, channels, config, seed=seed)
    winner = edge if edge.breakdown.total <= cloud.breakdown.total else cloud
    return dataclasses.replace(winner, arch="hybrid")


def run_architecture(arch: str, scenario, channels, config: SolverConfig, seed: int = 0) -> SolveReport:
    if arch == "dran-tdma":
        return algorithm1(scenario, channels, config)
    if arch == "dran-noma":
        return algorithm2(scenario, channels, config, rng=_arch_rng(seed, arch))
    if arch == "cran":
        return algorithm3(scenario, channels, config, rng=_arch_rng(seed, arch))
    if arch == "edge-only":
        return run_edge_only(scenario, channels, config, seed=seed)
    if arch == "cloud-only":
        return run_cloud_only(scenario, channels, config, seed=seed)
    if arch == "hybrid":
        return run_hybrid(scenario, channels, config, seed=seed)
    raise ValueError(f"unknown architecture {arch!r}")


def ue_energy(report: SolveReport, scenario: Scenario) -> np.ndarray:
    """Per-UE energy: uplink airtime times total uplink transmit power
    (normalized power-seconds under unit noise) plus downlink airtime times
    the receive draw (joules)."""
    e_ul = report.tau_ul_air_per_ue * report.ue_tx_power
    e_dl = report.tau_dl_air_per_ue * DOWNLINK_RX_JOULES_PER_S
    return e_ul + e_dl


def recompute_total(report: SolveReport, scenario: Scenario) -> float:
    """End-to-end latency recomputed from the stored final variables,
    independent of the value the optimizer reported."""
    v = report.variables
    if isinstance(v, (TdmaVariables, NomaVariables)):
        arrays = dran._latency_arrays(
            scenario, v.split, v.rate_ul, v.rate_dl,
            v.edge_cycles_alloc, v.cloud_cycles_alloc, v.fh_ul_alloc, v.fh_dl_alloc,
        )
        t_ul, t_fu, t_dl, t_fd, t_xe, t_xc = arrays
        return dran.total_latency_dran(t_ul, t_xe, t_fu, t_xc, t_fd, t_dl).total
    if isinstance(v, CranVariables):
        tau_eu = cran.uplink_edge_latency(scenario, v.split, v.rate_edge_ul, v.rate_cloud_ul)
        tau_ed = cran.downlink_edge_latency(scenario, v.split, v.rate_edge_dl, v.rate_cloud_dl)
        tau_fu = cran.fronthaul_latency_ul(scenario, tau_eu, v.gamma_ul)
        tau_fd = cran.fronthaul_latency_dl(scenario, tau_ed, v.gamma_dl)
        t_xe = np.array([
            dran.exec_latency_edge(v.split[k], scenario.input_bits[k],
                                   scenario.cycles_per_bit[k], v.edge_cycles_alloc[k])
            for k in range(scenario.num_ues)
        ])
        t_xc = np.array([
            dran.exec_latency_cloud(v.split[k], scenario.input_bits[k],
                                    scenario.cycles_per_bit[k], v.cloud_cycles_alloc[k])
            for k in range(scenario.num_ues)
        ])
        return cran.total_latency_cran(tau_eu, t_xe, tau_fu, t_xc, tau_fd, tau_ed).total
    raise TypeError(f"cannot recompute latency for {type(v).__name__}")


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


def sweep(config: ExperimentConfig) -> list:
    """One RunRecord per (sweep value, realization, architecture).

    Realization r of a sweep cell uses seed base+r; unexpected per-run
    errors are recorded with status "error" and the sweep continues.
    """
    records = []
    for value in config.sweep_values:
        spec = apply_sweep_value(config.spec, config.sweep_param, value)
        for r in range(config.num_seeds):
            seed = config.base_seed + r
            scenario, channels = realize(spec, config.topology, seed)
            for arch in config.architectures:
                try:
                    report = run_architecture(arch, scenario, channels, config.solver, seed=seed)
                    records.append(RunRecord(
                        seed=seed,
                        arch=arch,
                        sweep_param=config.sweep_param,
                        sweep_value=float(value),
                        tau_t=report.breakdown.total,
                        iterations=report.iterations,
                        energy_avg=float(np.mean(ue_energy(report, scenario))),
                        c_mean=report.mean_split,
                        status=report.status,
                    ))
                except Exception:
                    records.append(RunRecord(
                        seed=seed,
                        arch=arch,
                        sweep_param=config.sweep_param,
                        sweep_value=float(value),
                        tau_t=float("nan"),
                        iterations=0,
                        energy_avg=float("nan"),
                        c_mean=float("nan"),
                        status="error",
                    ))
    return records


# ---------------------------------------------------------------------------
# CSV + figures
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("seed", "arch", "sweep_param", "sweep_value", "tau_T_s",
               "iters", "energy_avg", "c_mean", "status")


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def emit_csv(records, path) -> None:
    """Fixed column order, 17 significant digits, '.' decimal separator."""
    if not records:
        raise ValueError("no records to emit")
    lines = [",".join(CSV_COLUMNS)]
    for r in records:
        lines.append(",".join([
            str(r.seed), r.arch, r.sweep_param, _fmt(r.sweep_value),
            _fmt(r.tau_t), str(r.iterations), _fmt(r.energy_avg),
            _fmt(r.c_mean), r.status,
        ]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_csv(path) -> list:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {header}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            f = line.split(",")
            records.append(RunRecord(
                seed=int(f[0]), arch=f[1], sweep_param=f[2],
                sweep_value=float(f[3]), tau_t=float(f[4]), iterations=int(f[5]),
                energy_avg=float(f[6]), c_mean=float(f[7]), status=f[8],
            ))
    return records


_PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""Plot mean {metric} against {param} from {csv_name} (one series per
architecture). Regenerate the CSV with the cloudedge CLI."""
import csv
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV_PATH = {csv_name!r}
METRIC = {metric!r}

rows = list(csv.DictReader(open(CSV_PATH)))
series = defaultdict(lambda: defaultdict(list))
for row in rows:
    if row["status"] in ("converged", "max-iter"):
        series[row["arch"]][float(row["sweep_value"])].append(float(row[METRIC]))

fig, ax = plt.subplots(figsize=(6.0, 4.2))
for arch in {archs!r}:
    pts = sorted(series[arch].items())
    if not pts:
        continue
    xs = [p[0] for p in pts]
    ys = [sum(p[1]) / len(p[1]) for p in pts]
    ax.plot(xs, ys, marker="o", label=arch)
ax.set_xlabel({param!r})
ax.set_ylabel("mean " + METRIC)
if len(set(x for a in series.values() for x in a)) > 2:
    ax.set_xscale("log")
ax.grid(True, alpha=0.4)
ax.legend()
fig.tight_layout()
fig.savefig(CSV_PATH.rsplit(".", 1)[0] + "_" + METRIC + ".png", dpi=150)
'''


def emit_plot_script(records, path, csv_name=None, metric="tau_T_s") -> None:
    """Write a self-contained matplotlib script that reads the emitted CSV
    and draws one series per architecture."""
    if not records:
        raise ValueError("no records to plot")
    if csv_name is None:
        csv_name = str(path).replace("_plot.py", ".csv")
    archs = tuple(dict.fromkeys(r.arch for r in records))
    param = records[0].sweep_param
    script = _PLOT_TEMPLATE.format(csv_name=str(csv_name), metric=metric,
                                   archs=archs, param=param)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(script)


def render_figure(records, path, metric="tau_T_s") -> None:
    """Render the mean-metric-vs-sweep figure straight to a file."""
    if not records:
        raise ValueError("no records to plot")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    field = {"tau_T_s": "tau_t", "energy_avg": "energy_avg", "c_mean": "c_mean"}[metric]
    archs = tuple(dict.fromkeys(r.arch for r in records))
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for arch in archs:
        by_value = {}
        for r in records:
            if r.arch == arch and r.status in ("converged", "max-iter"):
                by_value.setdefault(r.sweep_value, []).append(getattr(r, field))
        pts = sorted(by_value.items())
        if not pts:
            continue
        ax.plot([p[0] for p in pts],
                [float(np.mean(p[1])) for p in pts],
                marker="o", label=arch)
    ax.set_xlabel(records[0].sweep_param)
    ax.set_ylabel("mean " + metric)
    values = sorted({r.sweep_value for r in records})
    if len(values) > 2 and values[0] > 0 and values[-1] / values[0] > 30:
        ax.set_xscale("log")
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


# ---------------------------------------------------------------------------
# config files
# ---------------------------------------------------------------------------


def load_config(path) -> ExperimentConfig:
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise FileNotFoundError(path)

    sc = cp["scenario"] if cp.has_section("scenario") else {}
    spec = ScenarioSpec(
        num_ues=int(float(sc.get("num_ues", 4))),
        num_ens=int(float(sc.get("num_ens", 2))),
        antennas=int(float(sc.get("antennas", 2))),
        bw_ul_hz=float(sc.get("bw_ul_hz", 20e6)),
        bw_dl_hz=float(sc.get("bw_dl_hz", 20e6)),
        cf_ul_bps=float(sc.get("cf_ul_bps", 1e9)),
        cf_dl_bps=float(sc.get("cf_dl_bps", 1e9)),
        snr_max_db_ul=float(sc.get("snr_max_db_ul", 20.0)),
        snr_max_db_dl=float(sc.get("snr_max_db_dl", 20.0)),
        input_bits=float(sc.get("input_bits", 1e6)),
        output_bits=float(sc.get("output_bits", 1e6)),
        cycles_per_bit=float(sc.get("cycles_per_bit", 700.0)),
        edge_cycles=float(sc.get("edge_cycles", 1e10)),
        cloud_cycles=float(sc.get("cloud_cycles", 1e11)),
        noise_ul=float(sc.get("noise_ul", 1.0)),
        noise_dl=float(sc.get("noise_dl", 1.0)),
    )
    tp = cp["topology"] if cp.has_section("topology") else {}
    topology = TopologyParams(
        side_m=float(tp.get("side_m", 500.0)),
        min_sep_m=float(tp.get("min_sep_m", 10.0)),
        ref_dist_m=float(tp.get("ref_dist_m", 30.0)),
        ref_gain=10.0 ** (float(tp.get("ref_gain_db", 10.0)) / 10.0),
        pl_exp=float(tp.get("pl_exp", 3.0)),
    )
    sv = cp["solver"] if cp.has_section("solver") else {}
    solver = SolverConfig(
        delta=float(sv.get("delta", 1e-4)),
        t_max=int(float(sv.get("t_max", 30))),
        feas_tol=float(sv.get("feas_tol", 1e-7)),
        opt_tol=float(sv.get("opt_tol", 1e-5)),
    )
    sw = cp["sweep"] if cp.has_section("sweep") else {}
    values = tuple(float(x) for x in str(sw.get("values", "1e9")).split(",") if x.strip())
    archs = tuple(a.strip() for a in str(sw.get("archs", "dran-tdma,dran-noma,cran")).split(",")
                  if a.strip())
    sd = cp["seeds"] if cp.has_section("seeds") else {}
    return ExperimentConfig(
        spec=spec,
        topology=topology,
        solver=solver,
        architectures=archs,
        sweep_param=str(sw.get("param", "cf")),
        sweep_values=values,
        base_seed=int(float(sd.get("base", 1))),
        num_seeds=int(float(sd.get("count", 1))),
    )


def save_config(config: ExperimentConfig, path) -> None:
    cp = configparser.ConfigParser()
    s = config.spec
    cp["scenario"] = {
        "num_ues": str(s.num_ues),
        "num_ens": str(s.num_ens),
        "antennas": str(s.antennas),
        "bw_ul_hz": _fmt(s.bw_ul_hz),
        "bw_dl_hz": _fmt(s.bw_dl_hz),
        "cf_ul_bps": _fmt(s.cf_ul_bps),
        "cf_dl_bps": _fmt(s.cf_dl_bps),
        "snr_max_db_ul": _fmt(s.snr_max_db_ul),
        "snr_max_db_dl": _fmt(s.snr_max_db_dl),
        "input_bits": _fmt(s.input_bits),
        "output_bits": _fmt(s.output_bits),
        "cycles_per_bit": _fmt(s.cycles_per_bit),
        "edge_cycles": _fmt(s.edge_cycles),
        "cloud_cycles": _fmt(s.cloud_cycles),
        "noise_ul": _fmt(s.noise_ul),
        "noise_dl": _fmt(s.noise_dl),
    }
    t = config.topology
    cp["topology"] = {
        "side_m": _fmt(t.side_m),
        "min_sep_m": _fmt(t.min_sep_m),
        "ref_dist_m": _fmt(t.ref_dist_m),
        "ref_gain_db": _fmt(10.0 * math.log10(t.ref_gain)),
        "pl_exp": _fmt(t.pl_exp),
    }
    v = config.solver
    cp["solver"] = {
        "delta": _fmt(v.delta),
        "t_max": str(v.t_max),
        "feas_tol": _fmt(v.feas_tol),
        "opt_tol": _fmt(v.opt_tol),
    }
    cp["sweep"] = {
        "param": config.sweep_param,
        "values": ",".join(_fmt(x) for x in config.sweep_values),
        "archs": ",".join(config.architectures),
    }
    cp["seeds"] = {"base": str(config.base_seed), "count": str(config.num_seeds)}
    with open(path, "w", encoding="utf-8") as fh:
        cp.write(fh)


# ---------------------------------------------------------------------------
# shipped presets (parameter sets of the reference comparative experiments)
# ---------------------------------------------------------------------------


def _preset_fig2():
    # convergence behaviour at low and high SNR
    return ExperimentConfig(
        spec=ScenarioSpec(num_ues=4, num_ens=2, antennas=2, bw_ul_hz=20e6, bw_dl_hz=20e6,
                          cf_ul_bps=1e9, cf_dl_bps=1e9, edge_cycles=1e10),
        architectures=("dran-tdma", "dran-noma", "cran"),
        sweep_param="snr",
        sweep_values=(0.0, 20.0),
        base_seed=1,
        num_seeds=50,
    )


def _preset_fig3():
    return ExperimentConfig(
        spec=ScenarioSpec(num_ues=4, num_ens=2, antennas=2, bw_ul_hz=20e6, bw_dl_hz=20e6,
                          snr_max_db_ul=20.0, snr_max_db_dl=20.0, edge_cycles=1e10),
        architectures=("dran-tdma", "dran-noma", "cran"),
        sweep_param="cf",
        sweep_values=(5e7, 1e8, 2.5e8, 5e8, 1e9, 2e9, 4e9),
        base_seed=1,
        num_seeds=50,
    )


def _preset_fig5():
    return ExperimentConfig(
        spec=ScenarioSpec(num_ues=3, num_ens=2, bw_ul_hz=20e6, bw_dl_hz=20e6,
                          cf_ul_bps=3e9, cf_dl_bps=3e9, snr_max_db_ul=5.0,
                          snr_max_db_dl=5.0, edge_cycles=1e10),
        architectures=("dran-tdma", "dran-noma", "cran"),
        sweep_param="antennas",
        sweep_values=(1, 2, 3, 4),
        base_seed=1,
        num_seeds=50,
    )


def _preset_fig6():
    return ExperimentConfig(
        spec=ScenarioSpec(num_ues=8, antennas=2, bw_ul_hz=50e6, bw_dl_hz=50e6,
                          cf_ul_bps=2e9, cf_dl_bps=2e9, snr_max_db_ul=20.0,
                          snr_max_db_dl=20.0, edge_cycles=2.5e10),
        architectures=("dran-tdma", "dran-noma", "cran"),
        sweep_param="num_ens",
        sweep_values=(1, 2, 3, 4),
        base_seed=1,
        num_seeds=50,
    )


def _preset_fig7():
    return ExperimentConfig(
        spec=ScenarioSpec(num_ues=4, num_ens=2, antennas=2, bw_ul_hz=50e6, bw_dl_hz=50e6,
                          snr_max_db_ul=10.0, snr_max_db_dl=10.0, edge_cycles=2.5e10),
        architectures=("edge-only", "cloud-only", "hybrid", "cran"),
        sweep_param="cf",
        sweep_values=(1e8, 2.5e8, 5e8, 1e9, 2.5e9, 1e10),
        base_seed=1,
        num_seeds=50,
    )


def _preset_fig8():
    return ExperimentConfig(
        spec=ScenarioSpec(num_ues=4, num_ens=2, antennas=2, bw_ul_hz=100e6, bw_dl_hz=100e6,
                          cf_ul_bps=2.5e8, cf_dl_bps=2.5e8, edge_cycles=2.5e10),
        architectures=("edge-only", "cloud-only", "hybrid", "cran"),
        sweep_param="snr",
        sweep_values=(0.0, 5.0, 10.0, 15.0, 20.0),
        base_seed=1,
        num_seeds=50,
    )


def _preset_fig9():
    return ExperimentConfig(
        spec=ScenarioSpec(num_ues=4, num_ens=2, antennas=2, bw_ul_hz=100e6, bw_dl_hz=100e6,
                          cf_ul_bps=5e8, cf_dl_bps=5e8, snr_max_db_ul=10.0,
                          snr_max_db_dl=10.0, cloud_cycles=1e11),
        architectures=("edge-only", "cloud-only", "hybrid", "cran"),
        sweep_param="edge_cycles",
        sweep_values=(5e9, 1e10, 2.5e10, 5e10),
        base_seed=1,
        num_seeds=50,
    )


def _preset_fig10():
    # mean task split versus fronthaul capacity
    return ExperimentConfig(
        spec=ScenarioSpec(num_ues=4, num_ens=2, antennas=1, bw_ul_hz=100e6, bw_dl_hz=100e6,
                          snr_max_db_ul=10.0, snr_max_db_dl=10.0, edge_cycles=5e9),
        architectures=("cran",),
        sweep_param="cf",
        sweep_values=(1e8, 1e9, 1e10),
        base_seed=1,
        num_seeds=50,
    )


_PRESETS = {
    "fig2": _preset_fig2,
    "fig3": _preset_fig3,
    "fig5": _preset_fig5,
    "fig6": _preset_fig6,
    "fig7": _preset_fig7,
    "fig8": _preset_fig8,
    "fig9": _preset_fig9,
    "fig10": _preset_fig10,
}

PRESET_NAMES = tuple(sorted(_PRESETS))


def preset(name: str) -> ExperimentConfig:
    """Shipped parameter sets reproducing the comparative experiments."""
    try:
        return _PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}") from None
