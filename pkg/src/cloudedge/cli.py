# cloudedge/cli.py
"""Command-line interface.

  cloudedge solve --arch cran --config cfg.ini --seed 3
  cloudedge sweep --config cfg.ini --out results/run.csv
  cloudedge convergence --config cfg.ini [--seed S] [--out results/conv.csv]
  cloudedge preset --name fig3 --out results/ [--dump-config cfg.ini]

Reports are delimited text; the report paths also render matplotlib figures
next to the delimited output. Exit code 0 on success, nonzero when any
mandatory run fails.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import harness
from .harness import (
    ARCHITECTURES,
    PRESET_NAMES,
    ExperimentConfig,
    emit_csv,
    emit_plot_script,
    load_config,
    preset,
    realize,
    render_figure,
    run_architecture,
    save_config,
    sweep,
    ue_energy,
)

_FAILED = ("failed", "error")


def _print_breakdown(report, scenario) -> None:
    b = report.breakdown
    print(f"arch={report.arch} status={report.status} iterations={report.iterations} "
          f"wall_clock_s={report.wall_clock_s:.3f}")
    print(f"  uplink_air_s      {b.ul_air:.6e}")
    print(f"  edge_exec_s       {b.edge_exe:.6e}")
    print(f"  fronthaul_ul_s    {b.fh_ul:.6e}")
    print(f"  cloud_exec_s      {b.cloud_exe:.6e}")
    print(f"  fronthaul_dl_s    {b.fh_dl:.6e}")
    print(f"  downlink_air_s    {b.dl_air:.6e}")
    print(f"  total_s           {b.total:.6e}")
    import numpy as np
    print(f"  mean_split        {report.mean_split:.6f}")
    print(f"  mean_ue_energy    {float(np.mean(ue_energy(report, scenario))):.6e}")


def _cmd_solve(args) -> int:
    config = load_config(args.config) if args.config else ExperimentConfig()
    spec = harness.apply_sweep_value(config.spec, config.sweep_param, config.sweep_values[0]) \
        if args.use_sweep_value else config.spec
    scenario, channels = realize(spec, config.topology, args.seed)
    report = run_architecture(args.arch, scenario, channels, config.solver, seed=args.seed)
    _print_breakdown(report, scenario)
    return 0 if report.status not in _FAILED else 2


def _cmd_sweep(args) -> int:
    config = load_config(args.config)
    records = sweep(config)
    out = args.out
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    emit_csv(records, out)
    stem = out[:-4] if out.endswith(".csv") else out
    emit_plot_script(records, stem + "_plot.py", csv_name=out)
    render_figure(records, stem + ".png")
    if "c_mean" == args.metric or args.metric == "all":
        render_figure(records, stem + "_c_mean.png", metric="c_mean")
    print(f"wrote {len(records)} records to {out}")
    bad = [r for r in records if r.status in _FAILED]
    if bad:
        print(f"{len(bad)} run(s) failed", file=sys.stderr)
        return 2
    return 0


def _cmd_convergence(args) -> int:
    config = load_config(args.config) if args.config else ExperimentConfig()
    seed = args.seed if args.seed is not None else config.base_seed
    spec = harness.apply_sweep_value(config.spec, config.sweep_param, config.sweep_values[0])
    scenario, channels = realize(spec, config.topology, seed)
    lines = ["arch,iteration,tau_T_s"]
    histories = {}
    status_bad = False
    for arch in config.architectures:
        report = run_architecture(arch, scenario, channels, config.solver, seed=seed)
        histories[arch] = report.history
        status_bad = status_bad or report.status in _FAILED
        for t, tau in enumerate(report.history):
            lines.append(f"{arch},{t},{tau:.17g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        fig, ax = plt.subplots(figsize=(6.0, 4.2))
        for arch, hist in histories.items():
            ax.plot(range(len(hist)), hist, marker="o", label=arch)
        ax.set_xlabel("iteration")
        ax.set_ylabel("end-to-end latency [s]")
        ax.grid(True, alpha=0.4)
        ax.legend()
        fig.tight_layout()
        fig.savefig((args.out[:-4] if args.out.endswith(".csv") else args.out) + ".png", dpi=150)
        plt.close(fig)
    else:
        sys.stdout.write(text)
    return 2 if status_bad else 0


def _cmd_preset(args) -> int:
    config = preset(args.name)
    if args.seeds is not None:
        config = ExperimentConfig(
            spec=config.spec, topology=config.topology, solver=config.solver,
            architectures=config.architectures, sweep_param=config.sweep_param,
            sweep_values=config.sweep_values, base_seed=config.base_seed,
            num_seeds=args.seeds,
        )
    if args.dump_config:
        save_config(config, args.dump_config)
        print(f"wrote {args.dump_config}")
        return 0
    os.makedirs(args.out, exist_ok=True)
    out = os.path.join(args.out, f"{args.name}.csv")
    records = sweep(config)
    emit_csv(records, out)
    emit_plot_script(records, os.path.join(args.out, f"{args.name}_plot.py"), csv_name=out)
    render_figure(records, os.path.join(args.out, f"{args.name}.png"))
    if args.name == "fig10":
        render_figure(records, os.path.join(args.out, f"{args.name}_c_mean.png"), metric="c_mean")
    print(f"wrote {len(records)} records to {out}")
    bad = [r for r in records if r.status in _FAILED]
    if bad:
        print(f"{len(bad)} run(s) failed", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cloudedge",
        description="Latency-minimal collaborative cloud/edge offloading: "
                    "optimizers and experiment harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="single run, prints the latency breakdown")
    p.add_argument("--arch", required=True, choices=ARCHITECTURES)
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--use-sweep-value", action="store_true",
                   help="apply the first sweep value from the config")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("sweep", help="Monte Carlo sweep, writes CSV + figure + plot script")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--metric", default="tau_T_s", choices=("tau_T_s", "c_mean", "all"))
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("convergence", help="per-iteration latency history per architecture")
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="optional CSV path (figure written alongside)")
    p.set_defaults(func=_cmd_convergence)

    p = sub.add_parser("preset", help="run a shipped experiment preset")
    p.add_argument("--name", required=True, choices=PRESET_NAMES)
    p.add_argument("--out", default="results")
    p.add_argument("--seeds", type=int, default=None, help="override the preset's seed count")
    p.add_argument("--dump-config", default=None, help="write the preset as a config file and exit")
    p.set_defaults(func=_cmd_preset)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
