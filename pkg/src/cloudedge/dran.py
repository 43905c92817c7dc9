# cloudedge/dran.py
"""D-RAN latency models and optimizers.

Two access schemes over the wireless edge links:
  * orthogonal TDMA — UEs get disjoint time fractions, no mutual
    interference, full transmit power is optimal;
  * non-orthogonal access — all UEs transmit simultaneously; powers and
    downlink covariances shape the inter-UE interference.

Each optimizer alternates closed-form auxiliary updates (quadratic-transform
multipliers, and for the non-orthogonal scheme the matrix-transform pairs)
with one convex subproblem per iteration. Every surrogate constraint is
stricter than its nonconvex original, so each iterate stays feasible for the
original problem and the latency history is nonincreasing.

Internally the subproblems use scaled units (Mbit, Mbit/s, Gcycle) so the
cone programs are well conditioned; all public values are SI.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import convex
from .convex import (
    AffineExpr,
    AffineLe,
    ConvexProblem,
    Hyperbolic,
    PsdSchur,
    SquareLe,
    SqrtConcaveGe,
    VariableDecl,
)
from .model import ChannelSet, Scenario
from .numerics import LN2, hermitian_sqrt, psi, reg_solve, symmetrize
from .results import LatencyBreakdown, SolveReport, SolverConfig, clip_latency

__all__ = [
    "TdmaVariables",
    "NomaVariables",
    "TdmaAux",
    "NomaAux",
    "tdma_rate_ul",
    "tdma_rate_dl",
    "noma_rate_ul",
    "noma_rate_dl",
    "exec_latency_edge",
    "exec_latency_cloud",
    "fronthaul_latency_dran",
    "total_latency_dran",
    "update_aux_tdma",
    "update_aux_noma",
    "surrogate_tdma",
    "surrogate_noma",
    "algorithm1",
    "algorithm2",
    "residual_tdma",
    "residual_noma",
]

# unit scales used inside the cone programs
BITS = 1e-6  # bits   -> Mbit
RATE = 1e-6  # bits/s -> Mbit/s
CYC = 1e-9   # cycles -> Gcycle
HZ = 1e-6    # Hz     -> MHz

SPLIT_CLAMP = 1e-6  # keeps the closed-form multipliers finite at c in {0,1}
TIME_FLOOR = 1e-6   # a UE with zero time fraction has infinite latency


# ---------------------------------------------------------------------------
# rates and latency components
# ---------------------------------------------------------------------------


def tdma_rate_ul(scenario: Scenario, channels: ChannelSet, k: int) -> float:
    """Per-channel-use uplink rate of UE k under TDMA (bits/use)."""
    h = channels.h_ul[scenario.association[k]][k]
    return float(np.log2(1.0 + scenario.snr_max_ul * np.sum(np.abs(h) ** 2)))


def tdma_rate_dl(scenario: Scenario, channels: ChannelSet, k: int) -> float:
    """Per-channel-use downlink rate of UE k under TDMA (bits/use).

    The serving EN aligns a rank-one covariance with the channel, so only
    the channel norm enters.
    """
    h = channels.h_dl[k][scenario.association[k]]
    return float(np.log2(1.0 + scenario.snr_max_dl * np.sum(np.abs(h) ** 2)))


def noma_rate_ul(scenario: Scenario, channels: ChannelSet, powers: np.ndarray, k: int) -> float:
    """Per-channel-use uplink rate of UE k under non-orthogonal access."""
    i = scenario.association[k]
    h = channels.h_ul[i][k]
    n = scenario.antennas[i]
    noise = scenario.noise_ul * np.eye(n)
    for l in range(scenario.num_ues):
        if l == k:
            continue
        g = channels.h_ul[i][l]
        noise = noise + powers[l] * np.outer(g, g.conj())
    return psi(powers[k] * np.outer(h, h.conj()), noise)


def noma_rate_dl(scenario: Scenario, channels: ChannelSet, covariances, k: int) -> float:
    """Per-channel-use downlink rate of UE k under non-orthogonal access."""
    h_own = channels.h_dl[k][scenario.association[k]]
    sig = float(np.real(h_own.conj() @ covariances[k] @ h_own))
    noise = scenario.noise_dl
    for l in range(scenario.num_ues):
        if l == k:
            continue
        g = channels.h_dl[k][scenario.association[l]]
        noise += float(np.real(g.conj() @ covariances[l] @ g))
    return psi(sig, noise)


def exec_latency_edge(c_k: float, b_i: float, v: float, f_alloc: float) -> float:
    """Edge execution latency c*b*V/F (seconds)."""
    work = c_k * b_i * v
    if work <= 0.0:
        return 0.0
    return work / f_alloc if f_alloc > 0.0 else float("inf")


def exec_latency_cloud(c_k: float, b_i: float, v: float, f_alloc: float) -> float:
    """Cloud execution latency (1-c)*b*V/F (seconds)."""
    return exec_latency_edge(1.0 - c_k, b_i, v, f_alloc)


def fronthaul_latency_dran(bits: float, cap_alloc: float) -> float:
    """Fronthaul transfer latency bits/capacity (seconds)."""
    if bits <= 0.0:
        return 0.0
    return bits / cap_alloc if cap_alloc > 0.0 else float("inf")


def per_ue_totals(
    tau_ul_air, tau_exe_edge, tau_fh_ul, tau_exe_cloud, tau_fh_dl, tau_dl_air
) -> np.ndarray:
    """Per-UE end-to-end latency: edge execution runs in parallel with the
    fronthaul round trip plus cloud execution."""
    mid = np.maximum(np.asarray(tau_exe_edge),
                     np.asarray(tau_fh_ul) + np.asarray(tau_exe_cloud) + np.asarray(tau_fh_dl))
    return np.asarray(tau_ul_air) + mid + np.asarray(tau_dl_air)


def total_latency_dran(
    tau_ul_air, tau_exe_edge, tau_fh_ul, tau_exe_cloud, tau_fh_dl, tau_dl_air
) -> LatencyBreakdown:
    """Network latency = max over UEs; components reported for the
    bottleneck UE so the breakdown recomposes to the total."""
    totals = per_ue_totals(tau_ul_air, tau_exe_edge, tau_fh_ul, tau_exe_cloud, tau_fh_dl, tau_dl_air)
    k = int(np.argmax(totals))
    return LatencyBreakdown(
        ul_air=float(tau_ul_air[k]),
        edge_exe=float(tau_exe_edge[k]),
        fh_ul=float(tau_fh_ul[k]),
        cloud_exe=float(tau_exe_cloud[k]),
        fh_dl=float(tau_fh_dl[k]),
        dl_air=float(tau_dl_air[k]),
        total=float(totals[k]),
    )


# ---------------------------------------------------------------------------
# decision-variable states (physical, SI units)
# ---------------------------------------------------------------------------


@dataclass
class TdmaVariables:
    split: np.ndarray
    time_frac_ul: np.ndarray
    time_frac_dl: np.ndarray
    edge_cycles_alloc: np.ndarray
    cloud_cycles_alloc: np.ndarray
    fh_ul_alloc: np.ndarray
    fh_dl_alloc: np.ndarray
    rate_ul: np.ndarray  # effective bps (time fraction included)
    rate_dl: np.ndarray
    tau_ul_air: np.ndarray
    tau_fh_ul: np.ndarray
    tau_dl_air: np.ndarray
    tau_fh_dl: np.ndarray
    tau_exe_edge: np.ndarray
    tau_exe_cloud: np.ndarray


@dataclass
class NomaVariables:
    split: np.ndarray
    power_ul: np.ndarray       # physical transmit powers
    power_sqrt_ul: np.ndarray
    cov_dl: list               # physical downlink covariances, per UE
    cov_sqrt_dl: list          # Hermitian PSD roots of cov_dl
    edge_cycles_alloc: np.ndarray
    cloud_cycles_alloc: np.ndarray
    fh_ul_alloc: np.ndarray
    fh_dl_alloc: np.ndarray
    rate_ul: np.ndarray  # bps
    rate_dl: np.ndarray
    tau_ul_air: np.ndarray
    tau_fh_ul: np.ndarray
    tau_dl_air: np.ndarray
    tau_fh_dl: np.ndarray
    tau_exe_edge: np.ndarray
    tau_exe_cloud: np.ndarray


@dataclass
class TdmaAux:
    lam_fh_ul: np.ndarray
    lam_fh_dl: np.ndarray
    lam_exe_edge: np.ndarray
    lam_exe_cloud: np.ndarray


@dataclass
class NomaAux(TdmaAux):
    gamma_ul: np.ndarray  # scalar per UE
    theta_ul: list        # vector per UE
    gamma_dl: list        # matrix per UE
    theta_dl: list        # row vector per UE (stored 1-D)


# ---------------------------------------------------------------------------
# state evaluation from physical variables
# ---------------------------------------------------------------------------


def _latency_arrays(scenario, split, rate_ul, rate_dl, f_e, f_c, cf_u, cf_d):
    nu = scenario.num_ues
    t_ul = np.empty(nu)
    t_dl = np.empty(nu)
    t_fu = np.empty(nu)
    t_fd = np.empty(nu)
    t_xe = np.empty(nu)
    t_xc = np.empty(nu)
    for k in range(nu):
        b_i = scenario.input_bits[k]
        b_o = scenario.output_bits[k]
        v = scenario.cycles_per_bit[k]
        t_ul[k] = clip_latency(b_i / rate_ul[k] if rate_ul[k] > 0 else float("inf"))
        t_dl[k] = clip_latency(b_o / rate_dl[k] if rate_dl[k] > 0 else float("inf"))
        t_fu[k] = clip_latency(fronthaul_latency_dran((1.0 - split[k]) * b_i, cf_u[k]))
        t_fd[k] = clip_latency(fronthaul_latency_dran((1.0 - split[k]) * b_o, cf_d[k]))
        t_xe[k] = clip_latency(exec_latency_edge(split[k], b_i, v, f_e[k]))
        t_xc[k] = clip_latency(exec_latency_cloud(split[k], b_i, v, f_c[k]))
    return t_ul, t_fu, t_dl, t_fd, t_xe, t_xc


def evaluate_tdma(scenario, channels, split, u_ul, u_dl, f_e, f_c, cf_u, cf_d) -> TdmaVariables:
    nu = scenario.num_ues
    rate_ul = np.array(
        [u_ul[k] * scenario.bw_ul * tdma_rate_ul(scenario, channels, k) for k in range(nu)]
    )
    rate_dl = np.array(
        [u_dl[k] * scenario.bw_dl * tdma_rate_dl(scenario, channels, k) for k in range(nu)]
    )
    t_ul, t_fu, t_dl, t_fd, t_xe, t_xc = _latency_arrays(
        scenario, split, rate_ul, rate_dl, f_e, f_c, cf_u, cf_d
    )
    return TdmaVariables(
        split=np.asarray(split, dtype=float),
        time_frac_ul=np.asarray(u_ul, dtype=float),
        time_frac_dl=np.asarray(u_dl, dtype=float),
        edge_cycles_alloc=np.asarray(f_e, dtype=float),
        cloud_cycles_alloc=np.asarray(f_c, dtype=float),
        fh_ul_alloc=np.asarray(cf_u, dtype=float),
        fh_dl_alloc=np.asarray(cf_d, dtype=float),
        rate_ul=rate_ul,
        rate_dl=rate_dl,
        tau_ul_air=t_ul,
        tau_fh_ul=t_fu,
        tau_dl_air=t_dl,
        tau_fh_dl=t_fd,
        tau_exe_edge=t_xe,
        tau_exe_cloud=t_xc,
    )


def evaluate_noma(scenario, channels, split, powers, covs, f_e, f_c, cf_u, cf_d) -> NomaVariables:
    nu = scenario.num_ues
    rate_ul = np.array(
        [scenario.bw_ul * noma_rate_ul(scenario, channels, powers, k) for k in range(nu)]
    )
    rate_dl = np.array(
        [scenario.bw_dl * noma_rate_dl(scenario, channels, covs, k) for k in range(nu)]
    )
    t_ul, t_fu, t_dl, t_fd, t_xe, t_xc = _latency_arrays(
        scenario, split, rate_ul, rate_dl, f_e, f_c, cf_u, cf_d
    )
    return NomaVariables(
        split=np.asarray(split, dtype=float),
        power_ul=np.asarray(powers, dtype=float),
        power_sqrt_ul=np.sqrt(np.clip(powers, 0.0, None)),
        cov_dl=[np.asarray(q) for q in covs],
        cov_sqrt_dl=[hermitian_sqrt(q) for q in covs],
        edge_cycles_alloc=np.asarray(f_e, dtype=float),
        cloud_cycles_alloc=np.asarray(f_c, dtype=float),
        fh_ul_alloc=np.asarray(cf_u, dtype=float),
        fh_dl_alloc=np.asarray(cf_d, dtype=float),
        rate_ul=rate_ul,
        rate_dl=rate_dl,
        tau_ul_air=t_ul,
        tau_fh_ul=t_fu,
        tau_dl_air=t_dl,
        tau_fh_dl=t_fd,
        tau_exe_edge=t_xe,
        tau_exe_cloud=t_xc,
    )


def _uniform_allocations(scenario, include_fronthaul=True):
    nu = scenario.num_ues
    f_e = np.empty(nu)
    f_c = np.full(nu, scenario.cloud_cycles / nu)
    cf_u = np.zeros(nu)
    cf_d = np.zeros(nu)
    for i in range(scenario.num_ens):
        served = scenario.served_sets[i]
        if not served:
            continue
        share = len(served)
        for k in served:
            f_e[k] = scenario.edge_cycles[i] / share
            if include_fronthaul:
                cf_u[k] = scenario.cf_ul / share
                cf_d[k] = scenario.cf_dl / share
    return f_e, f_c, cf_u, cf_d


# ---------------------------------------------------------------------------
# auxiliary updates (closed forms)
# ---------------------------------------------------------------------------


def _clamped_split(split: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(split, dtype=float), SPLIT_CLAMP, 1.0 - SPLIT_CLAMP)


def update_aux_tdma(v: TdmaVariables) -> TdmaAux:
    """Quadratic-transform multipliers that make every latency surrogate
    coincide with its original ratio constraint at the current point."""
    c = _clamped_split(v.split)
    return TdmaAux(
        lam_fh_ul=np.sqrt(v.tau_fh_ul) / (1.0 - c),
        lam_fh_dl=np.sqrt(v.tau_fh_dl) / (1.0 - c),
        lam_exe_edge=np.sqrt(v.tau_exe_edge) / c,
        lam_exe_cloud=np.sqrt(v.tau_exe_cloud) / (1.0 - c),
    )


def update_aux_noma(scenario: Scenario, channels: ChannelSet, v: NomaVariables) -> NomaAux:
    lam = update_aux_tdma(v)  # same four multipliers
    nu = scenario.num_ues
    gamma_ul = np.empty(nu)
    theta_ul = []
    gamma_dl = []
    theta_dl = []
    for k in range(nu):
        i = scenario.association[k]
        h = channels.h_ul[i][k]
        n = scenario.antennas[i]
        d_int = scenario.noise_ul * np.eye(n, dtype=complex)
        for l in range(nu):
            if l == k:
                continue
            g = channels.h_ul[i][l]
            d_int += v.power_ul[l] * np.outer(g, g.conj())
        d_full = d_int + v.power_ul[k] * np.outer(h, h.conj())
        gamma_ul[k] = float(np.real(v.power_ul[k] * (h.conj() @ reg_solve(d_int, h))))
        theta_ul.append(v.power_sqrt_ul[k] * reg_solve(d_full, h))

        h_own = channels.h_dl[k][i]
        qt = v.cov_sqrt_dl[k]
        d_int_dl = scenario.noise_dl
        for l in range(nu):
            if l == k:
                continue
            g = channels.h_dl[k][scenario.association[l]]
            d_int_dl += float(np.real(g.conj() @ v.cov_dl[l] @ g))
        d_full_dl = d_int_dl + float(np.real(h_own.conj() @ v.cov_dl[k] @ h_own))
        qh = qt.conj().T @ h_own  # column
        gamma_dl.append(np.outer(qh, qh.conj()) / d_int_dl)
        theta_dl.append((h_own.conj() @ qt) / d_full_dl)  # row, stored 1-D
    return NomaAux(
        lam_fh_ul=lam.lam_fh_ul,
        lam_fh_dl=lam.lam_fh_dl,
        lam_exe_edge=lam.lam_exe_edge,
        lam_exe_cloud=lam.lam_exe_cloud,
        gamma_ul=gamma_ul,
        theta_ul=theta_ul,
        gamma_dl=gamma_dl,
        theta_dl=theta_dl,
    )


# ---------------------------------------------------------------------------
# subproblem builders
# ---------------------------------------------------------------------------


def _add_shared_latency_machinery(scenario, aux, decls, cons, pinned):
    """Fronthaul/execution latency variables, their surrogates (or direct
    hyperbolic forms when the split is pinned), allocation budgets, and the
    epigraph of the per-UE end-to-end latency.

    Returns the names of the per-UE air-latency variables so callers can add
    the access-specific constraints.
    """
    nu = scenario.num_ues
    edge_only = pinned is not None and pinned >= 1.0
    cloud_share = None if edge_only else 1.0 if pinned is None else 1.0 - pinned

    decls.append(VariableDecl("obj", convex.NONNEG))
    for k in range(nu):
        decls.append(VariableDecl(f"teu{k}", convex.NONNEG))
        decls.append(VariableDecl(f"ted{k}", convex.NONNEG))
        decls.append(VariableDecl(f"txe{k}", convex.NONNEG))
        decls.append(VariableDecl(f"fe{k}", convex.NONNEG))
        decls.append(VariableDecl(f"m{k}", convex.NONNEG))
        if not edge_only:
            decls.append(VariableDecl(f"tfu{k}", convex.NONNEG))
            decls.append(VariableDecl(f"tfd{k}", convex.NONNEG))
            decls.append(VariableDecl(f"txc{k}", convex.NONNEG))
            decls.append(VariableDecl(f"fc{k}", convex.NONNEG))
            decls.append(VariableDecl(f"cu{k}", convex.NONNEG))
            decls.append(VariableDecl(f"cd{k}", convex.NONNEG))
        if pinned is None:
            decls.append(VariableDecl(f"c{k}", convex.BOX, lo=0.0, hi=1.0))

    for k in range(nu):
        b_i = scenario.input_bits[k] * BITS
        b_o = scenario.output_bits[k] * BITS
        work = scenario.input_bits[k] * scenario.cycles_per_bit[k] * CYC
        if pinned is None:
            one_minus_c = AffineExpr(1.0).add(f"c{k}", -1.0)
            just_c = AffineExpr(0.0).add(f"c{k}", 1.0)
            cons.append(SqrtConcaveGe(aux.lam_fh_ul[k], f"tfu{k}", one_minus_c,
                                      rhs_num=b_i, rhs_den=f"cu{k}"))
            cons.append(SqrtConcaveGe(aux.lam_fh_dl[k], f"tfd{k}",
                                      AffineExpr(1.0).add(f"c{k}", -1.0),
                                      rhs_num=b_o, rhs_den=f"cd{k}"))
            cons.append(SqrtConcaveGe(aux.lam_exe_edge[k], f"txe{k}", just_c,
                                      rhs_num=work, rhs_den=f"fe{k}"))
            cons.append(SqrtConcaveGe(aux.lam_exe_cloud[k], f"txc{k}",
                                      AffineExpr(1.0).add(f"c{k}", -1.0),
                                      rhs_num=work, rhs_den=f"fc{k}"))
        else:
            if pinned > 0.0:
                cons.append(Hyperbolic(f"txe{k}", f"fe{k}", pinned * work))
            if cloud_share is not None and cloud_share > 0.0:
                cons.append(Hyperbolic(f"tfu{k}", f"cu{k}", cloud_share * b_i))
                cons.append(Hyperbolic(f"tfd{k}", f"cd{k}", cloud_share * b_o))
                cons.append(Hyperbolic(f"txc{k}", f"fc{k}", cloud_share * work))

        cons.append(AffineLe(AffineExpr(0.0).add(f"txe{k}", 1.0).add(f"m{k}", -1.0)))
        if not edge_only:
            cons.append(AffineLe(
                AffineExpr(0.0).add(f"tfu{k}", 1.0).add(f"txc{k}", 1.0)
                .add(f"tfd{k}", 1.0).add(f"m{k}", -1.0)
            ))
        cons.append(AffineLe(
            AffineExpr(0.0).add(f"teu{k}", 1.0).add(f"m{k}", 1.0)
            .add(f"ted{k}", 1.0).add("obj", -1.0)
        ))

    for i in range(scenario.num_ens):
        served = scenario.served_sets[i]
        if not served:
            continue
        fe_sum = AffineExpr(-scenario.edge_cycles[i] * CYC)
        for k in served:
            fe_sum.add(f"fe{k}", 1.0)
        cons.append(AffineLe(fe_sum))
        if not edge_only:
            cu_sum = AffineExpr(-scenario.cf_ul * RATE)
            cd_sum = AffineExpr(-scenario.cf_dl * RATE)
            for k in served:
                cu_sum.add(f"cu{k}", 1.0)
                cd_sum.add(f"cd{k}", 1.0)
            cons.append(AffineLe(cu_sum))
            cons.append(AffineLe(cd_sum))
    if not edge_only:
        fc_sum = AffineExpr(-scenario.cloud_cycles * CYC)
        for k in range(nu):
            fc_sum.add(f"fc{k}", 1.0)
        cons.append(AffineLe(fc_sum))


def surrogate_tdma(scenario: Scenario, channels: ChannelSet, aux: TdmaAux) -> ConvexProblem:
    """Convex subproblem for the TDMA scheme at fixed multipliers. Its
    feasible set is contained in the original problem's."""
    nu = scenario.num_ues
    decls, cons = [], []
    _add_shared_latency_machinery(scenario, aux, decls, cons, pinned=None)
    for k in range(nu):
        decls.append(VariableDecl(f"uu{k}", convex.BOX, lo=TIME_FLOOR, hi=1.0))
        decls.append(VariableDecl(f"ud{k}", convex.BOX, lo=TIME_FLOOR, hi=1.0))
        peak_ul = scenario.bw_ul * tdma_rate_ul(scenario, channels, k)
        peak_dl = scenario.bw_dl * tdma_rate_dl(scenario, channels, k)
        cons.append(Hyperbolic(f"teu{k}", f"uu{k}",
                    scenario.input_bits[k] / peak_ul if peak_ul > 0 else float("inf")))
        cons.append(Hyperbolic(f"ted{k}", f"ud{k}",
                    scenario.output_bits[k] / peak_dl if peak_dl > 0 else float("inf")))
    for prefix in ("uu", "ud"):
        total = AffineExpr(-1.0)
        for k in range(nu):
            total.add(f"{prefix}{k}", 1.0)
        cons.append(AffineLe(total))
        neg = AffineExpr(1.0)
        for k in range(nu):
            neg.add(f"{prefix}{k}", -1.0)
        cons.append(AffineLe(neg))
    return ConvexProblem(decls, cons, "obj")


def _phi_ul_constraint(rate_name, p_names, pt_name, gamma, theta, h_own, h_all, noise, bw_mhz):
    """Affine rate bound from the matrix quadratic transform, uplink form:
    signal enters through the power square root, interference linearly."""
    one_g = 1.0 + gamma
    kappa = float(np.log2(one_g) - gamma / LN2)
    expr = AffineExpr(-kappa)
    expr.add(rate_name, 1.0 / bw_mhz)
    expr.add(pt_name, -(2.0 / LN2) * one_g * float(np.real(h_own.conj() @ theta)))
    expr.add_const((one_g / LN2) * noise * float(np.real(theta.conj() @ theta)))
    for name, g in zip(p_names, h_all):
        if name is None:
            continue
        expr.add(name, (one_g / LN2) * float(np.abs(theta.conj() @ g) ** 2))
    return AffineLe(expr)


def _phi_dl_constraint(rate_name, qt_name, gamma, theta, h_own, interference, noise_const, bw_mhz):
    """Affine rate bound from the matrix quadratic transform, downlink form.

    interference: list of (matrix var name, Hermitian coefficient) whose
    trace inner products add to the denominator.
    """
    eye_g = np.eye(gamma.shape[0]) + gamma
    kappa = float(np.log2(np.real(np.linalg.det(eye_g))) - np.real(np.trace(gamma)) / LN2)
    weight = float(np.real(theta @ eye_g @ theta.conj()))
    coef_qt = np.outer(h_own, theta) @ eye_g
    expr = AffineExpr(-kappa)
    expr.add(rate_name, 1.0 / bw_mhz)
    expr.add_mat(qt_name, -(2.0 / LN2) * coef_qt)
    expr.add_const((weight / LN2) * noise_const)
    for name, coef in interference:
        expr.add_mat(name, (weight / LN2) * coef)
    return AffineLe(expr)


def surrogate_noma(
    scenario: Scenario,
    channels: ChannelSet,
    aux: NomaAux,
    pin_split: float | None = None,
) -> ConvexProblem:
    """Convex subproblem for the non-orthogonal scheme at fixed auxiliaries.

    Covariances appear twice: as the root variable inside the transformed
    rate bound and as the plain variable in interference and power terms,
    tied by the tight relaxation cov >= root @ root^H (same for powers,
    power >= root^2).
    """
    nu = scenario.num_ues
    p_ul = scenario.power_ul
    decls, cons = [], []
    _add_shared_latency_machinery(scenario, aux, decls, cons, pinned=pin_split)

    for k in range(nu):
        n = scenario.antennas[scenario.association[k]]
        decls.append(VariableDecl(f"p{k}", convex.BOX, lo=0.0, hi=p_ul))
        decls.append(VariableDecl(f"pt{k}", convex.BOX, lo=0.0, hi=float(np.sqrt(p_ul))))
        decls.append(VariableDecl(f"q{k}", convex.HPSD, dim=n))
        decls.append(VariableDecl(f"qt{k}", convex.CPLX, rows=n, cols=n))
        decls.append(VariableDecl(f"ru{k}", convex.NONNEG))
        decls.append(VariableDecl(f"rd{k}", convex.NONNEG))
        cons.append(SquareLe(f"pt{k}", f"p{k}"))
        cons.append(PsdSchur(f"q{k}", f"qt{k}"))
        cons.append(Hyperbolic(f"teu{k}", f"ru{k}", scenario.input_bits[k] * BITS))
        cons.append(Hyperbolic(f"ted{k}", f"rd{k}", scenario.output_bits[k] * BITS))

    for k in range(nu):
        i = scenario.association[k]
        h_own = channels.h_ul[i][k]
        h_all = [channels.h_ul[i][l] for l in range(nu)]
        cons.append(_phi_ul_constraint(
            f"ru{k}", [f"p{l}" for l in range(nu)], f"pt{k}",
            aux.gamma_ul[k], aux.theta_ul[k], h_own, h_all,
            scenario.noise_ul, scenario.bw_ul * HZ,
        ))
        h_own_dl = channels.h_dl[k][i]
        # the transformed bound uses the full received covariance, own
        # stream included, matching the closed-form auxiliary updates
        interference = []
        for l in range(nu):
            g = channels.h_dl[k][scenario.association[l]]
            interference.append((f"q{l}", np.outer(g, g.conj())))
        cons.append(_phi_dl_constraint(
            f"rd{k}", f"qt{k}", aux.gamma_dl[k], aux.theta_dl[k], h_own_dl,
            interference, scenario.noise_dl, scenario.bw_dl * HZ,
        ))

    for i in range(scenario.num_ens):
        served = scenario.served_sets[i]
        if not served:
            continue
        power = AffineExpr(-scenario.power_dl)
        for k in served:
            power.add_mat(f"q{k}", np.eye(scenario.antennas[i], dtype=complex))
        cons.append(AffineLe(power))

    return ConvexProblem(decls, cons, "obj")


# ---------------------------------------------------------------------------
# feasibility of the original (nonconvex) problems
# ---------------------------------------------------------------------------


def _latency_residuals(scenario, v, push):
    for k in range(scenario.num_ues):
        b_i = scenario.input_bits[k]
        b_o = scenario.output_bits[k]
        work = b_i * scenario.cycles_per_bit[k]
        c = v.split[k]

        def ratio(num, den):
            if num <= 0.0:
                return 0.0
            return num / den if den > 0.0 else float("inf")

        for tau, need in (
            (v.tau_fh_ul[k], ratio((1.0 - c) * b_i, v.fh_ul_alloc[k])),
            (v.tau_fh_dl[k], ratio((1.0 - c) * b_o, v.fh_dl_alloc[k])),
            (v.tau_exe_edge[k], ratio(c * work, v.edge_cycles_alloc[k])),
            (v.tau_exe_cloud[k], ratio((1.0 - c) * work, v.cloud_cycles_alloc[k])),
        ):
            push((need - tau) / max(need, 1e-9))
        push(-c)
        push(c - 1.0)


def _budget_residuals(scenario, v, push, fronthaul=True):
    for i in range(scenario.num_ens):
        served = list(scenario.served_sets[i])
        if not served:
            continue
        push((v.edge_cycles_alloc[served].sum() - scenario.edge_cycles[i]) / scenario.edge_cycles[i])
        if fronthaul:
            push((v.fh_ul_alloc[served].sum() - scenario.cf_ul) / scenario.cf_ul)
            push((v.fh_dl_alloc[served].sum() - scenario.cf_dl) / scenario.cf_dl)
    push((v.cloud_cycles_alloc.sum() - scenario.cloud_cycles) / scenario.cloud_cycles)


def residual_tdma(scenario: Scenario, channels: ChannelSet, v: TdmaVariables) -> float:
    """Largest normalized violation of the original TDMA problem."""
    worst = 0.0

    def push(x):
        nonlocal worst
        worst = max(worst, float(x))

    for k in range(scenario.num_ues):
        peak = v.time_frac_ul[k] * scenario.bw_ul * tdma_rate_ul(scenario, channels, k)
        need = scenario.input_bits[k] / peak if peak > 0 else float("inf")
        push((need - v.tau_ul_air[k]) / max(need, 1e-9))
        peak = v.time_frac_dl[k] * scenario.bw_dl * tdma_rate_dl(scenario, channels, k)
        need = scenario.output_bits[k] / peak if peak > 0 else float("inf")
        push((need - v.tau_dl_air[k]) / max(need, 1e-9))
    push(abs(v.time_frac_ul.sum() - 1.0))
    push(abs(v.time_frac_dl.sum() - 1.0))
    _latency_residuals(scenario, v, push)
    _budget_residuals(scenario, v, push)
    return max(worst, 0.0)


def residual_noma(scenario: Scenario, channels: ChannelSet, v: NomaVariables) -> float:
    """Largest normalized violation of the original non-orthogonal problem."""
    worst = 0.0

    def push(x):
        nonlocal worst
        worst = max(worst, float(x))

    for k in range(scenario.num_ues):
        cap = scenario.bw_ul * noma_rate_ul(scenario, channels, v.power_ul, k)
        push((v.rate_ul[k] - cap) / max(cap, 1e-9))
        cap = scenario.bw_dl * noma_rate_dl(scenario, channels, v.cov_dl, k)
        push((v.rate_dl[k] - cap) / max(cap, 1e-9))
        need = scenario.input_bits[k] / v.rate_ul[k] if v.rate_ul[k] > 0 else float("inf")
        push((need - v.tau_ul_air[k]) / max(need, 1e-9))
        need = scenario.output_bits[k] / v.rate_dl[k] if v.rate_dl[k] > 0 else float("inf")
        push((need - v.tau_dl_air[k]) / max(need, 1e-9))
        push((v.power_ul[k] - scenario.power_ul) / scenario.power_ul)
        push(-v.power_ul[k] / scenario.power_ul)
        evals = np.linalg.eigvalsh(0.5 * (v.cov_dl[k] + v.cov_dl[k].conj().T))
        push(-evals[0] / max(evals[-1], 1e-12))
    for i in range(scenario.num_ens):
        served = scenario.served_sets[i]
        if not served:
            continue
        total = sum(float(np.real(np.trace(v.cov_dl[k]))) for k in served)
        push((total - scenario.power_dl) / scenario.power_dl)
    _latency_residuals(scenario, v, push)
    _budget_residuals(scenario, v, push)
    return max(worst, 0.0)


# ---------------------------------------------------------------------------
# alternating optimizers
# ---------------------------------------------------------------------------


def _scale_into(values: np.ndarray, budget: float) -> np.ndarray:
    total = values.sum()
    if total > budget > 0.0:
        values = values * (budget / total)
    return values


def _repair_allocations(scenario, asg, edge_only=False):
    nu = scenario.num_ues
    f_e = np.array([asg[f"fe{k}"] / CYC for k in range(nu)])
    if edge_only:
        f_c = np.zeros(nu)
        cf_u = np.zeros(nu)
        cf_d = np.zeros(nu)
    else:
        f_c = _scale_into(np.array([asg[f"fc{k}"] / CYC for k in range(nu)]), scenario.cloud_cycles)
        cf_u = np.array([asg[f"cu{k}"] / RATE for k in range(nu)])
        cf_d = np.array([asg[f"cd{k}"] / RATE for k in range(nu)])
    for i in range(scenario.num_ens):
        served = list(scenario.served_sets[i])
        if not served:
            continue
        f_e[served] = _scale_into(f_e[served], scenario.edge_cycles[i])
        if not edge_only:
            cf_u[served] = _scale_into(cf_u[served], scenario.cf_ul)
            cf_d[served] = _scale_into(cf_d[served], scenario.cf_dl)
    return f_e, f_c, cf_u, cf_d


def _report(arch, history, iterations, converged, status, v, breakdown,
            max_residual, t0, tx_power):
    return SolveReport(
        arch=arch,
        history=[float(x) for x in history],
        iterations=iterations,
        converged=converged,
        status=status,
        variables=v,
        breakdown=breakdown,
        max_residual=max_residual,
        wall_clock_s=time.perf_counter() - t0,
        tau_ul_air_per_ue=v.tau_ul_air.copy(),
        tau_dl_air_per_ue=v.tau_dl_air.copy(),
        ue_tx_power=np.asarray(tx_power, dtype=float),
    )


def algorithm1(scenario: Scenario, channels: ChannelSet, config: SolverConfig) -> SolveReport:
    """Alternating optimizer for the TDMA scheme."""
    t0 = time.perf_counter()
    nu = scenario.num_ues
    f_e, f_c, cf_u, cf_d = _uniform_allocations(scenario)
    v = evaluate_tdma(scenario, channels, np.full(nu, 0.5),
                      np.full(nu, 1.0 / nu), np.full(nu, 1.0 / nu), f_e, f_c, cf_u, cf_d)
    breakdown = total_latency_dran(v.tau_ul_air, v.tau_exe_edge, v.tau_fh_ul,
                                   v.tau_exe_cloud, v.tau_fh_dl, v.tau_dl_air)
    history = [breakdown.total]
    max_residual = residual_tdma(scenario, channels, v)
    converged = False
    status = "max-iter"
    iterations = 0
    for _ in range(config.t_max):
        aux = update_aux_tdma(v)
        problem = surrogate_tdma(scenario, channels, aux)
        sol = convex.solve(problem, config.feas_tol, config.opt_tol, config.max_iters)
        if not sol.assignment:
            status = "failed"
            break
        iterations += 1
        asg = sol.assignment
        split = np.clip([asg[f"c{k}"] for k in range(nu)], 0.0, 1.0)
        u_ul = np.clip([asg[f"uu{k}"] for k in range(nu)], TIME_FLOOR, 1.0)
        u_dl = np.clip([asg[f"ud{k}"] for k in range(nu)], TIME_FLOOR, 1.0)
        u_ul = u_ul / u_ul.sum()
        u_dl = u_dl / u_dl.sum()
        f_e, f_c, cf_u, cf_d = _repair_allocations(scenario, asg)
        cand = evaluate_tdma(scenario, channels, split, u_ul, u_dl, f_e, f_c, cf_u, cf_d)
        cand_bd = total_latency_dran(cand.tau_ul_air, cand.tau_exe_edge, cand.tau_fh_ul,
                                     cand.tau_exe_cloud, cand.tau_fh_dl, cand.tau_dl_air)
        if cand_bd.total > history[-1] + 1e-9:
            # solver noise produced a non-improving candidate; keep the
            # certified iterate (the subproblem would be identical again)
            if cand_bd.total - history[-1] <= config.delta:
                converged = True
                status = "converged"
            break
        v, breakdown = cand, cand_bd
        history.append(breakdown.total)
        max_residual = max(max_residual, residual_tdma(scenario, channels, v))
        if abs(history[-1] - history[-2]) <= config.delta:
            converged = True
            status = "converged"
            break
    return _report("dran-tdma", history, iterations, converged, status,
                   v, breakdown, max_residual, t0,
                   np.full(nu, scenario.power_ul))


def algorithm2(
    scenario: Scenario,
    channels: ChannelSet,
    config: SolverConfig,
    rng: np.random.Generator | None = None,
    pin_split: float | None = None,
) -> SolveReport:
    """Alternating optimizer for the non-orthogonal scheme.

    pin_split=1.0 runs the edge-only baseline: the split is fixed, the
    fronthaul/cloud machinery drops out of the subproblem entirely, and the
    result is independent of the fronthaul capacity.
    """
    if pin_split is not None and pin_split != 1.0:
        raise ValueError("only pin_split=1.0 (edge-only) is supported here")
    t0 = time.perf_counter()
    rng = rng if rng is not None else np.random.default_rng(0)
    nu = scenario.num_ues
    edge_only = pin_split is not None

    f_e, f_c, cf_u, cf_d = _uniform_allocations(scenario, include_fronthaul=not edge_only)
    if edge_only:
        f_c = np.zeros(nu)
    split = np.ones(nu) if edge_only else np.full(nu, 0.5)
    powers = np.full(nu, scenario.power_ul)
    covs = [None] * nu
    for i in range(scenario.num_ens):
        served = scenario.served_sets[i]
        if not served:
            continue
        n = scenario.antennas[i]
        draws = {k: (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
                 for k in served}
        norm = sum(float(np.sum(np.abs(d) ** 2)) for d in draws.values())
        scale = np.sqrt(scenario.power_dl / norm)
        for k in served:
            root = scale * draws[k]
            covs[k] = symmetrize(root @ root.conj().T)
    v = evaluate_noma(scenario, channels, split, powers, covs, f_e, f_c, cf_u, cf_d)
    breakdown = total_latency_dran(v.tau_ul_air, v.tau_exe_edge, v.tau_fh_ul,
                                   v.tau_exe_cloud, v.tau_fh_dl, v.tau_dl_air)
    history = [breakdown.total]
    max_residual = residual_noma(scenario, channels, v)
    converged = False
    status = "max-iter"
    iterations = 0
    for _ in range(config.t_max):
        aux = update_aux_noma(scenario, channels, v)
        problem = surrogate_noma(scenario, channels, aux, pin_split=pin_split)
        sol = convex.solve(problem, config.feas_tol, config.opt_tol, config.max_iters)
        if not sol.assignment:
            status = "failed"
            break
        iterations += 1
        asg = sol.assignment
        split = (np.ones(nu) if edge_only
                 else np.clip([asg[f"c{k}"] for k in range(nu)], 0.0, 1.0))
        powers = np.clip([asg[f"pt{k}"] for k in range(nu)],
                         0.0, np.sqrt(scenario.power_ul)) ** 2
        covs = [symmetrize(asg[f"qt{k}"] @ asg[f"qt{k}"].conj().T) for k in range(nu)]
        for i in range(scenario.num_ens):
            served = scenario.served_sets[i]
            if not served:
                continue
            total = sum(float(np.real(np.trace(covs[k]))) for k in served)
            if total > scenario.power_dl > 0.0:
                fix = scenario.power_dl / total
                for k in served:
                    covs[k] = covs[k] * fix
        f_e, f_c, cf_u, cf_d = _repair_allocations(scenario, asg, edge_only=edge_only)
        cand = evaluate_noma(scenario, channels, split, powers, covs, f_e, f_c, cf_u, cf_d)
        cand_bd = total_latency_dran(cand.tau_ul_air, cand.tau_exe_edge, cand.tau_fh_ul,
                                     cand.tau_exe_cloud, cand.tau_fh_dl, cand.tau_dl_air)
        if cand_bd.total > history[-1] + 1e-9:
            if cand_bd.total - history[-1] <= config.delta:
                converged = True
                status = "converged"
            break
        v, breakdown = cand, cand_bd
        history.append(breakdown.total)
        max_residual = max(max_residual, residual_noma(scenario, channels, v))
        if abs(history[-1] - history[-2]) <= config.delta:
            converged = True
            status = "converged"
            break
    return _report("edge-only" if edge_only else "dran-noma", history,
                   iterations, converged, status, v, breakdown, max_residual, t0,
                   v.power_ul)
