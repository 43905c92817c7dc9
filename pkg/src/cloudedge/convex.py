# cloudedge/convex.py
"""Declarative layer for the per-iteration convex subproblems.

Each alternating-optimization step produces one ConvexProblem from a fixed
set of constraint kinds (the coefficients are constants captured from the
current auxiliary variables). The problem is reduced to a standard cone
program and solved by an interior-point routine (Clarabel via cvxpy, SCS as
fallback).

Because consecutive iterations share the problem *structure* and only change
coefficients, compiled programs are cached per thread, keyed on a structural
skeleton; coefficients enter as solver parameters so repeated solves skip
canonicalization entirely.

`check_feasibility` is an independent numeric evaluator of all constraint
kinds and is used to validate every returned solution.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .numerics import LN2, hermitian_sqrt, symmetrize

__all__ = [
    "VariableDecl",
    "AffineExpr",
    "AffineLe",
    "Hyperbolic",
    "SquareLe",
    "SqrtConcaveGe",
    "PsdSchur",
    "QuadTraceLe",
    "LogDetGe",
    "ConvexProblem",
    "ConvexSolution",
    "solve",
    "check_feasibility",
    "dump_text",
]

NONNEG = "nonneg-scalar"
BOX = "box-scalar"
HPSD = "hermitian-psd"
CPLX = "free-complex-matrix"


@dataclass(frozen=True)
class VariableDecl:
    name: str
    kind: str
    lo: float = 0.0
    hi: float = math.inf
    dim: int = 0
    rows: int = 0
    cols: int = 0

    def __post_init__(self):
        if self.kind not in (NONNEG, BOX, HPSD, CPLX):
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.kind == BOX and not self.lo <= self.hi:
            raise ValueError("box bounds need lo <= hi")
        if self.kind == HPSD and self.dim < 1:
            raise ValueError("hermitian-psd needs dim >= 1")
        if self.kind == CPLX and (self.rows < 1 or self.cols < 1):
            raise ValueError("free-complex-matrix needs rows, cols >= 1")


class AffineExpr:
    """const + sum_j coef_j * x_j + sum_j Re tr(Coef_j^H X_j)

    over scalar variables x_j and complex matrix variables X_j.
    """

    __slots__ = ("scalars", "matrices", "const")

    def __init__(self, const: float = 0.0):
        self.scalars: dict[str, float] = {}
        self.matrices: dict[str, np.ndarray] = {}
        self.const = float(const)

    def add(self, name: str, coef: float) -> "AffineExpr":
        self.scalars[name] = self.scalars.get(name, 0.0) + float(coef)
        return self

    def add_mat(self, name: str, coef: np.ndarray) -> "AffineExpr":
        coef = np.asarray(coef, dtype=complex)
        if name in self.matrices:
            self.matrices[name] = self.matrices[name] + coef
        else:
            self.matrices[name] = coef
        return self

    def add_const(self, c: float) -> "AffineExpr":
        self.const += float(c)
        return self

    def value(self, assignment: dict) -> float:
        v = self.const
        for name, coef in self.scalars.items():
            v += coef * float(assignment[name])
        for name, coef in self.matrices.items():
            v += float(np.real(np.sum(np.conj(coef) * np.asarray(assignment[name]))))
        return v

    def _skeleton(self):
        return (
            tuple(self.scalars.keys()),
            tuple((k, np.shape(m)) for k, m in self.matrices.items()),
        )


# ---------------------------------------------------------------------------
# constraint kinds
# ---------------------------------------------------------------------------


@dataclass
class AffineLe:
    """expr <= 0"""

    expr: AffineExpr
    kind: str = field(default="affine-le", init=False)


@dataclass
class Hyperbolic:
    """x * y >= const with x, y >= 0 (scalar variables, const >= 0)."""

    x: str
    y: str
    const: float
    kind: str = field(default="hyperbolic", init=False)


@dataclass
class SquareLe:
    """t**2 <= x (scalar variables)."""

    t: str
    x: str
    kind: str = field(default="square-le", init=False)


@dataclass
class SqrtConcaveGe:
    """2*lam*sqrt(tau) - lam^2 * lin >= rhs.

    rhs is either the ratio rhs_num / rhs_den (rhs_den a nonnegative scalar
    variable) or an affine expression.
    """

    lam: float
    tau: str
    lin: AffineExpr
    rhs_num: float | None = None
    rhs_den: str | None = None
    rhs: AffineExpr | None = None
    kind: str = field(default="sqrt-concave-ge", init=False)

    def __post_init__(self):
        ratio = self.rhs_num is not None and self.rhs_den is not None
        if ratio == (self.rhs is not None):
            raise ValueError("exactly one of ratio rhs or affine rhs required")


@dataclass
class PsdSchur:
    """q >= qt @ qt^H in the Loewner order (Schur-complement encoding)."""

    q: str
    qt: str
    kind: str = field(default="psd-schur", init=False)


@dataclass
class QuadTraceLe:
    """sum_j ||F_j @ X_j||_F^2 + lin <= rhs."""

    quads: list  # [(var_name, factor ndarray)]
    lin: AffineExpr
    rhs: AffineExpr
    kind: str = field(default="quad-trace-le", init=False)


@dataclass
class LogDetGe:
    """lin + log2 det(Omega) >= const, with Omega >= eps * I."""

    omega: str
    lin: AffineExpr
    const: float
    eps: float = 0.0
    kind: str = field(default="logdet-ge", init=False)


@dataclass
class ConvexProblem:
    variables: list
    constraints: list
    objective: str  # scalar variable to minimize

    def validate(self) -> None:
        names = {d.name for d in self.variables}
        if len(names) != len(self.variables):
            raise ValueError("duplicate variable names")
        if self.objective not in names:
            raise ValueError(f"objective {self.objective!r} not declared")
        for con in self.constraints:
            for ref in _referenced_names(con):
                if ref not in names:
                    raise ValueError(f"constraint references undeclared {ref!r}")


@dataclass
class ConvexSolution:
    assignment: dict
    objective: float
    residual: float
    status: str  # optimal | max-iter | infeasible

    @property
    def ok(self) -> bool:
        return self.status == "optimal" and bool(self.assignment)


def _referenced_names(con):
    if isinstance(con, AffineLe):
        yield from con.expr.scalars
        yield from con.expr.matrices
    elif isinstance(con, Hyperbolic):
        yield con.x
        yield con.y
    elif isinstance(con, SquareLe):
        yield con.t
        yield con.x
    elif isinstance(con, SqrtConcaveGe):
        yield con.tau
        yield from con.lin.scalars
        yield from con.lin.matrices
        if con.rhs_den is not None:
            yield con.rhs_den
        if con.rhs is not None:
            yield from con.rhs.scalars
            yield from con.rhs.matrices
    elif isinstance(con, PsdSchur):
        yield con.q
        yield con.qt
    elif isinstance(con, QuadTraceLe):
        for name, _ in con.quads:
            yield name
        yield from con.lin.scalars
        yield from con.lin.matrices
        yield from con.rhs.scalars
        yield from con.rhs.matrices
    elif isinstance(con, LogDetGe):
        yield con.omega
        yield from con.lin.scalars
        yield from con.lin.matrices
    else:
        raise TypeError(f"unknown constraint type {type(con).__name__}")


# ---------------------------------------------------------------------------
# structural skeleton (cache key)
# ---------------------------------------------------------------------------


def _skeleton(problem: ConvexProblem):
    vs = tuple(
        (d.name, d.kind, d.lo, d.hi, d.dim, d.rows, d.cols) for d in problem.variables
    )
    cs = []
    for con in problem.constraints:
        if isinstance(con, AffineLe):
            cs.append(("affine-le", con.expr._skeleton()))
        elif isinstance(con, Hyperbolic):
            cs.append(("hyperbolic", con.x, con.y))
        elif isinstance(con, SquareLe):
            cs.append(("square-le", con.t, con.x))
        elif isinstance(con, SqrtConcaveGe):
            rhs_sk = ("ratio", con.rhs_den) if con.rhs_den is not None else ("affine", con.rhs._skeleton())
            cs.append(("sqrt-concave-ge", con.tau, con.lin._skeleton(), rhs_sk))
        elif isinstance(con, PsdSchur):
            cs.append(("psd-schur", con.q, con.qt))
        elif isinstance(con, QuadTraceLe):
            cs.append((
                "quad-trace-le",
                tuple((n, np.shape(f)) for n, f in con.quads),
                con.lin._skeleton(),
                con.rhs._skeleton(),
            ))
        elif isinstance(con, LogDetGe):
            cs.append(("logdet-ge", con.omega, con.lin._skeleton()))
    return (vs, tuple(cs), problem.objective)


# ---------------------------------------------------------------------------
# cvxpy backend
# ---------------------------------------------------------------------------


class _Compiled:
    def __init__(self, cvx_problem, var_map, var_setters, con_setters):
        self.cvx_problem = cvx_problem
        self.var_map = var_map
        self.var_setters = var_setters
        self.con_setters = con_setters

    def load(self, problem: ConvexProblem) -> None:
        for setter, decl in zip(self.var_setters, problem.variables):
            setter(decl)
        for setter, con in zip(self.con_setters, problem.constraints):
            setter(con)


def _compile_affine(expr: AffineExpr, var_map):
    import cvxpy as cp

    const_p = cp.Parameter()
    terms = [const_p]
    scalar_ps = []
    for name in expr.scalars:
        p = cp.Parameter()
        scalar_ps.append(p)
        terms.append(p * var_map[name])
    mat_ps = []
    for name, coef in expr.matrices.items():
        p = cp.Parameter(np.shape(coef), complex=True)
        mat_ps.append(p)
        terms.append(cp.real(cp.sum(cp.multiply(p, var_map[name]))))
    cvx_expr = terms[0] if len(terms) == 1 else sum(terms[1:], start=terms[0])

    def setter(e: AffineExpr):
        const_p.value = e.const
        for p, coef in zip(scalar_ps, e.scalars.values()):
            p.value = coef
        for p, coef in zip(mat_ps, e.matrices.values()):
            p.value = np.conj(coef)

    return cvx_expr, setter


def _compile(problem: ConvexProblem):
    import cvxpy as cp

    var_map = {}
    cons = []
    var_setters = []
    for decl in problem.variables:
        if decl.kind == NONNEG:
            v = cp.Variable(nonneg=True, name=decl.name)
            var_map[decl.name] = v
            var_setters.append(lambda d: None)
        elif decl.kind == BOX:
            v = cp.Variable(name=decl.name)
            lo_p, hi_p = cp.Parameter(), cp.Parameter()
            cons += [v >= lo_p, v <= hi_p]
            var_map[decl.name] = v

            def vset(d, lo_p=lo_p, hi_p=hi_p):
                lo_p.value = d.lo
                hi_p.value = d.hi

            var_setters.append(vset)
        elif decl.kind == HPSD:
            v = cp.Variable((decl.dim, decl.dim), hermitian=True, name=decl.name)
            cons.append(v >> 0)
            var_map[decl.name] = v
            var_setters.append(lambda d: None)
        else:  # CPLX
            v = cp.Variable((decl.rows, decl.cols), complex=True, name=decl.name)
            var_map[decl.name] = v
            var_setters.append(lambda d: None)

    con_setters = []
    for con in problem.constraints:
        if isinstance(con, AffineLe):
            expr, aset = _compile_affine(con.expr, var_map)
            cons.append(expr <= 0)
            con_setters.append(lambda c, aset=aset: aset(c.expr))
        elif isinstance(con, Hyperbolic):
            sq = cp.Parameter(nonneg=True)
            x, y = var_map[con.x], var_map[con.y]
            cons.append(cp.SOC(x + y, cp.hstack([2.0 * sq, x - y])))
            con_setters.append(lambda c, sq=sq: setattr(sq, "value", math.sqrt(max(c.const, 0.0))))
        elif isinstance(con, SquareLe):
            cons.append(cp.square(var_map[con.t]) <= var_map[con.x])
            con_setters.append(lambda c: None)
        elif isinstance(con, SqrtConcaveGe):
            # lam^2 is folded into the affine coefficients at load time to
            # keep the compiled program parameter-affine (cacheable).
            w = cp.Variable(nonneg=True)
            lam_p = cp.Parameter(nonneg=True)
            lin_expr, lin_set = _compile_affine(con.lin, var_map)
            cons.append(cp.square(w) <= var_map[con.tau])

            def _load_scaled(c, lin_set):
                lam = max(c.lam, 0.0)
                scaled = AffineExpr(lam * lam * c.lin.const)
                for name, coef in c.lin.scalars.items():
                    scaled.add(name, lam * lam * coef)
                for name, coef in c.lin.matrices.items():
                    scaled.add_mat(name, lam * lam * coef)
                lin_set(scaled)
                return lam

            if con.rhs_den is not None:
                s = cp.Variable(nonneg=True)
                sqnum_p = cp.Parameter(nonneg=True)
                den = var_map[con.rhs_den]
                cons.append(cp.SOC(s + den, cp.hstack([2.0 * sqnum_p, s - den])))
                cons.append(2.0 * lam_p * w - lin_expr >= s)

                def sset(c, lam_p=lam_p, sqnum_p=sqnum_p, lin_set=lin_set):
                    lam_p.value = _load_scaled(c, lin_set)
                    sqnum_p.value = math.sqrt(max(c.rhs_num, 0.0))

            else:
                rhs_expr, rhs_set = _compile_affine(con.rhs, var_map)
                cons.append(2.0 * lam_p * w - lin_expr >= rhs_expr)

                def sset(c, lam_p=lam_p, lin_set=lin_set, rhs_set=rhs_set):
                    lam_p.value = _load_scaled(c, lin_set)
                    rhs_set(c.rhs)

            con_setters.append(sset)
        elif isinstance(con, PsdSchur):
            q, qt = var_map[con.q], var_map[con.qt]
            m = qt.shape[1]
            cons.append(cp.bmat([[q, qt], [qt.H, np.eye(m)]]) >> 0)
            con_setters.append(lambda c: None)
        elif isinstance(con, QuadTraceLe):
            fps = []
            quad_terms = []
            for name, factor in con.quads:
                fp = cp.Parameter(np.shape(factor), complex=True)
                fps.append(fp)
                quad_terms.append(cp.sum_squares(fp @ var_map[name]))
            lin_expr, lin_set = _compile_affine(con.lin, var_map)
            rhs_expr, rhs_set = _compile_affine(con.rhs, var_map)
            cons.append(sum(quad_terms) + lin_expr <= rhs_expr)

            def qset(c, fps=fps, lin_set=lin_set, rhs_set=rhs_set):
                for fp, (_, factor) in zip(fps, c.quads):
                    fp.value = np.asarray(factor, dtype=complex)
                lin_set(c.lin)
                rhs_set(c.rhs)

            con_setters.append(qset)
        elif isinstance(con, LogDetGe):
            om = var_map[con.omega]
            const_p = cp.Parameter()
            eps_p = cp.Parameter(nonneg=True)
            lin_expr, lin_set = _compile_affine(con.lin, var_map)
            cons.append(lin_expr + cp.log_det(om) / LN2 >= const_p)
            cons.append(om >> eps_p * np.eye(om.shape[0]))

            def lset(c, const_p=const_p, eps_p=eps_p, lin_set=lin_set):
                const_p.value = c.const
                eps_p.value = max(c.eps, 0.0)
                lin_set(c.lin)

            con_setters.append(lset)
        else:
            raise TypeError(f"unknown constraint type {type(con).__name__}")

    objective = cp.Minimize(var_map[problem.objective])
    return _Compiled(cp.Problem(objective, cons), var_map, var_setters, con_setters)


_tls = threading.local()


def _cache() -> dict:
    cache = getattr(_tls, "cache", None)
    if cache is None:
        cache = {}
        _tls.cache = cache
    return cache


def _extract(problem: ConvexProblem, compiled: _Compiled) -> dict:
    out = {}
    for decl in problem.variables:
        raw = compiled.var_map[decl.name].value
        if raw is None:
            return {}
        if decl.kind == NONNEG:
            out[decl.name] = max(float(raw), 0.0)
        elif decl.kind == BOX:
            out[decl.name] = float(np.clip(float(raw), decl.lo, decl.hi))
        elif decl.kind == HPSD:
            out[decl.name] = symmetrize(np.asarray(raw))
        else:
            out[decl.name] = np.asarray(raw, dtype=complex)
    return out


def solve(
    problem: ConvexProblem,
    feas_tol: float = 1e-7,
    opt_tol: float = 1e-5,
    max_iters: int = 200,
) -> ConvexSolution:
    """Solve a ConvexProblem to the requested tolerances.

    Returns the best iterate with one of the statuses optimal / max-iter /
    infeasible; optimal guarantees check_feasibility(...) <= feas_tol.
    """
    import cvxpy as cp

    problem.validate()
    key = _skeleton(problem)
    cache = _cache()
    compiled = cache.get(key)
    if compiled is None:
        compiled = _compile(problem)
        if len(cache) >= 128:
            cache.clear()
        cache[key] = compiled
    compiled.load(problem)

    import warnings

    best = None  # (residual, assignment, objective)
    for solver, opts in (
        ("CLARABEL", dict(max_iter=max_iters,
                          tol_gap_rel=opt_tol * 1e-2,
                          tol_gap_abs=opt_tol * 1e-4,
                          tol_feas=feas_tol * 1e-2)),
        ("SCS", dict(max_iters=5_000, eps=1e-6)),
    ):
        try:
            with warnings.catch_warnings():
                # reduced-accuracy outcomes are handled through the status
                warnings.simplefilter("ignore")
                compiled.cvx_problem.solve(solver=solver, **opts)
            status = compiled.cvx_problem.status
        except Exception:
            continue
        if status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
            return ConvexSolution({}, math.nan, math.inf, "infeasible")
        assignment = _extract(problem, compiled)
        if not assignment:
            continue
        residual = check_feasibility(problem, assignment)
        objective = float(assignment[problem.objective])
        if status == cp.OPTIMAL and residual <= feas_tol:
            return ConvexSolution(assignment, objective, residual, "optimal")
        if best is None or residual < best[0]:
            best = (residual, assignment, objective)
        if residual <= max(10.0 * feas_tol, 1e-6):
            # near-feasible reduced-accuracy iterate; no point paying for
            # the fallback solver
            break

    if best is None:
        return ConvexSolution({}, math.nan, math.inf, "max-iter")
    residual, assignment, objective = best
    return ConvexSolution(assignment, objective, residual, "max-iter")


# ---------------------------------------------------------------------------
# independent feasibility evaluation
# ---------------------------------------------------------------------------


def _min_eig(m: np.ndarray) -> float:
    h = 0.5 * (m + m.conj().T)
    return float(np.linalg.eigvalsh(h)[0])


def check_feasibility(problem: ConvexProblem, assignment: dict) -> float:
    """Largest constraint violation of `assignment` (0 for interior points).

    Evaluates every constraint kind and variable domain numerically, with no
    reference to the solver path.
    """
    worst = 0.0

    def push(v):
        nonlocal worst
        worst = max(worst, float(v))

    for decl in problem.variables:
        v = assignment[decl.name]
        if decl.kind == NONNEG:
            push(-float(v))
        elif decl.kind == BOX:
            push(decl.lo - float(v))
            push(float(v) - decl.hi)
        elif decl.kind == HPSD:
            push(-_min_eig(np.asarray(v)))

    for con in problem.constraints:
        if isinstance(con, AffineLe):
            push(con.expr.value(assignment))
        elif isinstance(con, Hyperbolic):
            push(con.const - float(assignment[con.x]) * float(assignment[con.y]))
        elif isinstance(con, SquareLe):
            push(float(assignment[con.t]) ** 2 - float(assignment[con.x]))
        elif isinstance(con, SqrtConcaveGe):
            tau = max(float(assignment[con.tau]), 0.0)
            lhs = 2.0 * con.lam * math.sqrt(tau) - con.lam**2 * con.lin.value(assignment)
            if con.rhs_den is not None:
                den = float(assignment[con.rhs_den])
                if den <= 0.0:
                    rhs = 0.0 if con.rhs_num <= 0.0 else math.inf
                else:
                    rhs = con.rhs_num / den
            else:
                rhs = con.rhs.value(assignment)
            push(rhs - lhs)
        elif isinstance(con, PsdSchur):
            q = np.asarray(assignment[con.q])
            qt = np.asarray(assignment[con.qt])
            push(-_min_eig(q - qt @ qt.conj().T))
        elif isinstance(con, QuadTraceLe):
            lhs = con.lin.value(assignment)
            for name, factor in con.quads:
                lhs += float(np.sum(np.abs(np.asarray(factor) @ np.asarray(assignment[name])) ** 2))
            push(lhs - con.rhs.value(assignment))
        elif isinstance(con, LogDetGe):
            om = np.asarray(assignment[con.omega])
            push(con.eps - _min_eig(om))
            sign, logdet = np.linalg.slogdet(0.5 * (om + om.conj().T))
            if sign.real <= 0.0:
                push(math.inf)
            else:
                push(con.const - (con.lin.value(assignment) + float(logdet.real) / LN2))
    return worst


def dump_text(problem: ConvexProblem) -> str:
    """Human-readable dump, one variable/constraint per line, for
    cross-checking against external solvers."""

    def fmt_affine(e: AffineExpr) -> str:
        parts = [f"{e.const:.9g}"]
        parts += [f"{c:+.9g}*{n}" for n, c in e.scalars.items()]
        parts += [f"+Re tr(C^H {n}) C~{np.shape(m)}" for n, m in e.matrices.items()]
        return " ".join(parts)

    lines = [f"minimize {problem.objective}"]
    for d in problem.variables:
        extra = ""
        if d.kind == BOX:
            extra = f" in [{d.lo:.9g}, {d.hi:.9g}]"
        elif d.kind == HPSD:
            extra = f" dim {d.dim}"
        elif d.kind == CPLX:
            extra = f" {d.rows}x{d.cols}"
        lines.append(f"var {d.name}: {d.kind}{extra}")
    for con in problem.constraints:
        if isinstance(con, AffineLe):
            lines.append(f"affine-le: {fmt_affine(con.expr)} <= 0")
        elif isinstance(con, Hyperbolic):
            lines.append(f"hyperbolic: {con.x}*{con.y} >= {con.const:.9g}")
        elif isinstance(con, SquareLe):
            lines.append(f"square-le: {con.t}^2 <= {con.x}")
        elif isinstance(con, SqrtConcaveGe):
            rhs = (
                f"{con.rhs_num:.9g}/{con.rhs_den}"
                if con.rhs_den is not None
                else fmt_affine(con.rhs)
            )
            lines.append(
                f"sqrt-concave-ge: 2*{con.lam:.9g}*sqrt({con.tau}) "
                f"- {con.lam**2:.9g}*({fmt_affine(con.lin)}) >= {rhs}"
            )
        elif isinstance(con, PsdSchur):
            lines.append(f"psd-schur: {con.q} >= {con.qt} {con.qt}^H")
        elif isinstance(con, QuadTraceLe):
            quads = " + ".join(f"||F {n}||_F^2" for n, _ in con.quads)
            lines.append(
                f"quad-trace-le: {quads} + {fmt_affine(con.lin)} <= {fmt_affine(con.rhs)}"
            )
        elif isinstance(con, LogDetGe):
            lines.append(
                f"logdet-ge: {fmt_affine(con.lin)} + log2det({con.omega}) >= "
                f"{con.const:.9g} (eps {con.eps:.3g})"
            )
    return "\n".join(lines) + "\n"
