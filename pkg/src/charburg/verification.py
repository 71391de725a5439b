"""Runtime invariant checks reported by ``charburg verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List

import numpy as np

from .characteristic_solver import CharacteristicSolution, RootConfig
from .initial_conditions import InitialCondition
from .ode_oracle import OracleConfig, integrate_characteristic
from .source_terms import (Kind, SourceFamily, flow, primitive, reciprocal_primitive,
                           source_value, validity_time)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  worst={self.worst:.3e}  tol={self.tol:.1e}"


@dataclass(frozen=True)
class Problem:
    label: str
    family: SourceFamily
    ic: InitialCondition
    t: float


FIGURES = {
    1: Problem("fig1", SourceFamily.linear(-2.0), InitialCondition.plateau_piecewise(), 0.2),
    2: Problem("fig2", SourceFamily.quadratic(-2.0), InitialCondition.sine(), 0.15),
    3: Problem("fig3", SourceFamily.exponential(-1.0), InitialCondition.smoothed_step(), 0.26),
}


def sample_window(f: SourceFamily, rng, n: int, t_max: float = 1.0, h_span=(0.1, 2.0)):
    """Random ``(t, h0)`` pairs with ``|h0|`` in ``h_span`` and ``t`` inside the validity window."""
    h = rng.uniform(*h_span, n) * rng.choice([-1.0, 1.0], n)
    t = np.empty(n)
    for i, hi in enumerate(h):
        T = validity_time(f, hi)
        top = min(t_max, 0.9 * T.value) if T.is_finite else t_max
        t[i] = rng.uniform(1e-3, top)
    return t, h


def flow_identity(f: SourceFamily, rng, n=100, tol=1e-9) -> CheckResult:
    t, h = sample_window(f, rng, n)
    err = np.abs(reciprocal_primitive(f, flow(f, t, h)) - reciprocal_primitive(f, h) - t)
    return CheckResult(f"flow identity G(E)-G(h0)=t [{f.name} beta={f.beta:g}]", bool(np.all(err <= tol)),
                       float(err.max()), tol)


def primitive_identity(f: SourceFamily, rng, n=100, d=1e-6, tol=1e-6) -> CheckResult:
    t, h = sample_window(f, rng, n)
    E = flow(f, t, h)
    fd = (primitive(f, t + d, h) - primitive(f, t - d, h)) / (2 * d)
    err = np.abs(fd - E) / np.maximum(1.0, np.abs(E))
    return CheckResult(f"primitive identity dF/dt=E [{f.name} beta={f.beta:g}]", bool(np.all(err <= tol)),
                       float(err.max()), tol)


def ode_identity(f: SourceFamily, rng, n=100, d=1e-6, tol=1e-6) -> CheckResult:
    t, h = sample_window(f, rng, n)
    E = flow(f, t, h)
    fd = (flow(f, t + d, h) - flow(f, t - d, h)) / (2 * d)
    err = np.abs(fd - source_value(f, E)) / np.maximum(1.0, np.abs(E))
    return CheckResult(f"ODE identity dE/dt=s(E) [{f.name} beta={f.beta:g}]", bool(np.all(err <= tol)),
                       float(err.max()), tol)


def semigroup(f: SourceFamily, rng, n=100, tol=1e-9) -> CheckResult:
    t, h = sample_window(f, rng, n)
    split = rng.uniform(0, 1, n)
    one = flow(f, t, h)
    two = flow(f, t * (1 - split), flow(f, t * split, h))
    err = np.abs(one - two) / np.maximum(1.0, np.abs(one))
    return CheckResult(f"semigroup E(t1+t2)=E(t2,E(t1)) [{f.name} beta={f.beta:g}]", bool(np.all(err <= tol)),
                       float(err.max()), tol)


def small_beta_limits(tol=1e-8) -> CheckResult:
    worst = 0.0
    t = np.linspace(0.0, 2.0, 21)
    h = np.linspace(-1.5, 1.5, 21)
    for sign in (1.0, -1.0):
        b = sign * 1e-10
        for f, E0, F0 in ((SourceFamily.linear(b), h, t * h),
                          (SourceFamily.quadratic(b), h, t * h),
                          (SourceFamily.exponential(b), h + t, t * h + 0.5 * t * t)):
            worst = max(worst, float(np.max(np.abs(flow(f, t, h) - E0))),
                        float(np.max(np.abs(primitive(f, t, h) - F0))))
    return CheckResult("beta->0 limits of E and F", worst <= tol, worst, tol)


def closed_forms(solver: RootConfig, tol=1e-10) -> List[CheckResult]:
    xs = np.linspace(0.0, 1.0, 401)
    sol = CharacteristicSolution(SourceFamily.zero(), InitialCondition.affine(1.0, 0.0), solver)
    worst = max(float(np.max(np.abs(sol.solve_arrays(xs, t)[0] - xs / (1 + t)))) for t in (0.25, 1.0, 4.0))
    out = [CheckResult("homogeneous closed form q=x/(1+t)", worst <= tol, worst, tol)]
    worst = 0.0
    for b in (3.0, -2.0, 0.5):
        sol = CharacteristicSolution(SourceFamily.linear(b), InitialCondition.affine(b / (b - 1), 0.0, (-5.0, 5.0)),
                                     solver)
        for t in (0.1, 0.25, 0.5):
            eb = math.exp(b * t)
            worst = max(worst, float(np.max(np.abs(sol.solve_arrays(xs, t)[0] - b * xs * eb / (b - 2 + eb)))))
    out.append(CheckResult("linear-source closed form q=b x e^(bt)/(b-2+e^(bt))", worst <= tol, worst, tol))
    return out


def _solve_varying(sol: CharacteristicSolution, xs, ts):
    q = np.empty(xs.size)
    y = np.empty(xs.size)
    for tv in np.unique(ts):
        m = ts == tv
        q[m], y[m], _ = sol.solve_arrays(xs[m], float(tv))
    return q, y


def pde_residual(sol: CharacteristicSolution, x, t, d=1e-5):
    """Centred-difference residual of q_t + q q_x - s(q) and its tolerance scale."""
    x = np.asarray(x, dtype=float)
    t = np.broadcast_to(np.asarray(t, dtype=float), x.shape)
    q, _ = _solve_varying(sol, x, t)
    qxp, _ = _solve_varying(sol, x + d, t)
    qxm, _ = _solve_varying(sol, x - d, t)
    qtp, _ = _solve_varying(sol, x, t + d)
    qtm, _ = _solve_varying(sol, x, t - d)
    s = np.asarray(source_value(sol.family, q))
    r = (qtp - qtm) / (2 * d) + q * (qxp - qxm) / (2 * d) - s
    return np.abs(r), 1.0 + np.abs(q) + np.abs(s)


def pick_smooth_points(sol: CharacteristicSolution, rng, n, t_range, x_range=(0.02, 0.98), d=1e-5):
    """``n`` random interior (x, t) whose difference stencils stay in one smooth region."""
    xs, ts = [], []
    while len(xs) < n:
        x = rng.uniform(*x_range, 4 * n)
        t = rng.uniform(*t_range, 4 * n)
        ys = []
        for dx, dt in ((0, 0), (d, 0), (-d, 0), (0, d), (0, -d)):
            ys.append(_solve_varying(sol, x + dx, t + dt)[1])
        ys = np.stack(ys)
        lo, hi = ys.min(axis=0), ys.max(axis=0)
        ok = np.ones(x.size, dtype=bool)
        for k in sol.ic.kinks():
            ok &= ~((lo - 1e-9 <= k) & (k <= hi + 1e-9))
        xs.extend(x[ok])
        ts.extend(t[ok])
    return np.array(xs[:n]), np.array(ts[:n])


def pde_check(problem: Problem, solver: RootConfig, rng, n=200, scale=1e-4,
              x_range=(0.02, 0.98), d=1e-5) -> CheckResult:
    """Residual at ``n`` smooth points with stencil width ``d``.

    Close to gradient catastrophe the O(d^2) truncation term dominates, so
    ``d`` stays well below the spacing where that term reaches ``scale``.
    """
    sol = CharacteristicSolution(problem.family, problem.ic, solver)
    x, t = pick_smooth_points(sol, rng, n, (0.25 * problem.t, problem.t), x_range, d)
    r, sc = pde_residual(sol, x, t, d)
    ratio = r / sc
    return CheckResult(f"PDE residual q_t+q q_x-s(q) [{problem.label}]", bool(np.all(ratio <= scale)),
                       float(ratio.max()), scale)


def oracle_check(problem: Problem, solver: RootConfig, rng, n=50, tol=1e-7,
                 x_range=(0.0, 1.0)) -> CheckResult:
    sol = CharacteristicSolution(problem.family, problem.ic, solver)
    worst = 0.0
    cfg = OracleConfig()
    for x, t in zip(rng.uniform(*x_range, n), rng.uniform(0.0, problem.t, n)):
        s = sol.solve_point(float(x), float(t))
        xo, qo = integrate_characteristic(problem.family, s.y, problem.ic.evaluate(s.y), float(t), cfg)
        worst = max(worst, abs(xo - x), abs(qo - s.q))
    return CheckResult(f"RK4 oracle equivalence [{problem.label}]", worst <= tol, worst, tol)


def grid_residual_check(problem: Problem, solver: RootConfig, xs=None) -> CheckResult:
    sol = CharacteristicSolution(problem.family, problem.ic, solver)
    xs = np.linspace(0.0, 1.0, 401) if xs is None else xs
    _, _, r = sol.solve_arrays(xs, problem.t)
    worst = float(r.max())
    return CheckResult(f"algebraic residual |y+F-x| [{problem.label}]", worst <= solver.residual_tol,
                       worst, solver.residual_tol)


def family_checks(f: SourceFamily, rng) -> List[CheckResult]:
    out = []
    if f.kind in (Kind.LINEAR, Kind.QUADRATIC, Kind.EXPONENTIAL) and not f.limit_branch:
        out.append(flow_identity(f, rng))
    out += [primitive_identity(f, rng), ode_identity(f, rng), semigroup(f, rng)]
    return out


def default_suite(solver: RootConfig = RootConfig(), seed: int = 0) -> Iterable[CheckResult]:
    rng = np.random.default_rng(seed)
    for f in (SourceFamily.zero(), SourceFamily.linear(-2.0), SourceFamily.linear(1.5),
              SourceFamily.quadratic(-2.0), SourceFamily.quadratic(2.0),
              SourceFamily.exponential(-1.0), SourceFamily.exponential(1.0)):
        yield from family_checks(f, rng)
    yield small_beta_limits()
    yield from closed_forms(solver)
    for p in FIGURES.values():
        yield grid_residual_check(p, solver)
        yield pde_check(p, solver, rng)
        yield oracle_check(p, solver, rng)
    yield oracle_check(Problem("zero/sine", SourceFamily.zero(), InitialCondition.sine(), 0.15), solver, rng)


def problem_suite(problem: Problem, solver: RootConfig, xs, seed: int = 0) -> Iterable[CheckResult]:
    """Checks for one user-selected family, initial condition, grid and time."""
    rng = np.random.default_rng(seed)
    lo, hi = float(xs[0]), float(xs[-1])
    yield grid_residual_check(problem, solver, xs)
    yield from family_checks(problem.family, rng)
    if problem.t > 0:
        pad = 0.02 * (hi - lo)
        yield pde_check(problem, solver, rng, x_range=(lo + pad, hi - pad))
    yield oracle_check(problem, solver, rng, x_range=(lo, hi))
