"""First-order finite-volume scheme assessed against the exact solution.

Convection uses the Godunov flux for ``f(q) = q**2/2``; the source is applied
by operator splitting, either through the exact flow map or one classical RK4
step. Ghost cells are filled from the exact characteristic solution.
"""
from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .characteristic_solver import CharacteristicSolution, RootConfig
from .errors import CflViolation
from .initial_conditions import InitialCondition
from .source_terms import SourceFamily, flow, source_value


class Splitting(str, enum.Enum):
    GODUNOV = "godunov"
    STRANG = "strang"


class SourceUpdate(str, enum.Enum):
    EXACT_FLOW = "exact"
    RK4_STEP = "rk4"


class Boundary(str, enum.Enum):
    EXACT = "exact"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class FvConfig:
    cells: int
    t_end: float
    cfl: float = 0.9
    splitting: Splitting = Splitting.GODUNOV
    source_update: SourceUpdate = SourceUpdate.EXACT_FLOW
    boundary: Boundary = Boundary.EXACT
    max_wave_speed: float = 1e8

    def __post_init__(self):
        if self.cells < 8:
            raise ValueError("need at least 8 cells")
        if not 0 < self.cfl < 1:
            raise ValueError("cfl must lie in (0, 1)")
        if not self.t_end >= 0:
            raise ValueError("t_end must be non-negative")
        object.__setattr__(self, "splitting", Splitting(self.splitting))
        object.__setattr__(self, "source_update", SourceUpdate(self.source_update))
        object.__setattr__(self, "boundary", Boundary(self.boundary))


@dataclass
class FvResult:
    centers: np.ndarray
    values: np.ndarray
    t: float
    steps: int

    @property
    def dx(self) -> float:
        return float(self.centers[1] - self.centers[0])


def burgers_flux(u):
    return 0.5 * u * u


def godunov_flux(ul, ur):
    """Exact Riemann flux for the convex flux q**2/2 (sonic point at 0)."""
    return np.maximum(burgers_flux(np.maximum(ul, 0.0)), burgers_flux(np.minimum(ur, 0.0)))


def cell_averages(ic: InitialCondition, edges: np.ndarray, order: int = 5) -> np.ndarray:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    a, b = edges[:-1, None], edges[1:, None]
    pts = 0.5 * (a + b) + 0.5 * (b - a) * nodes[None, :]
    return 0.5 * np.sum(weights[None, :] * ic.evaluate(pts), axis=1)


def _source_step(family: SourceFamily, u, dt, mode: SourceUpdate):
    if mode is SourceUpdate.EXACT_FLOW:
        return np.asarray(flow(family, dt, u), dtype=float)
    k1 = source_value(family, u)
    k2 = source_value(family, u + 0.5 * dt * k1)
    k3 = source_value(family, u + 0.5 * dt * k2)
    k4 = source_value(family, u + dt * k3)
    return u + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def run_scheme(cfg: FvConfig, family: SourceFamily, ic: InitialCondition,
               solver: RootConfig = RootConfig(),
               callback: Optional[Callable[[float, np.ndarray, np.ndarray], None]] = None) -> FvResult:
    """Advance cell averages of ``ic`` to ``cfg.t_end``.

    ``callback(t, u, boundary_fluxes)`` is invoked after every step with the
    new time, the cell averages and the (left, right) boundary fluxes of the
    convective update, scaled by ``dt``.
    """
    lo, hi = ic.domain
    n = cfg.cells
    edges = np.linspace(lo, hi, n + 1)
    dx = (hi - lo) / n
    centers = 0.5 * (edges[:-1] + edges[1:])
    ghosts_x = np.array([lo - 0.5 * dx, hi + 0.5 * dx])
    exact = CharacteristicSolution(family, ic, solver)
    u = cell_averages(ic, edges)

    def with_ghosts(v, t):
        if cfg.boundary is Boundary.PERIODIC:
            gl, gr = v[-1], v[0]
        else:
            gl, gr = exact.solve_arrays(ghosts_x, t)[0]
        return np.concatenate(([gl], v, [gr]))

    def convect(v, t, dt):
        ext = with_ghosts(v, t)
        speed = np.max(np.abs(ext))
        if speed * dt > dx * (1.0 + 1e-12):
            raise CflViolation(f"Courant number {speed * dt / dx:.6g} exceeds 1 at t={t!r}")
        flux = godunov_flux(ext[:-1], ext[1:])
        return v - dt / dx * (flux[1:] - flux[:-1]), (dt * flux[0], dt * flux[-1])

    t = 0.0
    steps = 0
    while t < cfg.t_end:
        speed = np.max(np.abs(with_ghosts(u, t)))
        if not speed <= cfg.max_wave_speed:
            raise CflViolation(f"wave speed {speed!r} exceeds the bound {cfg.max_wave_speed!r}")
        dt = cfg.cfl * dx / speed if speed > 0 else cfg.t_end - t
        dt = min(dt, cfg.t_end - t)
        if cfg.splitting is Splitting.GODUNOV:
            u, bflux = convect(u, t, dt)
            u = _source_step(family, u, dt, cfg.source_update)
        else:
            u = _source_step(family, u, 0.5 * dt, cfg.source_update)
            u, bflux = convect(u, t, dt)
            u = _source_step(family, u, 0.5 * dt, cfg.source_update)
        t = t + dt if t + dt < cfg.t_end else cfg.t_end
        steps += 1
        if callback is not None:
            callback(t, u, bflux)
    return FvResult(centers, u, t, steps)


@dataclass(frozen=True)
class ErrorRow:
    cells: int
    l1: float
    linf: float
    order: float = math.nan


@dataclass
class ErrorReport:
    rows: List[ErrorRow] = field(default_factory=list)

    @property
    def observed_order(self) -> float:
        return self.rows[-1].order if self.rows else math.nan

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("cells,L1,Linf,order\n")
        for r in self.rows:
            buf.write(f"{r.cells},{r.l1:.17g},{r.linf:.17g},{r.order:.17g}\n")
        return buf.getvalue()


def errors_against_exact(result: FvResult, family: SourceFamily, ic: InitialCondition,
                         solver: RootConfig = RootConfig()):
    """L1 and Linf errors of cell averages against exact point values at centres."""
    exact, _, _ = CharacteristicSolution(family, ic, solver).solve_arrays(result.centers, result.t)
    err = np.abs(result.values - exact)
    return float(np.sum(err) * result.dx), float(np.max(err))


def convergence_study(base: FvConfig, family: SourceFamily, ic: InitialCondition, levels: int,
                      solver: RootConfig = RootConfig()) -> ErrorReport:
    """Run ``levels`` resolutions, doubling the cell count each time."""
    if levels < 3:
        raise ValueError("a convergence study needs at least 3 levels")
    report = ErrorReport()
    prev = None
    for k in range(levels):
        cfg = FvConfig(**{**base.__dict__, "cells": base.cells * 2 ** k})
        res = run_scheme(cfg, family, ic, solver)
        l1, linf = errors_against_exact(res, family, ic, solver)
        order = math.nan
        if prev is not None and prev > 0 and l1 > 0:
            order = math.log2(prev / l1)
        report.rows.append(ErrorRow(cfg.cells, l1, linf, order))
        prev = l1
    return report
