r"""Exact solution of :math:`q_t + (q^2/2)_x = s(q)` by characteristics.

For a query point :math:`(x, t)` the foot point :math:`y` solves

.. math:: x = y + F(t, h_0(y))

and the solution is :math:`q(x, t) = E(t, h_0(y))`. The root is bracketed by a
uniform sign-change scan (which also counts roots, so crossing characteristics
are detected) and refined by bisection, which only needs :math:`h_0` to be
continuous.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from . import _codes
from ._backend import for_family
from .initial_conditions import InitialCondition
from .source_terms import (ExtendedReal, Finite, SourceFamily, ext_min,
                           primitive, validity_time)


@dataclass(frozen=True)
class RootConfig:
    abs_tol: float = 1e-12
    residual_tol: float = 1e-12
    max_iter: int = 200
    scan_points: int = 1024
    search_margin: float = 2.0

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.residual_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.scan_points < 8:
            raise ValueError("scan_points must be at least 8")
        if not self.search_margin >= 0:
            raise ValueError("search_margin must be non-negative")


@dataclass(frozen=True)
class SolutionSample:
    x: float
    t: float
    q: float
    y: float
    residual: float


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CHARBURG_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class CharacteristicSolution:
    """Pointwise evaluator of the exact solution for one family and initial condition."""

    family: SourceFamily
    ic: InitialCondition
    solver: RootConfig = field(default_factory=RootConfig)

    def residual(self, y, x, t):
        """Signed characteristic residual ``y + F(t, h0(y)) - x``."""
        r = np.asarray(y, dtype=float) + primitive(self.family, t, self.ic.evaluate(y)) - x
        return float(r) if np.ndim(r) == 0 else r

    def solve_arrays(self, xs, t: float):
        """Vectorised solve; returns ``(q, y, residual)`` arrays.

        Raises the error of the first failing point, annotated with its ``x``.
        """
        if not t >= 0:
            raise ValueError(f"time must be non-negative, got {t!r}")
        xs = np.ascontiguousarray(xs, dtype=float).ravel()
        kern = for_family(self.family)
        nthreads = _threads()
        if nthreads > 1 and xs.size >= 2 * nthreads and kern.NAME == "cython":
            chunks = np.array_split(xs, nthreads)
            with ThreadPoolExecutor(nthreads) as pool:
                parts = list(pool.map(lambda c: kern.solve_points(self.family, self.ic, c, t, self.solver), chunks))
            q, y, r, st = (np.concatenate(p) for p in zip(*parts))
        else:
            q, y, r, st = kern.solve_points(self.family, self.ic, xs, t, self.solver)
        bad = np.flatnonzero(st)
        if bad.size:
            k = bad[0]
            _codes.raise_for(int(st[k]), float(xs[k]))
        return q, y, r

    def solve_point(self, x: float, t: float) -> SolutionSample:
        q, y, r = self.solve_arrays([x], t)
        return SolutionSample(float(x), float(t), float(q[0]), float(y[0]), float(r[0]))

    def sample_grid(self, t: float, xs: Sequence[float]) -> List[SolutionSample]:
        xs = np.asarray(xs, dtype=float)
        if xs.size > 1 and np.any(np.diff(xs) <= 0):
            raise ValueError("sample points must be strictly increasing")
        q, y, r = self.solve_arrays(xs, t)
        return [SolutionSample(float(a), float(t), float(b), float(c), float(d))
                for a, b, c, d in zip(xs, q, y, r)]

    def __call__(self, x, t):
        q, _, _ = self.solve_arrays(np.atleast_1d(x), t)
        return float(q[0]) if np.ndim(x) == 0 else q.reshape(np.shape(x))

    def classical_horizon(self, y_grid: Sequence[float], scan: int = 64) -> ExtendedReal:
        """First time at which characteristics from ``y_grid`` cross, or the flow blows up.

        Crossing is detected when the centred difference of ``y + F(t, h0(y))``
        over one grid spacing becomes non-positive; each per-foot-point crossing
        time is bracketed on a uniform time scan and refined by bisection.
        """
        y = np.asarray(y_grid, dtype=float)
        if y.size < 2:
            raise ValueError("need at least two foot points")
        delta = (y[-1] - y[0]) / (y.size - 1)
        h = self.ic.evaluate(y)
        hm = self.ic.evaluate(y - delta)
        hp = self.ic.evaluate(y + delta)
        cap = ext_min(*(validity_time(self.family, float(v)) for v in np.unique(np.concatenate([h, hm, hp]))))

        def slope(t, sel=slice(None)):
            dF = primitive(self.family, t, hp[sel]) - primitive(self.family, t, hm[sel])
            return 1.0 + dF / (2.0 * delta)

        if cap.is_finite:
            windows = [(0.0, cap.value * (1.0 - 1e-10))]
        else:
            windows = [(0.0, 1.0)] + [(2.0 ** (k - 1), 2.0 ** k) for k in range(1, 41)]
        for t0, t1 in windows:
            ts = np.linspace(t0, t1, scan + 1)
            for prev, tk in zip(ts[:-1], ts[1:]):
                crossed = np.flatnonzero(slope(tk) <= 0)
                if crossed.size:
                    return ext_min(Finite(_first_crossing(slope, prev, tk, crossed)), cap)
        return cap


def _first_crossing(slope, lo: float, hi: float, idx) -> float:
    """Earliest time in (lo, hi] at which ``slope`` turns non-positive on ``idx``."""
    a = np.full(idx.size, lo)
    b = np.full(idx.size, hi)
    for _ in range(200):
        m = a + 0.5 * (b - a)
        if np.all((m == a) | (m == b)):
            break
        hit = slope(m, idx) <= 0
        b = np.where(hit, m, b)
        a = np.where(hit, a, m)
    return float(b.min())


# module-level spellings of the operations


def residual(sol: CharacteristicSolution, y, x, t):
    return sol.residual(y, x, t)


def solve_point(sol: CharacteristicSolution, x: float, t: float) -> SolutionSample:
    return sol.solve_point(x, t)


def sample_grid(sol: CharacteristicSolution, t: float, xs) -> List[SolutionSample]:
    return sol.sample_grid(t, xs)


def classical_horizon(sol: CharacteristicSolution, y_grid) -> ExtendedReal:
    return sol.classical_horizon(y_grid)
