"""Continuous initial data h0(x), extended by constants outside their domain."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np


class ICKind(enum.IntEnum):
    AFFINE = 0
    PIECEWISE_LINEAR = 1
    SINE = 2
    SMOOTHED_STEP = 3


@dataclass(frozen=True)
class InitialCondition:
    """Initial condition evaluator.

    ``params`` holds the kind-specific coefficients:

    ============== ==================================
    AFFINE         ``(a, b)``: ``a*x + b``
    SINE           ``(amplitude, frequency)``: ``amplitude*sin(frequency*x)``
    SMOOTHED_STEP  ``(lower, upper, center, epsilon)``
    ============== ==================================

    PIECEWISE_LINEAR uses ``breakpoints`` instead. Outside ``domain`` the
    value at the nearest domain end is used, so ``evaluate`` is continuous on
    the whole real line.
    """

    kind: ICKind
    params: Tuple[float, ...] = ()
    breakpoints: Tuple[Tuple[float, float], ...] = ()
    domain: Tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        lo, hi = self.domain
        if not lo < hi:
            raise ValueError(f"empty domain {self.domain}")
        if self.kind is ICKind.PIECEWISE_LINEAR:
            xs = [p[0] for p in self.breakpoints]
            if len(xs) < 1 or any(b <= a for a, b in zip(xs, xs[1:])):
                raise ValueError("breakpoints must be non-empty and strictly increasing in x")
        elif self.kind is ICKind.SMOOTHED_STEP:
            if len(self.params) != 4 or not self.params[3] > 0:
                raise ValueError("smoothed step needs (lower, upper, center, epsilon) with epsilon > 0")
        elif len(self.params) != 2:
            raise ValueError(f"{self.kind.name} takes two parameters")

    # -- constructors -------------------------------------------------------

    @classmethod
    def affine(cls, a: float, b: float, domain=(0.0, 1.0)) -> "InitialCondition":
        return cls(ICKind.AFFINE, (float(a), float(b)), domain=tuple(domain))

    @classmethod
    def piecewise_linear(cls, points: Sequence[Tuple[float, float]], domain=(0.0, 1.0)) -> "InitialCondition":
        pts = tuple((float(x), float(v)) for x, v in points)
        return cls(ICKind.PIECEWISE_LINEAR, breakpoints=pts, domain=tuple(domain))

    @classmethod
    def sine(cls, amplitude: float = 1.0, frequency: float = 2 * math.pi, domain=(0.0, 1.0)) -> "InitialCondition":
        return cls(ICKind.SINE, (float(amplitude), float(frequency)), domain=tuple(domain))

    @classmethod
    def smoothed_step(cls, lower: float = 2.0, upper: float = 1.0, center: float = 0.3,
                      epsilon: float = 1e-4, domain=(0.0, 1.0)) -> "InitialCondition":
        """Two-level step ``lower*(1-w)/2 + upper*(1+w)/2``.

        ``w = (center - x)/sqrt((center - x)**2 + epsilon)`` tends to +1 left of
        ``center``, so the profile approaches ``upper`` for ``x < center`` and
        ``lower`` for ``x > center``. The defaults reproduce the exponential
        source example, a step from 1 up to 2 at ``x = 0.3``.
        """
        return cls(ICKind.SMOOTHED_STEP, (float(lower), float(upper), float(center), float(epsilon)),
                   domain=tuple(domain))

    @classmethod
    def plateau_piecewise(cls) -> "InitialCondition":
        """Plateau 2, ramp to 3 on [0.1, 0.2], plateau 3, ramp back to 2 on [0.4, 0.6]."""
        return cls.piecewise_linear([(0.1, 2.0), (0.2, 3.0), (0.4, 3.0), (0.6, 2.0)])

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        xc = np.clip(x, *self.domain)
        p = self.params
        if self.kind is ICKind.AFFINE:
            out = p[0] * xc + p[1]
        elif self.kind is ICKind.SINE:
            out = p[0] * np.sin(p[1] * xc)
        elif self.kind is ICKind.SMOOTHED_STEP:
            lower, upper, center, eps = p
            d = center - xc
            w = d / np.sqrt(d * d + eps)
            out = lower * (1.0 - w) / 2.0 + upper * (1.0 + w) / 2.0
        else:
            bx, bv = self.breakpoint_arrays()
            out = np.interp(xc, bx, bv)
        return float(out) if out.ndim == 0 else out

    __call__ = evaluate

    def breakpoint_arrays(self):
        bx = np.array([b[0] for b in self.breakpoints], dtype=float)
        bv = np.array([b[1] for b in self.breakpoints], dtype=float)
        return bx, bv

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]

    def kinks(self) -> Tuple[float, ...]:
        """Abscissae where h0 is continuous but not differentiable."""
        lo, hi = self.domain
        if self.kind is ICKind.PIECEWISE_LINEAR:
            pts = [x for x, _ in self.breakpoints if lo < x < hi]
        else:
            pts = []
        # constant extension breaks smoothness at the domain ends
        return tuple(sorted(pts + [lo, hi]))

    def pack(self):
        """Flat representation consumed by the compiled kernels."""
        p = np.zeros(4)
        p[: len(self.params)] = self.params
        if self.kind is ICKind.PIECEWISE_LINEAR:
            bx, bv = self.breakpoint_arrays()
        else:
            bx = bv = np.zeros(1)
        return int(self.kind), p, bx, bv, float(self.domain[0]), float(self.domain[1])
