"""Fixed-step RK4 oracle for the equivalent ODE and the characteristic system.

The oracle only uses ``s(q)``; it never touches the closed-form flow map or
its primitive, so it can check them independently. A step that does not
divide ``t`` is shrunk to ``t / ceil(t / step)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import _codes
from ._backend import for_family
from .errors import OutOfValidity
from .source_terms import SourceFamily, validity_time


@dataclass(frozen=True)
class OracleConfig:
    step: float = 1e-5
    method: str = "RK4"

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.method != "RK4":
            raise ValueError("only RK4 is available")


def _check_window(f: SourceFamily, h0: float, t: float):
    if t < 0:
        raise ValueError("the oracle integrates forward in time only")
    horizon = validity_time(f, h0)
    if horizon.is_finite and t >= horizon.value:
        raise OutOfValidity(f"t={t!r} is past the blow-up time {horizon.value!r}")


def integrate_equivalent(f: SourceFamily, h0: float, t: float, cfg: OracleConfig = OracleConfig()) -> float:
    _check_window(f, h0, t)
    q, status = for_family(f).rk4_equivalent(f, float(h0), float(t), cfg.step)
    if status:
        _codes.raise_for(status)
    return q


def integrate_characteristic(f: SourceFamily, y: float, h0: float, t: float,
                             cfg: OracleConfig = OracleConfig()):
    """Integrate ``x' = q, q' = s(q)`` from ``(y, h0)``; returns ``(x, q)``."""
    _check_window(f, h0, t)
    x, q, status = for_family(f).rk4_characteristic(f, float(y), float(h0), float(t), cfg.step)
    if status:
        _codes.raise_for(status)
    return x, q
