r"""Source-term families for :math:`q_t + (q^2/2)_x = s(q)`.

Each family carries three closed forms:

* ``source_value``  -- :math:`s(q)`,
* ``flow``          -- :math:`E(t, h)`, the exact solution of
  :math:`\hat q' = s(\hat q)` with :math:`\hat q(0) = h`,
* ``primitive``     -- :math:`F(t, h) = \int_0^t E(\tau, h)\,d\tau`,

together with ``validity_time`` (the blow-up time of the flow) and
``reciprocal_primitive`` :math:`G` with :math:`G' = 1/s`, which satisfies
:math:`G(E(t,h)) - G(h) = t`.

All functions accept floats or numpy arrays for ``t``, ``h0`` and ``q`` and
return a float for scalar input.

The exponential family is evaluated in the rearranged form

.. math::

    E = h - \frac{\log(1 - w)}{\beta}, \qquad
    F = h t + e^{\beta h} t^2 g(w), \qquad w = \beta t e^{\beta h},

with :math:`g(w) = ((1-w)\log(1-w) + w) / w^2`, which is algebraically
identical to :math:`-\ln(e^{-\beta h}-\beta t)/\beta` and its primitive but
free of cancellation for small :math:`w`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .errors import OutOfValidity

# below this |beta| the beta -> 0 limit forms are evaluated
SMALL_BETA = 1e-8
# log arguments and denominators must exceed this
VALIDITY_MARGIN = 1e-14
# switch point for the series of g(w)
_G_SERIES = 1e-3


class Kind(enum.IntEnum):
    ZERO = 0
    LINEAR = 1
    QUADRATIC = 2
    EXPONENTIAL = 3
    CUSTOM = 4


# ---------------------------------------------------------------------------
# extended reals for blow-up / horizon times


@dataclass(frozen=True)
class Finite:
    value: float
    is_finite = True

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class Infinite:
    is_finite = False

    def __float__(self) -> float:
        return math.inf


ExtendedReal = Union[Finite, Infinite]
INFINITE = Infinite()


def ext_min(*values: ExtendedReal) -> ExtendedReal:
    """Smallest of several extended reals (``INFINITE`` for no arguments)."""
    finite = [v.value for v in values if v.is_finite]
    return Finite(min(finite)) if finite else INFINITE


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CustomSource:
    """User-supplied closed forms for a source outside the built-in families.

    ``flow`` and ``primitive`` take ``(t, h0)`` and must accept numpy arrays.
    ``validity`` maps ``h0`` to an :data:`ExtendedReal`; ``reciprocal_primitive``
    is optional and only used by verification checks.
    """

    source: Callable
    flow: Callable
    primitive: Callable
    validity: Optional[Callable] = None
    reciprocal_primitive: Optional[Callable] = None
    name: str = "custom"


@dataclass(frozen=True)
class SourceFamily:
    """A source term together with its exact flow map and time primitive."""

    kind: Kind
    beta: float = 0.0
    custom: Optional[CustomSource] = None

    def __post_init__(self):
        if (self.kind is Kind.CUSTOM) != (self.custom is not None):
            raise ValueError("custom closed forms are required for, and only for, Kind.CUSTOM")
        if not math.isfinite(self.beta):
            raise ValueError(f"beta must be finite, got {self.beta!r}")

    @classmethod
    def zero(cls) -> "SourceFamily":
        return cls(Kind.ZERO)

    @classmethod
    def linear(cls, beta: float) -> "SourceFamily":
        return cls(Kind.LINEAR, float(beta))

    @classmethod
    def quadratic(cls, beta: float) -> "SourceFamily":
        return cls(Kind.QUADRATIC, float(beta))

    @classmethod
    def exponential(cls, beta: float) -> "SourceFamily":
        return cls(Kind.EXPONENTIAL, float(beta))

    @classmethod
    def from_custom(cls, custom: CustomSource) -> "SourceFamily":
        return cls(Kind.CUSTOM, 0.0, custom)

    @property
    def limit_branch(self) -> bool:
        """True when the beta -> 0 limit forms are in use."""
        return self.kind in (Kind.LINEAR, Kind.QUADRATIC, Kind.EXPONENTIAL) and abs(self.beta) < SMALL_BETA

    @property
    def name(self) -> str:
        if self.kind is Kind.CUSTOM:
            return self.custom.name
        return self.kind.name.lower()

    # convenience bound versions
    def source(self, q):
        return source_value(self, q)

    def flow(self, t, h0):
        return flow(self, t, h0)

    def primitive(self, t, h0):
        return primitive(self, t, h0)

    def validity_time(self, h0) -> ExtendedReal:
        return validity_time(self, h0)


def _ret(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _check(arg, what: str):
    if np.any(~(np.asarray(arg) > VALIDITY_MARGIN)):
        raise OutOfValidity(f"{what} argument fell below {VALIDITY_MARGIN:g}: finite-time blow-up")


def _g(w):
    """((1 - w) log(1 - w) + w) / w**2, series near w = 0."""
    w = np.asarray(w, dtype=float)
    series = 0.5 + w * (1 / 6 + w * (1 / 12 + w * (1 / 20 + w * (1 / 30 + w / 42))))
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = ((1.0 - w) * np.log1p(-w) + w) / (w * w)
    return np.where(np.abs(w) < _G_SERIES, series, closed)


def source_value(f: SourceFamily, q):
    """s(q): 0, beta q, beta q**2 or exp(beta q)."""
    q = np.asarray(q, dtype=float)
    b = f.beta
    if f.kind is Kind.ZERO:
        return _ret(np.zeros_like(q))
    if f.kind is Kind.LINEAR:
        return _ret(b * q)
    if f.kind is Kind.QUADRATIC:
        return _ret(b * q * q)
    if f.kind is Kind.EXPONENTIAL:
        return _ret(np.exp(b * q))
    return _ret(f.custom.source(q))


def flow(f: SourceFamily, t, h0):
    """Exact flow map E(t, h0) of the equivalent ODE.

    Raises
    ------
    OutOfValidity
        If ``t`` reaches the blow-up time of the quadratic or exponential flow.
    """
    t = np.asarray(t, dtype=float)
    h = np.asarray(h0, dtype=float)
    b = f.beta
    kind = f.kind
    if kind is Kind.CUSTOM:
        return _custom_eval(f.custom.flow, t, h)
    if kind is Kind.ZERO or (f.limit_branch and kind is not Kind.EXPONENTIAL):
        return _ret(h + 0.0 * t)
    if kind is Kind.LINEAR:
        return _ret(h * np.exp(b * t))
    if kind is Kind.QUADRATIC:
        d = 1.0 - b * t * h
        _check(d, "quadratic denominator")
        return _ret(h / d)
    if f.limit_branch:
        return _ret(h + t)
    w = b * t * np.exp(b * h)
    _check(1.0 - w, "exponential logarithm")
    return _ret(h - np.log1p(-w) / b)


def primitive(f: SourceFamily, t, h0):
    """Time primitive F(t, h0) of the flow map, normalised by F(0, h0) = 0."""
    t = np.asarray(t, dtype=float)
    h = np.asarray(h0, dtype=float)
    b = f.beta
    kind = f.kind
    if kind is Kind.CUSTOM:
        return _custom_eval(f.custom.primitive, t, h)
    if kind is Kind.ZERO or (f.limit_branch and kind is not Kind.EXPONENTIAL):
        return _ret(t * h)
    if kind is Kind.LINEAR:
        return _ret(h * np.expm1(b * t) / b)
    if kind is Kind.QUADRATIC:
        z = b * t * h
        _check(1.0 - z, "quadratic denominator")
        return _ret(-np.log1p(-z) / b)
    if f.limit_branch:
        return _ret(t * h + 0.5 * t * t)
    c = np.exp(b * h)
    w = b * t * c
    _check(1.0 - w, "exponential logarithm")
    return _ret(h * t + c * t * t * _g(w))


def validity_time(f: SourceFamily, h0: float) -> ExtendedReal:
    """Supremum of the times for which ``flow(f, t, h0)`` stays finite."""
    b = f.beta
    if f.kind is Kind.CUSTOM:
        return f.custom.validity(h0) if f.custom.validity is not None else INFINITE
    if f.kind in (Kind.ZERO, Kind.LINEAR) or f.limit_branch:
        return INFINITE
    if f.kind is Kind.QUADRATIC:
        return Finite(1.0 / (b * h0)) if b * h0 > 0 else INFINITE
    return Finite(math.exp(-b * h0) / b) if b > 0 else INFINITE


def reciprocal_primitive(f: SourceFamily, q):
    """G(q) with G' = 1/s, so that G(flow(t, h)) - G(h) = t.

    For the linear family the logarithm is taken of ``|q|``, valid on
    sign-definite data. Not defined for the zero family.
    """
    q = np.asarray(q, dtype=float)
    b = f.beta
    if f.kind is Kind.LINEAR:
        return _ret(np.log(np.abs(q)) / b)
    if f.kind is Kind.QUADRATIC:
        return _ret(-1.0 / (b * q))
    if f.kind is Kind.EXPONENTIAL:
        return _ret(-np.exp(-b * q) / b)
    if f.kind is Kind.CUSTOM and f.custom.reciprocal_primitive is not None:
        return _ret(f.custom.reciprocal_primitive(q))
    raise ValueError(f"no reciprocal primitive for the {f.name} family")


def _custom_eval(fn, t, h):
    with np.errstate(all="ignore"):
        out = np.asarray(fn(t, h), dtype=float)
    if not np.all(np.isfinite(out)):
        raise OutOfValidity("custom closed form returned a non-finite value")
    return _ret(out)
