"""Pure-Python (numpy) implementation of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable, for custom
source families, and as the reference the benchmark compares against. The
algorithms match the compiled version step for step; only the loop order
differs (bisection runs in lockstep over all query points).
"""
from __future__ import annotations

import math

import numpy as np

from . import _codes as C
from .errors import OutOfValidity
from .source_terms import Kind, flow, primitive, source_value

NAME = "python"


def _scan_nodes(lo, hi, n):
    return np.linspace(lo, hi, n)


def _root_count(d):
    """Classify the sign pattern of residuals ``d`` on consecutive scan nodes.

    Returns ``(status, kind, i)`` where ``kind`` is ``"node"`` (exact zero at
    node ``i``) or ``"bracket"`` (sign change between nodes ``i`` and ``i+1``).
    """
    s = np.sign(d)
    nz = np.flatnonzero(s)
    changes = np.flatnonzero(s[nz[1:]] != s[nz[:-1]]) if nz.size > 1 else np.empty(0, int)
    zeros = np.flatnonzero(s == 0)
    if changes.size > 1:
        return C.MULTIVALUED, None, -1
    if changes.size == 1:
        i, j = nz[changes[0]], nz[changes[0] + 1]
        if j > i + 1:
            return C.OK, "node", i + 1
        return C.OK, "bracket", i
    if zeros.size == 1:
        return C.OK, "node", zeros[0]
    if zeros.size > 1:
        return C.MULTIVALUED, None, -1
    return C.BRACKET_NOT_FOUND, None, -1


def solve_generic(phi, lo, hi, xs, abs_tol, res_tol, max_iter, scan_points):
    """Find ``y`` with ``phi(y) = x`` for every ``x`` in ``xs``.

    ``phi`` maps an array of foot points to ``y + F(t, h0(y))`` and may raise
    :class:`OutOfValidity`. Returns ``(y, residual, status)`` arrays.
    """
    xs = np.asarray(xs, dtype=float)
    n = xs.size
    y = np.full(n, np.nan)
    res = np.full(n, np.nan)
    status = np.zeros(n, dtype=np.int64)
    a = np.zeros(n)
    b = np.zeros(n)
    ra = np.zeros(n)
    rb = np.zeros(n)
    active = np.zeros(n, dtype=bool)

    nodes = _scan_nodes(lo, hi, scan_points)
    try:
        phis = phi(nodes)
    except OutOfValidity:
        status[:] = C.OUT_OF_VALIDITY
        return y, res, status
    center, half = 0.5 * (lo + hi), 0.5 * (hi - lo)

    for k in range(n):
        x = xs[k]
        st, kind, i = _root_count(phis - x)
        knodes = nodes
        expansion = 0
        while st == C.BRACKET_NOT_FOUND and expansion < C.MAX_EXPANSIONS:
            expansion += 1
            w = half * 2.0 ** expansion
            knodes = _scan_nodes(center - w, center + w, scan_points)
            try:
                st, kind, i = _root_count(phi(knodes) - x)
            except OutOfValidity:
                st = C.OUT_OF_VALIDITY
        status[k] = st
        if st != C.OK:
            continue
        if kind == "node":
            y[k] = knodes[i]
            res[k] = 0.0
            continue
        a[k], b[k] = knodes[i], knodes[i + 1]
        if expansion:
            ra[k], rb[k] = phi(np.array([a[k], b[k]])) - x
        else:
            ra[k], rb[k] = phis[i] - x, phis[i + 1] - x
        active[k] = True

    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        m = a[idx] + 0.5 * (b[idx] - a[idx])
        try:
            rm = phi(m) - xs[idx]
        except OutOfValidity:
            status[idx] = C.OUT_OF_VALIDITY
            active[idx] = False
            break
        half_w = 0.5 * (b[idx] - a[idx])
        stop = (rm == 0) | ((half_w <= abs_tol) & (np.abs(rm) <= res_tol))
        done = idx[stop]
        y[done] = m[stop]
        res[done] = np.abs(rm[stop])
        active[done] = False
        go = ~stop
        left = go & ((rm < 0) == (ra[idx] < 0))
        right = go & ~left
        a[idx[left]] = m[left]
        ra[idx[left]] = rm[left]
        b[idx[right]] = m[right]
        rb[idx[right]] = rm[right]

    for k in np.flatnonzero(active):
        if abs(ra[k]) <= abs(rb[k]):
            y[k], res[k] = a[k], abs(ra[k])
        else:
            y[k], res[k] = b[k], abs(rb[k])
        if not res[k] <= res_tol:
            status[k] = C.NO_CONVERGENCE
    return y, res, status


def solve_points(family, ic, xs, t, cfg):
    """Foot points and solution values of the characteristic relation at time ``t``.

    Returns ``(q, y, residual, status)`` arrays aligned with ``xs``.
    """
    xs = np.asarray(xs, dtype=float)
    if t == 0.0:
        return (np.asarray(ic.evaluate(xs), dtype=float).reshape(xs.shape), xs.copy(),
                np.zeros_like(xs), np.zeros(xs.shape, dtype=np.int64))

    def phi(yy):
        return yy + primitive(family, t, ic.evaluate(yy))

    lo, hi = ic.domain
    span = cfg.search_margin * ic.length
    y, res, status = solve_generic(phi, lo - span, hi + span, xs, cfg.abs_tol, cfg.residual_tol,
                                   cfg.max_iter, cfg.scan_points)
    q = np.full(xs.shape, np.nan)
    ok = status == C.OK
    if np.any(ok):
        try:
            q[ok] = flow(family, t, ic.evaluate(y[ok]))
        except OutOfValidity:
            status[ok] = C.OUT_OF_VALIDITY
    return q, y, res, status


def _rhs(family):
    k, b = family.kind, family.beta
    if k is Kind.ZERO:
        return lambda q: 0.0
    if k is Kind.LINEAR:
        return lambda q: b * q
    if k is Kind.QUADRATIC:
        return lambda q: b * q * q
    if k is Kind.EXPONENTIAL:
        exp = math.exp
        return lambda q: exp(b * q) if b * q < 700.0 else math.inf
    return lambda q: float(source_value(family, q))


def _steps(t, step):
    n = max(1, math.ceil(t / step))
    return n, t / n


def rk4_characteristic(family, y, h0, t, step):
    """Classical RK4 on ``x' = q, q' = s(q)`` from ``(y, h0)``; returns ``(x, q, status)``."""
    if t == 0.0:
        return y, h0, C.OK
    s = _rhs(family)
    n, h = _steps(t, step)
    x, q = float(y), float(h0)
    half, sixth = 0.5 * h, h / 6.0
    for _ in range(n):
        k1 = s(q)
        q2 = q + half * k1
        k2 = s(q2)
        q3 = q + half * k2
        k3 = s(q3)
        q4 = q + h * k3
        k4 = s(q4)
        x += sixth * (q + 2.0 * q2 + 2.0 * q3 + q4)
        q += sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not abs(q) <= C.BLOW_UP_THRESHOLD:
            return x, q, C.BLOW_UP
    return x, q, C.OK


def rk4_equivalent(family, h0, t, step):
    """Classical RK4 on ``q' = s(q)`` from ``h0``; returns ``(q, status)``."""
    if t == 0.0:
        return h0, C.OK
    s = _rhs(family)
    n, h = _steps(t, step)
    q = float(h0)
    half, sixth = 0.5 * h, h / 6.0
    for _ in range(n):
        k1 = s(q)
        k2 = s(q + half * k1)
        k3 = s(q + half * k2)
        k4 = s(q + h * k3)
        q += sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not abs(q) <= C.BLOW_UP_THRESHOLD:
            return q, C.BLOW_UP
    return q, C.OK
