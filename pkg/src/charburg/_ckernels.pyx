# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: foot-point scan + bisection and the RK4 oracle.

Mirrors ``_pykernels`` for the four built-in source families and initial
condition kinds; custom families are rejected with ``NotImplementedError``.
"""
import numpy as np

from libc.math cimport exp, expm1, fabs, log1p, sin, sqrt, ceil, INFINITY

NAME = "cython"

cdef enum:
    OK = 0
    OUT_OF_VALIDITY = 1
    MULTIVALUED = 2
    BRACKET_NOT_FOUND = 3
    NO_CONVERGENCE = 4
    BLOW_UP = 5
    MAX_EXPANSIONS = 8

cdef double SMALL_BETA = 1e-8
cdef double MARGIN = 1e-14
cdef double G_SERIES = 1e-3
cdef double BLOW_UP_THRESHOLD = 1e12

# family codes: 0 zero, 1 linear, 2 quadratic, 3 exponential


cdef struct Family:
    int kind
    double beta
    bint limit


cdef struct IC:
    int kind
    double p0, p1, p2, p3
    const double* bx
    const double* bv
    Py_ssize_t nb
    double lo, hi


cdef inline double ic_eval(const IC* ic, double x) noexcept nogil:
    cdef double xc = x, d, w, slope
    cdef Py_ssize_t j
    if xc < ic.lo:
        xc = ic.lo
    elif xc > ic.hi:
        xc = ic.hi
    if ic.kind == 0:
        return ic.p0 * xc + ic.p1
    if ic.kind == 2:
        return ic.p0 * sin(ic.p1 * xc)
    if ic.kind == 3:
        d = ic.p2 - xc
        w = d / sqrt(d * d + ic.p3)
        return ic.p0 * (1.0 - w) / 2.0 + ic.p1 * (1.0 + w) / 2.0
    # piecewise linear, numpy.interp semantics
    if xc <= ic.bx[0]:
        return ic.bv[0]
    if xc >= ic.bx[ic.nb - 1]:
        return ic.bv[ic.nb - 1]
    j = 0
    while ic.bx[j + 1] <= xc:
        j += 1
    slope = (ic.bv[j + 1] - ic.bv[j]) / (ic.bx[j + 1] - ic.bx[j])
    return slope * (xc - ic.bx[j]) + ic.bv[j]


cdef inline double g_series(double w) noexcept nogil:
    if fabs(w) < G_SERIES:
        return 0.5 + w * (1.0 / 6 + w * (1.0 / 12 + w * (1.0 / 20 + w * (1.0 / 30 + w / 42))))
    return ((1.0 - w) * log1p(-w) + w) / (w * w)


cdef inline int fam_primitive(const Family* f, double t, double h, double* out) noexcept nogil:
    cdef double b = f.beta, z, c, w
    if f.kind == 0 or (f.limit and f.kind != 3):
        out[0] = t * h
        return OK
    if f.kind == 1:
        out[0] = h * expm1(b * t) / b
        return OK
    if f.kind == 2:
        z = b * t * h
        if not (1.0 - z > MARGIN):
            return OUT_OF_VALIDITY
        out[0] = -log1p(-z) / b
        return OK
    if f.limit:
        out[0] = t * h + 0.5 * t * t
        return OK
    c = exp(b * h)
    w = b * t * c
    if not (1.0 - w > MARGIN):
        return OUT_OF_VALIDITY
    out[0] = h * t + c * t * t * g_series(w)
    return OK


cdef inline int fam_flow(const Family* f, double t, double h, double* out) noexcept nogil:
    cdef double b = f.beta, d, w
    if f.kind == 0 or (f.limit and f.kind != 3):
        out[0] = h
        return OK
    if f.kind == 1:
        out[0] = h * exp(b * t)
        return OK
    if f.kind == 2:
        d = 1.0 - b * t * h
        if not (d > MARGIN):
            return OUT_OF_VALIDITY
        out[0] = h / d
        return OK
    if f.limit:
        out[0] = h + t
        return OK
    w = b * t * exp(b * h)
    if not (1.0 - w > MARGIN):
        return OUT_OF_VALIDITY
    out[0] = h - log1p(-w) / b
    return OK


cdef inline double fam_source(const Family* f, double q) noexcept nogil:
    if f.kind == 0:
        return 0.0
    if f.kind == 1:
        return f.beta * q
    if f.kind == 2:
        return f.beta * q * q
    if f.beta * q < 700.0:
        return exp(f.beta * q)
    return INFINITY


cdef inline int phi(const Family* f, const IC* ic, double t, double y, double* out) noexcept nogil:
    cdef double F
    cdef int st = fam_primitive(f, t, ic_eval(ic, y), &F)
    out[0] = y + F
    return st


cdef inline double sgn(double v) noexcept nogil:
    return (v > 0) - (v < 0)


cdef int scan(const Family* f, const IC* ic, double t, double x, double lo, double hi, int n,
              const double* cached, double* a, double* b, double* ra, double* rb,
              double* ynode) noexcept nogil:
    """Classify sign changes of phi - x on n uniform nodes of [lo, hi].

    Returns OK with either a bracket (a, b, ra, rb) or an exact node
    (ynode set, a is NaN-free but unused), MULTIVALUED, BRACKET_NOT_FOUND or
    OUT_OF_VALIDITY.
    """
    cdef double step = (hi - lo) / (n - 1)
    cdef double node, d, s, prev_s = 0.0, prev_d = 0.0, prev_node = 0.0
    cdef double pv
    cdef Py_ssize_t i, prev_i = -1, first_zero = -1, ci = -1, cj = -1
    cdef int changes = 0, zeros = 0
    cdef double cd_i = 0.0, cd_j = 0.0, cn_i = 0.0, cn_j = 0.0, zero_node = 0.0
    for i in range(n):
        node = i * step + lo if i < n - 1 else hi
        if cached != NULL:
            pv = cached[i]
        elif phi(f, ic, t, node, &pv) != OK:
            return OUT_OF_VALIDITY
        d = pv - x
        s = sgn(d)
        if s == 0:
            zeros += 1
            if first_zero < 0:
                first_zero = i
                zero_node = node
            continue
        if prev_s != 0 and s != prev_s:
            changes += 1
            if changes > 1:
                return MULTIVALUED
            ci, cj = prev_i, i
            cd_i, cd_j = prev_d, d
            cn_i, cn_j = prev_node, node
        prev_s, prev_i, prev_d, prev_node = s, i, d, node
    if changes == 1:
        if cj > ci + 1:
            i = ci + 1
            ynode[0] = i * step + lo if i < n - 1 else hi
            return -1
        a[0], b[0], ra[0], rb[0] = cn_i, cn_j, cd_i, cd_j
        return OK
    if zeros == 1:
        ynode[0] = zero_node
        return -1
    if zeros > 1:
        return MULTIVALUED
    return BRACKET_NOT_FOUND


cdef int solve_one(const Family* f, const IC* ic, double t, double x, double lo, double hi,
                   const double* cached, double abs_tol, double res_tol, int max_iter, int n,
                   double* y_out, double* r_out) noexcept nogil:
    cdef double a = 0, b = 0, ra = 0, rb = 0, ynode = 0, m, rm, half, center, w
    cdef int st, k, it
    st = scan(f, ic, t, x, lo, hi, n, cached, &a, &b, &ra, &rb, &ynode)
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    k = 0
    while st == BRACKET_NOT_FOUND and k < MAX_EXPANSIONS:
        k += 1
        w = half * 2.0 ** k
        st = scan(f, ic, t, x, center - w, center + w, n, NULL, &a, &b, &ra, &rb, &ynode)
    if st == -1:
        y_out[0] = ynode
        r_out[0] = 0.0
        return OK
    if st != OK:
        return st
    for it in range(max_iter):
        m = a + 0.5 * (b - a)
        if phi(f, ic, t, m, &rm) != OK:
            return OUT_OF_VALIDITY
        rm = rm - x
        half = 0.5 * (b - a)
        if rm == 0 or (half <= abs_tol and fabs(rm) <= res_tol):
            y_out[0] = m
            r_out[0] = fabs(rm)
            return OK
        if (rm < 0) == (ra < 0):
            a, ra = m, rm
        else:
            b, rb = m, rm
    if fabs(ra) <= fabs(rb):
        y_out[0], r_out[0] = a, fabs(ra)
    else:
        y_out[0], r_out[0] = b, fabs(rb)
    if not (r_out[0] <= res_tol):
        return NO_CONVERGENCE
    return OK


cdef Family make_family(family) except *:
    cdef Family f
    kind = int(family.kind)
    if kind > 3:
        raise NotImplementedError("compiled kernels cover the built-in source families only")
    f.kind = kind
    f.beta = float(family.beta)
    f.limit = kind != 0 and fabs(f.beta) < SMALL_BETA
    return f


def solve_points(family, ic, xs, double t, cfg):
    """Foot points and solution values at time ``t``; see ``_pykernels.solve_points``."""
    cdef Family f = make_family(family)
    cdef IC c
    kind, p, bx_arr, bv_arr, lo, hi = ic.pack()
    cdef const double[::1] bx = np.ascontiguousarray(bx_arr, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(bv_arr, dtype=np.float64)
    c.kind = kind
    c.p0, c.p1, c.p2, c.p3 = p[0], p[1], p[2], p[3]
    c.bx = &bx[0]
    c.bv = &bv[0]
    c.nb = bx.shape[0]
    c.lo, c.hi = lo, hi

    xarr = np.ascontiguousarray(xs, dtype=np.float64).ravel()
    cdef const double[::1] xv = xarr
    cdef Py_ssize_t npts = xv.shape[0], i
    q_arr = np.full(npts, np.nan)
    y_arr = np.full(npts, np.nan)
    r_arr = np.full(npts, np.nan)
    s_arr = np.zeros(npts, dtype=np.int64)
    cdef double[::1] q = q_arr, y = y_arr, r = r_arr
    cdef long long[::1] st = s_arr
    cdef int n = cfg.scan_points, max_iter = cfg.max_iter, code = OK
    cdef double abs_tol = cfg.abs_tol, res_tol = cfg.residual_tol
    cdef double span = cfg.search_margin * (c.hi - c.lo)
    cdef double slo = c.lo - span, shi = c.hi + span, node, hv
    cdef double[::1] cache = np.empty(n)
    cdef bint scan_ok = True

    with nogil:
        if t == 0.0:
            for i in range(npts):
                y[i] = xv[i]
                q[i] = ic_eval(&c, xv[i])
                r[i] = 0.0
        else:
            for i in range(n):
                node = i * ((shi - slo) / (n - 1)) + slo if i < n - 1 else shi
                if phi(&f, &c, t, node, &cache[i]) != OK:
                    scan_ok = False
                    break
            for i in range(npts):
                if not scan_ok:
                    st[i] = OUT_OF_VALIDITY
                    continue
                code = solve_one(&f, &c, t, xv[i], slo, shi, &cache[0], abs_tol, res_tol,
                                 max_iter, n, &y[i], &r[i])
                if code == OK:
                    code = fam_flow(&f, t, ic_eval(&c, y[i]), &q[i])
                st[i] = code
    return q_arr, y_arr, r_arr, s_arr


def rk4_characteristic(family, double y, double h0, double t, double step):
    """Classical RK4 on ``x' = q, q' = s(q)``; returns ``(x, q, status)``."""
    cdef Family f = make_family(family)
    cdef long n, i
    cdef double h, half, sixth, x = y, q = h0, k1, k2, k3, k4, q2, q3, q4
    if t == 0.0:
        return y, h0, OK
    n = <long>ceil(t / step)
    if n < 1:
        n = 1
    h = t / n
    half = 0.5 * h
    sixth = h / 6.0
    with nogil:
        for i in range(n):
            k1 = fam_source(&f, q)
            q2 = q + half * k1
            k2 = fam_source(&f, q2)
            q3 = q + half * k2
            k3 = fam_source(&f, q3)
            q4 = q + h * k3
            k4 = fam_source(&f, q4)
            x += sixth * (q + 2.0 * q2 + 2.0 * q3 + q4)
            q += sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not (fabs(q) <= BLOW_UP_THRESHOLD):
                with gil:
                    return x, q, BLOW_UP
    return x, q, OK


def rk4_equivalent(family, double h0, double t, double step):
    """Classical RK4 on ``q' = s(q)``; returns ``(q, status)``."""
    cdef Family f = make_family(family)
    cdef long n, i
    cdef double h, half, sixth, q = h0, k1, k2, k3, k4
    if t == 0.0:
        return h0, OK
    n = <long>ceil(t / step)
    if n < 1:
        n = 1
    h = t / n
    half = 0.5 * h
    sixth = h / 6.0
    with nogil:
        for i in range(n):
            k1 = fam_source(&f, q)
            k2 = fam_source(&f, q + half * k1)
            k3 = fam_source(&f, q + half * k2)
            k4 = fam_source(&f, q + h * k3)
            q += sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not (fabs(q) <= BLOW_UP_THRESHOLD):
                with gil:
                    return q, BLOW_UP
    return q, OK
