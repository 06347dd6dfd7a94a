# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 shooting kernel.  Mirrors ``_pykernel`` line for line."""

from libc.math cimport sin, floor, fabs, pow, isfinite, M_PI

import numpy as np


cdef inline double weval(int kind, double eps, double da, double db,
                         const double[::1] par, double x) noexcept nogil:
    cdef double y = x / eps
    cdef double v, t, f
    cdef Py_ssize_t n, i
    if kind == 0:
        v = par[0]
    elif kind == 1:
        v = par[0] + par[1] * sin(2.0 * M_PI * par[2] * y)
    elif kind == 2:
        n = par.shape[0]
        f = y - floor(y)
        i = <Py_ssize_t>(f * n)
        if i >= n:
            i = n - 1
        v = par[i]
    else:
        n = par.shape[0] - 2
        t = (y - par[0]) / (par[1] - par[0]) * (n - 1)
        if t <= 0.0:
            v = par[2]
        elif t >= n - 1:
            v = par[n + 1]
        else:
            i = <Py_ssize_t>floor(t)
            if i >= n - 1:
                i = n - 2
            t -= i
            v = (1.0 - t) * par[2 + i] + t * par[3 + i]
    return v + da + db * x


cdef inline double phi(double z, double e) noexcept nogil:
    # signed power |z|^e sign(z)
    if z > 0.0:
        return pow(z, e)
    elif z < 0.0:
        return -pow(-z, e)
    return 0.0


cdef inline double wrhs(double u, double alpha, double beta, double mv, double nv,
                        double pm1) noexcept nogil:
    if u > 0.0:
        return -alpha * mv * pow(u, pm1)
    elif u < 0.0:
        return beta * nv * pow(-u, pm1)
    return 0.0


cdef inline int sgn(double z) noexcept nogil:
    return (z > 0.0) - (z < 0.0)


def shoot(double p, double alpha, double beta,
          int mk, double meps, double mda, double mdb, const double[::1] mpar,
          int nk, double neps, double nda, double ndb, const double[::1] npar,
          double x0, double x1, long nsteps, double u0, double w0,
          long stop_events=-1, double[::1] us=None, double[::1] ws=None):
    """Integrate u' = phi_q(w), w' = -alpha m (u+)^{p-1} + beta n (u-)^{p-1}.

    Returns ``(u, w, u_changes, w_changes, steps_taken, finite)``.  When
    ``stop_events >= 0`` integration stops as soon as the number of sign
    changes of u plus those of w reaches it.  ``us``/``ws`` (length
    nsteps + 1) receive the samples when given.
    """
    cdef double h = (x1 - x0) / nsteps
    cdef double q = 1.0 / (p - 1.0)
    cdef double pm1 = p - 1.0
    cdef double u = u0, w = w0, x, xm, xe
    cdef double m0, mh, m1, n0, nh, n1
    cdef double k1u, k1w, k2u, k2w, k3u, k3w, k4u, k4w, ut, wt
    cdef int su = sgn(u0), sw = sgn(w0), s
    cdef long uc = 0, wc = 0, i, taken = 0
    cdef bint store = us is not None
    cdef bint finite = True
    cdef bint m_pw = mk == 2, n_pw = nk == 2
    if store:
        us[0] = u0
        ws[0] = w0
    with nogil:
        for i in range(nsteps):
            x = x0 + i * h
            xm = x + 0.5 * h
            xe = x0 + (i + 1) * h
            if m_pw:
                m0 = weval(mk, meps, mda, mdb, mpar, xm)
                mh = m0
                m1 = m0
            else:
                m0 = weval(mk, meps, mda, mdb, mpar, x)
                mh = weval(mk, meps, mda, mdb, mpar, xm)
                m1 = weval(mk, meps, mda, mdb, mpar, xe)
            if n_pw:
                n0 = weval(nk, neps, nda, ndb, npar, xm)
                nh = n0
                n1 = n0
            else:
                n0 = weval(nk, neps, nda, ndb, npar, x)
                nh = weval(nk, neps, nda, ndb, npar, xm)
                n1 = weval(nk, neps, nda, ndb, npar, xe)
            k1u = phi(w, q)
            k1w = wrhs(u, alpha, beta, m0, n0, pm1)
            ut = u + 0.5 * h * k1u
            wt = w + 0.5 * h * k1w
            k2u = phi(wt, q)
            k2w = wrhs(ut, alpha, beta, mh, nh, pm1)
            ut = u + 0.5 * h * k2u
            wt = w + 0.5 * h * k2w
            k3u = phi(wt, q)
            k3w = wrhs(ut, alpha, beta, mh, nh, pm1)
            ut = u + h * k3u
            wt = w + h * k3w
            k4u = phi(wt, q)
            k4w = wrhs(ut, alpha, beta, m1, n1, pm1)
            u = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
            w = w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
            taken = i + 1
            if not (isfinite(u) and isfinite(w)):
                finite = False
                break
            if store:
                us[i + 1] = u
                ws[i + 1] = w
            s = sgn(u)
            if s != 0:
                if su != 0 and s != su:
                    uc += 1
                su = s
            s = sgn(w)
            if s != 0:
                if sw != 0 and s != sw:
                    wc += 1
                sw = s
            if stop_events >= 0 and uc + wc >= stop_events:
                break
    return u, w, uc, wc, taken, finite
