# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi kernel; same contract as ``urlab._jacobi_py``."""
from libc.math cimport sqrt, fabs
cimport cython

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex conj(double complex)
    double creal(double complex)


cdef double _max_offdiag(double complex[:, ::1] a) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0], i, j
    cdef double m = 0.0, x
    for i in range(n):
        for j in range(n):
            if i != j:
                x = cabs(a[i, j])
                if x > m:
                    m = x
    return m


def jacobi_sweeps(double complex[:, ::1] a, double complex[:, ::1] v, double tol, int max_sweeps):
    cdef Py_ssize_t n = a.shape[0], p, q, k
    cdef double mag, app, aqq, tau, t, c, s, off
    cdef double complex phase, gqp, gqq, xp, xq
    cdef int sweeps = 0
    with nogil:
        off = _max_offdiag(a)
        while off > tol and sweeps < max_sweeps:
            for p in range(n - 1):
                for q in range(p + 1, n):
                    mag = cabs(a[p, q])
                    if mag == 0.0:
                        continue
                    phase = a[p, q] / mag
                    app = creal(a[p, p])
                    aqq = creal(a[q, q])
                    tau = (aqq - app) / (2.0 * mag)
                    if tau >= 0.0:
                        t = 1.0 / (fabs(tau) + sqrt(1.0 + tau * tau))
                    else:
                        t = -1.0 / (fabs(tau) + sqrt(1.0 + tau * tau))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    gqp = -s * conj(phase)
                    gqq = c * conj(phase)
                    for k in range(n):
                        xp = a[k, p]
                        xq = a[k, q]
                        a[k, p] = c * xp + gqp * xq
                        a[k, q] = s * xp + gqq * xq
                    for k in range(n):
                        xp = a[p, k]
                        xq = a[q, k]
                        a[p, k] = c * xp + conj(gqp) * xq
                        a[q, k] = s * xp + conj(gqq) * xq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = creal(a[p, p])
                    a[q, q] = creal(a[q, q])
                    for k in range(n):
                        xp = v[k, p]
                        xq = v[k, q]
                        v[k, p] = c * xp + gqp * xq
                        v[k, q] = s * xp + gqq * xq
            sweeps += 1
            off = _max_offdiag(a)
    return sweeps, off
