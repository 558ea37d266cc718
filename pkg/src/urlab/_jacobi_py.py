"""Pure-Python cyclic Jacobi kernel for complex Hermitian matrices.

Fallback for :mod:`urlab._jacobi_ext`; both expose the same ``jacobi_sweeps``.
"""
import math

import numpy as np


def _max_offdiag(a):
    n = a.shape[0]
    if n < 2:
        return 0.0
    off = np.abs(a - np.diag(np.diag(a)))
    return float(off.max())


def jacobi_sweeps(a, v, tol, max_sweeps):
    """Diagonalize Hermitian ``a`` in place by cyclic complex Jacobi rotations.

    ``v`` (normally the identity) accumulates the rotations, so on return
    ``a_original = v @ diag(a) @ v^H``. Sweeping stops once the largest
    off-diagonal modulus is ``<= tol`` or after ``max_sweeps`` sweeps.

    Returns ``(sweeps, off)``: sweeps performed and final off-diagonal max.
    """
    n = a.shape[0]
    off = _max_offdiag(a)
    sweeps = 0
    while off > tol and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]] in the (p, q) plane
                gqp = -s * phase.conjugate()
                gqq = c * phase.conjugate()
                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p + gqp * col_q
                a[:, q] = s * col_p + gqq * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p + gqp.conjugate() * row_q
                a[q, :] = s * row_p + gqq.conjugate() * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp + gqp * vq
                v[:, q] = s * vp + gqq * vq
        sweeps += 1
        off = _max_offdiag(a)
    return sweeps, off
