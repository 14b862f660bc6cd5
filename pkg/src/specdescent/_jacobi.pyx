# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled one-sided Jacobi kernel.

Cyclic sweeps of plane rotations orthogonalize the columns of a
column-major m-by-r matrix in place while the same rotations accumulate
into a column-major r-by-r matrix V, so that on return B_in = B_out @ V.T
with the columns of B_out mutually orthogonal.
"""

from libc.math cimport fabs, sqrt
from libc.stdlib cimport free, malloc


def jacobi_sweeps(double[::1] b, Py_ssize_t m, Py_ssize_t r,
                  double[::1] v, double tol, int max_sweeps):
    """Run cyclic one-sided Jacobi sweeps in place.

    b: column-major m*r buffer, rotated in place.
    v: column-major r*r buffer (identity on entry), accumulates rotations.
    tol: relative off-diagonal threshold |<bp,bq>| <= tol*|bp||bq|.
    Returns (sweeps_done, converged).
    """
    cdef Py_ssize_t p, q, i, sweeps
    cdef Py_ssize_t rotations
    cdef double app, aqq, apq, tau, t, c, s, x, y
    cdef bint converged = False
    cdef double *norms

    if b.shape[0] != m * r or v.shape[0] != r * r:
        raise ValueError("buffer sizes do not match m, r")
    if r < 2:
        return 0, True

    norms = <double *> malloc(r * sizeof(double))
    if norms == NULL:
        raise MemoryError()

    sweeps = 0
    try:
        with nogil:
            while sweeps < max_sweeps:
                # refresh cached column norms to kill update drift
                for q in range(r):
                    x = 0.0
                    for i in range(m):
                        y = b[q * m + i]
                        x += y * y
                    norms[q] = x

                rotations = 0
                for p in range(r - 1):
                    for q in range(p + 1, r):
                        app = norms[p]
                        aqq = norms[q]
                        apq = 0.0
                        for i in range(m):
                            apq += b[p * m + i] * b[q * m + i]
                        if app * aqq <= 0.0 or fabs(apq) <= tol * sqrt(app * aqq):
                            continue
                        rotations += 1
                        tau = (aqq - app) / (2.0 * apq)
                        if tau >= 0.0:
                            t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                        else:
                            t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                        c = 1.0 / sqrt(1.0 + t * t)
                        s = t * c
                        for i in range(m):
                            x = b[p * m + i]
                            y = b[q * m + i]
                            b[p * m + i] = c * x - s * y
                            b[q * m + i] = s * x + c * y
                        for i in range(r):
                            x = v[p * r + i]
                            y = v[q * r + i]
                            v[p * r + i] = c * x - s * y
                            v[q * r + i] = s * x + c * y
                        norms[p] = app - t * apq
                        norms[q] = aqq + t * apq
                sweeps += 1
                if rotations == 0:
                    converged = True
                    break
    finally:
        free(norms)

    return sweeps, converged
