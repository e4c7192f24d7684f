# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the theta-series and AGM inner loops."""
import numpy as np
from libc.math cimport sin, cos, exp, sqrt, asin, fabs, pow


def theta1_derivs(v, double q, int nterms):
    cdef const double complex[::1] vv = np.ascontiguousarray(v, dtype=np.complex128)
    cdef Py_ssize_t n = vv.shape[0], i
    cdef int k
    out = np.empty((4, n), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double[64] coef
    cdef double complex z, zi, z2, zi2, p, pinv, sn, cs
    cdef double complex s0, s1, s2, s3
    cdef double r, odd, c
    if nterms > 64:
        nterms = 64
    for k in range(nterms):
        coef[k] = 2.0 * pow(q, (k + 0.5) * (k + 0.5))
        if k % 2:
            coef[k] = -coef[k]
    for i in range(n):
        r = exp(-vv[i].imag)
        z = r * cos(vv[i].real) + 1j * r * sin(vv[i].real)
        zi = 1.0 / z
        z2 = z * z
        zi2 = zi * zi
        p = z
        pinv = zi
        s0 = 0
        s1 = 0
        s2 = 0
        s3 = 0
        for k in range(nterms):
            c = coef[k]
            odd = 2 * k + 1
            sn = (p - pinv) * (-0.5j)
            cs = (p + pinv) * 0.5
            s0 = s0 + c * sn
            s1 = s1 + (c * odd) * cs
            s2 = s2 - (c * odd * odd) * sn
            s3 = s3 - (c * odd * odd * odd) * cs
            p = p * z2
            pinv = pinv * zi2
        o[0, i] = s0
        o[1, i] = s1
        o[2, i] = s2
        o[3, i] = s3
    return out


def sn_agm(x, double m):
    cdef const double[::1] xx = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xx.shape[0], i
    cdef double[41] a
    cdef double[41] c
    cdef double b = sqrt(1.0 - m), an, bn, phi
    cdef int N = 0, j
    a[0] = 1.0
    c[0] = sqrt(m)
    while fabs(c[N]) > 1e-16 and N < 39:
        an = 0.5 * (a[N] + b)
        bn = sqrt(a[N] * b)
        c[N + 1] = 0.5 * (a[N] - b)
        a[N + 1] = an
        b = bn
        N += 1
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double scale = pow(2.0, N) * a[N]
    for i in range(n):
        phi = scale * xx[i]
        for j in range(N, 0, -1):
            phi = 0.5 * (phi + asin(c[j] / a[j] * sin(phi)))
        o[i] = sin(phi)
    return out
