# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled field kernel: point-source summation with Kahan compensation.

Compensated accumulation keeps the result within a few ulp of the exact
sum, so the compiled and pure-NumPy backends agree to ~1e-15 relative.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt


def pressure_sum(double[:, ::1] sources, double[::1] w_re, double[::1] w_im,
                 double[:, ::1] points, double wavenumber):
    """Sum of w_n * exp(i*k*d_n)/d_n over sources, for each observation point.

    Mirrors ``domewave._kernels._reference.pressure_sum``.
    """
    cdef Py_ssize_t n_src = sources.shape[0]
    cdef Py_ssize_t n_pts = points.shape[0]
    out = np.empty(n_pts, dtype=np.complex128)
    cdef double complex[::1] out_v = out
    cdef Py_ssize_t i, j
    cdef double dx, dy, dz, dist, phase, cr, sr, t_re, t_im
    cdef double acc_re, acc_im, comp_re, comp_im, y, t
    cdef bint singular = False

    with nogil:
        for j in range(n_pts):
            acc_re = acc_im = comp_re = comp_im = 0.0
            for i in range(n_src):
                dx = points[j, 0] - sources[i, 0]
                dy = points[j, 1] - sources[i, 1]
                dz = points[j, 2] - sources[i, 2]
                dist = sqrt(dx * dx + dy * dy + dz * dz)
                if dist == 0.0:
                    singular = True
                    break
                phase = wavenumber * dist
                cr = cos(phase) / dist
                sr = sin(phase) / dist
                t_re = w_re[i] * cr - w_im[i] * sr
                t_im = w_re[i] * sr + w_im[i] * cr
                # Kahan compensation, real then imaginary
                y = t_re - comp_re
                t = acc_re + y
                comp_re = (t - acc_re) - y
                acc_re = t
                y = t_im - comp_im
                t = acc_im + y
                comp_im = (t - acc_im) - y
                acc_im = t
            if singular:
                break
            out_v[j] = acc_re + 1j * acc_im
    if singular:
        raise ValueError("zero source-observer distance")
    return out
