# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: prefix periodicity walk, discrete tracking loop, RK4 tracker.

Arithmetic mirrors tbpwalk._kernels_py exactly (same operations, same order,
compiled with -ffp-contract=off) so both backends return bit-identical output.
"""

from libc.math cimport fabs, sqrt, pow

import numpy as np

BACKEND_NAME = "compiled"


cdef inline double _fst(double e1, double e2, double r, double h) nogil:
    cdef double d = r * h
    cdef double d0 = d * h
    cdef double y = e1 + h * e2
    cdef double ay = fabs(y)
    cdef double a, half, q
    if ay < d0:
        a = e2 + y / h
    else:
        half = (sqrt(d * d + 8.0 * r * ay) - d) / 2.0
        a = e2 + half if y > 0 else e2 - half
    if fabs(a) <= d:
        q = a / d
        return -r * q
    return -r if a > 0 else r


def fst_scalar(double e1, double e2, double r, double h):
    return _fst(e1, e2, r, h)


def td_fhan(values, double r, double h, double x1, double x2):
    cdef double[::1] vs = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t n = vs.shape[0]
    smoothed_arr = np.empty(n, dtype=np.float64)
    derivative_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] smoothed = smoothed_arr
    cdef double[::1] derivative = derivative_arr
    cdef Py_ssize_t k
    cdef double v, nx1, nx2
    with nogil:
        smoothed[0] = x1
        derivative[0] = x2
        for k in range(1, n):
            v = vs[k]
            nx1 = x1 + h * x2
            nx2 = x2 + h * _fst(x1 - v, x2, r, h)
            x1 = nx1
            x2 = nx2
            smoothed[k] = x1
            derivative[k] = x2
    return smoothed_arr, derivative_arr


def walk_prefix_power(codes):
    cdef const unsigned char[::1] cs = np.ascontiguousarray(codes, dtype=np.uint8)
    cdef Py_ssize_t n = cs.shape[0]
    power_arr = np.empty(n, dtype=np.int64)
    bg_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] power = power_arr
    cdef long long[::1] bg = bg_arr
    cdef long long f[4][3]
    cdef long long nx[4]
    cdef long long p = 0, sumsq = 0, kk
    cdef Py_ssize_t k
    cdef int x, phase = 0, j, l
    with nogil:
        for x in range(4):
            nx[x] = 0
            for j in range(3):
                f[x][j] = 0
        for k in range(n):
            x = cs[k]
            j = (phase + 1) % 3
            l = (phase + 2) % 3
            # adding one count at (x, phase) changes the closed form by
            # 2*f[x][phase] + 1 - f[x][j] - f[x][l]
            p += 2 * f[x][phase] + 1 - f[x][j] - f[x][l]
            f[x][phase] += 1
            sumsq += 2 * nx[x] + 1
            nx[x] += 1
            power[k] = p
            kk = k + 1
            bg[k] = kk * kk - sumsq
            phase = phase + 1 if phase < 2 else 0
    return power_arr, bg_arr


cdef inline double _sgn(double x) nogil:
    if x > 0:
        return 1.0
    if x < 0:
        return -1.0
    return 0.0


cdef inline double _pow_abs(double x, double alpha) nogil:
    cdef double ax = fabs(x)
    if alpha == 0.5:
        return sqrt(ax)
    return pow(ax, alpha)


cdef inline double _accel(double e, double z, double r2, bint use_sign,
                          double alpha1, double alpha2) nogil:
    if use_sign:
        return -r2 * _sgn(e + 0.5 * fabs(z) * z)
    return r2 * (-_pow_abs(e, alpha1) * _sgn(e) - _pow_abs(z, alpha2) * _sgn(z))


def rk4_track(values, double r, int nsub, bint use_sign,
              double alpha1, double alpha2, double x1, double x2):
    cdef double[::1] vs = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t n = vs.shape[0]
    smoothed_arr = np.empty(n, dtype=np.float64)
    derivative_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] smoothed = smoothed_arr
    cdef double[::1] derivative = derivative_arr
    cdef double dt = 1.0 / nsub
    cdef double r2 = r * r
    cdef double v, a1, b1, a2, b2, a3, b3, a4, b4, xa, xb
    cdef Py_ssize_t k
    cdef int s
    with nogil:
        smoothed[0] = x1
        derivative[0] = x2
        for k in range(1, n):
            v = vs[k]
            for s in range(nsub):
                a1 = x2
                b1 = _accel(x1 - v, x2 / r, r2, use_sign, alpha1, alpha2)
                xa = x1 + 0.5 * dt * a1
                xb = x2 + 0.5 * dt * b1
                a2 = xb
                b2 = _accel(xa - v, xb / r, r2, use_sign, alpha1, alpha2)
                xa = x1 + 0.5 * dt * a2
                xb = x2 + 0.5 * dt * b2
                a3 = xb
                b3 = _accel(xa - v, xb / r, r2, use_sign, alpha1, alpha2)
                xa = x1 + dt * a3
                xb = x2 + dt * b3
                a4 = xb
                b4 = _accel(xa - v, xb / r, r2, use_sign, alpha1, alpha2)
                x1 = x1 + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
                x2 = x2 + dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
            smoothed[k] = x1
            derivative[k] = x2
    return smoothed_arr, derivative_arr
