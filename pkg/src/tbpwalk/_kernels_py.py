"""Pure NumPy/Python fallback for the hot kernels.

Mirrors tbpwalk._kernels (the Cython extension) operation for operation.
The walk is vectorized with exact int64 cumulative sums; the tracking loops
are plain Python and therefore slower than the extension, but produce
bit-identical output (same IEEE-754 double operations in the same order).
"""

import math

import numpy as np

BACKEND_NAME = "python"


def fst_scalar(e1: float, e2: float, r: float, h: float) -> float:
    """Time-optimal control synthesis function, clamped to [-r, r] by construction."""
    d = r * h
    d0 = d * h
    y = e1 + h * e2
    ay = abs(y)
    if ay < d0:
        a = e2 + y / h
    else:
        half = (math.sqrt(d * d + 8.0 * r * ay) - d) / 2.0
        a = e2 + half if y > 0 else e2 - half
    if abs(a) <= d:
        q = a / d
        return -r * q
    return -r if a > 0 else r


def td_fhan(values, r, h, x1, x2):
    """Discrete tracking-differentiator over one series.

    Element 0 is the initial state; element k is the state after the step
    that consumed values[k].  Returns (smoothed, derivative) float64 arrays.
    """
    n = len(values)
    smoothed = np.empty(n, dtype=np.float64)
    derivative = np.empty(n, dtype=np.float64)
    smoothed[0] = x1
    derivative[0] = x2
    vs = np.asarray(values, dtype=np.float64).tolist()
    for k in range(1, n):
        v = vs[k]
        nx1 = x1 + h * x2
        nx2 = x2 + h * fst_scalar(x1 - v, x2, r, h)
        x1 = nx1
        x2 = nx2
        smoothed[k] = x1
        derivative[k] = x2
    return smoothed, derivative


def walk_prefix_power(codes):
    """Per-prefix 3-base periodicity power and spectrum-background numerator.

    codes: uint8 array of base codes 0..3, frame anchored at index 0.
    Returns (power, bg_num) int64 arrays: power[k] is the periodicity power of
    the length-(k+1) prefix, bg_num[k] = (k+1)^2 - sum_x n_x^2 so that the
    mean off-zero-bin spectrum power equals bg_num[k] / k.
    """
    codes = np.asarray(codes, dtype=np.uint8)
    n = codes.shape[0]
    phases = np.arange(n, dtype=np.int64) % 3
    power = np.zeros(n, dtype=np.int64)
    sumsq = np.zeros(n, dtype=np.int64)
    for x in range(4):
        is_x = codes == x
        f1 = np.cumsum(is_x & (phases == 0), dtype=np.int64)
        f2 = np.cumsum(is_x & (phases == 1), dtype=np.int64)
        f3 = np.cumsum(is_x & (phases == 2), dtype=np.int64)
        power += f1 * f1 + f2 * f2 + f3 * f3 - f1 * f2 - f2 * f3 - f1 * f3
        nx = f1 + f2 + f3
        sumsq += nx * nx
    k = np.arange(1, n + 1, dtype=np.int64)
    return power, k * k - sumsq


def _sgn(x: float) -> float:
    if x > 0:
        return 1.0
    if x < 0:
        return -1.0
    return 0.0


def _pow_abs(x: float, alpha: float) -> float:
    # |x|^alpha; sqrt for the common alpha=0.5 keeps both backends identical
    ax = abs(x)
    if alpha == 0.5:
        return math.sqrt(ax)
    return ax**alpha


def rk4_track(values, r, nsub, use_sign, alpha1, alpha2, x1, x2):
    """Fixed-step RK4 integration of the continuous second-order tracker.

    The input is held piecewise-constant over each unit sample interval and
    integrated with nsub substeps per sample.  use_sign selects the bang-bang
    nonlinearity instead of the fractional-power one.
    """
    n = len(values)
    smoothed = np.empty(n, dtype=np.float64)
    derivative = np.empty(n, dtype=np.float64)
    smoothed[0] = x1
    derivative[0] = x2
    vs = np.asarray(values, dtype=np.float64).tolist()
    dt = 1.0 / nsub
    r2 = r * r

    if use_sign:

        def accel(e, z):
            return -r2 * _sgn(e + 0.5 * abs(z) * z)

    else:

        def accel(e, z):
            return r2 * (-_pow_abs(e, alpha1) * _sgn(e) - _pow_abs(z, alpha2) * _sgn(z))

    for k in range(1, n):
        v = vs[k]
        for _ in range(nsub):
            a1 = x2
            b1 = accel(x1 - v, x2 / r)
            xa = x1 + 0.5 * dt * a1
            xb = x2 + 0.5 * dt * b1
            a2 = xb
            b2 = accel(xa - v, xb / r)
            xa = x1 + 0.5 * dt * a2
            xb = x2 + 0.5 * dt * b2
            a3 = xb
            b3 = accel(xa - v, xb / r)
            xa = x1 + dt * a3
            xb = x2 + dt * b3
            a4 = xb
            b4 = accel(xa - v, xb / r)
            x1 = x1 + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
            x2 = x2 + dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        smoothed[k] = x1
        derivative[k] = x2
    return smoothed, derivative
