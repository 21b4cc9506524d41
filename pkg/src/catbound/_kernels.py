"""Compiled hot path for the penalized objective.

Mirrors ``optimizer.decode`` + ``optimizer.constraint_vector`` exactly; the
numpy versions remain the reference and the tests compare the two.
"""

import math

import numba
import numpy as np

INVALID_PENALTY = 1e6
_DEP_TOL_SQ = 1e-20  # DEPENDENCE_TOL ** 2
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@numba.njit(cache=True)
def _bloch_into(out, row, a0, a1):
    r11 = 0.0
    r22 = 0.0
    r12 = 0j
    for k in range(a0.size):
        r11 += a0[k].real ** 2 + a0[k].imag ** 2
        r22 += a1[k].real ** 2 + a1[k].imag ** 2
        r12 += a0[k] * a1[k].conjugate()
    out[row, 0] = 2.0 * r12.real
    out[row, 1] = -2.0 * r12.imag
    out[row, 2] = r11 - r22


@numba.njit(cache=True)
def penalized(raw, mu):
    m = raw.size // 2  # complex entries across both kets
    h = m // 2
    d = h // 2
    v1 = np.empty(h, np.complex128)
    v2 = np.empty(h, np.complex128)
    n1 = 0.0
    for k in range(h):
        v1[k] = complex(raw[2 * k], raw[2 * k + 1])
        v2[k] = complex(raw[2 * (h + k)], raw[2 * (h + k) + 1])
        n1 += raw[2 * k] ** 2 + raw[2 * k + 1] ** 2
    if not n1 > _DEP_TOL_SQ:
        return INVALID_PENALTY
    s1 = 1.0 / math.sqrt(n1)
    nv2 = 0.0
    for k in range(h):
        v1[k] *= s1
        nv2 += v2[k].real ** 2 + v2[k].imag ** 2
    # two projection passes, as in the reference decode
    for _ in range(2):
        ov = 0j
        for k in range(h):
            ov += v1[k].conjugate() * v2[k]
        for k in range(h):
            v2[k] -= ov * v1[k]
    n2 = 0.0
    for k in range(h):
        n2 += v2[k].real ** 2 + v2[k].imag ** 2
    if not n2 > _DEP_TOL_SQ * max(1.0, nv2):
        return INVALID_PENALTY
    s2 = 1.0 / math.sqrt(n2)
    sup = np.empty(h, np.complex128)
    for k in range(h):
        v2[k] *= s2
        sup[k] = (v1[k] + v2[k]) * _INV_SQRT2
    p = np.empty((3, 3))
    _bloch_into(p, 0, v1[:d], v1[d:])
    _bloch_into(p, 1, v2[:d], v2[d:])
    _bloch_into(p, 2, sup[:d], sup[d:])
    c2 = 0.0
    c3 = 0.0
    for j in range(3):
        t = p[2, j] - p[0, j]
        c2 += t * t
        t = p[1, j] + p[0, j]
        c3 += t * t
    return -p[0, 2] + mu * (0.25 * c2 + c3)
