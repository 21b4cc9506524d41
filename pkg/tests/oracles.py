"""Independent reference computations used only by the tests.

None of these go through the package's own kernels: partial traces are taken
from the full 2d x 2d projector, roots come from bisection, singular values
from LAPACK.
"""

import math

import numpy as np


def bisect_root(f, lo=1e-15, hi=1.0 - 1e-15, iters=200):
    flo = f(lo)
    if (flo < 0) == (f(hi) < 0):
        raise ValueError("no sign change")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def quadratic_residual(lam, a):
    """2 lam^2 - a lam sqrt(1 - lam^2) - 1, written out independently."""
    return 2 * lam**2 - a * lam * math.sqrt(1 - lam**2) - 1


def full_partial_trace(amp):
    """Reduce |k><k| on C^2 (x) C^d by explicit index summation."""
    d = amp.shape[1]
    vec = amp.reshape(-1)
    proj = np.outer(vec, vec.conj()).reshape(2, d, 2, d)
    return np.einsum("ikjk->ij", proj)


def pauli_bloch(rho):
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.array([[1, 0], [0, -1]])
    return np.array([np.trace(rho @ s).real for s in (sx, sy, sz)])


def lapack_singular_values(m):
    return np.linalg.svd(m, compute_uv=False)


def lambda_by_bisection(a):
    """Positive root in (0, 1) of the normalization quadratic at overlap a."""
    return bisect_root(lambda lam: quadratic_residual(lam, a))
