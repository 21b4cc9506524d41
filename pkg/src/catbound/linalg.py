"""Dense complex kernels for tiny dimensions.

Vectors are 1-D ``complex128`` arrays and matrices 2-D ones. The qubit side is
always two-dimensional, so the only decomposition needed is the SVD of a
2 x d matrix, done here in closed form through the 2 x 2 Gram matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ALGEBRA_TOL = 1e-12
RECON_TOL = 1e-10
DEPENDENCE_TOL = 1e-10
ZERO_SINGULAR = 1e-14


class LinearDependenceError(ValueError):
    pass


def as_cvector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def as_cmatrix(m, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def basis(d: int, k: int) -> np.ndarray:
    """Canonical basis vector e_k (0-based) of C^d."""
    e = np.zeros(d, dtype=np.complex128)
    e[k] = 1.0
    return e


def inner(a, b) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    a = as_cvector(a, "a")
    b = as_cvector(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    return complex(np.vdot(a, b))


def norm(v) -> float:
    return float(np.linalg.norm(as_cvector(v)))


def gram_schmidt(vs) -> list[np.ndarray]:
    """Orthonormalize ``vs`` in order (modified Gram-Schmidt, two passes).

    Raises LinearDependenceError when a residual norm drops below 1e-10.
    """
    out: list[np.ndarray] = []
    for i, v in enumerate(vs):
        w = as_cvector(v, f"vs[{i}]").copy()
        if out and w.size != out[0].size:
            raise ValueError("dimension mismatch in gram_schmidt input")
        # second pass recovers orthogonality lost to cancellation
        for _ in range(2):
            for q in out:
                w -= np.vdot(q, w) * q
        r = np.linalg.norm(w)
        if r < DEPENDENCE_TOL:
            raise LinearDependenceError(f"vector {i} is linearly dependent on its predecessors")
        out.append(w / r)
    return out


def orthogonal_unit(v: np.ndarray) -> np.ndarray:
    """Lowest-index canonical basis vector made orthogonal to unit ``v``.

    Picks the first e_k with |v_k|^2 <= 1/2, which always exists for d >= 2,
    so the residual before normalization is at least 1/sqrt(2).
    """
    d = v.size
    if d < 2:
        raise ValueError("no orthogonal complement in dimension 1")
    k = int(np.argmax(np.abs(v) ** 2 <= 0.5))
    w = basis(d, k) - v * np.conj(v[k])
    w -= np.vdot(v, w) * v
    return w / np.linalg.norm(w)


def eigh_2x2(h) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form eigensystem of a 2 x 2 Hermitian matrix.

    Returns (eigenvalues descending, unitary whose columns are eigenvectors).
    A degenerate spectrum returns the identity as eigenbasis.
    """
    h = np.asarray(h, dtype=np.complex128)
    # work at unit scale so tiny or huge entries neither underflow nor overflow
    s = float(np.max(np.abs(h)))
    if s == 0.0:
        return np.zeros(2), np.eye(2, dtype=np.complex128)
    h = h / s
    a = float(np.real(h[0, 0]))
    d = float(np.real(h[1, 1]))
    b = complex(0.5 * (h[0, 1] + np.conj(h[1, 0])))
    mean = 0.5 * (a + d)
    half_gap = 0.5 * (a - d)
    disc = float(np.hypot(half_gap, abs(b)))
    vals = np.array([mean + disc, mean - disc])
    if disc <= ZERO_SINGULAR:
        return s * vals, np.eye(2, dtype=np.complex128)
    # two algebraically equivalent eigenvector formulas; take the longer one
    v1 = np.array([b, vals[0] - a], dtype=np.complex128)
    v2 = np.array([vals[0] - d, np.conj(b)], dtype=np.complex128)
    u = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    u = u / np.linalg.norm(u)
    w = np.array([-np.conj(u[1]), np.conj(u[0])])
    return s * vals, np.column_stack([u, w])


def eigvalsh_2x2(h) -> np.ndarray:
    return eigh_2x2(h)[0]


def _phase_of_first_nonzero(v: np.ndarray, tol: float) -> complex:
    idx = np.flatnonzero(np.abs(v) > tol)
    if idx.size == 0:
        return 1.0 + 0j
    c = v[idx[0]]
    return c / abs(c)


@dataclass(frozen=True)
class SVD2xd:
    """m = left @ diag(singular_values) @ right_rows.

    ``right_rows`` has min(2, d) rows; for d = 1 the second singular value is
    zero and has no right vector.
    """

    left: np.ndarray
    singular_values: np.ndarray
    right_rows: np.ndarray

    def reconstruct(self) -> np.ndarray:
        r = self.right_rows.shape[0]
        return self.left[:, :r] @ (self.singular_values[:r, None] * self.right_rows)


def svd_2xd(m) -> SVD2xd:
    m = as_cmatrix(m, "m")
    if m.shape[0] != 2:
        raise ValueError(f"svd_2xd needs exactly 2 rows, got {m.shape[0]}")
    d = m.shape[1]
    scale = max(float(np.linalg.norm(m)), 1e-300)

    mu = m / max(float(np.max(np.abs(m))), 1e-300)
    _, left = eigh_2x2(mu @ mu.conj().T)
    # projecting onto the left vectors gives sigma_i * v_i directly; this keeps
    # m = sum_i u_i u_i^dag m exact even when sigma_2 is tiny
    w = left.conj().T @ m
    sig = np.linalg.norm(w, axis=1)

    degenerate = abs(sig[0] - sig[1]) <= ZERO_SINGULAR * scale
    if not degenerate and sig[1] > sig[0]:
        left = left[:, ::-1].copy()
        w = w[::-1].copy()
        sig = sig[::-1].copy()

    rows = []
    for i in range(min(2, d)):
        if sig[i] > ZERO_SINGULAR * scale:
            v = w[i] / sig[i]
            if rows:
                v = v - np.vdot(rows[0], v) * rows[0]
                v = v / np.linalg.norm(v)
        else:
            sig[i] = 0.0
            v = orthogonal_unit(rows[0]) if rows else basis(d, 0)
        ph = _phase_of_first_nonzero(v, ZERO_SINGULAR)
        rows.append(v * np.conj(ph))
        left[:, i] = left[:, i] * ph
    right = np.array(rows)
    sig[len(rows):] = 0.0

    if degenerate and right.shape[0] == 2:
        key = lambda r: tuple(np.column_stack([r.real, r.imag]).ravel())  # noqa: E731
        if key(right[1]) > key(right[0]):
            right = right[::-1].copy()
            left = left[:, ::-1].copy()
    return SVD2xd(left=left, singular_values=np.asarray(sig, dtype=float), right_rows=right)


def random_unit(d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly distributed unit vector in C^d (normalized complex Gaussian)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    while True:
        z = rng.normal(size=d) + 1j * rng.normal(size=d)
        r = np.linalg.norm(z)
        if r > 0.0:
            return z / r


def random_orthonormal_pair(d: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    if d < 2:
        raise ValueError("an orthonormal pair needs d >= 2")
    a, b = gram_schmidt([random_unit(d, rng), random_unit(d, rng)])
    return a, b


def sampler_moment_selftest(rng: np.random.Generator, d: int = 4, samples: int = 100_000) -> float:
    """Mean of |<v, e_1>|^2 over random unit vectors; should be 1/d."""
    acc = 0.0
    for _ in range(samples):
        acc += abs(random_unit(d, rng)[0]) ** 2
    return acc / samples
