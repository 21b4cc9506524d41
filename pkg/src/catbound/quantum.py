"""Qubit (x) environment pure states and their qubit-side reductions.

Index convention: row 0 of an amplitude matrix is the alive state |1>, row 1
the dead state |2>; columns index an orthonormal environment basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import (
    ALGEBRA_TOL,
    RECON_TOL,
    as_cmatrix,
    as_cvector,
    eigvalsh_2x2,
    svd_2xd,
)


@dataclass(frozen=True, eq=False)
class BipartiteKet:
    amp: np.ndarray

    def __post_init__(self):
        amp = as_cmatrix(self.amp, "amp")
        if amp.shape[0] != 2:
            raise ValueError(f"amplitude matrix must have 2 rows, got {amp.shape}")
        n = np.linalg.norm(amp)
        if abs(n - 1.0) > ALGEBRA_TOL:
            raise ValueError(f"ket is not normalized (norm = {n!r})")
        amp = amp.copy()
        amp.setflags(write=False)
        object.__setattr__(self, "amp", amp)

    @classmethod
    def normalized(cls, amp) -> "BipartiteKet":
        amp = as_cmatrix(amp, "amp")
        n = np.linalg.norm(amp)
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amp / n)

    @property
    def env_dim(self) -> int:
        return self.amp.shape[1]

    def flat(self) -> np.ndarray:
        return self.amp.ravel()


@dataclass(frozen=True, eq=False)
class CatDensity:
    matrix: np.ndarray

    def __post_init__(self):
        m = as_cmatrix(self.matrix, "density matrix")
        if m.shape != (2, 2):
            raise ValueError(f"density matrix must be 2x2, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > ALGEBRA_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > ALGEBRA_TOL:
            raise ValueError(f"density matrix trace is {np.trace(m)!r}, not 1")
        if eigvalsh_2x2(m)[1] < -ALGEBRA_TOL:
            raise ValueError("density matrix is not positive semidefinite")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def length(self) -> float:
        return float(np.linalg.norm(self.as_array()))


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """k = coeff_alive |q_0>|e_0> + coeff_dead |q_1>|e_1>.

    ``qubit_vecs[0]`` is the Schmidt vector with the larger |<1|.>|^2. For a
    one-dimensional environment ``env_vecs`` holds a single vector and
    ``coeff_dead`` is zero.
    """

    coeff_alive: float
    coeff_dead: float
    qubit_vecs: np.ndarray
    env_vecs: np.ndarray
    rank1: bool

    def reconstruct(self) -> BipartiteKet:
        coeffs = (self.coeff_alive, self.coeff_dead)
        amp = sum(c * np.outer(q, e) for c, q, e in zip(coeffs, self.qubit_vecs, self.env_vecs))
        return BipartiteKet.normalized(amp)


class Combination(NamedTuple):
    ket: BipartiteKet
    norm_before: float
    norm_deviated: bool


def tensor(qubit_amp, env) -> BipartiteKet:
    q = as_cvector(qubit_amp, "qubit_amp")
    if q.size != 2:
        raise ValueError("qubit amplitude must have two components")
    e = as_cvector(env, "env")
    return BipartiteKet.normalized(np.outer(q, e))


def combine(a: complex, u: BipartiteKet, b: complex, v: BipartiteKet) -> Combination:
    """Renormalized a|u> + b|v>, recording whether the raw norm was off by > 1e-10."""
    if u.env_dim != v.env_dim:
        raise ValueError(f"environment dimensions differ: {u.env_dim} vs {v.env_dim}")
    amp = a * u.amp + b * v.amp
    n = float(np.linalg.norm(amp))
    if n <= ALGEBRA_TOL:
        raise ValueError("superposition vanishes")
    return Combination(BipartiteKet(amp / n), n, abs(n - 1.0) > RECON_TOL)


def partial_trace_env(k: BipartiteKet) -> CatDensity:
    rho = k.amp @ k.amp.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return CatDensity(rho)


def pure_density(qubit_state) -> CatDensity:
    q = as_cvector(qubit_state, "qubit_state")
    q = q / np.linalg.norm(q)
    return CatDensity(np.outer(q, q.conj()))


def bloch(rho: CatDensity) -> BlochVector:
    m = rho.matrix
    r12 = m[0, 1]
    return BlochVector(
        x=float(2.0 * r12.real),
        y=float(-2.0 * r12.imag),
        z=float((m[0, 0] - m[1, 1]).real),
    )


def p_alive(rho: CatDensity) -> float:
    return float(np.clip(rho.matrix[0, 0].real, 0.0, 1.0))


def p_dead(rho: CatDensity) -> float:
    return float(np.clip(rho.matrix[1, 1].real, 0.0, 1.0))


def purity(rho: CatDensity) -> float:
    m = rho.matrix
    return float(np.real(np.trace(m @ m)))


def trace_distance(a: CatDensity, b: CatDensity) -> float:
    ev = eigvalsh_2x2(a.matrix - b.matrix)
    return float(min(1.0, 0.5 * np.sum(np.abs(ev))))


def state_distance(u: BipartiteKet, v: BipartiteKet) -> float:
    """sqrt(1 - |<u|v>|^2), computed as the norm of u's component orthogonal to v."""
    if u.env_dim != v.env_dim:
        raise ValueError("environment dimensions differ")
    uf, vf = u.flat(), v.flat()
    return float(np.linalg.norm(uf - vf * np.vdot(vf, uf)))


def schmidt(k: BipartiteKet) -> SchmidtForm:
    svd = svd_2xd(k.amp)
    sig = svd.singular_values
    left = svd.left
    order = [0, 1]
    if svd.right_rows.shape[0] == 2:
        w0, w1 = abs(left[0, 0]) ** 2, abs(left[0, 1]) ** 2
        # ties fall back to the svd's own descending order
        if w1 - w0 > ALGEBRA_TOL:
            order = [1, 0]
    qubit = np.array([left[:, i] for i in order])
    env = svd.right_rows[order[: svd.right_rows.shape[0]]]
    c_alive = float(sig[order[0]])
    c_dead = float(np.sqrt(max(0.0, 1.0 - c_alive**2)))
    return SchmidtForm(
        coeff_alive=c_alive,
        coeff_dead=c_dead,
        qubit_vecs=qubit,
        env_vecs=env,
        rank1=bool(sig[1] == 0.0),
    )


def ket_to_json(k: BipartiteKet) -> dict:
    return {
        "env_dim": k.env_dim,
        "amp": [[[float(z.real), float(z.imag)] for z in row] for row in k.amp],
    }


def ket_from_json(obj) -> BipartiteKet:
    """Parse the ``{"env_dim", "amp"}`` wire format; raises ValueError if malformed."""
    try:
        d = obj["env_dim"]
        rows = obj["amp"]
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise ValueError("env_dim must be a positive integer")
        if len(rows) != 2 or any(len(r) != d for r in rows):
            raise ValueError("amp must be 2 rows of env_dim [re, im] pairs")
        amp = np.empty((2, d), dtype=np.complex128)
        for q, row in enumerate(rows):
            for j, pair in enumerate(row):
                if len(pair) != 2 or not all(
                    isinstance(t, (int, float)) and not isinstance(t, bool) for t in pair
                ):
                    raise ValueError("each amplitude must be a [re, im] pair of numbers")
                amp[q, j] = complex(pair[0], pair[1])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed ket JSON: {exc}") from exc
    return BipartiteKet(amp)


def density_to_json(rho: CatDensity) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in rho.matrix]


def density_from_json(rows) -> CatDensity:
    try:
        return CatDensity(np.array([[complex(*p) for p in row] for row in rows]))
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed density JSON: {exc}") from exc
