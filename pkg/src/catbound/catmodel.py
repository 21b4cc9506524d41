"""The cat model: Schmidt-form state pairs, the overlap A, lambda(A), and the
constraint residuals that certify an optimal cat triple.

Notation follows the usual one for this construction::

    chi1 = lam |1>psi1 + sqrt(1-lam^2) |2>psi2
    chi2 = sqrt(1-lam^2) |1>phi1 + lam |2>phi2
    chi  = (chi1 + chi2) / sqrt(2)

Sign note: ``lambda_from_A`` = sqrt(1/2 - A/(2 sqrt(4+A^2))) is the positive
root of ``2 lam^2 + A lam sqrt(1-lam^2) - 1 = 0``, which is the normalization
condition ``lambda_residual`` with A negated. The root that actually makes xi1
a unit vector is ``lambda_root``; the two agree only at A = 0. The optimal
triple is reached at A = +2 (phi1 = psi1, phi2 = -psi2), and its
alive-probability is the same 1/2 + sqrt(2)/4 either way.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .linalg import ALGEBRA_TOL, as_cvector
from .quantum import (
    BipartiteKet,
    bloch,
    combine,
    partial_trace_env,
    pure_density,
    trace_distance,
)

P_ALIVE_MAX = 0.5 + math.sqrt(2.0) / 4.0
LAMBDA_M = math.sqrt(P_ALIVE_MAX)
LAMBDA_M_COMPLEMENT = math.sqrt(1.0 - P_ALIVE_MAX)
INV_SQRT2 = 1.0 / math.sqrt(2.0)


class SingularConfigurationError(ValueError):
    pass


def _check_orthonormal(a: np.ndarray, b: np.ndarray, what: str) -> None:
    if a.shape != b.shape:
        raise ValueError(f"{what}: dimension mismatch")
    if abs(np.linalg.norm(a) - 1.0) > ALGEBRA_TOL or abs(np.linalg.norm(b) - 1.0) > ALGEBRA_TOL:
        raise ValueError(f"{what}: vectors are not normalized")
    if abs(np.vdot(a, b)) > ALGEBRA_TOL:
        raise ValueError(f"{what}: vectors are not orthogonal")


@dataclass(frozen=True, eq=False)
class CatConfiguration:
    lam: float
    psi1: np.ndarray
    psi2: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray

    def __post_init__(self):
        if not (0.0 <= self.lam <= 1.0):
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        vecs = {n: as_cvector(getattr(self, n), n) for n in ("psi1", "psi2", "phi1", "phi2")}
        _check_orthonormal(vecs["psi1"], vecs["psi2"], "psi pair")
        _check_orthonormal(vecs["phi1"], vecs["phi2"], "phi pair")
        if vecs["psi1"].shape != vecs["phi1"].shape:
            raise ValueError("psi and phi pairs live in different dimensions")
        for n, v in vecs.items():
            object.__setattr__(self, n, v)

    @property
    def env_dim(self) -> int:
        return self.psi1.size

    @property
    def lam_c(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.lam**2))


def optimal_configuration(psi1, psi2) -> CatConfiguration:
    """lam = lambda_m, phi1 = psi1, phi2 = -psi2 (overlap A = +2)."""
    psi1 = as_cvector(psi1, "psi1")
    psi2 = as_cvector(psi2, "psi2")
    return CatConfiguration(LAMBDA_M, psi1, psi2, psi1.copy(), -psi2)


def build_chi_pair(cfg: CatConfiguration) -> tuple[BipartiteKet, BipartiteKet]:
    lam, c = cfg.lam, cfg.lam_c
    chi1 = np.array([lam * cfg.psi1, c * cfg.psi2])
    chi2 = np.array([c * cfg.phi1, lam * cfg.phi2])
    return BipartiteKet.normalized(chi1), BipartiteKet.normalized(chi2)


def overlap_A(cfg: CatConfiguration) -> float:
    a = 2.0 * np.vdot(cfg.psi1, cfg.phi1).real
    if abs(a) > 2.0 and abs(a) - 2.0 <= ALGEBRA_TOL:
        a = math.copysign(2.0, a)
    return float(a)


def _check_A(a: float) -> None:
    if not (-2.0 - ALGEBRA_TOL <= a <= 2.0 + ALGEBRA_TOL):
        raise ValueError(f"overlap A must lie in [-2, 2], got {a}")


def lambda_from_A(a: float) -> float:
    """Closed form sqrt(1/2 - A / (2 sqrt(4 + A^2))); decreasing in A."""
    _check_A(a)
    return math.sqrt(0.5 - a / (2.0 * math.sqrt(4.0 + a * a)))


def lambda_root(a: float) -> float:
    """Positive root of ``lambda_residual(lam, a) = 0``; increasing in A."""
    _check_A(a)
    return math.sqrt(0.5 + a / (2.0 * math.sqrt(4.0 + a * a)))


def lambda_residual(lam: float, a: float) -> float:
    """2 lam^2 - A lam sqrt(1 - lam^2) - 1, zero iff xi1 is normalized."""
    return 2.0 * lam * lam - a * lam * math.sqrt(max(0.0, 1.0 - lam * lam)) - 1.0


def chi_orthogonality_residual(cfg: CatConfiguration) -> float:
    """|<phi1|psi1> + <phi2|psi2>|; <chi2|chi1> is lam*sqrt(1-lam^2) times this."""
    return float(abs(np.vdot(cfg.phi1, cfg.psi1) + np.vdot(cfg.phi2, cfg.psi2)))


def xi_orthogonality_residual(cfg: CatConfiguration) -> float:
    lam2 = cfg.lam**2
    return float(
        abs((1.0 - lam2) * np.vdot(cfg.phi1, cfg.psi2) + lam2 * np.vdot(cfg.psi1, cfg.phi2))
    )


class XiStates(NamedTuple):
    xi1: np.ndarray
    xi2: np.ndarray
    norm1_residual: float
    norm2_residual: float
    overlap_residual: float


def xi_states(cfg: CatConfiguration) -> XiStates:
    """Environment factors of chi in the qubit's computational basis.

    chi = lam |1>xi1 + sqrt(1-lam^2) |2>xi2; both must be unit and orthogonal
    for this to be a Schmidt form with the same coefficients as chi1.
    """
    lam, c = cfg.lam, cfg.lam_c
    if lam <= 0.0 or c <= 0.0:
        raise SingularConfigurationError(f"xi states are undefined at lambda = {lam}")
    xi1 = INV_SQRT2 * cfg.psi1 + (c / (math.sqrt(2.0) * lam)) * cfg.phi1
    xi2 = INV_SQRT2 * cfg.psi2 + (lam / (math.sqrt(2.0) * c)) * cfg.phi2
    return XiStates(
        xi1,
        xi2,
        float(abs(np.linalg.norm(xi1) - 1.0)),
        float(abs(np.linalg.norm(xi2) - 1.0)),
        float(abs(np.vdot(xi1, xi2))),
    )


@dataclass(frozen=True)
class Tolerances:
    """Per-residual gates; ``None`` reports the residual without gating on it."""

    c1: float | None = 1e-10
    c2: float | None = 1e-10
    c3: float | None = 1e-10
    eq3: float | None = 1e-10
    eq9: float | None = 1e-10
    xi: float | None = 1e-10

    @classmethod
    def uniform(cls, tol: float) -> "Tolerances":
        return cls(tol, tol, tol, tol, tol, tol)

    @classmethod
    def optimizer(cls, tol: float) -> "Tolerances":
        # the branch-decomposition residuals presuppose a z-aligned chi1,
        # which the optimizer only reaches approximately
        return cls(c1=tol, c2=tol, c3=tol, eq3=None, eq9=None, xi=tol)


@dataclass(frozen=True)
class FeasibilityReport:
    c1_chi_overlap: float
    c2_rho_distance: float
    c3_bloch_antipodal: float
    eq3_residual: float
    eq9_residual: float
    xi_norm_residual: float
    feasible: bool

    def to_dict(self) -> dict:
        return asdict(self)

    def max_gated_residual(self, tol: Tolerances) -> float:
        pairs = [
            (self.c1_chi_overlap, tol.c1),
            (self.c2_rho_distance, tol.c2),
            (self.c3_bloch_antipodal, tol.c3),
            (self.eq3_residual, tol.eq3),
            (self.eq9_residual, tol.eq9),
            (self.xi_norm_residual, tol.xi),
        ]
        return max((r for r, t in pairs if t is not None), default=0.0)


def _unit_or_zero(row: np.ndarray) -> tuple[np.ndarray, float]:
    n = float(np.linalg.norm(row))
    return (row / n if n > 1e-15 else np.zeros_like(row)), n


def check_constraints(
    chi1: BipartiteKet, chi2: BipartiteKet, tol: Tolerances = Tolerances()
) -> FeasibilityReport:
    if chi1.env_dim != chi2.env_dim:
        raise ValueError("chi1 and chi2 have different environment dimensions")
    c1 = abs(np.vdot(chi1.flat(), chi2.flat()))
    chi = combine(INV_SQRT2, chi1, INV_SQRT2, chi2).ket
    rho, rho1, rho2 = (partial_trace_env(k) for k in (chi, chi1, chi2))
    c2 = trace_distance(rho, rho1)
    c3 = float(np.linalg.norm(bloch(rho2).as_array() + bloch(rho1).as_array()))

    # read psi/phi off the computational-basis rows, as in the Schmidt-form ansatz
    psi1, lam = _unit_or_zero(chi1.amp[0])
    psi2, lam_c = _unit_or_zero(chi1.amp[1])
    phi1, _ = _unit_or_zero(chi2.amp[0])
    phi2, _ = _unit_or_zero(chi2.amp[1])
    eq3 = abs(np.vdot(phi1, psi1) + np.vdot(phi2, psi2))
    eq9 = abs(lam_c**2 * np.vdot(phi1, psi2) + lam**2 * np.vdot(psi1, phi2))

    xi_res = 0.0
    for row, coeff in ((chi.amp[0], lam), (chi.amp[1], lam_c)):
        n = float(np.linalg.norm(row))
        xi_res = max(xi_res, abs(n / coeff - 1.0) if coeff > 1e-15 else n)

    residuals = dict(
        c1_chi_overlap=float(c1),
        c2_rho_distance=float(c2),
        c3_bloch_antipodal=c3,
        eq3_residual=float(eq3),
        eq9_residual=float(eq9),
        xi_norm_residual=float(xi_res),
    )
    gates = (tol.c1, tol.c2, tol.c3, tol.eq3, tol.eq9, tol.xi)
    feasible = all(bool(t is None or r <= t) for r, t in zip(residuals.values(), gates))
    return FeasibilityReport(**residuals, feasible=feasible)


def construct_optimal(d: int, psi1, psi2) -> tuple[BipartiteKet, BipartiteKet, BipartiteKet]:
    """The optimal triple (chi, chi1, chi2) on environment pair (psi1, psi2).

    chi  = lm |1>psi1 - lc |2>psi2
    chi1 = lm |1>psi1 + lc |2>psi2
    chi2 = lc |1>psi1 - lm |2>psi2
    with lm^2 = 1/2 + sqrt(2)/4 and lc = sqrt(1 - lm^2).
    """
    if d < 2:
        raise ValueError("the optimal triple needs an environment of dimension >= 2")
    psi1 = as_cvector(psi1, "psi1")
    psi2 = as_cvector(psi2, "psi2")
    if psi1.size != d or psi2.size != d:
        raise ValueError(f"psi vectors must have dimension {d}")
    _check_orthonormal(psi1, psi2, "psi pair")
    chi1, chi2 = build_chi_pair(optimal_configuration(psi1, psi2))
    chi = BipartiteKet.normalized(np.array([LAMBDA_M * psi1, -LAMBDA_M_COMPLEMENT * psi2]))
    return chi, chi1, chi2


def qubit_triplet() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Isolated two-state analog: orthonormal |I>, |II> and |III> = (|I> + |II>)/sqrt(2)."""
    s1 = np.array([LAMBDA_M, LAMBDA_M_COMPLEMENT], dtype=np.complex128)
    s2 = np.array([LAMBDA_M_COMPLEMENT, -LAMBDA_M], dtype=np.complex128)
    return s1, s2, INV_SQRT2 * (s1 + s2)


def triplet_bloch_vectors():
    return tuple(bloch(pure_density(s)) for s in qubit_triplet())


def angle_to_z_deg(v) -> float:
    a = v.as_array()
    return math.degrees(math.acos(np.clip(a[2] / np.linalg.norm(a), -1.0, 1.0)))
