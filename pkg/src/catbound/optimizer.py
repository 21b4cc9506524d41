"""Numerical search for the most-alive feasible cat, with no closed forms used.

Parameters are 8d reals: chi1 then chi2, each a 2 x d amplitude matrix
flattened qubit-major, each complex entry stored as (re, im). chi1 is
normalized and chi2 is orthogonalized against it during decoding, so the
orthogonality constraint holds exactly; the reduced-state equality and the
Bloch antipodality are handled by a quadratic penalty whose weight grows
geometrically across rounds. Each round is a Nelder-Mead search. A
Gauss-Newton projection onto the constraint set then removes the O(1/mu)
violation the penalty leaves behind. Nelder-Mead stalls around 1e-4 in 24+
dimensions, so the merged winner gets one Powell polish at the final penalty
weight, kept only if it stays feasible and does not lose objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .catmodel import (
    INV_SQRT2,
    P_ALIVE_MAX,
    FeasibilityReport,
    Tolerances,
    check_constraints,
    lambda_from_A,
    lambda_residual,
)
from .linalg import DEPENDENCE_TOL
from .quantum import BipartiteKet, bloch, p_alive, partial_trace_env

INVALID_PENALTY = _kernels.INVALID_PENALTY


class DecodeError(ValueError):
    pass


@dataclass(frozen=True)
class OptimizerConfig:
    env_dim: int = 2
    restarts: int = 32
    master_seed: int = 0
    penalty_init: float = 10.0
    penalty_growth: float = 10.0
    penalty_rounds: int = 5
    max_iters_per_round: int = 2000
    tol_constraint: float = 1e-8
    tol_step: float = 1e-10

    def __post_init__(self):
        if self.env_dim < 2:
            raise ValueError("env_dim must be >= 2")
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        if not (0 <= self.master_seed < 2**64):
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.penalty_init <= 0 or self.penalty_growth <= 1:
            raise ValueError("need penalty_init > 0 and penalty_growth > 1")
        if self.penalty_rounds < 1 or self.max_iters_per_round < 1:
            raise ValueError("penalty_rounds and max_iters_per_round must be positive")
        if self.tol_constraint <= 0 or self.tol_step <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class OptimizationResult:
    best_objective: float
    best_p_alive: float
    params: tuple[BipartiteKet, BipartiteKet]
    report: FeasibilityReport
    restart_index: int
    iterations_total: int
    converged: bool
    raw_params: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class OracleReport:
    samples: int
    feasible_count: int
    max_feasible_p_alive: float
    violations_of_bound: int


def pack(chi1: BipartiteKet, chi2: BipartiteKet) -> np.ndarray:
    flat = np.concatenate([chi1.flat(), chi2.flat()])
    return np.column_stack([flat.real, flat.imag]).ravel()


def _unpack(raw: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 1 or raw.size == 0 or raw.size % 8:
        raise ValueError(f"raw parameter length must be a positive multiple of 8, got {raw.size}")
    d = raw.size // 8
    z = raw[0::2] + 1j * raw[1::2]
    return z[: 2 * d], z[2 * d :], d


def decode(raw) -> tuple[np.ndarray, np.ndarray]:
    """Raw reals -> orthonormal amplitude matrices (chi1, chi2), each 2 x d."""
    v1, v2, d = _unpack(raw)
    n1 = np.linalg.norm(v1)
    if not np.isfinite(n1) or n1 < DEPENDENCE_TOL:
        raise DecodeError("chi1 parameters vanish")
    v1 = v1 / n1
    w = v2 - np.vdot(v1, v2) * v1
    w -= np.vdot(v1, w) * v1
    n2 = np.linalg.norm(w)
    if n2 < DEPENDENCE_TOL * max(1.0, np.linalg.norm(v2)):
        raise DecodeError("chi2 parameters are dependent on chi1")
    return v1.reshape(2, d), (w / n2).reshape(2, d)


def _bloch_of(amp: np.ndarray) -> np.ndarray:
    r11 = np.vdot(amp[0], amp[0]).real
    r22 = np.vdot(amp[1], amp[1]).real
    r12 = np.vdot(amp[1], amp[0])  # <1|rho|2> = sum_k a_1k conj(a_2k)
    return np.array([2.0 * r12.real, -2.0 * r12.imag, r11 - r22])


def constraint_vector(a1: np.ndarray, a2: np.ndarray) -> np.ndarray:
    """Stacked (P(rho) - P(rho1), P(rho2) + P(rho1)); zero exactly at feasibility."""
    p1 = _bloch_of(a1)
    p2 = _bloch_of(a2)
    p = _bloch_of(INV_SQRT2 * (a1 + a2))
    return np.concatenate([p - p1, p2 + p1])


def penalized_objective(raw_params, mu: float) -> float:
    """-z(rho1) + mu * (c2^2 + c3^2); lower is better.

    c2 is the qubit trace distance, i.e. half the Bloch-vector distance.
    Undecodable parameters give a large finite value instead of raising.
    """
    raw = np.ascontiguousarray(raw_params, dtype=np.float64)
    if raw.ndim != 1 or raw.size == 0 or raw.size % 8:
        raise ValueError(f"raw parameter length must be a positive multiple of 8, got {raw.size}")
    if mu < 0:
        raise ValueError("mu must be non-negative")
    return float(_kernels.penalized(raw, float(mu)))


def penalized_objective_numpy(raw_params, mu: float) -> float:
    """Uncompiled twin of ``penalized_objective`` built on ``decode``."""
    try:
        a1, a2 = decode(raw_params)
    except DecodeError:
        return INVALID_PENALTY
    p1 = _bloch_of(a1)
    cv = constraint_vector(a1, a2)
    c2 = 0.5 * np.linalg.norm(cv[:3])
    c3 = np.linalg.norm(cv[3:])
    return float(-p1[2] + mu * (c2 * c2 + c3 * c3))


def restore_feasibility(raw: np.ndarray, tol: float = 1e-15, max_steps: int = 30) -> np.ndarray:
    """Minimum-norm Gauss-Newton steps driving the constraint vector to zero."""
    x = np.array(raw, dtype=float)

    def residual(y):
        return constraint_vector(*decode(y))

    try:
        r = residual(x)
    except DecodeError:
        return x
    h = 1e-7
    for _ in range(max_steps):
        if np.linalg.norm(r) <= tol:
            break
        jac = np.empty((r.size, x.size))
        for j in range(x.size):
            e = np.zeros_like(x)
            e[j] = h
            jac[:, j] = (residual(x + e) - residual(x - e)) / (2 * h)
        step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        y = x + step
        try:
            ry = residual(y)
        except DecodeError:
            break
        if np.linalg.norm(ry) >= np.linalg.norm(r):
            break
        x, r = y, ry
    return x


def restart_rng(master_seed: int, restart_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(restart_index,)))


@dataclass(frozen=True)
class RestartOutcome:
    restart_index: int
    raw: np.ndarray
    objective: float
    report: FeasibilityReport
    iterations: int
    gated_residual: float


def _final_mu(cfg: OptimizerConfig) -> float:
    return cfg.penalty_init * cfg.penalty_growth ** (cfg.penalty_rounds - 1)


def _evaluate(cfg: OptimizerConfig, restart_index: int, x: np.ndarray, iters: int) -> RestartOutcome:
    tol = Tolerances.optimizer(cfg.tol_constraint)
    try:
        a1, a2 = decode(x)
    except DecodeError:
        bad = FeasibilityReport(*(math.inf,) * 6, feasible=False)
        return RestartOutcome(restart_index, x, -math.inf, bad, iters, math.inf)
    chi1, chi2 = BipartiteKet(a1), BipartiteKet(a2)
    report = check_constraints(chi1, chi2, tol)
    z = bloch(partial_trace_env(chi1)).z
    return RestartOutcome(restart_index, x, z, report, iters, report.max_gated_residual(tol))


def run_restart(cfg: OptimizerConfig, restart_index: int) -> RestartOutcome:
    rng = restart_rng(cfg.master_seed, restart_index)
    x = rng.normal(size=8 * cfg.env_dim)
    mu = cfg.penalty_init
    iters = 0
    for _ in range(cfg.penalty_rounds):
        res = minimize(
            penalized_objective,
            x,
            args=(mu,),
            method="Nelder-Mead",
            options={
                "maxiter": cfg.max_iters_per_round,
                "xatol": cfg.tol_step,
                "fatol": cfg.tol_step,
                "adaptive": True,
            },
        )
        x = res.x
        iters += int(res.nit)
        mu *= cfg.penalty_growth
    return _evaluate(cfg, restart_index, restore_feasibility(x), iters)


def polish(cfg: OptimizerConfig, outcome: RestartOutcome) -> RestartOutcome:
    res = minimize(
        penalized_objective,
        outcome.raw,
        args=(_final_mu(cfg),),
        method="Powell",
        options={"xtol": cfg.tol_step, "ftol": 1e-14, "maxfev": 400_000},
    )
    cand = _evaluate(
        cfg, outcome.restart_index, restore_feasibility(res.x), outcome.iterations + int(res.nit)
    )
    if cand.report.feasible and cand.objective >= outcome.objective:
        return cand
    return outcome


def better(a: RestartOutcome, b: RestartOutcome) -> RestartOutcome:
    """Associative merge: feasible beats infeasible; then higher objective,
    lower residual for infeasible ones, lower restart index on ties."""
    if a.report.feasible != b.report.feasible:
        return a if a.report.feasible else b
    if a.report.feasible:
        ka = (-a.objective, a.restart_index)
        kb = (-b.objective, b.restart_index)
    else:
        ka = (a.gated_residual, a.restart_index)
        kb = (b.gated_residual, b.restart_index)
    return a if ka <= kb else b


def optimize(cfg: OptimizerConfig) -> OptimizationResult:
    outcomes = [run_restart(cfg, i) for i in range(cfg.restarts)]
    best = outcomes[0]
    for o in outcomes[1:]:
        best = better(best, o)
    iterations = sum(o.iterations for o in outcomes)
    if best.report.feasible:
        polished = polish(cfg, best)
        iterations += polished.iterations - best.iterations
        best = polished
    a1, a2 = decode(best.raw)
    chi1, chi2 = BipartiteKet(a1), BipartiteKet(a2)
    return OptimizationResult(
        best_objective=float(best.objective),
        best_p_alive=p_alive(partial_trace_env(chi1)),
        params=(chi1, chi2),
        report=best.report,
        restart_index=best.restart_index,
        iterations_total=iterations,
        converged=any(o.report.feasible for o in outcomes),
        raw_params=best.raw,
    )


def sweep_A(steps: int) -> list[tuple[float, float, float, float]]:
    """Rows (a, lambda, lambda^2, lambda_residual) on a uniform grid over [-2, 2]."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    rows = []
    for a in np.linspace(-2.0, 2.0, steps):
        a = float(a)
        lam = lambda_from_A(a)
        rows.append((a, lam, lam * lam, lambda_residual(lam, a)))
    return rows


def _batch_bloch(amp: np.ndarray) -> np.ndarray:
    r11 = np.sum(np.abs(amp[:, 0]) ** 2, axis=1)
    r22 = np.sum(np.abs(amp[:, 1]) ** 2, axis=1)
    r12 = np.sum(amp[:, 0] * np.conj(amp[:, 1]), axis=1)
    return np.column_stack([2.0 * r12.real, -2.0 * r12.imag, r11 - r22])


def sampling_oracle(
    d: int, samples: int, seed: int, slack: float = 1e-9, feas_tol: float = 0.05
) -> OracleReport:
    """Random orthogonal (chi1, chi2) pairs, counting feasible ones above the bound."""
    if d < 2 or samples < 1:
        raise ValueError("need d >= 2 and samples >= 1")
    rng = np.random.default_rng(seed)
    n = 2 * d

    def draw():
        z = rng.normal(size=(samples, n)) + 1j * rng.normal(size=(samples, n))
        return z / np.linalg.norm(z, axis=1, keepdims=True)

    v1 = draw()
    v2 = draw()
    ov = np.sum(np.conj(v1) * v2, axis=1, keepdims=True)
    v2 = v2 - ov * v1
    v2 /= np.linalg.norm(v2, axis=1, keepdims=True)
    a1 = v1.reshape(samples, 2, d)
    a2 = v2.reshape(samples, 2, d)
    p1 = _batch_bloch(a1)
    p2 = _batch_bloch(a2)
    p = _batch_bloch(INV_SQRT2 * (a1 + a2))
    c2 = 0.5 * np.linalg.norm(p - p1, axis=1)
    c3 = np.linalg.norm(p2 + p1, axis=1)
    feasible = np.maximum(c2, c3) <= feas_tol
    alive = np.clip(0.5 * (1.0 + p1[:, 2]), 0.0, 1.0)
    fa = alive[feasible]
    return OracleReport(
        samples=samples,
        feasible_count=int(feasible.sum()),
        max_feasible_p_alive=float(fa.max()) if fa.size else 0.0,
        violations_of_bound=int(np.sum(fa > P_ALIVE_MAX + slack)),
    )
