import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catbound import catmodel as cm
from catbound.linalg import basis, random_orthonormal_pair, random_unit
from catbound.quantum import (
    BipartiteKet,
    bloch,
    combine,
    p_alive,
    p_dead,
    partial_trace_env,
    state_distance,
    tensor,
    trace_distance,
)
from oracles import lambda_by_bisection, quadratic_residual

H = math.sqrt(2) / 2
LM, LC = cm.LAMBDA_M, cm.LAMBDA_M_COMPLEMENT
E1, E2 = basis(2, 0), basis(2, 1)


def cfg(lam, phi1=E1, phi2=E2, psi1=E1, psi2=E2):
    return cm.CatConfiguration(lam, psi1, psi2, phi1, phi2)


def test_constants():
    assert cm.P_ALIVE_MAX == pytest.approx(0.8535533905932738, abs=1e-15)
    assert LM**2 + LC**2 == pytest.approx(1, abs=1e-15)


def test_configuration_validation():
    with pytest.raises(ValueError):
        cfg(1.2)
    with pytest.raises(ValueError):
        cfg(0.5, phi1=E1, phi2=E1)
    with pytest.raises(ValueError):
        cm.CatConfiguration(0.5, E1, E2, basis(3, 0), basis(3, 1))


def test_build_chi_pair_product_at_lambda_one():
    chi1, _ = cm.build_chi_pair(cfg(1.0))
    np.testing.assert_array_equal(chi1.amp, tensor([1, 0], E1).amp)


def test_build_chi_pair_symmetric_case():
    chi1, chi2 = cm.build_chi_pair(cfg(1 / math.sqrt(2)))
    assert state_distance(chi1, chi2) < 1e-15
    assert p_alive(partial_trace_env(chi1)) == pytest.approx(0.5, abs=1e-15)


def test_build_chi_pair_with_flipped_signs_matches_triple_up_to_phase():
    # the sign choice phi1 = -psi1, phi2 = psi2 (A = -2) reproduces chi1 entrywise
    # and chi2 only up to a global factor of -1
    chi, chi1, chi2 = cm.construct_optimal(2, E1, E2)
    p1, p2 = cm.build_chi_pair(cfg(LM, phi1=-E1, phi2=E2))
    np.testing.assert_allclose(p1.amp, chi1.amp, atol=1e-12)
    np.testing.assert_allclose(-p2.amp, chi2.amp, atol=1e-12)
    # ...and the combination then lands on a state with alive probability 1 - lm^2
    mix = combine(cm.INV_SQRT2, p1, cm.INV_SQRT2, p2).ket
    assert p_alive(partial_trace_env(mix)) == pytest.approx(1 - cm.P_ALIVE_MAX, abs=1e-12)


def test_optimal_configuration_reproduces_triple_entrywise():
    chi, chi1, chi2 = cm.construct_optimal(2, E1, E2)
    p1, p2 = cm.build_chi_pair(cm.optimal_configuration(E1, E2))
    np.testing.assert_allclose(p1.amp, chi1.amp, atol=1e-12)
    np.testing.assert_allclose(p2.amp, chi2.amp, atol=1e-12)
    np.testing.assert_allclose(chi.amp, [[LM, 0], [0, -LC]], atol=1e-15)


@pytest.mark.parametrize(
    "phi1, phi2, expected", [(E1, E2, 2.0), (E2, E1, 0.0), (-E1, E2, -2.0)]
)
def test_overlap_A(phi1, phi2, expected):
    assert cm.overlap_A(cfg(0.5, phi1, phi2)) == expected


def test_overlap_A_clamps():
    v = E1 * (1 + 1e-13)
    c = cm.CatConfiguration(0.5, v, E2, v, E2)
    assert cm.overlap_A(c) == 2.0


def test_lambda_from_A_examples():
    assert cm.lambda_from_A(0.0) == pytest.approx(0.7071068, abs=1e-7)
    assert cm.lambda_from_A(-2.0) ** 2 == pytest.approx(0.8535533906, abs=1e-10)
    # the closed form evaluates to 1 - lm^2 at the other endpoint
    assert cm.lambda_from_A(2.0) ** 2 == pytest.approx(0.1464466094, abs=1e-10)
    with pytest.raises(ValueError):
        cm.lambda_from_A(2.1)


@pytest.mark.parametrize("a", [-2.0, -1.0, -0.3, 0.0, 0.7, 1.0, 2.0])
def test_lambda_root_matches_bisection(a):
    oracle = lambda_by_bisection(a)
    assert cm.lambda_root(a) == pytest.approx(oracle, abs=1e-12)
    assert abs(cm.lambda_residual(cm.lambda_root(a), a)) <= 1e-12


def test_bisection_at_plus_two_is_lambda_m():
    # bisection on the residual as written lands on lm^2, not 1 - lm^2
    assert lambda_by_bisection(2.0) ** 2 == pytest.approx(0.8535533905932737, abs=1e-12)
    assert lambda_by_bisection(-2.0) ** 2 == pytest.approx(0.1464466094067262, abs=1e-12)


@given(st.floats(-2, 2))
def test_closed_form_is_the_mirrored_root(a):
    assert cm.lambda_from_A(a) == pytest.approx(cm.lambda_root(-a), abs=1e-14)
    assert abs(quadratic_residual(cm.lambda_from_A(a), -a)) <= 1e-12


def test_lambda_residual_examples():
    assert cm.lambda_residual(1 / math.sqrt(2), 0) == pytest.approx(0, abs=1e-15)
    assert cm.lambda_residual(0.9, 0) == pytest.approx(0.62, abs=1e-12)
    assert cm.lambda_residual(0.9, 1.0) == pytest.approx(quadratic_residual(0.9, 1.0), abs=1e-15)


def test_lambda_from_A_strictly_decreasing_and_max_at_minus_two():
    grid = np.linspace(-2, 2, 1001)
    sq = np.array([cm.lambda_from_A(a) ** 2 for a in grid])
    assert np.all(np.diff(sq) < 0)
    assert np.argmax(sq) == 0


def test_lambda_root_strictly_increasing():
    grid = np.linspace(-2, 2, 1001)
    sq = np.array([cm.lambda_root(a) ** 2 for a in grid])
    assert np.all(np.diff(sq) > 0)
    assert sq[-1] == pytest.approx(cm.P_ALIVE_MAX, abs=1e-12)


def test_xi_states_optimal():
    xi = cm.xi_states(cm.optimal_configuration(E1, E2))
    assert max(xi.norm1_residual, xi.norm2_residual, xi.overlap_residual) <= 1e-12
    assert abs(abs(np.vdot(xi.xi1, E1)) - 1) <= 1e-12


def test_xi_states_flipped_signs_are_not_normalized():
    xi = cm.xi_states(cfg(LM, phi1=-E1, phi2=E2))
    assert np.linalg.norm(xi.xi1) == pytest.approx(math.sqrt(2) - 1, abs=1e-12)


def test_xi1_normalized_only_by_the_true_root():
    good = cm.xi_states(cfg(cm.lambda_root(2.0)))
    bad = cm.xi_states(cfg(cm.lambda_from_A(2.0)))
    assert good.norm1_residual <= 1e-12
    assert bad.norm1_residual > 1


@pytest.mark.parametrize("lam", [0.0, 1.0])
def test_xi_states_singular(lam):
    with pytest.raises(cm.SingularConfigurationError):
        cm.xi_states(cfg(lam))


def test_check_constraints_optimal_triple():
    _, chi1, chi2 = cm.construct_optimal(2, E1, E2)
    r = cm.check_constraints(chi1, chi2, cm.Tolerances.uniform(1e-12))
    assert r.feasible
    assert r.max_gated_residual(cm.Tolerances.uniform(1e-12)) <= 1e-12


def test_check_constraints_same_branch():
    r = cm.check_constraints(tensor([1, 0], E1), tensor([1, 0], E2))
    assert r.c1_chi_overlap == 0
    assert r.c3_bloch_antipodal == pytest.approx(2)
    assert not r.feasible


def test_check_constraints_identical():
    k = tensor([0.6, 0.8], E1)
    r = cm.check_constraints(k, k)
    assert r.c1_chi_overlap == pytest.approx(1)
    assert not r.feasible


def test_check_constraints_ungated_fields():
    k1, k2 = tensor([1, 0], E1), tensor([1, 0], E2)
    r = cm.check_constraints(k1, k2, cm.Tolerances(c3=None))
    assert r.feasible
    assert all(v >= 0 for k, v in r.to_dict().items() if k != "feasible")


def test_check_constraints_dimension_mismatch():
    with pytest.raises(ValueError):
        cm.check_constraints(tensor([1, 0], E1), tensor([1, 0], basis(3, 0)))


@pytest.mark.parametrize("d, seed", [(2, None), (3, 1), (7, 2), (7, None)])
def test_construct_optimal_reduced_states(d, seed):
    pair = (basis(d, 0), basis(d, 1)) if seed is None else random_orthonormal_pair(d, np.random.default_rng(seed))
    chi, chi1, chi2 = cm.construct_optimal(d, *pair)
    rho, rho1, rho2 = (partial_trace_env(k).matrix for k in (chi, chi1, chi2))
    target = np.diag([0.853553, 0.146447])
    np.testing.assert_allclose(rho, target, atol=1e-6)
    np.testing.assert_allclose(rho1, target, atol=1e-6)
    np.testing.assert_allclose(rho2, target[::-1, ::-1], atol=1e-6)
    assert np.max(np.abs(rho - rho1)) <= 1e-12
    assert p_alive(partial_trace_env(chi1)) == pytest.approx(cm.P_ALIVE_MAX, abs=1e-12)
    assert p_dead(partial_trace_env(chi2)) == pytest.approx(cm.P_ALIVE_MAX, abs=1e-12)
    sup = combine(cm.INV_SQRT2, chi1, cm.INV_SQRT2, chi2).ket
    assert state_distance(sup, chi) <= 1e-12
    assert cm.check_constraints(chi1, chi2, cm.Tolerances.uniform(1e-12)).feasible


def test_construct_optimal_errors():
    with pytest.raises(ValueError):
        cm.construct_optimal(1, [1], [1])
    with pytest.raises(ValueError):
        cm.construct_optimal(2, E1, E1)
    with pytest.raises(ValueError):
        cm.construct_optimal(3, E1, E2)


@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_optimal_triple_invariants_any_pair(d, seed):
    chi, chi1, chi2 = cm.construct_optimal(d, *random_orthonormal_pair(d, np.random.default_rng(seed)))
    rho, rho1, rho2 = (partial_trace_env(k) for k in (chi, chi1, chi2))
    assert trace_distance(rho, rho1) <= 1e-12
    p1, p2 = bloch(rho1).as_array(), bloch(rho2).as_array()
    assert np.max(np.abs(p1 + p2)) <= 1e-12
    assert np.max(np.abs(np.concatenate([p1[:2], p2[:2]]))) <= 1e-12


@given(st.integers(2, 6), st.floats(0.05, 0.95), st.integers(0, 2**32 - 1))
def test_branch_orthogonality_implies_chi_orthogonality(d, lam, seed):
    # pick phi so that <phi1|psi1> + <phi2|psi2> = 0: phi = (psi2-rotated, -psi1-rotated)
    r = np.random.default_rng(seed)
    psi1, psi2 = random_orthonormal_pair(d, r)
    theta = r.uniform(0, 2 * np.pi)
    u = np.exp(1j * theta)
    phi1, phi2 = u * psi1, -u * psi2
    c = cm.CatConfiguration(lam, psi1, psi2, phi1, phi2)
    assert cm.chi_orthogonality_residual(c) <= 1e-12
    chi1, chi2 = cm.build_chi_pair(c)
    assert abs(np.vdot(chi1.flat(), chi2.flat())) <= 1e-10


def test_chi_overlap_is_scaled_branch_residual():
    r = np.random.default_rng(3)
    psi1, psi2 = random_orthonormal_pair(4, r)
    phi1, phi2 = random_orthonormal_pair(4, r)
    c = cm.CatConfiguration(0.6, psi1, psi2, phi1, phi2)
    chi1, chi2 = cm.build_chi_pair(c)
    assert abs(np.vdot(chi2.flat(), chi1.flat())) == pytest.approx(
        0.6 * 0.8 * cm.chi_orthogonality_residual(c), abs=1e-14
    )


def test_triplet_states():
    s1, s2, s3 = cm.qubit_triplet()
    assert abs(np.vdot(s1, s2)) <= 1e-12
    assert abs(s1[0]) ** 2 == pytest.approx(0.8535533906, abs=1e-10)
    assert np.linalg.norm(s3) == pytest.approx(1, abs=1e-15)


def test_triplet_bloch_geometry():
    b1, b2, b3 = (b.as_array() for b in cm.triplet_bloch_vectors())
    np.testing.assert_allclose(b2, -b1, atol=1e-12)
    assert abs(b1 @ b3) <= 1e-12 and abs(b2 @ b3) <= 1e-12
    # direct evaluation gives z = (+, -, +), as P_II = -P_I forces
    np.testing.assert_allclose([b1[2], b2[2], b3[2]], [H, -H, H], atol=1e-12)
    assert cm.angle_to_z_deg(cm.triplet_bloch_vectors()[0]) == pytest.approx(45, abs=1e-9)


def test_random_kets_never_beat_bound_when_feasible():
    # coarse sanity: random feasible-by-construction pairs are rare; the optimal
    # pair rotated by a random environment unitary stays optimal
    r = np.random.default_rng(0)
    q, _ = np.linalg.qr(random_unit(16, r).reshape(4, 4) + np.eye(4))
    _, chi1, chi2 = cm.construct_optimal(4, basis(4, 0), basis(4, 1))
    rot1 = BipartiteKet.normalized(chi1.amp @ q.T)
    rot2 = BipartiteKet.normalized(chi2.amp @ q.T)
    rep = cm.check_constraints(rot1, rot2, cm.Tolerances.uniform(1e-12))
    assert rep.feasible
    assert p_alive(partial_trace_env(rot1)) == pytest.approx(cm.P_ALIVE_MAX, abs=1e-12)
