import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kaoncp.bloch import (
    K,
    K1,
    K2,
    KBAR,
    SIGMA,
    NotHermiticityPreservingError,
    apply_bloch_map,
    bloch2_to_matrix,
    bloch_to_matrix,
    matrix_to_bloch,
    matrix_to_bloch2,
    projector,
    superop_to_bloch,
)
from kaoncp.linalg import NonHermitianError, psd_check
from oracles import random_hermitian

EPS = [[[0, 0, 0], [0, 0, 1], [0, -1, 0]], [[0, 0, -1], [0, 0, 0], [1, 0, 0]], [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]]


def test_pauli_algebra():
    for m in range(4):
        for n in range(4):
            assert np.trace(SIGMA[m] @ SIGMA[n]) == 2 * (m == n)
    for i in range(3):
        for j in range(3):
            rhs = (i == j) * SIGMA[0] + 1j * sum(EPS[i][j][k] * SIGMA[k + 1] for k in range(3))
            np.testing.assert_array_equal(SIGMA[i + 1] @ SIGMA[j + 1], rhs)


def test_kaon_basis():
    for v in (K1, K2, K, KBAR):
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-15)
    assert np.vdot(K1, K2) == 0
    np.testing.assert_allclose((K + KBAR) / np.sqrt(2), K1, atol=1e-15)
    np.testing.assert_allclose((K - KBAR) / np.sqrt(2), K2, atol=1e-15)


def test_examples():
    np.testing.assert_array_equal(matrix_to_bloch(np.eye(2) / 2), [0.5, 0, 0, 0])
    np.testing.assert_array_equal(matrix_to_bloch(projector(K1)), [0.5, 0, 0, 0.5])
    np.testing.assert_array_equal(bloch_to_matrix([0.5, 0, 0, 0]), np.eye(2) / 2)
    np.testing.assert_array_equal(bloch_to_matrix([0.5, 0, 0, 0.5]), np.diag([1, 0]))


def test_round_trip_random(rng):
    for _ in range(1000):
        m = random_hermitian(rng, 2)
        assert np.abs(bloch_to_matrix(matrix_to_bloch(m)) - m).max() < 1e-14 * max(1, np.abs(m).max())
        r = rng.normal(size=4)
        np.testing.assert_allclose(matrix_to_bloch(bloch_to_matrix(r)), r, atol=1e-14)
        assert np.trace(bloch_to_matrix(r)).real == pytest.approx(2 * r[0], abs=1e-14)


def test_round_trip_two_kaon(rng):
    for _ in range(100):
        m = random_hermitian(rng, 4)
        np.testing.assert_allclose(bloch2_to_matrix(matrix_to_bloch2(m)), m, atol=1e-14)


def test_rejects_non_hermitian():
    with pytest.raises(NonHermitianError):
        matrix_to_bloch(np.array([[0, 1], [0, 0]]))


@settings(max_examples=200, deadline=None)
@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_positivity_is_ball_condition(x, y, z):
    r = np.array([0.5, x, y, z])
    inside = np.linalg.norm(r[1:]) <= 0.5
    ok, _ = psd_check(bloch_to_matrix(r))
    if abs(np.linalg.norm(r[1:]) - 0.5) > 1e-9:
        assert ok == inside


def test_superop_identity():
    np.testing.assert_array_equal(superop_to_bloch(lambda rho: rho), np.eye(4))


def test_superop_sigma_x_conjugation():
    f = superop_to_bloch(lambda rho: SIGMA[1] @ rho @ SIGMA[1])
    np.testing.assert_array_equal(f, np.diag([1.0, 1.0, -1.0, -1.0]))


def test_superop_rejects_non_hermiticity_preserving():
    with pytest.raises(NotHermiticityPreservingError, match="defect"):
        superop_to_bloch(lambda rho: 1j * rho)


def test_apply_bloch_map_is_linear_extension(rng):
    # conjugation by a random unitary, checked on non-Hermitian inputs too
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    f = superop_to_bloch(lambda rho: q @ rho @ q.conj().T)
    for _ in range(20):
        x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        np.testing.assert_allclose(apply_bloch_map(f, x), q @ x @ q.conj().T, atol=1e-13)
