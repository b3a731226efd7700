import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdpi.linalg import (
    DEFAULT_TOL,
    DomainError,
    ToleranceConfig,
    hermitian_eig,
    hermitian_part,
    log_on_support,
    matrix_function_on_support,
    max_eigenvalue,
    min_eigenvalue,
    operator_norm,
    power_on_support,
    require_hermitian,
    require_projector,
    require_psd,
    schatten_norm,
    support_projector,
    trace_norm,
)
from qdpi.sampling import random_hermitian, random_psd, random_unitary, rng_for_trial


def test_tolerance_config_rejects_negative_values():
    with pytest.raises(DomainError):
        ToleranceConfig(support_cutoff=-1e-12)


def test_require_hermitian_accepts_and_symmetrizes():
    A = np.array([[1.0, 2.0 + 1j], [2.0 - 1j, 3.0]])
    B = require_hermitian(A)
    assert np.allclose(B, B.conj().T)


def test_require_hermitian_rejects_large_defect():
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(DomainError):
        require_hermitian(A)


def test_require_psd_rejects_negative_eigenvalue():
    with pytest.raises(DomainError):
        require_psd(np.diag([1.0, -1e-3]))


def test_require_projector_accepts_exact_and_rejects_scaled():
    P = np.diag([1.0, 0.0, 1.0])
    require_projector(P)
    with pytest.raises(DomainError):
        require_projector(0.5 * P)


def test_hermitian_eig_is_ascending():
    rng = rng_for_trial(0, 0)
    w, V = hermitian_eig(random_hermitian(rng, 5))
    assert np.all(np.diff(w) >= 0)
    # eigenvector reconstruction
    A = (V * w) @ V.conj().T
    assert np.allclose(A, A.conj().T)


def test_support_projector_of_diagonal():
    P = support_projector(np.diag([0.0, 2.0, 0.0, 1e-3]))
    assert np.allclose(P, np.diag([0.0, 1.0, 0.0, 1.0]))


def test_support_projector_of_zero_matrix_is_zero():
    P = support_projector(np.zeros((3, 3)))
    assert np.allclose(P, 0.0)


def test_log_on_support_diagonal_oracle():
    # off-support entries map to 0, on-support entries to their log
    A = np.diag([math.e, 0.0, 1.0])
    L = log_on_support(A)
    assert np.allclose(L, np.diag([1.0, 0.0, 0.0]), atol=1e-14)


def test_power_on_support_diagonal_oracle():
    A = np.diag([4.0, 0.0, 9.0])
    R = power_on_support(A, 0.5)
    assert np.allclose(R, np.diag([2.0, 0.0, 3.0]), atol=1e-14)


def test_matrix_function_dispatcher_matches_direct_calls():
    rng = rng_for_trial(1, 1)
    A = random_psd(rng, 4)
    assert np.allclose(matrix_function_on_support(A, "log"), log_on_support(A))
    assert np.allclose(matrix_function_on_support(A, ("power", 0.5)), power_on_support(A, 0.5))
    with pytest.raises(DomainError):
        matrix_function_on_support(A, "exp")


def test_power_on_support_unitary_covariance():
    rng = rng_for_trial(2, 0)
    A = random_psd(rng, 4)
    U = random_unitary(rng, 4)
    lhs = power_on_support(U @ A @ U.conj().T, 0.3)
    rhs = U @ power_on_support(A, 0.3) @ U.conj().T
    assert np.allclose(lhs, rhs, atol=1e-11)


def test_schatten_norm_known_values():
    X = np.diag([3.0, -4.0])
    assert schatten_norm(X, 1) == pytest.approx(7.0, abs=1e-12)
    assert schatten_norm(X, 2) == pytest.approx(5.0, abs=1e-12)
    assert schatten_norm(X, math.inf) == pytest.approx(4.0, abs=1e-12)
    assert trace_norm(X) == pytest.approx(7.0, abs=1e-12)
    assert operator_norm(X) == pytest.approx(4.0, abs=1e-12)


def test_schatten_norm_rejects_p_below_one():
    with pytest.raises(DomainError):
        schatten_norm(np.eye(2), 0.5)


def test_schatten_norm_overflow_safe():
    X = np.diag([1e200, 1e200])
    assert schatten_norm(X, 3) == pytest.approx(2 ** (1 / 3) * 1e200, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_schatten_norm_decreases_in_p(trial):
    # ||X||_p is nonincreasing in p on [1, inf]
    rng = rng_for_trial(99, trial)
    X = random_hermitian(rng, 4)
    values = [schatten_norm(X, p) for p in (1, 1.5, 2, 4, math.inf)]
    assert all(values[i] + 1e-10 >= values[i + 1] for i in range(len(values) - 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_schatten_norm_triangle_inequality(trial):
    rng = rng_for_trial(98, trial)
    X = random_hermitian(rng, 3)
    Y = random_hermitian(rng, 3)
    for p in (1, 2, math.inf):
        assert schatten_norm(X + Y, p) <= schatten_norm(X, p) + schatten_norm(Y, p) + 1e-10


def test_min_max_eigenvalue_consistency():
    A = np.diag([-2.0, 5.0, 0.5])
    assert min_eigenvalue(A) == pytest.approx(-2.0, abs=1e-12)
    assert max_eigenvalue(A) == pytest.approx(5.0, abs=1e-12)


def test_hermitian_part_projects_onto_hermitian_matrices():
    X = np.array([[1.0, 2.0], [0.0, 1.0]], dtype=complex)
    H = hermitian_part(X)
    assert np.allclose(H, H.conj().T)
    assert np.allclose(H, np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_support_projector_respects_relative_cutoff():
    # 1e-6 is above the default relative cutoff, so it stays in the support
    A = np.diag([1.0, 1e-6])
    P = support_projector(A, DEFAULT_TOL)
    assert np.allclose(P, np.eye(2))


def test_hermitian_eig_reconstructs_input():
    for trial in range(20):
        rng = rng_for_trial(11, trial)
        d = int(rng.integers(2, 7))
        A = random_hermitian(rng, d)
        w, V = hermitian_eig(A)
        assert np.max(np.abs((V * w) @ V.conj().T - A)) <= 1e-10


def test_support_projector_idempotent_compression():
    # PSD matrices live on their support: P A P = A
    for trial in range(20):
        rng = rng_for_trial(12, trial)
        d = int(rng.integers(2, 7))
        A = random_psd(rng, d, rank=int(rng.integers(1, d + 1)))
        P = support_projector(A)
        assert np.max(np.abs(P @ A @ P - A)) <= 1e-10


def test_power_on_support_composes():
    # square root applied twice equals the fourth root
    for trial in range(15):
        rng = rng_for_trial(13, trial)
        d = int(rng.integers(2, 6))
        A = random_psd(rng, d, rank=int(rng.integers(1, d + 1)))
        half = power_on_support(A, 0.5)
        assert np.max(np.abs(power_on_support(half, 0.5) - power_on_support(A, 0.25))) <= 1e-9


def test_trace_norm_duality_lower_bound():
    # ||X||_1 = max_U |tr[U X]|; random unitaries lower-bound it and the
    # SVD-derived unitary attains it
    for trial in range(10):
        rng = rng_for_trial(14, trial)
        d = int(rng.integers(2, 6))
        X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        t1 = trace_norm(X)
        for _ in range(50):
            U = random_unitary(rng, d)
            assert abs(np.trace(U @ X)) <= t1 + 1e-10
        W, _, Vh = np.linalg.svd(X)
        assert abs(np.trace((Vh.conj().T @ W.conj().T) @ X)) == pytest.approx(t1, abs=1e-10)
