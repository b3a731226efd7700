import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdpi.divergences import (
    gamma_inverse,
    gamma_map,
    klein_gap,
    old_renyi,
    relative_entropy,
    renyi_via_norm,
    sandwiched_renyi,
    support_contained,
    von_neumann_entropy,
    weighted_p_norm,
)
from qdpi.linalg import DomainError, operator_norm
from qdpi.sampling import random_density, random_hermitian, random_unitary, rng_for_trial


# Classical oracles on probability vectors, written directly from the
# defining sums. On commuting (diagonal) inputs every matrix divergence
# must reduce to these.

def classical_kl(p, q):
    total = 0.0
    for pi, qi in zip(p, q):
        if pi == 0.0:
            continue
        if qi == 0.0:
            return math.inf
        total += pi * math.log(pi / qi)
    return total


def classical_renyi(p, q, alpha):
    total = 0.0
    for pi, qi in zip(p, q):
        if pi == 0.0:
            continue
        if qi == 0.0:
            return math.inf
        total += pi**alpha * qi ** (1.0 - alpha)
    if total <= 0.0:
        return math.inf
    return math.log(total) / (alpha - 1.0)


def random_prob(rng, d, zero_index=None):
    p = rng.random(d) + 0.05
    if zero_index is not None:
        p[zero_index] = 0.0
    return p / p.sum()


def embed(p, rng=None):
    D = np.diag(p).astype(complex)
    if rng is None:
        return D
    U = random_unitary(rng, len(p))
    return U @ D @ U.conj().T


def test_relative_entropy_matches_classical_kl_on_diagonals():
    for trial in range(50):
        rng = rng_for_trial(101, trial)
        d = int(rng.integers(2, 7))
        p = random_prob(rng, d)
        q = random_prob(rng, d)
        expected = classical_kl(p, q)
        assert relative_entropy(np.diag(p), np.diag(q)) == pytest.approx(expected, abs=1e-12)


def test_renyi_families_match_classical_on_diagonals():
    for trial in range(50):
        rng = rng_for_trial(102, trial)
        d = int(rng.integers(2, 7))
        p = random_prob(rng, d)
        q = random_prob(rng, d)
        for alpha in (0.3, 0.5, 1.5, 2.0, 3.0):
            expected = classical_renyi(p, q, alpha)
            assert sandwiched_renyi(np.diag(p), np.diag(q), alpha) == pytest.approx(expected, abs=1e-11)
            assert old_renyi(np.diag(p), np.diag(q), alpha) == pytest.approx(expected, abs=1e-11)


def test_relative_entropy_is_unitarily_invariant():
    rng = rng_for_trial(103, 0)
    p = random_prob(rng, 4)
    q = random_prob(rng, 4)
    U = random_unitary(rng, 4)
    rho = U @ np.diag(p) @ U.conj().T
    sigma = U @ np.diag(q) @ U.conj().T
    assert relative_entropy(rho, sigma) == pytest.approx(classical_kl(p, q), abs=1e-11)


def test_relative_entropy_fixed_point_values():
    rho = np.diag([1 / 3, 2 / 3])
    sigma = np.diag([2 / 3, 1 / 3])
    assert relative_entropy(rho, sigma) == pytest.approx(math.log(2) / 3, abs=1e-12)
    assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-12)


def test_relative_entropy_support_violation_is_infinite():
    rho = np.diag([1.0, 0.0])
    sigma = np.diag([0.0, 1.0])
    assert relative_entropy(rho, sigma) == math.inf
    # and the reverse orientation too
    assert relative_entropy(sigma, rho) == math.inf


def test_relative_entropy_of_zero_rho_is_zero():
    assert relative_entropy(np.zeros((2, 2)), np.diag([0.5, 0.5])) == 0.0


def test_relative_entropy_unnormalized_inputs():
    # D(a rho || b rho) = a (ln a - ln b) tr[rho] for scaled copies
    rho = np.diag([0.25, 0.75])
    a, b = 2.0, 0.5
    expected = a * math.log(a / b)
    assert relative_entropy(a * rho, b * rho) == pytest.approx(expected, abs=1e-12)


def test_renyi_rejects_zero_rho_and_bad_alpha():
    sigma = np.diag([0.5, 0.5])
    with pytest.raises(DomainError):
        sandwiched_renyi(np.zeros((2, 2)), sigma, 2.0)
    with pytest.raises(DomainError):
        old_renyi(np.zeros((2, 2)), sigma, 2.0)
    for alpha in (-1.0, 0.0, 1.0):
        with pytest.raises(DomainError):
            sandwiched_renyi(sigma, sigma, alpha)


def test_sandwiched_support_rules_differ_across_one():
    rho = np.diag([0.5, 0.5])
    sigma = np.diag([1.0, 0.0])
    # alpha > 1 diverges on support violation
    assert sandwiched_renyi(rho, sigma, 2.0) == math.inf
    # alpha < 1 stays finite while the sandwiched trace is positive
    assert math.isfinite(sandwiched_renyi(rho, sigma, 0.5))
    # orthogonal supports kill the trace for alpha < 1
    assert sandwiched_renyi(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), 0.5) == math.inf


def test_sandwiched_known_value_pure_vs_mixed():
    # D_2(|0><0| || I/2) = 2 ln 2 - ln 2 = ln 2
    rho = np.diag([1.0, 0.0])
    sigma = np.eye(2) / 2.0
    assert sandwiched_renyi(rho, sigma, 2.0) == pytest.approx(math.log(2), abs=1e-12)


def test_sandwiched_is_nondecreasing_in_alpha():
    for trial in range(20):
        rng = rng_for_trial(104, trial)
        rho = random_density(rng, 3)
        sigma = random_density(rng, 3)
        grid = (0.4, 0.7, 1.3, 2.0, 4.0)
        values = [sandwiched_renyi(rho, sigma, a) for a in grid]
        assert all(values[i] <= values[i + 1] + 1e-10 for i in range(len(values) - 1))


def test_sandwiched_at_most_old_renyi():
    for trial in range(20):
        rng = rng_for_trial(105, trial)
        rho = random_density(rng, 3)
        sigma = random_density(rng, 3)
        for alpha in (1.5, 2.0, 3.0):
            assert sandwiched_renyi(rho, sigma, alpha) <= old_renyi(rho, sigma, alpha) + 1e-10


def test_alpha_to_one_limit_approaches_relative_entropy():
    rng = rng_for_trial(106, 0)
    rho = random_density(rng, 4)
    sigma = random_density(rng, 4)
    target = relative_entropy(rho, sigma)
    assert sandwiched_renyi(rho, sigma, 1.0 + 1e-5) == pytest.approx(target, abs=1e-4)


def test_von_neumann_entropy_values():
    assert von_neumann_entropy(np.eye(3) / 3.0) == pytest.approx(math.log(3), abs=1e-12)
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == pytest.approx(0.0, abs=1e-12)
    assert von_neumann_entropy(np.diag([1 / 3, 2 / 3])) == pytest.approx(
        -(1 / 3) * math.log(1 / 3) - (2 / 3) * math.log(2 / 3), abs=1e-12
    )


def test_klein_gap_nonnegative_and_exact_cases():
    # tr[A ln A - A ln B] + tr[B - A] >= 0 with equality at A = B
    A = np.diag([0.2, 0.8])
    assert klein_gap(A, A) == pytest.approx(0.0, abs=1e-12)
    # closed form: (1/2) ln(1/2) + 1/2
    fixed = klein_gap(np.diag([0.5, 0.0]), np.diag([1.0, 0.0]))
    assert fixed == pytest.approx(0.5 * math.log(0.5) + 0.5, abs=1e-12)
    for trial in range(25):
        rng = rng_for_trial(107, trial)
        A = random_density(rng, 3) * float(rng.uniform(0.2, 2.0))
        B = random_density(rng, 3) * float(rng.uniform(0.2, 2.0))
        assert klein_gap(A, B) >= -1e-10


def test_klein_gap_zero_A_returns_trace_of_B():
    B = np.diag([0.3, 0.4])
    assert klein_gap(np.zeros((2, 2)), B) == pytest.approx(0.7, abs=1e-12)


def test_klein_gap_support_violation_is_infinite():
    assert klein_gap(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == math.inf


def test_support_contained_cases():
    assert support_contained(np.diag([0.5, 0.0]), np.diag([1.0, 0.0]))
    assert not support_contained(np.diag([0.5, 0.5]), np.diag([1.0, 0.0]))


def test_gamma_round_trip_on_full_rank():
    rng = rng_for_trial(108, 0)
    sigma = random_density(rng, 3)
    X = random_hermitian(rng, 3)
    Y = gamma_inverse(sigma, gamma_map(sigma, X))
    assert np.allclose(Y, X, atol=1e-9)


def test_gamma_inverse_rejects_off_support_mass():
    sigma = np.diag([1.0, 0.0])
    X = np.array([[0.3, 0.0], [0.0, 0.7]])
    with pytest.raises(DomainError):
        gamma_inverse(sigma, X)


def test_weighted_norm_diagonal_oracle():
    # ||X||_{p,sigma} = ||sigma^{1/2p} X sigma^{1/2p}||_p; diagonal case is elementwise
    sigma = np.diag([0.25, 0.75])
    X = np.diag([2.0, -1.0])
    p = 2.0
    weights = np.diag(sigma) ** (1.0 / (2.0 * p))
    scaled = np.diag(np.diag(X) * weights * weights)
    expected = (np.sum(np.abs(np.diag(scaled)) ** p)) ** (1.0 / p)
    assert weighted_p_norm(X, sigma, p) == pytest.approx(expected, abs=1e-12)


def test_weighted_norm_requires_full_rank_sigma():
    with pytest.raises(DomainError):
        weighted_p_norm(np.eye(2), np.diag([1.0, 0.0]), 2.0)


def test_weighted_norm_p_infinity_and_identity_weight():
    rng = rng_for_trial(109, 0)
    X = random_hermitian(rng, 3)
    assert weighted_p_norm(X, np.eye(3) / 3.0, math.inf) == pytest.approx(operator_norm(X), abs=1e-10)


def test_renyi_via_norm_matches_direct_formula():
    for trial in range(15):
        rng = rng_for_trial(110, trial)
        rho = random_density(rng, 3)
        sigma = random_density(rng, 3)
        for alpha in (1.5, 2.0, 3.0):
            assert renyi_via_norm(rho, sigma, alpha) == pytest.approx(
                sandwiched_renyi(rho, sigma, alpha), abs=1e-10
            )


def test_renyi_via_norm_handles_rank_deficient_sigma():
    # rho supported inside supp(sigma): both routes agree after compression
    rho = np.diag([0.4, 0.6, 0.0])
    sigma = np.diag([0.5, 0.5, 0.0])
    assert renyi_via_norm(rho, sigma, 2.0) == pytest.approx(
        sandwiched_renyi(rho, sigma, 2.0), abs=1e-10
    )
    # support violation diverges
    assert renyi_via_norm(np.diag([0.0, 0.0, 1.0]), sigma, 2.0) == math.inf


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.sampled_from([2, 3, 4]))
def test_relative_entropy_nonnegative_on_density_pairs(trial, d):
    # Klein inequality: D >= 0 for unit-trace pairs
    rng = rng_for_trial(111, trial)
    rho = random_density(rng, d)
    sigma = random_density(rng, d)
    assert relative_entropy(rho, sigma) >= -1e-11


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_weighted_norm_scales_linearly(trial):
    rng = rng_for_trial(112, trial)
    sigma = random_density(rng, 3)
    X = random_hermitian(rng, 3)
    c = float(rng.uniform(0.1, 5.0))
    assert weighted_p_norm(c * X, sigma, 2.0) == pytest.approx(
        c * weighted_p_norm(X, sigma, 2.0), rel=1e-10
    )


def test_renyi_families_are_unitarily_invariant():
    for trial in range(10):
        rng = rng_for_trial(108, trial)
        d = int(rng.integers(2, 5))
        rho = random_density(rng, d)
        sigma = random_density(rng, d)
        U = random_unitary(rng, d)
        ru = U @ rho @ U.conj().T
        su = U @ sigma @ U.conj().T
        for alpha in (0.5, 1.5, 2.0, 3.0):
            assert sandwiched_renyi(ru, su, alpha) == pytest.approx(
                sandwiched_renyi(rho, sigma, alpha), abs=1e-9
            )
            assert old_renyi(ru, su, alpha) == pytest.approx(
                old_renyi(rho, sigma, alpha), abs=1e-9
            )


def test_relative_entropy_scaling_identity():
    # D(rho || sigma) = c (D(rho/c || sigma) + ln c) for tr[rho] = c > 0
    for trial in range(10):
        rng = rng_for_trial(109, trial)
        d = int(rng.integers(2, 5))
        c = float(rng.uniform(0.2, 3.0))
        rho = random_density(rng, d) * c
        sigma = random_density(rng, d)
        lhs = relative_entropy(rho, sigma)
        rhs = c * (relative_entropy(rho / c, sigma) + math.log(c))
        assert lhs == pytest.approx(rhs, abs=1e-9)


def test_weighted_norm_approaches_sup_norm():
    # || X ||_{p, sigma} -> || X ||_inf as p grows; gap shrinks monotonically
    # and is within 5% by p = 128
    for trial in range(8):
        rng = rng_for_trial(110, trial)
        d = int(rng.integers(2, 5))
        X = random_hermitian(rng, d)
        sigma = random_density(rng, d)
        sup = operator_norm(X)
        gaps = [abs(weighted_p_norm(X, sigma, p) - sup) for p in (2.0, 8.0, 32.0, 128.0)]
        assert all(gaps[i + 1] <= gaps[i] + 1e-12 for i in range(len(gaps) - 1))
        assert gaps[-1] <= 0.05 * sup
