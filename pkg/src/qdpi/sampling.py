"""Seeded random generators for states, observables, and projectors.

All generators accept an ``np.random.Generator``. Suites derive per-trial
generators as ``np.random.default_rng([seed, trial])`` so any single trial
can be replayed without rerunning the ones before it.
"""

from __future__ import annotations

import numpy as np

from .linalg import DomainError, hermitian_eig

__all__ = [
    "rng_for_trial",
    "random_complex_gaussian",
    "random_unit_vector",
    "random_isometry",
    "random_unitary",
    "random_hermitian",
    "random_psd",
    "random_density",
    "random_rank_deficient_density",
    "random_projector",
]


def rng_for_trial(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial of a seeded suite."""
    return np.random.default_rng([seed, trial])


def random_complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """IID standard complex Gaussian entries."""
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unit_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    v = random_complex_gaussian(rng, d)
    return v / np.linalg.norm(v)


def random_isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """QR-orthonormalized Gaussian isometry V with V^dagger V = identity."""
    if rows < cols:
        raise DomainError(f"isometry needs rows >= cols, got {rows} < {cols}")
    G = random_complex_gaussian(rng, (rows, cols))
    Q, R = np.linalg.qr(G)
    phases = np.diag(R).copy()
    phases /= np.abs(phases)
    return Q * phases


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-distributed unitary via QR with phase fixing."""
    return random_isometry(rng, d, d)


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    G = random_complex_gaussian(rng, (d, d))
    return (G + G.conj().T) / 2


def random_psd(rng: np.random.Generator, d: int, rank: int | None = None) -> np.ndarray:
    """Wishart matrix G G^dagger with G of shape (d, rank)."""
    if rank is None:
        rank = d
    if not 1 <= rank <= d:
        raise DomainError(f"rank must be in [1, {d}], got {rank}")
    G = random_complex_gaussian(rng, (d, rank))
    return G @ G.conj().T


def random_density(rng: np.random.Generator, d: int, rank: int | None = None) -> np.ndarray:
    """Unit-trace Wishart state, full rank by default."""
    W = random_psd(rng, d, rank)
    return W / np.trace(W).real


def random_rank_deficient_density(rng: np.random.Generator, d: int) -> np.ndarray:
    """Full-dimension state with its smallest eigenvalue zeroed out exactly."""
    if d < 2:
        raise DomainError("rank-deficient state needs d >= 2")
    rho = random_density(rng, d)
    w, V = hermitian_eig(rho)
    w = w.copy()
    w[0] = 0.0
    w /= w.sum()
    return (V * w) @ V.conj().T


def random_projector(rng: np.random.Generator, d: int, rank: int) -> np.ndarray:
    """Rank-``rank`` orthogonal projector with Haar-random range."""
    if not 0 <= rank <= d:
        raise DomainError(f"projector rank must be in [0, {d}], got {rank}")
    if rank == 0:
        return np.zeros((d, d), dtype=np.complex128)
    U = random_unitary(rng, d)
    V = U[:, :rank]
    return V @ V.conj().T
