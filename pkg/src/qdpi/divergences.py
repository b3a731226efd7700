"""Entropic divergences between positive semidefinite operators.

Values live on the extended real line: finite floats, or ``math.inf`` when a
support condition fails. Logarithms are natural throughout, so divergences
are measured in nats.

Support conditions use a trace-norm witness: for PSD ``rho`` the mass of rho
outside the support of sigma is ``tr[rho] - tr[rho P_sigma]``, compared
against ``containment_tolerance * tr[rho]``.
"""

from __future__ import annotations

import math

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DomainError,
    ToleranceConfig,
    hermitian_eig,
    log_on_support,
    operator_norm,
    power_on_support,
    require_psd,
    schatten_norm,
    support_projector,
)

__all__ = [
    "support_contained",
    "von_neumann_entropy",
    "relative_entropy",
    "sandwiched_renyi",
    "old_renyi",
    "klein_gap",
    "gamma_map",
    "gamma_inverse",
    "weighted_p_norm",
    "renyi_via_norm",
]


def _pair(rho, sigma, cfg: ToleranceConfig):
    rho = require_psd(rho, cfg)
    sigma = require_psd(sigma, cfg)
    if rho.shape != sigma.shape:
        raise DomainError(f"shape mismatch: {rho.shape} vs {sigma.shape}")
    return rho, sigma


def support_contained(rho, sigma, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether supp(rho) is contained in supp(sigma), up to tolerance.

    Uses ||(1 - P) rho (1 - P)||_1 = tr[rho] - tr[rho P] for the support
    projector P of sigma, measured relative to tr[rho].
    """
    rho, sigma = _pair(rho, sigma, cfg)
    tr_rho = float(np.trace(rho).real)
    if tr_rho <= 0.0:
        return True
    P = support_projector(sigma, cfg)
    leak = tr_rho - float(np.trace(rho @ P).real)
    return leak <= cfg.containment_tolerance * tr_rho


def von_neumann_entropy(rho, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """-tr[rho ln rho] in nats."""
    rho = require_psd(rho, cfg)
    w, _ = hermitian_eig(rho, cfg)
    w = w[w > 0.0]
    return float(-(w * np.log(w)).sum()) if w.size else 0.0


def relative_entropy(rho, sigma, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """tr[rho (ln rho - ln sigma)], or +inf if the support condition fails.

    rho = 0 gives 0 by convention (both sides of any monotonicity statement
    vanish for the zero operator).
    """
    rho, sigma = _pair(rho, sigma, cfg)
    if float(np.trace(rho).real) == 0.0:
        return 0.0
    if not support_contained(rho, sigma, cfg):
        return math.inf
    log_sigma = log_on_support(sigma, cfg)
    w, V = hermitian_eig(rho, cfg)
    pos = w > 0.0
    tr_rho_log_rho = float((w[pos] * np.log(w[pos])).sum()) if pos.any() else 0.0
    tr_rho_log_sigma = float(np.einsum("ij,ji->", rho, log_sigma).real)
    return tr_rho_log_rho - tr_rho_log_sigma


def _renyi_pair(rho, sigma, alpha: float, cfg: ToleranceConfig):
    alpha = float(alpha)
    if not (alpha > 0.0 and alpha != 1.0):
        raise DomainError(f"alpha must be in (0,1) or (1,inf), got {alpha}")
    rho, sigma = _pair(rho, sigma, cfg)
    if float(np.trace(rho).real) == 0.0:
        raise DomainError("Renyi divergence is undefined for rho = 0")
    return rho, sigma, alpha


def sandwiched_renyi(rho, sigma, alpha: float, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """Sandwiched Renyi divergence of order alpha in (0, 1) or (1, inf).

    (1/(alpha-1)) ln tr[(sigma^{(1-alpha)/2a} rho sigma^{(1-alpha)/2a})^alpha].
    For alpha > 1 the support condition applies (+inf on failure). For
    alpha < 1 the same formula is exposed as an extension; the value is +inf
    exactly when the trace vanishes (orthogonal supports).
    """
    rho, sigma, alpha = _renyi_pair(rho, sigma, alpha, cfg)
    if alpha > 1.0 and not support_contained(rho, sigma, cfg):
        return math.inf
    A = power_on_support(sigma, (1.0 - alpha) / (2.0 * alpha), cfg)
    w, _ = hermitian_eig(A @ rho @ A, cfg)
    w = w[w > 0.0]
    if w.size == 0:
        return math.inf
    # log-sum-exp form keeps large alpha from overflowing
    logs = alpha * np.log(w)
    m = float(logs.max())
    log_q = m + math.log(float(np.exp(logs - m).sum()))
    return log_q / (alpha - 1.0)


def old_renyi(rho, sigma, alpha: float, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """Non-sandwiched quantity (1/(alpha-1)) ln tr[rho^alpha sigma^{1-alpha}]."""
    rho, sigma, alpha = _renyi_pair(rho, sigma, alpha, cfg)
    if alpha > 1.0 and not support_contained(rho, sigma, cfg):
        return math.inf
    ra = power_on_support(rho, alpha, cfg)
    sb = power_on_support(sigma, 1.0 - alpha, cfg)
    q = float(np.einsum("ij,ji->", ra, sb).real)
    if q <= 0.0:
        return math.inf
    return math.log(q) / (alpha - 1.0)


def klein_gap(A, B, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """tr[A ln A - A ln B] + tr[B - A] for PSD A, B; nonnegative up to rounding.

    +inf when supp(A) is not contained in supp(B).
    """
    A, B = _pair(A, B, cfg)
    tr_A = float(np.trace(A).real)
    tr_B = float(np.trace(B).real)
    if tr_A == 0.0:
        return tr_B
    if not support_contained(A, B, cfg):
        return math.inf
    w, _ = hermitian_eig(A, cfg)
    pos = w > 0.0
    tr_A_log_A = float((w[pos] * np.log(w[pos])).sum()) if pos.any() else 0.0
    tr_A_log_B = float(np.einsum("ij,ji->", A, log_on_support(B, cfg)).real)
    return tr_A_log_A - tr_A_log_B - tr_A + tr_B


def gamma_map(sigma, X, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """sigma^{1/2} X sigma^{1/2}."""
    sigma = require_psd(sigma, cfg)
    root = power_on_support(sigma, 0.5, cfg)
    return root @ np.asarray(X, dtype=np.complex128) @ root


def gamma_inverse(sigma, X, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """sigma^{-1/2} X sigma^{-1/2} with the inverse taken on the support.

    X must live on supp(sigma): X = P X P up to tolerance. The defect is
    compared against sqrt(containment_tolerance) * ||X||_inf because mass
    epsilon outside the support shows up as sqrt(epsilon) cross blocks.
    """
    sigma = require_psd(sigma, cfg)
    X = np.asarray(X, dtype=np.complex128)
    P = support_projector(sigma, cfg)
    defect = operator_norm(X - P @ X @ P)
    scale = operator_norm(X)
    if scale > 0.0 and defect > math.sqrt(cfg.containment_tolerance) * scale:
        raise DomainError(
            f"input has components off supp(sigma) (defect {defect:.3e}); "
            "restrict it to the support first"
        )
    root = power_on_support(sigma, -0.5, cfg)
    return root @ X @ root


def _require_full_rank(sigma: np.ndarray, cfg: ToleranceConfig) -> None:
    w = np.linalg.eigvalsh(sigma)
    lmax = float(w[-1]) if w.size else 0.0
    if lmax <= 0.0 or float(w[0]) <= cfg.support_cutoff * lmax:
        raise DomainError(
            "sigma is rank-deficient; restrict to its support before taking "
            "weighted norms"
        )


def weighted_p_norm(X, sigma, p: float, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """Weighted norm ||sigma^{1/2p} X sigma^{1/2p}||_p; plain operator norm at p=inf.

    sigma must be full rank (the weights are invertible there); at p = inf the
    weights drop out and the value is the largest singular value of X.
    """
    if p == np.inf or p == math.inf:
        return operator_norm(X)
    p = float(p)
    if p < 1.0:
        raise DomainError(f"weighted norm requires p >= 1, got {p}")
    sigma = require_psd(sigma, cfg)
    _require_full_rank(sigma, cfg)
    root = power_on_support(sigma, 1.0 / (2.0 * p), cfg)
    return schatten_norm(root @ np.asarray(X, dtype=np.complex128) @ root, p)


def renyi_via_norm(rho, sigma, alpha: float, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """Sandwiched divergence written through the weighted norm.

    (alpha/(alpha-1)) ln || sigma^{-1/2} rho sigma^{-1/2} ||_{alpha, sigma}.
    Cross-check path: agrees with ``sandwiched_renyi`` whenever the support
    condition holds. Rank-deficient sigma is handled by compressing both
    operators to supp(sigma) first.
    """
    alpha = float(alpha)
    if alpha <= 1.0:
        raise DomainError(f"norm form needs alpha > 1, got {alpha}")
    rho, sigma = _pair(rho, sigma, cfg)
    if not support_contained(rho, sigma, cfg):
        return math.inf
    w, V = hermitian_eig(sigma, cfg)
    lmax = float(w[-1]) if w.size else 0.0
    on = w > cfg.support_cutoff * lmax if lmax > 0.0 else np.zeros_like(w, dtype=bool)
    if not on.all():
        B = V[:, on]
        sigma = B.conj().T @ sigma @ B
        rho = B.conj().T @ rho @ B
    nrm = weighted_p_norm(gamma_inverse(sigma, rho, cfg), sigma, alpha, cfg)
    if nrm <= 0.0:
        return math.inf
    return (alpha / (alpha - 1.0)) * math.log(nrm)
