"""Linear maps on matrix spaces: representation, classification, families.

Conventions, fixed once and unit-tested via round-trips:
  - column-stacking vectorization, vec(X)[i + d*j] = X[i, j];
  - a map with Kraus operators {K_i} has representation matrix
    sum_i conj(K_i) kron K_i acting on vec(X);
  - unnormalized Choi matrix C = sum_ij Phi(E_ij) tensor E_ij, so complete
    positivity is equivalent to C being PSD.

Positivity semantics are honest: a certificate is either CompletelyPositive
(Choi checked at certification time), PositiveByConstruction (a family whose
positivity is a theorem), Unverified, or Falsified (a stored pure state whose
image has a negative eigenvalue). Sampling can only falsify, never certify.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DomainError,
    ToleranceConfig,
    as_matrix,
    hermitian_part,
    max_eigenvalue,
    min_eigenvalue,
    operator_norm,
    power_on_support,
    require_projector,
    require_psd,
)
from .divergences import weighted_p_norm
from .sampling import (
    random_hermitian,
    random_isometry,
    random_projector,
    random_unit_vector,
    rng_for_trial,
)

__all__ = [
    "TRACE_TOLERANCE",
    "PositivityCertificate",
    "TraceBehavior",
    "SuperOperator",
    "from_matrix",
    "from_kraus",
    "choi",
    "from_choi",
    "adjoint",
    "compose",
    "trace_behavior",
    "classify",
    "one_to_one_norm_positive",
    "induced_weighted_norm_lower_bound",
    "gamma_superoperator",
    "identity_map",
    "transpose_map",
    "pinching_map",
    "truncation_map",
    "reduction_map",
    "depolarizing_map",
    "halving_map",
    "counterexample_map",
    "random_cptp",
    "random_positive_noncp",
    "damped_cptp",
    "construct",
    "unit_sector_projector",
]

# thresholds fixed by the trace-behavior contract, independent of ToleranceConfig
TRACE_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class PositivityCertificate:
    """Why (or whether) a map is believed positive.

    tag is one of "completely_positive", "positive_by_construction",
    "unverified", "falsified". For falsified certificates ``witness`` holds a
    unit vector whose image under the map has a negative eigenvalue.
    """

    tag: str
    reason: str | None = None
    witness: np.ndarray | None = None

    @property
    def is_positive(self) -> bool:
        return self.tag in ("completely_positive", "positive_by_construction")


UNVERIFIED = PositivityCertificate("unverified")


@dataclass(frozen=True, eq=False)
class TraceBehavior:
    """Trace classification of a map, decided exactly through Phi*(1).

    tag is "preserving" when ||Phi*(1) - 1||_inf <= 1e-9, else "nonincreasing"
    when min_eig(1 - Phi*(1)) >= -1e-9, else "neither".
    """

    tag: str
    adjoint_unit: np.ndarray

    @property
    def is_preserving(self) -> bool:
        return self.tag == "preserving"

    @property
    def is_nonincreasing(self) -> bool:
        return self.tag in ("preserving", "nonincreasing")


def _vec(X: np.ndarray) -> np.ndarray:
    return np.asarray(X, dtype=np.complex128).flatten(order="F")


def _unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return v.reshape(rows, cols, order="F")


@dataclass(frozen=True, eq=False)
class SuperOperator:
    """A linear map on matrices, stored as a dim_out^2 x dim_in^2 matrix.

    ``kraus``, when present, is the evaluation path used by ``apply``; the
    representation matrix always agrees with it on probes within rounding.
    ``descriptor`` records a seeded construction recipe when one exists, so
    the map can be serialized by recipe instead of by payload.
    """

    matrix: np.ndarray
    dim_in: int
    dim_out: int
    kraus: tuple[np.ndarray, ...] | None = None
    certificate: PositivityCertificate = UNVERIFIED
    descriptor: dict | None = None

    def apply(self, X) -> np.ndarray:
        X = as_matrix(X)
        if X.shape != (self.dim_in, self.dim_in):
            raise DomainError(
                f"input shape {X.shape} does not match map input dimension {self.dim_in}"
            )
        if self.kraus is not None:
            out = np.zeros((self.dim_out, self.dim_out), dtype=np.complex128)
            for K in self.kraus:
                out += K @ X @ K.conj().T
            return out
        return _unvec(self.matrix @ _vec(X), self.dim_out, self.dim_out)

    def __call__(self, X) -> np.ndarray:
        return self.apply(X)


def from_matrix(
    M,
    dim_in: int,
    dim_out: int | None = None,
    kraus=None,
    certificate: PositivityCertificate = UNVERIFIED,
    descriptor: dict | None = None,
) -> SuperOperator:
    M = as_matrix(M)
    if dim_out is None:
        dim_out = dim_in
    if M.shape != (dim_out * dim_out, dim_in * dim_in):
        raise DomainError(
            f"representation matrix shape {M.shape} does not match "
            f"({dim_out * dim_out}, {dim_in * dim_in})"
        )
    kr = tuple(as_matrix(K) for K in kraus) if kraus is not None else None
    if kr is not None:
        for K in kr:
            if K.shape != (dim_out, dim_in):
                raise DomainError(f"Kraus operator shape {K.shape} is not ({dim_out}, {dim_in})")
    return SuperOperator(M, dim_in, dim_out, kr, certificate, descriptor)


def _kraus_matrix(kraus) -> np.ndarray:
    return sum(np.kron(K.conj(), K) for K in kraus)


def _cp_certificate(M: np.ndarray, dim_in: int, dim_out: int, cfg: ToleranceConfig) -> PositivityCertificate:
    """Issue a CompletelyPositive certificate only after checking the Choi matrix."""
    C = _choi_of_matrix(M, dim_in, dim_out)
    defect = np.abs(C - C.conj().T).max()
    if defect > cfg.hermiticity_tolerance:
        raise DomainError(f"Choi matrix is not Hermitian (defect {defect:.3e})")
    cmin = float(np.linalg.eigvalsh((C + C.conj().T) / 2)[0])
    if cmin < -cfg.psd_tolerance:
        raise DomainError(f"Choi matrix is not PSD (min eigenvalue {cmin:.3e})")
    return PositivityCertificate("completely_positive", reason=f"choi min eigenvalue {cmin:.3e}")


def from_kraus(kraus, dim_in: int | None = None, dim_out: int | None = None,
               cfg: ToleranceConfig = DEFAULT_TOL, descriptor: dict | None = None) -> SuperOperator:
    kr = tuple(as_matrix(K) for K in kraus)
    if not kr:
        raise DomainError("at least one Kraus operator is required")
    if any(K.shape != kr[0].shape for K in kr):
        raise DomainError("all Kraus operators must share one shape")
    if dim_out is None or dim_in is None:
        dim_out, dim_in = kr[0].shape
    M = _kraus_matrix(kr)
    cert = _cp_certificate(M, dim_in, dim_out, cfg)
    return from_matrix(M, dim_in, dim_out, kraus=kr, certificate=cert, descriptor=descriptor)


def _choi_of_matrix(M: np.ndarray, dim_in: int, dim_out: int) -> np.ndarray:
    T = M.reshape(dim_out, dim_out, dim_in, dim_in, order="F")
    return np.ascontiguousarray(T.transpose(0, 2, 1, 3)).reshape(dim_out * dim_in, dim_out * dim_in)


def choi(phi: SuperOperator) -> np.ndarray:
    """Unnormalized Choi matrix sum_ij Phi(E_ij) tensor E_ij."""
    return _choi_of_matrix(phi.matrix, phi.dim_in, phi.dim_out)


def from_choi(C, dim_in: int, dim_out: int | None = None,
              cfg: ToleranceConfig = DEFAULT_TOL) -> SuperOperator:
    C = as_matrix(C)
    if dim_out is None:
        if C.shape[0] % dim_in != 0:
            raise DomainError(f"Choi dimension {C.shape[0]} is not a multiple of {dim_in}")
        dim_out = C.shape[0] // dim_in
    if C.shape != (dim_out * dim_in, dim_out * dim_in):
        raise DomainError(f"Choi matrix shape {C.shape} does not match dims ({dim_in}, {dim_out})")
    U = C.reshape(dim_out, dim_in, dim_out, dim_in)
    M = np.asfortranarray(U.transpose(0, 2, 1, 3)).reshape(
        dim_out * dim_out, dim_in * dim_in, order="F"
    )
    # a PSD Choi certifies complete positivity on the spot
    try:
        cert = _cp_certificate(M, dim_in, dim_out, cfg)
    except DomainError:
        cert = UNVERIFIED
    return from_matrix(M, dim_in, dim_out, certificate=cert)


def adjoint(phi: SuperOperator) -> SuperOperator:
    """Adjoint map for the Hilbert-Schmidt pairing tr[B^dagger Phi(A)]."""
    kr = tuple(K.conj().T for K in phi.kraus) if phi.kraus is not None else None
    cert = phi.certificate
    if cert.tag == "completely_positive":
        pass  # adjoint of a CP map is CP with the dagger Kraus family
    elif cert.tag == "positive_by_construction":
        cert = PositivityCertificate("positive_by_construction", reason=f"adjoint of: {cert.reason}")
    else:
        cert = UNVERIFIED
    return SuperOperator(
        phi.matrix.conj().T, phi.dim_out, phi.dim_in, kr, cert, None
    )


def compose(outer: SuperOperator, inner: SuperOperator) -> SuperOperator:
    """outer after inner."""
    if inner.dim_out != outer.dim_in:
        raise DomainError(
            f"cannot compose: inner output dim {inner.dim_out} != outer input dim {outer.dim_in}"
        )
    kr = None
    if outer.kraus is not None and inner.kraus is not None:
        kr = tuple(Ko @ Ki for Ko in outer.kraus for Ki in inner.kraus)
    a, b = outer.certificate, inner.certificate
    if a.tag == "completely_positive" and b.tag == "completely_positive":
        cert = PositivityCertificate("completely_positive", reason="composition of CP maps")
    elif a.is_positive and b.is_positive:
        cert = PositivityCertificate(
            "positive_by_construction", reason="composition of positive maps"
        )
    else:
        cert = UNVERIFIED
    desc = None
    if outer.descriptor is not None and inner.descriptor is not None:
        desc = {"family": "compose", "params": {"outer": outer.descriptor, "inner": inner.descriptor}}
    return SuperOperator(outer.matrix @ inner.matrix, inner.dim_in, outer.dim_out, kr, cert, desc)


def _adjoint_unit(phi: SuperOperator) -> np.ndarray:
    if phi.kraus is not None:
        A = sum(K.conj().T @ K for K in phi.kraus)
    else:
        A = _unvec(
            phi.matrix.conj().T @ _vec(np.eye(phi.dim_out)), phi.dim_in, phi.dim_in
        )
    return hermitian_part(A)


def trace_behavior(phi: SuperOperator) -> TraceBehavior:
    """Exact trace classification through Phi*(1)."""
    A = _adjoint_unit(phi)
    eye = np.eye(phi.dim_in)
    if operator_norm(A - eye) <= TRACE_TOLERANCE:
        return TraceBehavior("preserving", A)
    if float(np.linalg.eigvalsh(eye - A)[0]) >= -TRACE_TOLERANCE:
        return TraceBehavior("nonincreasing", A)
    return TraceBehavior("neither", A)


def classify(
    phi: SuperOperator,
    cfg: ToleranceConfig = DEFAULT_TOL,
    sample_count: int = 0,
    seed: int = 0,
) -> tuple[PositivityCertificate, TraceBehavior]:
    """Re-certify positivity and classify trace behavior.

    CP is decided exactly via the Choi minimum eigenvalue. Non-CP maps are
    probed with ``sample_count`` random pure states; sampling below
    -psd_tolerance falsifies, otherwise any construction certificate stands.
    """
    behavior = trace_behavior(phi)
    C = choi(phi)
    defect = np.abs(C - C.conj().T).max()
    if defect <= cfg.hermiticity_tolerance:
        cmin = float(np.linalg.eigvalsh((C + C.conj().T) / 2)[0])
        if cmin >= -cfg.psd_tolerance:
            cert = PositivityCertificate(
                "completely_positive", reason=f"choi min eigenvalue {cmin:.3e}"
            )
            return cert, behavior
    worst = np.inf
    worst_psi = None
    for t in range(sample_count):
        rng = rng_for_trial(seed, t)
        psi = random_unit_vector(rng, phi.dim_in)
        image = hermitian_part(phi.apply(np.outer(psi, psi.conj())))
        m = float(np.linalg.eigvalsh(image)[0])
        if m < worst:
            worst, worst_psi = m, psi
    if worst_psi is not None and worst < -cfg.psd_tolerance:
        cert = PositivityCertificate(
            "falsified", reason=f"pure-state image has min eigenvalue {worst:.3e}", witness=worst_psi
        )
        return cert, behavior
    if phi.certificate.tag == "positive_by_construction":
        return phi.certificate, behavior
    return UNVERIFIED, behavior


def one_to_one_norm_positive(phi: SuperOperator, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """1->1 norm of a certified positive map, equal to ||Phi*(1)||_inf."""
    if not phi.certificate.is_positive:
        raise DomainError(
            "the 1->1 norm formula ||Phi*(1)||_inf is only valid for positive maps; "
            f"certificate tag is {phi.certificate.tag!r}"
        )
    return max_eigenvalue(_adjoint_unit(phi), cfg)


def induced_weighted_norm_lower_bound(
    psi_map: SuperOperator,
    sigma,
    sigma_prime,
    p: float,
    trials: int,
    seed: int,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> float:
    """Sampled lower bound on the induced (p, sigma) -> (p, sigma') norm.

    Probes alternate between Gaussian Hermitian matrices and random rank-1
    matrices; deterministic given (seed, trials).
    """
    sigma = require_psd(sigma, cfg)
    sigma_prime = require_psd(sigma_prime, cfg)
    d = psi_map.dim_in
    best = 0.0
    for t in range(trials):
        rng = rng_for_trial(seed, t)
        if t % 2 == 0:
            X = random_hermitian(rng, d)
        else:
            X = np.outer(random_unit_vector(rng, d), random_unit_vector(rng, d).conj())
        den = weighted_p_norm(X, sigma, p, cfg)
        if den <= 0.0:
            continue
        num = weighted_p_norm(psi_map.apply(X), sigma_prime, p, cfg)
        best = max(best, num / den)
    return best


def gamma_superoperator(sigma, inverse: bool = False, cfg: ToleranceConfig = DEFAULT_TOL) -> SuperOperator:
    """X -> sigma^{1/2} X sigma^{1/2} as a map (inverse powers on the support)."""
    sigma = require_psd(sigma, cfg)
    R = power_on_support(sigma, -0.5 if inverse else 0.5, cfg)
    d = R.shape[0]
    return from_kraus([R], d, d, cfg)


# ---------------------------------------------------------------------------
# map families


def identity_map(d: int, cfg: ToleranceConfig = DEFAULT_TOL) -> SuperOperator:
    if d < 1:
        raise DomainError("dimension must be positive")
    return from_kraus([np.eye(d)], d, d, cfg, descriptor={"family": "identity", "params": {"d": d}})


def transpose_map(d: int) -> SuperOperator:
    """X -> X^T; positive but not CP for d >= 2 (Choi is the SWAP matrix)."""
    if d < 1:
        raise DomainError("dimension must be positive")
    M = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            M[i + d * j, j + d * i] = 1.0
    cert = PositivityCertificate("positive_by_construction", reason="transpose")
    return from_matrix(M, d, d, certificate=cert, descriptor={"family": "transpose", "params": {"d": d}})


def pinching_map(P, cfg: ToleranceConfig = DEFAULT_TOL) -> SuperOperator:
    """X -> P X P + (1-P) X (1-P) for a projector P; CPTP."""
    P = require_projector(P, cfg)
    d = P.shape[0]
    return from_kraus([P, np.eye(d) - P], d, d, cfg)


def truncation_map(base: SuperOperator, P, P_prime, cfg: ToleranceConfig = DEFAULT_TOL) -> SuperOperator:
    """Compress ``base`` between projectors, rerouting the escaped weight.

    A -> P' base(P A P) P' + (P'/tr[P']) tr[base(P A P) (1 - P')].
    Positive and trace-preserving on inputs supported under P when the base
    map is positive and trace-preserving.
    """
    P = require_projector(P, cfg)
    P_prime = require_projector(P_prime, cfg)
    if P.shape[0] != base.dim_in:
        raise DomainError(f"input projector dim {P.shape[0]} != map input dim {base.dim_in}")
    if P_prime.shape[0] != base.dim_out:
        raise DomainError(f"output projector dim {P_prime.shape[0]} != map output dim {base.dim_out}")
    tr_pp = float(np.trace(P_prime).real)
    if tr_pp <= 0.0:
        raise DomainError("output projector must have positive rank")
    d_out = base.dim_out
    compress_in = np.kron(P.conj(), P)
    compress_out = np.kron(P_prime.conj(), P_prime)
    escape = np.eye(d_out) - P_prime
    # tr[Y B] = vec(B^T)^T vec(Y), so the reroute term is a rank-1 update
    reroute = np.outer(_vec(P_prime / tr_pp), _vec(escape.T))
    M = (compress_out + reroute) @ base.matrix @ compress_in
    if base.certificate.is_positive:
        cert = PositivityCertificate("positive_by_construction", reason="truncation of a positive map")
    else:
        cert = UNVERIFIED
    return from_matrix(M, base.dim_in, d_out, certificate=cert)


def reduction_map(d: int) -> SuperOperator:
    """X -> (tr[X] 1 - X)/(d-1); positive and TP, not CP."""
    if d < 2:
        raise DomainError("reduction map needs d >= 2")
    v = _vec(np.eye(d))
    M = (np.outer(v, v) - np.eye(d * d)) / (d - 1)
    cert = PositivityCertificate("positive_by_construction", reason="reduction")
    return from_matrix(M, d, d, certificate=cert, descriptor={"family": "reduction", "params": {"d": d}})


def depolarizing_map(d: int, lam: float, cfg: ToleranceConfig = DEFAULT_TOL) -> SuperOperator:
    """X -> lam X + (1-lam) tr[X] 1/d; CPTP for lam in [0, 1]."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"mixing parameter must be in [0, 1], got {lam}")
    if d < 1:
        raise DomainError("dimension must be positive")
    v = _vec(np.eye(d))
    M = lam * np.eye(d * d) + ((1.0 - lam) / d) * np.outer(v, v)
    cert = _cp_certificate(M, d, d, cfg)
    return from_matrix(
        M, d, d, certificate=cert, descriptor={"family": "depolarizing", "params": {"d": d, "lam": lam}}
    )


def halving_map(d: int, cfg: ToleranceConfig = DEFAULT_TOL) -> SuperOperator:
    """X -> X/2; CP and trace-nonincreasing, not TP."""
    K = np.eye(d) / np.sqrt(2.0)
    return from_kraus([K], d, d, cfg, descriptor={"family": "halving", "params": {"d": d}})


def counterexample_map(cfg: ToleranceConfig = DEFAULT_TOL) -> SuperOperator:
    """The 2x2 map (v w; x y) -> (v/2 0; 0 y).

    CP (diagonal Kraus pair) and trace-nonincreasing but not TP; relative
    entropy between its images can exceed the input relative entropy.
    """
    K1 = np.diag([1.0 / np.sqrt(2.0), 0.0]).astype(np.complex128)
    K2 = np.diag([0.0, 1.0]).astype(np.complex128)
    return from_kraus([K1, K2], 2, 2, cfg, descriptor={"family": "counterexample", "params": {}})


def random_cptp(
    d: int,
    d_out: int | None = None,
    kraus_rank: int | None = None,
    seed=None,
    cfg: ToleranceConfig = DEFAULT_TOL,
    rng: np.random.Generator | None = None,
) -> SuperOperator:
    """Seeded CPTP map: Kraus blocks of a QR-orthonormalized Gaussian isometry."""
    if d_out is None:
        d_out = d
    if kraus_rank is None:
        kraus_rank = d
    if d < 1 or d_out < 1 or kraus_rank < 1:
        raise DomainError("dimensions and Kraus rank must be positive")
    if d_out * kraus_rank < d:
        raise DomainError(f"d_out * kraus_rank = {d_out * kraus_rank} < d = {d}: no isometry exists")
    desc = None
    if rng is None:
        if seed is None:
            raise DomainError("random_cptp requires a seed (or an explicit generator)")
        rng = np.random.default_rng(seed)
        desc = {
            "family": "random_cptp",
            "params": {"d": d, "d_out": d_out, "kraus_rank": kraus_rank},
            "seed": int(seed),
        }
    V = random_isometry(rng, d_out * kraus_rank, d)
    kraus = [V[i * d_out : (i + 1) * d_out, :] for i in range(kraus_rank)]
    return from_kraus(kraus, d, d_out, cfg, descriptor=desc)


def random_positive_noncp(
    d: int,
    seed=None,
    cfg: ToleranceConfig = DEFAULT_TOL,
    rng: np.random.Generator | None = None,
) -> SuperOperator:
    """Transpose composed with a random CPTP map (order decided by the seed)."""
    desc = None
    if rng is None:
        if seed is None:
            raise DomainError("random_positive_noncp requires a seed (or an explicit generator)")
        rng = np.random.default_rng(seed)
        desc = {"family": "random_positive_noncp", "params": {"d": d}, "seed": int(seed)}
    transpose_first = bool(rng.integers(2))
    cptp = random_cptp(d, rng=rng, cfg=cfg)
    T = transpose_map(d)
    out = compose(cptp, T) if transpose_first else compose(T, cptp)
    cert = PositivityCertificate(
        "positive_by_construction", reason="transpose composed with a CPTP map"
    )
    return SuperOperator(out.matrix, d, d, None, cert, desc)


def damped_cptp(
    d: int,
    rank: int,
    mu: float,
    seed=None,
    cfg: ToleranceConfig = DEFAULT_TOL,
    rng: np.random.Generator | None = None,
) -> SuperOperator:
    """Random CPTP map preceded by damping outside a rank-``rank`` subspace.

    Phi*(1) = Q + mu (1 - Q) for a random projector Q, so the map is
    trace-nonincreasing for mu <= 1 and preserves the trace exactly on states
    supported under Q.
    """
    mu = float(mu)
    if not 0.0 <= mu <= 1.0:
        raise DomainError(f"damping parameter must be in [0, 1], got {mu}")
    if not 1 <= rank <= d:
        raise DomainError(f"subspace rank must be in [1, {d}], got {rank}")
    desc = None
    if rng is None:
        if seed is None:
            raise DomainError("damped_cptp requires a seed (or an explicit generator)")
        rng = np.random.default_rng(seed)
        desc = {
            "family": "damped_cptp",
            "params": {"d": d, "rank": rank, "mu": mu},
            "seed": int(seed),
        }
    Q = random_projector(rng, d, rank)
    W = Q + np.sqrt(mu) * (np.eye(d) - Q)
    base = random_cptp(d, rng=rng, cfg=cfg)
    kraus = [K @ W for K in base.kraus]
    return from_kraus(kraus, d, d, cfg, descriptor=desc)


_FACTORIES = {
    "identity": lambda params, seed, cfg: identity_map(params["d"], cfg),
    "transpose": lambda params, seed, cfg: transpose_map(params["d"]),
    "reduction": lambda params, seed, cfg: reduction_map(params["d"]),
    "depolarizing": lambda params, seed, cfg: depolarizing_map(params["d"], params["lam"], cfg),
    "halving": lambda params, seed, cfg: halving_map(params["d"], cfg),
    "counterexample": lambda params, seed, cfg: counterexample_map(cfg),
    "random_cptp": lambda params, seed, cfg: random_cptp(
        params["d"], params.get("d_out"), params.get("kraus_rank"), seed, cfg
    ),
    "random_positive_noncp": lambda params, seed, cfg: random_positive_noncp(params["d"], seed, cfg),
    "damped_cptp": lambda params, seed, cfg: damped_cptp(
        params["d"], params["rank"], params["mu"], seed, cfg
    ),
}


def construct(
    family: str,
    params: dict | None = None,
    seed=None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> SuperOperator:
    """Build a map from a (family, params, seed) recipe.

    Covers every family whose parameters are plain scalars; pinching and
    truncation take operator arguments and have their own constructors.
    """
    if family == "compose":
        inner = construct(**_descriptor_args(params["inner"]), cfg=cfg)
        outer = construct(**_descriptor_args(params["outer"]), cfg=cfg)
        return compose(outer, inner)
    if family not in _FACTORIES:
        raise DomainError(f"unknown map family {family!r}")
    return _FACTORIES[family](params or {}, seed, cfg)


def _descriptor_args(desc: dict) -> dict:
    return {
        "family": desc["family"],
        "params": desc.get("params") or {},
        "seed": desc.get("seed"),
    }


def unit_sector_projector(phi: SuperOperator, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Projector onto the eigenvalue-1 eigenspace of Phi*(1).

    States supported here have their trace preserved exactly by a
    trace-nonincreasing map. Raises when the sector is trivial.
    """
    A = _adjoint_unit(phi)
    w, V = np.linalg.eigh(A)
    on = w >= 1.0 - TRACE_TOLERANCE
    if not on.any():
        raise DomainError("Phi*(1) has no eigenvalue-1 sector")
    Von = V[:, on]
    return Von @ Von.conj().T
