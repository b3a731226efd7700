"""Seeded verification suites for divergence monotonicity.

Each suite turns an inequality into deterministic pass/fail trials with a
structured, serializable report. Determinism contract: identical (seed,
parameters) produce bit-identical reports modulo runtime_ms. Per-trial
randomness comes from counter-derived sub-streams (``rng_for_trial``), so
any single trial can be replayed without running the ones before it.

Witness gap semantics: monotonicity witnesses store the two divergence
values and gap = lhs - rhs; the inequality asserts lhs >= rhs, and a pair
with both sides infinite is a vacuous pass recorded with gap 0. Threshold
witnesses (norm contraction, step-2, limit checks) store the allowed bound
as lhs and the observed value as rhs, so gap >= 0 is again a pass.

Failure policy: a trial whose gap breaches the slack is re-judged once at
ten times the slack before being recorded as a failure ("escalation"); this
separates conditioning artifacts near rank deficiency from real violations.
"""

from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DomainError,
    ToleranceConfig,
    hermitian_part,
    log_on_support,
    min_eigenvalue,
    operator_norm,
    require_psd,
    support_projector,
    trace_norm,
)
from .divergences import klein_gap, relative_entropy, sandwiched_renyi, old_renyi, von_neumann_entropy, support_contained, weighted_p_norm
from .channels import (
    SuperOperator,
    compose,
    counterexample_map,
    damped_cptp,
    depolarizing_map,
    from_kraus,
    gamma_superoperator,
    halving_map,
    one_to_one_norm_positive,
    pinching_map,
    random_cptp,
    random_positive_noncp,
    reduction_map,
    trace_behavior,
    truncation_map,
    unit_sector_projector,
)
from .sampling import (
    random_complex_gaussian,
    random_density,
    random_hermitian,
    random_projector,
    random_psd,
    random_rank_deficient_density,
    random_unit_vector,
    rng_for_trial,
)
from . import serialize
from .serialize import SCHEMA_VERSION, decode_extended, encode_extended

__all__ = [
    "TRACE_MATCH_TOLERANCE",
    "VIOLATION_MARGIN",
    "Witness",
    "CheckReport",
    "witness_to_dict",
    "witness_from_dict",
    "report_to_dict",
    "report_from_dict",
    "monotonicity_check",
    "replay_witness",
    "counterexample_suite",
    "randomized_dpi_suite",
    "norm_contraction_suite",
    "contraction_battery",
    "step2_suite",
    "step2_battery",
    "auxiliary_inequality_suite",
    "alpha_limit_suite",
    "violation_search",
    "sample_state_pairs",
    "TP_FAMILIES",
    "TNI_FAMILIES",
    "TRACE_MATCH_FAMILIES",
    "DEFAULT_ALPHAS",
    "DEFAULT_EPS_GRID",
]

TRACE_MATCH_TOLERANCE = 1e-9
VIOLATION_MARGIN = 1e-6

TP_FAMILIES = ("random_cptp", "random_positive_noncp", "reduction", "pinching", "depolarizing")
TNI_FAMILIES = TP_FAMILIES + ("halving", "counterexample")
TRACE_MATCH_FAMILIES = ("counterexample", "damped_cptp", "truncation")
DEFAULT_ALPHAS = (1.1, 1.25, 1.5, 2.0, 3.0, 5.0)
DEFAULT_EPS_GRID = (1e-1, 1e-2, 1e-3, 1e-4)


@dataclass(frozen=True, eq=False)
class Witness:
    """One checked instance, fully serialized for exact replay."""

    map_descriptor: dict
    rho: dict
    sigma: dict
    alpha: float | None
    lhs: float
    rhs: float
    gap: float

    @property
    def both_infinite(self) -> bool:
        return math.isinf(self.lhs) and math.isinf(self.rhs)


@dataclass(frozen=True, eq=False)
class CheckReport:
    """Aggregated outcome of one suite run; passes + len(failures) = trials."""

    suite_name: str
    seed: int
    trials: int
    passes: int
    failures: tuple
    min_gap: float | None
    runtime_ms: int
    config: dict
    escalations: int = 0
    outcome: str | None = None
    best_witness: Witness | None = None

    @property
    def passed(self) -> bool:
        return self.passes == self.trials


def witness_to_dict(w: Witness) -> dict:
    return {
        "map": w.map_descriptor,
        "rho": w.rho,
        "sigma": w.sigma,
        "alpha": None if w.alpha is None else float(w.alpha),
        "lhs": encode_extended(w.lhs),
        "rhs": encode_extended(w.rhs),
        "gap": encode_extended(w.gap),
    }


def witness_from_dict(d: dict) -> Witness:
    return Witness(
        map_descriptor=d["map"],
        rho=d["rho"],
        sigma=d["sigma"],
        alpha=None if d.get("alpha") is None else float(d["alpha"]),
        lhs=decode_extended(d["lhs"]),
        rhs=decode_extended(d["rhs"]),
        gap=decode_extended(d["gap"]),
    )


def report_to_dict(r: CheckReport) -> dict:
    """Canonical report payload; min_gap "both-infinite" means no trial recorded a gap."""
    return {
        "schema_version": SCHEMA_VERSION,
        "suite_name": r.suite_name,
        "seed": int(r.seed),
        "trials": int(r.trials),
        "passes": int(r.passes),
        "escalations": int(r.escalations),
        "min_gap": "both-infinite" if r.min_gap is None else encode_extended(r.min_gap),
        "outcome": r.outcome,
        "best_witness": None if r.best_witness is None else witness_to_dict(r.best_witness),
        "failures": [witness_to_dict(w) for w in r.failures],
        "runtime_ms": int(r.runtime_ms),
        "config": r.config,
    }


def report_from_dict(d: dict) -> CheckReport:
    if d.get("schema_version") != SCHEMA_VERSION:
        raise serialize.FormatError(f"unsupported schema_version {d.get('schema_version')!r}")
    min_gap = d["min_gap"]
    return CheckReport(
        suite_name=d["suite_name"],
        seed=int(d["seed"]),
        trials=int(d["trials"]),
        passes=int(d["passes"]),
        failures=tuple(witness_from_dict(w) for w in d["failures"]),
        min_gap=None if min_gap == "both-infinite" else decode_extended(min_gap),
        runtime_ms=int(d["runtime_ms"]),
        config=d["config"],
        escalations=int(d.get("escalations", 0)),
        outcome=d.get("outcome"),
        best_witness=None if d.get("best_witness") is None else witness_from_dict(d["best_witness"]),
    )


def _tolerances_dict(cfg: ToleranceConfig) -> dict:
    return {k: float(v) for k, v in dataclasses.asdict(cfg).items()}


def _gap_of(lhs: float, rhs: float) -> float:
    if math.isinf(lhs) and math.isinf(rhs):
        return 0.0
    if math.isinf(lhs):
        return math.inf
    if math.isinf(rhs):
        return -math.inf
    return lhs - rhs


def _evaluate(phi: SuperOperator, rho, sigma, family: str, alpha: float | None, cfg: ToleranceConfig):
    """Both divergence values across the map, plus the gap."""
    image_rho = hermitian_part(phi.apply(rho))
    image_sigma = hermitian_part(phi.apply(sigma))
    if family == "umegaki":
        fn = lambda a, b: relative_entropy(a, b, cfg)
    elif family == "sandwiched":
        fn = lambda a, b: sandwiched_renyi(a, b, alpha, cfg)
    elif family == "old":
        fn = lambda a, b: old_renyi(a, b, alpha, cfg)
    else:
        raise DomainError(f"unknown divergence family {family!r}")
    lhs = fn(rho, sigma)
    rhs = fn(image_rho, image_sigma)
    return lhs, rhs, _gap_of(lhs, rhs)


def _monotonicity_witness(phi, rho, sigma, family, alpha, cfg) -> Witness:
    lhs, rhs, gap = _evaluate(phi, rho, sigma, family, alpha, cfg)
    return Witness(
        map_descriptor=serialize.channel_to_dict(phi),
        rho=serialize.matrix_to_dict(rho, "psd", cfg),
        sigma=serialize.matrix_to_dict(sigma, "psd", cfg),
        alpha=alpha,
        lhs=lhs,
        rhs=rhs,
        gap=gap,
    )


def monotonicity_check(
    phi: SuperOperator,
    rho,
    sigma,
    family: str = "umegaki",
    alpha: float | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> Witness:
    """Evaluate a divergence on both sides of a map and return the witness.

    Preconditions are matched to the inequality being exercised. Umegaki:
    positive map, trace-preserving, or trace-nonincreasing with the state's
    trace matched within 1e-9. Renyi families: positive trace-nonincreasing
    suffices (no theorem is asserted for alpha < 1; that regime exists for
    violation searches).
    """
    if family == "umegaki":
        if alpha is not None:
            raise DomainError("alpha applies only to Renyi families")
    elif family in ("sandwiched", "old"):
        if alpha is None:
            raise DomainError(f"the {family} family requires alpha")
    else:
        raise DomainError(f"unknown divergence family {family!r}")
    if not phi.certificate.is_positive:
        raise DomainError(
            f"monotonicity preconditions need a positive map; certificate tag is "
            f"{phi.certificate.tag!r}"
        )
    behavior = trace_behavior(phi)
    if not behavior.is_nonincreasing:
        raise DomainError("monotonicity preconditions need a trace-nonincreasing map")
    rho = require_psd(rho, cfg)
    sigma = require_psd(sigma, cfg)
    if family == "umegaki" and behavior.tag == "nonincreasing":
        drift = abs(float(np.trace(phi.apply(rho)).real) - float(np.trace(rho).real))
        if drift > TRACE_MATCH_TOLERANCE:
            raise DomainError(
                f"relative entropy monotonicity for a non-trace-preserving map needs "
                f"tr[Phi(rho)] = tr[rho]; drift is {drift:.3e}"
            )
    return _monotonicity_witness(phi, rho, sigma, family, alpha, cfg)


def replay_witness(
    w: Witness, alpha_override: float | None = None, cfg: ToleranceConfig = DEFAULT_TOL
) -> Witness:
    """Re-evaluate a serialized witness; same inputs reproduce the gap exactly."""
    phi = serialize.channel_from_dict(w.map_descriptor, cfg)
    rho, _ = serialize.matrix_from_dict(w.rho, cfg)
    sigma, _ = serialize.matrix_from_dict(w.sigma, cfg)
    alpha = w.alpha if alpha_override is None else float(alpha_override)
    family = "umegaki" if alpha is None else "sandwiched"
    lhs, rhs, gap = _evaluate(phi, rho, sigma, family, alpha, cfg)
    return Witness(w.map_descriptor, w.rho, w.sigma, alpha, lhs, rhs, gap)


# ---------------------------------------------------------------------------
# suite plumbing


class _Tally:
    """Collects trial outcomes and assembles the report."""

    def __init__(self, suite_name: str, seed: int, config: dict):
        self.suite_name = suite_name
        self.seed = seed
        self.config = config
        self.trials = 0
        self.passes = 0
        self.escalations = 0
        self.failures: list[Witness] = []
        self.min_gap: float | None = None
        self.start = time.perf_counter()

    def record_gap(self, gap: float) -> None:
        if self.min_gap is None or gap < self.min_gap:
            self.min_gap = gap

    def add(self, witness: Witness, passed: bool, gap_recorded: bool = True) -> None:
        self.trials += 1
        if gap_recorded:
            self.record_gap(witness.gap)
        if passed:
            self.passes += 1
        else:
            self.failures.append(witness)

    def add_monotonicity(self, witness: Witness, slack: float) -> None:
        if witness.both_infinite:
            self.trials += 1
            self.passes += 1
            return
        if witness.gap >= -slack:
            self.add(witness, True)
        elif witness.gap >= -10.0 * slack:
            self.escalations += 1
            self.add(witness, True)
        else:
            self.add(witness, False)

    def report(self, outcome: str | None = None, best_witness: Witness | None = None) -> CheckReport:
        runtime_ms = int(round((time.perf_counter() - self.start) * 1000))
        return CheckReport(
            suite_name=self.suite_name,
            seed=self.seed,
            trials=self.trials,
            passes=self.passes,
            failures=tuple(self.failures),
            min_gap=self.min_gap,
            runtime_ms=runtime_ms,
            config=self.config,
            escalations=self.escalations,
            outcome=outcome,
            best_witness=best_witness,
        )


def _threshold_witness(map_descriptor, rho, sigma, alpha, threshold, observed) -> Witness:
    return Witness(
        map_descriptor=map_descriptor,
        rho=rho,
        sigma=sigma,
        alpha=alpha,
        lhs=float(threshold),
        rhs=float(observed),
        gap=_gap_of(float(threshold), float(observed)),
    )


def _sample_family_map(family: str, d: int, rng, cfg: ToleranceConfig) -> SuperOperator:
    if family == "random_cptp":
        return random_cptp(d, rng=rng, cfg=cfg)
    if family == "random_positive_noncp":
        return random_positive_noncp(d, rng=rng, cfg=cfg)
    if family == "reduction":
        return reduction_map(d)
    if family == "pinching":
        return pinching_map(random_projector(rng, d, int(rng.integers(1, d))), cfg)
    if family == "depolarizing":
        return depolarizing_map(d, float(rng.uniform(0.0, 1.0)), cfg)
    if family == "halving":
        return halving_map(d, cfg)
    if family == "counterexample":
        return counterexample_map(cfg)
    if family == "damped_cptp":
        return damped_cptp(d, int(rng.integers(1, d)), float(rng.uniform(0.2, 0.9)), rng=rng, cfg=cfg)
    if family == "truncation":
        base = random_cptp(d, rng=rng, cfg=cfg)
        P = random_projector(rng, d, int(rng.integers(1, d + 1)))
        P_prime = random_projector(rng, d, int(rng.integers(1, d + 1)))
        return truncation_map(base, P, P_prime, cfg)
    raise DomainError(f"unknown map family {family!r}")


def _sample_state_pair(rng, d: int):
    u = float(rng.random())
    if u < 0.15:
        sigma = random_rank_deficient_density(rng, d)
        rho = random_density(rng, d)
    elif u < 0.30:
        rho = random_rank_deficient_density(rng, d)
        sigma = random_density(rng, d)
    else:
        rho = random_density(rng, d)
        sigma = random_density(rng, d)
    return rho, sigma


def _sector_state(rng, Q: np.ndarray) -> np.ndarray:
    """Random density supported on the range of the projector Q."""
    w, V = np.linalg.eigh(Q)
    B = V[:, w > 0.5]
    r = B.shape[1]
    G = random_complex_gaussian(rng, (r, r))
    W = G @ G.conj().T
    state = B @ W @ B.conj().T
    return state / float(np.trace(state).real)


# ---------------------------------------------------------------------------
# suites


def counterexample_suite(cfg: ToleranceConfig = DEFAULT_TOL) -> CheckReport:
    """The fixed 2x2 instance where relative entropy monotonicity fails.

    Five checks: the two closed-form divergence values to 1e-10, the strict
    violation by a CP trace-nonincreasing (non-TP) map, the vacuous pinching
    case, and the trace-matched state for which monotonicity is restored.
    """
    config = {"fixture": "counterexample", "tolerances": _tolerances_dict(cfg)}
    tally = _Tally("counterexample", 0, config)
    phi = counterexample_map(cfg)
    rho = np.diag([1.0 / 3.0, 2.0 / 3.0]).astype(np.complex128)
    sigma = np.diag([2.0 / 3.0, 1.0 / 3.0]).astype(np.complex128)
    ln2 = math.log(2.0)

    d_before = relative_entropy(rho, sigma, cfg)
    w = _threshold_witness(
        serialize.channel_to_dict(phi),
        serialize.matrix_to_dict(rho, "density", cfg),
        serialize.matrix_to_dict(sigma, "density", cfg),
        None,
        ln2 / 3.0,
        d_before,
    )
    tally.add(w, abs(w.gap) <= 1e-10)

    image_rho = hermitian_part(phi.apply(rho))
    image_sigma = hermitian_part(phi.apply(sigma))
    d_after = relative_entropy(image_rho, image_sigma, cfg)
    w = _threshold_witness(
        serialize.channel_to_dict(phi),
        serialize.matrix_to_dict(image_rho, "psd", cfg),
        serialize.matrix_to_dict(image_sigma, "psd", cfg),
        None,
        ln2 / 2.0,
        d_after,
    )
    tally.add(w, abs(w.gap) <= 1e-10)

    violation = _monotonicity_witness(phi, rho, sigma, "umegaki", None, cfg)
    behavior = trace_behavior(phi)
    structurally_sound = (
        phi.certificate.tag == "completely_positive" and behavior.tag == "nonincreasing"
    )
    tally.add(violation, violation.gap < 0.0 and structurally_sound)

    pinch = pinching_map(np.diag([1.0, 0.0]), cfg)
    w = monotonicity_check(pinch, rho, sigma, "umegaki", None, cfg)
    tally.add(w, abs(w.gap) <= 1e-9)

    rho_matched = np.diag([0.0, 1.0]).astype(np.complex128)
    w = monotonicity_check(phi, rho_matched, sigma, "umegaki", None, cfg)
    tally.add(w, w.gap >= -1e-9)

    return tally.report()


def randomized_dpi_suite(
    mode: str,
    dims=(2, 3, 4),
    trials: int = 1000,
    seed: int = 0,
    cfg: ToleranceConfig = DEFAULT_TOL,
    families=None,
    alphas=None,
) -> CheckReport:
    """Randomized monotonicity trials in one of three theorem modes.

    "tp": relative entropy under positive trace-preserving families.
    "tni": sandwiched divergence (alpha > 1) under positive trace-nonincreasing
    families. "trace_match": relative entropy under trace-nonincreasing maps
    with rho supported where the map preserves trace.
    """
    if mode == "tp":
        families = tuple(families) if families is not None else TP_FAMILIES
        alphas = None
    elif mode == "tni":
        families = tuple(families) if families is not None else TNI_FAMILIES
        alphas = tuple(float(a) for a in (alphas if alphas is not None else DEFAULT_ALPHAS))
        if any(a <= 1.0 for a in alphas):
            raise DomainError("tni mode exercises alpha > 1 only")
    elif mode == "trace_match":
        families = tuple(families) if families is not None else TRACE_MATCH_FAMILIES
        alphas = None
    else:
        raise DomainError(f"unknown mode {mode!r}")
    dims = tuple(int(d) for d in dims)
    if any(d < 2 for d in dims):
        raise DomainError("suite dimensions must be >= 2")
    config = {
        "mode": mode,
        "dims": list(dims),
        "families": list(families),
        "alphas": None if alphas is None else list(alphas),
        "trials": int(trials),
        "seed": int(seed),
        "tolerances": _tolerances_dict(cfg),
    }
    tally = _Tally(f"dpi-{mode}", seed, config)
    for t in range(trials):
        rng = rng_for_trial(seed, t)
        d = int(rng.choice(dims))
        family = str(rng.choice(families))
        if family == "counterexample":
            d = 2
        phi = _sample_family_map(family, d, rng, cfg)
        if mode == "trace_match":
            Q = unit_sector_projector(phi, cfg)
            rho = _sector_state(rng, Q)
            if float(rng.random()) < 0.15:
                sigma = random_rank_deficient_density(rng, d)
            else:
                sigma = random_density(rng, d)
            witness = monotonicity_check(phi, rho, sigma, "umegaki", None, cfg)
        else:
            rho, sigma = _sample_state_pair(rng, d)
            if mode == "tni":
                alpha = float(rng.choice(alphas))
                witness = monotonicity_check(phi, rho, sigma, "sandwiched", alpha, cfg)
            else:
                witness = monotonicity_check(phi, rho, sigma, "umegaki", None, cfg)
        tally.add_monotonicity(witness, cfg.monotonicity_slack)
    return tally.report()


RATIO_BOUND = 1.0 + 1e-8
UNIT_IMAGE_TOLERANCE = 1e-9
ADJOINT_UNIT_BOUND = 1.0 + 1e-10


def norm_contraction_suite(
    sigma,
    phi: SuperOperator,
    alphas=(1.5, 2.0, 3.0),
    trials: int = 200,
    seed: int = 0,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> CheckReport:
    """Sampled contraction of Psi = Gamma^{-1}_{Phi(sigma)} o Phi o Gamma_sigma.

    For each probe X and each alpha, asserts the weighted-norm ratio
    ||Psi(X)||_{alpha,Phi(sigma)} / ||X||_{alpha,sigma} <= 1 + 1e-8; plus the
    two endpoint facts: Psi(1) = 1 within 1e-9 and ||Phi*(1)||_inf <= 1 + 1e-10.
    """
    if not phi.certificate.is_positive:
        raise DomainError("norm contraction needs a certified positive map")
    if not trace_behavior(phi).is_nonincreasing:
        raise DomainError("norm contraction needs a trace-nonincreasing map")
    sigma = require_psd(sigma, cfg)
    d = phi.dim_in
    if sigma.shape[0] != d:
        raise DomainError(f"sigma dimension {sigma.shape[0]} != map input dimension {d}")
    sigma_prime = hermitian_part(phi.apply(sigma))
    for name, S in (("sigma", sigma), ("Phi(sigma)", sigma_prime)):
        w = np.linalg.eigvalsh(S)
        if float(w[0]) <= cfg.support_cutoff * max(float(w[-1]), 0.0):
            raise DomainError(f"{name} is rank-deficient; the weighted norms need full rank")
    alphas = tuple(float(a) for a in alphas)
    config = {
        "alphas": list(alphas),
        "trials": int(trials),
        "seed": int(seed),
        "dim": int(d),
        "tolerances": _tolerances_dict(cfg),
    }
    tally = _Tally("norm-contraction", seed, config)
    psi = compose(
        gamma_superoperator(sigma_prime, inverse=True, cfg=cfg),
        compose(phi, gamma_superoperator(sigma, cfg=cfg)),
    )
    psi_dict = serialize.channel_to_dict(psi)
    sigma_dict = serialize.matrix_to_dict(sigma, "psd", cfg)

    for ai, alpha in enumerate(alphas):
        for t in range(trials):
            rng = rng_for_trial(seed, ai * trials + t)
            if t % 2 == 0:
                X = random_hermitian(rng, d)
            else:
                X = np.outer(random_unit_vector(rng, d), random_unit_vector(rng, d).conj())
            den = weighted_p_norm(X, sigma, alpha, cfg)
            if den <= 0.0:
                tally.add(
                    _threshold_witness(psi_dict, serialize.matrix_to_dict(X, "general", cfg),
                                       sigma_dict, alpha, RATIO_BOUND, math.inf),
                    False,
                )
                continue
            ratio = weighted_p_norm(psi.apply(X), sigma_prime, alpha, cfg) / den
            w = _threshold_witness(
                psi_dict, serialize.matrix_to_dict(X, "general", cfg), sigma_dict, alpha,
                RATIO_BOUND, ratio,
            )
            tally.add(w, ratio <= RATIO_BOUND)

    eye = np.eye(d)
    unit_defect = operator_norm(psi.apply(eye) - eye)
    w = _threshold_witness(
        psi_dict, serialize.matrix_to_dict(eye, "psd", cfg), sigma_dict, None,
        UNIT_IMAGE_TOLERANCE, unit_defect,
    )
    tally.add(w, unit_defect <= UNIT_IMAGE_TOLERANCE)

    one_norm = one_to_one_norm_positive(phi, cfg)
    w = _threshold_witness(
        serialize.channel_to_dict(phi), serialize.matrix_to_dict(eye, "psd", cfg), sigma_dict,
        None, ADJOINT_UNIT_BOUND, one_norm,
    )
    tally.add(w, one_norm <= ADJOINT_UNIT_BOUND)
    return tally.report()


def contraction_battery(
    instances: int = 20,
    dims=(2, 3, 4),
    alphas=(1.5, 2.0, 3.0),
    trials: int = 200,
    seed: int = 0,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> CheckReport:
    """Norm-contraction suite over seeded (map, sigma) instances.

    Instances rotate through CPTP, positive non-CP, and depolarizing maps so
    the contraction is exercised beyond the completely positive cone.
    """
    dims = tuple(int(d) for d in dims)
    alphas = tuple(float(a) for a in alphas)
    config = {
        "instances": int(instances),
        "dims": list(dims),
        "alphas": list(alphas),
        "trials": int(trials),
        "seed": int(seed),
        "tolerances": _tolerances_dict(cfg),
    }
    tally = _Tally("norm-contraction", seed, config)
    for i in range(instances):
        rng = rng_for_trial(seed, 1_000_000 + i)
        d = int(rng.choice(dims))
        kind = i % 3
        if kind == 0:
            phi = random_positive_noncp(d, rng=rng, cfg=cfg)
        elif kind == 1:
            phi = random_cptp(d, rng=rng, cfg=cfg)
        else:
            phi = depolarizing_map(d, float(rng.uniform(0.1, 0.9)), cfg)
        sigma = random_density(rng, d)
        sub_seed = int(rng.integers(0, 2**31))
        sub = norm_contraction_suite(sigma, phi, alphas, trials, sub_seed, cfg)
        tally.trials += sub.trials
        tally.passes += sub.passes
        tally.escalations += sub.escalations
        tally.failures.extend(sub.failures)
        if sub.min_gap is not None:
            tally.record_gap(sub.min_gap)
    return tally.report()


def _descending_projector(A: np.ndarray, n: int, d: int) -> np.ndarray:
    """Projector onto the top-n eigenvectors of A; exact identity at n = d."""
    if n == d:
        return np.eye(d, dtype=np.complex128)
    w, V = np.linalg.eigh(A)
    top = V[:, np.argsort(w)[::-1][:n]]
    return top @ top.conj().T


STEP2_RESIDUAL_TOLERANCE = 1e-9
STEP2_INEQUALITY_TOLERANCE = 1e-8


def step2_suite(
    d: int,
    n_sequence,
    phi: SuperOperator,
    rho,
    sigma,
    seed: int = 0,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> CheckReport:
    """Finite-dimensional study of the truncation/pinching approximation step.

    For nested projectors P_n built from rho's eigenbasis (descending weight)
    and P'_n from Phi(rho)'s: truncation residuals ||Phi_n(A) - Phi(A)||_1
    must be nonincreasing in n and vanish at n = d; per n, the compressed
    Klein gap is nonnegative, pinching does not increase relative entropy,
    the pinched divergence splits additively over blocks, and the operator
    concavity of log holds on the pinched sigma.
    """
    n_sequence = tuple(int(n) for n in n_sequence)
    if not n_sequence or list(n_sequence) != sorted(n_sequence):
        raise DomainError("n_sequence must be ascending and nonempty")
    if n_sequence[0] < 1 or n_sequence[-1] != d:
        raise DomainError(f"n_sequence must lie in [1, {d}] and end at {d}")
    if phi.dim_in != d or phi.dim_out != d:
        raise DomainError("step-2 study needs a square map of the stated dimension")
    rho = require_psd(rho, cfg)
    sigma = require_psd(sigma, cfg)
    config = {
        "d": int(d),
        "n_sequence": list(n_sequence),
        "seed": int(seed),
        "tolerances": _tolerances_dict(cfg),
    }
    tally = _Tally("step2", seed, config)
    phi_dict = serialize.channel_to_dict(phi)
    rho_dict = serialize.matrix_to_dict(rho, "psd", cfg)
    sigma_dict = serialize.matrix_to_dict(sigma, "psd", cfg)

    image_rho = hermitian_part(phi.apply(rho))
    projectors = []
    for n in n_sequence:
        P = _descending_projector(rho, n, d)
        commutator = operator_norm(P @ rho - rho @ P)
        if commutator > 1e-9:
            raise DomainError(f"P_{n} does not commute with rho (defect {commutator:.3e})")
        P_prime = _descending_projector(image_rho, n, d)
        projectors.append((n, P, P_prime))

    probes = [("rho", rho), ("sigma", sigma)]
    probe_rng = rng_for_trial(seed, 0)
    probes.append(("random", random_density(probe_rng, d)))

    maps_n = [truncation_map(phi, P, P_prime, cfg) for (_, P, P_prime) in projectors]
    for _, A in probes:
        image = phi.apply(A)
        residuals = [trace_norm(m.apply(A) - image) for m in maps_n]
        for k in range(len(residuals) - 1):
            w = _threshold_witness(
                phi_dict, rho_dict, sigma_dict, None,
                residuals[k] + STEP2_RESIDUAL_TOLERANCE, residuals[k + 1],
            )
            tally.add(w, residuals[k + 1] <= residuals[k] + STEP2_RESIDUAL_TOLERANCE)
        w = _threshold_witness(
            phi_dict, rho_dict, sigma_dict, None, STEP2_RESIDUAL_TOLERANCE, residuals[-1]
        )
        tally.add(w, residuals[-1] <= STEP2_RESIDUAL_TOLERANCE)

    base_divergence = relative_entropy(rho, sigma, cfg)
    log_sigma = log_on_support(sigma, cfg)
    for n, P, _ in projectors:
        P_perp = np.eye(d) - P
        rho_out = hermitian_part(P_perp @ rho @ P_perp)
        sigma_out = hermitian_part(P_perp @ sigma @ P_perp)
        g = klein_gap(rho_out, sigma_out, cfg)
        w = Witness(phi_dict, rho_dict, sigma_dict, None, g, 0.0, _gap_of(g, 0.0))
        tally.add(w, g >= -STEP2_RESIDUAL_TOLERANCE, gap_recorded=not math.isinf(g))

        pinch = pinching_map(P, cfg)
        pinched_rho = hermitian_part(pinch.apply(rho))
        pinched_sigma = hermitian_part(pinch.apply(sigma))
        pinched = relative_entropy(pinched_rho, pinched_sigma, cfg)
        w = Witness(phi_dict, rho_dict, sigma_dict, None, base_divergence, pinched,
                    _gap_of(base_divergence, pinched))
        tally.add(w, w.both_infinite or w.gap >= -STEP2_INEQUALITY_TOLERANCE)

        rho_in = hermitian_part(P @ rho @ P)
        sigma_in = hermitian_part(P @ sigma @ P)
        block_sum = relative_entropy(rho_in, sigma_in, cfg) + relative_entropy(
            rho_out, sigma_out, cfg
        )
        w = Witness(phi_dict, rho_dict, sigma_dict, None, block_sum, pinched,
                    _gap_of(block_sum, pinched))
        tally.add(w, abs(w.gap) <= STEP2_INEQUALITY_TOLERANCE)

        concavity = min_eigenvalue(
            log_on_support(pinched_sigma, cfg) - hermitian_part(pinch.apply(log_sigma)), cfg
        )
        w = Witness(phi_dict, rho_dict, sigma_dict, None, concavity, 0.0, concavity)
        tally.add(w, concavity >= -STEP2_INEQUALITY_TOLERANCE)

    return tally.report()


def step2_battery(
    d: int = 32,
    n_sequence=None,
    seed: int = 0,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> CheckReport:
    """step2_suite on a seeded CPTP map and full-rank state pair."""
    d = int(d)
    if n_sequence is None:
        n_sequence = sorted({max(1, d // 8), max(1, d // 4), max(1, d // 2), max(1, (3 * d) // 4), d})
    rng = rng_for_trial(seed, 1)
    phi = random_cptp(d, rng=rng, cfg=cfg)
    rho = random_density(rng, d)
    sigma = random_density(rng, d)
    return step2_suite(d, n_sequence, phi, rho, sigma, seed, cfg)


def auxiliary_inequality_suite(
    trials: int = 200,
    seed: int = 0,
    cfg: ToleranceConfig = DEFAULT_TOL,
    dims=(2, 3, 4, 5, 6),
) -> CheckReport:
    """Randomized checks of the lemma-level facts behind the truncation step.

    Per trial: (a) operator concavity of log across a random pinching,
    (b) entropy nondecrease under pinching, (c) Klein gap nonnegativity for
    a random PSD pair with compatible supports, (d) support inclusion is
    preserved by a random positive map.
    """
    dims = tuple(int(d) for d in dims)
    config = {
        "trials": int(trials),
        "seed": int(seed),
        "dims": list(dims),
        "tolerances": _tolerances_dict(cfg),
    }
    tally = _Tally("auxiliary", seed, config)
    for t in range(trials):
        rng = rng_for_trial(seed, t)
        d = int(rng.choice(dims))
        sigma = random_density(rng, d)
        P = random_projector(rng, d, int(rng.integers(1, d)))
        pinch = pinching_map(P, cfg)
        pinched_sigma = hermitian_part(pinch.apply(sigma))

        concavity = min_eigenvalue(
            log_on_support(pinched_sigma, cfg)
            - hermitian_part(pinch.apply(log_on_support(sigma, cfg))),
            cfg,
        )
        ok_a = concavity >= -STEP2_INEQUALITY_TOLERANCE

        rho = random_density(rng, d)
        entropy_jump = von_neumann_entropy(hermitian_part(pinch.apply(rho)), cfg) - von_neumann_entropy(rho, cfg)
        ok_b = entropy_jump >= -1e-9

        A = random_psd(rng, d)
        B = random_psd(rng, d)
        g = klein_gap(A, B, cfg)
        ok_c = g >= -1e-9

        r = int(rng.integers(1, d + 1))
        sigma_small = random_density(rng, d, rank=r)
        Q = support_projector(sigma_small, cfg)
        inner = random_density(rng, d)
        rho_small = Q @ inner @ Q
        tr = float(np.trace(rho_small).real)
        rho_small = rho_small / tr if tr > 0.0 else sigma_small
        positive_fam = str(rng.choice(("random_cptp", "random_positive_noncp", "reduction")))
        psi = _sample_family_map(positive_fam, d, rng, cfg)
        relaxed = dataclasses.replace(cfg, containment_tolerance=1e-6)
        ok_d = support_contained(
            hermitian_part(psi.apply(rho_small)), hermitian_part(psi.apply(sigma_small)), relaxed
        )

        margin = min(
            concavity + STEP2_INEQUALITY_TOLERANCE,
            entropy_jump + 1e-9,
            (g if not math.isinf(g) else 1.0) + 1e-9,
            0.0 if not ok_d else 1.0,
        )
        w = Witness(
            {"trial": t, "kind": "auxiliary"},
            serialize.matrix_to_dict(rho, "density", cfg),
            serialize.matrix_to_dict(sigma, "density", cfg),
            None,
            margin,
            0.0,
            margin,
        )
        tally.add(w, ok_a and ok_b and ok_c and ok_d)
    return tally.report()


def alpha_limit_suite(
    pairs,
    eps_grid=DEFAULT_EPS_GRID,
    cfg: ToleranceConfig = DEFAULT_TOL,
    seed: int = 0,
) -> CheckReport:
    """Convergence of the sandwiched divergence to relative entropy as alpha -> 1.

    For each (rho, sigma) pair the error |D_{1+eps} - D| must be nonincreasing
    along the epsilon grid and at most 1e-3 at the final epsilon.
    """
    eps_grid = tuple(float(e) for e in eps_grid)
    if list(eps_grid) != sorted(eps_grid, reverse=True):
        raise DomainError("eps grid must be decreasing")
    config = {
        "eps_grid": list(eps_grid),
        "pairs": len(pairs),
        "seed": int(seed),
        "tolerances": _tolerances_dict(cfg),
    }
    tally = _Tally("alpha-limit", seed, config)
    for rho, sigma in pairs:
        rho = require_psd(rho, cfg)
        sigma = require_psd(sigma, cfg)
        target = relative_entropy(rho, sigma, cfg)
        errors = [abs(sandwiched_renyi(rho, sigma, 1.0 + e, cfg) - target) for e in eps_grid]
        monotone = all(errors[k + 1] <= errors[k] + 1e-12 for k in range(len(errors) - 1))
        final_ok = errors[-1] <= 1e-3
        w = _threshold_witness(
            {"kind": "alpha-limit"},
            serialize.matrix_to_dict(rho, "psd", cfg),
            serialize.matrix_to_dict(sigma, "psd", cfg),
            1.0 + eps_grid[-1],
            1e-3,
            errors[-1],
        )
        tally.add(w, monotone and final_ok)
    return tally.report()


def sample_state_pairs(count: int, dims, seed: int, full_rank: bool = True):
    """Seeded (rho, sigma) density pairs for limit and contraction studies."""
    dims = tuple(int(d) for d in dims)
    pairs = []
    for i in range(count):
        rng = rng_for_trial(seed, i)
        d = int(rng.choice(dims))
        rho = random_density(rng, d)
        sigma = random_density(rng, d) if full_rank else random_rank_deficient_density(rng, d)
        pairs.append((rho, sigma))
    return pairs


def _perturbed_isometry(V: np.ndarray, step: float, rng) -> np.ndarray:
    G = random_complex_gaussian(rng, V.shape)
    Q, R = np.linalg.qr(V + step * G)
    phases = np.diag(R).copy()
    phases /= np.abs(phases)
    return Q * phases


def violation_search(
    alpha: float,
    dims=(2,),
    trials: int = 100_000,
    seed: int = 0,
    cfg: ToleranceConfig = DEFAULT_TOL,
    hill_steps: int = 1500,
) -> CheckReport:
    """Search for monotonicity violations of the alpha < 1/2 sandwiched formula.

    Random CPTP maps and full-rank state pairs, followed by hill-climbing on
    the stacked Kraus isometry of the best candidate. A violating witness
    (gap < -1e-6) is re-verified by exact replay before being reported;
    finding none is reported as inconclusive, never as a refutation.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 0.5:
        raise DomainError(f"the violation regime is alpha in (0, 1/2); got {alpha}")
    dims = tuple(int(d) for d in dims)
    config = {
        "alpha": alpha,
        "dims": list(dims),
        "trials": int(trials),
        "seed": int(seed),
        "hill_steps": int(hill_steps),
        "tolerances": _tolerances_dict(cfg),
    }
    tally = _Tally("violation-search", seed, config)
    best = None  # (gap, phi, rho, sigma)
    for t in range(trials):
        rng = rng_for_trial(seed, t)
        d = int(rng.choice(dims))
        phi = random_cptp(d, rng=rng, cfg=cfg)
        rho = random_density(rng, d)
        sigma = random_density(rng, d)
        lhs, rhs, gap = _evaluate(phi, rho, sigma, "sandwiched", alpha, cfg)
        violating = gap < -VIOLATION_MARGIN
        if best is None or gap < best[0]:
            best = (gap, phi, rho, sigma)
        if violating:
            w = Witness(
                serialize.channel_to_dict(phi),
                serialize.matrix_to_dict(rho, "psd", cfg),
                serialize.matrix_to_dict(sigma, "psd", cfg),
                alpha,
                lhs,
                rhs,
                gap,
            )
            tally.add(w, False)
        else:
            tally.trials += 1
            tally.passes += 1
            tally.record_gap(gap)

    best_witness = None
    if best is not None and hill_steps > 0:
        gap, phi, rho, sigma = best
        V = np.vstack(phi.kraus)
        rng = rng_for_trial(seed, trials)
        step = 0.25
        for _ in range(hill_steps):
            V2 = _perturbed_isometry(V, step, rng)
            kraus2 = [V2[i * phi.dim_out : (i + 1) * phi.dim_out, :] for i in range(len(phi.kraus))]
            cand = from_kraus(kraus2, phi.dim_in, phi.dim_out, cfg)
            _, _, gap2 = _evaluate(cand, rho, sigma, "sandwiched", alpha, cfg)
            if gap2 < gap:
                V, gap, phi = V2, gap2, cand
            else:
                step *= 0.99
        best = (gap, phi, rho, sigma)
    if best is not None and best[0] < -VIOLATION_MARGIN:
        gap, phi, rho, sigma = best
        lhs, rhs, gap = _evaluate(phi, rho, sigma, "sandwiched", alpha, cfg)
        best_witness = Witness(
            serialize.channel_to_dict(phi),
            serialize.matrix_to_dict(rho, "psd", cfg),
            serialize.matrix_to_dict(sigma, "psd", cfg),
            alpha,
            lhs,
            rhs,
            gap,
        )
        replayed = replay_witness(best_witness, cfg=cfg)
        if replayed.gap != best_witness.gap:
            raise RuntimeError("stored witness did not replay to the identical gap")
    outcome = "violation_found" if best_witness is not None else "inconclusive"
    return tally.report(outcome=outcome, best_witness=best_witness)
