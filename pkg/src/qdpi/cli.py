"""Command line front end: divergence evaluation, map vetting, suite runs.

Exit codes: 0 success (or suite pass), 1 suite failure, 2 input or format
error, 3 precondition (domain) error. Reports are canonical JSON, so a rerun
with the same seed and parameters is byte-identical modulo runtime_ms.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from . import harness, serialize
from .channels import adjoint, choi, classify, one_to_one_norm_positive
from .divergences import old_renyi, relative_entropy, sandwiched_renyi
from .linalg import DEFAULT_TOL, DomainError, ToleranceConfig, min_eigenvalue
from .serialize import FormatError

EXIT_PASS = 0
EXIT_SUITE_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_PRECONDITION_ERROR = 3

SUITE_NAMES = ("dpi", "counterexample", "contraction", "step2", "auxiliary", "alpha-limit", "violation")

_TOLERANCE_FLAGS = {
    "tolerance_support_cutoff": "support_cutoff",
    "tolerance_psd": "psd_tolerance",
    "tolerance_slack": "monotonicity_slack",
    "tolerance_hermiticity": "hermiticity_tolerance",
    "tolerance_containment": "containment_tolerance",
    "tolerance_projector": "projector_tolerance",
}


def _add_tolerance_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tolerance-support-cutoff", type=float, default=None,
                        help="relative eigenvalue cutoff defining numerical support")
    parser.add_argument("--tolerance-psd", type=float, default=None,
                        help="allowed negative eigenvalue magnitude in PSD validation")
    parser.add_argument("--tolerance-slack", type=float, default=None,
                        help="slack applied to monotonicity gaps before failing a trial")
    parser.add_argument("--tolerance-hermiticity", type=float, default=None,
                        help="allowed Hermiticity defect on inputs")
    parser.add_argument("--tolerance-containment", type=float, default=None,
                        help="relative leaked mass allowed by the support containment test")
    parser.add_argument("--tolerance-projector", type=float, default=None,
                        help="allowed deviation from idempotence for projectors")


def _config_from_args(args) -> ToleranceConfig:
    overrides = {}
    for flag, field in _TOLERANCE_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = float(value)
    return dataclasses.replace(DEFAULT_TOL, **overrides) if overrides else DEFAULT_TOL


def _parse_dims(text: str):
    try:
        dims = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise FormatError(f"bad --dims value {text!r}") from exc
    if not dims:
        raise FormatError("--dims needs at least one dimension")
    return dims


def _parse_alphas(text: str):
    try:
        alphas = tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise FormatError(f"bad --alpha value {text!r}") from exc
    if not alphas:
        raise FormatError("--alpha needs at least one value")
    return alphas


def _parse_ns(text: str):
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise FormatError(f"bad --n-sequence value {text!r}") from exc


def _load_matrix(path: str, cfg: ToleranceConfig):
    try:
        payload = serialize.load_json(path)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    matrix, _ = serialize.matrix_from_dict(payload, cfg)
    return matrix


def _emit(payload: dict, out: str | None) -> None:
    text = serialize.canonical_json(payload)
    print(text)
    if out:
        serialize.save_json(out, payload)


def _cmd_compute(args) -> int:
    cfg = _config_from_args(args)
    rho = _load_matrix(args.rho, cfg)
    sigma = _load_matrix(args.sigma, cfg)
    family = args.family
    if family == "umegaki":
        if args.alpha is not None:
            raise DomainError("--alpha applies only to Renyi families")
        value = relative_entropy(rho, sigma, cfg)
    else:
        if args.alpha is None:
            raise DomainError(f"the {family} family requires --alpha")
        fn = sandwiched_renyi if family == "sandwiched" else old_renyi
        value = fn(rho, sigma, float(args.alpha), cfg)
    payload = {
        "schema_version": serialize.SCHEMA_VERSION,
        "family": family,
        "alpha": None if args.alpha is None else float(args.alpha),
        "value": serialize.encode_extended(value),
    }
    _emit(payload, args.out)
    return EXIT_PASS


def _cmd_check_map(args) -> int:
    cfg = _config_from_args(args)
    try:
        payload = serialize.load_json(args.map)
    except OSError as exc:
        raise FormatError(f"cannot read {args.map}: {exc}") from exc
    phi = serialize.channel_from_dict(payload, cfg)
    cert, behavior = classify(phi, cfg, sample_count=args.samples, seed=args.seed)
    C = choi(phi)
    spectrum = np.linalg.eigvalsh(adjoint(phi).apply(np.eye(phi.dim_out)))
    report = {
        "schema_version": serialize.SCHEMA_VERSION,
        "dim_in": phi.dim_in,
        "dim_out": phi.dim_out,
        "certificate": cert.tag,
        "certificate_reason": cert.reason,
        "trace_behavior": behavior.tag,
        "choi_min_eigenvalue": serialize.encode_extended(min_eigenvalue(C, cfg)),
        "adjoint_unit_spectrum": [serialize.encode_extended(float(v)) for v in spectrum],
        "one_to_one_norm": (
            serialize.encode_extended(one_to_one_norm_positive(phi, cfg)) if cert.is_positive else None
        ),
    }
    _emit(report, args.out)
    return EXIT_PASS


def _summary_line(report, ok: bool) -> str:
    status = "PASS" if ok else "FAIL"
    gap = "both-infinite" if report.min_gap is None else serialize.encode_extended(report.min_gap)
    extra = f", outcome {report.outcome}" if report.outcome else ""
    return (
        f"{report.suite_name}: {status} ({report.passes}/{report.trials} trials, "
        f"min gap {gap}, {report.escalations} escalations{extra}, {report.runtime_ms} ms)"
    )


def _cmd_suite(args) -> int:
    cfg = _config_from_args(args)
    name = args.name
    dims = _parse_dims(args.dims) if args.dims else None
    alphas = _parse_alphas(args.alpha) if args.alpha else None

    if name == "dpi":
        mode = args.mode.replace("-", "_")
        report = harness.randomized_dpi_suite(
            mode,
            dims=dims or (2, 3, 4),
            trials=args.trials if args.trials is not None else 1000,
            seed=args.seed,
            cfg=cfg,
            alphas=alphas,
        )
    elif name == "counterexample":
        report = harness.counterexample_suite(cfg)
    elif name == "contraction":
        report = harness.contraction_battery(
            instances=args.instances,
            dims=dims or (2, 3, 4),
            alphas=alphas or (1.5, 2.0, 3.0),
            trials=args.trials if args.trials is not None else 200,
            seed=args.seed,
            cfg=cfg,
        )
    elif name == "step2":
        d = (dims or (32,))[0]
        report = harness.step2_battery(
            d=d,
            n_sequence=_parse_ns(args.n_sequence) if args.n_sequence else None,
            seed=args.seed,
            cfg=cfg,
        )
    elif name == "auxiliary":
        report = harness.auxiliary_inequality_suite(
            trials=args.trials if args.trials is not None else 200,
            seed=args.seed,
            cfg=cfg,
            dims=dims or (2, 3, 4, 5, 6),
        )
    elif name == "alpha-limit":
        pairs = harness.sample_state_pairs(
            args.trials if args.trials is not None else 50, dims or (2, 3, 4, 5, 6), args.seed
        )
        report = harness.alpha_limit_suite(pairs, cfg=cfg, seed=args.seed)
    elif name == "violation":
        report = harness.violation_search(
            alpha=float(alphas[0]) if alphas else 0.3,
            dims=dims or (2,),
            trials=args.trials if args.trials is not None else 100_000,
            seed=args.seed,
            cfg=cfg,
            hill_steps=args.hill_steps,
        )
    else:
        raise FormatError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")

    if name == "violation":
        ok = report.outcome == "violation_found" or args.allow_inconclusive
    else:
        ok = report.passed
    if args.out:
        serialize.save_json(args.out, harness.report_to_dict(report))
    print(_summary_line(report, ok))
    return EXIT_PASS if ok else EXIT_SUITE_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdpi",
        description="Divergence monotonicity checks for positive matrix maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate a divergence on two serialized matrices")
    p.add_argument("--family", choices=("umegaki", "sandwiched", "old"), default="umegaki")
    p.add_argument("--rho", required=True, help="JSON file holding the first operator")
    p.add_argument("--sigma", required=True, help="JSON file holding the second operator")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--out", default=None, help="also write the result JSON here")
    _add_tolerance_flags(p)
    p.set_defaults(func=_cmd_compute)

    p = sub.add_parser("check-map", help="classify a serialized map (positivity, trace behavior)")
    p.add_argument("--map", required=True, help="JSON file holding the map")
    p.add_argument("--samples", type=int, default=256, help="states sampled when falsifying positivity")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=_cmd_check_map)

    p = sub.add_parser("suite", help="run a named verification suite")
    p.add_argument("name", choices=SUITE_NAMES)
    p.add_argument("--mode", choices=("tp", "tni", "trace-match"), default="tp",
                   help="theorem variant for the dpi suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--dims", default=None, help="comma separated dimensions, e.g. 2,3,4")
    p.add_argument("--alpha", default=None, help="comma separated alpha values")
    p.add_argument("--instances", type=int, default=20, help="(contraction) number of map/state instances")
    p.add_argument("--n-sequence", default=None, help="(step2) comma separated truncation ranks")
    p.add_argument("--hill-steps", type=int, default=1500,
                   help="(violation) local refinement steps after the random search")
    p.add_argument("--allow-inconclusive", action="store_true",
                   help="(violation) exit 0 even when no violating witness is found")
    p.add_argument("--out", default=None, help="write the full report JSON here")
    _add_tolerance_flags(p)
    p.set_defaults(func=_cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except DomainError as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION_ERROR


if __name__ == "__main__":
    sys.exit(main())
