#!/usr/bin/env python3
"""Run every verification suite and write one report file per suite.

Example:
    python3 scripts/run_full_battery.py --seed 0 --out-dir reports
"""

import argparse
import pathlib
import sys

from qdpi import harness, serialize


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", default="reports")
    parser.add_argument("--dpi-trials", type=int, default=1000)
    parser.add_argument("--trace-match-trials", type=int, default=500)
    parser.add_argument("--contraction-instances", type=int, default=20)
    parser.add_argument("--contraction-trials", type=int, default=200)
    parser.add_argument("--step2-dim", type=int, default=32)
    parser.add_argument("--auxiliary-trials", type=int, default=200)
    parser.add_argument("--limit-pairs", type=int, default=50)
    parser.add_argument("--violation-trials", type=int, default=100_000)
    args = parser.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    runs = [
        ("counterexample", lambda: harness.counterexample_suite()),
        ("dpi_tp", lambda: harness.randomized_dpi_suite("tp", trials=args.dpi_trials, seed=args.seed)),
        ("dpi_tni", lambda: harness.randomized_dpi_suite("tni", trials=args.dpi_trials, seed=args.seed)),
        ("dpi_trace_match", lambda: harness.randomized_dpi_suite(
            "trace_match", trials=args.trace_match_trials, seed=args.seed)),
        ("contraction", lambda: harness.contraction_battery(
            instances=args.contraction_instances, trials=args.contraction_trials, seed=args.seed)),
        ("step2", lambda: harness.step2_battery(d=args.step2_dim, seed=args.seed)),
        ("auxiliary", lambda: harness.auxiliary_inequality_suite(
            trials=args.auxiliary_trials, seed=args.seed)),
        ("alpha_limit", lambda: harness.alpha_limit_suite(
            harness.sample_state_pairs(args.limit_pairs, (2, 3, 4, 5, 6), args.seed), seed=args.seed)),
        ("violation", lambda: harness.violation_search(
            0.3, trials=args.violation_trials, seed=args.seed)),
    ]

    all_ok = True
    for name, run in runs:
        report = run()
        serialize.save_json(out / f"{name}.json", harness.report_to_dict(report))
        gap = "both-infinite" if report.min_gap is None else f"{report.min_gap:+.3e}"
        ok = report.passed if report.outcome is None else report.outcome == "violation_found"
        all_ok = all_ok and ok
        status = "PASS" if ok else "FAIL"
        extra = f" outcome={report.outcome}" if report.outcome else ""
        print(f"{name:16s} {status} {report.passes}/{report.trials} "
              f"min_gap={gap} escalations={report.escalations}{extra} ({report.runtime_ms} ms)")

    print(f"reports written to {out}/")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
