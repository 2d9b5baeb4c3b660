"""Command-line front end: ``gai-lab run|theory|validate|presets``."""
from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
import time
from typing import Sequence

from ..engine import default_jobs
from ..rewards import BanditInstance
from ..theory import BoundReport, minimax_bounds
from .config import PRESETS, ConfigError, builtin_suites, describe_preset, load_config, preset_means
from .runner import execute, format_summary


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _fmt_num(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:.4f}"


def format_report(report: BoundReport) -> str:
    lines = [f"xi = {report.xi}, delta = {report.delta}, K = {len(report.means)}", "",
             f"{'arm':>4} {'mean':>8} {'d(mean, xi)':>14}"]
    for a, (mu, d) in enumerate(zip(report.means, report.kl), start=1):
        lines.append(f"{a:>4} {mu:>8.4f} {d:>14.8f}")
    lines += ["", f"{'quantity':<10} {'coefficient':>14} {'x log(1/delta)':>16} "
                  f"{'x log(2K/delta)':>17}"]
    for row in report.rows():
        lines.append(f"{row['quantity']:<10} {_fmt_num(row['coefficient']):>14} "
                     f"{_fmt_num(row['scaled_log_1_over_delta']):>16} "
                     f"{_fmt_num(row['scaled_log_2k_over_delta']):>17}")
    lines.append("")
    lines.append("coefficients multiply log(1/delta) in the delta -> 0 lower bound; "
                 "the log(2K/delta) column is a finite-delta heuristic only")
    for v in report.violations:
        lines.append(f"warning: outside theorem hypotheses: {v}")
    return "\n".join(lines)


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    out = args.out or config.output or "results"
    jobs = args.jobs or config.jobs or default_jobs()
    start = time.perf_counter()
    _, summary = execute(config, out, jobs=jobs, seed_override=args.seed)
    print(format_summary(summary))
    print(f"\nwrote {out}/runs.csv and {out}/summary.csv in {time.perf_counter() - start:.1f}s")
    return 0


def _cmd_theory(args: argparse.Namespace) -> int:
    if (args.means is None) == (args.preset is None):
        raise ConfigError("give exactly one of --means or --preset")
    means = args.means if args.means is not None else list(preset_means(args.preset, args.xi))
    report = minimax_bounds(BanditInstance.from_means(means, args.xi), args.delta)
    print(format_report(report))
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(report.rows()[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(report.rows())
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    from ..validation import run_suite

    results = run_suite()
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"\n{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def _cmd_presets(args: argparse.Namespace) -> int:
    print("instance presets:")
    for name in PRESETS:
        print(f"  {describe_preset(name)}")
    print("built-in experiment suites (use as `run --config NAME`):")
    for name in builtin_suites():
        print(f"  {name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gai-lab", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment config")
    p.add_argument("--config", required=True, help="YAML/JSON file or built-in suite name")
    p.add_argument("--out", help="output directory (default: config 'output' or ./results)")
    p.add_argument("--jobs", type=int, help="worker processes (default: $GAI_LAB_JOBS or CPUs)")
    p.add_argument("--seed", type=int, help="override every cell's master_seed")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("theory", help="print minimax stopping-time lower bounds")
    p.add_argument("--means", type=_float_list)
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--xi", type=float, default=0.5)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--csv", help="also write the bound table to this CSV file")
    p.set_defaults(func=_cmd_theory)

    p = sub.add_parser("validate", help="run the built-in statistical self-checks")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("presets", help="list instance presets and experiment suites")
    p.set_defaults(func=_cmd_presets)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"gai-lab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
