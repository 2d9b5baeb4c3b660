"""Run every cell of an experiment, aggregate, and write CSV/JSON results."""
from __future__ import annotations

import csv
import json
import logging
import math
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

from ..engine import RunTrace, run_batch
from .config import CellConfig, ExperimentConfig

log = logging.getLogger(__name__)

RUN_COLUMNS = ("cell", "run_id", "seed", "tau_g1", "tau_g2", "tau_stop", "regret_g1",
               "mislabeled", "truncated", "labels")
SUMMARY_COLUMNS = ("cell", "metric", "mean", "std", "n_runs", "n_used", "n_mislabeled",
                   "n_truncated")
METRICS = ("tau_g1", "tau_g2", "tau_stop", "regret_g1")
STOPPING_TIMES = frozenset({"tau_g1", "tau_g2", "tau_stop"})


@dataclass(frozen=True)
class RunRecord:
    cell: str
    run_id: int
    seed: int
    tau_g1: int | None
    tau_g2: int | None
    tau_stop: int | None
    regret_g1: float | None
    mislabeled: bool
    truncated: bool
    labels: str

    @classmethod
    def from_trace(cls, cell: str, run_id: int, trace: RunTrace) -> "RunRecord":
        return cls(cell, run_id, trace.seed, trace.tau_g1, trace.tau_g2, trace.tau_stop,
                   trace.regret_at_tau_g1, trace.mislabeled, trace.truncated,
                   trace.label_string)


@dataclass(frozen=True)
class SummaryRow:
    cell: str
    metric: str
    mean: float | None
    std: float | None
    n_runs: int
    n_used: int
    n_mislabeled: int
    n_truncated: int


def _mean_std(values: Sequence[float], ddof: int) -> tuple[float | None, float | None]:
    # fsum is exactly rounded, so the result does not depend on record order
    n = len(values)
    if n == 0:
        return None, None
    mean = math.fsum(values) / n
    if n - ddof <= 0:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (n - ddof)
    return mean, math.sqrt(var)


def summarize(records: Iterable[RunRecord], exclude_mislabeled_from_times: bool = False,
              std_ddof: int = 0) -> list[SummaryRow]:
    by_cell: dict[str, list[RunRecord]] = {}
    for rec in records:
        by_cell.setdefault(rec.cell, []).append(rec)
    rows = []
    for cell in sorted(by_cell):
        recs = by_cell[cell]
        n_mis = sum(r.mislabeled for r in recs)
        n_trunc = sum(r.truncated for r in recs)
        for metric in METRICS:
            pool = recs
            if exclude_mislabeled_from_times and metric in STOPPING_TIMES:
                pool = [r for r in recs if not r.mislabeled]
            values = [float(v) for v in (getattr(r, metric) for r in pool) if v is not None]
            mean, std = _mean_std(values, std_ddof)
            rows.append(SummaryRow(cell, metric, mean, std, len(recs), len(values),
                                   n_mis, n_trunc))
    return rows


def run_cell(cell: CellConfig, jobs: int | None = 1,
             seed_override: int | None = None) -> list[RunTrace]:
    seed = cell.master_seed if seed_override is None else seed_override
    return run_batch(cell.engine, seed, cell.replications, jobs)


def execute(config: ExperimentConfig, out_dir: str | Path | None = None,
            jobs: int | None = None, seed_override: int | None = None,
            ) -> tuple[list[RunRecord], list[SummaryRow]]:
    """Run all cells; write ``runs.csv``, ``summary.csv`` (and JSON) when ``out_dir`` is set."""
    if out_dir is not None:
        out = Path(out_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise OSError(f"cannot create output directory {out}: {exc}") from exc
    jobs = jobs if jobs is not None else config.jobs
    records: list[RunRecord] = []
    for cell in config.cells:
        start = time.perf_counter()
        traces = run_cell(cell, jobs, seed_override)
        log.info("cell %s: %d runs in %.1fs", cell.name, len(traces),
                 time.perf_counter() - start)
        records.extend(RunRecord.from_trace(cell.name, i, tr) for i, tr in enumerate(traces))
    summary = summarize(records, config.exclude_mislabeled_from_times, config.std_ddof)
    if out_dir is not None:
        write_runs_csv(Path(out_dir) / "runs.csv", records)
        write_summary_csv(Path(out_dir) / "summary.csv", summary)
        if config.write_json:
            write_json(Path(out_dir) / "results.json", config, records, summary)
    return records, summary


def _fmt(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_runs_csv(path: Path, records: Sequence[RunRecord]) -> None:
    _write_csv(path, RUN_COLUMNS, ([getattr(r, c) for c in RUN_COLUMNS] for r in records))


def write_summary_csv(path: Path, rows: Sequence[SummaryRow]) -> None:
    _write_csv(path, SUMMARY_COLUMNS, ([getattr(r, c) for c in SUMMARY_COLUMNS] for r in rows))


def write_json(path: Path, config: ExperimentConfig, records: Sequence[RunRecord],
               summary: Sequence[SummaryRow]) -> None:
    payload = {
        "config": config.raw,
        "runs": [asdict(r) for r in records],
        "summary": [asdict(s) for s in summary],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True, default=str)
        fh.write("\n")


def format_summary(rows: Sequence[SummaryRow]) -> str:
    lines = [f"{'cell':<32} {'metric':<10} {'mean':>11} {'std':>11} {'used':>5} "
             f"{'mis':>4} {'trunc':>5}"]
    for r in rows:
        mean = "-" if r.mean is None else f"{r.mean:.1f}"
        std = "-" if r.std is None else f"{r.std:.1f}"
        lines.append(f"{r.cell:<32} {r.metric:<10} {mean:>11} {std:>11} {r.n_used:>5} "
                     f"{r.n_mislabeled:>4} {r.n_truncated:>5}")
    return "\n".join(lines)
