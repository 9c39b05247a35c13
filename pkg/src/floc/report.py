"""Sweeps over scenario parameters and CSV emission of per-round and per-point results."""
from __future__ import annotations

import csv
import io
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path

from .config import SCENARIO_KEYS, ConfigError, Scenario
from .simulation import RoundMetrics, run


@dataclass(frozen=True)
class SweepSpec:
    param: str
    values: tuple[str, ...]
    seeds: int = 1
    rounds: int | None = None

    def __post_init__(self):
        if self.param not in SCENARIO_KEYS:
            raise ConfigError(f"unknown sweep parameter: {self.param!r}")
        if not self.values:
            raise ConfigError("sweep needs at least one value")
        if self.seeds < 1:
            raise ConfigError("seeds must be >= 1")
        if self.rounds is not None and self.rounds < 0:
            raise ConfigError("rounds must be >= 0")


@dataclass(frozen=True)
class ReportRow:
    param: str
    value: str
    seed: int
    round: int
    active_node_ratio: float
    avg_energy_consumed: float
    packets_generated: int
    packets_delivered: int
    pdr: float
    mean_temperature: float
    alive_count: int
    cluster_heads: int
    ledger_residual: float

    @classmethod
    def from_metrics(cls, param: str, value: str, seed: int, m: RoundMetrics) -> ReportRow:
        return cls(param, value, seed, *astuple(m))


@dataclass(frozen=True)
class SummaryRow:
    """Seed-averaged metrics of one sweep point.

    ``active_node_ratio`` averages over all configured rounds (rounds after
    the whole network died count as 0); ``pdr`` averages per-round PDR over
    rounds that generated packets; energy and temperature average over
    simulated rounds.
    """

    param: str
    value: str
    seeds: int
    active_node_ratio: float
    pdr: float
    avg_energy_consumed: float
    mean_temperature: float
    final_alive: float


REPORT_COLUMNS = tuple(f.name for f in fields(ReportRow))
SUMMARY_COLUMNS = tuple(f.name for f in fields(SummaryRow))


def _fmt(v) -> str:
    # repr round-trips floats exactly and never depends on the locale
    return repr(v) if isinstance(v, float) else str(v)


def _write(rows: Iterable, columns: Sequence[str], path: str | Path | None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in astuple(row)])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def emit_csv(rows: Iterable[ReportRow], path: str | Path | None = None) -> str:
    """Write per-round rows (header first) and return the CSV text."""
    return _write(rows, REPORT_COLUMNS, path)


def emit_summary(rows: Iterable[SummaryRow], path: str | Path | None = None) -> str:
    return _write(rows, SUMMARY_COLUMNS, path)


def _parse(cls, text: str) -> list:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    cols = fields(cls)
    if header != [f.name for f in cols]:
        raise ValueError(f"unexpected CSV header: {header}")
    out = []
    for rec in reader:
        vals = []
        for f, raw in zip(cols, rec):
            kind = f.type if isinstance(f.type, str) else f.type.__name__
            vals.append(int(raw) if kind == "int" else float(raw) if kind == "float" else raw)
        out.append(cls(*vals))
    return out


def read_csv(path: str | Path) -> list[ReportRow]:
    with open(path, encoding="utf-8", newline="") as fh:
        return _parse(ReportRow, fh.read())


def read_summary(path: str | Path) -> list[SummaryRow]:
    with open(path, encoding="utf-8", newline="") as fh:
        return _parse(SummaryRow, fh.read())


def point_scenario(base: Scenario, param: str, value: str, seed_offset: int) -> Scenario:
    """``base`` with ``param`` set to ``value`` and seed advanced by ``seed_offset``."""
    sc = base.with_overrides({param: _literal(value)})
    return sc.with_overrides({"seed": sc.network.seed + seed_offset})


def _literal(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def _run_task(task) -> list[ReportRow]:
    base, param, value, offset, rounds = task
    sc = point_scenario(base, param, value, offset)
    return [ReportRow.from_metrics(param, value, sc.network.seed, m) for m in run(sc, rounds)]


def run_sweep(base: Scenario, spec: SweepSpec, jobs: int = 1) -> list[ReportRow]:
    """All (value, seed) runs of ``spec``; rows ordered by value position, seed, round.

    Runs are independent, so ``jobs > 1`` spreads them over worker processes
    without changing the result.
    """
    tasks = [(base, spec.param, v, k, spec.rounds) for v in spec.values for k in range(spec.seeds)]
    # validate every point up front so config errors surface before any work
    for t in tasks:
        point_scenario(*t[:4])
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    order = {v: i for i, v in enumerate(spec.values)}
    keyed = sorted(zip(tasks, results), key=lambda tr: (order[tr[0][2]], tr[0][3]))
    return [row for _, rows in keyed for row in rows]


def summarize(rows: Sequence[ReportRow], rounds: int) -> list[SummaryRow]:
    """Seed-averaged summary per sweep point, in first-appearance order.

    ``rounds`` is the configured run length used for the active ratio.
    """
    if rounds <= 0:
        raise ValueError("rounds must be positive")
    runs: dict[tuple[str, str], dict[int, list[ReportRow]]] = {}
    for r in rows:
        runs.setdefault((r.param, r.value), {}).setdefault(r.seed, []).append(r)
    out = []
    for (param, value), by_seed in runs.items():
        act, pdr, energy, temp, alive = [], [], [], [], []
        for series in by_seed.values():
            act.append(math.fsum(r.active_node_ratio for r in series) / rounds)
            live = [r.pdr for r in series if r.packets_generated]
            pdr.append(math.fsum(live) / len(live) if live else 0.0)
            energy.append(math.fsum(r.avg_energy_consumed for r in series) / len(series))
            temp.append(math.fsum(r.mean_temperature for r in series) / len(series))
            alive.append(float(series[-1].alive_count))
        k = len(by_seed)
        out.append(
            SummaryRow(
                param,
                value,
                k,
                math.fsum(act) / k,
                math.fsum(pdr) / k,
                math.fsum(energy) / k,
                math.fsum(temp) / k,
                math.fsum(alive) / k,
            )
        )
    return out


def summary_path(out: str | Path) -> Path:
    """``metrics.csv`` -> ``metrics_summary.csv`` next to it."""
    p = Path(out)
    return p.with_name(f"{p.stem}_summary{p.suffix or '.csv'}")
