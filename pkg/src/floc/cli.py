"""Command-line front end: single runs, parameter sweeps, standalone role ranking and fixture validation.

Exit codes: 0 ok, 1 usage, 2 configuration, 3 runtime failure.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from . import hflts
from .config import ConfigError, Scenario, load_scenario
from .report import ReportRow, SweepSpec, emit_csv, emit_summary, run_sweep, summarize, summary_path
from .simulation import run

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3

log = logging.getLogger("floc")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _csv_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="floc", description="Opportunistic clustering WSN simulator with an HFLTS role engine.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="simulate one scenario and write per-round metrics")
    r.add_argument("--config", help="flat TOML scenario file")
    r.add_argument("--seed", type=int)
    r.add_argument("--rounds", type=int)
    r.add_argument("--out", help="CSV path (stdout if omitted)")

    s = sub.add_parser("sweep", help="run a parameter sweep over several seeds")
    s.add_argument("--config")
    s.add_argument("--param", required=True, help="scenario key, e.g. node_count or s_max")
    s.add_argument("--values", required=True, help="comma-separated values")
    s.add_argument("--seeds", type=int, default=1, help="seeds per point (base seed + 0..k-1)")
    s.add_argument("--rounds", type=int)
    s.add_argument("--out", help="per-round CSV path; a *_summary.csv is written alongside")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")

    h = sub.add_parser("hflts", help="decision engine utilities")
    hsub = h.add_subparsers(dest="hflts_command", required=True, parser_class=_Parser)
    rank = hsub.add_parser("rank", help="rank CH/CM/Relay for an expression matrix or a criteria vector")
    src = rank.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", help="3 x 6 expression matrix file")
    src.add_argument("--criteria", type=_csv_floats, help="six standardised values in [0, 1]")
    rank.add_argument("--mode", choices=("optimistic", "pessimistic"), default="optimistic")
    rank.add_argument("--weights", type=_csv_floats, help="six criterion weights (weighted-mean ranking)")

    v = sub.add_parser("validate", help="re-derive the reference matrix term sets and envelopes")
    v.add_argument("--matrix", help="expression matrix file (packaged reference if omitted)")
    return p


def _scenario(args) -> Scenario:
    sc = load_scenario(args.config) if args.config else Scenario()
    over = {}
    if getattr(args, "seed", None) is not None:
        over["seed"] = args.seed
    if args.rounds is not None:
        over["rounds"] = args.rounds
    return sc.with_overrides(over) if over else sc


def cmd_run(args) -> int:
    sc = _scenario(args)
    rows = [ReportRow.from_metrics("", "", sc.network.seed, m) for m in run(sc)]
    text = emit_csv(rows, args.out)
    if args.out is None:
        sys.stdout.write(text)
    else:
        log.info("wrote %d rows to %s", len(rows), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    sc = _scenario(args)
    values = tuple(v.strip() for v in args.values.split(",") if v.strip())
    spec = SweepSpec(args.param, values, args.seeds, args.rounds)
    if args.jobs < 1:
        raise UsageError("floc sweep: --jobs must be >= 1")
    rows = run_sweep(sc, spec, jobs=args.jobs)
    summary = summarize(rows, sc.network.rounds) if sc.network.rounds > 0 else []
    if args.out is None:
        sys.stdout.write(emit_csv(rows))
    else:
        emit_csv(rows, args.out)
        emit_summary(summary, summary_path(args.out))
        log.info("wrote %d rows to %s", len(rows), args.out)
    return EXIT_OK


def cmd_rank(args) -> int:
    weights = args.weights
    if weights is not None and len(weights) != hflts.N_CRITERIA:
        raise UsageError(f"floc hflts rank: --weights needs {hflts.N_CRITERIA} values")
    status = hflts.Status(args.mode)
    if args.matrix:
        try:
            matrix = hflts.load_matrix(args.matrix)
        except OSError as exc:
            raise ConfigError(f"cannot read matrix {args.matrix}: {exc}") from exc
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        decision = hflts.decide_role((), status, weights, matrix=matrix)
    else:
        if len(args.criteria) != hflts.N_CRITERIA or any(not 0 <= c <= 1 for c in args.criteria):
            raise UsageError(f"floc hflts rank: --criteria needs {hflts.N_CRITERIA} values in [0, 1]")
        decision = hflts.decide_role(args.criteria, status, weights)
    print("H (term sets)")
    print(hflts.format_table(decision.hflts))
    print("Y (envelopes)")
    print(hflts.format_table(decision.envelopes))
    print(f"mode: {decision.mode}")
    for alt, iv, rk in zip(hflts.ALTERNATIVES, decision.intervals, decision.ranks):
        print(f"{alt.value:<6} interval=[{iv[0]:.6f}, {iv[1]:.6f}] rank={rk:.6f}")
    print(f"choice: {decision.role.value}")
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.matrix:
        try:
            matrix = hflts.load_matrix(args.matrix)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot load matrix {args.matrix}: {exc}") from exc
    else:
        matrix = None
    checks = hflts.check_reference(matrix)
    labels = [a.value for a in hflts.ALTERNATIVES]
    print(f"{'stage':<9}{'cell':<10}{'expected':<22}{'actual':<22}result")
    for c in checks:
        cell = f"{labels[c.row]}/c{c.col + 1}"
        print(f"{c.stage:<9}{cell:<10}{c.expected:<22}{c.actual:<22}{'PASS' if c.ok else 'FAIL'}")
    failed = sum(not c.ok for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} cells match")
    return EXIT_OK if failed == 0 else EXIT_RUNTIME


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("FLOC_LOG", "WARNING").upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        if args.command == "run":
            return cmd_run(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "hflts":
            return cmd_rank(args)
        return cmd_validate(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"floc: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"floc: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - report, don't trace, at the CLI boundary
        log.debug("unhandled error", exc_info=True)
        print(f"floc: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
