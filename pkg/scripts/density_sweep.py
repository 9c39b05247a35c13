"""Sweep the node count and report active ratio, PDR and energy per point.

    python scripts/density_sweep.py [--values 60,70,80,90] [--seeds 5] [--out DIR]
"""
import argparse
from pathlib import Path

from floc.config import load_scenario
from floc.report import SweepSpec, emit_csv, emit_summary, run_sweep, summarize

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=str(ROOT / "scenarios" / "base.scn"))
    ap.add_argument("--values", default="60,70,80,90")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--rounds", type=int)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", help="directory for density.csv and density_summary.csv")
    args = ap.parse_args()

    base = load_scenario(args.config)
    spec = SweepSpec("node_count", tuple(args.values.split(",")), args.seeds, args.rounds)
    rows = run_sweep(base, spec, jobs=args.jobs)
    summary = summarize(rows, args.rounds or base.network.rounds)
    print(f"{'nodes':>6} {'active':>8} {'pdr':>8} {'energy':>10} {'alive':>7}")
    for s in summary:
        print(f"{s.value:>6} {s.active_node_ratio:8.4f} {s.pdr:8.4f} {s.avg_energy_consumed:10.3e} {s.final_alive:7.1f}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        emit_csv(rows, out / "density.csv")
        emit_summary(summary, out / "density_summary.csv")


if __name__ == "__main__":
    main()
