"""Census of every quartic vacuum configuration up to a node budget.

Writes one CSV with all classes and prints a per-configuration table with
the theorem checks.

    python scripts/census_sweep.py --max-nodes 16 --out runs/census
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from ontensor.census import (
    census_configurations,
    census_theorem_check,
    enumerate_vacuum,
    write_census_csv,
)


@dataclass
class SweepConfig:
    max_nodes: int = 16
    workers: int = 1
    out: Path = Path("runs/census")


def main(cfg: SweepConfig) -> int:
    cfg.out.mkdir(parents=True, exist_ok=True)
    reports, failed = [], 0
    t_all = time.perf_counter()
    print(f"{'n1':>3} {'n2':>9} {'nodes':>5} {'classes':>8} {'w=0':>5} {'w=1/2':>6} {'checks':>7} {'sec':>6}")
    for n1, n2 in census_configurations(cfg.max_nodes):
        t0 = time.perf_counter()
        rep = enumerate_vacuum(n1, n2, max_nodes=cfg.max_nodes, workers=cfg.workers)
        chk = census_theorem_check(rep)
        failed += not chk.passed
        reports.append(rep)
        counts = {float(k): v for k, v in rep.omega_counts.items()}
        print(
            f"{n1:>3} {','.join(map(str, n2)):>9} {rep.node_count:>5} {rep.class_count:>8}"
            f" {counts.get(0.0, 0):>5} {counts.get(0.5, 0):>6}"
            f" {'pass' if chk.passed else 'FAIL':>7} {time.perf_counter() - t0:>6.1f}"
        )
    path = cfg.out / f"census-upto-{cfg.max_nodes}.csv"
    with open(path, "w", newline="") as fh:
        write_census_csv(reports, fh)
    print(f"{sum(r.class_count for r in reports)} classes in {time.perf_counter() - t_all:.0f}s -> {path}")
    return 1 if failed else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-nodes", type=int, default=SweepConfig.max_nodes)
    ap.add_argument("--workers", type=int, default=SweepConfig.workers)
    ap.add_argument("--out", type=Path, default=SweepConfig.out)
    raise SystemExit(main(SweepConfig(**vars(ap.parse_args()))))
