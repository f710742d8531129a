"""Critical curve G_c, g_c, K over a mu grid, with the mu < 0 scan.

    python scripts/critical_curve.py --mu-max 10 --step 0.1 --out runs/critical
"""

from __future__ import annotations

import argparse
import csv
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from ontensor.criticality import critical_curve, negative_mu_check


@dataclass
class CurveConfig:
    mu_min: float = 0.0
    mu_max: float = 10.0
    step: float = 0.1
    negative_min: float = -5.0
    out: Path = Path("runs/critical")


def main(cfg: CurveConfig) -> int:
    cfg.out.mkdir(parents=True, exist_ok=True)
    pts = critical_curve(cfg.mu_min, cfg.mu_max, cfg.step)
    norm = 2 * math.sqrt(math.pi)
    with open(cfg.out / "critical_curve.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["mu (float)", "G_c (float)", "g_c (float)", "inverse_g_c (float)",
                    "K_over_2sqrtpi (float)"])
        for c in pts:
            w.writerow([c.mu, c.G_c, c.g_c, c.growth, c.K / norm])

    fig, ax = plt.subplots(1, 2, figsize=(9, 3.5))
    mus = [c.mu for c in pts]
    ax[0].plot(mus, [c.growth for c in pts])
    ax[0].set_xlabel("mu")
    ax[0].set_ylabel("1/g_c")
    ax[1].plot(mus, [c.K / norm for c in pts])
    ax[1].set_xlabel("mu")
    ax[1].set_ylabel("K / (2 sqrt(pi))")
    fig.tight_layout()
    fig.savefig(cfg.out / "critical_curve.svg", metadata={"Date": None})

    n_neg = int(round(-cfg.negative_min / 0.25))
    bad = []
    for k in range(n_neg):
        mu = cfg.negative_min + 0.25 * k
        rep = negative_mu_check(mu)
        if not rep.excluded:
            bad.append(mu)
    for c in pts[:: max(1, len(pts) // 10)]:
        print(f"mu={c.mu:6.2f}  G_c={c.G_c:.8f}  1/g_c={c.growth:10.5f}  K/(2 sqrt pi)={c.K / norm:.5f}")
    print(f"mu < 0 scan: {n_neg} points, not excluded: {bad or 'none'}")
    return 1 if bad else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in ("mu_min", "mu_max", "step", "negative_min"):
        ap.add_argument("--" + f.replace("_", "-"), type=float, default=getattr(CurveConfig, f))
    ap.add_argument("--out", type=Path, default=CurveConfig.out)
    raise SystemExit(main(CurveConfig(**vars(ap.parse_args()))))
