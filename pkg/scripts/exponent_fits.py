"""Growth and power fits on exact coefficients, against the critical point.

Fits alpha_n (leading order) and h_n (reduced next-to-leading order) for
several mu and n_max, showing how the estimates settle as n_max grows.

    python scripts/exponent_fits.py --mus 0 1 3 --nmax 250 500 1000 2000
"""

from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ontensor.criticality import critical_point, fit_exponents
from ontensor.series import alpha_values, h_values


@dataclass
class FitConfig:
    mus: list[Fraction] = field(default_factory=lambda: [Fraction(0), Fraction(1), Fraction(3)])
    nmax: list[int] = field(default_factory=lambda: [250, 500, 1000, 2000])
    depth: int = 3
    out: Path = Path("runs/fits")


def main(cfg: FitConfig) -> int:
    cfg.out.mkdir(parents=True, exist_ok=True)
    top = max(cfg.nmax)
    rows = []
    for mu in cfg.mus:
        growth = critical_point(float(mu)).growth
        seqs = {"alpha": alpha_values(top, mu), "h": h_values(top, mu)}
        for name, a in seqs.items():
            for n in sorted(cfg.nmax):
                f = fit_exponents(a[1 : n + 1], depth=cfg.depth)
                rows.append([str(mu), name, n, f.growth, growth, f.growth / growth - 1, f.power, f.power_residual])
                print(f"mu={str(mu):>4} {name:>5} n<={n:<5} growth={f.growth:.8f}"
                      f" (rel {f.growth / growth - 1:+.1e})  power={f.power:+.5f}")
    with open(cfg.out / "exponent_fits.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["mu (exact rational)", "sequence (text)", "n_max (exact int)", "growth (float)",
                    "inverse_g_c (float)", "growth_rel_error (float)", "power (float)",
                    "power_residual (float)"])
        w.writerows(rows)
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mus", type=Fraction, nargs="+", default=FitConfig().mus)
    ap.add_argument("--nmax", type=int, nargs="+", default=FitConfig().nmax)
    ap.add_argument("--depth", type=int, default=FitConfig.depth)
    ap.add_argument("--out", type=Path, default=FitConfig.out)
    raise SystemExit(main(FitConfig(**vars(ap.parse_args()))))
