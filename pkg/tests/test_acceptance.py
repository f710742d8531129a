"""Acceptance suite: one PASS/FAIL line per criterion.

Run with pytest, or directly (``python3 tests/test_acceptance.py``) to print
the lines without the pytest report.
"""

import math
import sys
import time
from fractions import Fraction

import pytest

from ontensor import library
from ontensor.census import census_configurations, census_theorem_check, enumerate_vacuum
from ontensor.criticality import alpha_ratio, critical_point, fit_exponents, negative_mu_check
from ontensor.graphs import Bubble, degree
from ontensor.series import (
    MU,
    GSeries,
    MuPolynomial,
    alpha_n,
    alpha_values,
    c_pq,
    flo_series,
    free_energy_operator,
    glo_series,
    gnlo_reduced_series,
    h_values,
    sigma0_series,
)
from ontensor.trees import enumerate_trees

# tolerances
GC0_TOL = 1e-12
INV_GC3_RANGE = (14.75, 14.85)
CHI3_RANGE = (0.1105, 0.1115)
RATIO_TOL_100 = 0.1
POWER_TOL = 0.05
GROWTH_REL_TOL = 1e-3
NEG_MU_TOL = 1e-9
CENSUS_NODES = 16
CENSUS_SECONDS = 300
SERIES_ORDER = 20
ASYM_N = (100, 800)
FIT_NMAX = 2000


def report(number, ok, detail, out=None):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line, file=out or sys.stdout, flush=True)
    return ok


@pytest.fixture
def emit(capsys):
    def _emit(number, ok, detail):
        with capsys.disabled():
            print()
            report(number, ok, detail)
        assert ok, detail
    return _emit


def check_bubble_weights():
    rhos = {
        "tetra": Bubble.from_graph(library.tetra()).rho,
        "pillow": Bubble.from_graph(library.pillow(1)).rho,
        "b2": Bubble.from_graph(library.b2()).rho,
    }
    ok = rhos == {"tetra": 0, "pillow": Fraction(1, 2), "b2": 0}
    return ok, "rho " + ", ".join(f"{k}={v}" for k, v in rhos.items())


def check_degrees():
    cases = {"tetra-tetra": 0, "pillow-double-tadpole": 0}
    cases.update({f"infinity-{c}": 1 for c in (1, 2, 3)})
    ok, parts = True, []
    for name, want in cases.items():
        d = degree(library.builtin(name))
        good = d.omega2_direct == d.omega2_jacket == want
        ok &= good
        parts.append(f"{name}: direct {Fraction(d.omega2_direct, 2)}, jacket {Fraction(d.omega2_jacket, 2)}")
    return ok, "; ".join(parts)


def check_census():
    t0 = time.perf_counter()
    failures, classes, configs = [], 0, 0
    for n1, n2 in census_configurations(CENSUS_NODES):
        rep = enumerate_vacuum(n1, n2, max_nodes=CENSUS_NODES)
        chk = census_theorem_check(rep)
        configs += 1
        classes += rep.class_count
        if not chk.passed:
            failures.append(f"({n1},{n2}): {chk.failures[:2]}")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < CENSUS_SECONDS
    detail = f"{configs} configurations, {classes} classes, {elapsed:.0f}s (< {CENSUS_SECONDS}s)"
    if failures:
        detail += "; " + "; ".join(failures[:3])
    return ok, detail


def check_trees():
    pairs = [(p, q) for p in range(5) for q in range(9) if 4 * p + 2 * q <= 16]
    bad = [(p, q) for p, q in pairs if enumerate_trees(p, q) != c_pq(p, q)]
    spot = (enumerate_trees(1, 1), enumerate_trees(2, 0), enumerate_trees(0, 2))
    ok = not bad and spot == (6, 4, 2)
    return ok, f"{len(pairs)} pairs, mismatches {bad}, C11/C20/C02 = {spot}"


def check_series():
    N = SERIES_ORDER
    G = glo_series(N)
    zero = GSeries.constant(0, N)
    results = {
        "alpha": all(
            G[n] == alpha_n(n) == MuPolynomial({q: c_pq(n - q, q) for q in range(n + 1)})
            for n in range(N + 1)
        ),
        "(1-Sigma0)G=1": (1 - sigma0_series(N)) * G - 1 == zero,
        "h(G^2+mu)=dG": gnlo_reduced_series(N) * (G * G + MU) == glo_series(N + 1).d_g(),
        "F_LO relation": free_energy_operator(flo_series(N)) == G - 1,
    }
    return all(results.values()), f"order {N}: " + ", ".join(f"{k} {'ok' if v else 'BROKEN'}" for k, v in results.items())


def check_critical():
    gc0 = critical_point(0).g_c
    cp3 = critical_point(3)
    inv3 = cp3.growth
    chi3 = cp3.K / (2 * math.sqrt(math.pi))
    parts = {
        "g_c(0)": abs(gc0 - 27 / 256) <= GC0_TOL,
        "1/g_c(3)": INV_GC3_RANGE[0] <= inv3 <= INV_GC3_RANGE[1],
        "K/(2 sqrt pi)(3)": CHI3_RANGE[0] <= chi3 <= CHI3_RANGE[1],
    }
    detail = (
        f"|g_c(0) - 27/256| = {abs(gc0 - 27 / 256):.1e}; 1/g_c(3) = {inv3:.4f} "
        f"(want {INV_GC3_RANGE}); K/(2 sqrt pi) at 3 = {chi3:.4f} (want {CHI3_RANGE}); "
        + ", ".join(f"{k} {'ok' if v else 'out of range'}" for k, v in parts.items())
    )
    return all(parts.values()), detail


def check_asymptotics():
    ok, parts = True, []
    for mu in (0, 1, 3):
        a = alpha_values(ASYM_N[1], mu)
        e100 = abs(alpha_ratio(a[ASYM_N[0]], ASYM_N[0], mu) - 1)
        e800 = abs(alpha_ratio(a[ASYM_N[1]], ASYM_N[1], mu) - 1)
        ok &= e100 <= RATIO_TOL_100 and e800 < e100
        parts.append(f"mu={mu}: {e100:.2e} -> {e800:.2e}")
    return ok, "|ratio - 1| at n=100 -> 800: " + "; ".join(parts)


def check_exponents():
    gc = critical_point(1)
    fa = fit_exponents(alpha_values(FIT_NMAX, 1)[1:])
    fh = fit_exponents(h_values(FIT_NMAX, 1)[1:])
    rel = abs(fa.growth / gc.growth - 1)
    ok = (
        abs(fa.power + 1.5) <= POWER_TOL
        and rel <= GROWTH_REL_TOL
        and abs(fh.power + 0.5) <= POWER_TOL
    )
    return ok, (
        f"alpha: power {fa.power:.5f}, growth {fa.growth:.6f} vs 1/g_c(1) {gc.growth:.6f} "
        f"(rel {rel:.1e}); h: power {fh.power:.5f}"
    )


def check_negative_mu():
    rep = negative_mu_check(-1)
    pair = min(rep.candidates, key=lambda c: abs(c[0] + 2 / 3))
    pair_ok = abs(pair[0] + 2 / 3) <= NEG_MU_TOL and abs(pair[1] - 27 / 4) <= NEG_MU_TOL
    grid = [-5 + 0.25 * k for k in range(20)]
    grid_ok = all(negative_mu_check(mu).excluded for mu in grid)
    ok = rep.excluded and pair_ok and grid_ok
    return ok, (
        f"mu=-1 excluded={rep.excluded}, pair ({pair[0]:.12f}, {pair[1]:.12f}); "
        f"{len(grid)} grid points excluded={grid_ok}"
    )


CHECKS = [
    (1, check_bubble_weights),
    (2, check_degrees),
    (3, check_census),
    (4, check_trees),
    (5, check_series),
    (6, check_critical),
    (7, check_asymptotics),
    (8, check_exponents),
    (9, check_negative_mu),
]


def test_criterion_1_bubble_weights(emit):
    emit(1, *check_bubble_weights())


def test_criterion_2_degree_ground_truth(emit):
    emit(2, *check_degrees())


def test_criterion_3_census_theorems(emit):
    emit(3, *check_census())


def test_criterion_4_tree_oracle(emit):
    emit(4, *check_trees())


def test_criterion_5_series_identities(emit):
    emit(5, *check_series())


def test_criterion_6_critical_data(emit):
    emit(6, *check_critical())


def test_criterion_7_asymptotics(emit):
    emit(7, *check_asymptotics())


def test_criterion_8_exponents(emit):
    emit(8, *check_exponents())


def test_criterion_9_negative_mu(emit):
    emit(9, *check_negative_mu())


if __name__ == "__main__":
    results = [report(n, *fn()) for n, fn in CHECKS]
    sys.exit(0 if all(results) else 1)
