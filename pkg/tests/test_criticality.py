import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontensor.criticality import (
    alpha_ratio,
    asymptotic_alpha,
    characteristic_cubic,
    cpq_asymptotic,
    cpq_growth_base,
    critical_curve,
    critical_point,
    fit_exponents,
    negative_mu_check,
    solve_bracketed,
)
from ontensor.errors import NoBracket, NonPositiveInput, ValidationError
from ontensor.series import alpha_values, c_pq

mpmath.mp.dps = 40


def mp_root(mu):
    """High-precision root of the cubic in [4/3, 2]."""
    roots = mpmath.polyroots([-3, 4, -mu, 2 * mu], maxsteps=200, extraprec=80)
    real = [r.real for r in roots if abs(r.imag) < mpmath.mpf(10) ** -30]
    (r,) = [r for r in real if mpmath.mpf(4) / 3 - mpmath.mpf(10) ** -30 <= r <= 2]
    return r


@pytest.fixture(scope="module")
def alphas():
    return {mu: alpha_values(800, mu) for mu in (0, 1, 3)}


def test_mu_zero_closed_forms():
    cp = critical_point(0)
    assert cp.G_c == pytest.approx(4 / 3, abs=1e-15)
    assert abs(cp.g_c - 27 / 256) < 1e-12
    assert cp.K == pytest.approx(4 / (3 * math.sqrt(6)), rel=1e-12)
    assert cp.in_domain


@pytest.mark.parametrize("mu", [0.25, 1, 2.5, 3, 7, 10])
def test_root_matches_mpmath(mu):
    cp = critical_point(mu)
    r = mp_root(mpmath.mpf(mu))
    assert cp.G_c == pytest.approx(float(r), rel=1e-13)
    gc = (r - 1) / (r**2 * (r**2 + mu))
    assert cp.g_c == pytest.approx(float(gc), rel=1e-12)
    assert cp.K == pytest.approx(float(mpmath.sqrt(r**2 * (r**2 + mu) / (6 * r**2 + mu))), rel=1e-12)


def test_grid_invariants():
    for cp in critical_curve(0, 10, 0.1):
        assert 4 / 3 <= cp.G_c < 2
        assert cp.g_c > 0 and cp.K > 0 and cp.in_domain
        assert cp.residual < 1e-12
        xs = np.linspace(4 / 3, 2, 401)
        vals = [characteristic_cubic(x, cp.mu) for x in xs]
        changes = sum(1 for a, b in zip(vals, vals[1:]) if a * b < 0)
        assert changes <= 1


def test_growth_is_increasing_in_mu():
    growth = [cp.growth for cp in critical_curve(0, 5, 0.5)]
    assert all(a < b for a, b in zip(growth, growth[1:]))


@settings(deadline=None)
@given(st.floats(0, 50))
def test_gc_relation(mu):
    cp = critical_point(mu)
    assert cp.g_c == pytest.approx((cp.G_c - 1) / (cp.G_c**2 * (cp.G_c**2 + mu)), rel=1e-14)


def test_no_bracket():
    with pytest.raises(NoBracket):
        critical_point(-1)
    with pytest.raises(NoBracket):
        solve_bracketed(1.0, lo=1.9, hi=2.0)
    with pytest.raises(ValidationError):
        critical_curve(0, 1, 0)


def test_mu_three_values():
    """Values at mu = 3 from the cubic root and the closed forms."""
    cp = critical_point(3)
    assert cp.growth == pytest.approx(23.589456, rel=1e-6)
    assert cp.K / (2 * math.sqrt(math.pi)) == pytest.approx(0.241832, rel=1e-5)


# --- mu < 0 -------------------------------------------------------------------


def test_negative_mu_minus_one():
    rep = negative_mu_check(-1)
    assert rep.excluded
    (pair,) = [c for c in rep.candidates if abs(c[0] + 2 / 3) < 1e-6]
    assert abs(pair[0] + 2 / 3) < 1e-9
    assert abs(pair[1] - 27 / 4) < 1e-9
    assert any(abs(x - 1) < 1e-6 for x in rep.removable)


@pytest.mark.parametrize("mu", [-0.5, -2])
def test_negative_mu_examples(mu):
    assert negative_mu_check(mu).excluded


def test_negative_mu_grid():
    for k in range(20):
        assert negative_mu_check(-5 + 0.25 * k).excluded


def test_negative_mu_rejects_non_negative():
    with pytest.raises(ValidationError):
        negative_mu_check(0)


# --- asymptotics ----------------------------------------------------------------


def test_cpq_asymptotics():
    assert cpq_growth_base("fix-q") == Fraction(256, 27)
    assert 0.95 <= c_pq(200, 0) / cpq_asymptotic("fix-q", 0, 200) <= 1.05
    assert 0.95 <= c_pq(0, 200) / cpq_asymptotic("fix-p", 0, 200) <= 1.05
    assert 0.95 <= c_pq(150, 2) / cpq_asymptotic("fix-q", 2, 150) <= 1.05
    with pytest.raises(ValidationError):
        cpq_asymptotic("sideways", 0, 5)


def test_asymptotic_alpha_small_n(alphas):
    assert 0.9 <= alphas[0][100] / asymptotic_alpha(100, 0) <= 1.1
    assert asymptotic_alpha(10**6, 1) == math.inf


@pytest.mark.slow
@pytest.mark.parametrize("mu", [0, 1, 3])
def test_ratio_error_decreases(alphas, mu):
    errs = [abs(alpha_ratio(alphas[mu][n], n, mu) - 1) for n in (50, 100, 200, 400, 800)]
    assert all(a > b for a, b in zip(errs, errs[1:]))


# --- fits -------------------------------------------------------------------------


def test_fit_geometric():
    f = fit_exponents([2**n for n in range(1, 80)])
    assert f.growth == pytest.approx(2, abs=1e-12)
    assert abs(f.power) < 1e-9


def test_fit_synthetic_float():
    a = [3.0 * 5.0**n * n**-1.5 * (1 + 0.3 / n) for n in range(1, 200)]
    f = fit_exponents(a)
    assert f.growth == pytest.approx(5, rel=1e-6)
    assert f.power == pytest.approx(-1.5, abs=1e-3)


def test_fit_errors():
    with pytest.raises(ValidationError):
        fit_exponents([1] * 10)
    with pytest.raises(NonPositiveInput):
        fit_exponents([1] * 60 + [0])


@pytest.mark.slow
@pytest.mark.parametrize("mu", [0, 1, 3])
def test_fit_exact_alpha(alphas, mu):
    f = fit_exponents(alphas[mu][1:])
    assert f.power == pytest.approx(-1.5, abs=0.05)
    assert f.growth == pytest.approx(critical_point(mu).growth, rel=1e-3)
