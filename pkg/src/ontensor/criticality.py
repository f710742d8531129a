"""Critical curve, coefficient asymptotics and exponent fits.

Floating point throughout; exact inputs (Python ints, Fractions) are used
exactly wherever a ratio or difference would otherwise cancel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .errors import NoBracket, NonPositiveInput, ValidationError

G_LOW = 4.0 / 3.0
G_HIGH = 2.0
RESIDUAL_TOL = 1e-12


def characteristic_cubic(x: float, mu: float) -> float:
    """``-3x^3 + 4x^2 - mu x + 2 mu``; its root in [4/3, 2] is ``G_c(mu)``."""
    return ((-3.0 * x + 4.0) * x - mu) * x + 2.0 * mu


def _cubic_scale(x: float, mu: float) -> float:
    return 3.0 * abs(x) ** 3 + 4.0 * x * x + abs(mu * x) + 2.0 * abs(mu)


def _cubic_prime(x: float, mu: float) -> float:
    return (-9.0 * x + 8.0) * x - mu


def solve_bracketed(mu: float, lo: float = G_LOW, hi: float = G_HIGH, maxiter: int = 200) -> float:
    """Safeguarded Newton iteration inside a sign-changing bracket."""
    flo, fhi = characteristic_cubic(lo, mu), characteristic_cubic(hi, mu)
    if abs(flo) <= RESIDUAL_TOL * _cubic_scale(lo, mu):
        return lo
    if abs(fhi) <= RESIDUAL_TOL * _cubic_scale(hi, mu):
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoBracket(f"no sign change of the characteristic cubic on [{lo}, {hi}] at mu={mu}")
    x = 0.5 * (lo + hi)
    for _ in range(maxiter):
        fx = characteristic_cubic(x, mu)
        if fx == 0.0:
            return x
        if (fx > 0) == (flo > 0):
            lo, flo = x, fx
        else:
            hi = x
        d = _cubic_prime(x, mu)
        step = x - fx / d if d else None
        x = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
        if hi - lo < 4 * np.finfo(float).eps * hi:
            break
        if abs(characteristic_cubic(x, mu)) <= 0.01 * RESIDUAL_TOL * _cubic_scale(x, mu):
            return x
    return x


def gc_from_G(G: float, mu: float) -> float:
    return (G - 1.0) / (G * G * (G * G + mu))


def K_from_G(G: float, mu: float) -> float:
    return math.sqrt(G * G * (G * G + mu) / (6.0 * G * G + mu))


@dataclass(frozen=True)
class CriticalPoint:
    mu: float
    G_c: float
    g_c: float
    K: float
    in_domain: bool
    residual: float = field(default=0.0, compare=False)

    @property
    def growth(self) -> float:
        return 1.0 / self.g_c


def critical_point(mu: float) -> CriticalPoint:
    """Dominant singularity of the leading-order two-point function."""
    mu = float(mu)
    if mu < 0 or math.isnan(mu):
        raise NoBracket(f"mu={mu}: the critical curve is only defined for mu >= 0")
    G = solve_bracketed(mu)
    res = abs(characteristic_cubic(G, mu)) / _cubic_scale(G, mu)
    if res > RESIDUAL_TOL:
        raise NoBracket(f"root did not converge at mu={mu} (residual {res:.2e})")
    g_c = gc_from_G(G, mu)
    K = K_from_G(G, mu)
    ok = G_LOW <= G < G_HIGH and g_c > 0 and K > 0
    return CriticalPoint(mu, G, g_c, K, ok, res)


def critical_curve(mu_min: float, mu_max: float, step: float) -> list[CriticalPoint]:
    if step <= 0:
        raise ValidationError("step must be positive")
    count = int(math.floor((mu_max - mu_min) / step + 1e-9)) + 1
    return [critical_point(round(mu_min + i * step, 12)) for i in range(count)]


# ---------------------------------------------------------------------------
# mu < 0
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NegativeMuReport:
    mu: float
    bound: float
    candidates: tuple[tuple[float, float], ...]
    removable: tuple[float, ...]

    @property
    def excluded(self) -> bool:
        """No critical candidate falls inside the convergence bound."""
        return all(abs(g) > self.bound for _, g in self.candidates)


def negative_mu_check(mu: float) -> NegativeMuReport:
    """Would-be singularities of ``g(G) = (G-1) / (G^2 (G^2 + mu))`` for mu < 0.

    Critical points solve the characteristic cubic. Roots where ``G^2 + mu``
    vanishes are poles of ``g`` or, at ``mu = -1, G = 1``, a removable point
    where ``G - 1`` cancels; neither is a critical point and both are listed
    under ``removable``.
    """
    mu = float(mu)
    if mu >= 0:
        raise ValidationError("negative_mu_check expects mu < 0")
    bound = critical_point(-mu).g_c
    roots = np.roots([-3.0, 4.0, -mu, 2.0 * mu])
    cands, removed = [], []
    for r in roots:
        if abs(r.imag) > 1e-6:
            continue
        x = float(r.real)
        for _ in range(50):  # polish; double roots converge slowly but only feed `removed`
            d = _cubic_prime(x, mu)
            if d == 0:
                break
            nx = x - characteristic_cubic(x, mu) / d
            if abs(nx - x) < 1e-15 * max(1.0, abs(x)):
                x = nx
                break
            x = nx
        if abs(x * x + mu) < 1e-6 or x == 0:
            if not any(abs(x - y) < 1e-6 for y in removed):
                removed.append(x)
            continue
        if not any(abs(x - y) < 1e-9 for y, _ in cands):
            cands.append((x, gc_from_G(x, mu)))
    return NegativeMuReport(mu, bound, tuple(sorted(cands)), tuple(sorted(removed)))


# ---------------------------------------------------------------------------
# Coefficient asymptotics
# ---------------------------------------------------------------------------


def _log(x) -> float:
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


def log_asymptotic_alpha(n: int, mu: float) -> float:
    if n < 1:
        raise ValidationError("n must be at least 1")
    cp = critical_point(mu)
    return math.log(cp.K) - n * math.log(cp.g_c) - math.log(2 * math.sqrt(math.pi)) - 1.5 * math.log(n)


def asymptotic_alpha(n: int, mu: float) -> float:
    """``K g_c^-n / (2 sqrt(pi) n^(3/2))``; overflows to ``inf`` for large n,
    use :func:`alpha_ratio` to compare against exact values."""
    try:
        return math.exp(log_asymptotic_alpha(n, mu))
    except OverflowError:
        return math.inf


def alpha_ratio(exact, n: int, mu: float) -> float:
    """``exact / asymptotic_alpha(n, mu)`` computed in logs."""
    return math.exp(_log(exact) - log_asymptotic_alpha(n, mu))


def log_cpq_asymptotic(direction: str, fixed: int, index: int) -> float:
    if index < 1:
        raise ValidationError("index must be at least 1")
    lf = math.lgamma(fixed + 1)
    if direction == "fix-q":
        return (
            math.log(1 / 3 * math.sqrt(2 / (3 * math.pi))) - lf + fixed * math.log(16 / 3)
            + (fixed - 1.5) * math.log(index) + index * math.log(256 / 27)
        )
    if direction == "fix-p":
        return (
            -0.5 * math.log(math.pi) - lf + fixed * math.log(16)
            + (fixed - 1.5) * math.log(index) + index * math.log(4)
        )
    raise ValidationError(f"direction must be 'fix-q' or 'fix-p', got {direction!r}")


def cpq_asymptotic(direction: str, fixed: int, index: int) -> float:
    """Stirling estimate of ``C_{p,q}`` with one index fixed and the other large."""
    return math.exp(log_cpq_asymptotic(direction, fixed, index))


def cpq_growth_base(direction: str) -> Fraction:
    return {"fix-q": Fraction(256, 27), "fix-p": Fraction(4)}[direction]


# ---------------------------------------------------------------------------
# Exponent fits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentFit:
    n_max: int
    growth: float
    power: float
    growth_residual: float
    power_residual: float
    depth: int


def _richardson(values: Sequence, ns: Sequence[int]):
    """Eliminate ``1/n .. 1/n^k`` terms from ``values`` sampled at consecutive
    ``ns`` (k = len - 1)."""
    k = len(values) - 1
    total = 0
    for j, (v, n) in enumerate(zip(values, ns)):
        w = Fraction((-1) ** (k - j) * n**k, math.factorial(j) * math.factorial(k - j))
        total += w * v if isinstance(v, (int, Fraction)) else float(w) * v
    return total


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction)) or isinstance(x, Rational)


def fit_exponents(coeffs: Sequence, depth: int = 3, min_terms: int = 50) -> ExponentFit:
    """Estimate ``rho`` and ``theta`` in ``a_n ~ C rho^n n^theta``.

    The growth rate is the Richardson-extrapolated ratio ``a_n / a_(n-1)``.
    The power comes from ``n (n-1) log(r_(n-1) / r_n)``, which tends to
    ``theta`` with ``1/n`` corrections, again extrapolated.
    Residuals are the changes between extrapolation depths ``depth - 1`` and
    ``depth``.
    """
    a = list(coeffs)
    if len(a) < min_terms:
        raise ValidationError(f"need at least {min_terms} coefficients, got {len(a)}")
    if any(x <= 0 for x in a):
        raise NonPositiveInput("coefficients must be positive")
    exact = all(_exact(x) for x in a[-(depth + 3):])
    N = len(a) - 1

    def ratio(n):
        return Fraction(a[n], a[n - 1]) if exact else a[n] / a[n - 1]

    def theta(n):
        # n (n-1) log(a_(n-1)^2 / (a_n a_(n-2)))
        if exact:
            num = Fraction(a[n - 1]) ** 2 - Fraction(a[n]) * a[n - 2]
            den = Fraction(a[n]) * a[n - 2]
            return n * (n - 1) * math.log1p(float(num / den))
        # via ratios: differencing log a_n directly cancels away most digits
        r1, r0 = a[n - 1] / a[n - 2], a[n] / a[n - 1]
        return n * (n - 1) * math.log1p((r1 - r0) / r0)

    def extrapolate(f, k):
        ns = list(range(N - k, N + 1))
        return _richardson([f(n) for n in ns], ns)

    growth = [float(extrapolate(ratio, k)) for k in (depth - 1, depth)]
    power = [float(extrapolate(theta, k)) for k in (depth - 1, depth)]
    return ExponentFit(
        N, growth[1], power[1],
        abs(growth[1] - growth[0]) / abs(growth[1]), abs(power[1] - power[0]), depth,
    )
