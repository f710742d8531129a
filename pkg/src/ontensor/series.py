"""Exact generating functions of the quartic model.

Series in the coupling ``g`` are truncated at a fixed order and carry exact
polynomial coefficients in ``mu`` (the ratio counting type II melons). All
arithmetic is over Python integers and :class:`fractions.Fraction`; there is
no floating point anywhere in this module.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from numbers import Rational
from typing import Iterable, Mapping

from .errors import DivisionByNonUnit, ValidationError


def _norm(x):
    """Keep integral values as ``int`` so the hot loops stay in integer math."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


class MuPolynomial:
    """Polynomial in ``mu`` with exact rational coefficients (no zero terms)."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, Rational] | None = None):
        c = {}
        for e, v in (coeffs or {}).items():
            if e < 0:
                raise ValidationError("negative mu exponent")
            v = _norm(Fraction(v)) if not isinstance(v, int) else v
            if v:
                c[e] = v
        self._c = c

    @classmethod
    def _raw(cls, c: dict) -> "MuPolynomial":
        p = cls.__new__(cls)
        p._c = c
        return p

    @classmethod
    def const(cls, v) -> "MuPolynomial":
        return cls({0: v})

    # -- access ---------------------------------------------------------------

    def coeff(self, e: int):
        return self._c.get(e, 0)

    def items(self):
        return sorted(self._c.items())

    @property
    def degree(self) -> int:
        return max(self._c, default=-1)

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return all(e == 0 for e in self._c)

    def __call__(self, mu):
        return sum(v * mu**e for e, v in self._c.items())

    # -- arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> "MuPolynomial":
        if isinstance(other, MuPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return MuPolynomial.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, v in other._c.items():
            s = _norm(c.get(e, 0) + v)
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return MuPolynomial._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return MuPolynomial._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MuPolynomial._raw({})
            return MuPolynomial._raw({e: _norm(v * other) for e, v in self._c.items()})
        if not isinstance(other, MuPolynomial):
            return NotImplemented
        c: dict = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return MuPolynomial._raw({e: _norm(v) for e, v in c.items() if v})

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> "MuPolynomial":
        """Multiply by ``mu**k``."""
        return MuPolynomial._raw({e + k: v for e, v in self._c.items()})

    def derivative(self) -> "MuPolynomial":
        return MuPolynomial._raw({e - 1: e * v for e, v in self._c.items() if e})

    def euler(self) -> "MuPolynomial":
        """``mu * d/dmu``: scales the ``mu**e`` term by ``e``."""
        return MuPolynomial._raw({e: e * v for e, v in self._c.items() if e})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(self.items()))

    def __repr__(self):
        if not self._c:
            return "0"
        terms = []
        for e, v in self.items():
            terms.append(f"{v}" if e == 0 else f"{v}*mu" + (f"^{e}" if e > 1 else ""))
        return " + ".join(terms)


MU = MuPolynomial({1: 1})
ZERO = MuPolynomial()
ONE = MuPolynomial.const(1)


@dataclass(frozen=True)
class GSeries:
    """Truncated power series ``sum_n coeffs[n] g**n`` for ``n <= order``.

    ``sqrt_g`` counts extra factors of ``sqrt(g)`` carried symbolically in
    front of the series (the next-to-leading two-point function has one).
    """

    order: int
    coeffs: tuple[MuPolynomial, ...]
    sqrt_g: int = 0

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValidationError("coefficient count does not match the order")

    @classmethod
    def from_list(cls, coeffs: Iterable, order: int, sqrt_g: int = 0) -> "GSeries":
        cs = [c if isinstance(c, MuPolynomial) else MuPolynomial.const(c) for c in coeffs]
        cs = (cs + [ZERO] * (order + 1))[: order + 1]
        return cls(order, tuple(cs), sqrt_g)

    @classmethod
    def constant(cls, c, order: int) -> "GSeries":
        return cls.from_list([c], order)

    @classmethod
    def g(cls, order: int) -> "GSeries":
        return cls.from_list([0, 1], order)

    def __getitem__(self, n: int) -> MuPolynomial:
        return self.coeffs[n]

    def truncate(self, order: int) -> "GSeries":
        if order > self.order:
            raise ValidationError("cannot extend a truncated series")
        return GSeries(order, self.coeffs[: order + 1], self.sqrt_g)

    def _align(self, other) -> "GSeries":
        if isinstance(other, GSeries):
            if other.order != self.order:
                raise ValidationError(f"orders differ: {self.order} vs {other.order}")
            return other
        if isinstance(other, (int, Fraction, MuPolynomial)):
            return GSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._align(other)
        if other is NotImplemented:
            return other
        if other.sqrt_g != self.sqrt_g:
            raise ValidationError("cannot add series with different sqrt(g) prefactors")
        return GSeries(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.sqrt_g)

    __radd__ = __add__

    def __neg__(self):
        return GSeries(self.order, tuple(-a for a in self.coeffs), self.sqrt_g)

    def __sub__(self, other):
        other = self._align(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, MuPolynomial)):
            return GSeries(self.order, tuple(a * other for a in self.coeffs), self.sqrt_g)
        other = self._align(other)
        if other is NotImplemented:
            return other
        N = self.order
        a, b = self.coeffs, other.coeffs
        out = []
        for n in range(N + 1):
            acc = ZERO
            for i in range(n + 1):
                if a[i].is_zero() or b[n - i].is_zero():
                    continue
                acc = acc + a[i] * b[n - i]
            out.append(acc)
        return GSeries(N, tuple(out), self.sqrt_g + other.sqrt_g)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = GSeries.constant(1, self.order)
        for _ in range(k):
            out = out * self
        return out

    def times_g(self) -> "GSeries":
        return GSeries(self.order, (ZERO,) + self.coeffs[:-1], self.sqrt_g)

    def inverse(self) -> "GSeries":
        c0 = self.coeffs[0]
        if c0.is_zero() or not c0.is_constant():
            raise DivisionByNonUnit("constant term must be a nonzero rational")
        inv0 = Fraction(1) / Fraction(c0.coeff(0))
        out = [MuPolynomial.const(inv0)]
        for n in range(1, self.order + 1):
            acc = ZERO
            for i in range(1, n + 1):
                acc = acc + self.coeffs[i] * out[n - i]
            out.append(acc * (-inv0))
        return GSeries(self.order, tuple(out), -self.sqrt_g)

    def __truediv__(self, other):
        other = self._align(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def d_g(self) -> "GSeries":
        """Derivative in ``g``; exact through ``order - 1``."""
        if self.sqrt_g:
            raise ValidationError("d_g of a sqrt(g)-prefixed series is not closed")
        cs = tuple(self.coeffs[n] * n for n in range(1, self.order + 1))
        return GSeries(self.order - 1, cs)

    def g_d_g(self) -> "GSeries":
        """``g * d/dg``: scales coefficient ``n`` by ``n``."""
        return GSeries(self.order, tuple(c * n for n, c in enumerate(self.coeffs)), self.sqrt_g)

    def mu_d_mu(self) -> "GSeries":
        return GSeries(self.order, tuple(c.euler() for c in self.coeffs), self.sqrt_g)

    def at(self, mu) -> list:
        """Coefficients with ``mu`` substituted."""
        return [_norm(Fraction(c(mu))) for c in self.coeffs]

    def __eq__(self, other):
        if not isinstance(other, GSeries):
            return NotImplemented
        return (self.order, self.coeffs, self.sqrt_g) == (other.order, other.coeffs, other.sqrt_g)

    def __hash__(self):
        return hash((self.order, self.coeffs, self.sqrt_g))


@dataclass(frozen=True)
class Couplings:
    lambda1: Fraction
    lambda2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lambda1", Fraction(self.lambda1))
        object.__setattr__(self, "lambda2", Fraction(self.lambda2))

    @property
    def g(self) -> Fraction:
        return self.lambda1**2

    @property
    def mu(self) -> Fraction:
        if not self.lambda1:
            raise ValidationError("lambda1 must be nonzero to define mu")
        return -self.lambda2 / self.lambda1**2


# ---------------------------------------------------------------------------
# Counting melonic graphs
# ---------------------------------------------------------------------------


def c_pq(p: int, q: int) -> int:
    """Number of melonic 2-point graphs with p type I and q type II melons."""
    if p < 0 or q < 0:
        raise ValidationError("p and q must be non-negative")
    num = factorial(4 * p + 2 * q)
    den = factorial(p) * factorial(q) * factorial(3 * p + q + 1)
    c, r = divmod(num, den)
    assert r == 0, (p, q)
    return c


def alpha_n(n: int) -> MuPolynomial:
    """Coefficient of ``g**n`` in the leading-order two-point function,
    from the single sum over the number of type II melons."""
    if n < 0:
        raise ValidationError("n must be non-negative")
    terms = {}
    for q in range(n + 1):
        terms[q] = Fraction(comb(n, q) * comb(4 * n - 2 * q, n), 3 * n - 2 * q + 1)
    return MuPolynomial(terms)


def glo_series(order: int) -> GSeries:
    """Solve ``G = 1 + g G^2 (G^2 + mu)`` by fixed-point iteration.

    Each sweep fixes one more coefficient, so ``order + 1`` sweeps suffice;
    sweep ``k`` only needs the product through ``g**k``.
    """
    if order < 0:
        raise ValidationError("order must be non-negative")
    G = GSeries.constant(1, order)
    for sweep in range(order + 1):
        k = min(sweep + 1, order)
        Gk = G.truncate(k)
        G2 = Gk * Gk
        rhs = (G2 * (G2 + MU)).times_g() + 1
        G = GSeries(order, rhs.coeffs + G.coeffs[k + 1:])
    return G


def sigma0_series(order: int) -> GSeries:
    """One-particle-irreducible leading-order two-point function."""
    G = glo_series(order)
    g = GSeries.g(order)
    return g * G * G * G + g * G * MU


def gnlo_reduced_series(order: int) -> GSeries:
    """``h = G^3 / (1 - g mu G^2 - 3 g G^4)``; the next-to-leading two-point
    function is ``-sqrt(g) * h`` (see :func:`gnlo_series`)."""
    G = glo_series(order)
    G2 = G * G
    den = 1 - (G2 * MU).times_g() - (G2 * G2 * 3).times_g()
    return G2 * G / den


def gnlo_series(order: int) -> GSeries:
    h = gnlo_reduced_series(order)
    return GSeries(h.order, (-h).coeffs, sqrt_g=1)


def flo_series(order: int) -> GSeries:
    """Leading-order free energy with ``F(0, mu) = 0``; the ``g**(p+q) mu**q``
    coefficient is ``C_{p,q} / (2p + q)``."""
    if order < 1:
        raise ValidationError("order must be at least 1")
    cs = [ZERO]
    for n in range(1, order + 1):
        cs.append(MuPolynomial({q: Fraction(c_pq(n - q, q), 2 * n - q) for q in range(n + 1)}))
    return GSeries(order, tuple(cs))


def free_energy_operator(F: GSeries) -> GSeries:
    """``(2 g d/dg - mu d/dmu) F``."""
    return F.g_d_g() * 2 - F.mu_d_mu()


# ---------------------------------------------------------------------------
# Long exact coefficient sequences at fixed mu
# ---------------------------------------------------------------------------


def _as_exact(mu):
    mu = Fraction(mu)
    return _norm(mu)


def _horner(coeffs_high_first, x):
    acc = 0
    for c in coeffs_high_first:
        acc = acc * x + c
    return _norm(acc) if isinstance(acc, Fraction) else acc


def alpha_values(n_max: int, mu) -> list:
    """Exact ``alpha_n(mu)`` for ``n = 0..n_max``.

    Walks ``C_{n-q,q}`` along ``q`` with its term ratio, so only small-integer
    multiplications and exact divisions touch the big numbers.
    """
    mu = _as_exact(mu)
    out = [1]
    for n in range(1, n_max + 1):
        c = comb(4 * n, n) // (3 * n + 1)
        cs = [c]
        for q in range(n):
            num = (n - q) * (3 * n - 2 * q + 1) * (3 * n - 2 * q)
            den = (4 * n - 2 * q) * (4 * n - 2 * q - 1) * (q + 1)
            c = c * num // den
            cs.append(c)
        out.append(_horner(reversed(cs), mu))
    return out


def h_values(n_max: int, mu) -> list:
    """Exact coefficients of the reduced next-to-leading series at fixed mu.

    Uses ``h_n = sum_k C(n,k) mu^(n-k) C(2n+2+2k, n)``, obtained by Lagrange
    inversion of ``G - 1 = g F(G - 1)``; :func:`gnlo_reduced_series` is the
    independent route it is tested against.
    """
    mu = _as_exact(mu)
    out = []
    for n in range(n_max + 1):
        b = comb(2 * n + 2, n)
        bs = [b]
        for k in range(n):
            m = 2 * n + 2 + 2 * k
            b = b * (n - k) * (m + 2) * (m + 1) // ((k + 1) * (m + 2 - n) * (m + 1 - n))
            bs.append(b)
        # sum_k bs[k] mu^(n-k): bs[0] carries the highest power
        out.append(_horner(bs, mu))
    return out


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------


def coefficient_rows(s: GSeries):
    for n, poly in enumerate(s.coeffs):
        for q, v in poly.items():
            v = Fraction(v)
            yield n, q, v.numerator, v.denominator


def write_coefficients_csv(s: GSeries, fh=None) -> str:
    buf = fh or io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "q", "numerator", "denominator"])
    for row in coefficient_rows(s):
        w.writerow(row)
    return buf.getvalue() if fh is None else ""
