"""Exact power-log polynomials in a shifted variable.

A `LaurentPoly` is a finite sum of terms ``c * z**p * log(z)**m`` where
``z = x - center``, ``p`` is a rational exponent and ``m >= 0``.  Plain
Laurent polynomials (integer ``p``, no logarithms, rational ``c``) are the
common case; fractional powers and logarithms appear as soon as one
integrates ``z**-1`` or multiplies by a weight like ``z**(16/5)``.

The class is closed under +, *, d/dz and antiderivatives, and every one of
those is exact when the coefficients are Fractions.  Coefficients may also
be Arb balls (for irrational constants such as ``log(z1)``); such terms are
carried along with ball arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

from flint import acb, arb

from .scalars import ball, pow_rational_exp

Key = tuple  # (exponent: Fraction, log_power: int)


def _norm_key(key) -> Key:
    if isinstance(key, tuple):
        p, m = key
        return Fraction(p), int(m)
    return Fraction(key), 0


def _is_zero(c) -> bool:
    if isinstance(c, (arb, acb)):
        return c == 0
    return c == 0


def _mul(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return _as_ball(a) * _as_ball(b)


def _add(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return _as_ball(a) + _as_ball(b)


def _as_ball(c):
    return c if isinstance(c, (arb, acb)) else ball(c)


def _coerce(c):
    if isinstance(c, int):
        return Fraction(c)
    return c


class LaurentPoly:
    """Finite sum of ``c * z**p * log(z)**m`` with ``z = x - center``."""

    __slots__ = ("terms", "center")

    def __init__(self, terms: Mapping | None = None, center=0):
        self.center = Fraction(center)
        clean: dict = {}
        for key, c in (terms or {}).items():
            key = _norm_key(key)
            c = _coerce(c)
            clean[key] = _add(clean[key], c) if key in clean else c
        self.terms = {k: v for k, v in clean.items() if not _is_zero(v)}

    # -- constructors ----------------------------------------------------

    @classmethod
    def monomial(cls, p, coeff=1, center=0, log_power: int = 0) -> "LaurentPoly":
        return cls({(Fraction(p), log_power): coeff}, center)

    @classmethod
    def constant(cls, c, center=0) -> "LaurentPoly":
        return cls({(Fraction(0), 0): c}, center)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable, start: int = 0, center=0) -> "LaurentPoly":
        """``sum_k coeffs[k] * z**(start + k)``."""
        return cls({start + k: c for k, c in enumerate(coeffs)}, center)

    # -- inspection ------------------------------------------------------

    def coeff(self, p, log_power: int = 0):
        return self.terms.get((Fraction(p), log_power), Fraction(0))

    @property
    def is_laurent(self) -> bool:
        """Integer exponents only and no logarithms."""
        return all(p.denominator == 1 and m == 0 for p, m in self.terms)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.terms.values())

    @property
    def has_log(self) -> bool:
        return any(m for _, m in self.terms)

    def exponents(self, log_power: int | None = None) -> list:
        return sorted({p for p, m in self.terms if log_power is None or m == log_power})

    def min_exponent(self):
        return min(p for p, _ in self.terms) if self.terms else None

    def max_exponent(self):
        return max(p for p, _ in self.terms) if self.terms else None

    def coefficients(self, lo: int, hi: int) -> list:
        """Coefficients of z**lo .. z**hi (no log terms)."""
        return [self.coeff(k) for k in range(lo, hi + 1)]

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.center == other.center and self.terms == other.terms
        return NotImplemented

    def __repr__(self):
        parts = []
        for (p, m), c in sorted(self.terms.items()):
            mono = f"z^{p}" + (f"*log(z)^{m}" if m else "")
            parts.append(f"({c})*{mono}")
        return f"LaurentPoly[{self.center}](" + " + ".join(parts) + ")"

    # -- arithmetic ------------------------------------------------------

    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.center != self.center:
                raise ValueError("LaurentPoly centers differ")
            return other
        if isinstance(other, (int, Fraction, arb)):
            return LaurentPoly.constant(other, self.center)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = _add(terms[k], c) if k in terms else c
        return LaurentPoly(terms, self.center)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.terms.items()}, self.center)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, arb)):
            other = _coerce(other)
            return LaurentPoly({k: _mul(c, other) for k, c in self.terms.items()}, self.center)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        terms: dict = {}
        for (p1, m1), c1 in self.terms.items():
            for (p2, m2), c2 in other.terms.items():
                k = (p1 + p2, m1 + m2)
                c = _mul(c1, c2)
                terms[k] = _add(terms[k], c) if k in terms else c
        return LaurentPoly(terms, self.center)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out = LaurentPoly.constant(1, self.center)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def shift(self, k) -> "LaurentPoly":
        """Multiply by z**k."""
        k = Fraction(k)
        return LaurentPoly({(p + k, m): c for (p, m), c in self.terms.items()}, self.center)

    def truncate(self, below=None, above=None) -> "LaurentPoly":
        """Keep terms with below <= exponent <= above."""
        keep = {}
        for (p, m), c in self.terms.items():
            if below is not None and p < below:
                continue
            if above is not None and p > above:
                continue
            keep[(p, m)] = c
        return LaurentPoly(keep, self.center)

    # -- calculus --------------------------------------------------------

    def derivative(self, times: int = 1) -> "LaurentPoly":
        out = self
        for _ in range(times):
            terms: dict = {}
            for (p, m), c in out.terms.items():
                if p != 0:
                    k = (p - 1, m)
                    v = _mul(c, p)
                    terms[k] = _add(terms[k], v) if k in terms else v
                if m:
                    k = (p - 1, m - 1)
                    v = _mul(c, Fraction(m))
                    terms[k] = _add(terms[k], v) if k in terms else v
            out = LaurentPoly(terms, out.center)
        return out

    def antiderivative(self) -> "LaurentPoly":
        """Exact antiderivative (no constant); z**-1 terms produce logarithms."""
        terms: dict = {}
        for (p, m), c in self.terms.items():
            for k, v in _integrate_monomial(p, m).items():
                v = _mul(c, v)
                terms[k] = _add(terms[k], v) if k in terms else v
        return LaurentPoly(terms, self.center)

    def log_coefficient(self):
        """Coefficient of z**-1 (its antiderivative is a logarithm)."""
        return self.coeff(-1)

    # -- evaluation ------------------------------------------------------

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x, exact_ok: bool = True):
        """Value at the absolute coordinate ``x`` (Fraction, arb or acb)."""
        if isinstance(x, acb):
            return self.eval_shifted(x - _as_ball(self.center))
        if isinstance(x, arb):
            return self.eval_shifted(x - ball(self.center))
        return self.eval_shifted(Fraction(x) - self.center, exact_ok)

    def eval_shifted(self, z, exact_ok: bool = True):
        """Value at ``z = x - center``.

        For a rational ``z`` the integer-power part of each (fractional
        exponent class, log power) group is summed exactly before a single
        ball multiplication, so cancellation among large terms costs nothing.
        """
        if isinstance(z, acb):
            return self._eval_complex(z)
        if isinstance(z, arb):
            return self._eval_ball(z)
        z = Fraction(z)
        groups: dict = {}
        inexact = arb(0)
        for (p, m), c in self.terms.items():
            ip = math.floor(p)
            frac = p - ip
            if isinstance(c, Fraction):
                groups[(frac, m)] = groups.get((frac, m), Fraction(0)) + c * z ** ip
            else:
                inexact += _mul(c, z ** ip) * _frac_log(z, frac, m)
        exact_part = groups.pop((Fraction(0), 0), Fraction(0))
        if not groups and inexact == 0:
            return exact_part if exact_ok else ball(exact_part)
        total = ball(exact_part) + inexact
        for (frac, m), s in groups.items():
            if s:
                total += ball(s) * _frac_log(z, frac, m)
        return total

    def _eval_ball(self, z: arb):
        total = arb(0)
        logz = None
        for (p, m), c in self.terms.items():
            term = _as_ball(c) * pow_rational_exp(z, p)
            if m:
                if logz is None:
                    logz = z.log()
                term *= logz ** m
            total += term
        return total

    def _eval_complex(self, z: acb):
        if not self.is_laurent:
            raise ValueError("complex evaluation needs integer exponents and no logs")
        total = acb(0)
        for (p, _), c in self.terms.items():
            total += acb(_as_ball(c)) * z ** int(p)
        return total

    def definite(self, a, b):
        """Integral of self over z-range given in absolute coordinates a..b."""
        F = self.antiderivative()
        return _sub(F.evaluate(b), F.evaluate(a))

    def abs_coefficient_sum(self, z) -> Fraction:
        """sum |c| |z|**p for an exact Laurent polynomial (a sup bound on |z| = z)."""
        if not (self.is_laurent and self.is_exact):
            raise ValueError("needs exact integer-exponent coefficients")
        z = abs(Fraction(z))
        return sum(abs(c) * z ** int(p) for (p, _), c in self.terms.items())


def _sub(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a - b
    return _as_ball(a) - _as_ball(b)


def _frac_log(z: Fraction, frac: Fraction, m: int) -> arb:
    zb = ball(z)
    out = pow_rational_exp(zb, frac) if frac else arb(1)
    if m:
        out = out * zb.log() ** m
    return out


def _integrate_monomial(p: Fraction, m: int) -> dict:
    """Antiderivative of z**p log(z)**m as {(exponent, log power): coeff}."""
    if p == -1:
        return {(Fraction(0), m + 1): Fraction(1, m + 1)}
    # I(p, m) = z^(p+1) log^m / (p+1) - m/(p+1) I(p, m-1)
    out: dict = {}
    factor = Fraction(1)
    q = p + 1
    for j in range(m, -1, -1):
        out[(q, j)] = factor / q
        factor = -factor * j / q
    return out


def monomial_family(center) -> "LaurentPoly":
    """The variable ``z`` itself, handy for building expressions."""
    return LaurentPoly.monomial(1, 1, center)
