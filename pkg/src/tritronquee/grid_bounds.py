"""Sup-norm and positivity bounds from endpoint values and L2 norms.

For f in C^1[c, d] and any x in [c, d],

    |f(x) - (f(c) + f(d))/2| <= (1/2) sqrt(d - c) ||f'||_{L2(c, d)}

(write f(x) - f(c) and f(d) - f(x) as integrals of f' and apply
Cauchy-Schwarz to both).  Splitting [a, b] into n equal pieces and taking
the worst piece gives a rigorous sup bound; the same inequality read from
below gives a positivity certificate.  Only exact evaluations are needed:
the function at rational nodes and the integral of (f')^2 on each piece.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from flint import arb

from .certificates import Certificate, CertificateFailed, Check
from .laurent import LaurentPoly
from .scalars import ball, lower, max_upper, nonneg_sqrt, radius, upper, working_precision, current_precision

MAX_GRID_BITS = 1024


class HandleDomainError(ValueError):
    """A grid handle was asked for a point outside its domain."""


class NonIntegrable(ValueError):
    """(g')^2 is not integrable on the requested interval."""


@dataclass
class GridFunction:
    """A C^1 function known through two exact handles.

    ``value(x)`` evaluates f at a rational x; ``deriv_l2_sq(c, d)`` returns
    the integral of (f')^2 over [c, d].  Either may return a Fraction or
    an Arb ball.
    """

    value: Callable
    deriv_l2_sq: Callable
    name: str = ""

    @classmethod
    def from_poly(cls, f: LaurentPoly, name: str = "", domain=None) -> "GridFunction":
        """Handles for a power-log polynomial; ``domain`` = (lo, hi) in x."""
        sq = f.derivative() ** 2
        anti = sq.antiderivative()
        singular = not f.is_laurent or any(p < 0 for p, _ in sq.terms)

        def _check(x):
            if singular and Fraction(x) <= f.center:
                raise HandleDomainError(f"{name or 'f'}: x = {x} is not right of the center {f.center}")
            if domain is not None and not (domain[0] <= Fraction(x) <= domain[1]):
                raise HandleDomainError(f"{name or 'f'}: x = {x} outside {domain}")

        def value(x):
            _check(x)
            return f.evaluate(x)

        def l2(c, d):
            _check(c)
            _check(d)
            return _diff(anti.evaluate(d), anti.evaluate(c))

        return cls(value, l2, name)


def _diff(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a - b
    return ball(a) - ball(b)


def l2_deriv_exact(g: LaurentPoly, a, b):
    """Integral of (g')^2 over [a, b] (Fraction when everything is rational)."""
    a, b = Fraction(a), Fraction(b)
    sq = g.derivative() ** 2
    if (not sq.is_laurent or any(p < 0 for p, _ in sq.terms)) and a <= g.center <= b:
        raise NonIntegrable(f"singular point {g.center} inside [{a}, {b}]")
    return sq.definite(a, b)


def grid(a, b, n: int) -> list:
    a, b = Fraction(a), Fraction(b)
    if not a < b or n < 1:
        raise ValueError("need a < b and n >= 1")
    h = (b - a) / n
    return [a + k * h for k in range(n + 1)]


def _pieces(f: GridFunction, a, b, n):
    """Per-piece (mean of endpoint values, half-width term) as balls."""
    nodes = grid(a, b, n)
    h = nodes[1] - nodes[0]
    vals = [ball(f.value(x)) for x in nodes]
    half_sqrt_h = ball(h).sqrt() / 2
    out = []
    for k in range(n):
        mean = (vals[k] + vals[k + 1]) / 2
        spread = half_sqrt_h * nonneg_sqrt(ball(f.deriv_l2_sq(nodes[k], nodes[k + 1])))
        out.append((mean, spread))
    return out


def _escalating(compute, rel=Fraction(1, 2**40)):
    """Run compute() at rising precision until its result is sharp enough."""
    bits = current_precision()
    while True:
        with working_precision(bits):
            res = compute()
        worst = max(res, key=lambda r: radius(r[0]) + radius(r[1]))
        scale = max(abs(upper(worst[0])), upper(worst[1]), Fraction(1, 10**60))
        if radius(worst[0]) + radius(worst[1]) <= rel * scale or bits >= MAX_GRID_BITS:
            return res
        bits *= 2


def interval_upper_bounds(f: GridFunction, a, b, n: int) -> list:
    """Upper bounds for |f| on each of the n pieces."""
    return [abs(m) + s for m, s in _escalating(lambda: _pieces(f, a, b, n))]


def sup_bound(f: GridFunction, a, b, n: int) -> arb:
    """Rigorous upper bound for max |f| on [a, b] from an n-piece grid."""
    return max_upper(interval_upper_bounds(f, a, b, n))


def interval_lower_bounds(f: GridFunction, a, b, n: int) -> list:
    return [m - s for m, s in _escalating(lambda: _pieces(f, a, b, n))]


def lower_bound_positive(f: GridFunction, a, b, n: int) -> Certificate:
    """Certify f > 0 on [a, b]; raises CertificateFailed naming the bad piece."""
    lows = interval_lower_bounds(f, a, b, n)
    checks = []
    for k, lo in enumerate(lows):
        c = Check(f"{f.name or 'f'}[{k}]", ">", 0, lo, f"lower bound on piece {k} of {n}")
        c.decide()
        checks.append(c)
        if not c.passed:
            cert = Certificate(f"positivity of {f.name or 'f'}", False, checks, {"n": n})
            raise CertificateFailed(f"{f.name or 'f'} not certified positive on piece {k}", cert, k)
    worst = min(lows, key=lower)
    return Certificate(f"positivity of {f.name or 'f'}", True, checks, {"n": n, "min_lower": worst})


def certify_positive(f: GridFunction, a, b, n: int, max_n: int = 4096) -> Certificate:
    """lower_bound_positive at n, doubling n on failure; records the n used."""
    first = n
    while True:
        try:
            cert = lower_bound_positive(f, a, b, n)
            cert.details.update(n_requested=first, n_used=n)
            return cert
        except CertificateFailed:
            if 2 * n > max_n:
                raise
            n *= 2


def sup_bound_within(f: GridFunction, a, b, n: int, target, max_n: int = 4096) -> tuple:
    """(bound, n_used): sup_bound at n, refined by doubling n until bound <= target.

    Returns the last bound if the cap is reached without meeting the target.
    """
    target = Fraction(target)
    bound = sup_bound(f, a, b, n)
    while upper(bound) > target and 2 * n <= max_n:
        n *= 2
        bound = sup_bound(f, a, b, n)
    return bound, n
