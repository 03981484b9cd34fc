"""Exact rationals and rigorous ball arithmetic.

Rationals are plain `fractions.Fraction`.  Balls are Arb balls from
python-flint (`flint.arb` for real, `flint.acb` for complex); every
operation on them returns an enclosure of the exact result.  This module
adds the glue the rest of the package needs: conversions in both
directions, exact comparisons against rationals, a precision context and
the precision-escalation loop.
"""

from __future__ import annotations

import contextlib
from fractions import Fraction
from typing import Callable, Union

from flint import acb, arb, ctx, fmpq, fmpz

Ball = arb
ComplexBall = acb
Rational = Fraction
Number = Union[Fraction, int, arb]

DEFAULT_PRECISION = 128
MAX_PRECISION = 4096

# python-flint starts at 53 bits; everything here assumes at least the default.
if ctx.prec < DEFAULT_PRECISION:
    ctx.prec = DEFAULT_PRECISION


class PrecisionExhausted(ArithmeticError):
    """Raised when escalating precision cannot meet a radius target.

    The last (widest acceptable) enclosure is kept on ``last`` so callers
    can still report something.
    """

    def __init__(self, message: str, last=None, bits: int | None = None):
        super().__init__(message)
        self.last = last
        self.bits = bits


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PrecisionOverflow(ArithmeticError):
    """A ball became too wide (or non-finite) for the result to mean anything."""


@contextlib.contextmanager
def working_precision(bits: int):
    """Temporarily set the global Arb working precision (in bits)."""
    old = ctx.prec
    ctx.prec = int(bits)
    try:
        yield
    finally:
        ctx.prec = old


def current_precision() -> int:
    return ctx.prec


# -- rationals ---------------------------------------------------------------

def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"``, an integer or a decimal string exactly."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def to_fmpq(q: Fraction | int) -> fmpq:
    q = Fraction(q)
    return fmpq(q.numerator, q.denominator)


# -- conversions -------------------------------------------------------------

def ball(value, rad: Fraction | int | None = None) -> arb:
    """Ball enclosing ``value`` (Fraction, int, str "p/q" or arb).

    With ``rad`` given, the result additionally encloses every point within
    ``rad`` of ``value``.
    """
    if isinstance(value, arb):
        b = value
    elif isinstance(value, (Fraction, int)):
        q = Fraction(value)
        b = arb(fmpq(q.numerator, q.denominator))
    elif isinstance(value, str):
        return ball(parse_rational(value), rad)
    elif isinstance(value, float):
        b = arb(value)
    else:
        raise TypeError(f"cannot make a ball from {type(value).__name__}")
    if rad:
        b = b + arb(0, to_fmpq(rad))
    return b


def cball(re, im=0) -> acb:
    return acb(ball(re), ball(im))


def dyadic(x: arb) -> Fraction:
    """Exact value of an Arb midpoint or radius (both are dyadic)."""
    man, exp = x.man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


def _check_finite(b: arb):
    if not b.is_finite():
        raise PrecisionOverflow(f"non-finite ball {b}")


def midpoint(b) -> Fraction:
    if isinstance(b, Fraction):
        return b
    _check_finite(b)
    return dyadic(b.mid())


def radius(b) -> Fraction:
    """Radius of a real or complex ball; exact rationals have radius 0."""
    if isinstance(b, (Fraction, int)):
        return Fraction(0)
    if isinstance(b, acb):
        return max(radius(b.real), radius(b.imag))
    _check_finite(b)
    return dyadic(b.rad())


def upper(b) -> Fraction:
    """Exact rational upper bound of a ball (or the rational itself)."""
    if isinstance(b, (Fraction, int)):
        return Fraction(b)
    return midpoint(b) + radius(b)


def lower(b) -> Fraction:
    if isinstance(b, (Fraction, int)):
        return Fraction(b)
    return midpoint(b) - radius(b)


def abs_upper(b) -> Fraction:
    """Upper bound for |b| (real or complex)."""
    if isinstance(b, (Fraction, int)):
        return abs(Fraction(b))
    if isinstance(b, acb):
        return upper(abs(b))
    return max(abs(lower(b)), abs(upper(b)))


def contains(b, q: Fraction | int) -> bool:
    """Exact test ``q in b``."""
    q = Fraction(q)
    if isinstance(b, Fraction):
        return b == q
    return lower(b) <= q <= upper(b)


def hull(*balls) -> arb:
    out = ball(balls[0])
    for b in balls[1:]:
        out = out.union(ball(b))
    return out


def from_mid_rad(mid: Fraction, rad: Fraction) -> arb:
    """Ball containing [mid - rad, mid + rad] for exact rationals."""
    return ball(mid, rad if rad else None)


def nonneg_sqrt(b: arb) -> arb:
    """Square root of a quantity known to be >= 0 whose ball may dip below 0."""
    up = upper(b)
    if up < 0:
        raise DomainError(f"square root of negative ball {b}")
    if lower(b) < 0:
        s = upper(ball(up).sqrt())
        return from_mid_rad(s / 2, s / 2)
    return b.sqrt()


# -- elementary operations ---------------------------------------------------

def pow_rational_exp(x, p: Fraction | int) -> arb:
    """``x**p`` for a positive ball ``x`` and rational exponent ``p``.

    Integer exponents are computed by repeated multiplication (exact for
    exact rationals); other exponents require ``x > 0`` strictly.
    """
    p = Fraction(p)
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        if p.denominator == 1:
            if x == 0 and p < 0:
                raise DomainError("zero to a negative power")
            return ball(x ** p.numerator)
        if x <= 0:
            raise DomainError(f"non-positive base {x} with exponent {p}")
        x = ball(x)
    if p.denominator == 1:
        n = p.numerator
        if n < 0 and contains(x, 0):
            raise DomainError("ball containing zero to a negative power")
        return x ** n
    if lower(x) <= 0:
        raise DomainError(f"base ball {x} is not strictly positive")
    if p.denominator <= 64:
        return x.root(p.denominator) ** p.numerator
    return (ball(p) * x.log()).exp()


def exp_complex(z: acb) -> acb:
    """exp(z) with a guard against meaningless (overflowing) enclosures."""
    re = z.real
    if not re.is_finite() or not z.imag.is_finite():
        raise PrecisionOverflow(f"non-finite argument {z}")
    if upper(re) > 2**20:
        raise PrecisionOverflow("real part too large for exp")
    return z.exp()


def pi() -> arb:
    return arb.pi()


def sqrt6() -> arb:
    return arb(6).sqrt()


def max_upper(balls) -> arb:
    """The ball whose upper end is largest (a valid bound for the max)."""
    best = None
    best_up = None
    for b in balls:
        up = upper(b)
        if best is None or up > best_up:
            best, best_up = b, up
    return best


# -- precision escalation ----------------------------------------------------

def refine_to_radius(computation: Callable[[], object], target: Fraction | float,
                     max_bits: int = MAX_PRECISION, start_bits: int | None = None):
    """Re-run ``computation`` at doubling precision until its radius <= target.

    Exact (Fraction) results are returned immediately.  Raises
    PrecisionExhausted (carrying the last enclosure) once ``max_bits`` has
    been tried.
    """
    target = Fraction(target)
    bits = start_bits or max(ctx.prec, DEFAULT_PRECISION)
    last = None
    while bits <= max_bits:
        with working_precision(bits):
            try:
                result = computation()
            except PrecisionOverflow:
                result = None
        if isinstance(result, (Fraction, int)):
            return result
        if result is not None:
            last = result
            if _finite(result) and radius(result) <= target:
                return result
        bits *= 2
    raise PrecisionExhausted(
        f"radius target {float(target):.3g} not met at {max_bits} bits", last, max_bits)


def _finite(b) -> bool:
    if isinstance(b, acb):
        return b.real.is_finite() and b.imag.is_finite()
    return b.is_finite()


def decimal_parts(b: arb, digits: int = 20) -> tuple[str, str]:
    """Decimal strings for the midpoint and an upward-rounded radius."""
    _check_finite(b)
    mid = b.mid().str(digits, radius=False)
    return mid, round_up_decimal(dyadic(b.rad()))


def round_up_decimal(q: Fraction, digits: int = 3) -> str:
    """Scientific-notation string that is >= q, with ``digits`` digits."""
    q = Fraction(q)
    if q <= 0:
        return "0" if q == 0 else f"-{round_up_decimal(-q, digits)}"
    e = len(str(q.numerator)) - len(str(q.denominator))
    if Fraction(10) ** e > q:
        e -= 1
    shift = e - (digits - 1)
    scaled = q / Fraction(10) ** shift
    m = -(-scaled.numerator // scaled.denominator)
    if m >= 10 ** digits:
        m = -(-m // 10)
        shift += 1
    return f"{m}e{shift}"


__all__ = [
    "Ball", "ComplexBall", "Rational", "DEFAULT_PRECISION", "MAX_PRECISION",
    "PrecisionExhausted", "DomainError", "PrecisionOverflow", "working_precision",
    "parse_rational", "format_rational", "ball", "cball", "midpoint", "radius",
    "upper", "lower", "abs_upper", "contains", "hull", "from_mid_rad",
    "pow_rational_exp", "exp_complex", "refine_to_radius", "dyadic", "fmpz",
]
