"""The piecewise approximant y0 on D = D1 u D2 u D3 u D4.

  D1 = [L, oo)            four asymptotic terms plus w0
  D2 = [L0, L)            -(x - x0)^-2 + P_u(tau(x))
  D3 = [x0 + r, L0)       same formula as D2
  D4 = circle |x - x0| = r (without x0 + r)   -z^-2 + z^2 P(z), z = x - x0

On D2/D3/D4 the approximant is an exact Laurent polynomial, so its residual
R = y0'' + 6 y0^2 - x is an exact Laurent polynomial too.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from flint import acb, arb

from . import pieces
from .certificates import AlgebraMismatch, Certificate, Check
from .laurent import LaurentPoly
from .pieces import L, L0, R_DISK, X0, X_LEFT
from .scalars import ball, pow_rational_exp, sqrt6

F = Fraction
DOMAINS = ("D1", "D2", "D3", "D4")


class OutsideDomain(ValueError):
    """The requested point is not in D."""


@dataclass(frozen=True)
class DomainPoint:
    """A point of D.  For D4, ``coordinate`` is nu/pi with z = r exp(i nu)."""

    domain_id: str
    coordinate: Fraction

    def __post_init__(self):
        x = Fraction(self.coordinate)
        object.__setattr__(self, "coordinate", x)
        d = self.domain_id
        ok = {
            "D1": lambda: x >= L,
            "D2": lambda: L0 <= x < L,
            "D3": lambda: X_LEFT <= x < L0,
            "D4": lambda: 0 < x <= 2,
        }.get(d)
        if ok is None:
            raise OutsideDomain(f"unknown domain {d!r}")
        if not ok():
            raise OutsideDomain(f"{x} is not a valid coordinate for {d}")

    @classmethod
    def real(cls, x) -> "DomainPoint":
        """The real point x, placed in whichever of D1-D3 contains it."""
        x = Fraction(x)
        if x >= L:
            return cls("D1", x)
        if x >= L0:
            return cls("D2", x)
        if x >= X_LEFT:
            return cls("D3", x)
        raise OutsideDomain(f"x = {x} is left of x0 + r and not on the circle")

    @classmethod
    def circle(cls, nu_over_pi) -> "DomainPoint":
        return cls("D4", Fraction(nu_over_pi))

    def zeta(self) -> acb:
        """z = x - x0 (complex ball; exact rational on the real pieces)."""
        if self.domain_id == "D4":
            return ball(R_DISK) * acb(ball(self.coordinate)).exp_pi_i()
        return acb(ball(self.coordinate - X0))


# -- the real-axis asymptotic piece -----------------------------------------

D1_C1 = F(1, 8)        # x^(-5/2) / (8 sqrt 6)
D1_C2 = F(49, 768)     # - 49/768 x^(-5)
D1_C3 = F(1225, 1536)  # + 1225/(1536 sqrt 6) x^(-15/2)


def d1_bracket(x, w0=None, w0p=None) -> tuple:
    """(S, S') with y0 = sqrt(x/6) S on D1."""
    xb = ball(x)
    s6 = sqrt6()
    if w0 is None:
        from .d1 import w0_eval
        w0, w0p = w0_eval(x)
    u = pow_rational_exp(xb, F(-5, 2))
    c1, c2, c3 = ball(D1_C1) / s6, ball(D1_C2), ball(D1_C3) / s6
    S = 1 + c1 * u - c2 * u * u + c3 * u * u * u + w0
    Sp = (-ball(F(5, 2)) * c1 * u + 5 * c2 * u * u - ball(F(15, 2)) * c3 * u ** 3) / xb + w0p
    return S, Sp


def y0_d1(x, order: int = 0) -> arb:
    if order not in (0, 1):
        raise ValueError("only y0 and y0' are available on D1")
    xb = ball(x)
    S, Sp = d1_bracket(x)
    root = (xb / 6).sqrt()
    if order == 0:
        return root * S
    return S / (2 * (6 * xb).sqrt()) + root * Sp


# -- Laurent pieces ------------------------------------------------------------

@lru_cache(maxsize=None)
def d23_poly() -> LaurentPoly:
    return pieces.d23_laurent()


@lru_cache(maxsize=None)
def d4_poly() -> LaurentPoly:
    return pieces.d4_laurent()


class PiecewiseApproximant:
    """y0 with its three formulas; evaluation dispatches on the domain."""

    def __init__(self):
        self.d23 = d23_poly()
        self.d4 = d4_poly()

    def __call__(self, p: DomainPoint, order: int = 0):
        return self.eval(p, order)

    def eval(self, p: DomainPoint, order: int = 0):
        if order not in (0, 1, 2):
            raise ValueError("order must be 0, 1 or 2")
        if p.domain_id == "D1":
            return y0_d1(p.coordinate, order)
        if p.domain_id in ("D2", "D3"):
            return ball(self.d23.derivative(order).evaluate(p.coordinate))
        return self.d4.derivative(order).eval_shifted(p.zeta())

    def exact(self, x, order: int = 0) -> Fraction:
        """Exact rational value of the D2/D3 formula at rational x."""
        return self.d23.derivative(order).evaluate(Fraction(x))


_Y0 = None


def approximant() -> PiecewiseApproximant:
    global _Y0
    if _Y0 is None:
        _Y0 = PiecewiseApproximant()
    return _Y0


def y0_eval(p: DomainPoint, order: int = 0):
    """Enclosure of y0^(order) at p (complex ball on the circle)."""
    return approximant().eval(p, order)


def y0_tau_route(x, order: int = 0) -> arb:
    """Second route on D2/D3: Horner in tau, chain rule d/dx = (1/half) d/dtau."""
    coeffs = pieces.PU_COEFFS
    for _ in range(order):
        coeffs = pieces.poly_derivative(coeffs)
    t = ball(pieces.tau(x))
    val = pieces.poly_eval([ball(c) for c in coeffs], t) / ball(pieces.TAU_HALF) ** order
    z = ball(Fraction(x) - X0)
    pole = -1 / z ** 2 if order == 0 else (2 / z ** 3 if order == 1 else -6 / z ** 4)
    return val + pole


# -- residuals -------------------------------------------------------------------

def _x_poly(center) -> LaurentPoly:
    """x itself as a polynomial in z = x - center."""
    return LaurentPoly({0: Fraction(center), 1: 1}, center)


def residual_of(y: LaurentPoly) -> LaurentPoly:
    """y'' + 6 y^2 - x, exactly."""
    return y.derivative(2) + 6 * y * y - _x_poly(y.center)


@lru_cache(maxsize=None)
def residual(domain_id: str) -> LaurentPoly:
    """Exact residual of y0 on D2/D3 or on D4, in z = x - x0.

    Raises AlgebraMismatch if the cancellations that must occur (the z^-4
    and z^-3 terms on the real pieces, everything below z^18 on the circle)
    do not.
    """
    if domain_id in ("D2", "D3"):
        R = residual_of(d23_poly())
        if R.coeff(-4) or R.coeff(-3) or R.has_log or not R.is_laurent:
            raise AlgebraMismatch("pole terms of the residual do not cancel on D2/D3")
        return R
    if domain_id == "D4":
        R = residual_of(d4_poly())
        low = [p for p, _ in R.terms if p < 18]
        if low:
            raise AlgebraMismatch(f"residual on the circle has terms of degree {sorted(low)}")
        return R
    raise ValueError(f"no residual on {domain_id!r}")


def residual_certificate(domain_id: str) -> Certificate:
    R = residual(domain_id)
    exps = R.exponents()
    checks = []
    if domain_id in ("D2", "D3"):
        checks.append(Check("no_z^-4_term", "==", 0, R.coeff(-4), "z^-4 terms cancel"))
        checks.append(Check("no_z^-3_term", "==", 0, R.coeff(-3), "z^-3 terms cancel"))
        checks.append(Check("log_free", "==", True, R.is_laurent, "integer powers only"))
    else:
        checks.append(Check("lowest_degree", ">=", 18, min(exps), "all powers below 18 cancel"))
        checks.append(Check("highest_degree", "<=", 38, max(exps), "highest power 38"))
    for c in checks:
        c.decide()
    return Certificate(f"{domain_id}.residual", all(c.passed for c in checks), checks,
                       {"min_exponent": min(exps), "max_exponent": max(exps)})


def residual_d4_bound() -> Fraction:
    """sum_j |R_j| r^j, an exact rational bound for |R| on |z| = r."""
    return residual("D4").abs_coefficient_sum(R_DISK)


# -- the antiderivative of -R on D2 ------------------------------------------------

@lru_cache(maxsize=None)
def calR_parts() -> tuple:
    """(poly, log_coeff): -int R = poly(z) + log_coeff * log z, up to a constant."""
    anti = -residual("D2").antiderivative()
    log_coeff = anti.coeff(0, 1)
    poly = LaurentPoly({k: c for k, c in anti.terms.items() if k[1] == 0}, X0)
    if not poly.is_laurent:
        raise AlgebraMismatch("unexpected non-integer powers in the antiderivative")
    return poly, log_coeff


def calR(x) -> arb:
    """int_L^x (-R(t)) dt, computed as an exact rational plus c log(z/z_L)."""
    poly, c = calR_parts()
    x = Fraction(x)
    if x == L:
        return ball(0)
    rational = poly.evaluate(x) - poly.evaluate(L)
    if not c:
        return ball(rational)
    return ball(rational) + ball(c) * (ball(x - X0) / ball(L - X0)).log()


def calR_poly() -> LaurentPoly:
    """calR as a power-log polynomial (the constant carries log z_L as a ball)."""
    poly, c = calR_parts()
    zL = L - X0
    const = -(poly.evaluate(L)) if not c else -ball(poly.evaluate(L)) - ball(c) * ball(zL).log()
    return poly + LaurentPoly({(0, 1): c}, X0) + const


# -- jumps of y0 ---------------------------------------------------------------------

def boundary_mismatch(point: str = "L") -> tuple:
    """(y0(x+) - y0(x-), y0'(x+) - y0'(x-)) at x = L or x = x0 + r.

    At L the right side is the asymptotic formula; at x0 + r the right side
    is the real-axis formula and the left side the circle formula at z = r.
    The jump at L0 is identically zero (one formula on both sides).
    """
    if point == "L":
        right = (y0_d1(L, 0), y0_d1(L, 1))
        poly = d23_poly()
        left = (poly.evaluate(L), poly.derivative().evaluate(L))
        return tuple(r - ball(l) for r, l in zip(right, left))
    if point in ("x0+r", "X_LEFT"):
        a, b = d23_poly(), d4_poly()
        r = R_DISK
        d0 = a.eval_shifted(r) - b.eval_shifted(r)
        d1 = a.derivative().eval_shifted(r) - b.derivative().eval_shifted(r)
        return ball(d0), ball(d1)
    if point == "L0":
        return ball(0), ball(0)
    raise ValueError(f"unknown junction {point!r}")


def boundary_mismatch_exact(point: str = "x0+r") -> tuple:
    """Exact rational jumps at x0 + r (both formulas are rational there)."""
    if point != "x0+r":
        raise ValueError("only the junction x0 + r is exact")
    a, b = d23_poly(), d4_poly()
    r = R_DISK
    return (a.eval_shifted(r) - b.eval_shifted(r),
            a.derivative().eval_shifted(r) - b.derivative().eval_shifted(r))
