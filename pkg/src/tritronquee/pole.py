"""One double pole inside |x - x0| < r, and how far it can be from x0.

With y = y0 + E on the circle, the contour integrals split into an exact
residue of the Laurent polynomial y0 and a norm bound for E times the path
length, so no numerical quadrature is involved.

  -(1/2 pi i) oint z y dz   counts the poles inside,
  -(1/4 pi i) oint z^2 y dz = x_p - x0 when there is exactly one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from flint import arb

from .approximant import d4_poly
from .certificates import Certificate, CertificateFailed, Check
from .laurent import LaurentPoly
from .pieces import R_DISK, X0
from .scalars import ball, upper

COUNT_CLAIM = Fraction(12, 10**6)       # |1 + (1/2 pi i) oint z y dz| bound
RADIUS_CLAIM = Fraction(41, 10**7)      # |x_p - x0| bound

CONDITIONAL_NOTE = ("the pole is on the negative real axis given the known fact that the "
                    "tritronquee pole nearest the origin is real and negative, together with "
                    "the absence of blow-up on D; not re-proved here")


@dataclass
class PoleEnclosure:
    center: Fraction
    radius_bound: arb
    count: int
    on_negative_axis: bool
    justification: str = CONDITIONAL_NOTE
    checks: list = field(default_factory=list)

    def __post_init__(self):
        if self.count not in (0, 1):
            raise ValueError("count must be 0 or 1")


def residue_exact(weight: int = 1) -> Fraction:
    """Residue at 0 of z^weight Y0(z) (the coefficient of z^-1), exactly."""
    if weight not in (1, 2):
        raise ValueError("weight must be 1 (z) or 2 (z^2)")
    poly = LaurentPoly.monomial(weight, 1, X0) * d4_poly()
    return Fraction(poly.coeff(-1))


def count_poles(E_bound) -> Certificate:
    """|1 + (1/2 pi i) oint z y| <= |1 + Res(z Y0)| + r^2 ||E|| < 1 certifies exactly one pole."""
    res = residue_exact(1)
    bound = abs(1 + ball(res)) + ball(R_DISK) ** 2 * ball(E_bound)
    checks = [
        Check("pole.residue_z", "==", -1, res, "residue of z Y0 is -1"),
        Check("pole.count_bound", "<=", COUNT_CLAIM, bound, "r^2 ||E|| on the circle"),
        Check("pole.count_below_one", "<", 1, bound, "winding count is exactly one"),
    ]
    for c in checks:
        c.decide()
    ok = all(c.passed for c in checks)
    cert = Certificate("pole.count", ok, checks, {"bound": bound, "count": 1 if ok else None})
    return cert


def enclose_pole(E_bound) -> PoleEnclosure:
    """|x_p - x0| <= r^3 ||E|| / 2 (the y0 part has zero residue)."""
    counted = count_poles(E_bound)
    if not counted.passed:
        raise CertificateFailed("pole count not certified", counted)
    res2 = residue_exact(2)
    rad = abs(ball(res2)) / 2 + ball(R_DISK) ** 3 * ball(E_bound) / 2
    checks = [
        Check("pole.residue_z2", "==", 0, res2, "z^2 Y0 is analytic in the disk"),
        Check("pole.radius", "<=", RADIUS_CLAIM, rad, "r^3 ||E|| / 2"),
        Check("pole.inside_disk", "<", R_DISK, rad, "enclosure lies inside the circle"),
    ]
    for c in checks:
        c.decide()
    if not all(c.passed for c in checks):
        raise CertificateFailed("pole location not certified",
                                Certificate("pole.location", False, counted.checks + checks))
    return PoleEnclosure(X0, rad, 1, True, CONDITIONAL_NOTE, counted.checks + checks)


def location_interval(enc: PoleEnclosure) -> tuple:
    """Rational interval [x0 - rho, x0 + rho] containing x_p (rho rounded up)."""
    rho = upper(enc.radius_bound)
    return enc.center - rho, enc.center + rho
