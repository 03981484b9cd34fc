"""Result records shared by the certificate modules.

A `Check` compares one computed enclosure against a stated constant with
an exact rational comparison; nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from flint import acb, arb

from .scalars import abs_upper, lower, radius, upper

PASS = "pass"
FAIL = "fail"
UNVERIFIED = "unverified-dependency"
PENDING = "pending"

RELATIONS = ("<=", "<", ">", ">=", "==", "abs<=", "quoted", "within")


class CertificateFailed(Exception):
    """A certificate could not be established.

    ``index`` identifies the failing piece (e.g. a grid subinterval) when
    that makes sense.
    """

    def __init__(self, message: str, certificate=None, index: int | None = None):
        super().__init__(message)
        self.certificate = certificate
        self.index = index


class AlgebraMismatch(ArithmeticError):
    """An exact cancellation that must happen did not."""


@dataclass
class Check:
    """``computed <relation> claimed``, decided exactly.

    Relations: "<=", "<", ">", ">=" and "==" compare the whole enclosure;
    "abs<=" bounds |computed|; "quoted" asks that the hull of the enclosure
    and a quoted decimal ``claimed = (value, tol)`` have radius <= tol;
    "within" asks ``claimed[0] <= computed <= claimed[1]``.
    """

    name: str
    relation: str
    claimed: object
    computed: object = None
    description: str = ""
    status: str = PENDING
    note: str = ""

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")

    def decide(self) -> str:
        c = self.computed
        if c is None:
            self.status = FAIL
            return self.status
        try:
            ok = self._holds(c)
        except (ValueError, ArithmeticError) as exc:
            self.note = self.note or f"undecidable: {exc}"
            ok = False
        self.status = PASS if ok else FAIL
        return self.status

    def _holds(self, c) -> bool:
        rel, q = self.relation, self.claimed
        if isinstance(c, bool):
            return c == bool(q) if rel == "==" else False
        if rel == "<=":
            return upper(c) <= Fraction(q)
        if rel == "<":
            return upper(c) < Fraction(q)
        if rel == ">":
            return lower(c) > Fraction(q)
        if rel == ">=":
            return lower(c) >= Fraction(q)
        if rel == "==":
            if isinstance(c, (arb, acb)):
                return radius(c) == 0 and lower(c) == Fraction(q)
            return c == q
        if rel == "abs<=":
            return abs_upper(c) <= Fraction(q)
        if rel == "quoted":
            value, tol = (Fraction(v) for v in q)
            lo, hi = min(lower(c), value), max(upper(c), value)
            return (hi - lo) / 2 <= tol
        if rel == "within":
            lo, hi = (Fraction(v) for v in q)
            return lo <= lower(c) and upper(c) <= hi
        raise ValueError(rel)

    @property
    def margin(self):
        """claimed - upper(computed) for upper-bound relations (else None)."""
        if self.computed is None or isinstance(self.computed, bool):
            return None
        try:
            if self.relation in ("<=", "<"):
                return Fraction(self.claimed) - upper(self.computed)
            if self.relation in (">", ">="):
                return lower(self.computed) - Fraction(self.claimed)
            if self.relation == "abs<=":
                return Fraction(self.claimed) - abs_upper(self.computed)
        except (ValueError, ArithmeticError):
            return None
        return None

    @property
    def relative_margin(self):
        m = self.margin
        if m is None or self.relation not in ("<=", "<", "abs<="):
            return None
        q = Fraction(self.claimed)
        return m / q if q else None

    @property
    def passed(self) -> bool:
        return self.status == PASS


@dataclass
class Certificate:
    """Outcome of one certification step."""

    name: str
    passed: bool
    checks: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def require(self):
        if not self.passed:
            bad = [c.name for c in self.checks if c.status != PASS]
            raise CertificateFailed(f"{self.name} failed: {', '.join(bad) or 'see details'}", self)
        return self


@dataclass
class ContractionCertificate:
    """A fixed-point argument on one domain.

    ``ball_map`` is the bound for ||N[E] - E0|| on the ball of radius
    ``delta``; ``factor`` is the Lipschitz constant of N on that ball.
    """

    domain: str
    delta: Fraction
    ball_map: object
    factor: object
    e_bound: object = None
    ep_bound: object = None
    checks: list = field(default_factory=list)

    @property
    def maps_into_ball(self) -> bool:
        return upper(self.ball_map) <= self.delta

    @property
    def contracts(self) -> bool:
        return upper(self.factor) < 1
