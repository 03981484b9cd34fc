"""Constants, coefficient tables and recurrences.

Everything here is exact: rationals in, rationals out.  The polynomial
P_u (in the rescaled variable tau) and the cubic P_a ship as a JSON fixture
of numerator/denominator pairs; the local pole-series coefficients and the
D4 Green's-function coefficients come from their recurrences.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .laurent import LaurentPoly

F = Fraction

TABLES_RESOURCE = "tables.json"


def _load_fixture(path: str | Path | None = None) -> dict:
    if path is None:
        text = resources.files(__package__).joinpath("data", TABLES_RESOURCE).read_text()
    else:
        text = Path(path).read_text()
    return json.loads(text)


def _pairs(rows) -> tuple:
    out = []
    for num, den in rows:
        if not isinstance(num, int) or not isinstance(den, int) or den <= 0:
            raise ValueError(f"bad rational entry {num!r}/{den!r}")
        out.append(Fraction(num, den))
    return tuple(out)


_FIXTURE = _load_fixture()

R_DISK: Fraction = Fraction(*_FIXTURE["constants"]["r"])          # radius of the circle around x0
X0: Fraction = Fraction(*_FIXTURE["constants"]["x0"])             # approximate pole location
L: Fraction = Fraction(*_FIXTURE["constants"]["L"])               # start of the asymptotic region
L0: Fraction = Fraction(*_FIXTURE["constants"]["L0"])             # junction between the two real segments
A2: Fraction = Fraction(*_FIXTURE["constants"]["a2"])             # free coefficient of the local series
PU_COEFFS: tuple = _pairs(_FIXTURE["P_u"])
PA_COEFFS: tuple = _pairs(_FIXTURE["P_a"])

X_LEFT = X0 + R_DISK            # left end of the real segment, tau = -1
GAMMA = Fraction(16, 5)         # weight exponent on the segment [x0 + r, L0)
GAMMA0 = Fraction(-16, 100)     # split point for the energy bounds on [L0, L)
P_DEGREE = 17                   # truncation of the local series used on the circle
C_A = Fraction(21, 100)         # |A_n| <= C_A (3/4)^n
C_B = Fraction(85, 100)         # |B_n| <= C_B (3/4)^n
AB_RATIO = Fraction(3, 4)
AB_CHECKED = 22                 # indices checked explicitly before induction takes over


def tables_digest() -> str:
    """SHA-256 of the canonical coefficient fixture (for pinning)."""
    canon = json.dumps({k: _FIXTURE[k] for k in ("constants", "P_u", "P_a")},
                       sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


# -- the affine map ----------------------------------------------------------

TAU_MID = (L + X_LEFT) / 2
TAU_HALF = (L - X_LEFT) / 2


def tau(x) -> Fraction:
    """Map [x0 + r, L] affinely onto [-1, 1]."""
    return (Fraction(x) - TAU_MID) / TAU_HALF


def tau_inverse(t) -> Fraction:
    return TAU_MID + TAU_HALF * Fraction(t)


def poly_eval(coeffs, t):
    """Horner evaluation; exact for Fraction input, ball for ball input."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def poly_derivative(coeffs) -> tuple:
    return tuple(k * c for k, c in enumerate(coeffs))[1:]


def pu(t):
    return poly_eval(PU_COEFFS, t)


def pa(t):
    return poly_eval(PA_COEFFS, t)


def tau_poly_to_laurent(coeffs, center=X0) -> LaurentPoly:
    """Rewrite sum c_k tau**k as a polynomial in z = x - center, exactly.

    tau = (z + center - TAU_MID) / TAU_HALF = alpha z + beta.
    """
    alpha = 1 / TAU_HALF
    beta = (Fraction(center) - TAU_MID) / TAU_HALF
    lin = LaurentPoly({1: alpha, 0: beta}, center)
    acc = LaurentPoly({}, center)
    for c in reversed(coeffs):
        acc = acc * lin + c
    return acc


@lru_cache(maxsize=None)
def pu_in_zeta() -> LaurentPoly:
    """P_u(tau(x)) as an exact polynomial in zeta = x - x0."""
    return tau_poly_to_laurent(PU_COEFFS, X0)


# -- local series ------------------------------------------------------------

@dataclass(frozen=True)
class SeriesCoeffs:
    """Coefficients of one of the series: kind in {hat_a, a, A, B}."""

    kind: str
    values: tuple
    truncation: int
    params: tuple = ()

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def verify(self) -> bool:
        """Re-check every value against its defining recurrence."""
        v = self.values
        if self.kind in ("hat_a", "a"):
            xp, a2 = self.params
            if v[:4] != (-xp / 10, F(-1, 6), a2, F(0)):
                return False
            return all(v[n] == _hat_a_step(v, n) for n in range(4, len(v)))
        a = self.params[0]
        head = {"A": (1, 0, 0, 0), "B": (1, 0, 0, 0)}[self.kind]
        if v[:4] != tuple(F(h) for h in head):
            return False
        for n in range(4, len(v)):
            if self.kind == "B" and n == 7:
                if v[7] != 0:
                    return False
                continue
            if v[n] != _ab_step(self.kind, a, v, n):
                return False
        return True


def _hat_a_step(v, n):
    s = sum(v[k] * v[n - 4 - k] for k in range(n - 3))
    return F(-6, (n + 5) * (n - 2)) * s


def hat_a_recurrence(xp, a2, n_max: int, kind: str = "hat_a") -> SeriesCoeffs:
    """Coefficients of y = -z**-2 + z**2 sum_n c_n z**n about a pole at xp.

    c_0 = -xp/10, c_1 = -1/6, c_2 = a2 (free), c_3 = 0 and
    c_n = -6/((n+5)(n-2)) sum_{k=0}^{n-4} c_k c_{n-4-k} for n >= 4.
    """
    if n_max < 3:
        raise ValueError("n_max must be at least 3")
    xp, a2 = Fraction(xp), Fraction(a2)
    v = [-xp / 10, F(-1, 6), a2, F(0)]
    for n in range(4, n_max + 1):
        v.append(_hat_a_step(v, n))
    return SeriesCoeffs(kind, tuple(v[: n_max + 1]), n_max, (xp, a2))


@lru_cache(maxsize=None)
def p_coefficients() -> SeriesCoeffs:
    """The a_n (n <= 17) of the polynomial P used on the circle."""
    return hat_a_recurrence(X0, A2, P_DEGREE, kind="a")


def _ab_step(kind, a, v, n):
    top = min(n - 4, len(a) - 1)
    s = sum(a[k] * v[n - 4 - k] for k in range(top + 1))
    den = n * (n + 7) if kind == "A" else n * (n - 7)
    return F(-12, den) * s


def ab_recurrences(a: SeriesCoeffs | None = None, n_max: int = 200) -> tuple:
    """Coefficients A_n, B_n of the two series solutions of G'' + 12 Y0 G = 0.

    G1 = sum A_n z**(n+4) and G2 = sum B_n z**(n-3).  The a-sum stops at
    index 17 (P is a polynomial).  B_7 is set to 0; the recurrence there is
    0 * B_7 = (its right side), which vanishes because a_3 = 0.
    """
    if a is None:
        a = p_coefficients()
    if n_max < AB_CHECKED:
        raise ValueError(f"n_max must be at least {AB_CHECKED}")
    av = a.values
    A = [F(1), F(0), F(0), F(0)]
    B = [F(1), F(0), F(0), F(0)]
    for n in range(4, n_max + 1):
        A.append(_ab_step("A", av, A, n))
        if n == 7:
            rhs = sum(av[k] * B[3 - k] for k in range(min(3, len(av) - 1) + 1))
            if rhs != 0:
                raise ArithmeticError("resonance at n = 7 is not consistent")
            B.append(F(0))
        else:
            B.append(_ab_step("B", av, B, n))
    return (SeriesCoeffs("A", tuple(A), n_max, (av,)),
            SeriesCoeffs("B", tuple(B), n_max, (av,)))


@lru_cache(maxsize=None)
def ab_default(n_max: int = 200) -> tuple:
    return ab_recurrences(p_coefficients(), n_max)


def d4_laurent() -> LaurentPoly:
    """-z**-2 + z**2 P(z), the approximant on the circle, in z = x - x0."""
    a = p_coefficients()
    return LaurentPoly({-2: F(-1), **{k + 2: c for k, c in enumerate(a.values)}}, X0)


def d23_laurent() -> LaurentPoly:
    """-z**-2 + P_u(tau), the approximant on the real segments, in z = x - x0."""
    return pu_in_zeta() + LaurentPoly.monomial(-2, -1, X0)


# -- geometric tails ---------------------------------------------------------

def geometric_tail(c, ratio, from_n: int = 0, weight: str = "none") -> Fraction:
    """Exact value of sum_{n >= from_n} c ratio**n (or c n ratio**(n-1)).

    For weight="linear" the sum is the derivative series; both closed forms
    are exact, hence also upper bounds.
    """
    c, q = Fraction(c), Fraction(ratio)
    if not 0 < q < 1:
        raise ValueError("ratio must lie in (0, 1)")
    if weight == "none":
        return c * q ** from_n / (1 - q)
    if weight == "linear":
        # sum_{n>=m} n q^(n-1) = q^(m-1) (m - (m-1) q) / (1-q)^2
        m = from_n
        if m <= 0:
            return c / (1 - q) ** 2
        return c * q ** (m - 1) * (m - (m - 1) * q) / (1 - q) ** 2
    raise ValueError(f"unknown weight {weight!r}")


def induction_constants(n: int = AB_CHECKED) -> tuple:
    """The two ratios that must stay <= 1 for the A/B geometric induction."""
    k = Fraction(4, 3) ** 4
    return (Fraction(36, (n + 1) * (n + 8)) * k, Fraction(36, (n + 1) * (n - 6)) * k)


# -- fixture export ----------------------------------------------------------

def export_tables(path: str | Path, n_max: int = 22) -> None:
    """Write P_u, P_a and the series coefficients as numerator/denominator pairs."""
    a = p_coefficients()
    A, B = ab_recurrences(a, max(n_max, AB_CHECKED))
    rows = lambda vals: [[v.numerator, v.denominator] for v in vals]
    data = {
        "format": _FIXTURE["format"],
        "constants": _FIXTURE["constants"],
        "P_u": rows(PU_COEFFS),
        "P_a": rows(PA_COEFFS),
        "a": rows(a.values),
        "A": rows(A.values[: n_max + 1]),
        "B": rows(B.values[: n_max + 1]),
    }
    Path(path).write_text(_dump(data))


def import_tables(path: str | Path) -> dict:
    """Read a fixture written by export_tables (or the packaged one)."""
    raw = _load_fixture(path)
    out = {k: Fraction(*v) for k, v in raw["constants"].items()}
    for key in ("P_u", "P_a", "a", "A", "B"):
        if key in raw:
            out[key] = _pairs(raw[key])
    return out


def _dump(data: dict) -> str:
    # one rational per line keeps diffs readable
    lines = ["{"]
    items = list(data.items())
    for i, (k, v) in enumerate(items):
        end = "," if i < len(items) - 1 else ""
        if isinstance(v, list):
            body = ",\n".join(f"    {json.dumps(row)}" for row in v)
            lines.append(f'  "{k}": [\n{body}\n  ]{end}')
        else:
            lines.append(f'  "{k}": {json.dumps(v)}{end}')
    lines.append("}")
    return "\n".join(lines) + "\n"
