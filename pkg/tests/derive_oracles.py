"""Regenerate tests/oracle_values.json.

Every number here comes from mpmath quadrature / ODE solves or sympy exact
algebra written directly from the defining formulas.  Only the coefficient
fixture is shared with the package; no package numerics are imported.

    python3 tests/derive_oracles.py
"""

import json
from fractions import Fraction
from pathlib import Path

import mpmath as mp
import sympy as sp

HERE = Path(__file__).resolve().parent
FIXTURE = HERE.parent / "src" / "tritronquee" / "data" / "tables.json"
OUT = HERE / "oracle_values.json"

mp.mp.dps = 50
tables = json.loads(FIXTURE.read_text())
C = {k: Fraction(*v) for k, v in tables["constants"].items()}
PU = [Fraction(*v) for v in tables["P_u"]]
x0, r, L, L0, a2 = C["x0"], C["r"], C["L"], C["L0"], C["a2"]
X_LEFT = x0 + r
MID, HALF = (L + X_LEFT) / 2, (L - X_LEFT) / 2


def m(q):
    return mp.mpf(q.numerator) / q.denominator


def y0(x):
    t = (x - m(MID)) / m(HALF)
    return mp.polyval([m(c) for c in PU[::-1]], t) - 1 / (x - m(x0)) ** 2


def y0_derivs(x):
    return mp.diff(y0, x, 2)


def residual(x):
    return y0_derivs(x) + 6 * y0(x) ** 2 - x


def w0_pair():
    b = mp.mpf(4) / 5 * mp.mpf(24) ** 0.25
    a = mp.mpf(5) / 2 * b
    s6 = mp.sqrt(6)
    lead, c1, c2 = mp.mpf(4412401) / 368640, mp.mpf(1225) / 540294, mp.mpf(30625) / 2161176

    def w0(x):
        z = x ** (mp.mpf(5) / 4)

        def f(s):
            w = 1 + 1j * s
            W = -lead * s6 / (a * z ** 7) * (w ** -7.5 - c1 * s6 / z ** 2 * w ** -9.5 + c2 / z ** 4 * w ** -11.5)
            return mp.re(mp.exp(-s * b * z) * W)
        return mp.quad(f, [0, 1, 4, 16, mp.inf])

    xL = m(L)
    return w0(xL), mp.diff(w0, xL)


def calR_sup():
    """max over [L0, L] of |int_L^x -R| (dense scan, then local refinement)."""
    xs = mp.linspace(m(L0), m(L), 401)
    R = lambda x: -residual(x)
    vals = []
    acc = mp.mpf(0)
    prev = xs[-1]
    for x in reversed(xs):
        acc += mp.quad(R, [prev, x])
        prev = x
        vals.append((abs(acc), x))
    best, xb = max(vals)
    F = lambda x: abs(mp.quad(R, [m(L), x]))
    h = (m(L) - m(L0)) / 400
    lo, hi = max(m(L0), xb - h), min(m(L), xb + h)
    for _ in range(60):
        a1, b1 = lo + (hi - lo) / 3, hi - (hi - lo) / 3
        if F(a1) < F(b1):
            lo = a1
        else:
            hi = b1
    return max(best, F((lo + hi) / 2))


def d2_greens_sups():
    """max |G1|, |G1'|, |G2|, |G2'| on [L0, L] for G'' + 12 y0 G = 0 from x = L."""
    def rhs(x, u):
        g1, g1p, g2, g2p = u
        k = 12 * y0(x)
        return [g1p, -k * g1, g2p, -k * g2]
    # integrate in s = L - x forward
    sol = mp.odefun(lambda s, u: [-v for v in rhs(m(L) - s, u)], 0, [1, 0, 0, 1])
    span = m(L) - m(L0)
    best = [mp.mpf(0)] * 4
    for k in range(201):
        u = sol(span * k / 200)
        # u holds (G1, -G1', G2, -G2') with respect to x after the change of variable
        best = [max(bv, abs(v)) for bv, v in zip(best, u)]
    return {"G1": best[0], "G1p": best[1], "G2": best[2], "G2p": best[3]}


def d3_kernels_at_left(gamma=mp.mpf(16) / 5):
    zL0 = m(L0 - x0)
    z = m(r)
    pu = lambda t: y0(m(x0) + t) + 1 / t ** 2
    Q = z ** gamma / 7 * (z ** 4 * mp.quad(lambda t: t ** -3 * t ** -gamma * 12 * pu(t), [z, zL0])
                          + z ** -3 * mp.quad(lambda t: t ** 4 * t ** -gamma * 12 * pu(t), [z, zL0]))
    T = z ** gamma / 7 * (z ** 4 * mp.quad(lambda t: 6 * t ** (-3 - 2 * gamma), [z, zL0])
                          + z ** -3 * mp.quad(lambda t: 6 * t ** (4 - 2 * gamma), [z, zL0]))
    U = (4 * z ** 3 * mp.quad(lambda t: t ** -3 * t ** -gamma * 12 * pu(t), [z, zL0])
         + 3 * z ** -4 * mp.quad(lambda t: t ** 4 * t ** -gamma * 12 * pu(t), [z, zL0])) / 7
    V = (4 * z ** 3 * mp.quad(lambda t: 6 * t ** (-3 - 2 * gamma), [z, zL0])
         + 3 * z ** -4 * mp.quad(lambda t: 6 * t ** (4 - 2 * gamma), [z, zL0])) / 7
    return {"Q": Q, "T": T, "U": U, "V": V}


def local_series_sympy(n_max=17):
    """a_j in y = -z^-2 + z^2 sum a_j z^j solving y'' + 6y^2 = x0 + z, by undetermined coefficients."""
    z = sp.Symbol("z")
    X0, A2 = sp.Rational(x0.numerator, x0.denominator), sp.Rational(a2.numerator, a2.denominator)
    a = list(sp.symbols(f"c0:{n_max + 1}"))
    y = -z ** -2 + z ** 2 * sum(a[j] * z ** j for j in range(n_max + 1))
    expr = sp.expand((sp.diff(y, z, 2) + 6 * y ** 2 - X0 - z) * z ** 2)
    sol = {a[2]: A2}
    for j in range(n_max + 1):
        if j == 2:
            continue
        coeff = sp.expand(expr.coeff(z, j + 2)).subs(sol)
        s = sp.solve(coeff, a[j])
        sol[a[j]] = s[0] if s else sp.Integer(0)
    return [sol[a[j]] for j in range(n_max + 1)]


def d4_residual_sum(coeffs):
    z = sp.Symbol("z")
    X0 = sp.Rational(x0.numerator, x0.denominator)
    y = -z ** -2 + z ** 2 * sum(c * z ** j for j, c in enumerate(coeffs))
    R = sp.expand(sp.diff(y, z, 2) + 6 * y ** 2 - X0 - z)
    rr = sp.Rational(r.numerator, r.denominator)
    terms = sp.Poly(sp.expand(R * z ** 4), z).terms()
    degs = [d[0] - 4 for d, _ in terms]
    total = sum(abs(c) * rr ** (d[0] - 4) for d, c in terms)
    return total, min(degs), max(degs)


def d4_values_at_r(coeffs, n_terms=200):
    """G1 = sum A_n z^(n+4), G2 = sum B_n z^(n-3) from the ODE G'' + 12 Y0 G = 0 (B_7 = 0)."""
    p = [m(Fraction(int(c.p), int(c.q))) for c in coeffs]

    def series(shift, free=None):
        A = [mp.mpf(1)]
        for n in range(1, n_terms):
            conv = mp.fsum(p[k] * A[n - 4 - k] for k in range(0, min(len(p), n - 3)))
            den = (n + shift) * (n + shift - 1) - 12
            if den == 0:
                A.append(mp.mpf(0) if free is None else free)
                continue
            A.append(-12 * conv / den)
        return A

    rr = m(r)
    A, B = series(4), series(-3)
    g1 = mp.fsum(A[n] * rr ** (n + 4) for n in range(n_terms))
    g1p = mp.fsum((n + 4) * A[n] * rr ** (n + 3) for n in range(n_terms))
    g2 = mp.fsum(B[n] * rr ** (n - 3) for n in range(n_terms))
    g2p = mp.fsum((n - 3) * B[n] * rr ** (n - 4) for n in range(n_terms))
    return {"G1": g1, "G1p": g1p, "G2": g2, "G2p": g2p, "W": g1 * g2p - g2 * g1p}


def main():
    out = {}
    w, wp = w0_pair()
    out["w0_L"], out["w0p_L"] = mp.nstr(w, 25), mp.nstr(wp, 25)
    out["calR_sup_D2"] = mp.nstr(calR_sup(), 20)
    out["d2_greens_sup"] = {k: mp.nstr(v, 20) for k, v in d2_greens_sups().items()}
    with mp.workdps(80):     # about 256 bits
        out["d3_kernels_at_left"] = {k: mp.nstr(v, 40) for k, v in d3_kernels_at_left().items()}
    coeffs = local_series_sympy()
    out["local_series"] = [str(c) for c in coeffs]
    total, lo, hi = d4_residual_sum(coeffs)
    out["d4_residual_sum"] = {"exact": str(total), "decimal": str(sp.N(total, 30)), "min_degree": lo,
                              "max_degree": hi}
    out["d4_values_at_r"] = {k: mp.nstr(v, 30) for k, v in d4_values_at_r(coeffs).items()}
    OUT.write_text(json.dumps(out, indent=2) + "\n")
    print(json.dumps(out, indent=2)[:3000])


if __name__ == "__main__":
    main()
