"""Chaining the fixed-point arguments from the half-line down to the circle.

On each domain E = y - y0 solves an integral equation E = N[E] whose
initial data come from the previous domain (the "handoff").  For each
domain we bound E0 = N[0], check that N maps the ball of radius
delta ||E0|| about E0 into itself and contracts there, and pass the
resulting bounds on E, E' to the next junction:

    [L, oo) --L--> [L0, L) --L0--> [x0 + r, L0) --x0+r--> |x - x0| = r

Bounds are chained as computed enclosures; each is also compared with its
displayed constant.  The whole chain is a CertificateDAG (see ``build_dag``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from flint import arb

from . import approximant, d1, greens, pieces
from .certificates import PASS, Check, ContractionCertificate
from .dag import CertificateDAG
from .grid_bounds import GridFunction, sup_bound, sup_bound_within
from .laurent import LaurentPoly
from .pieces import GAMMA, L, L0, R_DISK, X0, X_LEFT
from .scalars import ball, pi, pow_rational_exp, upper

F = Fraction

DELTAS = {"D2": F(55, 10**6), "D3": F(963, 1000), "D4": F(2, 10**4)}

CLAIMS = {
    "alpha1": F(563, 10**12), "beta1": F(213, 10**11),
    "alpha2": F(922, 10**11), "beta2": F(976, 10**9),
    "alpha3": F(382, 10**7), "beta3": F(376, 10**8),
    "D2.E0": F(1745, 10**10), "D2.E0p": F(1605, 10**10),
    "D2.E": F(175, 10**9), "D2.Ep": F(161, 10**9), "D2.factor": F(11, 10**5),
    "D3.E01": F(203, 10**8), "D3.E01p": F(12245, 10**9),
    "D3.E02": F(23, 10**10), "D3.E02p": F(38, 10**9),
    "D3.E0": F(204, 10**8), "D3.E0p": F(123, 10**7),
    "D3.E": F(401, 10**8), "D3.Ep": F(376, 10**7), "D3.E_endpoint": F(126, 10**7),
    "D4.E0": F(234, 10**7), "D4.E0p": F(115, 10**6),
    "D4.E": F(235, 10**7), "D4.Ep": F(116, 10**6), "D4.factor": F(3, 10**4),
    "R_D2": F(375, 10**11), "R_D4": F(1311, 10**9),
    "jump_L": F(5, 10**14), "jump_Lp": F(75, 10**15),
    "jump_x0r": F(4, 10**10), "jump_x0rp": F(7, 10**8),
    "global.E": F(235, 10**7), "global.Ep": F(116, 10**6),
}


class SingularSystem(ArithmeticError):
    """The 2x2 handoff system could not be solved (determinant enclosure contains 0)."""


def _b(x) -> arb:
    return x if isinstance(x, arb) else ball(x)


def _abs(x) -> arb:
    return abs(_b(x))


def _decide(checks):
    for c in checks:
        c.decide()
    return checks


# -- ledger ------------------------------------------------------------------------

@dataclass
class LedgerEntry:
    name: str
    claimed: object
    computed: object
    relation: str
    status: str
    description: str = ""
    node: str = ""
    margin: object = None


@dataclass
class BoundLedger:
    """Every inequality checked in a run, keyed by check name (each appears once)."""

    entries: dict = field(default_factory=dict)

    def add(self, check: Check, node: str = "") -> None:
        if check.name in self.entries:
            raise ValueError(f"duplicate ledger entry {check.name!r}")
        self.entries[check.name] = LedgerEntry(check.name, check.claimed, check.computed, check.relation,
                                               check.status, check.description, node, check.margin)

    @classmethod
    def from_results(cls, results: dict) -> "BoundLedger":
        led = cls()
        for name, res in results.items():
            for c in res.checks:
                led.add(c, name)
        return led

    def failed(self) -> list:
        return [e for e in self.entries.values() if e.status != PASS]

    @property
    def all_pass(self) -> bool:
        return not self.failed()


# -- handoffs -----------------------------------------------------------------------

def handoff(prev_E, prev_Ep, mismatch=(0, 0), junction: str = "L", values_at_r: dict | None = None) -> tuple:
    """Upper bounds (|alpha|, |beta|) for the next domain's homogeneous coefficients.

    prev_E, prev_Ep bound |E|, |E'| at the junction on the upstream side;
    ``mismatch`` is (y0(x+) - y0(x-), y0'(x+) - y0'(x-)).
    """
    e = _abs(prev_E) + _abs(mismatch[0])
    ep = _abs(prev_Ep) + _abs(mismatch[1])
    if junction == "L":
        # G1, G2 have unit initial data at L-
        return e, ep
    if junction == "L0":
        z = ball(L0 - X0)
        # 7 alpha = G2 E' - G2' E,  7 beta = -G1 E' + G1' E with G1 = z^4, G2 = z^-3
        alpha = (ep / z ** 3 + 3 * e / z ** 4) / 7
        beta = (ep * z ** 4 + 4 * e * z ** 3) / 7
        return alpha, beta
    if junction == "x0+r":
        v = values_at_r if values_at_r is not None else greens.d4_values_at_r()
        det = v["G1"] * v["G2p"] - v["G2"] * v["G1p"]
        if det.contains(0):
            raise SingularSystem("Wronskian enclosure at r contains 0")
        if not det.contains(-7):
            raise SingularSystem("Wronskian enclosure at r does not contain -7")
        alpha = (e * abs(v["G2p"]) + ep * abs(v["G2"])) / 7
        beta = (ep * abs(v["G1"]) + e * abs(v["G1p"])) / 7
        return alpha, beta
    raise ValueError(f"unknown junction {junction!r}")


# -- D2 ------------------------------------------------------------------------------

def _len_d2() -> arb:
    return ball(L - L0)


def d2_E0(g: dict, R_norm, alpha, beta) -> tuple:
    """(||E0||, ||E0'||) on D2 from the integrated-by-parts form."""
    w = _len_d2()
    R = _b(R_norm)
    e0 = (g["G1p"] * g["G2"] + g["G1"] * g["G2p"]) * w * R + alpha * g["G1"] + beta * g["G2"]
    e0p = R + 2 * g["G1p"] * g["G2p"] * R * w + alpha * g["G1p"] + beta * g["G2p"]
    return e0, e0p


def d2_fixed_point(g: dict, e0, e0p, delta=DELTAS["D2"]) -> ContractionCertificate:
    d = ball(F(delta))
    w = _len_d2()
    k = 2 * g["G1"] * g["G2"] * w
    ball_map = k * 6 * (1 + d) ** 2 * e0                  # relative to ||E0||
    factor = k * 12 * (1 + d) * e0
    e = (1 + d) * e0
    ep = e0p + (g["G1p"] * g["G2"] + g["G2p"] * g["G1"]) * w * 6 * e ** 2
    checks = _decide([
        Check("D2.ball_map", "<=", F(delta), ball_map, "2|G1||G2|(L-L0) 6 (1+d)^2 ||E0|| <= d"),
        Check("D2.factor", "<=", CLAIMS["D2.factor"], factor, "contraction factor"),
        Check("D2.E", "<=", CLAIMS["D2.E"], e, "||E|| on D2"),
        Check("D2.Ep", "<=", CLAIMS["D2.Ep"], ep, "||E'|| on D2"),
    ])
    return ContractionCertificate("D2", F(delta), ball_map, factor, e, ep, checks)


# -- D3 ------------------------------------------------------------------------------

def d3_E01(alpha, beta, gamma=GAMMA) -> tuple:
    """Weighted sup of alpha G1 + beta G2 and sup of its derivative on D3.

    z^g (|a| z^4 + |b| z^-3) increases when g + 4 > 0 and g - 3 > 0, so its
    sup is at L0.  4|a| z^3 + 3|b| z^-4 is convex, so its sup is at an end.
    """
    g = F(gamma)
    zl, zr = ball(L0 - X0), ball(R_DISK)
    e01 = alpha * pow_rational_exp(zl, g + 4) + beta * pow_rational_exp(zl, g - 3)
    left = 4 * alpha * zr ** 3 + 3 * beta / zr ** 4
    right = 4 * alpha * zl ** 3 + 3 * beta / zl ** 4
    checks = _decide([
        Check("D3.E01_monotone", "==", True, g + 4 > 0 and g - 3 > 0,
              "weighted homogeneous part increases toward L0"),
    ])
    at_left = upper(right) <= upper(left)
    return e01, (left if at_left else right), checks, at_left


def d3_E02_poly() -> LaurentPoly:
    """Particular solution (1/7)[G2 int_{L0}^x G1 R - G1 int_{L0}^x G2 R] of E'' - 12 z^-2 E = -R."""
    R = approximant.residual("D3")
    G1, G2 = greens.d3_pair()
    parts = []
    for g in (G1, G2):
        anti = (g * R).antiderivative()
        c = anti.evaluate(L0)
        parts.append(anti - (c if isinstance(c, Fraction) else ball(c)))
    I1, I2 = parts
    return (G2 * I1 - G1 * I2) * F(1, 7)


def d3_E02_bounds(gamma=GAMMA, n: int = 5) -> tuple:
    e02 = d3_E02_poly()
    weighted = LaurentPoly.monomial(F(gamma), 1, X0) * e02
    b, n1 = sup_bound_within(GridFunction.from_poly(weighted, "z^g E02"), X_LEFT, L0, n, CLAIMS["D3.E02"])
    bp, n2 = sup_bound_within(GridFunction.from_poly(e02.derivative(), "E02'"), X_LEFT, L0, n,
                              CLAIMS["D3.E02p"])
    return b, bp, {"n_E02": n1, "n_E02p": n2}


def d3_fixed_point(e0, e0p, Q, T, U, V, delta=DELTAS["D3"], gamma=GAMMA) -> ContractionCertificate:
    d = ball(F(delta))
    qd, td = ball(F(49, 100)), ball(1)
    ball_map = (1 + d) * Q + (1 + d) ** 2 * T * e0
    ball_map_displayed = (1 + d) * qd + (1 + d) ** 2 * td * e0
    factor = Q + 2 * T * (1 + d) * e0
    factor_displayed = qd + ball(F(122, 10)) * (1 + d) * e0
    e = (1 + d) * e0
    ep = e0p + U * e + V * e ** 2
    ep_displayed = e0p + ball(F(63, 10)) * e + ball(F(123, 10)) * e ** 2
    e_end = e * pow_rational_exp(ball(R_DISK), -F(gamma))
    checks = _decide([
        Check("D3.ball_map", "<=", F(delta), ball_map, "(1+d) Q + (1+d)^2 T ||E0|| <= d"),
        Check("D3.ball_map_displayed", "<=", F(delta), ball_map_displayed,
              "(1+d) 0.49 + (1+d)^2 ||E0|| <= d"),
        Check("D3.factor", "<=", F(1, 2), factor, "Q + 2 T (1+d) ||E0|| <= 1/2"),
        Check("D3.factor_displayed", "<=", F(1, 2), factor_displayed, "0.49 + 12.2 (1+d) ||E0|| <= 1/2"),
        Check("D3.E", "<=", CLAIMS["D3.E"], e, "weighted ||E|| on D3"),
        Check("D3.Ep", "<=", CLAIMS["D3.Ep"], ep, "||E'|| <= ||E0'|| + U ||E|| + V ||E||^2"),
        Check("D3.Ep_displayed", "<=", CLAIMS["D3.Ep"], ep_displayed,
              "||E0'|| + 6.3 ||E|| + 12.3 ||E||^2"),
        Check("D3.E_endpoint", "<=", CLAIMS["D3.E_endpoint"], e_end, "|E(x0 + r)| <= ||E|| r^-g"),
    ])
    cert = ContractionCertificate("D3", F(delta), ball_map, factor, e, ep, checks)
    cert.e_sup = e_end
    return cert


# -- D4 ------------------------------------------------------------------------------

def d4_E0(g: dict, R_norm, alpha, beta) -> tuple:
    r = ball(R_DISK)
    R = _b(R_norm)
    G1, G2, G1p, G2p = (ball(g[k]) for k in ("G1", "G2", "G1p", "G2p"))
    e0 = 4 * pi() * r / 7 * G1 * G2 * R + alpha * G1 + beta * G2
    e0p = 2 * pi() * r / 7 * (G1 * G2p + G2 * G1p) * R + alpha * G1p + beta * G2p
    return e0, e0p


def d4_fixed_point(g: dict, e0, e0p, delta=DELTAS["D4"]) -> ContractionCertificate:
    d = ball(F(delta))
    r = ball(R_DISK)
    G1, G2, G1p, G2p = (ball(g[k]) for k in ("G1", "G2", "G1p", "G2p"))
    ball_map = 24 * pi() * r / 7 * G1 * G2 * (1 + d) ** 2 * e0
    factor = 48 * pi() * r / 7 * G1 * G2 * (1 + d) * e0
    e = (1 + d) * e0
    ep = e0p + 12 * pi() * r / 7 * (G1p * G2 + G2p * G1) * (1 + d) ** 2 * e0 ** 2
    checks = _decide([
        Check("D4.ball_map", "<=", F(delta), ball_map, "(24/7) pi r |G1||G2| (1+d)^2 ||E0|| <= d"),
        Check("D4.factor", "<=", CLAIMS["D4.factor"], factor, "contraction factor"),
        Check("D4.E", "<=", CLAIMS["D4.E"], e, "||E|| on the circle"),
        Check("D4.Ep", "<=", CLAIMS["D4.Ep"], ep, "||E'|| on the circle"),
    ])
    return ContractionCertificate("D4", F(delta), ball_map, factor, e, ep, checks)


def ball_map_holds(domain: str, values: dict, delta) -> bool:
    """Re-run one domain's ball-map inequality at another delta (report only)."""
    if domain == "D2":
        c = d2_fixed_point(values["g"], values["E0"], values["E0p"], delta)
    elif domain == "D3":
        c = d3_fixed_point(values["E0"], values["E0p"], values["Q"], values["T"], values["U"],
                           values["V"], delta)
    else:
        c = d4_fixed_point(values["g"], values["E0"], values["E0p"], delta)
    return c.checks[0].passed and upper(c.factor) < 1


# -- the graph ----------------------------------------------------------------------

@dataclass
class RunOptions:
    grid_n_d2: int = 20
    grid_n_d3: int = 5
    tail_s: int = 50
    wronskian_n: int = 60


def _cert_checks(cert) -> list:
    return list(cert.checks)


def build_dag(opts: RunOptions | None = None) -> CertificateDAG:
    o = opts or RunOptions()
    dag = CertificateDAG()

    def tables(_):
        a = pieces.p_coefficients()
        A, B = pieces.ab_default()
        checks = [
            Check("tables.a_recurrence", "==", True, a.verify(), "a_n satisfy their recurrence"),
            Check("tables.A_recurrence", "==", True, A.verify(), "A_n satisfy their recurrence"),
            Check("tables.B_recurrence", "==", True, B.verify(), "B_n satisfy their recurrence"),
            Check("tables.A4", "==", -F(12, 44) * a[0], A[4], "A_4 = -(12/44) a_0"),
        ]
        return checks, {"digest": pieces.tables_digest()}

    def d2_residual(_):
        cert = approximant.residual_certificate("D2")
        g = GridFunction.from_poly(approximant.calR_poly(), "calR")
        bound = sup_bound(g, L0, L, o.grid_n_d2)
        half = sup_bound(g, L0, L, max(1, o.grid_n_d2 // 2))
        checks = [Check(f"D2.{c.name}", c.relation, c.claimed, c.computed, c.description)
                  for c in cert.checks]
        checks.append(Check("D2.calR_sup", "<=", CLAIMS["R_D2"], bound,
                            f"sup |calR| on D2, grid n = {o.grid_n_d2}"))
        return checks, {"calR": bound, "calR_half_grid": half, "n": o.grid_n_d2}

    def d4_residual(_):
        cert = approximant.residual_certificate("D4")
        s = approximant.residual_d4_bound()
        checks = [Check(f"D4.{c.name}", c.relation, c.claimed, c.computed, c.description)
                  for c in cert.checks]
        checks.append(Check("D4.residual_sum", "<=", CLAIMS["R_D4"], s, "sum |R_j| r^j"))
        return checks, {"R": s}

    def d2_positivity(_):
        cert = greens.d2_y0_positivity(o.grid_n_d2)
        return _cert_checks(cert), dict(cert.details)

    def d1_w0(_):
        cert = d1.certify_w0_norms()
        w0, w0p = d1.w0_eval(L, tail_s=o.tail_s)
        checks = [Check(f"D1.{c.name}", c.relation, c.claimed, c.computed, c.description)
                  for c in cert.checks]
        checks += [
            Check("D1.w0_at_L", "quoted", (F(-117414, 10**12), F(1, 10**11)), w0, "w0(L) = -1.17414e-7"),
            Check("D1.w0p_at_L", "quoted", (F(203367, 10**12), F(1, 10**11)), w0p, "w0'(L) = 2.03367e-7"),
        ]
        return checks, {"w0": w0, "w0p": w0p}

    def d1_contraction(_):
        cert = d1.certify_d1_contraction()
        checks = [Check(f"D1.{c.name}", c.relation, c.claimed, c.computed, c.description)
                  for c in cert.checks]
        return checks, {"E_L": cert.e_bound, "Ep_L": cert.ep_bound, "ball_map": cert.ball_map,
                        "factor": cert.factor, "delta": cert.delta}

    def mismatch_L(_):
        j0, j1 = approximant.boundary_mismatch("L")
        return [Check("jump.L", "abs<=", CLAIMS["jump_L"], j0, "|y0(L+) - y0(L-)|"),
                Check("jump.L_prime", "abs<=", CLAIMS["jump_Lp"], j1, "|y0'(L+) - y0'(L-)|")], \
            {"jump": j0, "jump_p": j1}

    def mismatch_x0r(_):
        j0, j1 = approximant.boundary_mismatch_exact("x0+r")
        return [Check("jump.x0r", "abs<=", CLAIMS["jump_x0r"], j0, "|y0 jump at x0 + r|"),
                Check("jump.x0r_prime", "abs<=", CLAIMS["jump_x0rp"], j1, "|y0' jump at x0 + r|")], \
            {"jump": j0, "jump_p": j1}

    def d2_greens(_):
        b = greens.d2_energy_bounds()
        return list(b.checks), {"g": b.norms, "gamma0": b.extras["gamma0"]}

    def d2_handoff(inp):
        d1v, mv = inp["d1.contraction"].values, inp["mismatch.L"].values
        a, b = handoff(d1v["E_L"], d1v["Ep_L"], (mv["jump"], mv["jump_p"]), "L")
        return [Check("alpha1", "<=", CLAIMS["alpha1"], a, "|alpha1| <= |E(L+)| + |jump|"),
                Check("beta1", "<=", CLAIMS["beta1"], b, "|beta1| <= |E'(L+)| + |jump'|")], \
            {"alpha": a, "beta": b}

    def d2_E0_node(inp):
        g = inp["d2.greens"].values["g"]
        h = inp["d2.handoff"].values
        e0, e0p = d2_E0(g, inp["d2.residual"].values["calR"], h["alpha"], h["beta"])
        return [Check("D2.E0", "<=", CLAIMS["D2.E0"], e0, "||E0|| on D2"),
                Check("D2.E0p", "<=", CLAIMS["D2.E0p"], e0p, "||E0'|| on D2")], {"E0": e0, "E0p": e0p}

    def d2_fp(inp):
        g = inp["d2.greens"].values["g"]
        v = inp["d2.E0"].values
        c = d2_fixed_point(g, v["E0"], v["E0p"])
        return c.checks, {"E": c.e_bound, "Ep": c.ep_bound, "ball_map": c.ball_map, "factor": c.factor,
                          "delta": c.delta, "g": g, "E0": v["E0"], "E0p": v["E0p"]}

    def d3_pu(_):
        return _cert_checks(greens.pu_positivity()), {}

    def d3_QT(_):
        q, t, cert = greens.d3_QT_bounds(GAMMA, o.grid_n_d3)
        uv = greens.d3_UV_bounds(GAMMA, o.grid_n_d3)
        res = greens.d3_pair_residuals()
        checks = _cert_checks(cert) + _cert_checks(uv)
        checks += [Check(f"D3.G{j + 1}_solves", "==", True, not res[j], "exact symbolic check")
                   for j in range(2)]
        return checks, {"Q": q, "T": t, "U": uv.details["U"], "V": uv.details["V"], **cert.details}

    def d3_handoff(inp):
        v = inp["d2.fixed_point"].values
        a, b = handoff(v["E"], v["Ep"], (0, 0), "L0")
        return [Check("alpha2", "<=", CLAIMS["alpha2"], a, "7|alpha2| <= |G2||E'| + |G2'||E| at L0"),
                Check("beta2", "<=", CLAIMS["beta2"], b, "7|beta2| <= |G1||E'| + |G1'||E| at L0")], \
            {"alpha": a, "beta": b}

    def d3_E0_node(inp):
        h = inp["d3.handoff"].values
        e01, e01p, checks, at_left = d3_E01(h["alpha"], h["beta"])
        e02, e02p, det = d3_E02_bounds(GAMMA, o.grid_n_d3)
        e0, e0p = e01 + e02, e01p + e02p
        checks += [
            Check("D3.E01", "<=", CLAIMS["D3.E01"], e01, "weighted ||E01||"),
            Check("D3.E01p", "<=", CLAIMS["D3.E01p"], e01p, "||E01'||"),
            Check("D3.E02", "<=", CLAIMS["D3.E02"], e02, f"weighted ||E02||, grid n = {det['n_E02']}"),
            Check("D3.E02p", "<=", CLAIMS["D3.E02p"], e02p, f"||E02'||, grid n = {det['n_E02p']}"),
            Check("D3.E0", "<=", CLAIMS["D3.E0"], e0, "weighted ||E0||"),
            Check("D3.E0p", "<=", CLAIMS["D3.E0p"], e0p, "||E0'||"),
        ]
        return checks, {"E0": e0, "E0p": e0p, "E01": e01, "E02": e02, "E01p": e01p, "E02p": e02p,
                         "E01p_max_at_left": at_left, **det}

    def d3_fp(inp):
        qt, v = inp["d3.QT"].values, inp["d3.E0"].values
        c = d3_fixed_point(v["E0"], v["E0p"], qt["Q"], qt["T"], qt["U"], qt["V"])
        return c.checks, {"E": c.e_bound, "Ep": c.ep_bound, "E_sup": c.e_sup, "ball_map": c.ball_map,
                          "factor": c.factor, "delta": c.delta, "E0": v["E0"], "E0p": v["E0p"],
                          "Q": qt["Q"], "T": qt["T"], "U": qt["U"], "V": qt["V"]}

    def d4_series(_):
        b = greens.d4_series_bounds()
        w = greens.wronskian_certify(o.wronskian_n)
        return list(b.checks) + _cert_checks(w), {"g": b.norms, "W": w.details["W"],
                                                  "wronskian_tail": w.details["tail"],
                                                  "values_at_r": greens.d4_values_at_r()}

    def d4_handoff(inp):
        v3, mv, s = inp["d3.fixed_point"].values, inp["mismatch.x0r"].values, inp["d4.series"].values
        a, b = handoff(v3["E_sup"], v3["Ep"], (mv["jump"], mv["jump_p"]), "x0+r", s["values_at_r"])
        return [Check("alpha3", "<=", CLAIMS["alpha3"], a, "2x2 solve at z = r"),
                Check("beta3", "<=", CLAIMS["beta3"], b, "2x2 solve at z = r")], {"alpha": a, "beta": b}

    def d4_E0_node(inp):
        g = inp["d4.series"].values["g"]
        h = inp["d4.handoff"].values
        e0, e0p = d4_E0(g, inp["d4.residual"].values["R"], h["alpha"], h["beta"])
        return [Check("D4.E0", "<=", CLAIMS["D4.E0"], e0, "||E0|| on the circle"),
                Check("D4.E0p", "<=", CLAIMS["D4.E0p"], e0p, "||E0'|| on the circle")], \
            {"E0": e0, "E0p": e0p}

    def d4_fp(inp):
        g = inp["d4.series"].values["g"]
        v = inp["d4.E0"].values
        c = d4_fixed_point(g, v["E0"], v["E0p"])
        return c.checks, {"E": c.e_bound, "Ep": c.ep_bound, "ball_map": c.ball_map, "factor": c.factor,
                          "delta": c.delta, "g": g, "E0": v["E0"], "E0p": v["E0p"]}

    def theorem(inp):
        led = assemble_theorem({k: inp[k].values for k in inp})
        return led["checks"], led["values"]

    def pole_count(inp):
        from . import pole
        cert = pole.count_poles(inp["d4.fixed_point"].values["E"])
        return _cert_checks(cert), {"count": cert.details["count"], "bound": cert.details["bound"]}

    def pole_location(inp):
        from . import pole
        enc = pole.enclose_pole(inp["d4.fixed_point"].values["E"])
        extra = [c for c in enc.checks if c.name in ("pole.residue_z2", "pole.radius", "pole.inside_disk")]
        return extra, {"enclosure": enc}

    dag.add("tables", [], tables, "exact coefficient tables")
    dag.add("d1.w0", [], d1_w0, "w0 enclosure and its norms")
    dag.add("d1.contraction", ["d1.w0"], d1_contraction, "fixed point on [L, oo)")
    dag.add("mismatch.L", ["tables", "d1.w0"], mismatch_L, "jumps of y0 at L")
    dag.add("d2.residual", ["tables"], d2_residual, "calR on D2")
    dag.add("d2.positivity", ["tables"], d2_positivity, "y0, y0' > 0 on D2")
    dag.add("d2.greens", ["d2.positivity"], d2_greens, "energy bounds on D2")
    dag.add("d2.handoff", ["d1.contraction", "mismatch.L"], d2_handoff, "alpha1, beta1")
    dag.add("d2.E0", ["d2.greens", "d2.residual", "d2.handoff"], d2_E0_node, "E0 on D2")
    dag.add("d2.fixed_point", ["d2.E0", "d2.greens"], d2_fp, "fixed point on D2")
    dag.add("d3.pu_positive", ["tables"], d3_pu, "P_u > 0")
    dag.add("d3.QT", ["d3.pu_positive"], d3_QT, "kernel integrals on D3")
    dag.add("d3.handoff", ["d2.fixed_point"], d3_handoff, "alpha2, beta2")
    dag.add("d3.E0", ["d3.handoff", "d2.residual"], d3_E0_node, "E0 on D3")
    dag.add("d3.fixed_point", ["d3.E0", "d3.QT"], d3_fp, "fixed point on D3")
    dag.add("mismatch.x0r", ["tables"], mismatch_x0r, "jumps of y0 at x0 + r")
    dag.add("d4.residual", ["tables"], d4_residual, "residual on the circle")
    dag.add("d4.series", ["tables"], d4_series, "series Green's functions")
    dag.add("d4.handoff", ["d3.fixed_point", "mismatch.x0r", "d4.series"], d4_handoff, "alpha3, beta3")
    dag.add("d4.E0", ["d4.handoff", "d4.series", "d4.residual"], d4_E0_node, "E0 on the circle")
    dag.add("d4.fixed_point", ["d4.E0", "d4.series"], d4_fp, "fixed point on the circle")
    dag.add("theorem", ["d1.contraction", "d2.fixed_point", "d3.fixed_point", "d4.fixed_point"],
            theorem, "global bounds")
    dag.add("pole.count", ["d4.fixed_point"], pole_count, "one pole inside the circle")
    dag.add("pole.location", ["pole.count", "d4.fixed_point"], pole_location, "distance of the pole from x0")
    return dag


def assemble_theorem(values: dict) -> dict:
    """Global sup bounds on E and E' from the four domain results.

    On [L, oo) both bounds decrease in x, so their values at L are the sups;
    on D3 the weighted bound becomes |E| <= ||E||_g r^-g at x0 + r.
    """
    d1v, d2v, d3v, d4v = (values[k] for k in ("d1.contraction", "d2.fixed_point",
                                              "d3.fixed_point", "d4.fixed_point"))
    sup_E = {"D1": d1v["E_L"], "D2": d2v["E"], "D3": d3v["E_sup"], "D4": d4v["E"]}
    sup_Ep = {"D1": d1v["Ep_L"], "D2": d2v["Ep"], "D3": d3v["Ep"], "D4": d4v["Ep"]}
    gE = max(sup_E.values(), key=upper)
    gEp = max(sup_Ep.values(), key=upper)
    checks = _decide([
        Check("theorem.E", "<=", CLAIMS["global.E"], gE, "sup |y - y0| on D"),
        Check("theorem.Ep", "<=", CLAIMS["global.Ep"], gEp, "sup |y' - y0'| on D"),
    ])
    return {"checks": checks, "values": {"E": gE, "Ep": gEp, "sup_E": sup_E, "sup_Ep": sup_Ep}}


def run_chain(opts: RunOptions | None = None, disable=(), only=None) -> dict:
    return build_dag(opts).run(disable=disable, only=only)


def delta_probe(results: dict) -> dict:
    """Does each ball-map inequality still hold at delta / 2?  Reported, never asserted."""
    out = {}
    for dom, node in (("D2", "d2.fixed_point"), ("D3", "d3.fixed_point"), ("D4", "d4.fixed_point")):
        res = results.get(node)
        if res is None or not res.passed:
            out[dom] = None
            continue
        out[dom] = ball_map_holds(dom, res.values, DELTAS[dom] / 2)
    return out
