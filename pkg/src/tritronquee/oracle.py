"""High-precision, non-rigorous Painleve-I integration for cross-checks.

Nothing here feeds a certificate.  The Taylor method uses the exact
coefficient recurrence of y'' = x - 6 y^2 about each step's base point:

    (k+2)(k+1) c_{k+2} = [x]_k - 6 sum_{i<=k} c_i c_{k-i},   [x]_0 = x_c, [x]_1 = 1.

Steps run along straight segments in the complex plane, so the same code
integrates along the real axis and around the circle |x - x0| = r.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath as mp

from . import pieces
from .pieces import L, X0, R_DISK

log = logging.getLogger(__name__)

DEFAULT_ORDER = 30
DEFAULT_DPS = 40
with mp.workdps(DEFAULT_DPS):
    DEFAULT_TOL = mp.mpf("1e-24")
    MIN_STEP = mp.mpf("1e-10")
    X0_QUOTED = mp.mpf("-2.3841687675")


class PoleEncountered(ArithmeticError):
    def __init__(self, x_approx):
        super().__init__(f"solution blows up near x = {x_approx}")
        self.x_approx = x_approx


class FitDiverged(ArithmeticError):
    pass


@dataclass
class Node:
    x: object
    y: object
    yp: object
    err: object = 0    # accumulated local error estimate


def _mp(q):
    if isinstance(q, Fraction):
        return mp.mpf(q.numerator) / q.denominator
    return mp.mpmathify(q)


def taylor_coefficients(xc, y, yp, order: int = DEFAULT_ORDER) -> list:
    c = [y, yp]
    for k in range(order - 1):
        s = mp.fsum(c[i] * c[k - i] for i in range(k + 1))
        xk = xc if k == 0 else (1 if k == 1 else 0)
        c.append((xk - 6 * s) / ((k + 2) * (k + 1)))
    return c


def _step(c, h):
    y = mp.polyval(c[::-1], h)
    dc = [k * c[k] for k in range(1, len(c))]
    return y, mp.polyval(dc[::-1], h)


def _radius_estimate(c) -> object:
    """Convergence radius from the last few coefficients (root test)."""
    n = len(c) - 1
    ests = [abs(c[k]) ** (-mp.mpf(1) / k) for k in range(n - 4, n + 1) if c[k] != 0]
    return min(ests) if ests else mp.inf


def taylor_integrate(seed, x_end, order: int = DEFAULT_ORDER, tol=DEFAULT_TOL, nodes=None) -> list:
    """Integrate from seed = (x, y, y') to x_end along a straight segment.

    ``nodes`` (optional) are extra points on the segment where output is
    wanted; steps are cut to land on them.  Returns the list of Nodes at
    every step end.
    """
    x, y, yp = (_mp(v) if not isinstance(v, (mp.mpf, mp.mpc)) else v for v in seed)
    err = mp.mpf(0)
    x_end = _mp(x_end) if not isinstance(x_end, (mp.mpf, mp.mpc)) else x_end
    span = x_end - x
    if span == 0:
        return [Node(x, y, yp, err)]
    direction = span / abs(span)
    stops = sorted({abs(_mp(n) - x) for n in (nodes or [])} | {abs(span)})
    out = [Node(x, y, yp, err)]
    travelled = mp.mpf(0)
    for stop in stops:
        while travelled < stop:
            c = taylor_coefficients(x, y, yp, order)
            rho = _radius_estimate(c)
            h = min(rho / 2, stop - travelled)
            while True:
                last = abs(c[-1]) * h ** order + abs(c[-2]) * h ** (order - 1)
                if last < tol / 10:
                    break
                h /= 2
                if h < MIN_STEP:
                    raise PoleEncountered(x + direction * rho)
            y, yp = _step(c, direction * h)
            x = x + direction * h
            travelled += h
            err += last
            out.append(Node(x, y, yp, err))
    return out


def integrate_path(seed, waypoints, order: int = DEFAULT_ORDER, tol=DEFAULT_TOL) -> list:
    """Chain taylor_integrate over straight segments through ``waypoints``; returns the vertex nodes."""
    cur = Node(*seed)
    out = [cur]
    for w in waypoints:
        traj = taylor_integrate((cur.x, cur.y, cur.yp), w, order, tol)
        end = traj[-1]
        cur = Node(end.x, end.y, end.yp, out[-1].err + end.err)
        out.append(cur)
    return out


# -- seeds and comparisons -----------------------------------------------------------

def seed_asymptotic(x_start=L):
    """(y, y') at x_start >= L from the asymptotic formula with w0, plus the E band there."""
    from .approximant import y0_d1
    from .d1 import contraction_terms
    from .scalars import ball, pow_rational_exp, sqrt6
    from .d1 import W0_NORM
    x_start = Fraction(x_start)
    if x_start < L:
        raise ValueError("the asymptotic seed needs x >= L")
    y, yp = y0_d1(x_start, 0), y0_d1(x_start, 1)
    t = contraction_terms(x=x_start)
    xb = ball(x_start)
    band = t["w_coeff"] / sqrt6() * ball(W0_NORM) * pow_rational_exp(xb, Fraction(-43, 4))
    return y, yp, band


def _arb_to_mp(b):
    return mp.mpf(b.mid().str(40, radius=False))


def trajectory_from_L(x_end, order=DEFAULT_ORDER, tol=DEFAULT_TOL, nodes=None, dps=DEFAULT_DPS) -> list:
    with mp.workdps(dps):
        y, yp, _ = seed_asymptotic(L)
        return taylor_integrate((_mp(L), _arb_to_mp(y), _arb_to_mp(yp)), _mp(x_end), order, tol, nodes)


def y0_real(x):
    """The D2/D3 formula -(x - x0)^-2 + P_u(tau(x)) in floating point."""
    x = _mp(x) if isinstance(x, Fraction) else x
    t = (x - _mp(pieces.TAU_MID)) / _mp(pieces.TAU_HALF)
    c = [_mp(v) for v in pieces.PU_COEFFS]
    return mp.polyval(c[::-1], t) - 1 / (x - _mp(X0)) ** 2


def compare_with_approximant(traj) -> list:
    """(x, |y_oracle - y0|) at each node left of L."""
    return [(n.x, abs(n.y - y0_real(n.x))) for n in traj if n.x < _mp(L)]


# -- around the circle ---------------------------------------------------------------

def circle_points(m: int = 128) -> list:
    x0, r = _mp(X0), _mp(R_DISK)
    return [x0 + r * mp.expjpi(mp.mpf(2 * k) / m) for k in range(1, m + 1)]


def circumnavigation(start=None, m: int = 128, order=DEFAULT_ORDER, tol=DEFAULT_TOL,
                     dps=DEFAULT_DPS) -> dict:
    """Integrate once around |x - x0| = r (counterclockwise) from x0 + r.

    ``start`` is (y, y') at x0 + r; by default it comes from integrating the
    real axis from L.  Returns the vertex nodes and the return mismatch.
    """
    with mp.workdps(dps):
        if start is None:
            traj = trajectory_from_L(pieces.X_LEFT, order, tol, dps=dps)
            start = (traj[-1].y, traj[-1].yp)
        x_start = _mp(X0) + _mp(R_DISK)
        verts = circle_points(m)
        path = integrate_path((x_start, start[0], start[1]), verts, order, tol)
        back = path[-1]
        return {"nodes": path, "start": start, "mismatch": max(abs(back.y - start[0]), abs(back.yp - start[1])),
                "err": back.err}


def contour_count(nodes) -> object:
    """(1/2 pi i) oint z y dz by the periodic trapezoid rule on equally spaced vertices."""
    x0 = _mp(X0)
    pts = nodes[1:]
    return mp.fsum((n.x - x0) ** 2 * n.y for n in pts) / len(pts)


# -- pole hunting --------------------------------------------------------------------

def local_series(xp, a2, n_max: int = 40) -> list:
    """c_n of y = -(x - xp)^-2 + (x - xp)^2 sum c_n (x - xp)^n (floating version of the recurrence)."""
    v = [-xp / 10, mp.mpf(-1) / 6, a2, mp.mpf(0)]
    for n in range(4, n_max + 1):
        s = mp.fsum(v[k] * v[n - 4 - k] for k in range(n - 3))
        v.append(mp.mpf(-6) / ((n + 5) * (n - 2)) * s)
    return v


def local_eval(xp, a2, x, n_max: int = 40):
    z = x - xp
    c = local_series(xp, a2, n_max)
    y = -1 / z ** 2 + z ** 2 * mp.polyval(c[::-1], z)
    dc = [(k + 2) * c[k] for k in range(len(c))]
    yp = 2 / z ** 3 + z * mp.polyval(dc[::-1], z)
    return y, yp


def fit_pole(x, y, yp, guess, a2_guess=None, n_max: int = 40) -> tuple:
    """Solve local_eval(xp, a2, x) = (y, y') for (xp, a2) by Newton's method."""
    a2_guess = _mp(pieces.A2) if a2_guess is None else a2_guess
    try:
        xp, a2 = mp.findroot(lambda p, q: [v - w for v, w in zip(local_eval(p, q, x, n_max), (y, yp))],
                             (guess, a2_guess))
    except (ZeroDivisionError, ValueError) as exc:
        raise FitDiverged(str(exc)) from exc
    return xp, a2


def pole_hunt(guess=X0, stand_off=Fraction(1, 2), order=DEFAULT_ORDER, tol=DEFAULT_TOL,
              dps=DEFAULT_DPS) -> tuple:
    """Estimate (x_p, a2) by fitting the local series at two points right of ``guess``.

    Returns two (mid, rad) pairs; rad is the spread between the two fits.
    """
    with mp.workdps(dps):
        g = _mp(Fraction(guess))
        xa, xb = g + _mp(stand_off), g + _mp(stand_off) * 3 / 4
        traj = trajectory_from_L(xb, order, tol, nodes=[xa], dps=dps)
        na = min(traj, key=lambda n: abs(n.x - xa))
        nb = traj[-1]
        fits = [fit_pole(n.x, n.y, n.yp, g) for n in (na, nb)]
        if any(abs(f[0] - g) > 1 for f in fits):
            raise FitDiverged("fitted pole moved away from the guess")
        xp = (fits[0][0] + fits[1][0]) / 2
        a2 = (fits[0][1] + fits[1][1]) / 2
        return (xp, abs(fits[0][0] - fits[1][0]) / 2), (a2, abs(fits[0][1] - fits[1][1]) / 2)


# -- manufactured checks ---------------------------------------------------------------

def p1_defect(coeffs, x):
    """u'' + 6u^2 - x for the polynomial u = sum coeffs[k] x^k, in floating point."""
    c = [_mp(v) for v in coeffs]
    x = _mp(x)
    u = mp.polyval(c[::-1], x)
    d2 = [k * (k - 1) * c[k] for k in range(2, len(c))]
    return (mp.polyval(d2[::-1], x) if d2 else 0) + 6 * u * u - x


def write_trajectory_csv(traj, path) -> None:
    """x, y_mid, y_rad, yprime_mid, yprime_rad (rad = accumulated local error estimate)."""
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y_mid", "y_rad", "yprime_mid", "yprime_rad"])
        for n in traj:
            if isinstance(n.x, mp.mpc):
                raise ValueError("CSV export is for real trajectories")
            e = mp.nstr(n.err, 5)
            w.writerow([mp.nstr(n.x, 30), mp.nstr(n.y, 30), e, mp.nstr(n.yp, 30), e])


# -- the cross-validation bundle -------------------------------------------------------

BAND = mp.mpf("2.35e-5")
POLE_RADIUS = mp.mpf("4.1e-6")


def cross_validate(order=DEFAULT_ORDER, tol=DEFAULT_TOL, n_points: int = 50, dps=DEFAULT_DPS) -> dict:
    """Oracle vs certificate: band on D2 u D3, pole location, single-valuedness, winding count.

    Non-rigorous; the tolerances are the certified bounds plus 1e-8.
    """
    with mp.workdps(dps):
        xs = [pieces.X_LEFT + (L - pieces.X_LEFT) * Fraction(k, n_points) for k in range(n_points)]
        traj = trajectory_from_L(pieces.X_LEFT, order, tol, nodes=xs, dps=dps)
        worst = max(d for _, d in compare_with_approximant(traj))
        (xp, xp_rad), (a2, a2_rad) = pole_hunt(X0, order=order, tol=tol, dps=dps)
        circ = circumnavigation((traj[-1].y, traj[-1].yp), order=order, tol=tol, dps=dps)
        count = contour_count(circ["nodes"])
        slack = mp.mpf("1e-8")
        checks = {
            "band_D2_D3": worst <= BAND + slack,
            "pole_location": abs(xp - X0_QUOTED) <= POLE_RADIUS,
            "a2_consistent": abs(a2 - _mp(pieces.A2)) <= mp.mpf("1e-4"),
            "single_valued": circ["mismatch"] <= 10 * max(tol, circ["err"]),
            "winding_count": abs(count + 1) <= mp.mpf("1e-6"),
        }
        return {
            "status": "pass" if all(checks.values()) else "fail",
            "checks": checks,
            "max_deviation_D2_D3": worst,
            "nodes": len(traj),
            "pole_estimate": xp, "pole_fit_spread": xp_rad,
            "a2_estimate": a2, "a2_fit_spread": a2_rad,
            "circle_return_mismatch": circ["mismatch"],
            "contour_count": count,
            "tolerance": tol,
        }
