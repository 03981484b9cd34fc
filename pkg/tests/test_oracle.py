from fractions import Fraction

import mpmath as mp
import pytest

from tritronquee import oracle
from tritronquee.pieces import L, L0


def test_taylor_reproduces_manufactured_pole_solution():
    # the local series about a chosen pole is an exact solution; start away from the pole and integrate toward it
    with mp.workdps(40):
        xp, a2 = mp.mpf("-1.3"), mp.mpf("0.05")
        x_start, x_end = xp + mp.mpf("0.6"), xp + mp.mpf("0.15")
        y, yp = oracle.local_eval(xp, a2, x_start, 60)
        traj = oracle.taylor_integrate((x_start, y, yp), x_end)
        ye, _ = oracle.local_eval(xp, a2, x_end, 60)
        assert abs(traj[-1].y - ye) < mp.mpf("1e-18")


def test_fit_recovers_manufactured_pole():
    with mp.workdps(40):
        xp, a2 = mp.mpf("-2.1"), mp.mpf("0.07")
        x = xp + mp.mpf("0.3")
        y, yp = oracle.local_eval(xp, a2, x)
        fx, fa = oracle.fit_pole(x, y, yp, xp + mp.mpf("0.01"), a2 + mp.mpf("0.001"))
        assert abs(fx - xp) < mp.mpf("1e-15") and abs(fa - a2) < mp.mpf("1e-10")


def test_integrating_into_a_pole_raises():
    with mp.workdps(30):
        xp, a2 = mp.mpf(0), mp.mpf("0.05")
        x_start = mp.mpf("0.4")
        y, yp = oracle.local_eval(xp, a2, x_start)
        with pytest.raises(oracle.PoleEncountered):
            oracle.taylor_integrate((x_start, y, yp), mp.mpf("-0.4"))


def test_step_halving_convergence():
    # lower order makes the tolerance, not rounding, the dominant error
    with mp.workdps(40):
        ref = oracle.trajectory_from_L(L0, order=30, tol=mp.mpf("1e-30"))[-1].y
        errs = [abs(oracle.trajectory_from_L(L0, order=8, tol=t)[-1].y - ref)
                for t in (mp.mpf("1e-10"), mp.mpf("5e-11"), mp.mpf("2.5e-11"), mp.mpf("1.25e-11"))]
        ratios = [errs[i] / errs[i + 1] for i in range(3)]
        assert mp.fsum(ratios) / 3 >= 2


def test_seed_band_and_domain():
    y, yp, band = oracle.seed_asymptotic(L)
    assert float(band.mid()) < 6e-10
    with pytest.raises(ValueError):
        oracle.seed_asymptotic(Fraction(5))


def test_p1_defect():
    # u = 0 leaves -x; u = x^2 gives 2 + 6x^4 - x
    assert oracle.p1_defect([0], 3) == -3
    assert oracle.p1_defect([0, 0, 1], 2) == 2 + 6 * 16 - 2


def test_csv_dump(tmp_path):
    traj = oracle.trajectory_from_L(Fraction(5))
    p = tmp_path / "t.csv"
    oracle.write_trajectory_csv(traj, p)
    rows = p.read_text().splitlines()
    assert rows[0] == "x,y_mid,y_rad,yprime_mid,yprime_rad" and len(rows) == len(traj) + 1


def test_cross_validation(oracle_bundle):
    assert oracle_bundle["status"] == "pass", oracle_bundle["checks"]
    assert oracle_bundle["max_deviation_D2_D3"] < mp.mpf("1e-8")
    assert abs(oracle_bundle["contour_count"] + 1) < mp.mpf("1e-6")
