from fractions import Fraction

import mpmath as mp

from tritronquee import greens
from tritronquee.pieces import X_LEFT
from tritronquee.scalars import ball, contains, radius, upper


def _rad(b):
    q = radius(b)
    return mp.mpf(q.numerator) / q.denominator


def _in(b, text, tol):
    with mp.workdps(60):
        return abs(mp.mpf(b.mid().str(50, radius=False)) - mp.mpf(text)) <= mp.mpf(tol) + _rad(b)


def test_d2_energy_bounds_dominate_ode_solution(frozen):
    # [DERIVED] sups of the actual solutions of G'' + 12 y0 G = 0 (mpmath ODE solve)
    norms = greens.d2_energy_bounds().norms
    for k, v in frozen["d2_greens_sup"].items():
        assert upper(norms[k]) >= Fraction(v) - Fraction(1, 10**12), k


def test_d2_energy_bounds_values():
    t = greens.d2_energy_terms()
    assert abs(float(t["G1p"].mid()) - 3.39076) < 1e-5
    assert abs(float(t["G1"].mid()) - 3.77479) < 1e-5
    assert t["G2p"] == ball(1)
    assert abs(float(t["G2"].mid()) - 1.11326) < 1e-5


def test_d2_y0_positive():
    assert greens.d2_y0_positivity().passed


def test_d3_monomials_solve_exactly():
    for res in greens.d3_pair_residuals():
        assert not res            # identically zero polynomial


def test_d3_kernel_exponents_avoid_logs():
    assert greens.kernel_exponents_avoid_minus_one()
    assert not any(k.has_log for k in greens.d3_kernels().values())


def test_d3_kernels_against_high_precision_quadrature(frozen):
    # [DERIVED] 256-bit mpmath quadrature of the defining integrals at x0 + r
    K = greens.d3_kernels()
    for name, text in frozen["d3_kernels_at_left"].items():
        assert _in(ball(K[name].evaluate(X_LEFT)), text, "1e-30"), name


def test_d3_sup_bounds():
    Q, T, cert = greens.d3_QT_bounds()
    assert cert.passed
    assert upper(Q) <= Fraction(49, 100) and upper(T) <= 1
    assert greens.d3_UV_bounds().passed


def test_pu_positivity():
    assert greens.pu_positivity().passed
    assert greens.pa_minus_pu_l1() <= Fraction(39, 1000)
    assert greens.pa_derivative_discriminant() < 0


def test_d4_closed_forms_equal_tail_sums():
    assert greens.d4_closed_forms() == greens.d4_tail_sums()


def test_d4_series_bounds_pass():
    s = greens.d4_series_bounds()
    assert s.passed


def test_d4_values_against_independent_series(frozen):
    # [DERIVED] mpmath partial sums of the series derived from the ODE directly
    vals = greens.d4_values_at_r()
    for k in ("G1", "G1p", "G2", "G2p"):
        assert _in(vals[k], frozen["d4_values_at_r"][k], "1e-25"), k
    assert abs(mp.mpf(frozen["d4_values_at_r"]["W"]) + 7) < mp.mpf("1e-20")


def test_d4_values_nested_under_more_terms():
    a, b = greens.d4_values_at_r(100), greens.d4_values_at_r(200)
    for k in a:
        assert a[k].overlaps(b[k])
        assert upper(b[k].rad()) <= upper(a[k].rad())


def test_wronskian_is_minus_seven():
    cert = greens.wronskian_certify()
    assert cert.passed
    assert cert.details["W"] == -7 or contains(ball(cert.details["W"]), -7)
    coeffs = greens.wronskian_coefficients(30)
    assert coeffs[0] == -7 and all(c == 0 for c in coeffs[1:])


def test_truncated_series_defect_starts_high():
    for n in (10, 25, 40):
        d = greens.g1_truncated_defect(n)
        assert min(d.exponents()) >= n + 3
