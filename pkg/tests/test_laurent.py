from fractions import Fraction

import sympy as sp
from hypothesis import given, strategies as st

from tritronquee.laurent import LaurentPoly
from tritronquee.scalars import contains

small = st.fractions(min_value=-50, max_value=50, max_denominator=50)
exps = st.integers(min_value=-6, max_value=8)
frac_exps = st.fractions(min_value=-5, max_value=5, max_denominator=5)


@st.composite
def polys(draw, exps=exps, center=Fraction(0)):
    terms = draw(st.dictionaries(exps, small, min_size=1, max_size=6))
    return LaurentPoly(terms, center)


@given(polys())
def test_derivative_undoes_antiderivative(f):
    f = f - LaurentPoly.monomial(-1, f.coeff(-1))
    assert f.antiderivative().derivative() == f


@given(polys())
def test_antiderivative_undoes_derivative_up_to_constant(f):
    g = f.derivative().antiderivative()
    diff = f - g
    assert all(p == 0 for p, _ in diff.terms)


@given(polys(frac_exps, Fraction(-3, 2)))
def test_fractional_exponents_round_trip(f):
    f = f - LaurentPoly.monomial(-1, f.coeff(-1), f.center)
    assert f.antiderivative().derivative() == f


def test_reciprocal_integrates_to_log():
    f = LaurentPoly.monomial(-1, Fraction(5, 3))
    F = f.antiderivative()
    assert F.has_log and F.coeff(0, 1) == Fraction(5, 3)
    assert F.derivative() == f


@given(polys(), polys(), st.fractions(min_value=Fraction(1, 10), max_value=4, max_denominator=30))
def test_product_evaluates_exactly(f, g, z):
    assert (f * g).evaluate(z) == f.evaluate(z) * g.evaluate(z)


def test_product_matches_sympy():
    z = sp.Symbol("z")
    f = LaurentPoly({-2: Fraction(-1), 0: Fraction(1, 3), 3: Fraction(2, 7)})
    g = LaurentPoly({-1: Fraction(4), 2: Fraction(-5, 2)})
    expected = sp.Poly(sp.expand((-z**-2 + sp.Rational(1, 3) + sp.Rational(2, 7) * z**3)
                                 * (4 / z - sp.Rational(5, 2) * z**2) * z**3), z)
    got = f * g
    for (deg,), c in expected.terms():
        assert got.coeff(deg - 3) == Fraction(int(c.p), int(c.q))
    assert len(got) == len(expected.terms())


def test_center_shift_and_ball_evaluation():
    f = LaurentPoly({2: Fraction(1), -1: Fraction(3)}, Fraction(1, 2))
    x = Fraction(5, 2)
    exact = f.evaluate(x)
    assert exact == 4 + Fraction(3, 2)
    from tritronquee.scalars import ball
    assert contains(f.evaluate(ball(x)), exact)


def test_abs_coefficient_sum_dominates_samples():
    import cmath
    f = LaurentPoly({-2: Fraction(-1), 1: Fraction(3, 5), 4: Fraction(-7, 9)})
    s = f.abs_coefficient_sum(Fraction(7, 10))
    for k in range(64):
        z = 0.7 * cmath.exp(2j * cmath.pi * k / 64)
        assert abs(-1 / z**2 + 0.6 * z - 7 / 9 * z**4) <= float(s) * (1 + 1e-12)
