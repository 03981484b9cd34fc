import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from tritronquee.certificates import CertificateFailed
from tritronquee.grid_bounds import (GridFunction, HandleDomainError, NonIntegrable, certify_positive, grid,
                                     l2_deriv_exact, sup_bound, sup_bound_within)
from tritronquee.laurent import LaurentPoly
from tritronquee.scalars import lower, upper


def true_max_abs(coeffs, a, b):
    """max |f| on [a, b] from the exact real roots of f' (sympy)."""
    x = sp.Symbol("x")
    f = sum(sp.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(coeffs))
    cands = [sp.Rational(a.numerator, a.denominator), sp.Rational(b.numerator, b.denominator)]
    fp = sp.Poly(sp.diff(f, x), x)
    if fp.degree() > 0:
        cands += [r for r in sp.real_roots(fp) if a <= r <= b]
    return max(abs(sp.N(f.subs(x, c), 50)) for c in cands)


def random_poly(rng):
    deg = rng.randint(1, 7)
    return [Fraction(rng.randint(-200, 200), rng.randint(1, 50)) for _ in range(deg + 1)]


def run_soundness(count=50, seed=314159):
    rng = random.Random(seed)
    results = []
    for _ in range(count):
        coeffs = random_poly(rng)
        a = Fraction(rng.randint(-30, 10), 10)
        b = a + Fraction(rng.randint(1, 40), 10)
        n = rng.randint(2, 24)
        f = GridFunction.from_poly(LaurentPoly.from_coefficients(coeffs))
        bound = sup_bound(f, a, b, n)
        results.append(bool(upper(bound) >= true_max_abs(coeffs, a, b)))
    return results


def test_sup_bound_soundness_random_polynomials():
    assert all(run_soundness())


def test_linear_function_bound_is_endpoint_max():
    f = GridFunction.from_poly(LaurentPoly({0: Fraction(1, 3), 1: Fraction(-2)}))
    # on one piece: mean of endpoint values plus half the spread equals the larger endpoint exactly
    b = sup_bound(f, Fraction(0), Fraction(1), 1)
    assert upper(b) - Fraction(5, 3) < Fraction(1, 10**30)
    assert lower(b) <= Fraction(5, 3)


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=9), min_size=2, max_size=6),
       st.integers(min_value=1, max_value=12))
def test_refinement_does_not_loosen(coeffs, n):
    f = GridFunction.from_poly(LaurentPoly.from_coefficients(coeffs))
    a, b = Fraction(-1), Fraction(2)
    coarse, fine = sup_bound(f, a, b, n), sup_bound(f, a, b, 2 * n)
    assert upper(fine) <= upper(coarse) + Fraction(1, 10**25)


def test_positivity_certificate_and_failure():
    f = GridFunction.from_poly(LaurentPoly({0: Fraction(1, 100), 2: Fraction(1)}), "f")
    cert = certify_positive(f, Fraction(-1), Fraction(1), 4)
    assert cert.passed and cert.details["n_used"] >= 4
    g = GridFunction.from_poly(LaurentPoly({0: Fraction(-1, 100), 2: Fraction(1)}), "g")
    with pytest.raises(CertificateFailed) as info:
        certify_positive(g, Fraction(-1), Fraction(1), 4, max_n=64)
    assert info.value.index is not None


def test_sup_bound_within_reports_n():
    f = GridFunction.from_poly(LaurentPoly.from_coefficients([Fraction(0), Fraction(0), Fraction(1)]))
    bound, n = sup_bound_within(f, Fraction(0), Fraction(1), 1, Fraction(101, 100))
    assert upper(bound) <= Fraction(101, 100) and n >= 2


def test_handles_refuse_the_singular_side():
    f = GridFunction.from_poly(LaurentPoly({-2: Fraction(1)}, Fraction(0)), "inv")
    with pytest.raises(HandleDomainError):
        f.value(Fraction(-1))
    with pytest.raises(NonIntegrable):
        l2_deriv_exact(LaurentPoly({-2: Fraction(1)}), Fraction(-1), Fraction(1))


def test_grid_nodes_exact():
    nodes = grid(Fraction(-49, 100), Fraction(11, 2), 20)
    assert nodes[0] == Fraction(-49, 100) and nodes[-1] == Fraction(11, 2) and len(nodes) == 21
    with pytest.raises(ValueError):
        grid(1, 0, 3)
