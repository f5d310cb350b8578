from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings, strategies as st

import oracles
from intersum.germ import (GermError, HomogeneousComponent, MeromorphicGerm, PoleError, Series, bernoulli_number,
                           bernoulli_value, clear_to_denominator, exp_series, germ_with_symbol_T,
                           inv_one_minus_exp, lowest_nonzero_degree, todd_numerator)

x = sympy.Symbol("x")
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=6)


def test_bernoulli_numbers_match_sympy():
    for n in range(12):
        expected = sympy.bernoulli(n, x).subs(x, 0)
        assert bernoulli_number(n) == F(str(expected))
    assert bernoulli_number(1) == F(-1, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 8), rationals)
def test_bernoulli_polynomials(n, t):
    assert bernoulli_value(n, t) == oracles.bernoulli(n, t)


def test_bernoulli_reflection():
    for n in range(8):
        for u in (F(0), F(1, 3), F(5, 7)):
            assert bernoulli_value(n, 1 - u) == (-1) ** n * bernoulli_value(n, u)


def test_series_arithmetic():
    a = Series.xi(2, 0) + Series.const(2, 1)
    b = Series.xi(2, 1) - Series.const(2, 2)
    p = a * b
    assert p.evaluate((F(3), F(5))) == 4 * 3
    assert p.truncate(1).xi_degree() == 1
    assert a.pow(3).evaluate((F(1), F(0))) == 8
    assert (a - a).is_zero()
    sq = Series.linear_form((1, 1)).pow(2)
    assert sq.homogeneous(2) == sq


def test_symbols_and_substitution():
    f = Series.symbol(2, ("f", (1, -1)))
    s0 = Series.symbol(2, ("s", 0))
    e = f * Series.xi(2, 0) + s0
    assert e.symbols() == {("f", (1, -1)), ("s", 0)}
    out = e.subs({("f", (1, -1)): F(1, 3), ("s", 0): F(2)})
    assert out.symbols() == set()
    assert out.evaluate((F(3), F(0))) == 3


def test_divide_linear_exact_and_pole():
    w = (1, -1)
    q = Series.linear_form(w) * (Series.xi(2, 0) + Series.const(2, 2))
    assert q.divide_linear(w) == Series.xi(2, 0) + Series.const(2, 2)
    with pytest.raises(PoleError):
        Series.xi(2, 0).divide_linear(w)


def test_linear_substitute():
    s = Series.linear_form((2, 3))
    out = s.linear_substitute([[1, 0], [1, 1]])
    assert out == Series.linear_form((5, 3))


@pytest.mark.parametrize("w", [(1, 0), (2, -1), (-1, 3)])
def test_todd_numerator_against_laurent(w):
    xi = (F(1, 2), F(3))
    b = sum(F(a) * c for a, c in zip(w, xi))
    ref = oracles.inv_one_minus_exp(b, 5)
    N = todd_numerator(w, 6)
    for k in range(-1, 5):
        assert N.homogeneous(k + 1).evaluate(xi) / b == ref.coeff(k)


def test_exp_series():
    e = exp_series(Series.linear_form((1, 2)), 5)
    ref = oracles.exp_lin(F(7), 5)
    for k in range(6):
        assert e.homogeneous(k).evaluate((F(3), F(2))) == ref.coeff(k)


def test_germ_product_matches_laurent():
    d = 2
    a = inv_one_minus_exp((1, 0), 3)
    b = inv_one_minus_exp((1, 1), 3)
    g = a * b
    xi = (F(2), F(-1, 3))
    ref = oracles.inv_one_minus_exp(F(2), 5) * oracles.inv_one_minus_exp(F(5, 3), 5)
    assert g.order == min(a.order - 1, b.order - 1)
    for m in range(-2, g.order + 1):
        assert g.component(m).evaluate(xi) == ref.coeff(m)
    assert g.max_poles == d
    assert lowest_nonzero_degree(g) == -2


def test_component_clearing_and_reduction():
    h = HomogeneousComponent.combine(2, -1, [(((1, 0),), Series.const(2, 1)), (((0, 1),), Series.const(2, 1))])
    assert h.evaluate((F(1), F(2))) == F(3, 2)
    cleared = clear_to_denominator(h, [(1, 0), (0, 1), (1, 1)])
    assert cleared.equals(h)
    with pytest.raises(PoleError):
        h.clear_to([(1, 0)])
    with pytest.raises(GermError):
        h.evaluate((F(0), F(1)))
    r = HomogeneousComponent(2, 0, ((1, 1),), Series.linear_form((2, 2))).reduced()
    assert r.denoms == () and r.evaluate((F(5), F(7))) == 2


def test_symbol_T_germ_lowest_degree():
    # 1/(ξ1 ξ2) shifted by T(1,0): only ξ2 stays a pole
    g = germ_with_symbol_T([(F(1), ((1, 0), (0, 1)))], (1, 0), 1)
    assert lowest_nonzero_degree(g) == -1
    T = 2j * 3.141592653589793
    val = g.component(-1).evaluate((F(1), F(1)), {("T",): T})
    assert abs(val - 1 / T) < 1e-12


def test_from_series_and_one():
    one = MeromorphicGerm.one(2, 3)
    assert one.component(0).evaluate((F(1), F(1))) == 1
    assert one.component(1).is_zero()
    g = MeromorphicGerm.from_series(Series.linear_form((1, 1)), 2)
    assert g.component(1).evaluate((F(1), F(2))) == 3
