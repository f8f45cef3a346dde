from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qhcurves.errors import NonUnitDenominator, NotInvertible, OrderTooLow, SchemaError
from qhcurves.series import (INFINITY, UNKNOWN, MultiSeries, TruncatedSeries,
                             expand_rational_function, format_rational, invert_to, rational,
                             series_arith, series_tdt)

small = st.integers(-6, 6)


@st.composite
def series(draw, exact=None, min_low=0):
    low = draw(st.integers(min_low, 4))
    coeffs = draw(st.lists(small, min_size=0, max_size=6))
    if exact is None:
        exact = draw(st.booleans())
    order = None if exact else low + draw(st.integers(0, 8))
    return TruncatedSeries(low, tuple(coeffs), order)


def as_dict(s):
    return {e: Fraction(int(c.numerator), int(c.denominator)) for e, c in s.terms().items()}


def agree(a, b):
    """Equal on every coefficient known for both."""
    cut = min(x for x in (a.order, b.order, 10**6) if x is not None)
    da = {e: c for e, c in as_dict(a).items() if e < cut}
    db = {e: c for e, c in as_dict(b).items() if e < cut}
    return da == db


def test_rational_rejects_floats():
    with pytest.raises(SchemaError):
        rational(0.5)
    with pytest.raises(SchemaError):
        rational(True)
    assert rational("-3/6") == Fraction(-1, 2)
    assert format_rational(rational("4/2")) == "2"
    assert format_rational(rational("-3/4")) == "-3/4"


def test_exact_zero_and_unknown_valuation():
    assert TruncatedSeries.zero().exact_zero
    assert TruncatedSeries.zero().valuation() == INFINITY
    z = TruncatedSeries(0, (0, 0), 5)
    assert z.is_zero_to_order and not z.exact_zero
    assert z.valuation() is UNKNOWN


def test_truncate_cannot_raise_order():
    s = TruncatedSeries(0, (1, 1), 4)
    with pytest.raises(OrderTooLow):
        s.truncate(6)
    with pytest.raises(OrderTooLow):
        s.coefficient(4)


def test_product_order_tracks_valuations():
    # (t^2 + O(t^5)) * (t^3 + O(t^4)) is known modulo t^6
    a = TruncatedSeries(2, (1,), 5)
    b = TruncatedSeries(3, (1,), 4)
    p = a * b
    assert p.order == 6 and p.terms() == {5: 1}


@given(series(), series(), series())
def test_ring_laws(a, b, c):
    assert agree((a + b) + c, a + (b + c))
    assert agree(a * b, b * a)
    assert agree((a * b) * c, a * (b * c))
    assert agree(a * (b + c), a * b + a * c)


@settings(deadline=None, max_examples=40)
@given(series(exact=True), series(exact=True))
def test_exact_product_matches_sympy(a, b):
    t = sympy.Symbol("t")

    def poly(s):
        return sum(sympy.Rational(int(c.numerator), int(c.denominator)) * t**e
                   for e, c in s.terms().items())

    expected = sympy.Poly(sympy.expand(poly(a) * poly(b)), t).as_dict() if (a.terms() and b.terms()) else {}
    got = {(e,): sympy.Rational(int(c.numerator), int(c.denominator)) for e, c in (a * b).terms().items()}
    assert got == {k: v for k, v in expected.items()}


@given(st.lists(small, min_size=1, max_size=5).filter(lambda c: c[0] != 0),
       st.integers(1, 12))
def test_unit_inverse(coeffs, order):
    u = TruncatedSeries(0, tuple(coeffs), order)
    inv = series_arith(u, None, "invert-unit")
    one = u * inv
    assert one.order == order
    assert one.terms() == {0: 1}


def test_invert_exact_monomial_and_failure():
    m = TruncatedSeries.monomial(3, 2)
    assert series_arith(m, None, "invert").terms() == {-3: Fraction(1, 2)}
    with pytest.raises(NotInvertible):
        series_arith(TruncatedSeries.zero(5), None, "invert")
    with pytest.raises(NotInvertible):
        series_arith(TruncatedSeries(0, (1, 1)), None, "invert")
    assert (invert_to(TruncatedSeries(0, (1, 1)), 5)).terms() == {0: 1, 1: -1, 2: 1, 3: -1, 4: 1}


@given(st.lists(small, max_size=6), st.lists(small, min_size=1, max_size=4).filter(lambda q: q[0] != 0),
       st.integers(1, 12))
def test_rational_expansion_solves_q_times_s_equals_p(p, q, order):
    got = expand_rational_function(p, q, order)
    s = [Fraction(0)] * order
    for e, c in as_dict(got).items():
        s[e] = c
    for k in range(order):
        lhs = sum(Fraction(q[j]) * s[k - j] for j in range(min(k, len(q) - 1) + 1))
        assert lhs == (p[k] if k < len(p) else 0)


@pytest.mark.parametrize("p,q", [([0, 0, 0, 0, 0, 1], [1, -1]), ([1, 2], [3, 0, -1]), ([2], [1, 1, 1])])
def test_rational_expansion_matches_sympy(p, q):
    t = sympy.Symbol("t")
    num = sum(c * t**k for k, c in enumerate(p))
    den = sum(c * t**k for k, c in enumerate(q))
    ref = sympy.series(num / den, t, 0, 10).removeO()
    expected = {k[0]: v for k, v in sympy.Poly(ref, t).as_dict().items()}
    got = expand_rational_function(p, q, 10)
    assert {e: sympy.Rational(int(c.numerator), int(c.denominator))
            for e, c in got.terms().items()} == expected


def test_rational_expansion_denominator_must_be_unit():
    with pytest.raises(NonUnitDenominator):
        expand_rational_function([1], [0, 1], 5)
    exact = expand_rational_function([0, 1, 2], [2], None)
    assert exact.exact and exact.terms() == {1: Fraction(1, 2), 2: 1}


def test_appendix_jet():
    x = expand_rational_function([0, 0, 0, 0, 0, 1], [1, -1], 8)
    assert series_tdt(x).terms() == {5: 5, 6: 6, 7: 7}


@settings(max_examples=50)
@given(series(), series())
def test_tdt_is_a_derivation(a, b):
    assert agree(series_tdt(a * b), series_tdt(a) * b + a * series_tdt(b))


def test_multiseries_vector_roundtrip():
    x = MultiSeries.of(TruncatedSeries(1, (1, 2)), TruncatedSeries.zero())
    assert x.valuation() == (1, INFINITY)
    assert not x.is_nonzerodivisor()
    vec = x.to_vector((5, 5))
    assert vec == {(1, 0): 1, (2, 0): 2}
    assert MultiSeries.from_vector(vec, 2) == x
    with pytest.raises(OrderTooLow):
        MultiSeries.of(TruncatedSeries(0, (1,), 3)).to_vector((4,))
