"""Soundness of the certified ball arithmetic.

The key property is enclosure: for inputs whose balls contain given rational
numbers, the output ball must contain the exact rational result.  Hypothesis
drives the enclosure checks over random rationals.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from sunorm.certreal import CReal, ball_max, ball_sum, mpf_to_fraction, working_precision
from sunorm.errors import PrecisionError

rationals = st.fractions(
    min_value=Fraction(-1000), max_value=Fraction(1000), max_denominator=997
)


def contains(ball: CReal, q: Fraction) -> bool:
    return abs(mpf_to_fraction(ball.mid) - q) <= mpf_to_fraction(ball.rad)


def test_exact_constructions():
    with working_precision(200):
        assert CReal.from_fraction(Fraction(1, 2)).rad == 0
        assert CReal.from_fraction(Fraction(0)).rad == 0
        assert CReal.from_decimal("2").rad == 0
        assert CReal.from_decimal("0").rad == 0
        assert CReal.from_decimal("0.5000").rad > 0  # printed decimals carry one ulp
        third = CReal.from_fraction(Fraction(1, 3))
        assert third.rad > 0
        assert contains(third, Fraction(1, 3))


def test_decimal_radius_scale():
    with working_precision(200):
        x = CReal.from_decimal("0.123456")
        assert float(x.rad) <= 1.1e-6
        y = CReal.from_decimal("-0.8813735870195430252326093249797923090281603282616354")
        assert float(y.rad) <= 1.1e-52
        assert float(y.mid) == pytest.approx(-0.881373587019543)


def test_bad_decimal_rejected():
    with working_precision(200):
        with pytest.raises(ValueError):
            CReal.from_decimal("1e-3")
        with pytest.raises(ValueError):
            CReal.from_decimal("abc")


@settings(max_examples=200, deadline=None)
@given(a=rationals, b=rationals)
def test_enclosure_add_sub_mul(a, b):
    with working_precision(120):
        xa, xb = CReal.from_fraction(a), CReal.from_fraction(b)
        assert contains(xa + xb, a + b)
        assert contains(xa - xb, a - b)
        assert contains(xa * xb, a * b)
        assert contains(abs(xa), abs(a))
        assert contains(xa.scale(Fraction(3, 7)), a * Fraction(3, 7))


@settings(max_examples=200, deadline=None)
@given(a=rationals, b=rationals.filter(lambda q: abs(q) > Fraction(1, 50)))
def test_enclosure_div(a, b):
    with working_precision(120):
        xa, xb = CReal.from_fraction(a), CReal.from_fraction(b)
        assert contains(xa / xb, a / b)


@settings(max_examples=100, deadline=None)
@given(a=rationals.filter(lambda q: q >= 0))
def test_enclosure_square(a):
    with working_precision(120):
        xa = CReal.from_fraction(a)
        assert contains(xa.pow_pos(2), a * a)


def test_division_through_zero_rejected():
    with working_precision(120):
        wide = CReal(mpf(0), mpf("0.5"))
        with pytest.raises(PrecisionError):
            CReal.from_fraction(Fraction(1)) / wide


def test_log_pos_encloses():
    with working_precision(200):
        x = CReal.from_fraction(Fraction(7))
        lg = x.log_pos()
        with mp.workprec(400):
            truth = mp.ln(7)
        assert abs(lg.mid - truth) <= lg.rad + mpf(10) ** -55
        with pytest.raises(PrecisionError):
            CReal(mpf("1e-60"), mpf("1e-59")).log_pos()


def test_log_int_matches_high_precision():
    with working_precision(200):
        lg = CReal.log_int(2)
    with mp.workprec(420):
        truth = mp.ln(2)
    assert abs(lg.mid - truth) <= lg.rad + mpf(10) ** -58


def test_sign_and_eq3():
    with working_precision(120):
        a = CReal.from_fraction(Fraction(1, 3))
        b = CReal.from_fraction(Fraction(1, 3))
        c = CReal.from_fraction(Fraction(2, 3))
        assert a.eq3(b) is True          # bit-identical construction
        assert a.eq3(c) is False
        wide = CReal(a.mid, mpf("1e-3"))
        near = CReal(a.mid + mpf("1e-9"), mpf("1e-3"))
        assert wide.eq3(near) is None
        assert CReal.zero().sign() == 0
        assert c.sign() == 1
        assert (-c).sign() == -1
        assert wide.sign() is None or wide.sign() == 1


def test_ball_sum_order_independent():
    with working_precision(120):
        items = [CReal.from_fraction(Fraction(i, 7)) for i in (3, -2, 5, -1)]
        s1 = ball_sum(items)
        s2 = ball_sum(list(reversed(items)))
        assert s1.mid == s2.mid and s1.rad == s2.rad


def test_ball_max():
    with working_precision(120):
        a = CReal.from_fraction(Fraction(1, 3))
        b = CReal.from_fraction(Fraction(1, 2))
        m = ball_max([a, b])
        assert contains(m, Fraction(1, 2))


def test_mpf_to_fraction_roundtrip():
    with working_precision(120):
        x = mpf("1.375")
        assert mpf_to_fraction(x) == Fraction(11, 8)
        assert mpf_to_fraction(mpf(0)) == 0
