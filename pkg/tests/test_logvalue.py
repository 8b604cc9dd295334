import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from entrofunc.logvalue import LogValue, lv_max, lv_sum

small = st.integers(min_value=2, max_value=60)
coef = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def test_bases_are_refined_to_a_coprime_set():
    v = LogValue.log(6) + LogValue.log(4) - LogValue.log(3)
    assert v == LogValue.log(8)
    assert v.qm() == (3, 2)
    # 6 and 10 share a factor, so they cannot stay as separate bases
    w = LogValue.log(6) + LogValue.log(10)
    assert math.gcd(*[p for p, _ in w.log_terms]) == 1 or len(w.log_terms) == 1


def test_rational_arguments():
    assert LogValue.log("256/27", "1/4") == LogValue.log(4) - LogValue.log(3, "3/4")
    assert str(LogValue.log("256/27", "1/4")) == "1/4*log 256/27"


@given(small, small)
def test_log_of_product_is_sum(a, b):
    assert LogValue.log(a * b) == LogValue.log(a) + LogValue.log(b)


@given(small, coef)
def test_float_agrees(a, q):
    assert float(LogValue.log(a, q)) == pytest.approx(float(q) * math.log(a), abs=1e-12)


@given(small, small)
def test_order_matches_floats_when_they_differ(a, b):
    x, y = LogValue.log(a), LogValue.log(b)
    assert (x < y) == (a < b)
    assert (x == y) == (a == b)


def test_exact_comparison_beyond_float_precision():
    # 2^53 + 1 vs 2^53: the logs differ below double precision
    big = 2 ** 53
    assert LogValue.log(big + 1) > LogValue.log(big)


def test_count_and_log_mix():
    v = LogValue.count(1) + LogValue.log(2)
    assert v.count_part == 1 and v.log_terms == ((2, Fraction(1)),)
    assert not v.is_pure_count
    assert v.qm() is None
    assert str(v) == "1 + log 2"


def test_infinity_absorbs():
    inf = LogValue.inf()
    assert (inf + LogValue.log(3)).is_infinite
    assert inf > LogValue.count(10 ** 9)
    assert lv_max([LogValue.zero(), inf]).is_infinite


def test_approx_is_not_exact():
    a = LogValue.approx(0.5)
    assert not a.is_exact
    assert float(a + LogValue.log(2)) == pytest.approx(0.5 + math.log(2))


def test_ratio():
    assert LogValue.log(8).ratio(LogValue.log(2)) == 3
    assert LogValue.log(3).ratio(LogValue.log(2)) is None
    assert LogValue.count(3).ratio(LogValue.count(2)) == Fraction(3, 2)


def test_sum_and_max_helpers():
    vals = [LogValue.log(2), LogValue.log(3), LogValue.count(1)]
    assert lv_sum(vals) == LogValue.log(6) + LogValue.count(1)
    assert lv_max(vals) == LogValue.log(3)


@pytest.mark.parametrize("v", [LogValue.zero(), LogValue.log(12, "2/3"), LogValue.count("5/2"),
                               LogValue.count(1) + LogValue.log(5), LogValue.inf(),
                               LogValue.approx(1.25)])
def test_json_round_trip(v):
    assert LogValue.from_json(v.to_json()) == v


def test_json_short_forms():
    assert LogValue.from_json({"q": 1, "m": 2}) == LogValue.log(2)
    assert LogValue.from_json("inf").is_infinite
    assert LogValue.from_json(3) == LogValue.count(3)


def test_high_precision():
    import mpmath
    with mpmath.workdps(50):
        assert abs(LogValue.log(3).to_mpf(200) - mpmath.log(3)) < mpmath.mpf(10) ** -45


def test_rejects_nan():
    with pytest.raises(ValueError):
        LogValue.approx(float("nan"))
