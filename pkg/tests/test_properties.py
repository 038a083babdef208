"""Randomized checks of the exact series layer."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from eiszeros.series import QSeries

coeff = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@st.composite
def series(draw, width=1, length=12):
    cs = draw(st.lists(coeff, min_size=1, max_size=length))
    return QSeries.from_coeffs(cs, lead=draw(st.integers(-3, 3)), width=width)


@given(series())
def test_half_period_shift_is_an_involution(f):
    assert f.half_period_shift().half_period_shift() == f


@given(series(), series())
def test_half_period_shift_respects_sum_and_product(f, g):
    s = f.half_period_shift
    assert (f + g).half_period_shift() == s() + g.half_period_shift()
    assert (f * g).half_period_shift() == s() * g.half_period_shift()


@given(series(), series(), st.integers(1, 4))
def test_rescale_is_a_ring_map(f, g, m):
    assert (f * g).rescale(m) == f.rescale(m) * g.rescale(m)
    assert (f + g).rescale(m) == f.rescale(m) + g.rescale(m)


@given(series(), st.integers(1, 3))
def test_rescale_then_truncate_keeps_coefficients(f, m):
    g = f.rescale(m)
    for n, c in f.items():
        assert g[m * n] == c


@settings(max_examples=50)
@given(st.lists(coeff, min_size=2, max_size=10).filter(lambda cs: cs[0] != 0))
def test_reciprocal(cs):
    f = QSeries.from_coeffs(cs)
    prod = f * f.reciprocal()
    assert prod[0] == 1 and all(prod[n] == 0 for n in range(1, f.max_exponent + 1))


@given(series(), st.integers(2, 6))
def test_power_matches_repeated_product(f, k):
    acc = f
    for _ in range(k - 1):
        acc = acc * f
    assert f ** k == acc


def test_shift_on_known_series():
    f = QSeries.from_coeffs([Fraction(1), Fraction(-24), Fraction(252)], lead=1)
    assert [f.half_period_shift()[n] for n in (1, 2, 3)] == [-1, -24, -252]
