from fractions import Fraction

import flint
import pytest

from eiszeros import series as S
from eiszeros.series import QSeries, SeriesError


def naive_sigma(k, n):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def naive_euler_product(order):
    # prod (1 - q^n) by repeated polynomial multiplication
    c = [1] + [0] * order
    for n in range(1, order + 1):
        new = c[:]
        for i in range(n, order + 1):
            new[i] -= c[i - n]
        c = new
    return c


def test_divisor_power_sums_match_naive():
    got = S.divisor_power_sums(3, 60)
    assert all(got[n] == naive_sigma(3, n) for n in range(1, 61))


@pytest.mark.parametrize("weight,factor", [(4, 240), (6, -504), (8, 480), (10, -264)])
def test_level_one_eisenstein_coefficients(weight, factor):
    e = S.eisenstein_level1(weight, 40)
    assert e[0] == 1
    assert all(e[n] == factor * naive_sigma(weight - 1, n) for n in range(1, 41))


def test_e12_normalization_uses_bernoulli():
    e = S.eisenstein_level1(12, 5)
    assert e[1] == Fraction(65520, 691)
    assert S.bernoulli(12) == Fraction(-691, 2730)


def test_eta_expansion_matches_naive_product():
    assert list(S.eta_expansion(80).coeffs) == [Fraction(c) for c in naive_euler_product(80)]


def test_eta_quotient_delta():
    delta = S.eta_quotient([[1, 24]], 30)
    assert delta.lead == 1
    tau = [delta[n] for n in range(1, 8)]
    assert tau == [1, -24, 252, -1472, 4830, -6048, -16744]


def test_eta_quotient_rejects_fractional_exponent():
    with pytest.raises(SeriesError):
        S.eta_quotient([[1, 1]], 10)


def test_reciprocal_beyond_default_flint_cap():
    # flint truncates series at a global cap; long inverses must not be cut short
    e4 = S.eisenstein_level1(4, 60)
    prod = e4 * e4.reciprocal()
    assert prod[0] == 1
    assert all(prod[n] == 0 for n in range(1, 61))


def test_delta_from_e4_e6():
    e4, e6 = S.eisenstein_level1(4, 30), S.eisenstein_level1(6, 30)
    delta = (e4 ** 3 - e6 ** 2).scale(Fraction(1, 1728))
    assert delta.agrees_with(S.eta_quotient([[1, 24]], 30))


def test_half_period_shift_signs():
    f = QSeries.from_coeffs([1, 2, 3, 4], lead=-1)
    g = f.half_period_shift()
    assert [g[n] for n in range(-1, 3)] == [-1, 2, -3, 4]


def test_rescale_exponents():
    f = QSeries.from_coeffs([1, 5, 7])
    g = f.rescale(3)
    assert g[0] == 1 and g[3] == 5 and g[6] == 7 and g[1] == 0


def test_rescale_rejects_fractional_exponent():
    f = QSeries.from_coeffs([1, 5], width=3)
    with pytest.raises(SeriesError):
        f.rescale(1, Fraction(1, 2))


def test_width_mismatch_is_an_error():
    with pytest.raises(SeriesError):
        QSeries.from_coeffs([1, 1], width=1) + QSeries.from_coeffs([1, 1], width=2)


def test_evaluate_matches_closed_form():
    # sum q^n = q / (1 - q) truncated; compare against a long geometric sum
    f = QSeries.from_coeffs([0] + [1] * 200)
    z = complex(0.2, 0.7)
    v, tail = S.evaluate(f, z, 128)
    with S.workprec(128):
        q = (flint.acb(z.real, z.imag) * 2).exp_pi_i()
        exact = q / (1 - q)
        assert abs(v - exact).mid() < 1e-35  # 128 bits ~ 3e-39 relative
    assert tail < 1e-100


def test_evaluate_rejects_low_points():
    with pytest.raises(SeriesError):
        S.evaluate(QSeries.from_coeffs([1, 1]), complex(0, 0.01), 64, y_min=0.05)
