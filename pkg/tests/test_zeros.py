import csv
import io
import math
from fractions import Fraction

import mpmath
import pytest

from eiszeros import zeros as Z
from eiszeros.groups import get_group
from eiszeros.series import eisenstein_level1, eta_quotient

RHO = complex(-0.5, math.sqrt(3) / 2)


def mp_eisenstein(k, tau, terms=200):
    # 1 - (2k / B_k) sum sigma_{k-1}(n) q^n, summed directly
    q = mpmath.exp(2j * mpmath.pi * tau)
    s = mpmath.mpf(0)
    for n in range(1, terms):
        s += mpmath.mpf(sum(d ** (k - 1) for d in range(1, n + 1) if n % d == 0)) * q ** n
    return 1 - 2 * k / mpmath.bernoulli(k) * s


def test_delta_has_no_zeros_in_a_box():
    delta = eta_quotient([[1, 24]], 80)
    assert Z.count_zeros_in_box(delta, (-0.45, 0.4, 0.6, 1.4)) == 0


def test_e4_box_around_rho():
    e4 = eisenstein_level1(4, 120)
    box = Z.Box.around(RHO, 0.05)
    assert Z.count_zeros_in_box(e4, box, precision=96) == 1
    assert Z.count_zeros_in_box(e4, Z.Box.around(RHO + 0.3j, 0.05)) == 0


def test_box_below_height_floor():
    with pytest.raises(Z.ZeroLocatorError):
        Z.count_zeros_in_box(eisenstein_level1(4, 20), (-0.1, 0.1, 1e-5, 0.2), y_min=1e-3)


def test_classify_examples():
    g = get_group("SL2Z")
    c = Z.classify_zero(RHO, complex(-744, 0), g, -744, 984)
    assert c["on_arc"] and c["j_real"] and c["in_interval"] == Z.IN_BOTH
    c = Z.classify_zero(10j, complex(1e27, 0), g, -744, 984)
    assert not c["on_arc"] and c["in_interval"] == Z.IN_HALFLINE
    c = Z.classify_zero(0.3 + 2j, complex(-5000, 0), g, -744, 984)
    assert c["in_interval"] == Z.IN_LEFT_HALFLINE
    c = Z.classify_zero(0.3 + 2j, complex(50, 3), g, -744, 984)
    assert not c["j_real"] and c["in_interval"] == Z.OUTSIDE


def test_e4_zero_at_rho():
    rep = Z.locate_zeros("SL2Z", 4)
    (z,) = rep.zeros
    assert abs(z.z - RHO) < 1e-20
    assert z.kind == "elliptic(3)" and z.on_arc and z.in_interval == Z.IN_BOTH
    assert abs(z.j_value - (-744)) < 1e-15
    assert rep.valence_found == Fraction(1, 3)


def test_e6_zero_at_i():
    (z,) = Z.locate_zeros("SL2Z", 6).zeros
    assert abs(z.z - 1j) < 1e-20 and z.elliptic_order == 2
    assert abs(z.j_value - 984) < 1e-15


def test_e8_double_zero_at_rho():
    (z,) = Z.locate_zeros("SL2Z", 8).zeros
    assert z.multiplicity == 2 and abs(z.z - RHO) < 1e-20


def test_e12_zero_against_independent_oracle():
    (z,) = Z.locate_zeros("SL2Z", 12).zeros
    assert z.kind == "boundary" and z.on_arc and z.multiplicity == 1
    # E12 = 0 forces j = 1728 * 250 / 691
    assert abs(z.j_value - (1728 * 250 / 691 - 744)) < 1e-12
    mpmath.mp.dps = 40
    tau = mpmath.mpc(z.z_ball.real.mid().str(40, radius=False), z.z_ball.imag.mid().str(40, radius=False))
    assert abs(mp_eisenstein(12, tau)) < 1e-25
    assert abs(1728 * mpmath.kleinj(tau) - 744 - z.j_value) < 1e-12


@pytest.mark.parametrize("name,weight", [("SL2Z", 30), ("Gamma0_3", 16), ("Gamma0_6+2", 10), ("Gamma0_10", 8)])
def test_zero_classes_are_distinct(name, weight):
    rep = Z.locate_zeros(name, weight)
    js = [z.j_value for z in rep.zeros]
    for a in range(len(js)):
        for b in range(a):
            assert abs(js[a] - js[b]) > 1e-8 * max(1.0, abs(js[a]))
    g = rep.group
    assert all(g.contains(z.z, tol=1e-9) for z in rep.zeros)
    assert rep.valence_found == rep.valence_expected


def test_sweep_rows():
    rows = Z.sweep("SL2Z", [4, 12, 16])
    assert [r["weight"] for r in rows] == [4, 12, 16]
    assert all(r["off_arc"] == 0 for r in rows)


def test_precision_floor():
    with pytest.raises(ValueError):
        Z.locate_zeros("SL2Z", 4, precision=32)


def test_csv_layout_and_stability():
    reps = [Z.locate_zeros("SL2Z", 12), Z.locate_zeros("Gamma0_3", 10)]
    a = Z.write_csv(reps)
    b = Z.write_csv(reps)
    assert a == b
    rows = list(csv.reader(io.StringIO(a)))
    assert tuple(rows[0]) == Z.CSV_HEADER
    assert len(rows) == 1 + sum(len(r.zeros) for r in reps)
    assert rows[1][:2] == ["SL2Z", "12"] and rows[1][7] == "true"
    # Newton stops at 2^-64, so about 17 digits are printed at 128 bits
    assert len(rows[1][2].lstrip("-0.")) >= 15
