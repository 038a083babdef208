from fractions import Fraction

import pytest

from eiszeros import forms as F
from eiszeros import modular as M
from eiszeros.groups import conjugate_group, get_group, list_groups
from eiszeros.series import eisenstein_level1, evaluate, workprec


def test_gamma0_2_weight_4_combination():
    # hand solution of the 2x2 cusp-constant system: 1 at infinity, 0 at cusp 0
    f = F.build_eisenstein("Gamma0_2", 4, 40)
    assert dict(f.terms) == {1: Fraction(-1, 15), 2: Fraction(16, 15)}
    e4 = eisenstein_level1(4, 40)
    want = (e4.rescale(2).scale(16) - e4).scale(Fraction(1, 15))
    assert f.qexp.agrees_with(want)
    assert f.cusp_orders["0"] >= 1


def test_bad_weight_is_rejected():
    with pytest.raises(F.FormError):
        F.build_eisenstein("Gamma0_3", 5)
    with pytest.raises(F.FormError):
        F.build_eisenstein("SL2Z", 2)


@pytest.mark.parametrize("name", list_groups())
def test_constant_term_and_cusp_values(name):
    g = get_group(name)
    f = F.build_eisenstein(g, 8, 60)
    assert f.qexp[0] == 1 and f.qexp.lead == 0
    for c in g.cusps:
        if not c.is_infinity:
            assert f.cusp_orders[c.label] >= 1


@pytest.mark.parametrize("name", list_groups())
def test_cusp_expansion_matches_direct_evaluation(name):
    g = get_group(name)
    f = F.build_eisenstein(g, 6, 60)
    for c in g.cusps:
        if c.is_infinity:
            continue
        ser = F.cusp_expansion(f, c, 40)
        a, b, cc, d = c.scaling_matrix
        # high enough that 40 terms in q_w leave no visible tail
        with workprec(160):
            z = M.acb(complex(0.13, 2 * float(c.width)))
            tau = (z * a + b) / (z * cc + d)
            direct = f.value(tau, 160) / (z * cc + d) ** 6
            approx, _ = evaluate(ser, z, 160, y_min=1.0)
            assert abs(approx - direct).mid() < 1e-30 * max(1.0, abs(direct).mid())


@pytest.mark.parametrize("name", ["Gamma0_3", "Gamma0_6+3", "Gamma0_10"])
def test_exact_and_numeric_cusp_orders_agree(name):
    g = get_group(name)
    for w in (4, 6, 10):
        f = F.build_eisenstein(g, w, 32)
        for c in g.cusps:
            if not c.is_infinity:
                assert F.cusp_order_numeric(f, c) == f.cusp_orders[c.label]


@pytest.mark.parametrize("name", list_groups())
def test_eisenstein_invariance(name):
    g = get_group(name)
    f = F.build_eisenstein(g, 4, 60)
    pts = [a.point(sum(a.angle_range) / 2) + 0.01j for a in g.arcs[:3]]
    scale = max(abs(M.to_complex(f.value(z, 128))) for z in pts)
    assert F.invariance_defect(f.value, g, pts, 128, weight=4) < 1e-25 * max(1.0, scale)


@pytest.mark.parametrize("name", list_groups())
def test_hauptmodul_invariance(name):
    g = get_group(name)
    j = F.build_hauptmodul(g)
    pts = [a.point(sum(a.angle_range) / 2) + 0.01j for a in g.arcs[:3]]
    scale = max(abs(M.to_complex(j.value(z, 128))) for z in pts)
    assert F.invariance_defect(j.value, g, pts, 128) < 1e-25 * max(1.0, scale)


def test_klein_j_coefficients():
    j = F.build_hauptmodul("SL2Z", 10)
    assert j.qexp.lead == -1 and j.qexp[-1] == 1 and j.qexp[0] == 0
    assert [j.qexp[n] for n in (1, 2, 3)] == [196884, 21493760, 864299970]


def test_gamma0_2_hauptmodul_coefficients():
    j = F.build_hauptmodul("Gamma0_2", 10)
    assert [j.qexp[n] for n in range(-1, 4)] == [1, 0, 276, -2048, 11202]


@pytest.mark.parametrize("name", list_groups())
def test_hauptmodul_qexp_matches_values(name):
    j = F.build_hauptmodul(name)
    z = complex(0.21, 0.8)
    v, _ = evaluate(j.qexp, z, 128, y_min=0.5)
    assert abs(M.to_complex(v) - M.to_complex(j.value(z, 128))) < 1e-25


def test_hauptmodul_flip():
    j = F.build_hauptmodul("Gamma0_2", 20)
    flipped = F.conjugate_hauptmodul(j)
    assert flipped.qexp[-1] == 1
    for n in range(1, 20):
        assert flipped.qexp[n] == (-1) ** (n - 1) * j.qexp[n]
    assert flipped.qexp.agrees_with(F.build_hauptmodul("Gamma0*_4", 20).qexp)


@pytest.mark.parametrize("weight", [4, 6, 12, 20])
def test_half_period_conjugate_form(weight):
    a = F.build_eisenstein("Gamma0_2", weight, 200)
    b = F.build_eisenstein("Gamma0*_4", weight, 200)
    assert F.conjugate_form(a.qexp).agrees_with(b.qexp)
    assert conjugate_group(a.group).name == b.group.name


@pytest.mark.parametrize("big,small,m", [("Gamma0_9", "Gamma0_3", 3), ("Gamma0_12+3", "Gamma0_6+3", 2)])
@pytest.mark.parametrize("weight", [4, 8, 14])
def test_rescale_identities(big, small, m, weight):
    a = F.build_eisenstein(big, weight, 200)
    b = F.build_eisenstein(small, weight, 200)
    assert a.qexp.agrees_with(b.qexp.rescale(m), upto=200)


def test_s1_counts():
    assert F.compute_s1("SL2Z", 12) == 0
    for w in (4, 6, 8, 10):
        assert F.compute_s1("Gamma0_3", w) == 0


def test_qexp_text_is_exact():
    text = F.qexp_text(F.build_hauptmodul("Gamma0_2", 3).qexp)
    assert text.splitlines()[:4] == ["-1\t1", "0\t0", "1\t276", "2\t-2048"]
    assert "1\t65520/691" in F.qexp_text(F.build_eisenstein("SL2Z", 12, 3).qexp)
