import pytest

from eiszeros import divpoly as D
from eiszeros.zeros import locate_zeros


def test_empty_root_set_gives_one():
    p = D.from_roots([])
    assert p.coefficients == (1,) and p.degree == 0 and p.numeric_roots() == []


def test_expand_matches_hand_product():
    # (X - 2)^2 (X + 1) = X^3 - 3X^2 + 4
    p = D.from_roots([(2, 2), (-1, 1)])
    assert [c.real for c in p.coefficients] == [1, -3, 0, 4]
    assert abs(p(2)) < 1e-30 and abs(p(3) - 4 * 1) < 1e-12


def test_conjugation_identity_on_reflected_roots():
    p = D.from_roots([(3, 1), (-7.5, 2), (1 + 2j, 1), (1 - 2j, 1)])
    q = D.from_roots([(-3, 1), (7.5, 2), (-1 - 2j, 1), (-1 + 2j, 1)])
    assert D.conjugation_identity_check(p, q)
    assert D.conjugation_identity_check(q, p)


def test_conjugation_identity_detects_a_moved_root():
    p = D.from_roots([(3, 1), (-7.5, 2)])
    q = D.from_roots([(-3, 1), (7.5 + 1e-6, 2)])
    assert not D.conjugation_identity_check(p, q)


def test_conjugation_identity_degree_mismatch():
    with pytest.raises(D.DegreeMismatch):
        D.conjugation_identity_check(D.from_roots([(1, 1)]), D.from_roots([(1, 2)]))


def test_conjugation_identity_convention_mismatch():
    a = D.from_roots([(1, 1)], convention="reduced")
    b = D.from_roots([(-1, 1)], convention="winding")
    with pytest.raises(ValueError):
        D.conjugation_identity_check(a, b)


def test_unknown_convention():
    with pytest.raises(ValueError):
        D.from_zeros(locate_zeros("SL2Z", 4), convention="other")


def test_sl2z_weight_4():
    p = D.from_zeros(locate_zeros("SL2Z", 4), "winding")
    assert p.degree == 1 and abs(p.coefficients[1] - 744) < 1e-20
    # the elliptic zero has multiplicity 1 < 3, so it drops out of the reduced polynomial
    assert D.from_zeros(locate_zeros("SL2Z", 4)).degree == 0


def test_sl2z_weight_12_real_coefficients():
    p = D.from_zeros(locate_zeros("SL2Z", 12))
    assert p.degree == 1
    assert all(abs(c.imag) < 1e-20 for c in p.coefficients)


@pytest.mark.parametrize("name,weight", [("SL2Z", 40), ("Gamma0_3", 30), ("Gamma0_6+2", 16)])
def test_round_trip_through_coefficients(name, weight):
    p = D.from_zeros(locate_zeros(name, weight))
    got = sorted(p.numeric_roots(), key=lambda r: (r.real, r.imag))
    want = sorted((r for r, m in p.root_multiset() for _ in range(m)), key=lambda r: (r.real, r.imag))
    assert len(got) == len(want)
    for a, b in zip(got, want):
        assert abs(a - b) < 1e-8 * max(1.0, abs(b))


def test_rescale_with_factor_one_is_identity():
    r = locate_zeros("Gamma0_3", 12)
    assert D.rescale_identity_check(r, r, 1)


def test_rescale_cardinality_mismatch():
    with pytest.raises(D.CardinalityMismatch):
        D.rescale_identity_check(locate_zeros("Gamma0_3", 12), locate_zeros("Gamma0_3", 24), 1)


@pytest.mark.parametrize("weight", [4, 10, 16])
def test_gamma0_2_and_its_conjugate(weight):
    for conv in D.CONVENTIONS:
        p = D.from_zeros(locate_zeros("Gamma0_2", weight), conv)
        q = D.from_zeros(locate_zeros("Gamma0*_4", weight), conv)
        assert D.conjugation_identity_check(p, q)
