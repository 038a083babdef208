import math
from fractions import Fraction

import mpmath
import pytest

from eiszeros import geometry as geo
from eiszeros import groups as G

# (group, c) as found by the sign-change scan; frozen after checking that
# 2048 and 8192 samples agree.
C_VALUES = {
    "SL2Z": 0, "Gamma0_3": 1, "Gamma0_4": 1, "Gamma0_5": 2, "Gamma0_6+2": 0,
    "Gamma0_6+3": 2, "Gamma0_7": 4, "Gamma0_9": 4, "Gamma0_10": 5,
    "Gamma0_10+2": 2, "Gamma0*_11": 1, "Gamma0_12+3": 3,
}

# a0, a1 for the acceptable groups; SL2Z follows from j(rho)=0, j(i)=1728.
BOUNDARY = {
    "SL2Z": (-744, 984),
    "Gamma0_2": (-40, 24),
    "Gamma0_3": (-15, 12),
    "Gamma0*_4": (-24, 40),
    "Gamma0_4": (-8, 8),
}


def test_shipped_registry_matches_rebuild():
    import json
    from importlib import resources
    shipped = json.loads((resources.files("eiszeros") / "data" / G.REGISTRY_FILE).read_text())
    assert shipped == json.loads(json.dumps(G.build_registry()))


def test_unknown_group():
    with pytest.raises(G.RegistryError):
        G.get_group("Gamma0_13")


def test_sl2z_descriptor():
    g = G.get_group("SL2Z")
    assert g.h == 1 and g.index == 1 and g.acceptable
    assert abs(g.y0 - math.sqrt(3) / 2) < 1e-15 and g.y1 == 1
    for t in (0.1, 0.7, 1.3):
        z = g.arcs[0].point(math.pi / 3 + t * math.pi / 4.5)
        assert abs(abs(z) - 1) < 1e-14


def test_six_plus_two_is_not_acceptable():
    g = G.get_group("Gamma0_6+2")
    assert g.atkin_lehner == (2,) and not g.acceptable


def hyperbolic_area(g):
    # int dx / sqrt(r^2 - (x - c)^2) over each arc, in closed form
    def angle(a, x):
        u = x - a.center
        return math.atan2(float(u), math.sqrt(a.radius_sq - u * u))

    return sum(angle(a, a.x_end) - angle(a, a.x_start) for a in g.arcs)


@pytest.mark.parametrize("name", G.list_groups())
def test_area_matches_index(name):
    # hyperbolic area of F is (pi/3) * index
    g = G.get_group(name)
    assert sum(a.x_end - a.x_start for a in g.arcs) == g.width
    assert abs(hyperbolic_area(g) - math.pi / 3 * float(g.index)) < 1e-12


@pytest.mark.parametrize("name", ["SL2Z", "Gamma0*_11"])
def test_area_by_quadrature(name):
    # same area from the floor function itself; these have no cusp on the real line
    g = G.get_group(name)
    mpmath.mp.dps = 20
    xs = sorted(set(g.vertices()) | {0.0})
    area = sum(mpmath.quad(lambda x: 1 / g.floor(float(x)), [a, b])
               for a, b in zip(xs, xs[1:]))
    assert abs(float(area) - math.pi / 3 * float(g.index)) < 1e-6


@pytest.mark.parametrize("name", G.list_groups())
def test_gauss_bonnet(name):
    # genus zero: index = 6 (-2 + cusps + sum (1 - 1/e))
    g = G.get_group(name)
    total = -2 + len(g.cusps) + sum(Fraction(e.order - 1, e.order) for e in g.elliptic)
    assert 6 * total == g.index


@pytest.mark.parametrize("name", [n for n in G.list_groups() if G.get_group(n).atkin_lehner == ()])
def test_cusp_widths_sum_to_index(name):
    g = G.get_group(name)
    assert sum(c.width for c in g.cusps) == g.index


@pytest.mark.parametrize("name", ["SL2Z", "Gamma0_3", "Gamma0_6+2", "Gamma0*_11"])
def test_reduce_round_trip(name):
    g = G.get_group(name)
    for z in (complex(0.31, 0.004), complex(-2.7, 0.02), complex(0.05, 0.3)):
        w, m = g.reduce(z)
        assert g.contains(w, tol=1e-9)
        assert geo.in_group(m, g.level, g.atkin_lehner)
        assert abs(geo.mobius(m, z) - w) < 1e-9 * max(1, abs(w))


@pytest.mark.parametrize("name", G.list_groups())
def test_elliptic_points_are_fixed(name):
    g = G.get_group(name)
    for e in g.elliptic:
        assert G.stabilizer_order(g.level, g.atkin_lehner, g.width, e.point) == e.order


@pytest.mark.parametrize("name,expected", sorted(BOUNDARY.items()))
def test_boundary_values(name, expected):
    a0, a1 = G.compute_a0_a1(G.get_group(name))
    assert abs(a0 - expected[0]) < 1e-20 * 1000 and abs(a1 - expected[1]) < 1e-20 * 1000


@pytest.mark.parametrize("name,c", sorted(C_VALUES.items()))
def test_compute_c(name, c):
    assert G.compute_c(G.get_group(name)) == c


def test_c_minus_s1_for_sl2z_and_gamma0_3():
    from eiszeros.forms import compute_s1
    for name, want in (("SL2Z", 0), ("Gamma0_3", 1)):
        g = G.get_group(name)
        for w in (4, 6, 8, 10, 12):
            assert G.compute_c(g) - compute_s1(g, w) == want


def test_conjugate_of_gamma0_2():
    g = G.get_group("Gamma0_2")
    c = G.conjugate_group(g)
    assert c.name == "Gamma0*_4"
    assert c.y0_sq == g.y1_sq and c.y1_sq == g.y0_sq
    assert abs(hyperbolic_area(c) - hyperbolic_area(g)) < 1e-12
