"""Eisenstein series for the cusp at infinity and canonical hauptmoduls.

``E_w^G`` is assembled from the old forms ``E_w(dz)``, ``d | N``. The
coefficients are fixed by a constant term of 1 at infinity and 0 at the other
cusps, and by invariance under each adjoined ``W_e``.  Expansions at
other cusps are computed exactly in a cyclotomic field, so vanishing orders
are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint

from . import geometry as geo
from . import modular
from .groups import CuspData, GroupDescriptor, get_group
from .series import (COMPLEX, DEFAULT_PRECISION, QSeries, SeriesError, eisenstein_level1,
                     eta_quotient, workprec)

DEFAULT_ORDER = 200


class FormError(ValueError):
    """A form could not be built (singular system, bad recipe, bad weight)."""


def _fmpq(x: Fraction) -> flint.fmpq:
    return flint.fmpq(x.numerator, x.denominator)


# -- Eisenstein series ---------------------------------------------------------

@dataclass(frozen=True)
class EisensteinForm:
    group: GroupDescriptor
    weight: int
    qexp: QSeries
    terms: tuple[tuple[int, Fraction], ...]  # (d, c_d): sum of c_d E_w(d z)
    cusp_orders: dict = field(hash=False, compare=False)
    shift: Fraction = Fraction(0)  # evaluate at z + shift (conjugate forms)

    def value(self, z, precision: int = DEFAULT_PRECISION) -> flint.acb:
        z = modular.acb(z)
        with workprec(precision):
            if self.shift:
                z = z + flint.acb(_fmpq(self.shift))
            acc = flint.acb(0)
            for d, c in self.terms:
                acc += _fmpq(c) * modular.eisenstein(self.weight, z * d, precision)
            return acc

    def __call__(self, z, precision: int = DEFAULT_PRECISION) -> flint.acb:
        return self.value(z, precision)


def _al_image(d: int, e: int) -> int:
    g = math.gcd(d, e)
    return d * e // (g * g)


def _gamma0_cusp_denominators(n: int) -> list[int]:
    return geo.divisors(n)


def eisenstein_coefficients(group: GroupDescriptor, weight: int) -> dict[int, Fraction]:
    """Solve for ``c_d`` with ``E^G = sum c_d E_w(d z)``."""
    if weight % 2 or weight < 4:
        raise FormError(f"weight {weight} must be even and at least 4")
    n = group.level
    divs = geo.divisors(n)
    k = weight // 2
    closure = {1}
    for e in group.atkin_lehner:
        closure |= {_al_image(a, e) for a in closure}
    inf_orbit = {n // e for e in closure}
    rows: list[list[Fraction]] = [[Fraction(1)] * len(divs) + [Fraction(1)]]
    for c in _gamma0_cusp_denominators(n):
        if c in inf_orbit:
            continue
        rows.append([Fraction(math.gcd(c, d), d) ** weight for d in divs] + [Fraction(0)])
    for e in group.atkin_lehner:
        for i, d in enumerate(divs):
            d2 = _al_image(d, e)
            row = [Fraction(0)] * (len(divs) + 1)
            row[divs.index(d2)] += 1
            row[i] -= Fraction(d2, d) ** k
            rows.append(row)
    m = flint.fmpq_mat(len(rows), len(divs) + 1, [_fmpq(v) for r in rows for v in r])
    red, rank = m.rref()
    if rank != len(divs):
        raise FormError(f"{group.name}: cusp system has rank {rank} for {len(divs)} unknowns")
    out = {}
    for i, d in enumerate(divs):
        # rank == unknowns and consistent -> pivot i sits in column i
        if red[i, i] != 1:
            raise FormError(f"{group.name}: inconsistent cusp system at weight {weight}")
        v = red[i, len(divs)]
        out[d] = Fraction(int(v.p), int(v.q))
    for r in range(len(divs), len(rows)):
        if any(red[r, j] != 0 for j in range(len(divs) + 1)):
            raise FormError(f"{group.name}: inconsistent cusp system at weight {weight}")
    return out


@lru_cache(maxsize=None)
def _build_cached(name: str, weight: int, order: int) -> EisensteinForm:
    group = get_group(name)
    coeffs = eisenstein_coefficients(group, weight)
    base = eisenstein_level1(weight, order)
    qexp = None
    for d, c in coeffs.items():
        if c == 0:
            continue
        term = base.rescale(d).truncate(order).scale(c)
        qexp = term if qexp is None else qexp + term
    terms = tuple((d, c) for d, c in coeffs.items() if c != 0)
    form = EisensteinForm(group, weight, qexp, terms, {})
    form.cusp_orders.update({c.label: cusp_order(form, c) for c in group.cusps})
    return form


def build_eisenstein(group, weight: int, order: int = DEFAULT_ORDER) -> EisensteinForm:
    group = get_group(group) if isinstance(group, str) else group
    if not group.is_good(weight):
        raise FormError(f"weight {weight} is not good for {group.name}")
    return _build_cached(group.name, weight, order)


def _cusp_factorization(d: int, sigma: tuple[int, int, int, int]) -> tuple[int, int, int]:
    """``(A, B, D)`` with ``diag(d, 1) sigma = gamma (A, B; 0, D)``, gamma in SL_2(Z)."""
    a, b, c, delta = sigma
    A = math.gcd(d * a, c)
    a1, c1 = d * a // A, c // A
    g, u, v = geo.egcd(a1, c1)
    # a1*u + c1*v == 1; gamma = (a1, -v; c1, u)
    B = u * d * b + v * delta
    D = -c1 * d * b + a1 * delta
    if A * D != d:
        raise FormError("cusp factorization failed")
    return A, B % D, D


def cusp_expansion(form: EisensteinForm, cusp: CuspData, order: int = 12,
                   precision: int = DEFAULT_PRECISION) -> QSeries:
    """Expansion of ``form | sigma`` in ``q_w = e^{2 pi i z / w}``, ``w`` the cusp width.

    Coefficients are summed exactly in Q(zeta_L) and only then converted to
    complex balls, so an entry is exactly zero iff it vanishes.
    """
    if cusp.is_infinity:
        return form.qexp
    w = form.weight
    width = cusp.width
    parts = []
    L = 1
    for d, c in form.terms:
        A, B, D = _cusp_factorization(d, cusp.scaling_matrix)
        parts.append((c / Fraction(D) ** w, A, B, D))
        L = math.lcm(L, D)
    base = eisenstein_level1(w, math.ceil(order * L / width) + 2)
    buckets: dict[Fraction, dict[int, Fraction]] = {}
    for scale, A, B, D in parts:
        n = 0
        while True:
            x = Fraction(n * A, D) * width  # exponent in q_w
            if x > order:
                break
            bucket = buckets.setdefault(x, {})
            pw = (n * B * (L // D)) % L
            bucket[pw] = bucket.get(pw, Fraction(0)) + scale * base[n]
            n += 1
    phi = flint.fmpq_poly(flint.fmpz_poly.cyclotomic(L))
    coeffs = [flint.acb(0)] * (order + 1)
    with workprec(precision):
        zeta = flint.acb(2 * flint.arb(1) / L).exp_pi_i() if L > 1 else flint.acb(1)
        for x, bucket in buckets.items():
            poly = sum((flint.fmpq_poly([0] * p + [1]) * _fmpq(v) for p, v in bucket.items()),
                       flint.fmpq_poly([0]))
            red = poly % phi
            if red.is_zero():
                continue
            if x.denominator != 1:
                raise FormError(f"{form.group.name}: non-integral exponent {x} at cusp {cusp.label}")
            coeffs[int(x)] = _eval_at(red, zeta)
    return QSeries(width, 0, tuple(coeffs), COMPLEX, precision)._normalized()


def _eval_at(poly: flint.fmpq_poly, x: flint.acb) -> flint.acb:
    acc = flint.acb(0)
    for c in reversed(poly.coeffs()):
        acc = acc * x + flint.acb(c)
    return acc


def cusp_order(form: EisensteinForm, cusp: CuspData) -> int:
    """Vanishing order of the form at ``cusp`` in the local parameter ``q_w``."""
    if cusp.is_infinity:
        return 0
    order = 8
    while order <= 256:
        ser = cusp_expansion(form, cusp, order)
        if not ser.is_zero():
            return ser.lead
        order *= 2
    raise FormError(f"{form.group.name}: form vanishes to order > 256 at cusp {cusp.label}")


def cusp_order_numeric(form: EisensteinForm, cusp: CuspData, heights=None,
                       precision: int = 192) -> int:
    """Vanishing order estimated from the decay of ``|form | sigma|`` along ``iY``.

    Heights default to two and three cusp widths, where ``|q_w| < 4e-6`` and the
    leading term dominates.
    """
    if cusp.is_infinity:
        return 0
    if heights is None:
        heights = (2.0 * float(cusp.width), 3.0 * float(cusp.width))
    a, b, c, d = cusp.scaling_matrix

    def slashed(y):
        z = complex(0, y)
        tau = (a * z + b) / (c * z + d)

        def f(t, p):
            return form.value(t, p)
        v = modular.evaluate_adaptive(f, tau, 64, min_rel_bits=40)
        return abs(modular.to_complex(v)) / abs(c * z + d) ** form.weight

    y1, y2 = heights
    v1, v2 = slashed(y1), slashed(y2)
    nu = -math.log(v2 / v1) / (2 * math.pi * (y2 - y1))
    return round(nu * float(cusp.width))


def compute_s1(group, weight: int, method: str = "exact") -> int:
    """Number of counted cusps at which ``E_w^G`` vanishes to odd order."""
    group = get_group(group) if isinstance(group, str) else group
    form = build_eisenstein(group, weight, 32)
    total = 0
    for cusp in group.cusps:
        if cusp.is_infinity or cusp.label in group.s1_excluded:
            continue
        o = form.cusp_orders[cusp.label] if method == "exact" else cusp_order_numeric(form, cusp)
        total += o % 2
    return total


def conjugate_form(f):
    """``f(z) -> f(z + h/2)`` on series or on an :class:`EisensteinForm`."""
    if isinstance(f, QSeries):
        return f.half_period_shift()
    from .groups import conjugate_group
    g = conjugate_group(f.group)
    return EisensteinForm(g, f.weight, f.qexp.half_period_shift(), f.terms, dict(f.cusp_orders),
                          (f.shift + f.group.width / 2) % f.group.width)


# -- hauptmoduls -----------------------------------------------------------------

@dataclass(frozen=True)
class Hauptmodul:
    group: GroupDescriptor
    qexp: QSeries
    recipe: dict = field(hash=False, compare=False)
    offset: Fraction = Fraction(0)  # constant subtracted from the raw recipe
    negate_shift: bool = False  # value is -base(z + h/2)
    base: "Hauptmodul | None" = None

    def value(self, z, precision: int = DEFAULT_PRECISION) -> flint.acb:
        z = modular.acb(z)
        with workprec(precision):
            if self.base is not None:
                return -self.base.value(z + flint.acb(_fmpq(self.base.group.width / 2)), precision)
            kind = self.recipe["kind"]
            if kind == "j":
                raw = z.modular_j()
            elif kind == "eta":
                raw = _eta_product(self.recipe["recipe"], z)
            elif kind == "e2_quotient":
                num = flint.acb(0)
                for d, c in self.recipe["e2_terms"]:
                    num += c * modular.eisenstein(2, z * d, precision)
                s = Fraction(*self.recipe["scale"])
                raw = num * _fmpq(s) / _eta_product(self.recipe["recipe"], z)
            else:
                raise FormError(f"unknown hauptmodul recipe {kind!r}")
            return raw - _fmpq(self.offset)

    def __call__(self, z, precision: int = DEFAULT_PRECISION) -> flint.acb:
        return self.value(z, precision)

    def derivative(self, z, precision: int = DEFAULT_PRECISION) -> flint.acb:
        return modular.derivative(self.value, z, precision)


def _eta_product(recipe, z) -> flint.acb:
    acc = flint.acb(1)
    for d, r in recipe:
        acc *= flint.acb.modular_eta(z * d) ** r
    return acc


def _raw_hauptmodul_series(recipe: dict, order: int) -> QSeries:
    kind = recipe["kind"]
    if kind == "j":
        e4 = eisenstein_level1(4, order + 1)
        delta = eta_quotient([(1, 24)], order + 1)
        return (e4 ** 3 / delta).truncate(order)
    if kind == "eta":
        return eta_quotient([tuple(t) for t in recipe["recipe"]], order + 1).truncate(order)
    if kind == "e2_quotient":
        e2 = eisenstein_level1(2, 12 * (order + 2), allow_weight_two=True)
        num = None
        for d, c in recipe["e2_terms"]:
            t = e2.rescale(d).truncate(order + 2).scale(c)
            num = t if num is None else num + t
        num = num.scale(Fraction(*recipe["scale"]))
        den = eta_quotient([tuple(t) for t in recipe["recipe"]], order + 2)
        return (num / den).truncate(order)
    raise FormError(f"unknown hauptmodul recipe {kind!r}")


@lru_cache(maxsize=None)
def _hauptmodul_cached(name: str, order: int) -> Hauptmodul:
    group = get_group(name)
    raw = _raw_hauptmodul_series(group.hauptmodul_recipe, order)
    if raw.lead != -1 or raw[-1] != 1:
        raise FormError(f"{name}: recipe does not start with 1/q")
    const = raw[0]
    qexp = raw - const
    return Hauptmodul(group, qexp, group.hauptmodul_recipe, const)


def build_hauptmodul(group, order: int = DEFAULT_ORDER) -> Hauptmodul:
    group = get_group(group) if isinstance(group, str) else group
    if group.hauptmodul_recipe.get("kind") == "conjugate":
        return conjugate_hauptmodul(build_hauptmodul(group.hauptmodul_recipe["of"], order))
    return _hauptmodul_cached(group.name, order)


def conjugate_hauptmodul(j: Hauptmodul) -> Hauptmodul:
    """``-j(z + h/2)``: coefficients ``a_n -> (-1)^(n-1) a_n``, ``1/q`` kept."""
    from .groups import conjugate_group
    g = conjugate_group(j.group)
    return Hauptmodul(g, -j.qexp.half_period_shift(), {"kind": "conjugate", "of": j.group.name},
                      base=j)


def invariance_defect(fn, group: GroupDescriptor, points, precision: int = DEFAULT_PRECISION,
                      weight: int = 0) -> float:
    """Max of ``|f|_w gamma (z) - f(z)|`` over side pairings gamma and ``points``."""
    worst = 0.0
    elements = [a.element for a in group.arcs]
    t = group.width
    elements.append((t.denominator, t.numerator, 0, t.denominator))
    for z in points:
        z = modular.acb(z)
        f0 = fn(z, precision)
        for g in elements:
            a, b, c, d = g
            e = geo.det(g)
            with workprec(precision):
                gz = (z * a + b) / (z * c + d)
                # det-normalized slash of weight w
                factor = (z * c + d) ** weight / flint.acb(e) ** (weight // 2) if weight else 1
                v = fn(gz, precision)
                diff = abs(v / factor - f0) if weight else abs(v - f0)
            worst = max(worst, float(diff.mid()))
    return worst


def qexp_text(series: QSeries) -> str:
    """``exponent<TAB>coefficient`` per line for exact series; integers print bare."""
    lines = []
    for n, c in series.items():
        lines.append(f"{n}\t{Fraction(c)}")
    return "\n".join(lines) + "\n"


__all__ = [
    "EisensteinForm", "Hauptmodul", "FormError", "build_eisenstein", "build_hauptmodul",
    "cusp_expansion", "cusp_order", "cusp_order_numeric", "compute_s1", "conjugate_form",
    "conjugate_hauptmodul", "eisenstein_coefficients", "invariance_defect", "qexp_text",
    "SeriesError",
]
