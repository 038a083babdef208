"""Registry of the supported genus-zero groups and their fundamental domains.

Every group is ``Gamma_0(N)`` extended by Atkin-Lehner involutions ``W_e``.
Its fundamental domain is the Ford domain in ``-h/2 <= Re z <= h/2``; the
lower boundary is a chain of isometric-circle arcs.  The geometry is derived
once by :func:`build_registry` and shipped as ``data/registry.json`` with a
checksum; :func:`get_group` loads from that file.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from . import geometry as geo

SCHEMA_VERSION = 1
REGISTRY_FILE = "registry.json"


class RegistryError(KeyError):
    """Unknown group or a corrupted registry document."""


# name -> static data; the hauptmodul recipes are standard eta quotients
# except SL2Z (J = E4^3/Delta - 744) and Gamma0*_11 (an E2 combination over
# eta(z)^2 eta(11z)^2).
GROUP_TABLE = {
    "SL2Z": dict(level=1, al=(), acceptable=True, c_minus_s=0,
                 hauptmodul={"kind": "j"}),
    "Gamma0_2": dict(level=2, al=(), acceptable=True, conjugate="Gamma0*_4",
                     hauptmodul={"kind": "eta", "recipe": [[1, 24], [2, -24]]}),
    "Gamma0_3": dict(level=3, al=(), acceptable=True, c_minus_s=1,
                     hauptmodul={"kind": "eta", "recipe": [[1, 12], [3, -12]]}),
    "Gamma0_4": dict(level=4, al=(), acceptable=True,
                     hauptmodul={"kind": "eta", "recipe": [[1, 8], [4, -8]]}),
    "Gamma0*_4": dict(level=4, al=(4,), acceptable=True, conjugate="Gamma0_2",
                      hauptmodul={"kind": "eta", "recipe": [[2, 48], [1, -24], [4, -24]]}),
    "Gamma0_5": dict(level=5, al=(), acceptable=False,
                     hauptmodul={"kind": "eta", "recipe": [[1, 6], [5, -6]]}),
    "Gamma0_6+2": dict(level=6, al=(2,), acceptable=False,
                       hauptmodul={"kind": "eta", "recipe": [[1, 4], [2, 4], [3, -4], [6, -4]]}),
    "Gamma0_6+3": dict(level=6, al=(3,), acceptable=True,
                       hauptmodul={"kind": "eta", "recipe": [[1, 6], [3, 6], [2, -6], [6, -6]]}),
    "Gamma0_7": dict(level=7, al=(), acceptable=False,
                     hauptmodul={"kind": "eta", "recipe": [[1, 4], [7, -4]]}),
    "Gamma0_9": dict(level=9, al=(), acceptable=False, rescale_of=["Gamma0_3", 3],
                     hauptmodul={"kind": "eta", "recipe": [[1, 3], [9, -3]]}),
    "Gamma0_10": dict(level=10, al=(), acceptable=False,
                      hauptmodul={"kind": "eta", "recipe": [[2, 1], [5, 5], [1, -1], [10, -5]]}),
    "Gamma0_10+2": dict(level=10, al=(2,), acceptable=False,
                        hauptmodul={"kind": "eta", "recipe": [[1, 2], [2, 2], [5, -2], [10, -2]]}),
    "Gamma0*_11": dict(level=11, al=(11,), acceptable=False,
                       hauptmodul={"kind": "e2_quotient", "e2_terms": [[1, 1], [11, -11]],
                                   "scale": [-1, 10], "recipe": [[1, 2], [11, 2]]}),
    "Gamma0_12+3": dict(level=12, al=(3,), acceptable=False, rescale_of=["Gamma0_6+3", 2],
                        hauptmodul={"kind": "eta", "recipe": [[1, 2], [3, 2], [4, -2], [12, -2]]}),
}

# Cusps left out of the odd-order count: 0 and -1/2 when they are cusps of F.
S1_EXCLUDED = ("0", "-1/2")


def _frac(s) -> Fraction:
    return Fraction(s)


def _sqrt_frac(x: Fraction) -> float:
    return math.sqrt(x) if x > 0 else 0.0


@dataclass(frozen=True)
class ArcSegment:
    """Piece of the isometric circle of ``element`` over ``x_start <= x <= x_end``.

    Lower arcs are traversed left to right, which is the anticlockwise
    orientation of the boundary of F.
    """

    center: Fraction
    radius_sq: Fraction
    x_start: Fraction
    x_end: Fraction
    element: tuple[int, int, int, int]
    anticlockwise: bool = True

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius_sq)

    @property
    def angle_range(self) -> tuple[float, float]:
        r = self.radius
        c = float(self.center)
        t0 = math.acos(max(-1.0, min(1.0, (float(self.x_start) - c) / r)))
        t1 = math.acos(max(-1.0, min(1.0, (float(self.x_end) - c) / r)))
        return (t0, t1)

    def height(self, x: float) -> float:
        t = float(self.radius_sq) - (x - float(self.center)) ** 2
        return math.sqrt(t) if t > 0 else 0.0

    def point(self, theta: float) -> complex:
        return complex(float(self.center) + self.radius * math.cos(theta), self.radius * math.sin(theta))

    def distance(self, z: complex) -> float:
        """Euclidean distance from ``z`` to this arc."""
        c = float(self.center)
        t0, t1 = self.angle_range
        theta = math.atan2(z.imag, z.real - c)
        lo, hi = min(t0, t1), max(t0, t1)
        if lo <= theta <= hi:
            return abs(abs(z - c) - self.radius)
        return min(abs(z - self.point(t0)), abs(z - self.point(t1)))

    def shifted(self, dx: Fraction) -> "ArcSegment":
        a, b, c, d = self.element
        # conjugate by translation: T^dx g T^-dx, scaled to integer entries
        den = dx.denominator
        n = dx.numerator
        t = (den, n, 0, den)
        ti = (den, -n, 0, den)
        g = geo.matmul(geo.matmul(t, self.element), ti)
        gcd = math.gcd(*g)
        g = tuple(v // gcd for v in g)
        return replace(self, center=self.center + dx, x_start=self.x_start + dx,
                       x_end=self.x_end + dx, element=g)


@dataclass(frozen=True)
class CuspData:
    """A cusp class representative, its width and an SL_2(Z) scaling matrix."""

    representative: Fraction | None  # None is the cusp at infinity
    width: Fraction
    scaling_matrix: tuple[int, int, int, int]

    @property
    def is_infinity(self) -> bool:
        return self.representative is None

    @property
    def label(self) -> str:
        return "inf" if self.representative is None else str(self.representative)


@dataclass(frozen=True)
class EllipticPoint:
    x: Fraction
    y_sq: Fraction
    order: int

    @property
    def point(self) -> complex:
        return complex(float(self.x), math.sqrt(self.y_sq))


@dataclass(frozen=True)
class GroupDescriptor:
    name: str
    level: int
    atkin_lehner: tuple[int, ...]
    index: Fraction
    width: Fraction
    cusps: tuple[CuspData, ...]
    elliptic: tuple[EllipticPoint, ...]
    arcs: tuple[ArcSegment, ...]
    y0_sq: Fraction
    y1_sq: Fraction
    acceptable: bool
    hauptmodul_recipe: dict = field(hash=False, compare=False)
    eisenstein_recipe: dict = field(hash=False, compare=False)
    c_minus_s_expected: int | None = None
    s1_excluded: tuple[str, ...] = S1_EXCLUDED
    rescale_of: tuple[str, int] | None = None
    conjugate: str | None = None
    good_weights: str = "even>=4"

    @property
    def y0(self) -> float:
        return _sqrt_frac(self.y0_sq)

    @property
    def y1(self) -> float:
        return _sqrt_frac(self.y1_sq)

    @property
    def h(self) -> float:
        return float(self.width)

    def is_good(self, weight: int) -> bool:
        return weight % 2 == 0 and weight >= 4

    def floor(self, x: float) -> float:
        """Height of the lower boundary of F above ``x`` (``|x| <= h/2``)."""
        best = 0.0
        for arc in self.arcs:
            if float(arc.x_start) - 1e-15 <= x <= float(arc.x_end) + 1e-15:
                best = max(best, arc.height(x))
        return best

    def arc_at(self, x: float) -> ArcSegment:
        for arc in self.arcs:
            if float(arc.x_start) <= x <= float(arc.x_end):
                return arc
        raise ValueError(f"x={x} outside the strip")

    def vertices(self) -> list[float]:
        """x-coordinates where consecutive arcs meet, plus both strip edges."""
        xs = [float(self.arcs[0].x_start)] + [float(a.x_end) for a in self.arcs]
        return xs

    def contains(self, z: complex, tol: float = 1e-12) -> bool:
        half = self.h / 2
        if not (-half - tol <= z.real <= half + tol):
            return False
        return z.imag >= self.floor(min(max(z.real, -half), half)) - tol

    def distance_to_arcs(self, z: complex) -> float:
        return min(arc.distance(z) for arc in self.arcs)

    def reduce(self, z: complex, max_steps: int = 10_000) -> tuple[complex, tuple[int, int, int, int]]:
        """Move ``z`` into F with side-pairing elements; returns ``(z', g)`` with ``z' = g z``."""
        h = self.h
        g = (1, 0, 0, 1)
        w = complex(z)
        for _ in range(max_steps):
            n = math.floor(w.real / h + 0.5)
            if n:
                w -= n * h
                t = (self.width.denominator, -n * self.width.numerator, 0, self.width.denominator)
                g = _reduce_int(geo.matmul(t, g))
            moved = False
            for arc in self.arcs:
                a, b, c, d = arc.element
                e = geo.det(arc.element)
                if abs(c * w + d) ** 2 < e * (1 - 1e-13):
                    w = geo.mobius(arc.element, w)
                    g = _reduce_int(geo.matmul(arc.element, g))
                    moved = True
                    break
            if not moved:
                return w, g
        raise RuntimeError(f"reduction of {z} into {self.name} did not terminate")

    def cusp(self, label: str) -> CuspData:
        for c in self.cusps:
            if c.label == label:
                return c
        raise RegistryError(f"{self.name} has no cusp {label}")

    def elliptic_order_at(self, z: complex, tol: float = 1e-9) -> int:
        for e in self.elliptic:
            if abs(e.point - z) < tol:
                return e.order
        return 1


def _reduce_int(g):
    k = math.gcd(*g)
    return tuple(v // k for v in g) if k > 1 else g


# -- geometry derivation -----------------------------------------------------

def _al_closure(n: int, al: tuple[int, ...]) -> set[int]:
    out = {1}
    changed = True
    while changed:
        changed = False
        for a in list(out):
            for e in al:
                g = math.gcd(a, e)
                p = a * e // (g * g)
                if p not in out:
                    out.add(p)
                    changed = True
    return out


def group_index(n: int, al: tuple[int, ...]) -> Fraction:
    mu = Fraction(n)
    for p in range(2, n + 1):
        if n % p == 0 and all(p % q for q in range(2, p)):
            mu *= Fraction(p + 1, p)
    return mu / len(_al_closure(n, al))


def _bottom_rows(n: int, e: int, cmax_value: float, center_window: tuple[float, float]):
    """Admissible group elements with ``0 < C <= cmax_value`` in the W_e coset."""
    c = 1
    while n * c <= cmax_value + 1e-12:
        cc = n * c
        lo, hi = center_window
        dlo = math.floor(-hi * cc / e) - 1
        dhi = math.ceil(-lo * cc / e) + 1
        for d in range(dlo, dhi + 1):
            g = geo.al_matrix(n, e, c, d)
            if g is not None:
                yield g
        c += 1


def find_equivalence(n: int, al: tuple[int, ...], width: Fraction, z1: complex, z2: complex,
                     tol: float = 1e-9):
    """Element of the group mapping ``z1`` to ``z2``, or None (interior points)."""
    h = float(width)
    k = (z2.real - z1.real) / h
    if abs(z2.imag - z1.imag) < tol and abs(k - round(k)) < tol:
        return (1, round(k) * width.numerator, 0, 1) if width.denominator == 1 else (width.denominator, round(k) * width.numerator, 0, width.denominator)
    for e in sorted(_al_closure(n, al)):
        # |C z1 + D|^2 = e y1 / y2
        rhs = e * z1.imag / z2.imag
        cmax = math.sqrt(rhs) / z1.imag
        r = math.sqrt(rhs)
        for g in _bottom_rows(n, e, cmax, (z1.real - r, z1.real + r)):
            a, b, c, d = g
            if abs(abs(c * z1 + d) ** 2 - rhs) > 1e-7 * rhs:
                continue
            w = geo.mobius(g, z1)
            k = (z2.real - w.real) / h
            if abs(w.imag - z2.imag) < tol and abs(k - round(k)) < tol:
                t = (width.denominator, round(k) * width.numerator, 0, width.denominator)
                return _reduce_int(geo.matmul(t, g))
    return None


def stabilizer_order(n: int, al: tuple[int, ...], width: Fraction, z: complex, tol: float = 1e-9) -> int:
    """Order of the stabilizer of ``z`` in the group modulo +-1."""
    count = 1
    for e in sorted(_al_closure(n, al)):
        cmax = math.sqrt(e) / z.imag
        r = math.sqrt(e)
        for g in _bottom_rows(n, e, cmax, (z.real - r, z.real + r)):
            a, b, c, d = g
            if abs(abs(c * z + d) ** 2 - e) > 1e-7 * e:
                continue
            w = geo.mobius(g, z)
            k = (z.real - w.real) / float(width)
            if abs(w.imag - z.imag) < tol and abs(k - round(k)) < tol:
                count += 1
    return count


def _scaling_matrix(x: Fraction) -> tuple[int, int, int, int]:
    p, q = x.numerator, x.denominator
    g, u, v = geo.egcd(p, q)
    # p*u + q*v == 1 ->  (p, -v; q, u) has determinant p*u + q*v
    return (p, -v, q, u)


def cusps_equivalent(n: int, al: tuple[int, ...], x1: Fraction, x2: Fraction) -> bool:
    """Whether two finite cusps are equivalent under Gamma_0(n) + W_e."""
    s2 = _scaling_matrix(x2)
    for e in sorted(_al_closure(n, al)):
        if e == 1:
            src = x1
        else:
            w = _al_element(n, e)
            a, b, c, d = w
            num, den = a * x1.numerator + b * x1.denominator, c * x1.numerator + d * x1.denominator
            if den == 0:
                continue
            src = Fraction(num, den)
        s1 = _scaling_matrix(src)
        y1, x1_ = s1[3], s1[1]
        p1, q1 = s1[0], s1[2]
        s1_inv = (y1, -x1_, -q1, p1)
        for k in range(n):
            for sign in (1, -1):
                t = (sign, k, 0, sign)
                g = geo.matmul(geo.matmul(s2, t), s1_inv)
                if g[2] % n == 0:
                    return True
    return False


def cusp_maps_to_infinity(n: int, al: tuple[int, ...], x: Fraction) -> bool:
    for e in sorted(_al_closure(n, al)):
        if e == 1:
            continue
        a, b, c, d = _al_element(n, e)
        if c * x.numerator + d * x.denominator == 0:
            return True
        # W_e(inf) = a/c; x equivalent to it under Gamma_0(n)
        if cusps_equivalent(n, (), x, Fraction(a, c)):
            return True
    return False


@lru_cache(maxsize=None)
def _al_element(n: int, e: int) -> tuple[int, int, int, int]:
    for c in range(1, 50):
        for d in range(-50, 51):
            g = geo.al_matrix(n, e, c, d)
            if g is not None:
                return g
    raise ValueError(f"no W_{e} element for level {n}")


def cusp_width(n: int, al: tuple[int, ...], x: Fraction | None) -> Fraction:
    """Smallest ``w > 0`` with ``sigma T^w sigma^-1`` in the group (sigma in SL_2(Z))."""
    if x is None:
        return Fraction(1)
    p, _, q, _ = _scaling_matrix(x)
    best = None
    for e in sorted(_al_closure(n, al)):
        s = math.isqrt(e)
        if s * s != e:
            continue
        for t in range(1, s * n * n + 1):
            w = Fraction(t, s * n) if s > 1 else Fraction(t)
            if best is not None and w >= best:
                break
            m = (s * (1 - p * q * w), s * p * p * w, -s * q * q * w, s * (1 + p * q * w))
            if any(Fraction(v).denominator != 1 for v in m):
                continue
            g = tuple(int(v) for v in m)
            if geo.in_group(g, n, tuple(a for a in al)) or (e == 1 and g[2] % n == 0):
                best = w if best is None else min(best, w)
                break
    return best


def derive_geometry(n: int, al: tuple[int, ...], width: Fraction = Fraction(1), cmax: int = 6) -> dict:
    circles = geo.isometric_circles(n, al, width, cmax)
    pieces = geo.lower_envelope(circles, width)
    arcs = [ArcSegment(c.center, c.radius_sq, x0, x1, c.element) for c, x0, x1 in pieces]
    # vertices with exact coordinates
    verts = [(arcs[0].x_start, arcs[0].radius_sq - (arcs[0].x_start - arcs[0].center) ** 2)]
    for a in arcs:
        verts.append((a.x_end, a.radius_sq - (a.x_end - a.center) ** 2))
    # cusps: vertices on the real axis, then class representatives
    reals = sorted({x for x, y2 in verts if y2 == 0})
    reps: list[Fraction] = []
    for x in sorted(reals, key=lambda v: (abs(v) != 0, v != -width / 2, v)):
        if cusp_maps_to_infinity(n, al, x):
            continue
        if any(cusps_equivalent(n, al, x, r) for r in reps):
            continue
        reps.append(x)
    cusps = [CuspData(None, Fraction(1) * width, (1, 0, 0, 1))]
    for x in sorted(reps):
        cusps.append(CuspData(x, cusp_width(n, al, x), _scaling_matrix(x)))
    # elliptic candidates: interior vertices and arc tops
    cands = [(x, y2) for x, y2 in verts if y2 > 0]
    for a in arcs:
        if a.x_start < a.center < a.x_end:
            cands.append((a.center, a.radius_sq))
    ell: list[EllipticPoint] = []
    for x, y2 in sorted(set(cands)):
        z = complex(float(x), math.sqrt(y2))
        order = stabilizer_order(n, al, width, z)
        if order == 1:
            continue
        if any(find_equivalence(n, al, width, z, e.point) is not None for e in ell):
            continue
        ell.append(EllipticPoint(x, y2, order))
    floor_sq = {}
    for a in arcs:
        for x in (a.x_start, a.x_end, Fraction(0)):
            if a.x_start <= x <= a.x_end:
                floor_sq[x] = max(floor_sq.get(x, Fraction(0)), a.radius_sq - (x - a.center) ** 2)
    return dict(arcs=arcs, cusps=cusps, elliptic=ell,
                y0_sq=floor_sq[-width / 2], y1_sq=floor_sq[Fraction(0)],
                index=group_index(n, al))


# -- serialization -------------------------------------------------------------

def _arc_to_json(a: ArcSegment) -> dict:
    return {"center": str(a.center), "radius_sq": str(a.radius_sq), "x_start": str(a.x_start),
            "x_end": str(a.x_end), "element": list(a.element),
            "angle_range": list(a.angle_range), "anticlockwise": a.anticlockwise}


def _arc_from_json(d: dict) -> ArcSegment:
    return ArcSegment(_frac(d["center"]), _frac(d["radius_sq"]), _frac(d["x_start"]),
                      _frac(d["x_end"]), tuple(d["element"]), d["anticlockwise"])


def descriptor_to_json(g: GroupDescriptor) -> dict:
    return {
        "name": g.name, "level": g.level, "atkin_lehner": list(g.atkin_lehner),
        "index": str(g.index), "width": str(g.width),
        "cusps": [{"representative": c.label, "width": str(c.width),
                   "scaling_matrix": list(c.scaling_matrix)} for c in g.cusps],
        "elliptic": [{"x": str(e.x), "y_sq": str(e.y_sq), "order": e.order} for e in g.elliptic],
        "arcs": [_arc_to_json(a) for a in g.arcs],
        "y0_sq": str(g.y0_sq), "y1_sq": str(g.y1_sq),
        "acceptable": g.acceptable, "good_weights": g.good_weights,
        "hauptmodul_recipe": g.hauptmodul_recipe, "eisenstein_recipe": g.eisenstein_recipe,
        "c_minus_s_expected": g.c_minus_s_expected, "s1_excluded": list(g.s1_excluded),
        "rescale_of": list(g.rescale_of) if g.rescale_of else None,
        "conjugate": g.conjugate,
    }


def descriptor_from_json(d: dict) -> GroupDescriptor:
    return GroupDescriptor(
        name=d["name"], level=d["level"], atkin_lehner=tuple(d["atkin_lehner"]),
        index=_frac(d["index"]), width=_frac(d["width"]),
        cusps=tuple(CuspData(None if c["representative"] == "inf" else _frac(c["representative"]),
                             _frac(c["width"]), tuple(c["scaling_matrix"])) for c in d["cusps"]),
        elliptic=tuple(EllipticPoint(_frac(e["x"]), _frac(e["y_sq"]), e["order"]) for e in d["elliptic"]),
        arcs=tuple(_arc_from_json(a) for a in d["arcs"]),
        y0_sq=_frac(d["y0_sq"]), y1_sq=_frac(d["y1_sq"]),
        acceptable=d["acceptable"], good_weights=d["good_weights"],
        hauptmodul_recipe=d["hauptmodul_recipe"], eisenstein_recipe=d["eisenstein_recipe"],
        c_minus_s_expected=d["c_minus_s_expected"], s1_excluded=tuple(d["s1_excluded"]),
        rescale_of=tuple(d["rescale_of"]) if d["rescale_of"] else None,
        conjugate=d["conjugate"],
    )


def _checksum(groups: list[dict]) -> str:
    blob = json.dumps(groups, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def build_descriptor(name: str) -> GroupDescriptor:
    spec = GROUP_TABLE[name]
    n, al = spec["level"], tuple(spec["al"])
    geom = derive_geometry(n, al)
    labels = {c.label for c in geom["cusps"]}
    return GroupDescriptor(
        name=name, level=n, atkin_lehner=al, index=geom["index"], width=Fraction(1),
        cusps=tuple(geom["cusps"]), elliptic=tuple(geom["elliptic"]), arcs=tuple(geom["arcs"]),
        y0_sq=geom["y0_sq"], y1_sq=geom["y1_sq"], acceptable=spec["acceptable"],
        hauptmodul_recipe=spec["hauptmodul"],
        eisenstein_recipe={"span": geo.divisors(n), "atkin_lehner": list(al)},
        c_minus_s_expected=spec.get("c_minus_s"),
        s1_excluded=tuple(s for s in S1_EXCLUDED if s in labels),
        rescale_of=tuple(spec["rescale_of"]) if spec.get("rescale_of") else None,
        conjugate=spec.get("conjugate"),
    )


def build_registry() -> dict:
    groups = [descriptor_to_json(build_descriptor(name)) for name in GROUP_TABLE]
    return {"schema_version": SCHEMA_VERSION, "checksum": _checksum(groups), "groups": groups}


def write_registry(path=None) -> None:
    doc = build_registry()
    if path is None:
        path = resources.files("eiszeros") / "data" / REGISTRY_FILE
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


@lru_cache(maxsize=1)
def _load() -> dict[str, GroupDescriptor]:
    text = (resources.files("eiszeros") / "data" / REGISTRY_FILE).read_text()
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise RegistryError(f"registry schema {doc.get('schema_version')} != {SCHEMA_VERSION}")
    if _checksum(doc["groups"]) != doc["checksum"]:
        raise RegistryError("registry checksum mismatch")
    return {d["name"]: descriptor_from_json(d) for d in doc["groups"]}


def get_group(name: str) -> GroupDescriptor:
    groups = _load()
    if isinstance(name, GroupDescriptor):
        return name
    if name not in groups:
        raise RegistryError(f"unknown group {name!r}; known: {', '.join(groups)}")
    return groups[name]


def list_groups() -> list[str]:
    return list(_load())


# -- conjugation by the half-period translation ---------------------------------

def conjugate_group(group: GroupDescriptor) -> GroupDescriptor:
    """Geometry of ``T_{h/2}^-1 Gamma T_{h/2}`` with ``F' = (F+ - h/2) u (F- + h/2)``."""
    half = group.width / 2
    arcs: list[ArcSegment] = []
    for a in group.arcs:
        # split at Re z = 0
        parts = []
        if a.x_start < 0 < a.x_end:
            parts = [replace(a, x_end=Fraction(0)), replace(a, x_start=Fraction(0))]
        else:
            parts = [a]
        for p in parts:
            arcs.append(p.shifted(-half) if p.x_start >= 0 else p.shifted(half))
    arcs.sort(key=lambda a: a.x_start)
    merged: list[ArcSegment] = []
    for a in arcs:
        if merged and merged[-1].center == a.center and merged[-1].radius_sq == a.radius_sq \
                and merged[-1].x_end == a.x_start:
            merged[-1] = replace(merged[-1], x_end=a.x_end)
        else:
            merged.append(a)

    def move(x: Fraction) -> Fraction:
        return x - half if x >= 0 else x + half

    cusps = [group.cusps[0]]
    for c in group.cusps[1:]:
        x = move(c.representative)
        if x == half:
            x = -half
        # the translated scaling matrix has first column (x q, q); rescale to SL_2(Z)
        u = Fraction(c.representative.denominator, x.denominator)
        cusps.append(CuspData(x, c.width * u * u, _scaling_matrix(x)))
    ell = tuple(EllipticPoint(move(e.x), e.y_sq, e.order) for e in group.elliptic)
    name = group.conjugate or f"{group.name}'"
    if group.conjugate:
        try:
            target = get_group(group.conjugate)
            name = target.name
        except RegistryError:
            pass
    return replace(group, name=name, arcs=tuple(merged), cusps=tuple(cusps), elliptic=ell,
                   y0_sq=group.y1_sq, y1_sq=group.y0_sq, conjugate=group.name,
                   hauptmodul_recipe={"kind": "conjugate", "of": group.name},
                   eisenstein_recipe={"kind": "conjugate", "of": group.name})


# -- constants that need the hauptmodul -------------------------------------------

class ConstantError(ArithmeticError):
    """A boundary constant could not be evaluated reliably."""


def cusp_point_value(fn, x: Fraction, width: Fraction, precision: int = 128):
    """Limit of ``fn`` at the cusp ``x`` along ``sigma(iY)``, ``Y -> infinity``."""
    import flint

    from .modular import acb
    from .series import workprec
    a, b, c, d = _scaling_matrix(x)
    Y = 12 * float(width) + 8

    def at(yy):
        with workprec(precision):
            z = acb(complex(0, yy))
            return fn((z * a + b) / (z * c + d), precision)

    v1, v2 = at(Y), at(2 * Y)
    with workprec(precision):
        gap = float(abs(v1 - v2).mid())
    if gap > 1e-20 * max(1.0, float(abs(v2).mid())):
        raise ConstantError(f"value at cusp {x} did not settle ({gap:.3e})")
    return v2


def boundary_value(group: GroupDescriptor, hauptmodul, x: Fraction, y_sq: Fraction,
                   precision: int = 128):
    """``j`` at ``x + i sqrt(y_sq)``, or its cusp value when ``y_sq == 0``."""
    import flint

    from .series import workprec
    if y_sq == 0:
        return cusp_point_value(hauptmodul.value, x, cusp_width(group.level, group.atkin_lehner, x)
                                if group.level else Fraction(1), precision)
    with workprec(precision):
        z = flint.acb(flint.arb(flint.fmpq(x.numerator, x.denominator)),
                      flint.arb(flint.fmpq(y_sq.numerator, y_sq.denominator)).sqrt())
        return hauptmodul.value(z, precision)


def compute_a0_a1(group: GroupDescriptor, hauptmodul=None, precision: int = 128,
                  tol: float = 1e-20) -> tuple[float, float]:
    """``a0 = j(-h/2 + i y0)`` and ``a1 = j(i y1)`` (real parts)."""
    from .modular import to_complex
    if hauptmodul is None:
        from .forms import build_hauptmodul
        hauptmodul = build_hauptmodul(group)
    v0 = to_complex(boundary_value(group, hauptmodul, -group.width / 2, group.y0_sq, precision))
    v1 = to_complex(boundary_value(group, hauptmodul, Fraction(0), group.y1_sq, precision))
    if group.acceptable:
        for v in (v0, v1):
            if abs(v.imag) > tol * max(1.0, abs(v)):
                raise ConstantError(f"{group.name}: boundary value {v} is not real")
    return v0.real, v1.real


@dataclass(frozen=True)
class CriticalPoint:
    z: complex
    j_value: complex
    cusp: bool


def _arc_point(arc: ArcSegment, theta):
    import flint
    c = flint.arb(flint.fmpq(arc.center.numerator, arc.center.denominator))
    r = flint.arb(flint.fmpq(arc.radius_sq.numerator, arc.radius_sq.denominator)).sqrt()
    th = flint.arb(theta)
    return flint.acb(c + r * th.cos(), r * th.sin())


def critical_points(group: GroupDescriptor, hauptmodul=None, samples: int = 2048,
                    precision: int = 128) -> list[CriticalPoint]:
    """Points of the lower arcs where ``y'(t) / (Re j o z)'(t)`` changes sign."""
    import flint

    from .modular import to_complex
    from .series import workprec
    if hauptmodul is None:
        from .forms import build_hauptmodul
        hauptmodul = build_hauptmodul(group)
    guard = 2.0 ** (-(precision - 40))

    def sample(arc, theta):
        with workprec(precision):
            z = _arc_point(arc, theta)
            v = hauptmodul.value(z, precision)
            return to_complex(z), v

    # path samples: (t, z, Re j ball, vertex_flag); t = (arc index, theta)
    pts = []
    for k, arc in enumerate(group.arcs):
        t0, t1 = arc.angle_range
        for i in range(samples + 1):
            if k and i == 0:
                continue  # shared vertex already sampled
            th = t0 + (t1 - t0) * i / samples
            last_arc = k == len(group.arcs) - 1
            if (k == 0 and i == 0) or (last_arc and i == samples):
                vertex = "end"
            else:
                vertex = i == samples  # junction with the next arc
            z = arc.point(th)
            if z.imag < 1e-12:
                pts.append((k, th, z, None, vertex))
                continue
            zz, v = sample(arc, th)
            pts.append((k, th, zz, v, vertex))

    def seg_sign(p, q):
        if p[3] is None or q[3] is None:
            return 0
        with workprec(precision):
            dj = q[3].real - p[3].real
        djf = float(dj.mid())
        if abs(djf) <= guard * max(1.0, abs(float(q[3].real.mid()))) or not dj.rad() < abs(dj.mid()):
            return 0
        dy = q[2].imag - p[2].imag
        if abs(dy) < 1e-15:
            return 0
        return 1 if dy * djf > 0 else -1

    signs = [seg_sign(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    found: list[CriticalPoint] = []
    last = None  # index of last segment with a definite sign
    for i, s in enumerate(signs):
        if s == 0:
            continue
        if last is not None and signs[last] != s:
            found.append(_locate_change(group, hauptmodul, pts, last, i, precision))
        last = i
    return found


def _locate_change(group, hauptmodul, pts, i0, i1, precision) -> CriticalPoint:
    """Critical point between segment ``i0`` and segment ``i1`` of the sample path."""
    # a vertex (arc junction) inside the bracket is the critical point
    for idx in range(i0 + 1, i1 + 1):
        k, th, z, v, vertex = pts[idx]
        if vertex is True:
            arc = group.arcs[k]
            x = arc.x_end
            y_sq = arc.radius_sq - (x - arc.center) ** 2
            val = boundary_value(group, hauptmodul, x, y_sq, precision)
            return CriticalPoint(complex(float(x), math.sqrt(y_sq)), _c(val), y_sq == 0)
    # otherwise the change happens on one arc between two samples
    k, lo = pts[i0][0], pts[i0][1]
    hi = pts[i1 + 1][1]
    arc = group.arcs[k]
    top = math.pi / 2
    if min(lo, hi) - 1e-12 <= top <= max(lo, hi) + 1e-12 and arc.x_start <= arc.center <= arc.x_end:
        # the arc top is where y' vanishes; check that j' does not vanish there as well
        x, y_sq = arc.center, arc.radius_sq
        val = boundary_value(group, hauptmodul, x, y_sq, precision)
        return CriticalPoint(complex(float(x), math.sqrt(y_sq)), _c(val), False)
    theta = _bisect_j_turn(hauptmodul, arc, lo, hi, precision)
    import flint

    from .series import workprec
    with workprec(precision):
        z = _arc_point(arc, theta)
        val = hauptmodul.value(z, precision)
    from .modular import to_complex
    return CriticalPoint(to_complex(z), _c(val), False)


def _c(v) -> complex:
    from .modular import to_complex
    return to_complex(v)


def _bisect_j_turn(hauptmodul, arc, lo, hi, precision, tol=1e-13):
    """Angle in ``[lo, hi]`` where ``Re j`` along the arc turns (``j'`` changes sign)."""
    from .series import workprec

    def djdt(th):
        h = 1e-9
        with workprec(precision):
            a = hauptmodul.value(_arc_point(arc, th + h), precision).real
            b = hauptmodul.value(_arc_point(arc, th - h), precision).real
            return float((a - b).mid())

    a, b = (lo, hi) if lo < hi else (hi, lo)
    fa = djdt(a)
    for _ in range(200):
        if b - a < tol:
            break
        m = (a + b) / 2
        fm = djdt(m)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return (a + b) / 2


def group_critical_classes(points: list[CriticalPoint], tol: float = 1e-10) -> list[CriticalPoint]:
    classes: list[CriticalPoint] = []
    for p in points:
        if not any(abs(p.j_value - q.j_value) <= tol * max(1.0, abs(q.j_value)) for q in classes):
            classes.append(p)
    return classes


def compute_c(group: GroupDescriptor, hauptmodul=None, samples: int = 2048,
              precision: int = 128) -> int:
    """Number of classes of critical points on the lower arcs."""
    return len(group_critical_classes(critical_points(group, hauptmodul, samples, precision)))
