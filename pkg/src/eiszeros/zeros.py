"""Locating, classifying and counting the zeros of E_w^G in a fundamental domain.

Zeros are counted with the argument principle.  Along every box edge the
phase of ``f`` is tracked by bisection until ``log f`` looks linear between
samples, so the winding number is a sum of small, unambiguous phase steps.
Boxes are split until each holds the zeros of a single point, which is then
polished by Newton's method and certified by a tiny box around it.

The search region is F with two zero-free pieces removed: everything above a
height where ``|f - 1| <= 1/2`` follows from the q-expansion, and a horoball
at every cusp vertex where the cusp expansion is dominated by its lead term.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint

from . import geometry as geo
from . import modular
from .forms import (DEFAULT_PRECISION, EisensteinForm, build_eisenstein, build_hauptmodul,
                    cusp_expansion, cusp_order)
from .groups import CuspData, GroupDescriptor, _scaling_matrix, compute_a0_a1, compute_c, cusp_width, \
    get_group, stabilizer_order
from .series import QSeries, SeriesError, evaluate, workprec

IN_BOTH = "in [a0,a1]"
IN_HALFLINE = "in [a0,inf) only"
IN_LEFT_HALFLINE = "in (-inf,a1] only"
OUTSIDE = "outside both"

TWO_PI = 2 * math.pi
_MAX_STEP = math.pi / 4   # largest accepted phase step between samples
_LINEARITY = 0.3          # accepted deviation of log f from its chord
_MAX_TURN = 1.0           # accepted segment length times |f'/f|
_JITTERS = (0.0173, 0.0291, 0.0407, 0.0113)


class ZeroLocatorError(ArithmeticError):
    """The zero search could not complete."""


class BoundaryZero(ZeroLocatorError):
    """A zero sits on (or numerically on) a box edge."""


class ValenceMismatch(ZeroLocatorError):
    """The located zeros do not account for the valence formula."""


class NewtonDivergence(ZeroLocatorError):
    pass


@dataclass(frozen=True)
class Box:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError(f"degenerate box {self}")

    @property
    def diameter(self) -> float:
        return math.hypot(self.x1 - self.x0, self.y1 - self.y0)

    @property
    def center(self) -> complex:
        return complex((self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2)

    def contains(self, z: complex) -> bool:
        return self.x0 <= z.real <= self.x1 and self.y0 <= z.imag <= self.y1

    def corners(self) -> tuple[complex, complex, complex, complex]:
        return (complex(self.x0, self.y0), complex(self.x1, self.y0),
                complex(self.x1, self.y1), complex(self.x0, self.y1))

    def split(self, fx: float = 0.5, fy: float = 0.5) -> list["Box"]:
        xm = self.x0 + fx * (self.x1 - self.x0)
        ym = self.y0 + fy * (self.y1 - self.y0)
        return [Box(self.x0, xm, self.y0, ym), Box(xm, self.x1, self.y0, ym),
                Box(self.x0, xm, ym, self.y1), Box(xm, self.x1, ym, self.y1)]

    @staticmethod
    def around(z: complex, r: float) -> "Box":
        return Box(z.real - r, z.real + r, z.imag - r, z.imag + r)


def _wrap(t: float) -> float:
    return (t + math.pi) % TWO_PI - math.pi


def as_evaluator(f, y_min: float = 1e-3):
    """``fn(z, precision) -> acb`` for a form, a hauptmodul-like callable or a q-series."""
    if isinstance(f, QSeries):
        def fn(z, precision):
            try:
                v, tail = evaluate(f, z, precision, y_min=y_min)
            except SeriesError as exc:
                raise ZeroLocatorError(str(exc)) from exc
            if not math.isfinite(tail):
                raise ZeroLocatorError("q-series tail is unbounded at this height")
            return v + flint.acb(flint.arb(0, tail), flint.arb(0, tail))
        return fn
    if hasattr(f, "value"):
        return f.value
    if callable(f):
        return f
    raise TypeError(f"cannot evaluate {type(f).__name__}")


class PhaseTracker:
    """Caches ``log f`` at sample points and phase changes along segments."""

    def __init__(self, fn, precision: int = 64, y_min: float = 1e-4, min_length: float = 1e-13):
        self.fn = fn
        self.precision = precision
        self.y_min = y_min
        self.min_length = min_length
        self._logs: dict[complex, complex] = {}
        self._dlogs: dict[complex, float] = {}
        self._segments: dict[tuple[complex, complex], float] = {}
        self.evaluations = 0

    def log(self, z: complex) -> complex:
        v = self._logs.get(z)
        if v is not None:
            return v
        if z.imag < self.y_min:
            raise ZeroLocatorError(f"sample {z} lies below the height floor {self.y_min}")
        val = self._value(z)
        self.evaluations += 1
        with workprec(self.precision + 32):
            mag = abs(val)
            unit = val / mag.mid()  # arg of a ball straddling the cut is useless; use the midpoint
            v = complex(float(mag.log().mid()), math.atan2(float(unit.imag.mid()), float(unit.real.mid())))
        self._logs[z] = v
        return v

    def _value(self, z: complex):
        try:
            return modular.evaluate_adaptive(self.fn, z, bits=self.precision, min_rel_bits=16,
                                             max_precision=16 * self.precision)
        except modular.NumericalError as exc:
            raise BoundaryZero(f"f vanishes to working precision at {z}") from exc

    def dlog(self, z: complex) -> float:
        """``|f'/f|`` at ``z`` from a one-sided difference."""
        v = self._dlogs.get(z)
        if v is not None:
            return v
        eps = 1e-7 * max(abs(z), 1e-3)
        f0 = self._value(z)
        f1 = self._value(z + eps)
        self.evaluations += 1
        with workprec(self.precision + 32):
            v = float(abs((f1 - f0) / (f0 * eps)).mid())
        self._dlogs[z] = v
        return v

    def phase_change(self, a: complex, b: complex) -> float:
        """Continuous change of ``arg f`` from ``a`` to ``b``."""
        key = (a, b)
        if key in self._segments:
            return self._segments[key]
        if (b, a) in self._segments:
            return -self._segments[(b, a)]
        total = 0.0
        stack = [(a, b)]
        while stack:
            p, q = stack.pop()
            lp, lq = self.log(p), self.log(q)
            m = (p + q) / 2
            lm = self.log(m)
            d1 = _wrap(lm.imag - lp.imag)
            d2 = _wrap(lq.imag - lm.imag)
            dev = complex(lm.real - (lp.real + lq.real) / 2, d1 - (d1 + d2) / 2)
            if (abs(d1) < _MAX_STEP and abs(d2) < _MAX_STEP and abs(dev) < _LINEARITY
                    and abs(q - p) * max(self.dlog(p), self.dlog(m), self.dlog(q)) < _MAX_TURN):
                total += d1 + d2
                continue
            if abs(q - p) < self.min_length:
                raise BoundaryZero(f"zero on the segment near {m}")
            stack.append((m, q))
            stack.append((p, m))
        self._segments[key] = total
        return total

    def winding(self, box: Box) -> int:
        c = box.corners()
        total = sum(self.phase_change(c[k], c[(k + 1) % 4]) for k in range(4))
        n = round(total / TWO_PI)
        if abs(total / TWO_PI - n) > 0.25:
            raise ZeroLocatorError(f"winding residue too large on {box}")
        if n < 0:
            raise ZeroLocatorError(f"negative winding {n} on {box}: f has a pole or the trace failed")
        return n


def count_zeros_in_box(f, box, precision: int = 64, y_min: float = 1e-3, jitter_budget: int = 4) -> int:
    """Number of zeros (with multiplicity) of ``f`` inside ``box = (x0, x1, y0, y1)``.

    When a zero sits on the boundary the box is perturbed outward by
    ``10^-3`` of its diameter, up to ``jitter_budget`` times.
    """
    b = box if isinstance(box, Box) else Box(*box)
    if b.y0 < y_min:
        raise ZeroLocatorError(f"box bottom {b.y0} is below the height floor {y_min}")
    tracker = PhaseTracker(as_evaluator(f, y_min), precision, y_min, 1e-12 * b.diameter)
    for attempt in range(jitter_budget + 1):
        try:
            return tracker.winding(b)
        except BoundaryZero:
            d = 1e-3 * b.diameter * (attempt + 1)
            b = Box(b.x0 - d, b.x1 + 0.7 * d, b.y0 - 0.3 * d if b.y0 - 0.3 * d > y_min else b.y0,
                    b.y1 + 0.9 * d)
    raise BoundaryZero(f"zero on the boundary of {box} after {jitter_budget} perturbations")


# -- zero-free regions ---------------------------------------------------------

def _dominance_height(terms: list[tuple[int, float]], period: float, ratio: float = 0.5) -> float:
    """Least ``Y`` with ``sum |b_n| exp(-2 pi n Y / period) <= ratio`` (``n >= 1``)."""
    def s(y):
        return sum(a * math.exp(-TWO_PI * n * y / period) for n, a in terms)
    if not terms or s(1e-9) <= ratio:
        return 0.0
    lo, hi = 1e-9, 1.0
    while s(hi) > ratio:
        lo, hi = hi, hi * 2
        if hi > 1e6:
            raise ZeroLocatorError("could not bound the zero-free height")
    for _ in range(60):
        mid = (lo + hi) / 2
        if s(mid) > ratio:
            lo = mid
        else:
            hi = mid
    return hi


def zero_free_height(form: EisensteinForm, order: int = 120) -> float:
    """Height above which ``|f - 1| <= 1/2`` by the q-expansion."""
    terms = [(n, abs(float(c))) for n, c in form.qexp.items() if 1 <= n <= order]
    return _dominance_height(terms, float(form.qexp.width))


@dataclass(frozen=True)
class Horoball:
    """Zero-free disc tangent to the real axis at the cusp vertex ``x``."""

    x: float
    radius: float
    cusp_order: int

    @property
    def center(self) -> complex:
        return complex(self.x, self.radius)

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) < self.radius

    def upper(self, x: float) -> float:
        t = self.radius ** 2 - (x - self.x) ** 2
        return self.radius + math.sqrt(t) if t > 0 else 0.0

    def lower(self, x: float) -> float:
        t = self.radius ** 2 - (x - self.x) ** 2
        return self.radius - math.sqrt(t) if t > 0 else math.inf


def _cusp_vertices(group: GroupDescriptor) -> list[Fraction]:
    xs = []
    for arc in group.arcs:
        for x in (arc.x_start, arc.x_end):
            if (x - arc.center) ** 2 == arc.radius_sq and x not in xs:
                xs.append(x)
    return xs


def horoballs(form: EisensteinForm, terms: int = 40) -> list[Horoball]:
    group = form.group
    out = []
    for x in _cusp_vertices(group):
        sigma = _scaling_matrix(x)
        width = cusp_width(group.level, group.atkin_lehner, x)
        ser = cusp_expansion(form, CuspData(x, width, sigma), order=terms)
        if ser.is_zero():
            raise ZeroLocatorError(f"{group.name}: vanishing cusp expansion at {x}")
        nu = ser.lead
        lead = float(abs(ser[nu]).mid())
        rel = [(n - nu, float(abs(c).mid()) / lead) for n, c in ser.items() if n > nu]
        y_c = max(_dominance_height(rel, float(width)), 1.0 / float(width))
        c = sigma[2]
        out.append(Horoball(float(x), 1.0 / (2 * c * c * y_c), nu))
    return out


@dataclass
class SearchRegion:
    """Columns of boxes covering F minus its zero-free parts."""

    group: GroupDescriptor
    top: float
    balls: list[Horoball]

    def floor(self, x: float) -> float:
        h = self.group.h
        xr = x - h * round(x / h)
        xr = min(max(xr, -h / 2), h / 2)
        g = self.group.floor(xr)
        for b in self.balls:
            for shift in (-h, 0.0, h):
                bx = b.x + shift
                if abs(x - bx) < b.radius and g >= b.lower(x):
                    g = max(g, b.upper(x))
        return g

    def columns(self, jitter: float) -> list[Box]:
        group = self.group
        h = group.h
        r_min = min(a.radius for a in group.arcs)
        step = min(0.08 * h, 0.6 * r_min)
        x_lo, x_hi = -h / 2 - jitter * h, h / 2 + 0.61 * jitter * h
        n = math.ceil((x_hi - x_lo) / step)
        width = (x_hi - x_lo) / n
        boxes = []
        for k in range(n):
            xa, xb = x_lo + k * width, x_lo + (k + 1) * width
            samples = [self.floor(xa + t * (xb - xa) / 64) for t in range(65)]
            y = 0.97 * min(samples)
            if y <= 0:
                raise ZeroLocatorError(f"{group.name}: column at {xa:.4f} reaches the real axis")
            y_top = max(self.top, 1.02 * max(samples)) + 0.01 * h
            while y < y_top:
                dy = max(width, 0.25 * y)
                boxes.append(Box(xa, xb, y, min(y + dy, y_top) if y_top - y - dy > 0.3 * dy else y_top))
                y = boxes[-1].y1
        return boxes


def search_region(form: EisensteinForm) -> SearchRegion:
    return SearchRegion(form.group, zero_free_height(form), horoballs(form))


# -- isolation -----------------------------------------------------------------

@dataclass(frozen=True)
class RawZero:
    z: flint.acb
    multiplicity: int


def _to_complex(v) -> complex:
    return modular.to_complex(v)


def newton(fn, z0: complex, multiplicity: int, precision: int, radius: float,
           max_iter: int = 80) -> flint.acb:
    """Modified Newton ``z -= m f / f'`` until the step is below ``2^(-precision/2)``."""
    with workprec(precision):
        z = modular.acb(z0)
    tol = 2.0 ** (-precision / 2)
    for _ in range(max_iter):
        try:
            f = modular.evaluate_adaptive(fn, z, bits=precision, min_rel_bits=8,
                                          max_precision=8 * precision)
        except modular.NumericalError:
            return z  # f is zero to the working precision here
        d = modular.derivative(fn, z, precision)
        with workprec(precision):
            if not d.is_finite() or abs(d).mid() == 0:
                raise NewtonDivergence(f"vanishing derivative at {_to_complex(z)}")
            step = f * multiplicity / d
            if not step.is_finite():
                raise NewtonDivergence(f"non-finite Newton step at {_to_complex(z)}")
            z = z - step
            z = flint.acb(z.real.mid(), z.imag.mid())
        zc = _to_complex(z)
        if abs(zc - z0) > radius or zc.imag <= 0:
            raise NewtonDivergence(f"Newton left the box around {z0}")
        if float(abs(step).mid()) < tol * max(1.0, abs(zc)):
            return z
    raise NewtonDivergence(f"Newton did not converge from {z0}")


def isolate(tracker: PhaseTracker, box: Box, count: int, precision: int, scale: float,
            max_depth: int = 40) -> list[RawZero]:
    """Split ``box`` until each zero cluster is certified at a single point."""
    out = []
    stack = [(box, count, 0)]
    while stack:
        b, n, depth = stack.pop()
        if n == 0:
            continue
        if n == 1 or b.diameter < 0.02 * scale:
            z = _try_point(tracker, b, n, precision, scale)
            if z is not None:
                out.append(RawZero(z, n))
                continue
        if depth >= max_depth:
            raise ZeroLocatorError(f"could not separate {n} zeros in {b}")
        children = _split_counted(tracker, b, n, depth)
        stack.extend((c, k, depth + 1) for c, k in children if k)
    return out


def _split_counted(tracker: PhaseTracker, b: Box, n: int, depth: int):
    for fx in (0.5, 0.4731, 0.5419):
        kids = b.split(fx, 1 - fx + 0.0037 * (depth % 3))
        try:
            counts = [tracker.winding(k) for k in kids]
        except BoundaryZero:
            continue
        if sum(counts) != n:
            raise ZeroLocatorError(f"child counts {counts} do not add up to {n} in {b}")
        return list(zip(kids, counts))
    raise BoundaryZero(f"every split of {b} passes through a zero")


def _try_point(tracker: PhaseTracker, b: Box, n: int, precision: int, scale: float):
    try:
        z = newton(tracker.fn, b.center, n, precision, 2 * b.diameter)
    except (NewtonDivergence, modular.NumericalError):
        return None
    zc = _to_complex(z)
    if not b.contains(zc):
        return None
    r = min(1e-6 * scale, 0.2 * b.diameter)
    for factor in (1.0, 1.37, 0.71):
        try:
            if tracker.winding(Box.around(zc, r * factor)) == n:
                return z
            return None
        except BoundaryZero:
            continue
    return None


# -- classification and reports ------------------------------------------------

@dataclass(frozen=True)
class Zero:
    z: complex
    multiplicity: int
    j_value: complex
    on_arc: bool
    j_real: bool
    in_interval: str
    kind: str                 # "interior", "boundary" or "elliptic(e)"
    elliptic_order: int = 1
    arc_distance: float = 0.0
    z_ball: flint.acb | None = field(default=None, compare=False, repr=False)
    j_ball: flint.acb | None = field(default=None, compare=False, repr=False)

    @property
    def weight_in_valence(self) -> Fraction:
        return Fraction(self.multiplicity, self.elliptic_order)


@dataclass(frozen=True)
class CuspRoot:
    label: str
    j_value: complex
    order: int


@dataclass
class ZeroReport:
    group: GroupDescriptor
    weight: int
    zeros: list[Zero]
    valence_expected: Fraction
    valence_found: Fraction
    a0: float
    a1: float
    c: int
    s1: int
    cusp_roots: list[CuspRoot]
    precision: int = DEFAULT_PRECISION
    bound_halfline: int = 0
    bound_interval: int = 0
    off_halfline_count: int = 0
    off_left_halfline_count: int = 0
    off_interval_count: int = 0
    degree: int = 0
    m_halfline: int = 0
    m_halfline_no_cusps: int = 0
    m_left_halfline: int = 0
    m_left_halfline_no_cusps: int = 0
    verdict_11prime: bool = False
    verdict_12: bool = False
    verdict_31: bool = False
    advisory: bool = False
    delta_imag: float = 0.0

    @property
    def off_arc(self) -> list[Zero]:
        return [z for z in self.zeros if not z.on_arc]

    @property
    def valence_total(self) -> Fraction:
        return self.valence_expected + sum((Fraction(r.order) for r in self.cusp_roots), Fraction(0))


def classify_zero(z: complex, j_value: complex, group: GroupDescriptor, a0: float, a1: float,
                  delta_geom: float | None = None, delta_imag: float | None = None) -> dict:
    """On-arc, reality and interval fields for a point of F with hauptmodul value ``j_value``."""
    h = group.h
    delta_geom = 1e-6 * h if delta_geom is None else delta_geom
    delta_imag = 1e-8 * max(1.0, abs(a1 - a0)) if delta_imag is None else delta_imag
    dist = group.distance_to_arcs(z)
    on_arc = dist < delta_geom
    j_real = abs(j_value.imag) < delta_imag
    interval = OUTSIDE
    if j_real:
        lo = j_value.real >= a0 - delta_imag
        hi = j_value.real <= a1 + delta_imag
        interval = IN_BOTH if lo and hi else IN_HALFLINE if lo else IN_LEFT_HALFLINE if hi else OUTSIDE
    side = abs(abs(z.real) - h / 2) < delta_geom
    return {"on_arc": on_arc, "j_real": j_real, "in_interval": interval, "arc_distance": dist,
            "boundary": on_arc or side}


@lru_cache(maxsize=None)
def group_constants(name: str) -> tuple[float, float, int]:
    """``(a0, a1, c)`` for a registry group."""
    group = get_group(name)
    j = build_hauptmodul(group)
    a0, a1 = compute_a0_a1(group, j)
    return a0, a1, compute_c(group, j)


def _canonical(group: GroupDescriptor, z: flint.acb, precision: int) -> flint.acb:
    """Move ``z`` into F; points on the right edge go to the left edge."""
    w, g = group.reduce(_to_complex(z))
    with workprec(precision):
        a, b, c, d = g
        v = (z * a + b) / (z * c + d)
        if abs(w.real - group.h / 2) < 1e-12 * group.h:
            v = v - flint.acb(flint.fmpq(group.width.numerator, group.width.denominator))
    return v


def _cusp_roots(group: GroupDescriptor, form: EisensteinForm, j, precision: int) -> list[CuspRoot]:
    from .groups import cusp_point_value
    out = []
    for cusp in group.cusps:
        if cusp.is_infinity:
            continue
        order = form.cusp_orders[cusp.label]
        if order:
            v = cusp_point_value(j.value, cusp.representative, cusp.width, precision)
            out.append(CuspRoot(cusp.label, _to_complex(v), order))
    return out


def _collect(group: GroupDescriptor, raw: list[RawZero], j, a0, a1, precision) -> list[Zero]:
    zeros: list[Zero] = []
    delta_j = 1e-8
    for r in sorted(raw, key=lambda r: _to_complex(r.z).real):
        v = _canonical(group, r.z, precision)
        vc = _to_complex(v)
        jv = j.value(v, precision)
        jc = _to_complex(jv)
        dup = next((z for z in zeros if abs(z.j_value - jc) <= delta_j * max(1.0, abs(jc))), None)
        if dup is not None:
            if dup.multiplicity != r.multiplicity:
                raise ZeroLocatorError(f"equivalent zeros at {dup.z} and {vc} have different multiplicities")
            continue
        e = stabilizer_order(group.level, group.atkin_lehner, group.width, vc)
        info = classify_zero(vc, jc, group, a0, a1)
        kind = f"elliptic({e})" if e > 1 else "boundary" if info["boundary"] else "interior"
        zeros.append(Zero(vc, r.multiplicity, jc, info["on_arc"], info["j_real"], info["in_interval"],
                          kind, e, info["arc_distance"], v, jv))
    zeros.sort(key=lambda z: (z.z.real, z.z.imag))
    return zeros


def _locate_raw(form: EisensteinForm, precision: int, jitter: float) -> list[RawZero]:
    region = search_region(form)
    h = form.group.h
    tracker = PhaseTracker(form.value, 64, y_min=1e-5, min_length=1e-13 * h)
    raw = []
    for box in region.columns(jitter):
        n = tracker.winding(box)
        if n:
            raw.extend(isolate(tracker, box, n, precision, h))
    return raw


def locate_zeros(group, weight: int, precision: int = DEFAULT_PRECISION) -> ZeroReport:
    """All zero classes of ``E_weight`` for ``group`` in F, with verdicts."""
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    name = group if isinstance(group, str) else group.name
    return _locate_cached(name, weight, precision)


@lru_cache(maxsize=None)
def _locate_cached(name: str, weight: int, precision: int) -> ZeroReport:
    from .forms import compute_s1
    group = get_group(name)
    form = build_eisenstein(group, weight)
    j = build_hauptmodul(group)
    a0, a1, c = group_constants(name)
    cusp_roots = _cusp_roots(group, form, j, precision)
    expected = Fraction(weight) * group.index / 12 - sum(Fraction(r.order) for r in cusp_roots)
    last = None
    for jitter in _JITTERS:
        try:
            raw = _locate_raw(form, precision, jitter)
            zeros = _collect(group, raw, j, a0, a1, precision)
        except BoundaryZero as exc:
            last = exc
            continue
        found = sum((z.weight_in_valence for z in zeros), Fraction(0))
        if found == expected:
            report = ZeroReport(group, weight, zeros, expected, found, a0, a1, c,
                                compute_s1(group, weight), cusp_roots, precision,
                                delta_imag=1e-8 * max(1.0, abs(a1 - a0)))
            verify_theorems(report, report.c, report.s1)
            return report
        last = ValenceMismatch(f"{name}, weight {weight}: found {found}, expected {expected}")
    raise last


def verify_theorems(report: ZeroReport, c: int, s1: int, convention: str = "reduced") -> tuple[bool, bool, bool]:
    """Fill the counts and verdicts of ``report``; returns the three verdicts."""
    from .divpoly import from_zeros
    poly = from_zeros(report, convention)
    a0, a1, tol = report.a0, report.a1, report.delta_imag
    bound = c - s1
    real = [(r, m, src) for r, m, src in poly.tagged_roots() if abs(r.imag) < tol]
    right = [(r, m, src) for r, m, src in real if r.real >= a0 - tol]
    left = [(r, m, src) for r, m, src in real if r.real <= a1 + tol]
    middle = [(r, m, src) for r, m, src in right if r.real <= a1 + tol]

    def odd_distinct(roots, cusps=True):
        return sum(1 for r, m, src in roots if m % 2 and (cusps or src != "cusp"))

    d = poly.degree
    report.degree = d
    report.bound_halfline, report.bound_interval = bound, 2 * bound
    report.off_halfline_count = d - sum(m for _, m, _ in right)
    report.off_left_halfline_count = d - sum(m for _, m, _ in left)
    report.off_interval_count = d - sum(m for _, m, _ in middle)
    report.m_halfline, report.m_halfline_no_cusps = odd_distinct(right), odd_distinct(right, False)
    report.m_left_halfline, report.m_left_halfline_no_cusps = odd_distinct(left), odd_distinct(left, False)
    report.verdict_11prime = report.off_halfline_count <= bound and report.m_halfline + bound >= d
    report.verdict_31 = report.off_left_halfline_count <= bound and report.m_left_halfline + bound >= d
    report.verdict_12 = report.off_interval_count <= 2 * bound
    report.advisory = not report.group.acceptable
    return report.verdict_11prime, report.verdict_12, report.verdict_31


def sweep(group, weights, precision: int = DEFAULT_PRECISION) -> list[dict]:
    """Per-weight totals, off-arc counts and the largest off-arc distance to the arcs."""
    rows = []
    for w in sorted(weights):
        rep = locate_zeros(group, w, precision)
        off = rep.off_arc
        rows.append({"weight": w, "zeros": sum(z.multiplicity for z in rep.zeros),
                     "classes": len(rep.zeros), "off_arc": sum(z.multiplicity for z in off),
                     "max_off_arc_distance": max((z.arc_distance for z in off), default=0.0)})
    return rows


CSV_HEADER = ("group", "weight", "re_z", "im_z", "multiplicity", "re_j", "im_j", "on_arc",
              "in_interval", "kind")


def _digits(precision: int) -> int:
    return max(6, int(precision / 2 * math.log10(2)) - 2)


def _fmt(x: flint.arb, digits: int) -> str:
    return x.str(digits, radius=False)


def report_rows(report: ZeroReport) -> list[list[str]]:
    digits = _digits(report.precision)
    rows = []
    for z in report.zeros:
        with workprec(report.precision):
            rows.append([report.group.name, str(report.weight), _fmt(z.z_ball.real, digits),
                         _fmt(z.z_ball.imag, digits), str(z.multiplicity), _fmt(z.j_ball.real, digits),
                         _fmt(z.j_ball.imag, digits), str(z.on_arc).lower(), z.in_interval, z.kind])
    return rows


def write_csv(reports, stream=None) -> str:
    """CSV with one row per zero; returns the text when no stream is given."""
    out = stream if stream is not None else io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rep in ([reports] if isinstance(reports, ZeroReport) else reports):
        w.writerows(report_rows(rep))
    return out.getvalue() if stream is None else ""
