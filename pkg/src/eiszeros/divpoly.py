"""Divisor polynomials built from located zeros, and the identities they satisfy.

Two conventions decide which points contribute roots:

``reduced``
    every zero class in the upper half-plane contributes ``j(z)`` with
    multiplicity ``floor(ord_z / e_z)``, and every cusp other than infinity
    contributes ``j(cusp)`` with the vanishing order there.  The remaining
    fractional part at elliptic points is absorbed by the weight-dependent
    prefactor, which is how the divisor polynomial of a level-one form is
    usually normalized.
``winding``
    every zero class contributes ``j(z)`` with its full winding multiplicity
    and cusps contribute nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import flint

from .modular import to_complex
from .series import workprec

CONVENTIONS = ("reduced", "winding")


class DegreeMismatch(ValueError):
    """Polynomials compared by an identity have different degrees."""


class CardinalityMismatch(ValueError):
    """Zero sets compared by a rescaling identity differ in size."""


@dataclass(frozen=True)
class DivisorPolynomial:
    group: str
    weight: int
    convention: str
    roots: tuple[tuple[complex, int, str], ...]  # (j value, multiplicity, "zero" | "elliptic" | "cusp")
    coefficients: tuple[complex, ...]            # highest degree first, monic
    precision: int = 128
    balls: tuple = field(default=(), compare=False, repr=False)  # same, as acb

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def tagged_roots(self):
        return list(self.roots)

    def root_multiset(self) -> list[tuple[complex, int]]:
        return [(r, m) for r, m, _ in self.roots]

    def __call__(self, x: complex) -> complex:
        acc = 0j
        for c in self.coefficients:
            acc = acc * x + c
        return acc

    def numeric_roots(self) -> list[complex]:
        """Roots recomputed from the coefficients (with repetition)."""
        if self.degree == 0:
            return []
        with workprec(2 * self.precision):
            cs = self.balls or [flint.acb(c.real, c.imag) for c in self.coefficients]
            return [to_complex(r) for r in flint.acb_poly(list(reversed(cs))).roots()]


def expand_balls(roots, precision: int = 128) -> tuple:
    """Coefficients of ``prod (X - r)^m`` as balls, highest degree first, at twice ``precision``."""
    with workprec(2 * precision):
        poly = flint.acb_poly([1])
        for r, m in roots:
            r = r if isinstance(r, flint.acb) else flint.acb(complex(r).real, complex(r).imag)
            poly *= flint.acb_poly([-r, 1]) ** m
        return tuple(reversed(poly.coeffs()))


def expand(roots, precision: int = 128) -> tuple[complex, ...]:
    return tuple(to_complex(c) for c in expand_balls(roots, precision))


def select_roots(report, convention: str = "reduced") -> list[tuple[object, int, str]]:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    out = []
    for z in report.zeros:
        j = z.j_ball if z.j_ball is not None else z.j_value
        src = "elliptic" if z.elliptic_order > 1 else "zero"
        m = z.multiplicity // z.elliptic_order if convention == "reduced" else z.multiplicity
        if m:
            out.append((j, m, src))
    if convention == "reduced":
        out.extend((c.j_value, c.order, "cusp") for c in report.cusp_roots)
    return out


def from_zeros(report, convention: str = "reduced") -> DivisorPolynomial:
    picked = select_roots(report, convention)
    balls = expand_balls([(j, m) for j, m, _ in picked], report.precision)
    roots = tuple((j if isinstance(j, complex) else to_complex(j), m, src) for j, m, src in picked)
    return DivisorPolynomial(report.group.name, report.weight, convention, roots,
                             tuple(to_complex(c) for c in balls), report.precision, balls)


def from_roots(roots, group: str = "", weight: int = 0, convention: str = "winding",
               precision: int = 128) -> DivisorPolynomial:
    """Build directly from ``(value, multiplicity)`` pairs."""
    roots = tuple((complex(r), int(m), "zero") for r, m in roots)
    balls = expand_balls([(r, m) for r, m, _ in roots], precision)
    return DivisorPolynomial(group, weight, convention, roots,
                             tuple(to_complex(c) for c in balls), precision, balls)


def _close(a: complex, b: complex, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def conjugation_identity_check(p: DivisorPolynomial, p_conj: DivisorPolynomial, tol: float = 1e-8) -> bool:
    """Whether ``p_conj(X) == (-1)^d p(-X)`` coefficientwise (relative ``tol``)."""
    if p.degree != p_conj.degree:
        raise DegreeMismatch(f"degrees {p.degree} and {p_conj.degree} differ")
    if p.convention != p_conj.convention:
        raise ValueError("polynomials use different conventions")
    d = p.degree
    # coefficient of X^k sits at position d - k
    for pos, (a, b) in enumerate(zip(p.coefficients, p_conj.coefficients)):
        k = d - pos
        if not _close((-1) ** (d + k) * a, b, tol):
            return False
    return True


def _match_multisets(xs, ys, tol: float) -> bool:
    """Greedy matching of ``(value, multiplicity)`` lists."""
    left = list(ys)
    for v, m in xs:
        hit = next((i for i, (w, n) in enumerate(left) if n == m and _close(v, w, tol)), None)
        if hit is None:
            return False
        left.pop(hit)
    return not left


def rescale_identity_check(report_big, report_small, m: int, tol: float = 1e-8) -> bool:
    """Whether the zeros of the big group's form are the small group's zeros divided by ``m``.

    Each zero ``z`` of the small form gives the points ``(z + k h) / m``
    (``h`` the small width, ``0 <= k < m``); these are folded into the big
    group's domain and compared with its zeros through the big hauptmodul.
    """
    from .forms import build_hauptmodul
    from .zeros import _canonical
    big = report_big.group
    j = build_hauptmodul(big)
    prec = report_big.precision
    images: list[tuple[complex, int]] = []
    with workprec(prec):
        h = flint.acb(flint.fmpq(report_small.group.width.numerator, report_small.group.width.denominator))
        for z in report_small.zeros:
            for k in range(m):
                w = _canonical(big, (z.z_ball + h * k) / m, prec)
                jv = to_complex(j.value(w, prec))
                if not any(_close(jv, v, tol) for v, _ in images):
                    images.append((jv, z.multiplicity))
    mine = [(z.j_value, z.multiplicity) for z in report_big.zeros]
    if len(images) != len(mine):
        raise CardinalityMismatch(f"{len(images)} folded images against {len(mine)} zeros")
    return _match_multisets(images, mine, tol)
