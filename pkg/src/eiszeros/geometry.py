"""Hyperbolic geometry for Gamma_0(N) and its Atkin-Lehner extensions.

Group elements are integer matrices ``(a, b, c, d)`` with determinant ``e``,
where ``e = 1`` for Gamma_0(N) and ``e`` is a Hall divisor of ``N`` for the
Atkin-Lehner cosets.  The Moebius action ignores the scalar, and the
normalized matrix (divided by sqrt(e)) lies in SL_2(R).

Fundamental domains are Ford domains: the strip ``|Re z| <= h/2`` above all
isometric circles ``|cz + d| = sqrt(e)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def is_hall_divisor(e: int, n: int) -> bool:
    return n % e == 0 and math.gcd(e, n // e) == 1


def mobius(g, z):
    a, b, c, d = g
    return (a * z + b) / (c * z + d)


def matmul(g, h):
    a, b, c, d = g
    p, q, r, s = h
    return (a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)


def det(g) -> int:
    a, b, c, d = g
    return a * d - b * c


def al_matrix(n: int, e: int, c: int, d: int) -> tuple[int, int, int, int] | None:
    """Complete a bottom row ``(n*c, e*d)`` to an element of the W_e coset.

    Returns ``(e*a, b, n*c, e*d)`` with determinant ``e`` or None when the
    bottom row is not admissible.  ``e == 1`` gives Gamma_0(n) elements.
    """
    # e*a*d - (n/e)*b*c == 1
    m = n // e
    g, x, y = egcd(e * d, m * c)
    if g != 1:
        return None
    # e*d*x + m*c*y == 1  ->  a = x, b = -y
    return (e * x, -y, n * c, e * d)


def in_group(g, n: int, atkin_lehner: tuple[int, ...]) -> bool:
    a, b, c, d = g
    e = det(g)
    if e == 1:
        return c % n == 0
    if e not in atkin_lehner:
        return False
    return a % e == 0 and d % e == 0 and c % n == 0


@dataclass(frozen=True)
class Circle:
    """Isometric circle ``|z - center| = sqrt(radius_sq)`` of ``element``."""

    center: Fraction
    radius_sq: Fraction
    element: tuple[int, int, int, int]

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius_sq)

    def height(self, x: float) -> float:
        t = float(self.radius_sq) - (x - float(self.center)) ** 2
        return math.sqrt(t) if t > 0 else 0.0

    def height_exact_sq(self, x: Fraction) -> Fraction:
        return self.radius_sq - (x - self.center) ** 2


def isometric_circles(n: int, atkin_lehner: tuple[int, ...], width: Fraction,
                      cmax: int) -> list[Circle]:
    """All isometric circles meeting the strip, with lower-left entry up to ``cmax*n``."""
    out = {}
    half = width / 2
    for e in (1,) + tuple(atkin_lehner):
        for c in range(1, cmax + 1):
            cc = n * c
            r_sq = Fraction(e, cc * cc)
            r = math.sqrt(r_sq)
            # centers -e*d/cc in [-half - r, half + r]
            lo = math.floor((-float(half) - r) * cc / e) - 1
            hi = math.ceil((float(half) + r) * cc / e) + 1
            for d in range(-hi, -lo + 1):
                g = al_matrix(n, e, c, d)
                if g is None:
                    continue
                center = Fraction(-e * d, cc)
                if abs(center) >= half + Fraction(r).limit_denominator(10**12) + 1:
                    continue
                key = (center, r_sq)
                if key not in out:
                    out[key] = Circle(center, r_sq, g)
    return list(out.values())


def _intersection_x(c1: Circle, c2: Circle) -> Fraction | None:
    if c1.center == c2.center:
        return None
    return (c1.radius_sq - c2.radius_sq + c2.center ** 2 - c1.center ** 2) / (2 * (c2.center - c1.center))


def lower_envelope(circles: list[Circle], width: Fraction) -> list[tuple[Circle, Fraction, Fraction]]:
    """Upper envelope of the circles over ``[-h/2, h/2]``.

    Returns ``(circle, x_start, x_end)`` pieces, left to right, with exact
    rational breakpoints.  Raises if some part of the interval is not covered.
    """
    half = width / 2
    x = -half
    pieces = []
    while x < half:
        # highest circle at x; on ties the larger center wins to the right
        live = [c for c in circles if c.height_exact_sq(x) >= 0 and
                (c.height_exact_sq(x) > 0 or c.center > x)]
        if not live:
            raise ValueError(f"strip not covered at x={x}; increase cmax")
        cur = max(live, key=lambda c: (c.height_exact_sq(x), c.center))
        nxt = half
        for c in circles:
            if c.center <= cur.center:
                continue
            xi = _intersection_x(cur, c)
            if xi is not None and x < xi < nxt and cur.height_exact_sq(xi) >= 0:
                nxt = xi
        if cur.height_exact_sq(nxt) < 0:
            raise ValueError(f"envelope gap after x={x}; increase cmax")
        pieces.append((cur, x, nxt))
        x = nxt
    return pieces


def floor_height(pieces, x: float) -> float:
    for c, x0, x1 in pieces:
        if float(x0) - 1e-15 <= x <= float(x1) + 1e-15:
            return c.height(x)
    raise ValueError("x outside strip")
