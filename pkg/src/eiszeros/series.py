"""Truncated Laurent series in ``q_h = exp(2 pi i z / h)``.

Coefficients live in one of two domains: exact rationals (``Fraction``) used
for construction and identity checks, and complex balls (``flint.acb``) at a
stated bit precision used for evaluation.  Conversion is one way, exact to
complex, through :meth:`QSeries.to_complex`.

A series stores ``lead`` (smallest exponent), ``coeffs[0..order]`` for the
exponents ``lead .. lead + order``; everything above ``lead + order`` is
unknown.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import flint

EXACT = "exact"
COMPLEX = "complex"

DEFAULT_PRECISION = 128


class SeriesError(ValueError):
    """Incompatible operands or an ill-posed series operation."""


@contextmanager
def workprec(bits: int):
    """Temporarily set the flint working precision."""
    old = flint.ctx.prec
    flint.ctx.prec = bits
    try:
        yield
    finally:
        flint.ctx.prec = old


def _is_zero(c) -> bool:
    if isinstance(c, Fraction):
        return c == 0
    return c == 0 if isinstance(c, int) else bool(c.is_zero())


@dataclass(frozen=True)
class QSeries:
    width: Fraction
    lead: int
    coeffs: tuple
    domain: str = EXACT
    precision: int | None = None

    def __post_init__(self):
        if self.width <= 0:
            raise SeriesError("width must be positive")
        if not self.coeffs:
            raise SeriesError("a series needs at least one coefficient")

    # -- construction -------------------------------------------------
    @classmethod
    def from_coeffs(cls, coeffs: Iterable, lead: int = 0, width=1,
                    domain: str = EXACT, precision: int | None = None) -> "QSeries":
        cs = tuple(Fraction(c) for c in coeffs) if domain == EXACT else tuple(coeffs)
        return cls(Fraction(width), lead, cs, domain, precision)._normalized()

    @classmethod
    def monomial(cls, exponent: int, order: int, width=1, coeff=1) -> "QSeries":
        """``coeff * q^exponent`` known up to ``q^(exponent + order)``."""
        return cls(Fraction(width), exponent, (Fraction(coeff),) + (Fraction(0),) * order)

    @classmethod
    def constant(cls, c, order: int, width=1) -> "QSeries":
        return cls.monomial(0, order, width, c)._normalized()

    def _normalized(self) -> "QSeries":
        cs = self.coeffs
        i = 0
        while i < len(cs) - 1 and _is_zero(cs[i]):
            i += 1
        if i == 0 or (i == len(cs) - 1 and _is_zero(cs[i])):
            return self
        return QSeries(self.width, self.lead + i, cs[i:], self.domain, self.precision)

    # -- basic accessors ------------------------------------------------
    @property
    def order(self) -> int:
        """Relative truncation order M: ``coeffs`` has ``M + 1`` entries."""
        return len(self.coeffs) - 1

    @property
    def max_exponent(self) -> int:
        """Largest exponent whose coefficient is known."""
        return self.lead + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def __getitem__(self, n: int):
        if n > self.max_exponent:
            raise IndexError(f"coefficient of q^{n} is beyond the truncation q^{self.max_exponent}")
        if n < self.lead:
            return Fraction(0) if self.domain == EXACT else flint.acb(0)
        return self.coeffs[n - self.lead]

    def items(self):
        return [(self.lead + i, c) for i, c in enumerate(self.coeffs)]

    def truncate(self, max_exponent: int) -> "QSeries":
        if max_exponent >= self.max_exponent:
            return self
        if max_exponent < self.lead:
            raise SeriesError("truncation would discard every coefficient")
        return QSeries(self.width, self.lead, self.coeffs[: max_exponent - self.lead + 1],
                       self.domain, self.precision)

    def __repr__(self) -> str:
        terms = []
        for n, c in self.items()[:6]:
            if not _is_zero(c):
                terms.append(f"{c}*q^{n}")
        return f"QSeries({' + '.join(terms) or '0'} + O(q^{self.max_exponent + 1}), h={self.width})"

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "QSeries"):
        if not isinstance(other, QSeries):
            raise TypeError(f"cannot combine QSeries with {type(other).__name__}")
        if self.width != other.width:
            raise SeriesError(f"width mismatch: {self.width} vs {other.width}")
        if self.domain != other.domain:
            raise SeriesError(f"domain mismatch: {self.domain} vs {other.domain}")

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return self._add_scalar(other)
        self._check(other)
        lo = min(self.lead, other.lead)
        hi = min(self.max_exponent, other.max_exponent)
        if hi < lo:
            raise SeriesError("sum has no known coefficients")
        cs = tuple(self[n] + other[n] for n in range(lo, hi + 1))
        return QSeries(self.width, lo, cs, self.domain, self.precision)._normalized()

    __radd__ = __add__

    def _add_scalar(self, c):
        if 0 > self.max_exponent:
            raise SeriesError("constant term is beyond the truncation")
        lo = min(self.lead, 0)
        cs = [self[n] for n in range(lo, self.max_exponent + 1)]
        cs[-lo] = cs[-lo] + (Fraction(c) if self.domain == EXACT else c)
        return QSeries(self.width, lo, tuple(cs), self.domain, self.precision)._normalized()

    def __neg__(self):
        return QSeries(self.width, self.lead, tuple(-c for c in self.coeffs), self.domain, self.precision)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "QSeries":
        c = Fraction(c) if self.domain == EXACT else c
        return QSeries(self.width, self.lead, tuple(c * a for a in self.coeffs),
                       self.domain, self.precision)._normalized()

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        self._check(other)
        m = min(self.order, other.order)
        if self.domain == EXACT:
            a = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in self.coeffs[: m + 1]])
            b = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in other.coeffs[: m + 1]])
            prod = (a * b).coeffs()[: m + 1]
            cs = [Fraction(int(c.p), int(c.q)) for c in prod]
            cs += [Fraction(0)] * (m + 1 - len(cs))
        else:
            cs = [flint.acb(0)] * (m + 1)
            for i in range(m + 1):
                ai = self.coeffs[i]
                for j in range(m + 1 - i):
                    cs[i + j] += ai * other.coeffs[j]
        return QSeries(self.width, self.lead + other.lead, tuple(cs), self.domain, self.precision)._normalized()

    __rmul__ = __mul__

    def reciprocal(self) -> "QSeries":
        u0 = self.coeffs[0]
        if _is_zero(u0):
            raise SeriesError("reciprocal of a series with zero leading coefficient")
        m = self.order
        if self.domain == EXACT:
            old_cap = flint.ctx.cap
            flint.ctx.cap = m + 1  # series length is capped globally in flint
            try:
                s = flint.fmpq_series([flint.fmpq(c.numerator, c.denominator) for c in self.coeffs], prec=m + 1)
                inv = (1 / s).coeffs()
            finally:
                flint.ctx.cap = old_cap
            cs = [Fraction(int(c.p), int(c.q)) for c in inv] + [Fraction(0)] * (m + 1 - len(inv))
            return QSeries(self.width, -self.lead, tuple(cs[: m + 1]))
        inv0 = 1 / u0
        out = [inv0]
        for n in range(1, m + 1):
            s = sum((self.coeffs[i] * out[n - i] for i in range(1, n + 1)),
                    Fraction(0) if self.domain == EXACT else flint.acb(0))
            out.append(-s * inv0)
        return QSeries(self.width, -self.lead, tuple(out), self.domain, self.precision)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.reciprocal()
        return self.scale(1 / Fraction(other) if self.domain == EXACT else 1 / other)

    def __pow__(self, e: int) -> "QSeries":
        if not isinstance(e, int):
            raise SeriesError("only integer powers")
        if e < 0:
            return self.reciprocal() ** (-e)
        one = self.coeffs[0] ** 0
        result = QSeries(self.width, 0, (one,) + (one * 0,) * self.order, self.domain, self.precision)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.width == other.width and self.domain == other.domain
                and self.items() == other.items())

    def __hash__(self):
        return hash((self.width, self.lead, self.coeffs))

    def agrees_with(self, other: "QSeries", upto: int | None = None) -> bool:
        """Exact coefficientwise agreement on the common known range."""
        hi = min(self.max_exponent, other.max_exponent)
        if upto is not None:
            hi = min(hi, upto)
        lo = min(self.lead, other.lead)
        return self.width == other.width and all(self[n] == other[n] for n in range(lo, hi + 1))

    # -- transformations ---------------------------------------------------
    def half_period_shift(self) -> "QSeries":
        """``f(z) -> f(z + h/2)``: the coefficient of ``q^n`` picks up ``(-1)^n``."""
        cs = tuple(c if (self.lead + i) % 2 == 0 else -c for i, c in enumerate(self.coeffs))
        return QSeries(self.width, self.lead, cs, self.domain, self.precision)

    def rescale(self, m: int, target_width=None) -> "QSeries":
        """``f(z) -> f(m z)`` expanded in ``q_{h'}`` with ``h'`` = ``target_width``.

        The exponent ``n`` becomes ``n * m * h' / h``, which must be an integer.
        """
        if m < 1:
            raise SeriesError("rescale factor must be a positive integer")
        h2 = self.width if target_width is None else Fraction(target_width)
        step = m * h2 / self.width
        if step.denominator != 1:
            raise SeriesError(f"width {h2} is inconsistent with z -> {m}z from width {self.width}")
        s = int(step)
        zero = Fraction(0) if self.domain == EXACT else flint.acb(0)
        cs = []
        for i, c in enumerate(self.coeffs):
            if i:
                cs.extend([zero] * (s - 1))
            cs.append(c)
        return QSeries(h2, self.lead * s, tuple(cs), self.domain, self.precision)

    def derivative_q(self) -> "QSeries":
        """``q d/dq``; multiply by ``2 pi i / h`` for ``d/dz``."""
        return QSeries(self.width, self.lead, tuple((self.lead + i) * c for i, c in enumerate(self.coeffs)),
                       self.domain, self.precision)

    def to_complex(self, precision: int = DEFAULT_PRECISION) -> "QSeries":
        if self.domain == COMPLEX:
            return self
        with workprec(precision):
            cs = tuple(flint.acb(flint.fmpq(c.numerator, c.denominator)) for c in self.coeffs)
        return QSeries(self.width, self.lead, cs, COMPLEX, precision)

    # -- evaluation ------------------------------------------------------------
    def growth_constant(self, exponent: float | None = None, safety: float = 4.0) -> float:
        """Constant ``C`` with ``|a_n| <= C * n^p`` over the known range, times ``safety``."""
        p = self.default_growth_exponent() if exponent is None else exponent
        best = 0.0
        for n, c in self.items():
            if n < 1:
                continue
            a = abs(float(c)) if self.domain == EXACT else float(abs(c).mid())
            best = max(best, a / n ** p)
        return safety * best

    def default_growth_exponent(self) -> float:
        # modular forms of weight w have |a_n| = O(n^(w-1)); the weight is not
        # stored, so read the empirical growth off the last coefficients
        pts = [(n, abs(float(c)) if self.domain == EXACT else float(abs(c).mid()))
               for n, c in self.items() if n >= 2]
        pts = [(n, a) for n, a in pts if a > 0]
        if len(pts) < 4:
            return 0.0
        (n1, a1), (n2, a2) = pts[len(pts) // 2], pts[-1]
        return max(0.0, math.log(a2 / a1) / math.log(n2 / n1)) + 1.0

    def tail_bound(self, abs_q: float, growth: tuple[float, float] | None = None) -> float:
        """Bound for ``sum_{n > max_exponent} |a_n| |q|^n`` under ``|a_n| <= C n^p``."""
        C, p = growth if growth is not None else (self.growth_constant(), self.default_growth_exponent())
        if C == 0:
            return 0.0
        m1 = self.max_exponent + 1
        if m1 < 1:
            m1 = 1
        ratio = abs_q * ((m1 + 1) / m1) ** p
        if ratio >= 1:
            return math.inf
        logt = math.log(C) + p * math.log(m1) + m1 * math.log(abs_q) - math.log1p(-ratio)
        return math.exp(logt) if logt < 700 else math.inf


def qh(z, width) -> "flint.acb":
    """``exp(2 pi i z / h)`` as an acb."""
    return (flint.acb(z) * 2 / flint.acb(width)).exp_pi_i()


def _as_acb(z):
    if isinstance(z, flint.acb):
        return z
    z = complex(z)
    return flint.acb(z.real, z.imag)


def evaluate(f: QSeries, z, precision: int = DEFAULT_PRECISION, y_min: float = 0.05):
    """Horner evaluation of ``f`` at ``z``.

    Returns ``(value, tail_bound)``; ``value`` is an acb and ``tail_bound``
    estimates the neglected terms above the truncation.
    """
    zz = _as_acb(z)
    if float(zz.imag.mid()) < y_min:
        raise SeriesError(f"Im z = {float(zz.imag.mid()):.3g} is below the floor {y_min}")
    g = f.to_complex(precision)
    with workprec(precision + 16):
        w = (zz * 2 / flint.acb(flint.fmpq(f.width.numerator, f.width.denominator))).exp_pi_i()
        acc = flint.acb(0)
        for c in reversed(g.coeffs):
            acc = acc * w + c
        if g.lead:
            acc = acc * w ** g.lead
        absq = float(abs(w).mid())
    return acc, f.tail_bound(absq)


def truncation_order(precision: int, growth_c: float, y_min: float, width=1) -> int:
    """Number of terms so the tail at height ``y_min`` is below ``2^-precision``."""
    rate = 2 * math.pi * y_min / float(width)
    return max(64, math.ceil((precision * math.log(2) + math.log(max(growth_c, 1.0))) / rate))


# -- classical building blocks -------------------------------------------------

def bernoulli(n: int) -> Fraction:
    b = flint.fmpq.bernoulli(n)
    return Fraction(int(b.p), int(b.q))


@lru_cache(maxsize=None)
def divisor_power_sums(power: int, count: int) -> tuple[int, ...]:
    """``sigma_power(n)`` for ``n = 0 .. count`` (entry 0 is 0)."""
    s = [0] * (count + 1)
    for d in range(1, count + 1):
        dp = d ** power
        for m in range(d, count + 1, d):
            s[m] += dp
    return tuple(s)


def eisenstein_level1(weight: int, order: int, allow_weight_two: bool = False) -> QSeries:
    """Normalized level-one Eisenstein series ``1 - (2w/B_w) sum sigma_{w-1}(n) q^n``.

    ``allow_weight_two`` gives the quasimodular ``E_2``; it is used only for
    holomorphic combinations such as ``E_2(z) - N E_2(Nz)``.
    """
    if weight % 2 or weight < 2 or (weight == 2 and not allow_weight_two):
        raise SeriesError(f"weight must be even and at least 4, got {weight}")
    factor = Fraction(-2 * weight) / bernoulli(weight)
    sig = divisor_power_sums(weight - 1, order)
    return QSeries(Fraction(1), 0, (Fraction(1),) + tuple(factor * sig[n] for n in range(1, order + 1)))


@lru_cache(maxsize=None)
def _eta_coeffs(order: int) -> tuple[int, ...]:
    cs = [0] * (order + 1)
    # pentagonal numbers k(3k-1)/2 for k = 0, +-1, +-2, ...
    k = 0
    while True:
        hit = False
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2
            if e <= order:
                cs[e] += -1 if kk % 2 else 1
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return tuple(cs)


def eta_expansion(order: int) -> QSeries:
    """``prod_{n>=1} (1 - q^n)`` to ``q^order``, i.e. ``eta(z) / q^(1/24)``."""
    return QSeries(Fraction(1), 0, tuple(Fraction(c) for c in _eta_coeffs(order)))


def eta_quotient(recipe: Sequence[tuple[int, int]], order: int) -> QSeries:
    """``prod eta(d z)^r`` as a Laurent series in ``q``.

    The ``q^(sum d r / 24)`` prefactor must be an integral power of ``q``.
    ``order`` is the relative truncation order of the result.
    """
    total = sum(d * r for d, r in recipe)
    if total % 24:
        raise SeriesError(f"eta quotient has fractional q-exponent {Fraction(total, 24)}")
    result = QSeries.constant(1, order)
    for d, r in recipe:
        if d < 1:
            raise SeriesError("eta quotient divisors must be positive")
        base = eta_expansion(order // d + 1).rescale(d).truncate(order)
        result = result * base ** r
    return QSeries(result.width, result.lead + total // 24, result.coeffs, result.domain, result.precision)
