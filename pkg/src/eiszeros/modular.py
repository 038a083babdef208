"""Numerical evaluation of level-one building blocks anywhere in the upper half-plane.

``E_w(dz)`` is evaluated by reducing ``dz`` into the standard fundamental
domain of SL_2(Z), where ``|q| <= exp(-pi sqrt 3)`` and the q-series converges
fast, then applying the weight-``w`` automorphy factor.  Values are
``flint.acb`` balls; the truncation tail is folded into the ball radius so the
radius is an honest error estimate.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import flint

from .series import bernoulli, divisor_power_sums, workprec

# every reduced point has Im >= sqrt(3)/2; leave slack for float decisions
_REDUCED_HEIGHT = 0.85
_MAX_PRECISION = 1 << 14


class NumericalError(ArithmeticError):
    """Evaluation could not reach the requested accuracy."""


def acb(z) -> flint.acb:
    if isinstance(z, flint.acb):
        return z
    if isinstance(z, flint.arb):
        return flint.acb(z)
    z = complex(z)
    return flint.acb(z.real, z.imag)


def to_complex(v: flint.acb) -> complex:
    return complex(float(v.real.mid()), float(v.imag.mid()))


def reduce_sl2z(z: complex) -> tuple[tuple[int, int, int, int], complex]:
    """Integer matrix ``g`` with ``g z`` in the standard domain (up to float slack)."""
    a, b, c, d = 1, 0, 0, 1
    t = complex(z)
    if not (math.isfinite(t.real) and math.isfinite(t.imag)):
        raise NumericalError(f"point {z} is not finite")
    if t.imag <= 0:
        raise NumericalError(f"point {z} is not in the upper half-plane")
    for _ in range(10_000):
        n = math.floor(t.real + 0.5)
        if n:
            t -= n
            a, b = a - n * c, b - n * d
        if abs(t) < 1 - 1e-12:
            t = -1 / t
            a, b, c, d = -c, -d, a, b
        else:
            return (a, b, c, d), t
    raise NumericalError(f"reduction of {z} did not terminate")


@lru_cache(maxsize=None)
def _eisenstein_table(weight: int, precision: int) -> tuple[tuple[flint.acb, ...], float, float]:
    """Coefficients of ``E_weight`` at ``precision`` plus ``(C, p)`` tail model."""
    factor = Fraction(-2 * weight) / bernoulli(weight)
    # sigma_{w-1}(n) <= zeta(3) n^(w-1) for w >= 4; sigma_1(n) <= n (1 + ln n) <= n^2
    c_growth = abs(float(factor)) * 2.0
    p = weight - 1 if weight > 2 else 2
    r = math.exp(-2 * math.pi * _REDUCED_HEIGHT)
    target = -(precision + 8) * math.log(2)
    n = 1
    while math.log(c_growth) + p * math.log(n) + n * math.log(r) > target - 2:
        n += 1
    sig = divisor_power_sums(weight - 1, n)
    with workprec(precision):
        coeffs = [flint.acb(1)] + [flint.acb(flint.fmpq(int((factor * s).numerator), int((factor * s).denominator)))
                                   for s in sig[1:]]
    return tuple(coeffs), c_growth, float(p)


def _tail(c_growth: float, p: float, m1: int, r: float) -> float:
    ratio = r * ((m1 + 1) / m1) ** p
    return c_growth * m1 ** p * r ** m1 / (1 - ratio)


def eisenstein_reduced(weight: int, tau: flint.acb, precision: int) -> flint.acb:
    """``E_weight(tau)`` for ``tau`` already in (or near) the standard domain."""
    coeffs, c_growth, p = _eisenstein_table(weight, precision)
    q = (tau * 2).exp_pi_i()
    acc = flint.acb(0)
    for c in reversed(coeffs):
        acc = acc * q + c
    r = float(abs(q).mid())
    if r > math.exp(-2 * math.pi * _REDUCED_HEIGHT) * 1.0001:
        raise NumericalError("point is not reduced; q-series tail uncontrolled")
    err = _tail(c_growth, p, len(coeffs), max(r, 1e-300))
    return acc + flint.acb(flint.arb(0, err), flint.arb(0, err))


def eisenstein(weight: int, z, precision: int) -> flint.acb:
    """``E_weight(z)`` for any ``z`` in the upper half-plane (``E_2`` included)."""
    z = acb(z)
    g, _ = reduce_sl2z(to_complex(z))
    a, b, c, d = g
    with workprec(precision):
        if c == 0:
            tau = z + b * a  # a == d == +-1
            return eisenstein_reduced(weight, tau, precision)
        j = c * z + d
        tau = (a * z + b) / j
        val = eisenstein_reduced(weight, tau, precision)
        if weight == 2:
            # E2(g z) = j^2 E2(z) + 6 c j / (pi i)
            val = val - 6 * c * j / (flint.acb.pi() * flint.acb(0, 1))
        return val / j ** weight


def eta(z, precision: int) -> flint.acb:
    with workprec(precision):
        return flint.acb.modular_eta(acb(z))


def evaluate_adaptive(fn, z, bits: int, min_rel_bits: int | None = None, guard: int = 24,
                      max_precision: int = _MAX_PRECISION):
    """Evaluate ``fn(z, precision)`` raising the working precision as needed.

    Without ``min_rel_bits`` the ball radius must be below
    ``2^-bits * max(1, |value|)``; with it, the relative accuracy must reach
    ``min_rel_bits``.
    """
    prec = bits + guard
    while prec <= max_precision:
        v = fn(z, prec)
        if v.is_finite():
            if min_rel_bits is None:
                if float(v.rad()) <= 2.0 ** (-bits) * max(1.0, float(abs(v).mid())):
                    return v
            elif v.rel_accuracy_bits() >= min_rel_bits:
                return v
        prec *= 2
    raise NumericalError(f"could not evaluate at {z} to the requested accuracy")


def derivative(fn, z, precision: int) -> flint.acb:
    """Central-difference derivative of an analytic ``fn(z, precision)``."""
    z = acb(z)
    work = 2 * precision + 32
    with workprec(work):
        h = flint.acb(flint.arb(2) ** (-(precision // 2 + 8))) * max(1.0, float(abs(z).mid()))
        return (fn(z + h, work) - fn(z - h, work)) / (2 * h)
