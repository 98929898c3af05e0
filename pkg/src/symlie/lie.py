"""Graded Lie bracket, exp/log, the BCH product and operator series in ``ad``.

BCH is computed as ``log(exp(x) exp(y))`` inside the truncated tensor
algebra, never from a table of closed-form coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Callable, Iterable, Sequence

from . import kernels
from .core import Element, Rational, Scalar, rational


class PreconditionError(ValueError):
    """An operation was called outside its mathematical domain."""


def bracket(a: Element, b: Element) -> Element:
    """Graded commutator ``[a, b] = ab - (-1)^{|a||b|} ba``, bilinear in a and b."""
    a._check(b)
    ctx = a.ctx
    return Element(ctx, kernels.bracket(a.terms, b.terms, ctx.degrees, ctx.truncation))


def ad_power(x: Element, i: int, w: Element) -> Element:
    """``ad_x^i (w)``."""
    if i < 0:
        raise ValueError("power must be non-negative")
    x._check(w)
    for _ in range(i):
        if not w:
            break
        w = bracket(x, w)
    return w


def ad(x: Element) -> Callable[[Element], Element]:
    return lambda w: bracket(x, w)


def dynkin_map(w: Element) -> Element:
    """Left-normed bracketing of every word; ``dynkin_map(p) = n p`` for Lie ``p`` of length n."""
    return Element(w.ctx, kernels.dynkin(w.terms, w.ctx.degrees))


def lie_projection(w: Element) -> Element:
    """Dynkin projector: rescale each length-n part of ``dynkin_map`` by 1/n.

    Idempotent onto the Lie (primitive) elements without constant term.
    """
    out = w.ctx.zero()
    for n in sorted(w.lengths()):
        if n == 0:
            continue
        out = out + dynkin_map(w.homogeneous_part(n)).scale(Rational(1, n))
    return out


def coproduct_defect(w: Element) -> dict:
    """``Δ(w) - w⊗1 - 1⊗w`` as a map ``(left_word, right_word) -> coeff``."""
    return kernels.coproduct_defect(w.terms, w.ctx.degrees)


def is_primitive(w: Element) -> bool:
    return not coproduct_defect(w)


def _require_exp_domain(x: Element, what: str) -> None:
    if x.constant():
        raise PreconditionError(f"{what}: argument has a nonzero constant term")
    deg = x.degree()
    if deg not in (None, 0):
        raise PreconditionError(f"{what}: argument has degree {deg}, expected 0")


def exp(x: Element) -> Element:
    """Truncated exponential of a degree-0 element without constant term."""
    _require_exp_domain(x, "exp")
    ctx = x.ctx
    out = ctx.unit()
    power = ctx.unit()
    for i in range(1, ctx.truncation + 1):
        power = power * x
        if not power:
            break
        out = out + power.scale(Rational(1, factorial(i)))
    return out


def log(g: Element) -> Element:
    """Truncated logarithm of an element with constant term exactly 1."""
    if g.constant() != 1:
        raise PreconditionError("log: constant term must be exactly 1")
    ctx = g.ctx
    u = g - ctx.unit()
    out = ctx.zero()
    power = ctx.unit()
    for i in range(1, ctx.truncation + 1):
        power = power * u
        if not power:
            break
        c = Rational(1, i) if i % 2 else Rational(-1, i)
        out = out + power.scale(c)
    return out


def bch(x: Element, y: Element) -> Element:
    """BCH product ``x * y = log(e^x e^y)``."""
    return log(exp(x) * exp(y))


def bch_multi(elements: Sequence[Element]) -> Element:
    """``w_1 * w_2 * ... * w_r``; the empty product is rejected."""
    if not elements:
        raise ValueError("bch_multi needs at least one element")
    if len(elements) == 1:
        _require_exp_domain(elements[0], "bch")
        return elements[0]
    g = exp(elements[0])
    for w in elements[1:]:
        g = g * exp(w)
    return log(g)


def exp_ad(x: Element, w: Element) -> Element:
    """``e^{ad_x}(w) = sum_i ad_x^i(w) / i!``."""
    _require_exp_domain(x, "exp_ad")
    x._check(w)
    out = w
    term = w
    for i in range(1, w.ctx.truncation + 1):
        term = bracket(x, term)
        if not term:
            break
        out = out + term.scale(Rational(1, factorial(i)))
    return out


# Bernoulli numbers and operator series


@lru_cache(maxsize=None)
def _bernoulli_plus(n: int) -> Rational:
    # Akiyama-Tanigawa; yields B_1 = +1/2
    row = [Rational(1, m + 1) for m in range(n + 1)]
    for j in range(n, 0, -1):
        for m in range(j):
            row[m] = (m + 1) * (row[m] - row[m + 1])
    return row[0]


def bernoulli(n: int) -> Rational:
    """Bernoulli number ``B_n`` with the convention ``B_1 = -1/2``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    b = _bernoulli_plus(n)
    return -b if n == 1 else b


@dataclass(frozen=True)
class OperatorSeries:
    """Formal power series ``sum_n c_n t^n`` to be evaluated at ``t = ad_x``."""

    name: str
    coefficients: tuple

    def __len__(self) -> int:
        return len(self.coefficients)

    @classmethod
    def from_coefficients(cls, name: str, coeffs: Iterable[Scalar]) -> "OperatorSeries":
        return cls(name, tuple(rational(c) for c in coeffs))


def phi_series(order: int) -> OperatorSeries:
    """``(e^t - 1)/t = sum t^n/(n+1)!``."""
    return OperatorSeries("PHI", tuple(Rational(1, factorial(n + 1)) for n in range(order + 1)))


def todd_series(order: int) -> OperatorSeries:
    """``t/(e^t - 1) = sum B_n t^n / n!``."""
    return OperatorSeries(
        "TODD", tuple(bernoulli(n) / factorial(n) for n in range(order + 1))
    )


def todd_minus_series(order: int) -> OperatorSeries:
    """``t/(1 - e^{-t})``, i.e. the Todd series at ``-t``."""
    return OperatorSeries(
        "TODD_MINUS",
        tuple((-1) ** n * bernoulli(n) / factorial(n) for n in range(order + 1)),
    )


def todd_flip_series(order: int) -> OperatorSeries:
    """``t/(1 - e^t) = -t/(e^t - 1)``."""
    return OperatorSeries(
        "TODD_FLIP", tuple(-bernoulli(n) / factorial(n) for n in range(order + 1))
    )


SERIES = {
    "PHI": phi_series,
    "TODD": todd_series,
    "TODD_MINUS": todd_minus_series,
    "TODD_FLIP": todd_flip_series,
}


def series_apply(f: OperatorSeries, x: Element, w: Element) -> Element:
    """``sum_n c_n ad_x^n (w)`` for ``n <= N``."""
    n_max = w.ctx.truncation
    if len(f) < n_max + 1:
        raise ValueError(
            f"series {f.name} has {len(f)} coefficients, truncation {n_max} needs {n_max + 1}"
        )
    x._check(w)
    out = w.scale(f.coefficients[0])
    term = w
    for n in range(1, n_max + 1):
        term = bracket(x, term)
        if not term:
            break
        c = f.coefficients[n]
        if c:
            out = out + term.scale(c)
    return out

