"""Differentials, the Maurer-Cartan equation, twisted differentials and gauge action."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Mapping

from . import kernels
from .core import AlgebraContext, ContextMismatchError, Element, Rational
from .lie import PreconditionError, bracket, exp_ad, is_primitive


class NotMaurerCartanError(PreconditionError):
    """The element does not satisfy ``da + 1/2 [a, a] = 0``."""


class Derivation:
    """A graded derivation determined by its values on generators.

    Generators absent from ``images`` are sent to zero.  Images must be
    homogeneous of degree ``|g| + degree_shift``.
    """

    __slots__ = ("ctx", "images", "degree_shift", "_image_terms")

    def __init__(self, ctx: AlgebraContext, images: Mapping, degree_shift: int = -1):
        self.ctx = ctx
        self.degree_shift = degree_shift
        full: list[Element] = [ctx.zero()] * len(ctx.generators)
        for key, img in images.items():
            g = key if isinstance(key, int) else ctx.index.get(key)
            if g is None or not 0 <= g < len(full):
                raise KeyError(f"unknown generator {key!r}")
            if not isinstance(img, Element):
                raise TypeError("images must be Elements")
            if img.ctx != ctx:
                img = img.to_context(ctx)
            want = ctx.generators[g].degree + degree_shift
            got = img.degree()
            if got is not None and got != want:
                raise ValueError(
                    f"image of {ctx.generators[g].name} has degree {got}, expected {want}"
                )
            full[g] = img
        self.images = tuple(full)
        self._image_terms = [img.terms for img in full]

    def image(self, name: str) -> Element:
        return self.images[self.ctx.index[name]]

    def __call__(self, w: Element) -> Element:
        return apply_derivation(self, w)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.degree_shift == other.degree_shift
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.ctx, self.degree_shift, self.images))

    def replace(self, name: str, image: Element) -> "Derivation":
        imgs = dict(enumerate(self.images))
        imgs[self.ctx.index[name]] = image
        return Derivation(self.ctx, imgs, self.degree_shift)


def apply_derivation(d: Derivation, w: Element) -> Element:
    """Leibniz extension: ``d(g u) = d(g) u + (-1)^{|g||d|} g d(u)``."""
    if w.ctx != d.ctx:
        raise ContextMismatchError("element and derivation belong to different contexts")
    if d.degree_shift % 2 == 0:
        # even derivations need no Koszul sign; reuse the kernel with all-even degrees
        degs = (0,) * len(d.ctx.generators)
    else:
        degs = d.ctx.degrees
    return Element(d.ctx, kernels.derive(w.terms, d._image_terms, degs, d.ctx.truncation))


def derivation_component(d: Derivation, i: int) -> Derivation:
    """``d_i``: generator images cut down to their word-length-i parts."""
    if i < 1:
        raise ValueError("component index must be >= 1")
    return Derivation(
        d.ctx, {g: img.homogeneous_part(i) for g, img in enumerate(d.images)}, d.degree_shift
    )


@dataclass(frozen=True)
class Cdgl:
    """A free complete dgl truncated at ``ctx.truncation``: generators plus differential."""

    ctx: AlgebraContext
    differential: Derivation

    def d(self, w: Element) -> Element:
        return apply_derivation(self.differential, w)

    def gen(self, name: str) -> Element:
        return self.ctx.gen(name)

    def linear_part(self) -> Derivation:
        return derivation_component(self.differential, 1)


@dataclass
class DSquaredReport:
    residuals: dict  # generator name -> d(d(g))

    @property
    def passed(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values())

    def failures(self) -> list[str]:
        return [n for n, r in self.residuals.items() if r]


def check_d_squared(L: Cdgl) -> DSquaredReport:
    return DSquaredReport({g.name: L.d(L.d(L.gen(g.name))) for g in L.ctx.generators})


def mc_residual(L: Cdgl, a: Element) -> Element:
    """``da + 1/2 [a, a]``."""
    deg = a.degree()
    if deg not in (None, -1):
        raise PreconditionError(f"MC candidate has degree {deg}, expected -1")
    return L.d(a) + bracket(a, a).scale(Rational(1, 2))


def is_mc(L: Cdgl, a: Element) -> bool:
    return mc_residual(L, a).is_zero()


class TwistedDifferential:
    """``d_a(w) = [a, w] + dw`` for a Maurer-Cartan element ``a``."""

    def __init__(self, L: Cdgl, a: Element, *, check: bool = True):
        if check:
            res = mc_residual(L, a)
            if res:
                raise NotMaurerCartanError(f"twisting element is not MC; residual {res}")
        self.cdgl = L
        self.mc = a

    def __call__(self, w: Element) -> Element:
        return bracket(self.mc, w) + self.cdgl.d(w)


def twisted_differential(L: Cdgl, a: Element) -> TwistedDifferential:
    return TwistedDifferential(L, a)


def gauge(L: Cdgl, x: Element, a: Element, *, strict: bool = False) -> Element:
    """Gauge action ``x G a = e^{ad_x}(a) - sum_i ad_x^i(dx)/(i+1)!``.

    Degrees and constant terms are always checked; ``strict=True`` also
    certifies that ``x`` is primitive and ``a`` is Maurer-Cartan.
    """
    if x.constant():
        raise PreconditionError("gauge: x has a constant term")
    if x.degree() not in (None, 0):
        raise PreconditionError("gauge: x must have degree 0")
    if a.degree() not in (None, -1):
        raise PreconditionError("gauge: a must have degree -1")
    if strict:
        if not is_primitive(x):
            raise PreconditionError("gauge: x is not a Lie element")
        res = mc_residual(L, a)
        if res:
            raise NotMaurerCartanError(f"gauge: a is not MC; residual {res}")
    if not x:
        return a
    out = exp_ad(x, a)
    term = L.d(x)
    i = 0
    while term and i <= L.ctx.truncation:
        out = out - term.scale(Rational(1, factorial(i + 1)))
        term = bracket(x, term)
        i += 1
    return out
