"""Exact scalars, graded generators and the truncated free associative algebra.

Lie elements are never stored in a bracket basis: they live in the tensor
algebra ``T(V)`` as primitive elements, and every computation is done on
sparse maps ``word -> coefficient`` where a word is a tuple of generator
indices.  All words longer than the context truncation are discarded, which
realizes the quotient by the two-sided ideal of long words.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from . import kernels

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Rational = Fraction  # type: ignore[misc,assignment]

Scalar = Union[int, Fraction, "Rational", str]
Word = tuple


class ContextMismatchError(ValueError):
    """Raised when elements from different algebra contexts are combined."""


def rational(value: Scalar) -> Rational:
    """Convert ``value`` (int, Fraction, mpq or ``"p/q"`` string) exactly."""
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not allowed")
    if isinstance(value, str):
        return Rational(Fraction(value.strip()))
    if isinstance(value, Fraction):
        return Rational(value.numerator, value.denominator)
    return Rational(value)


def format_rational(c) -> str:
    """Serialize a coefficient as ``"p/q"`` (the denominator is always present)."""
    c = rational(c)
    return f"{int(c.numerator)}/{int(c.denominator)}"


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int


@dataclass(frozen=True)
class AlgebraContext:
    """Ordered graded generators together with the truncation order ``N``.

    Two contexts are interchangeable exactly when they compare equal, i.e. same
    generators in the same order and same truncation.
    """

    generators: tuple[Generator, ...]
    truncation: int

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.truncation < 1:
            raise ValueError("truncation must be >= 1")
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")

    @classmethod
    def of(cls, spec: Iterable[tuple[str, int]], truncation: int) -> "AlgebraContext":
        return cls(tuple(Generator(n, d) for n, d in spec), truncation)

    @cached_property
    def index(self) -> dict[str, int]:
        return {g.name: i for i, g in enumerate(self.generators)}

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g.degree for g in self.generators)

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def word_degree(self, word: Word) -> int:
        degs = self.degrees
        return sum(degs[g] for g in word)

    def word_from_names(self, names: Sequence[str]) -> Word:
        try:
            return tuple(self.index[n] for n in names)
        except KeyError as exc:
            raise KeyError(f"unknown generator {exc.args[0]!r}") from None

    def word_names(self, word: Word) -> list[str]:
        return [self.generators[g].name for g in word]

    # element constructors

    def zero(self) -> "Element":
        return Element(self, {})

    def unit(self) -> "Element":
        return Element(self, {(): Rational(1)})

    def gen(self, name: str) -> "Element":
        return Element(self, {(self.index[name],): Rational(1)})

    def gens(self, *names: str) -> list["Element"]:
        return [self.gen(n) for n in names]

    def word(self, *names: str, coeff: Scalar = 1) -> "Element":
        """Monomial ``coeff * names[0] names[1] ...`` (zero if too long)."""
        w = self.word_from_names(names)
        c = rational(coeff)
        if len(w) > self.truncation or not c:
            return self.zero()
        return Element(self, {w: c})

    def element(self, terms: Mapping) -> "Element":
        """Build an element from ``{word: coeff}``; words may be tuples of names."""
        out: dict = {}
        for w, c in terms.items():
            if isinstance(w, str):
                w = (w,)
            if w and isinstance(w[0], str):
                w = self.word_from_names(w)
            w = tuple(w)
            if len(w) > self.truncation:
                continue
            out[w] = out.get(w, 0) + rational(c)
        return Element(self, {w: c for w, c in out.items() if c})

    def with_truncation(self, truncation: int) -> "AlgebraContext":
        return AlgebraContext(self.generators, truncation)

    def extended(self, extra: Iterable[Generator]) -> "AlgebraContext":
        return AlgebraContext(self.generators + tuple(extra), self.truncation)

    def words(self, length: int, degree: int | None = None) -> list[Word]:
        """All words of the given length (and degree), in canonical order."""
        degs = self.degrees
        ngen = len(degs)
        if degree is None:
            lo = hi = None
        else:
            lo, hi = min(degs, default=0), max(degs, default=0)
        out: list[Word] = []

        def rec(prefix: tuple, deg: int, left: int):
            if left == 0:
                if degree is None or deg == degree:
                    out.append(prefix)
                return
            if degree is not None and not (deg + left * lo <= degree <= deg + left * hi):
                return
            for g in range(ngen):
                rec(prefix + (g,), deg + degs[g], left - 1)

        rec((), 0, length)
        return out


def word_key(word: Word) -> tuple:
    """Canonical order: length first, then lexicographic by generator index."""
    return (len(word), word)


class Element:
    """Immutable finite rational combination of words of length <= N.

    ``a + b``, ``a - b``, ``-a``, ``c * a`` (scalar) and ``a * b`` (tensor
    product) are supported; mixing contexts raises ContextMismatchError.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraContext, terms: dict):
        self.ctx = ctx
        self.terms = terms

    # structural helpers

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ContextMismatchError("elements belong to different contexts")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Element):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ctx, frozenset(self.terms.items())))

    def items(self) -> list[tuple[Word, Rational]]:
        """Terms in canonical order."""
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]))

    def coefficient(self, word) -> Rational:
        if word and isinstance(word[0], str):
            word = self.ctx.word_from_names(word)
        return self.terms.get(tuple(word), Rational(0))

    def constant(self) -> Rational:
        return self.terms.get((), Rational(0))

    # linear structure

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            if v is None:
                out[w] = c
            else:
                v = v + c
                if v:
                    out[w] = v
                else:
                    del out[w]
        return Element(self.ctx, out)

    def __neg__(self) -> "Element":
        return Element(self.ctx, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return self + (-other)

    def scale(self, c: Scalar) -> "Element":
        c = rational(c)
        if not c:
            return self.ctx.zero()
        return Element(self.ctx, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check(other)
            return Element(self.ctx, kernels.mul(self.terms, other.terms, self.ctx.truncation))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        return self.scale(1 / rational(other))

    # gradings

    def homogeneous_part(self, length: int) -> "Element":
        """Sum of the terms whose word length equals ``length``."""
        return Element(self.ctx, {w: c for w, c in self.terms.items() if len(w) == length})

    def degree_part(self, degree: int) -> "Element":
        """Sum of the terms of homological degree ``degree``."""
        wd = self.ctx.word_degree
        return Element(self.ctx, {w: c for w, c in self.terms.items() if wd(w) == degree})

    def below(self, length: int) -> "Element":
        """Terms of word length strictly less than ``length``."""
        return Element(self.ctx, {w: c for w, c in self.terms.items() if len(w) < length})

    def lengths(self) -> set[int]:
        return {len(w) for w in self.terms}

    def degrees(self) -> set[int]:
        wd = self.ctx.word_degree
        return {wd(w) for w in self.terms}

    def degree(self) -> int | None:
        """Homological degree of a homogeneous element; None for zero.

        Raises ValueError if the element mixes degrees.
        """
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"element is not degree-homogeneous (degrees {sorted(ds)})")
        return ds.pop()

    def valuation(self) -> int | None:
        """Smallest word length present (None for zero)."""
        return min(self.lengths(), default=None)

    # context changes

    def truncate(self, truncation: int) -> "Element":
        """Image in the same generators at a smaller truncation order."""
        if truncation > self.ctx.truncation:
            raise ValueError("can only truncate to a smaller order")
        ctx = self.ctx.with_truncation(truncation)
        return Element(ctx, {w: c for w, c in self.terms.items() if len(w) <= truncation})

    def to_context(self, ctx: AlgebraContext) -> "Element":
        """Explicit re-expression in ``ctx``, matching generators by name.

        Words longer than ``ctx.truncation`` are dropped; every generator used
        must exist in ``ctx`` with the same degree.
        """
        remap = []
        for g in self.ctx.generators:
            j = ctx.index.get(g.name)
            if j is not None and ctx.generators[j].degree != g.degree:
                raise ContextMismatchError(f"generator {g.name} changes degree")
            remap.append(j)
        out = {}
        for w, c in self.terms.items():
            if len(w) > ctx.truncation:
                continue
            nw = tuple(remap[g] for g in w)
            if None in nw:
                raise ContextMismatchError(
                    f"generator {self.ctx.generators[w[nw.index(None)]].name} missing from target"
                )
            out[nw] = c
        return Element(ctx, out)

    # display

    def __repr__(self) -> str:
        return f"Element({format_element(self)})"

    def __str__(self) -> str:
        return format_element(self)


def format_element(a: Element) -> str:
    """Human-readable form, e.g. ``v2 - v1`` or ``1/2*x1*v1 - 1/2*v1*x1``.

    Within each word length positive terms come first; otherwise canonical order.
    """
    if not a.terms:
        return "0"
    items = sorted(a.terms.items(), key=lambda t: (len(t[0]), t[1] < 0, t[0]))
    parts = []
    for i, (w, c) in enumerate(items):
        mag = abs(c)
        word = "*".join(a.ctx.word_names(w))
        if not word:
            body = format_scalar(mag)
        elif mag == 1:
            body = word
        else:
            body = f"{format_scalar(mag)}*{word}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def format_scalar(c) -> str:
    c = rational(c)
    if c.denominator == 1:
        return str(int(c.numerator))
    return f"{int(c.numerator)}/{int(c.denominator)}"


# serialization


def context_to_dict(ctx: AlgebraContext) -> dict:
    return {
        "generators": [{"name": g.name, "degree": g.degree} for g in ctx.generators],
        "truncation": ctx.truncation,
    }


def context_from_dict(data: Mapping) -> AlgebraContext:
    gens = tuple(Generator(str(g["name"]), int(g["degree"])) for g in data["generators"])
    return AlgebraContext(gens, int(data["truncation"]))


def terms_to_list(a: Element) -> list[dict]:
    return [
        {"word": a.ctx.word_names(w), "coeff": format_rational(c)} for w, c in a.items()
    ]


def element_to_dict(a: Element) -> dict:
    out = context_to_dict(a.ctx)
    out["terms"] = terms_to_list(a)
    return out


def element_from_dict(data: Mapping, ctx: AlgebraContext | None = None) -> Element:
    if ctx is None:
        ctx = context_from_dict(data)
    terms: dict = {}
    for t in data["terms"]:
        w = ctx.word_from_names(t["word"])
        if len(w) > ctx.truncation:
            raise ValueError(f"word {t['word']} exceeds truncation {ctx.truncation}")
        if w in terms:
            raise ValueError(f"duplicate word {t['word']}")
        c = rational(t["coeff"])
        if c:
            terms[w] = c
    return Element(ctx, terms)


def dumps_element(a: Element) -> str:
    return json.dumps(element_to_dict(a), sort_keys=False)


def loads_element(text: str) -> Element:
    return element_from_dict(json.loads(text))
