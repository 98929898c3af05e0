"""Builders for the Lawrence-Sullivan interval, circuit graphs and triangle models.

Path convention used throughout: ``p`` is a path from ``A`` to ``B`` when
``gauge(p, B) == A`` (equivalently ``gauge(-p, A) == B``).  Paths compose by
BCH: ``p: A -> B`` followed by ``q: B -> C`` gives ``bch(p, q): A -> C``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import kernels
from .cdgl import Cdgl, Derivation, gauge, mc_residual, twisted_differential
from .core import (
    AlgebraContext,
    ContextMismatchError,
    Element,
    Generator,
    Rational,
    context_from_dict,
    context_to_dict,
    element_from_dict,
    terms_to_list,
)
from .lie import (
    PreconditionError,
    bch_multi,
    bracket,
    exp_ad,
    series_apply,
    todd_flip_series,
    todd_minus_series,
    todd_series,
)


# morphisms


class GroupMorphism:
    """Signed permutation of generators, extended multiplicatively to words."""

    __slots__ = ("ctx", "perm", "signs")

    def __init__(self, ctx: AlgebraContext, perm: Sequence[int], signs: Sequence[int]):
        perm = tuple(perm)
        signs = tuple(signs)
        n = len(ctx.generators)
        if sorted(perm) != list(range(n)) or len(signs) != n:
            raise ValueError("not a signed permutation of the generators")
        if any(s not in (1, -1) for s in signs):
            raise ValueError("signs must be +1 or -1")
        degs = ctx.degrees
        for g, h in enumerate(perm):
            if degs[g] != degs[h]:
                raise ValueError(
                    f"{ctx.generators[g].name} -> {ctx.generators[h].name} changes degree"
                )
        self.ctx = ctx
        self.perm = perm
        self.signs = signs

    @classmethod
    def from_names(cls, ctx: AlgebraContext, images: Mapping[str, str]) -> "GroupMorphism":
        """``{"x1": "-x3", ...}``; unlisted generators are fixed."""
        perm = list(range(len(ctx.generators)))
        signs = [1] * len(perm)
        for src, dst in images.items():
            s = 1
            dst = dst.strip()
            if dst.startswith("-"):
                s, dst = -1, dst[1:]
            elif dst.startswith("+"):
                dst = dst[1:]
            perm[ctx.index[src]] = ctx.index[dst]
            signs[ctx.index[src]] = s
        return cls(ctx, perm, signs)

    @classmethod
    def identity(cls, ctx: AlgebraContext) -> "GroupMorphism":
        n = len(ctx.generators)
        return cls(ctx, range(n), [1] * n)

    def __call__(self, w: Element) -> Element:
        return apply_morphism(self, w)

    def __matmul__(self, other: "GroupMorphism") -> "GroupMorphism":
        """Composition ``(self @ other)(w) = self(other(w))``."""
        if other.ctx != self.ctx:
            raise ContextMismatchError("morphisms on different contexts")
        perm = [self.perm[other.perm[g]] for g in range(len(self.perm))]
        signs = [other.signs[g] * self.signs[other.perm[g]] for g in range(len(self.perm))]
        return GroupMorphism(self.ctx, perm, signs)

    def __pow__(self, n: int) -> "GroupMorphism":
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = GroupMorphism.identity(self.ctx)
        for _ in range(n):
            out = self @ out
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupMorphism):
            return NotImplemented
        return self.ctx == other.ctx and self.perm == other.perm and self.signs == other.signs

    def __hash__(self):
        return hash((self.perm, self.signs))

    def table(self) -> dict[str, str]:
        names = self.ctx.names
        return {
            names[g]: ("-" if s < 0 else "") + names[h]
            for g, (h, s) in enumerate(zip(self.perm, self.signs))
        }

    def extended(self, ctx: AlgebraContext, images: Mapping[str, str]) -> "GroupMorphism":
        """Same action on the old generators, ``images`` on the new ones of ``ctx``."""
        table = self.table()
        table.update(images)
        return GroupMorphism.from_names(ctx, table)


def apply_morphism(m: GroupMorphism, w: Element) -> Element:
    if w.ctx != m.ctx:
        raise ContextMismatchError("element and morphism belong to different contexts")
    return Element(m.ctx, kernels.permute(w.terms, m.perm, m.signs))


class AlgebraMorphism:
    """Algebra map between free algebras given by arbitrary generator images."""

    def __init__(self, source: AlgebraContext, target: AlgebraContext, images: Mapping[str, Element]):
        if target.truncation > source.truncation:
            raise ValueError("target truncation may not exceed the source truncation")
        imgs = []
        for g in source.generators:
            img = images.get(g.name)
            if img is None:
                img = target.gen(g.name)
            if img.ctx != target:
                raise ContextMismatchError(f"image of {g.name} is not in the target context")
            imgs.append(img.terms)
        self.source = source
        self.target = target
        self._images = imgs

    def __call__(self, w: Element) -> Element:
        if w.ctx != self.source:
            raise ContextMismatchError("element is not in the source context")
        return Element(self.target, kernels.substitute(w.terms, self._images, self.target.truncation))


def equivariance_defects(L: Cdgl, m: GroupMorphism) -> dict[str, Element]:
    """``m(d g) - d(m g)`` for every generator ``g``; all zero iff ``m`` commutes with d."""
    return {g.name: m(L.d(L.gen(g.name))) - L.d(m(L.gen(g.name))) for g in L.ctx.generators}


# the interval


def ls_differential(x: Element, a: Element, b: Element, form: str = "b") -> Element:
    """Differential of the path generator of an LS interval from ``a`` to ``b``.

    ``form="b"``:     [x, b] + ad_x/(e^{ad_x} - 1) (b - a)
    ``form="a"``:     [x, a] + ad_{-x}/(e^{-ad_x} - 1) (b - a)
    ``form="split"``: ad_x/(1 - e^{ad_x}) a + ad_x/(1 - e^{-ad_x}) b

    All three agree exactly modulo the truncation.
    """
    n = x.ctx.truncation
    if form == "b":
        return bracket(x, b) + series_apply(todd_series(n), x, b - a)
    if form == "a":
        return bracket(x, a) + series_apply(todd_series(n), -x, b - a)
    if form == "split":
        return series_apply(todd_flip_series(n), x, a) + series_apply(todd_minus_series(n), x, b)
    raise ValueError(f"unknown form {form!r}")


def ls_interval(truncation: int, names: tuple[str, str, str] = ("a", "b", "x")) -> Cdgl:
    a, b, x = names
    ctx = AlgebraContext.of([(a, -1), (b, -1), (x, 0)], truncation)
    A, B, X = ctx.gens(a, b, x)
    half = Rational(-1, 2)
    d = Derivation(
        ctx,
        {
            a: bracket(A, A).scale(half),
            b: bracket(B, B).scale(half),
            x: ls_differential(X, A, B),
        },
    )
    return Cdgl(ctx, d)


def path_check(L: Cdgl, p: Element, A: Element, B: Element) -> bool:
    """True iff ``p`` is a path from ``A`` to ``B``, i.e. ``gauge(p, B) == A``."""
    return gauge(L, p, B) == A


# circuit graphs


@dataclass(frozen=True)
class CircuitModel:
    k: int
    cdgl: Cdgl
    sigma: GroupMorphism
    tau: GroupMorphism

    @property
    def ctx(self) -> AlgebraContext:
        return self.cdgl.ctx

    @property
    def truncation(self) -> int:
        return self.cdgl.ctx.truncation

    def v(self, i: int) -> Element:
        """Vertex ``v_i`` with cyclic indexing (``v_{k+1} = v_1``)."""
        return self.ctx.gen(f"v{(i - 1) % self.k + 1}")

    def x(self, i: int) -> Element:
        return self.ctx.gen(f"x{(i - 1) % self.k + 1}")

    def edges(self) -> list[Element]:
        return [self.x(i) for i in range(1, self.k + 1)]

    def loop(self) -> Element:
        """``x_1 * x_2 * ... * x_k``, generator of the stabilizer of ``v_1``."""
        return bch_multi(self.edges())

    def d(self, w: Element) -> Element:
        return self.cdgl.d(w)


def _circuit_generators(k: int) -> list[Generator]:
    return [Generator(f"v{i}", -1) for i in range(1, k + 1)] + [
        Generator(f"x{i}", 0) for i in range(1, k + 1)
    ]


def _circuit_images(ctx: AlgebraContext, k: int) -> dict[str, Element]:
    half = Rational(-1, 2)
    imgs = {}
    for i in range(1, k + 1):
        v = ctx.gen(f"v{i}")
        imgs[f"v{i}"] = bracket(v, v).scale(half)
    for i in range(1, k + 1):
        a = ctx.gen(f"v{i}")
        b = ctx.gen(f"v{i % k + 1}")
        imgs[f"x{i}"] = ls_differential(ctx.gen(f"x{i}"), a, b)
    return imgs


def _dihedral_tables(k: int) -> tuple[dict[str, str], dict[str, str]]:
    sigma, tau = {}, {}
    for i in range(1, k + 1):
        sigma[f"v{i}"] = f"v{i % k + 1}"
        sigma[f"x{i}"] = f"x{i % k + 1}"
        # tau(v_i) = v_{k-i+2}, tau(x_i) = -x_{k-i+1}, indices mod k
        tau[f"v{i}"] = f"v{(k - i + 1) % k + 1}"
        tau[f"x{i}"] = f"-x{k - i + 1}"
    return sigma, tau


def circuit_model(k: int, truncation: int) -> CircuitModel:
    """Lie model of the cycle graph with ``k`` vertices and its dihedral action."""
    if k < 3:
        raise ValueError("circuit models need k >= 3")
    ctx = AlgebraContext(tuple(_circuit_generators(k)), truncation)
    L = Cdgl(ctx, Derivation(ctx, _circuit_images(ctx, k)))
    s, t = _dihedral_tables(k)
    return CircuitModel(k, L, GroupMorphism.from_names(ctx, s), GroupMorphism.from_names(ctx, t))


# triangles


@dataclass(frozen=True)
class TriangleModel:
    """Lie model of the triangle: boundary circuit (k = 3) plus a degree-1 generator.

    The plain model carries no symmetry (``sigma``/``tau`` are None); the
    symmetric model carries the extended Σ3 action, ``omega`` and ``beta``.
    """

    cdgl: Cdgl
    boundary: CircuitModel
    face: str
    sigma: GroupMorphism | None = None
    tau: GroupMorphism | None = None
    omega: Element | None = None
    beta: Element | None = None

    @property
    def ctx(self) -> AlgebraContext:
        return self.cdgl.ctx

    @property
    def symmetric(self) -> bool:
        return self.sigma is not None

    def lift(self, w: Element) -> Element:
        """Re-express a boundary element in this model's context."""
        return w.to_context(self.ctx)


def triangle_model(truncation: int) -> TriangleModel:
    """``de = -[e, v1] + x1 * x2 * x3`` on top of the boundary circuit.

    The sign of the bracket term makes ``d_{v1}(e) = x1 * x2 * x3`` lie in the
    subalgebra generated by the edges, which is what forces ``d^2 = 0`` under
    the Koszul convention ``[a, b] = ab - (-1)^{|a||b|} ba``.
    """
    boundary = circuit_model(3, truncation)
    ctx = boundary.ctx.extended([Generator("e", 1)])
    imgs = {name: boundary.cdgl.differential.image(name).to_context(ctx) for name in boundary.ctx.names}
    e, v1 = ctx.gen("e"), ctx.gen("v1")
    loop = boundary.loop().to_context(ctx)
    imgs["e"] = -bracket(e, v1) + loop
    return TriangleModel(Cdgl(ctx, Derivation(ctx, imgs)), boundary, "e")


def symmetric_triangle(omega: Element, beta: Element, truncation: int | None = None) -> TriangleModel:
    """Triangle model with ``de' = -[Omega, e'] + beta * x1 * x2 * x3 * (-beta)``.

    ``omega`` must be a Σ3-invariant MC element of the boundary and ``beta`` a
    path from ``omega`` to ``v1``; violations raise PreconditionError with the
    offending residual.
    """
    if truncation is None:
        truncation = omega.ctx.truncation
    boundary = circuit_model(3, truncation)
    bctx = boundary.ctx
    omega = omega.to_context(bctx)
    beta = beta.to_context(bctx)
    res = mc_residual(boundary.cdgl, omega)
    if res:
        raise PreconditionError(f"omega is not MC; residual {res}")
    for label, g in (("sigma", boundary.sigma), ("tau", boundary.tau)):
        diff = g(omega) - omega
        if diff:
            raise PreconditionError(f"omega is not {label}-invariant; defect {diff}")
    diff = gauge(boundary.cdgl, beta, boundary.v(1)) - omega
    if diff:
        raise PreconditionError(f"beta is not a path from omega to v1; defect {diff}")

    ctx = bctx.extended([Generator("e'", 1)])
    imgs = {name: boundary.cdgl.differential.image(name).to_context(ctx) for name in bctx.names}
    ep = ctx.gen("e'")
    om = omega.to_context(ctx)
    conj = bch_multi([beta, *boundary.edges(), -beta]).to_context(ctx)
    imgs["e'"] = -bracket(om, ep) + conj
    L = Cdgl(ctx, Derivation(ctx, imgs))
    sigma = boundary.sigma.extended(ctx, {"e'": "e'"})
    tau = boundary.tau.extended(ctx, {"e'": "-e'"})
    return TriangleModel(L, boundary, "e'", sigma, tau, om, beta.to_context(ctx))


def twisted_face_differential(model: TriangleModel) -> Element:
    """``d_Omega(e')`` for the symmetric model, ``d_{v1}(e)`` for the plain one."""
    base = model.omega if model.symmetric else model.ctx.gen("v1")
    return twisted_differential(model.cdgl, base)(model.ctx.gen(model.face))


def triangle_isomorphism(plain: TriangleModel, sym: TriangleModel) -> AlgebraMorphism:
    """``phi``: identity on the boundary, ``e -> e^{ad_{-beta}}(e')``."""
    if sym.beta is None:
        raise ValueError("second model must be the symmetric triangle")
    ep = sym.ctx.gen(sym.face)
    images = {name: sym.ctx.gen(name) for name in plain.boundary.ctx.names}
    images[plain.face] = exp_ad(-sym.beta, ep)
    target = sym.ctx
    if plain.ctx.truncation != target.truncation:
        raise ContextMismatchError("models have different truncations")
    return AlgebraMorphism(plain.ctx, target, images)


def chain_map_defects(plain: TriangleModel, sym: TriangleModel) -> dict[str, Element]:
    """``phi(d g) - d'(phi g)`` on every generator of the plain model."""
    phi = triangle_isomorphism(plain, sym)
    out = {}
    for g in plain.ctx.generators:
        w = plain.ctx.gen(g.name)
        out[g.name] = phi(plain.cdgl.d(w)) - sym.cdgl.d(phi(w))
    return out


# serialization


def cdgl_to_dict(L: Cdgl, morphisms: Mapping[str, GroupMorphism] | None = None) -> dict:
    out = context_to_dict(L.ctx)
    out["differential"] = {
        g.name: terms_to_list(L.differential.image(g.name)) for g in L.ctx.generators
    }
    out["morphisms"] = {name: m.table() for name, m in (morphisms or {}).items()}
    return out


def cdgl_from_dict(data: Mapping) -> tuple[Cdgl, dict[str, GroupMorphism]]:
    ctx = context_from_dict(data)
    imgs = {
        name: element_from_dict({"terms": terms}, ctx)
        for name, terms in data["differential"].items()
    }
    L = Cdgl(ctx, Derivation(ctx, imgs))
    morphisms = {
        name: GroupMorphism.from_names(ctx, table)
        for name, table in data.get("morphisms", {}).items()
    }
    return L, morphisms
