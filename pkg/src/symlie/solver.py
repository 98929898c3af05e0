"""Linear d1-problems, gauge paths, and the dihedral-invariant MC construction.

Every "there exists T with d1 T = ..." step is an exact sparse solve over the
word basis followed by the Dynkin projection onto Lie elements.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from . import kernels
from .cdgl import Cdgl, derivation_component, gauge, mc_residual
from .core import Element, Rational
from .lie import PreconditionError, bch, bch_multi, lie_projection
from .linalg import InconsistentSystem, SparseSystem
from .models import CircuitModel, TriangleModel, circuit_model, symmetric_triangle

log = logging.getLogger(__name__)


class NotExact(ArithmeticError):
    """The right-hand side is not a d1-boundary; ``obstruction`` is its reduced part."""

    def __init__(self, obstruction: Element, length: int, degree: int):
        super().__init__(
            f"rhs at length {length}, degree {degree - 1} is not d1-exact "
            f"({len(obstruction)} obstructing term(s))"
        )
        self.obstruction = obstruction
        self.length = length
        self.degree = degree


class NoPath(ArithmeticError):
    """gauge_path failed at some stage; carries the stage and obstruction."""

    def __init__(self, stage: int, obstruction: Element):
        super().__init__(f"no gauge path: stage {stage} is obstructed")
        self.stage = stage
        self.obstruction = obstruction


class LoopInconsistency(RuntimeError):
    """A stabilizer element of v1 is not a multiple of the loop class."""


@dataclass
class LinearSystem:
    """Matrix of d1 from (degree q, length n) words to (degree q-1, length n) words."""

    length: int
    degree: int
    domain: list
    codomain: list
    system: SparseSystem

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.codomain), len(self.domain))

    @property
    def rank(self) -> int:
        return self.system.rank


class D1Solver:
    """Caches the factorized d1 matrices of one cdgl, keyed by (length, degree)."""

    def __init__(self, L: Cdgl):
        self.cdgl = L
        self.d1 = derivation_component(L.differential, 1)
        self._systems: dict[tuple[int, int], LinearSystem] = {}

    def system(self, length: int, degree: int) -> LinearSystem:
        key = (length, degree)
        sys_ = self._systems.get(key)
        if sys_ is None:
            sys_ = self._systems[key] = self._build(length, degree)
        return sys_

    def _build(self, n: int, q: int) -> LinearSystem:
        ctx = self.cdgl.ctx
        domain = ctx.words(n, q)
        images = self.d1._image_terms
        degs = ctx.degrees
        eqs: dict[tuple, dict] = {}
        for u in domain:
            for w, c in kernels.derive({u: Rational(1)}, images, degs, ctx.truncation).items():
                eqs.setdefault(w, {})[u] = c
        codomain = sorted(eqs, key=lambda w: (len(w), w))
        system = SparseSystem(domain, [eqs[w] for w in codomain], codomain)
        log.debug("d1 system length=%d degree=%d shape=%s rank=%d", n, q, (len(codomain), len(domain)), system.rank)
        return LinearSystem(n, q, domain, codomain, system)

    def apply_d1(self, w: Element) -> Element:
        return self.d1(w)

    def solve(self, rhs: Element, length: int, degree: int, *, lie: bool = True) -> Element:
        ctx = self.cdgl.ctx
        if rhs.lengths() - {length} or rhs.degrees() - {degree - 1}:
            raise ValueError(
                f"rhs must be homogeneous of length {length} and degree {degree - 1}"
            )
        if not rhs:
            return ctx.zero()
        ls = self.system(length, degree)
        try:
            sol = ls.system.solve(rhs.terms)
        except InconsistentSystem as exc:
            raise NotExact(Element(ctx, dict(exc.residuals)), length, degree) from None
        s = Element(ctx, sol)
        if lie and length > 1:
            s = lie_projection(s)
        if self.d1(s) != rhs:
            raise ValueError("rhs is not a Lie element; the Lie-normalized solution fails")
        return s

    def cycles(self, length: int, degree: int) -> list[Element]:
        """Basis of the d1-cycles among Lie elements of the given length and degree."""
        ctx = self.cdgl.ctx
        ls = self.system(length, degree)
        raw = [Element(ctx, v) for v in ls.system.kernel()]
        if length == 0:
            return raw
        projected = [lie_projection(v) if length > 1 else v for v in raw]
        # row-reduce the projections to an independent family
        words = sorted({w for v in projected for w in v.terms}, key=lambda w: (len(w), w))
        if not words:
            return []
        basis_sys = SparseSystem(words, [v.terms for v in projected])
        basis = []
        for p in basis_sys.pivots():
            row = basis_sys._rows[basis_sys._pos[p]]
            basis.append(Element(ctx, {words[k]: c for k, c in row.items()}))
        return basis


def solve_d1(L: Cdgl, rhs: Element, length: int, degree: int, *, solver: D1Solver | None = None) -> Element:
    """Solve ``d1 s = rhs`` with ``s`` of the given length and degree.

    Free unknowns are set to zero in canonical word order; at length 1 and
    degree 0 this makes the coefficient of the loop class (sum of edges) zero.
    Longer solutions are projected onto Lie elements.  Raises NotExact.
    """
    return (solver or D1Solver(L)).solve(rhs, length, degree)


def d1_cycles(L: Cdgl, length: int, degree: int, *, solver: D1Solver | None = None) -> list[Element]:
    return (solver or D1Solver(L)).cycles(length, degree)


@dataclass
class StageReport:
    stage: int
    shape: tuple[int, int]
    rank: int
    residual_terms: int

    def to_dict(self) -> dict:
        return {
            "length": self.stage,
            "rows": self.shape[0],
            "cols": self.shape[1],
            "rank": self.rank,
            "residual_terms": self.residual_terms,
        }


def gauge_path(
    L: Cdgl,
    A: Element,
    B: Element,
    *,
    max_length: int | None = None,
    solver: D1Solver | None = None,
    diagnostics: list | None = None,
) -> Element:
    """Path ``p`` from ``A`` to ``B``: ``gauge(p, B) == A`` modulo length > max_length.

    Built one word length at a time; raises NoPath if a stage is not d1-exact.
    """
    solver = solver or D1Solver(L)
    top = L.ctx.truncation if max_length is None else max_length
    p = L.ctx.zero()
    for n in range(1, top + 1):
        diff = gauge(L, p, B) - A
        low = diff.below(n)
        if low:
            raise RuntimeError(f"gauge_path lost lower-order agreement at stage {n}: {low}")
        rhs = diff.homogeneous_part(n)
        if diagnostics is not None:
            ls = solver.system(n, 0)
            diagnostics.append(StageReport(n, ls.shape, ls.rank, len(rhs)))
        if not rhs:
            continue
        try:
            p = p + solver.solve(rhs, n, 0)
        except NotExact as exc:
            raise NoPath(n, exc.obstruction) from None
    return p


def loop_coefficient(model: CircuitModel, w: Element) -> Rational:
    """``lam`` with ``w = lam * (x1 * ... * xk)`` for a stabilizer element ``w`` of v1."""
    v1 = model.v(1)
    if gauge(model.cdgl, w, v1) != v1:
        raise PreconditionError("loop_coefficient: w does not fix v1")
    lam = w.coefficient(model.x(1).items()[0][0])
    candidate = model.loop().scale(lam)
    if candidate != w:
        raise LoopInconsistency(f"w - {lam} * loop = {w - candidate}")
    return lam


def sigma_average(model: CircuitModel, t: Element) -> Element:
    """``sum_{i=0}^{k-2} (k-1-i)/k * sigma^i(t)``."""
    k = model.k
    out = model.ctx.zero()
    term = t
    for i in range(k - 1):
        out = out + term.scale(Rational(k - 1 - i, k))
        term = model.sigma(term)
    return out


@dataclass
class SigmaStage:
    length: int
    T: Element
    paths: list

    def to_dict(self) -> dict:
        return {"length": self.length, "T_terms": len(self.T), "solves": [s.to_dict() for s in self.paths]}


def initial_mc(model: CircuitModel) -> Element:
    """``P[1] = -(sum_{i<k} (k-i)/k x_i) G v1``, whose linear part is the vertex average."""
    k = model.k
    x = model.ctx.zero()
    for i in range(1, k):
        x = x + model.x(i).scale(Rational(k - i, k))
    return gauge(model.cdgl, -x, model.v(1))


def sigma_invariant_mc(
    model: CircuitModel,
    *,
    solver: D1Solver | None = None,
    stages: list | None = None,
) -> Element:
    """A sigma-invariant MC element, improved one word length at a time."""
    L = model.cdgl
    solver = solver or D1Solver(L)
    P = initial_mc(model)
    for n in range(2, model.truncation + 1):
        if n <= 4 and solver.cycles(n, 0):
            # the stage solution is only forced to be unique when this kernel vanishes
            raise RuntimeError(f"degree-0 Lie d1-cycles at length {n} are not trivial")
        diag: list = []
        T = gauge_path(L, model.sigma(P), P, max_length=n, solver=solver, diagnostics=diag)
        Tn = T.homogeneous_part(n)
        update = T.below(n) + sigma_average(model, Tn)
        nxt = gauge(L, update, P)
        if (nxt - P).below(n):
            raise RuntimeError(f"stage {n} changed lower-order terms")
        defect = (model.sigma(nxt) - nxt).below(n + 1)
        if defect:
            raise RuntimeError(f"stage {n} left a sigma defect: {defect}")
        if stages is not None:
            stages.append(SigmaStage(n, T, diag))
        P = nxt
    return P


@dataclass
class InvariantMCResult:
    model: CircuitModel
    P: Element
    w: Element
    alpha: Element
    omega: Element
    checks: dict = field(default_factory=dict)  # name -> residual Element
    stages: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.is_zero() for r in self.checks.values())


def full_invariant_mc(model: CircuitModel, *, solver: D1Solver | None = None) -> InvariantMCResult:
    """Dihedral-invariant MC element ``Omega = (alpha/2) G P`` with its certificates.

    ``w`` is a path from ``v1`` to ``P`` (``gauge(w, P) == v1``) and
    ``alpha = (-tau w) * w`` is a path from ``P`` to ``tau P`` reversed, i.e.
    ``gauge(alpha, P) == tau P``.
    """
    L = model.cdgl
    solver = solver or D1Solver(L)
    stages: list = []
    P = sigma_invariant_mc(model, solver=solver, stages=stages)
    v1 = model.v(1)
    w = gauge_path(L, v1, P, solver=solver)
    sigma, tau = model.sigma, model.tau
    alpha = bch(-tau(w), w)
    omega = gauge(L, alpha.scale(Rational(1, 2)), P)
    k = model.k
    avg = model.ctx.zero()
    for i in range(1, k + 1):
        avg = avg + model.v(i)
    avg = avg.scale(Rational(1, k))
    checks = {
        "P is MC": mc_residual(L, P),
        "sigma P - P": sigma(P) - P,
        "w G P - v1": gauge(L, w, P) - v1,
        "tau alpha + alpha": tau(alpha) + alpha,
        "alpha G P - tau P": gauge(L, alpha, P) - tau(P),
        "sigma alpha - alpha": sigma(alpha) - alpha,
        "Omega is MC": mc_residual(L, omega),
        "sigma Omega - Omega": sigma(omega) - omega,
        "tau Omega - Omega": tau(omega) - omega,
        "Omega linear part - vertex average": omega.homogeneous_part(1) - avg,
    }
    return InvariantMCResult(model, P, w, alpha, omega, checks, stages)


@dataclass
class SymmetricTriangleResult:
    invariant: InvariantMCResult
    beta: Element
    model: TriangleModel
    lam: Rational
    mu: Rational


def loop_relations(boundary: CircuitModel, beta: Element) -> tuple[Rational, Rational]:
    """Rationals ``lam, mu`` with ``sigma(beta) = beta * lam(X) * x1`` and ``tau(beta) = beta * mu(X)``.

    ``X`` is the loop ``x1 * x2 * x3``; raises LoopInconsistency if either
    relation fails for the extracted coefficient.
    """
    x1 = boundary.x(1)
    sb = boundary.sigma(beta)
    tb = boundary.tau(beta)
    lam = loop_coefficient(boundary, bch_multi([-beta, sb, -x1]))
    mu = loop_coefficient(boundary, bch(-beta, tb))
    X = boundary.loop()
    if bch_multi([beta, X.scale(lam), x1]) != sb:
        raise LoopInconsistency("sigma(beta) relation fails")
    if bch(beta, X.scale(mu)) != tb:
        raise LoopInconsistency("tau(beta) relation fails")
    return lam, mu


def build_symmetric_triangle(truncation: int) -> SymmetricTriangleResult:
    """Run the invariant construction on the triangle boundary and attach the face."""
    boundary = circuit_model(3, truncation)
    solver = D1Solver(boundary.cdgl)
    inv = full_invariant_mc(boundary, solver=solver)
    beta = gauge_path(boundary.cdgl, inv.omega, boundary.v(1), solver=solver)
    model = symmetric_triangle(inv.omega, beta)
    lam, mu = loop_relations(boundary, beta)
    return SymmetricTriangleResult(inv, beta, model, lam, mu)

