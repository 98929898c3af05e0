"""Identity suites driven by ``symlie verify``.

Every check yields a CheckResult whose residual is the exact difference of
the two sides ("0" when the identity holds).  Suites are deterministic
functions of their seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .cdgl import Cdgl, check_d_squared, derivation_component, gauge, mc_residual, twisted_differential
from .core import AlgebraContext, Element, Rational, format_element
from .lie import bch, bch_multi, bracket, exp_ad, is_primitive
from .models import (
    CircuitModel,
    GroupMorphism,
    chain_map_defects,
    circuit_model,
    equivariance_defects,
    ls_differential,
    ls_interval,
    path_check,
    triangle_model,
    twisted_face_differential,
)
from .sampling import random_coefficient, random_lie
from .solver import D1Solver, build_symmetric_triangle, full_invariant_mc, loop_coefficient


@dataclass
class CheckResult:
    name: str
    anchor: str
    passed: bool
    residual: str = "0"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "paper_anchor": self.anchor,
            "status": "pass" if self.passed else "fail",
            "residual": self.residual,
        }

    def line(self) -> str:
        tag = "pass" if self.passed else "FAIL"
        extra = "" if self.passed else f"  residual: {self.residual}"
        return f"[{tag}] {self.name} ({self.anchor}){extra}"


def _first_nonzero(diffs: Iterable) -> str:
    for d in diffs:
        if isinstance(d, Element):
            if d:
                return format_element(d)
        elif d:
            return str(d)
    return "0"


def check(name: str, anchor: str, diffs) -> CheckResult:
    """Pass iff every Element in ``diffs`` is zero (non-Elements: falsy)."""
    if isinstance(diffs, (Element, bool)) or diffs is None:
        diffs = [diffs]
    diffs = list(diffs)
    res = _first_nonzero(diffs)
    return CheckResult(name, anchor, res == "0", res)


def _named(label: str, items: dict) -> list[str]:
    return [f"{label} {name}: {format_element(r)}" for name, r in items.items() if r]


# BCH product


def _sample(ctx: AlgebraContext, rng: random.Random) -> Element:
    # a nonzero linear part keeps every bracket length populated
    lin = ctx.zero()
    for g in ctx.generators:
        if g.degree == 0:
            lin = lin + ctx.gen(g.name).scale(random_coefficient(rng))
    return lin + random_lie(ctx, rng, 0, n_terms=3, min_length=2)


def bch_triples(rng: random.Random, ctx: AlgebraContext, trials: int) -> list[tuple[Element, Element, Element]]:
    return [tuple(_sample(ctx, rng) for _ in range(3)) for _ in range(trials)]


def bch_suite(seed: int, trials: int = 20, truncation: int = 5) -> list[CheckResult]:
    rng = random.Random(seed)
    ctx = AlgebraContext.of([("x", 0), ("y", 0), ("z", 0)], truncation)
    triples = bch_triples(rng, ctx, trials)
    scalars = [(random_coefficient(rng), random_coefficient(rng)) for _ in range(trials)]
    assoc, rs, inv, anti, adhom, conj, mult, shuf1, shuf2, prim = ([] for _ in range(10))
    for (x, y, z), (r, s) in zip(triples, scalars):
        xy = bch(x, y)
        yx = bch(y, x)
        assoc.append(bch(x, bch(y, z)) - bch(xy, z))
        rs.append(bch(x.scale(r), x.scale(s)) - x.scale(r + s))
        inv.append(bch(x, -x))
        anti.append(-yx - bch(-x, -y))
        adhom.append(exp_ad(xy, z) - exp_ad(x, exp_ad(y, z)))
        conj.append(exp_ad(x, y) - bch_multi([x, y, -x]))
        mult.append(exp_ad(x, bch(y, z)) - bch(exp_ad(x, y), exp_ad(x, z)))
        shuf1.append(bch(xy.scale(r), x) - bch(x, yx.scale(r)))
        shuf2.append(bch(yx.scale(r), -x) - bch(-x, xy.scale(r)))
        prim.append(not is_primitive(xy))
    return [
        check("bch associativity", "bch property (i)", assoc),
        check("bch (rx)*(sx) = (r+s)x", "bch property (ii)", rs),
        check("bch x*(-x) = 0", "bch property (ii)", inv),
        check("bch -(y*x) = (-x)*(-y)", "bch property (iii)", anti),
        check("exp ad_(x*y) = exp ad_x o exp ad_y", "bch property (iv)", adhom),
        check("exp ad_x (y) = x*y*(-x)", "bch property (v)", conj),
        check("exp ad_x (y*z) = exp ad_x(y) * exp ad_x(z)", "bch property (v)", mult),
        check("r(x*y)*x = x*r(y*x)", "bch property (vi)", shuf1),
        check("r(y*x)*(-x) = (-x)*r(x*y)", "bch property (vi)", shuf2),
        check("bch output is primitive", "Lie elements are primitive", prim),
    ]


def linearization_suite(seed: int, trials: int = 10, truncation: int = 5) -> list[CheckResult]:
    """BCH of rescaled elements that agree modulo length > n is linear modulo length > n+1."""
    rng = random.Random(seed)
    ctx = AlgebraContext.of([("x", 0), ("y", 0), ("z", 0)], truncation)
    diffs = []
    for _ in range(trials):
        for n in (1, 2):
            base = _sample(ctx, rng)
            r = rng.randint(1, 3)
            ws = [base + random_lie(ctx, rng, 0, n_terms=2, min_length=n + 1) for _ in range(r)]
            lams = [random_coefficient(rng) for _ in range(r)]
            lhs = bch_multi([w.scale(c) for w, c in zip(ws, lams)])
            rhs = ctx.zero()
            for w, c in zip(ws, lams):
                rhs = rhs + w.scale(c)
            diffs.append((lhs - rhs).below(n + 2))
    return [check("BCH linearization on close families", "BCH linearization lemma", diffs)]


# gauge action


def mc_samples(model: CircuitModel, rng: random.Random, count: int) -> list[Element]:
    out = [model.v(i) for i in range(1, model.k + 1)]
    while len(out) < count:
        x = random_lie(model.ctx, rng, 0, n_terms=3)
        out.append(gauge(model.cdgl, x, model.v(rng.randint(1, model.k))))
    return out[:count] if count >= model.k else out


def gauge_suite(seed: int, k: int = 3, truncation: int = 4, trials: int = 6) -> list[CheckResult]:
    rng = random.Random(seed)
    model = circuit_model(k, truncation)
    L = model.cdgl
    d = L.differential
    d1, d2 = derivation_component(d, 1), derivation_component(d, 2)
    mcs = mc_samples(model, rng, k + trials)
    comp, zero, inverse, closure, lin, quad, mc_in = ([] for _ in range(7))
    for a in mcs:
        mc_in.append(mc_residual(L, a))
        x = random_lie(model.ctx, rng, 0, n_terms=3)
        y = random_lie(model.ctx, rng, 0, n_terms=3)
        xa = gauge(L, x, a)
        comp.append(gauge(L, x, gauge(L, y, a)) - gauge(L, bch(x, y), a))
        zero.append(gauge(L, model.ctx.zero(), a) - a)
        inverse.append(gauge(L, -x, xa) - a)
        closure.append(mc_residual(L, xa))
        a1, a2 = a.homogeneous_part(1), a.homogeneous_part(2)
        x1, x2 = x.homogeneous_part(1), x.homogeneous_part(2)
        lin.append(xa.homogeneous_part(1) - (a1 - L.d(x).homogeneous_part(1)))
        expected = a2 + bracket(x1, a1) - bracket(x1, d1(x1)).scale(Rational(1, 2)) - d2(x1) - d1(x2)
        quad.append(xa.homogeneous_part(2) - expected)
    return [
        check("sampled MC elements satisfy da + 1/2[a,a] = 0", "MC equation", mc_in),
        check("x G (y G a) = (x*y) G a", "gauge/BCH compatibility", comp),
        check("0 G a = a", "gauge unit law", zero),
        check("(-x) G (x G a) = a", "gauge inverse law", inverse),
        check("gauge preserves MC elements", "gauge closure", closure),
        check("(x G a)_1 = a_1 - (dx)_1", "linear part of gauge", lin),
        check("(x G a)_2 quadratic formula", "quadratic part of gauge", quad),
    ]


# interval


def interval_suite(seed: int, truncation: int = 5, samples: int = 10) -> list[CheckResult]:
    rng = random.Random(seed)
    L = ls_interval(truncation)
    a, b, x = L.ctx.gens("a", "b", "x")
    dx = L.differential.image("x")
    swap = GroupMorphism.from_names(L.ctx, {"a": "b", "b": "a", "x": "-x"})
    da = twisted_differential(L, a)
    db = twisted_differential(L, b)
    ws = [L.gen(n) for n in L.ctx.names]
    for _ in range(samples):
        ws.append(random_lie(L.ctx, rng, rng.choice([-2, -1, 0]), n_terms=3))
    conj = [da(exp_ad(x, w)) - exp_ad(x, db(w)) for w in ws]
    report = check_d_squared(L)
    return [
        check("interval d^2 = 0", "LS interval is a cdgl", _named("d^2", report.residuals)),
        check("x is a path from a to b", "flow relation (-x) G a = b", not path_check(L, x, a, b)),
        check("(-x) G a = b", "flow relation (-x) G a = b", gauge(L, -x, a) - b),
        check("dx: a-based form = b-based form", "LS differential, two closed forms", ls_differential(x, a, b, "a") - dx),
        check("dx: split form = b-based form", "LS differential, two closed forms", ls_differential(x, a, b, "split") - dx),
        check("swap a<->b, x->-x commutes with d", "interval symmetry", _named("defect", equivariance_defects(L, swap))),
        check("d_a e^{ad_x} = e^{ad_x} d_b", "conjugated twisted differentials", conj),
    ]


# circuit


def circuit_suite(k: int, truncation: int) -> list[CheckResult]:
    model = circuit_model(k, truncation)
    L = model.cdgl
    s, t = model.sigma, model.tau
    ident = GroupMorphism.identity(model.ctx)
    d1 = derivation_component(L.differential, 1)
    nu = [d1(model.x(i)) - (model.v(i + 1) - model.v(i)) for i in range(1, k + 1)]
    total = model.ctx.zero()
    for i in range(1, k + 1):
        total = total + d1(model.x(i))
    rel = []
    if s ** k != ident:
        rel.append("sigma^k != id")
    if t @ t != ident:
        rel.append("tau^2 != id")
    if s @ t != t @ (s ** (k - 1)):
        rel.append("sigma tau != tau sigma^(k-1)")
    return [
        check(f"circuit k={k} d^2 = 0", "circuit model is a cdgl", _named("d^2", check_d_squared(L).residuals)),
        check(f"circuit k={k} sigma commutes with d", "G-cdgl", _named("sigma", equivariance_defects(L, s))),
        check(f"circuit k={k} tau commutes with d", "G-cdgl", _named("tau", equivariance_defects(L, t))),
        check(f"circuit k={k} dihedral relations", "dihedral presentation", rel),
        check(f"circuit k={k} d1 x_i = v_(i+1) - v_i", "linear part of the circuit differential", nu),
        check(f"circuit k={k} sum of d1 x_i = 0", "linear part of the circuit differential", total),
    ]


def corrupted_circuit(k: int, truncation: int) -> Cdgl:
    """Negative control: drop the longest term of dx1."""
    model = circuit_model(k, truncation)
    d = model.cdgl.differential
    dx1 = d.image("x1")
    w, _ = dx1.items()[-1]
    broken = Element(model.ctx, {u: c for u, c in dx1.terms.items() if u != w})
    return Cdgl(model.ctx, d.replace("x1", broken))


def fault_suite(k: int, truncation: int) -> list[CheckResult]:
    report = check_d_squared(corrupted_circuit(k, truncation))
    return [check(f"corrupted circuit k={k} d^2 = 0", "negative control", _named("d^2", report.residuals))]


# homology and loops


def homology_suite(k: int, truncation: int) -> list[CheckResult]:
    model = circuit_model(k, truncation)
    solver = D1Solver(model.cdgl)
    out = []
    c1 = solver.cycles(1, 0)
    loop = model.ctx.zero()
    for x in model.edges():
        loop = loop + x
    w1 = model.x(1).items()[0][0]
    ok = len(c1) == 1 and bool(c1[0].coefficient(w1)) and c1[0].scale(1 / c1[0].coefficient(w1)) == loop
    out.append(check(f"k={k} degree-0 length-1 d1-cycles = span(sum x_i)", "d1-homology of the circuit", not ok))
    for n in range(2, min(4, truncation) + 1):
        cyc = solver.cycles(n, 0)
        out.append(check(f"k={k} degree-0 length-{n} Lie d1-cycles = 0", "no degree-0 d1-cycles above length 1", cyc))
    return out


def loop_suite(seed: int, k: int = 3, truncation: int = 4, samples: int = 6) -> list[CheckResult]:
    rng = random.Random(seed)
    model = circuit_model(k, truncation)
    L = model.cdgl
    X = model.loop()
    v1 = model.v(1)
    rt = []
    for lam in (Fraction(0), Fraction(1), Fraction(-2), Fraction(3, 2)):
        w = X.scale(lam)
        if gauge(L, w, v1) != v1:
            rt.append(f"lambda={lam} does not fix v1")
        elif loop_coefficient(model, w) != lam:
            rt.append(f"lambda={lam} not recovered")
    doubled = bch(-X, -X)
    if loop_coefficient(model, doubled) != -2:
        rt.append("(-X)*(-X) is not -2 X")
    solver = D1Solver(L)
    inv = []
    for n in range(1, min(4, truncation) + 1):
        for _ in range(samples):
            s = random_lie(model.ctx, rng, 0, max_length=n, min_length=n, n_terms=3)
            # average over the rotation orbit
            avg = model.ctx.zero()
            t = s
            for _ in range(k):
                avg = avg + t
                t = model.sigma(t)
            for cand in (s, avg):
                rhs = solver.apply_d1(cand)
                if model.sigma(rhs) == rhs:
                    sol = solver.solve(rhs, n, 0)
                    inv.append(model.sigma(sol) - sol)
    return [
        check("loop coefficient round trip", "stabilizer of v1 is the loop line", rt),
        check("sigma-invariant d1-image gives sigma-invariant solution", "sigma-invariance from d1-image", inv),
    ]


# main construction and triangle


def invariant_suite(k: int, truncation: int) -> list[CheckResult]:
    res = full_invariant_mc(circuit_model(k, truncation))
    return [check(f"k={k} {name}", "invariant MC element", r) for name, r in res.checks.items()]


def plain_triangle_suite(truncation: int) -> list[CheckResult]:
    plain = triangle_model(truncation)
    X = plain.boundary.loop()
    dv1 = twisted_differential(plain.boundary.cdgl, plain.boundary.v(1))
    return [
        check("triangle d^2 = 0", "triangle model is a cdgl", _named("d^2", check_d_squared(plain.cdgl).residuals)),
        check("d_v1(x1*x2*x3) = 0", "loop is a d_v1-cycle", dv1(X)),
        check("d_v1(e) = x1*x2*x3", "face differential", twisted_face_differential(plain) - X.to_context(plain.ctx)),
    ]


def symmetric_triangle_checks(sym) -> list[CheckResult]:
    """Checks on a SymmetricTriangleResult."""
    m = sym.model
    conj = bch_multi([sym.beta, *m.boundary.edges(), -sym.beta]).to_context(m.ctx)
    dface = twisted_face_differential(m)
    plain = triangle_model(m.cdgl.ctx.truncation)
    return [
        check("symmetric triangle d^2 = 0", "symmetric triangle is a cdgl", _named("d^2", check_d_squared(m.cdgl).residuals)),
        check("d_Omega(e') = beta*x1*x2*x3*(-beta)", "symmetric face differential", dface - conj),
        check("sigma(d_Omega e') = d_Omega e'", "sigma(e') = e'", m.sigma(dface) - dface),
        check("tau(d_Omega e') = -d_Omega e'", "tau(e') = -e'", m.tau(dface) + dface),
        check("sigma commutes with d on the symmetric triangle", "Sigma3-cdgl", _named("sigma", equivariance_defects(m.cdgl, m.sigma))),
        check("tau commutes with d on the symmetric triangle", "Sigma3-cdgl", _named("tau", equivariance_defects(m.cdgl, m.tau))),
        check(f"loop relations hold (lambda={sym.lam}, mu={sym.mu})", "sigma/tau of beta", _loop_relation_defects(sym)),
        check("phi(e) = e^{ad_-beta}(e') is a chain map", "isomorphism with the symmetric model", _named("phi", chain_map_defects(plain, m))),
    ]


def triangle_suite(truncation: int, symmetric_truncation: int | None = None) -> list[CheckResult]:
    sym = build_symmetric_triangle(symmetric_truncation or truncation)
    return plain_triangle_suite(truncation) + symmetric_triangle_checks(sym)


def _loop_relation_defects(sym) -> list[Element]:
    b = sym.model.boundary
    X, x1 = b.loop(), b.x(1)
    return [
        bch_multi([sym.beta, X.scale(sym.lam), x1]) - b.sigma(sym.beta),
        bch(sym.beta, X.scale(sym.mu)) - b.tau(sym.beta),
    ]


def run_all(seed: int, k: int = 3, truncation: int = 4, trials: int = 10, inject_fault: bool = False) -> list[CheckResult]:
    results: list[CheckResult] = []
    results += bch_suite(seed, trials, truncation)
    results += linearization_suite(seed, max(1, trials // 2), truncation)
    results += gauge_suite(seed, k, truncation, trials=max(2, trials // 2))
    results += interval_suite(seed, truncation, samples=trials)
    results += circuit_suite(k, truncation)
    results += homology_suite(k, truncation)
    results += loop_suite(seed, k, truncation, samples=max(2, trials // 3))
    results += invariant_suite(k, truncation)
    results += triangle_suite(truncation)
    if inject_fault:
        results += fault_suite(k, truncation)
    return results
