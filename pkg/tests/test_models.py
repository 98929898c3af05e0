from fractions import Fraction

import pytest

from symlie.cdgl import check_d_squared, derivation_component, gauge, is_mc
from symlie.core import AlgebraContext
from symlie.lie import PreconditionError, bch_multi, bracket, exp_ad
from symlie.models import (
    AlgebraMorphism,
    GroupMorphism,
    cdgl_from_dict,
    cdgl_to_dict,
    chain_map_defects,
    circuit_model,
    equivariance_defects,
    ls_differential,
    ls_interval,
    path_check,
    symmetric_triangle,
    triangle_model,
)

import oracle


def test_ls_low_order_terms_by_hand():
    L = ls_interval(3)
    a, b, x = L.ctx.gens("a", "b", "x")
    dx = L.differential.image("x")
    X, A, B = (oracle.gen(c, 3, frozenset("ab")) for c in "xab")
    # dx = (b - a) + 1/2 [x, a + b] + 1/12 [x, [x, b - a]] mod length > 3
    ref = (B - A) + X.bracket(A + B).scale(Fraction(1, 2)) + X.bracket(X.bracket(B - A)).scale(Fraction(1, 12))
    assert oracle.to_poly(dx, {"a": "a", "b": "b", "x": "x"}) == ref


@pytest.mark.parametrize("n", [3, 5, 6])
def test_ls_interval(n):
    L = ls_interval(n)
    a, b, x = L.ctx.gens("a", "b", "x")
    assert check_d_squared(L).passed
    assert path_check(L, x, a, b)
    assert not path_check(L, -x, a, b)
    dx = L.differential.image("x")
    assert ls_differential(x, a, b, "a") == dx
    assert ls_differential(x, a, b, "split") == dx
    with pytest.raises(ValueError):
        ls_differential(x, a, b, "c")


def test_group_morphisms():
    model = circuit_model(5, 2)
    s, t = model.sigma, model.tau
    ident = GroupMorphism.identity(model.ctx)
    assert s ** 5 == ident and s ** 3 != ident
    assert t @ t == ident
    assert s @ t == t @ s ** 4
    assert s.table()["x5"] == "x1"
    assert t.table()["x1"] == "-x5"
    assert t.table()["v1"] == "v1" and t.table()["v2"] == "v5"
    assert s(model.x(1) * model.v(2)) == model.x(2) * model.v(3)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_circuit_models(k):
    model = circuit_model(k, 4)
    L = model.cdgl
    assert len(model.ctx.generators) == 2 * k
    assert check_d_squared(L).passed
    assert not any(equivariance_defects(L, model.sigma).values())
    assert not any(equivariance_defects(L, model.tau).values())
    d1 = derivation_component(L.differential, 1)
    for i in range(1, k + 1):
        assert d1(model.x(i)) == model.v(i + 1) - model.v(i)
        assert path_check(L, model.x(i), model.v(i), model.v(i + 1))
    # the loop fixes v1
    assert gauge(L, model.loop(), model.v(1)) == model.v(1)


def test_circuit_needs_three_edges():
    with pytest.raises(ValueError):
        circuit_model(2, 3)


def test_plain_triangle():
    T = triangle_model(5)
    assert T.sigma is None and not T.symmetric
    assert check_d_squared(T.cdgl).passed
    e, v1 = T.ctx.gens("e", "v1")
    assert T.cdgl.d(e) == -bracket(e, v1) + T.lift(T.boundary.loop())


def test_plus_sign_for_face_fails_d_squared():
    # with +[e, v1] the square of d is not zero on e (kept as a regression witness)
    from symlie.cdgl import Cdgl, Derivation

    T = triangle_model(4)
    e, v1 = T.ctx.gens("e", "v1")
    imgs = {g.name: T.cdgl.differential.image(g.name) for g in T.ctx.generators}
    imgs["e"] = bracket(e, v1) + T.lift(T.boundary.loop())
    rep = check_d_squared(Cdgl(T.ctx, Derivation(T.ctx, imgs)))
    assert rep.failures() == ["e"]


def test_symmetric_triangle_rejects_bad_input():
    b = circuit_model(3, 3)
    with pytest.raises(PreconditionError):
        symmetric_triangle(b.v(1), b.ctx.zero())  # v1 is not rotation invariant


def test_cdgl_serialization_round_trip():
    model = circuit_model(4, 3)
    data = cdgl_to_dict(model.cdgl, {"sigma": model.sigma, "tau": model.tau})
    L, morph = cdgl_from_dict(data)
    assert L.ctx == model.ctx
    assert L.differential == model.cdgl.differential
    assert morph["sigma"] == model.sigma and morph["tau"] == model.tau
    assert cdgl_to_dict(L, morph) == data


def test_algebra_morphism_substitution():
    src = AlgebraContext.of([("u", 0)], 3)
    tgt = AlgebraContext.of([("x", 0), ("y", 0)], 3)
    x, y = tgt.gens("x", "y")
    phi = AlgebraMorphism(src, tgt, {"u": x + y})
    u = src.gen("u")
    assert phi(u * u) == (x + y) * (x + y)


def test_chain_map_against_conjugated_face():
    from symlie.solver import build_symmetric_triangle

    sym = build_symmetric_triangle(3)
    plain = triangle_model(3)
    assert not any(chain_map_defects(plain, sym.model).values())
    m = sym.model
    e_img = exp_ad(-m.beta, m.ctx.gen("e'"))
    assert e_img.homogeneous_part(1) == m.ctx.gen("e'")
    assert is_mc(m.boundary.cdgl, sym.invariant.omega)
    X = bch_multi(m.boundary.edges())
    assert X == m.boundary.loop()
