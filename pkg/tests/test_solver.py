import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from symlie.cdgl import gauge
from symlie.core import AlgebraContext
from symlie.lie import PreconditionError
from symlie.linalg import InconsistentSystem, SparseSystem, rank_of
from symlie.models import circuit_model, ls_interval
from symlie.sampling import random_lie
from symlie.solver import (
    D1Solver,
    NoPath,
    NotExact,
    d1_cycles,
    full_invariant_mc,
    gauge_path,
    initial_mc,
    loop_coefficient,
    sigma_average,
    solve_d1,
)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(-3, 3), min_size=5, max_size=5),
        min_size=1,
        max_size=6,
    ),
    st.lists(st.integers(-3, 3), min_size=5, max_size=5),
)
def test_sparse_system_against_sympy(rows, x):
    eqs = [{j: c for j, c in enumerate(r) if c} for r in rows]
    S = SparseSystem(range(5), eqs)
    M = sympy.Matrix(rows)
    assert S.rank == M.rank()
    # a consistent rhs is solved exactly
    rhs_vec = M * sympy.Matrix(x)
    sol = S.solve({i: Fraction(int(v)) for i, v in enumerate(rhs_vec)})
    vec = sympy.Matrix([sympy.Rational(str(sol.get(j, 0))) for j in range(5)])
    assert M * vec == rhs_vec
    for j in S.free_unknowns():
        assert j not in sol
    for v in S.kernel():
        kv = sympy.Matrix([sympy.Rational(str(v.get(j, 0))) for j in range(5)])
        assert M * kv == sympy.zeros(len(rows), 1)
    assert len(S.kernel()) == 5 - M.rank()


def test_inconsistent_system_reports_residual():
    S = SparseSystem(["u"], [{"u": 1}, {"u": 2}], labels=["r1", "r2"])
    with pytest.raises(InconsistentSystem) as info:
        S.solve({"r1": 1, "r2": 1})
    assert info.value.residuals == {"r2": -1}
    assert rank_of([{"a": 1, "b": 1}, {"a": 2, "b": 2}], ["a", "b"]) == 1


@pytest.mark.parametrize("k", [3, 4])
def test_d1_ranks_match_sympy(k):
    model = circuit_model(k, 3)
    solver = D1Solver(model.cdgl)
    for n in (1, 2, 3):
        ls = solver.system(n, 0)
        dense = sympy.zeros(len(ls.codomain), len(ls.domain))
        col = {u: j for j, u in enumerate(ls.domain)}
        d1 = solver.d1
        for u in ls.domain:
            img = d1(model.ctx.element({u: 1}))
            for i, w in enumerate(ls.codomain):
                c = img.coefficient(w)
                if c:
                    dense[i, col[u]] = sympy.Rational(int(c.numerator), int(c.denominator))
        assert ls.rank == dense.rank()


def test_solve_d1_and_normalization():
    model = circuit_model(3, 4)
    L = model.cdgl
    v = [model.v(i) for i in (1, 2, 3)]
    s = solve_d1(L, v[1] - v[0], 1, 0)
    assert s == model.x(1)
    # the loop-class coordinate (x3 coefficient) is set to zero
    s = solve_d1(L, v[0] - v[1], 1, 0)
    assert s.coefficient(model.x(3).items()[0][0]) == 0
    assert s == -model.x(1)
    with pytest.raises(NotExact):
        solve_d1(L, v[0], 1, 0)
    with pytest.raises(ValueError):
        solve_d1(L, v[0] * v[1], 1, 0)


def test_lie_solutions_and_cycles():
    model = circuit_model(3, 4)
    solver = D1Solver(model.cdgl)
    rng = random.Random(4)
    for n in (2, 3, 4):
        s = random_lie(model.ctx, rng, 0, max_length=n, min_length=n, n_terms=3)
        sol = solver.solve(solver.apply_d1(s), n, 0)
        assert sol == s  # unique since the Lie d1-kernel vanishes
        assert d1_cycles(model.cdgl, n, 0, solver=solver) == []
    c = solver.cycles(1, 0)
    assert len(c) == 1


def test_gauge_path_and_no_path():
    L = ls_interval(4)
    a, b, x = L.ctx.gens("a", "b", "x")
    diags = []
    p = gauge_path(L, a, b, diagnostics=diags)
    assert gauge(L, p, b) == a
    assert p == x
    assert [d.stage for d in diags] == [1, 2, 3, 4]
    assert set(diags[0].to_dict()) == {"length", "rows", "cols", "rank", "residual_terms"}
    with pytest.raises(NoPath):
        gauge_path(L, L.ctx.zero(), a)


@pytest.mark.parametrize("lam", [Fraction(0), Fraction(1), Fraction(-2), Fraction(3, 2)])
def test_loop_coefficient_round_trip(lam):
    model = circuit_model(4, 4)
    assert loop_coefficient(model, model.loop().scale(lam)) == lam


def test_loop_coefficient_rejects_non_fixers():
    model = circuit_model(3, 3)
    with pytest.raises(PreconditionError):
        loop_coefficient(model, model.x(1))


def test_sigma_average_and_initial_mc():
    model = circuit_model(3, 1)
    P = initial_mc(model)
    assert P == (model.v(1) + model.v(2) + model.v(3)).scale(Fraction(1, 3))
    t = model.x(1)
    assert sigma_average(model, t) == model.x(1).scale(Fraction(2, 3)) + model.x(2).scale(Fraction(1, 3))


@pytest.mark.parametrize("k,n", [(3, 3), (3, 4), (4, 3), (5, 3)])
def test_full_invariant_mc(k, n):
    res = full_invariant_mc(circuit_model(k, n))
    assert res.passed, {name: str(r) for name, r in res.checks.items() if r}
    assert [s.length for s in res.stages] == list(range(2, n + 1))


def test_invariant_mc_at_length_one():
    model = circuit_model(3, 1)
    res = full_invariant_mc(model)
    assert res.omega == (model.v(1) + model.v(2) + model.v(3)).scale(Fraction(1, 3))


def test_solver_rejects_inhomogeneous_rhs():
    ctx = AlgebraContext.of([("a", -1), ("x", 0)], 2)
    from symlie.cdgl import Cdgl, Derivation

    L = Cdgl(ctx, Derivation(ctx, {}))
    with pytest.raises(ValueError):
        D1Solver(L).solve(ctx.gen("a") + ctx.gen("a") * ctx.gen("x"), 1, 0)
