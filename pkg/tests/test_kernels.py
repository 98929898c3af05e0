from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symlie import _pykernels, kernels

ck = pytest.importorskip("symlie._ckernels", reason="compiled kernels not built")

DEGS = (-1, 0, 1)
MAXLEN = 4

words = st.lists(st.integers(0, 2), max_size=MAXLEN).map(tuple)
coeffs = st.builds(Fraction, st.integers(-20, 20).filter(bool), st.integers(1, 12))
term_dicts = st.dictionaries(words, coeffs, max_size=8)
nonempty_words = st.lists(st.integers(0, 2), min_size=1, max_size=MAXLEN).map(tuple)


def homogeneous(deg_shift):
    """Image dicts whose words all have degree g + deg_shift for generator g."""

    @st.composite
    def build(draw):
        out = []
        for g, dg in enumerate(DEGS):
            ws = draw(st.lists(nonempty_words, max_size=3))
            ws = [w for w in ws if sum(DEGS[i] for i in w) == dg + deg_shift and len(w) >= 1]
            out.append({w: draw(coeffs) for w in ws})
        return out

    return build()


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")


@settings(max_examples=150, deadline=None)
@given(term_dicts, term_dicts)
def test_mul_and_bracket_parity(a, b):
    assert ck.mul(a, b, MAXLEN) == _pykernels.mul(a, b, MAXLEN)
    assert ck.bracket(a, b, DEGS, MAXLEN) == _pykernels.bracket(a, b, DEGS, MAXLEN)


@settings(max_examples=100, deadline=None)
@given(term_dicts, homogeneous(-1))
def test_derive_parity(a, images):
    assert ck.derive(a, images, DEGS, MAXLEN) == _pykernels.derive(a, images, DEGS, MAXLEN)


@settings(max_examples=100, deadline=None)
@given(term_dicts, st.permutations([0, 1, 2]), st.lists(st.sampled_from([1, -1]), min_size=3, max_size=3))
def test_permute_parity(a, perm, signs):
    assert ck.permute(a, perm, signs) == _pykernels.permute(a, perm, signs)


@settings(max_examples=100, deadline=None)
@given(term_dicts, st.lists(term_dicts, min_size=3, max_size=3))
def test_substitute_parity(a, images):
    assert ck.substitute(a, images, MAXLEN) == _pykernels.substitute(a, images, MAXLEN)


@settings(max_examples=150, deadline=None)
@given(term_dicts)
def test_coproduct_and_dynkin_parity(a):
    assert ck.coproduct_defect(a, DEGS) == _pykernels.coproduct_defect(a, DEGS)
    assert ck.dynkin(a, DEGS) == _pykernels.dynkin(a, DEGS)


def test_mul_drops_long_words():
    a = {(0, 1): Fraction(1)}
    assert ck.mul(a, a, 3) == {}
    assert _pykernels.mul(a, a, 4) == {(0, 1, 0, 1): Fraction(1)}


def test_pure_python_fallback_runs_pipeline():
    import os
    import subprocess
    import sys

    code = (
        "from symlie import kernels\n"
        "from symlie.models import circuit_model\n"
        "from symlie.solver import full_invariant_mc\n"
        "assert kernels.BACKEND == 'python'\n"
        "assert full_invariant_mc(circuit_model(3, 4)).passed\n"
    )
    env = dict(os.environ, SYMLIE_KERNELS="python")
    subprocess.run([sys.executable, "-c", code], check=True, env=env)
