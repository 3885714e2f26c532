from __future__ import annotations

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from blobgt.blocks import fundamental_sequence
from blobgt.errors import NonTermination, ShapeMismatch
from blobgt.klr import (Engine, L_element, Verdict, dim_truncation_formula, max_grade,
                        perm_of_word, top_sequence)
from blobgt.residues import enumerate_std
from oracles import PolyRep
from strategies import CTX7, blob_sequences

FREE = {}


def free_engine(m: int) -> Engine:
    if m not in FREE:
        FREE[m] = Engine(CTX7, m, quotient=False, use_search=False)
    return FREE[m]


@st.composite
def words(draw, m_range=(2, 5), max_tokens=8, blob=False):
    if blob:
        _, k = draw(blob_sequences(CTX7, m_range[0], m_range[1]))
        m = len(k)
        if m < 2:
            k, m = k + (6,), m + 1
    else:
        m = draw(st.integers(*m_range))
        k = tuple(draw(st.lists(st.sampled_from([0, 1, 2, 3, 5]), min_size=m, max_size=m)))
    n = draw(st.integers(0, max_tokens))
    toks = []
    for _ in range(n):
        if draw(st.booleans()):
            toks.append(("s", draw(st.integers(1, m - 1))))
        else:
            toks.append(("y", draw(st.integers(1, m))))
    return m, k, toks


# ---------------------------------------------------------------- oracle

def _agrees(eng: Engine, rep: PolyRep, toks, k, f) -> bool:
    x = eng.word(toks, k)
    want = rep.act(toks, k, f)
    got: dict = {}
    for t, c in x.terms.items():
        for s, g in rep.act(eng.term_tokens(t), t[2], f).items():
            got[s] = sp.expand(got.get(s, 0) + c * g)
    for s in set(got) | set(want):
        d = sp.expand(got.get(s, 0) - want.get(s, 0))
        if d != 0 and any(c % eng.p for c in sp.Poly(d, *rep.y).coeffs()):
            return False
    return True


@settings(max_examples=80)
@given(words(m_range=(2, 6), max_tokens=10))
def test_normal_form_matches_polynomial_representation(case):
    m, k, toks = case
    eng = free_engine(m)
    rep = PolyRep(CTX7.e, m)
    f = 1 + 2 * rep.y[0] ** 2 - rep.y[m - 1] + rep.y[0] * rep.y[m // 2]
    assert _agrees(eng, rep, toks, k, f)


def test_braid_relation_with_correction():
    # psi1 psi2 psi1 - psi2 psi1 psi2 on e(i, i+1, i) is -1 times the identity
    eng = free_engine(3)
    k = (2, 3, 2)
    lhs = eng.word([("s", 1), ("s", 2), ("s", 1)], k)
    rhs = eng.word([("s", 2), ("s", 1), ("s", 2)], k)
    assert (lhs - rhs) == -1 * eng.idem(k)


def test_quadratic_relation_cousins():
    eng = free_engine(2)
    k = (2, 3)
    sq = eng.word([("s", 1), ("s", 1)], k)
    assert sq == eng.y(2, k) - eng.y(1, k)


def test_idempotents_orthogonal():
    eng = Engine(CTX7, 4)
    a, b = (0, 6, 5, 4), (0, 6, 2, 5)
    assert eng.product(eng.idem(a), eng.idem(a)) == eng.idem(a)
    assert eng.product(eng.idem(a), eng.idem(b)).is_zero()


def test_idempotent_length_checked():
    with pytest.raises(ValueError):
        Engine(CTX7, 3).idem((0, 6))


# ---------------------------------------------------------------- star

@given(words(m_range=(2, 5), max_tokens=6), words(m_range=(2, 5), max_tokens=6))
def test_star_anti_involution_free(a, b):
    m = min(a[0], b[0])
    eng = free_engine(m)
    x = eng.word([t for t in a[2] if t[1] < m], a[1][:m])
    y = eng.word([t for t in b[2] if t[1] < m], b[1][:m])
    assert eng.star(eng.star(x)) == x
    assert eng.star(eng.product(x, y)) == eng.product(eng.star(y), eng.star(x))
    assert eng.star(x + y) == eng.star(x) + eng.star(y)


@given(words(m_range=(3, 6), max_tokens=6, blob=True))
def test_star_involution_in_quotient(case):
    m, k, toks = case
    eng = Engine(CTX7, m)
    x = eng.word(toks, k)
    assert eng.equal(eng.star(eng.star(x)), x).verdict is Verdict.VERIFIED


# ---------------------------------------------------------------- normalize

@given(words(m_range=(3, 7), max_tokens=8, blob=True))
def test_normalize_idempotent_and_graded(case):
    m, k, toks = case
    eng = Engine(CTX7, m)
    x = eng.word(toks, k)
    n1 = eng.normalize(x)
    assert eng.normalize(n1) == n1
    # a word is homogeneous, so every surviving term keeps its degree
    assert len(x.degrees()) <= 1
    assert n1.degrees() <= x.degrees()


@given(blob_sequences(CTX7, 2, 8))
def test_first_dot_vanishes(case):
    _, k = case
    eng = Engine(CTX7, len(k))
    assert eng.normalize(eng.y(1, k)).is_zero()


def test_truncation_dimension_formula():
    k = fundamental_sequence(CTX7, 10)
    assert dim_truncation_formula(k, CTX7) == 4
    assert max_grade(k, CTX7) == 4


def test_cellular_elements_have_their_degree():
    k = fundamental_sequence(CTX7, 10)
    eng = Engine(CTX7, 10)
    tabs = enumerate_std(k, CTX7)
    for s in tabs:
        for t in tabs:
            if s.shape != t.shape:
                with pytest.raises(ShapeMismatch):
                    eng.cellular_basis_element(s, t)
                continue
            x = eng.normalize(eng.cellular_basis_element(s, t))
            assert not x.is_zero()
            assert x.degrees() == {eng.tableau_degree(s) + eng.tableau_degree(t)}


def test_equal_refutes_by_grading():
    k = fundamental_sequence(CTX7, 10)
    eng = Engine(CTX7, 10)
    v = eng.equal(eng.idem(k), eng.y(8, k))
    assert v.verdict is Verdict.REFUTED_BY_GRADING
    assert not v


def test_dump_format():
    eng = free_engine(3)
    x = 2 * eng.word([("s", 2), ("y", 3), ("y", 3)], (0, 6, 2))
    assert x.dump() == "2 * e(0,6,2) s2 y3^2"


def test_helpers():
    assert L_element(1, 4) == {1: -1}
    assert L_element(3, 4) == {2: 1, 3: -1}
    with pytest.raises(ValueError):
        L_element(5, 4)
    u = perm_of_word((1,), 3)
    assert top_sequence(u, (0, 1, 2)) in {(1, 0, 2), (0, 1, 2)}


def test_budget_is_enforced():
    eng = Engine(CTX7, 5, budget=3, quotient=False)
    with pytest.raises(NonTermination):
        eng.word([("s", a) for a in (1, 2, 3, 4, 3, 2, 1, 2, 3)], (0, 6, 2, 1, 4))
