from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from blobgt.blocks import block_data, fundamental_sequence, vertical_sequence
from blobgt.errors import AssociativityFailure, NonTermination
from blobgt.gt import (build_L_presentation, build_Y_presentation, certify,
                       concrete_dim_upper_bound, dim_abstract, explore_Q, predicted_dim,
                       prefix_dim_predicted, presentations_isomorphic, random_associativity,
                       sim_classes, top_monomial_pairing)
from blobgt.residues import all_blob_possible
from strategies import CTX7, CTX13

SMALL_KL = [(1, 3), (2, 3), (1, 4), (2, 4), (3, 3), (1, 5), (2, 5), (1, 9)]


@pytest.mark.parametrize("k,l", SMALL_KL)
def test_both_presentations_certified(k, l):
    y, lp = build_Y_presentation(k, l), build_L_presentation(k, l)
    assert dim_abstract(y) == dim_abstract(lp) == 2 ** (k * (l - 1))
    assert presentations_isomorphic(y, lp)
    assert random_associativity(y, 50, seed=1)


def test_corrupted_coefficients_break_isomorphism():
    y = build_Y_presentation(2, 3)
    bad = build_L_presentation(2, 3, coeff=lambda h, g: -1)
    assert not presentations_isomorphic(y, bad)


def test_looping_squares_are_caught():
    # x0^2 = x0 x1 = x1^2 sends x0^2 x1 back to itself
    pres = build_L_presentation(1, 3)
    pres.squares = [{3: 1}, {3: 1}]
    with pytest.raises(NonTermination):
        certify(pres)


def test_bad_product_table_is_caught():
    pres = build_Y_presentation(1, 4)
    pres.mul_mono(1, 2)
    pres._memo[(1, 1, 0)] = {0: 1}      # x0 x1 := 1, inconsistent with x0^2 = 0
    with pytest.raises(AssociativityFailure):
        certify(pres)


@given(st.integers(1, 2), st.integers(3, 4), st.lists(st.integers(0, 15), min_size=1, max_size=5))
def test_reduce_terminates_and_is_idempotent(k, l, exps):
    pres = build_Y_presentation(k, l)
    exps = (exps + [0] * pres.n)[:pres.n]
    r = pres.reduce_exponents(exps)
    assert all(mask < (1 << pres.n) for mask in r)
    as_exps = {tuple((mask >> i) & 1 for i in range(pres.n)): c for mask, c in r.items()}
    assert pres.reduce(as_exps) == r


@given(st.integers(1, 2), st.integers(3, 4), st.data())
def test_reduced_product_is_associative(k, l, data):
    pres = build_Y_presentation(k, l)
    n = 1 << pres.n
    a, b, c = ({data.draw(st.integers(0, n - 1)): 1} for _ in range(3))
    assert pres.mul(pres.mul(a, b), c) == pres.mul(a, pres.mul(b, c))
    assert pres.mul(a, b) == pres.mul(b, a)


def test_top_monomial_pairing_small():
    assert top_monomial_pairing(build_L_presentation(1, 3))


def test_concrete_dimension_small():
    seq = fundamental_sequence(CTX7, 10)
    cd = concrete_dim_upper_bound(seq, CTX7)
    assert (cd.dim, cd.exact) == (4, True)
    assert cd.by_degree == {0: (1, 1), 2: (2, 2), 4: (1, 1)}


def test_concrete_prefix_dimension():
    seq = fundamental_sequence(CTX7, 10)
    bd = block_data(CTX7, 1, 10)
    for a in (3, 4, 6):
        cd = concrete_dim_upper_bound(seq, CTX7, prefix=a)
        assert cd.exact and cd.dim == prefix_dim_predicted(bd, a)


def test_predicted_dimension_labels():
    assert predicted_dim(vertical_sequence(CTX7, 1, 10), CTX7) == ("vertical", 4)
    assert predicted_dim(vertical_sequence(CTX13, 1, 29), CTX13) == ("vertical", 64)
    kind, _ = predicted_dim((0, 2, 4, 6, 5), CTX7)
    assert kind in ("quasi-vertical", "other")


def test_classes_partition_the_possible_sequences():
    for m in range(1, 5):
        classes = sim_classes(m, CTX7)
        flat = [s for c in classes for s in c]
        assert sorted(flat) == all_blob_possible(m, CTX7)


def test_explore_rows_consistent():
    rows = explore_Q(CTX7, 3)
    assert rows and all(r.verdict in ("consistent", "inconclusive") for r in rows)
    assert all(r.concrete_dim == r.std_count for r in rows if r.exact)
    quick = explore_Q(CTX7, 3, classes_only=True)
    assert [r.class_rep for r in quick] == [r.class_rep for r in rows]
    assert all(r.verdict == "not-computed" for r in quick)
