from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from blobgt.blocks import (all_block_tableaux, block_data, detect_quasi_vertical,
                           enclosing_block_data, epsilon_and_b, fundamental_sequence,
                           principal_tableaux, quasi_vertical_sequence, residue_at_grid,
                           tableau_from_subset, vertical_sequence)
from blobgt.errors import BadPrefix, NotPeriodic
from blobgt.residues import (Order, cmp_tableaux, enumerate_std, is_blob_possible,
                             make_ctx, residue_sequence)
from strategies import CONTEXTS, CTX7, CTX13, contexts


@given(contexts(), st.data())
def test_b_sums_to_e(ctx, data):
    t = data.draw(st.integers(1, ctx.l))
    eps, b = epsilon_and_b(ctx, t)
    assert sum(b) == ctx.e
    assert all(x > 0 for x in b)
    assert 0 < eps <= ctx.e


@given(contexts(), st.integers(1, 3), st.data())
def test_grid_points_carry_the_right_residues(ctx, k, data):
    t = data.draw(st.integers(1, ctx.l))
    eps, _ = epsilon_and_b(ctx, t)
    m = eps + k * ctx.e
    bd = block_data(make_ctx(ctx.e, ctx.l, ctx.kappa, m_max=m), t, m)
    assert len(bd.m_grid) == k * (ctx.l - 1)
    residue_at_grid(bd, ctx)        # raises on any mismatch
    # blocks tile [eps+1, m]
    covered = sorted(z for lo, hi in bd.blocks.values() for z in range(lo, hi + 1))
    assert covered == list(range(eps + 1, m + 1))


def test_non_periodic_length():
    with pytest.raises(NotPeriodic):
        block_data(CTX13, 1, 31)
    with pytest.raises(NotPeriodic):
        block_data(CTX13, 1, 5)


def test_tail_allowed_off_base_one():
    bd = block_data(CTX13, 3, 29)
    assert bd.m == 29 and bd.blocks[bd.order[-1]][1] == 29
    with pytest.raises(NotPeriodic):
        block_data(CTX13, 3, 30, allow_tail=False)


def test_enclosing_block_data():
    bd = enclosing_block_data(CTX7, 1, 5)
    assert bd.m == 10 and bd.k == 1


@pytest.mark.parametrize("ctx,k", [(CTX7, 1), (CTX7, 2), (CTX13, 1)])
def test_subsets_biject_onto_fibre(ctx, k):
    eps, _ = epsilon_and_b(ctx, 1)
    m = eps + k * ctx.e
    bd = block_data(ctx, 1, m)
    seq = fundamental_sequence(ctx, m)
    tabs = all_block_tableaux(bd, ctx)
    fibre = {t.entries for t in enumerate_std(seq, ctx)}
    assert len(tabs) == len(fibre) == 2 ** bd.n
    assert {t.entries for t in tabs.values()} == fibre
    assert all(residue_sequence(t, ctx) == seq for t in tabs.values())


def test_principal_tableaux_increase():
    bd = block_data(CTX7, 1, 17)
    prin = principal_tableaux(bd, CTX7)
    ts = [prin[g][0] for g in bd.order]
    for a, b in zip(ts, ts[1:]):
        assert cmp_tableaux(b, a) in (Order.GREATER, Order.INCOMPARABLE)
    assert ts[0] == tableau_from_subset([bd.M[0]], bd, CTX7)


def test_subset_outside_grid():
    bd = block_data(CTX7, 1, 10)
    with pytest.raises(ValueError):
        tableau_from_subset([3], bd, CTX7)


@pytest.mark.parametrize("ctx", CONTEXTS)
def test_quasi_vertical_round_trip(ctx):
    for t in range(1, ctx.l + 1):
        for r0 in range(1, 3):
            m = r0 * ctx.l + 4
            seq = quasi_vertical_sequence(ctx, t, r0, m)
            assert is_blob_possible(seq, ctx)
            kind, t2, r2 = detect_quasi_vertical(seq, ctx)
            assert kind == "quasi-vertical"
            assert quasi_vertical_sequence(ctx, t2, r2, m) == seq
        assert detect_quasi_vertical(vertical_sequence(ctx, t, 6), ctx) == ("vertical", t, 0)


def test_quasi_vertical_prefix_too_long():
    with pytest.raises(BadPrefix):
        quasi_vertical_sequence(CTX7, 1, 2, 6)
