"""Shared contexts and hypothesis strategies."""
from __future__ import annotations

from hypothesis import strategies as st

from blobgt.residues import is_blob_possible, make_ctx

CTX7 = make_ctx(7, 3, (0, 2, 4))
CTX13 = make_ctx(13, 4, (0, 4, 6, 10))
CONTEXTS = [CTX7, CTX13, make_ctx(9, 4, (0, 2, 4, 6)), make_ctx(11, 3, (1, 5, 8))]


def contexts():
    return st.sampled_from(CONTEXTS)


@st.composite
def blob_sequences(draw, ctx=None, min_len=1, max_len=9):
    """A blob-possible residue sequence grown one admissible residue at a time."""
    ctx = ctx or draw(contexts())
    n = draw(st.integers(min_len, max_len))
    seq: tuple[int, ...] = ()
    for _ in range(n):
        opts = [r for r in range(ctx.e) if is_blob_possible(seq + (r,), ctx)]
        seq += (draw(st.sampled_from(opts)),)
    return ctx, seq
