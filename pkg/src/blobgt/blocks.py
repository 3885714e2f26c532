"""Vertical residue sequences and their block decomposition."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import BadPrefix, InternalInconsistency, NotPeriodic
from .residues import (MulticargeCtx, Node, Residues, Tableau, _dom_key, addable_nodes,
                       max_tableau, node_residue, official_word)

GridIndex = tuple[int, int]


def vertical_sequence(ctx: MulticargeCtx, t: int, m: int) -> Residues:
    return tuple(ctx.res(ctx.kappa[t - 1] - i + 1) for i in range(1, m + 1))


def fundamental_sequence(ctx: MulticargeCtx, m: int) -> Residues:
    return vertical_sequence(ctx, 1, m)


def rotated_hat(ctx: MulticargeCtx, t: int) -> list[int]:
    """kappa-hat read cyclically from component t, adding e on wrap."""
    h = list(ctx.kappa_hat)
    return h[t - 1:] + [x + ctx.e for x in h[:t - 1]]


def rotated_components(ctx: MulticargeCtx, t: int) -> list[int]:
    return [((t - 1 + i) % ctx.l) + 1 for i in range(ctx.l)]


def epsilon_and_b(ctx: MulticargeCtx, t: int = 1) -> tuple[int, tuple[int, ...]]:
    h = rotated_hat(ctx, t)
    l, e = ctx.l, ctx.e
    eps = h[0] - h[l - 1] + e
    b = [h[l - 1 - j] - h[l - 2 - j] for j in range(l - 2)]
    b.append(h[1] - h[l - 1] + e)
    return eps, tuple(b)


@dataclass(frozen=True)
class BlockData:
    base: int
    epsilon: int
    b: tuple[int, ...]
    k: int
    m: int
    l: int
    e: int
    m_grid: dict
    N: tuple[int, int]
    blocks: dict

    @property
    def n(self) -> int:
        return self.k * (self.l - 1)

    @property
    def order(self) -> list[GridIndex]:
        """Grid indices in ascending m_(r,j)."""
        return sorted(self.m_grid, key=self.m_grid.__getitem__)

    @property
    def M(self) -> list[int]:
        return [self.m_grid[g] for g in self.order]

    def prev(self, g: GridIndex) -> GridIndex | None:
        o = self.order
        i = o.index(g)
        return o[i - 1] if i else None

    def block_of(self, z: int) -> GridIndex | None:
        """Grid index whose block contains z, or None for z in N."""
        for g, (lo, hi) in self.blocks.items():
            if lo <= z <= hi:
                return g
        return None

    def as_dict(self) -> dict:
        key = lambda g: f"({g[0]},{g[1]})"
        return {
            "base": self.base, "epsilon": self.epsilon, "b": list(self.b), "k": self.k,
            "m": self.m, "n": self.n,
            "m_grid": {key(g): self.m_grid[g] for g in self.order},
            "N": list(self.N),
            "blocks": {key(g): list(self.blocks[g]) for g in self.order},
        }


def block_data(ctx: MulticargeCtx, t: int, m: int, allow_tail: bool | None = None) -> BlockData:
    """Blocks of the vertical sequence of base t and length m.

    Base 1 requires m = epsilon + k*e exactly.  For other bases a tail shorter
    than e is absorbed into the last block unless `allow_tail` is False.
    """
    eps, b = epsilon_and_b(ctx, t)
    e, l = ctx.e, ctx.l
    if allow_tail is None:
        allow_tail = t != 1
    k = (m - eps) // e if m > eps else 0
    if k < 1 or ((m - eps) % e and not allow_tail):
        raise NotPeriodic(f"m={m} is not epsilon + k*e with epsilon={eps}, e={e}, k>=1")
    grid: dict[GridIndex, int] = {}
    for r in range(1, k + 1):
        for j in range(l - 1):
            if r == 1:
                grid[(r, j)] = eps + 1 if j == 0 else grid[(r, j - 1)] + b[j - 1]
            else:
                grid[(r, j)] = grid[(r - 1, j)] + e
    order = sorted(grid, key=grid.__getitem__)
    blocks = {}
    for i, g in enumerate(order):
        hi = grid[order[i + 1]] - 1 if i + 1 < len(order) else m
        blocks[g] = (grid[g], hi)
    return BlockData(t, eps, b, k, m, l, e, grid, (1, eps), blocks)


def enclosing_block_data(ctx: MulticargeCtx, t: int, m: int) -> BlockData:
    """Block data for the smallest periodic length m' >= m (with k >= 1)."""
    eps, _ = epsilon_and_b(ctx, t)
    k = max(1, -(-(m - eps) // ctx.e))
    return block_data(ctx, t, eps + k * ctx.e)


def residue_at_grid(bd: BlockData, ctx: MulticargeCtx) -> dict[GridIndex, int]:
    seq = vertical_sequence(ctx, bd.base, bd.m)
    comps = rotated_components(ctx, bd.base)
    base_res = ctx.kappa[bd.base - 1]
    for s in range(1, bd.m + 1):
        if (seq[s - 1] == base_res) != ((s - 1) % ctx.e == 0):
            raise InternalInconsistency(f"position {s} breaks the base-residue pattern")
    out = {}
    for (r, j), z in bd.m_grid.items():
        want = ctx.kappa[comps[ctx.l - j - 1] - 1]
        if seq[z - 1] != want:
            raise InternalInconsistency(f"m_({r},{j})={z} carries {seq[z - 1]}, expected {want}")
        out[(r, j)] = want
    return out


def tableau_from_subset(A: Iterable[int], bd: BlockData, ctx: MulticargeCtx) -> Tableau:
    A = set(A)
    M = set(bd.M)
    if not A <= M:
        raise ValueError(f"{sorted(A - M)} are not grid values")
    seq = vertical_sequence(ctx, bd.base, bd.m)
    heights = [0] * ctx.l
    entries: list[Node] = []
    for a in range(1, bd.m + 1):
        cands = [n for n in addable_nodes(tuple(heights)) if node_residue(n, ctx) == seq[a - 1]]
        cands.sort(key=_dom_key, reverse=True)
        if a in M:
            if len(cands) != 2:
                raise InternalInconsistency(f"step {a}: expected two addable nodes, got {cands}")
            node = cands[0] if a in A else cands[-1]
        else:
            if len(cands) != 1:
                raise InternalInconsistency(f"step {a}: expected a forced node, got {cands}")
            node = cands[0]
        entries.append(node)
        heights[node.comp - 1] += 1
    return Tableau(tuple(entries), ctx.l)


def all_block_tableaux(bd: BlockData, ctx: MulticargeCtx) -> dict[frozenset, Tableau]:
    M = bd.M
    return {frozenset(A): tableau_from_subset(A, bd, ctx)
            for size in range(len(M) + 1) for A in combinations(M, size)}


def principal_tableau(bd: BlockData, g: GridIndex, ctx: MulticargeCtx) -> Tableau:
    cut = bd.m_grid[g]
    return tableau_from_subset([z for z in bd.M if z <= cut], bd, ctx)


def principal_tableaux(bd: BlockData, ctx: MulticargeCtx) -> dict[GridIndex, tuple[Tableau, tuple, Tableau]]:
    out = {}
    for g in bd.order:
        t = principal_tableau(bd, g, ctx)
        out[g] = (t, t.shape, max_tableau(t.shape, ctx))
    return out


def s_tableau(bd: BlockData, g: GridIndex, h: GridIndex, ctx: MulticargeCtx) -> Tableau:
    """Agrees with t_g below m_h and fills the rest in decreasing node order."""
    t = principal_tableau(bd, g, ctx)
    cut = bd.m_grid[h] - 1
    head = t.entries[:cut]
    rest = sorted(set(t.entries) - set(head), key=_dom_key, reverse=True)
    return Tableau(head + tuple(rest), ctx.l)


def ht_factorization(bd: BlockData, g: GridIndex, ctx: MulticargeCtx) -> tuple[tuple[int, ...], list[tuple[GridIndex, tuple[int, ...]]]]:
    """Return H^(1,0) and the ordered T-factors of d(t_g)."""
    cut = bd.m_grid[g]
    idx = [h for h in bd.order if bd.m_grid[h] <= cut]
    words = [official_word(s_tableau(bd, g, h, ctx)) for h in idx]
    factors = []
    for prev, cur, h in zip(words, words[1:], idx[1:]):
        if cur[:len(prev)] != prev:
            raise InternalInconsistency(f"H-word for {h} does not extend its predecessor")
        factors.append((h, cur[len(prev):]))
    return words[0], factors


# ---------------------------------------------------------------- quasi-vertical

def max_sequence(ctx: MulticargeCtx, m: int) -> Residues:
    """Residue sequence of the maximal tableau of the maximal one-column shape."""
    q, r = divmod(m, ctx.l)
    heights = tuple(q + (h < r) for h in range(ctx.l))
    t = max_tableau(heights, ctx)
    return tuple(node_residue(n, ctx) for n in t.entries)


def quasi_vertical_sequence(ctx: MulticargeCtx, t: int, r0: int, m: int) -> Residues:
    h = r0 * ctx.l
    if h >= m:
        raise BadPrefix(f"prefix length {h} must be below m={m}")
    tail = tuple(ctx.res(ctx.kappa[t - 1] - r0 - k + 1) for k in range(1, m - h + 1))
    return max_sequence(ctx, h) + tail


def detect_quasi_vertical(seq: Sequence[int], ctx: MulticargeCtx) -> tuple[str, int | None, int | None]:
    """Classify as ('vertical', t, 0), ('quasi-vertical', t, r0) or ('other', None, None)."""
    seq = tuple(seq)
    m = len(seq)
    for t in range(1, ctx.l + 1):
        if seq == vertical_sequence(ctx, t, m):
            return ("vertical", t, 0)
    for r0 in range(1, (m - 1) // ctx.l + 1):
        for t in range(1, ctx.l + 1):
            if seq == quasi_vertical_sequence(ctx, t, r0, m):
                return ("quasi-vertical", t, r0)
    return ("other", None, None)
