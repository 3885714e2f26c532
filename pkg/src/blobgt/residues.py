"""Residue and tableau combinatorics for one-column multipartitions.

Everything here is pure: contexts are frozen and the only mutable state is
memo tables keyed by immutable inputs.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple, Sequence

from sympy import isprime

from .errors import AdjacencyViolation, BadParams, ClassTooLarge, SizeMismatch

Residues = tuple[int, ...]
Heights = tuple[int, ...]


class Order(Enum):
    GREATER = ">"
    LESS = "<"
    EQUAL = "="
    INCOMPARABLE = "||"


def lift_kappa(residues: Sequence[int], e: int, m_max: int) -> tuple[int, ...]:
    """Integer lifts of `residues` whose consecutive gaps are at least m_max."""
    q = -(-(m_max + e - 1) // e)
    return tuple(r % e + i * e * q for i, r in enumerate(residues))


@dataclass(frozen=True)
class MulticargeCtx:
    e: int
    l: int
    p: int
    kappa_lift: tuple[int, ...]
    kappa: Residues
    kappa_hat: tuple[int, ...]
    interval_start: int
    m_max: int
    _memo: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def res(self, x: int) -> int:
        return x % self.e

    def is_cousin(self, a: int, b: int) -> bool:
        return (a - b) % self.e in (1, self.e - 1)

    def related(self, a: int, b: int) -> bool:
        return a == b or self.is_cousin(a, b)

    def key(self) -> tuple:
        return (self.e, self.l, self.p, self.kappa)


def validate_multicharge(e: int, l: int, p: int, kappa_lift: Sequence[int],
                         interval_start: int = 0, m_max: int = 0) -> MulticargeCtx:
    kappa_lift = tuple(int(k) for k in kappa_lift)
    if l <= 2:
        raise BadParams(f"level l={l} must exceed 2")
    if len(kappa_lift) != l:
        raise BadParams(f"expected {l} charges, got {len(kappa_lift)}")
    if e <= 2 * l:
        raise BadParams(f"need e > 2l, got e={e}, l={l}")
    if not isprime(p):
        raise BadParams(f"p={p} is not prime")
    if math.gcd(e, p) != 1:
        raise BadParams(f"gcd(e, p) = gcd({e}, {p}) != 1")
    for i in range(l - 1):
        if kappa_lift[i + 1] - kappa_lift[i] < m_max:
            raise AdjacencyViolation("i", f"lift gap {i + 1}->{i + 2} is below m={m_max}")
    kappa = tuple(k % e for k in kappa_lift)
    for i in range(l):
        for j in range(i + 1, l):
            if (kappa[i] - kappa[j]) % e in (0, 1, e - 1):
                raise AdjacencyViolation(
                    "ii", f"kappa_{i + 1}={kappa[i]} and kappa_{j + 1}={kappa[j]} are related mod {e}")
    if kappa[0] == (kappa[-1] + 2) % e:
        raise AdjacencyViolation("iii", f"kappa_1 = kappa_{l} + 2 mod {e}")
    hat = tuple(interval_start + (k - interval_start) % e for k in kappa)
    if any(a >= b for a, b in zip(hat, hat[1:])):
        raise AdjacencyViolation("iv", f"representatives {hat} are not increasing in J")
    return MulticargeCtx(e, l, p, kappa_lift, kappa, hat, interval_start, m_max)


def make_ctx(e: int, l: int, kappa: Sequence[int], p: int = 5, m_max: int = 0,
             interval_start: int = 0) -> MulticargeCtx:
    """Convenience constructor taking residues and lifting them automatically."""
    return validate_multicharge(e, l, p, lift_kappa(kappa, e, m_max), interval_start, m_max)


# ---------------------------------------------------------------- nodes

class Node(NamedTuple):
    row: int
    col: int
    comp: int


def node_residue(node: Node, ctx: MulticargeCtx) -> int:
    return ctx.res(ctx.kappa[node.comp - 1] + node.col - node.row)


def _dom_key(node: Node) -> tuple[int, int]:
    return (node.col - node.row, -node.comp)


def cmp_nodes(a: Node, b: Node) -> Order:
    ka, kb = _dom_key(a), _dom_key(b)
    if ka > kb:
        return Order.GREATER
    if ka < kb:
        return Order.LESS
    return Order.EQUAL


def diagram(heights: Heights) -> list[Node]:
    return [Node(r, 1, h + 1) for h, a in enumerate(heights) for r in range(1, a + 1)]


def addable_nodes(heights: Heights) -> list[Node]:
    return [Node(a + 1, 1, h + 1) for h, a in enumerate(heights)]


def cmp_multipartitions(lam: Heights, mu: Heights) -> Order:
    if sum(lam) != sum(mu):
        raise SizeMismatch(f"|{lam}| != |{mu}|")
    if tuple(lam) == tuple(mu):
        return Order.EQUAL
    dl, dm = diagram(lam), diagram(mu)
    kl = sorted((_dom_key(g) for g in dl), reverse=True)
    km = sorted((_dom_key(g) for g in dm), reverse=True)
    ge = le = True
    for g0 in set(kl) | set(km):
        cl = sum(1 for k in kl if k > g0)
        cm = sum(1 for k in km if k > g0)
        ge &= cl >= cm
        le &= cl <= cm
    if ge:
        return Order.GREATER
    if le:
        return Order.LESS
    return Order.INCOMPARABLE


# ---------------------------------------------------------------- tableaux

@dataclass(frozen=True)
class Tableau:
    """Position k-1 of `entries` holds the node t(k)."""

    entries: tuple[Node, ...]
    l: int

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> Heights:
        h = [0] * self.l
        for node in self.entries:
            h[node.comp - 1] += 1
        return tuple(h)

    def restrict(self, k: int) -> "Tableau":
        return Tableau(self.entries[:k], self.l)

    def is_standard(self) -> bool:
        seen = [0] * self.l
        for node in self.entries:
            if node.col != 1 or node.row != seen[node.comp - 1] + 1:
                return False
            seen[node.comp - 1] += 1
        return True

    def swap(self, a: int) -> "Tableau":
        """Right action of s_a: exchange the entries a and a+1."""
        e = list(self.entries)
        e[a - 1], e[a] = e[a], e[a - 1]
        return Tableau(tuple(e), self.l)

    def columns(self) -> list[list[int]]:
        cols: list[list[int]] = [[] for _ in range(self.l)]
        for k, node in enumerate(self.entries, 1):
            cols[node.comp - 1].append(k)
        return cols

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> "Tableau":
        m = sum(len(c) for c in cols)
        entries: list[Node | None] = [None] * m
        for h, col in enumerate(cols, 1):
            for r, k in enumerate(col, 1):
                entries[k - 1] = Node(r, 1, h)
        return cls(tuple(entries), len(cols))  # type: ignore[arg-type]


def residue_sequence(t: Tableau, ctx: MulticargeCtx) -> Residues:
    return tuple(node_residue(n, ctx) for n in t.entries)


def cmp_tableaux(s: Tableau, t: Tableau) -> Order:
    if s.m != t.m:
        raise SizeMismatch(f"tableaux of sizes {s.m} and {t.m}")
    ge = le = True
    for k in range(1, s.m + 1):
        o = cmp_multipartitions(s.restrict(k).shape, t.restrict(k).shape)
        if o is Order.INCOMPARABLE:
            return Order.INCOMPARABLE
        ge &= o in (Order.GREATER, Order.EQUAL)
        le &= o in (Order.LESS, Order.EQUAL)
    if ge and le:
        return Order.EQUAL
    if ge:
        return Order.GREATER
    if le:
        return Order.LESS
    return Order.INCOMPARABLE


def max_tableau(heights: Heights, ctx_or_l) -> Tableau:
    l = ctx_or_l if isinstance(ctx_or_l, int) else ctx_or_l.l
    nodes = sorted(diagram(tuple(heights)), key=_dom_key, reverse=True)
    return Tableau(tuple(nodes), l)


def liftable_set(t: Tableau) -> set[int]:
    # t and t s_a only differ in their restriction to {1..a}, and those two
    # shapes differ by a single node, so comparing the swapped nodes suffices.
    out = set()
    for a in range(1, t.m):
        u, v = t.entries[a - 1], t.entries[a]
        if u.comp != v.comp and _dom_key(v) > _dom_key(u):
            out.add(a)
    return out


def official_word(t: Tableau) -> tuple[int, ...]:
    letters = []
    while True:
        lift = liftable_set(t)
        if not lift:
            break
        a = max(lift)
        letters.append(a)
        t = t.swap(a)
    return tuple(reversed(letters))


def perm_of(t: Tableau) -> tuple[int, ...]:
    """One-line notation of d(t): t(k) = t^lambda(d(t)(k))."""
    top = max_tableau(t.shape, t.l)
    where = {node: k for k, node in enumerate(top.entries, 1)}
    return tuple(where[node] for node in t.entries)


def perm_from_word(letters: Iterable[int], m: int) -> tuple[int, ...]:
    w = list(range(1, m + 1))
    for a in letters:
        w[a - 1], w[a] = w[a], w[a - 1]
    return tuple(w)


def coxeter_length(w: Sequence[int]) -> int:
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


# ---------------------------------------------------------------- residue fibres

def enumerate_std(seq: Sequence[int], ctx: MulticargeCtx) -> list[Tableau]:
    """All one-column standard tableaux with residue sequence `seq`.

    Depth-first with children in descending node order, so the output is
    sorted with the greatest chosen node first at the earliest branching.
    """
    seq = tuple(seq)
    memo = ctx._memo.setdefault("std", {})
    if seq in memo:
        return memo[seq]
    out: list[Tableau] = []

    def rec(entries: tuple[Node, ...], h: list[int]):
        s = len(entries)
        if s == len(seq):
            out.append(Tableau(entries, ctx.l))
            return
        cands = [n for n in addable_nodes(tuple(h)) if node_residue(n, ctx) == seq[s]]
        cands.sort(key=_dom_key, reverse=True)
        for n in cands:
            h[n.comp - 1] += 1
            rec(entries + (n,), h)
            h[n.comp - 1] -= 1

    rec((), [0] * ctx.l)
    memo[seq] = out
    return out


def reachable_shapes(seq: Sequence[int], ctx: MulticargeCtx) -> frozenset[Heights]:
    """Shapes of all standard tableaux with residue sequence `seq`."""
    seq = tuple(seq)
    memo = ctx._memo.setdefault("shapes", {})
    if seq in memo:
        return memo[seq]
    if not seq:
        res = frozenset({(0,) * ctx.l})
    else:
        res = frozenset(
            tuple(a + (h == c) for c, a in enumerate(shape))
            for shape in reachable_shapes(seq[:-1], ctx)
            for h in range(ctx.l)
            if ctx.res(ctx.kappa[h] - shape[h]) == seq[-1])
    memo[seq] = res
    return res


def is_blob_possible(seq: Sequence[int], ctx: MulticargeCtx) -> bool:
    return bool(reachable_shapes(seq, ctx))


def blob_addable_residues(t: Tableau, ctx: MulticargeCtx) -> tuple[int, ...]:
    """Residues (as a sorted multiset) of the l blob-addable nodes of shape(t)."""
    return tuple(sorted(node_residue(n, ctx) for n in addable_nodes(t.shape)))


def sim_step(seq: Sequence[int], k: int, ctx: MulticargeCtx) -> Residues | None:
    a, b = seq[k - 1], seq[k]
    if ctx.related(a, b):
        return None
    out = list(seq)
    out[k - 1], out[k] = b, a
    return tuple(out)


def sim_class(seq: Sequence[int], ctx: MulticargeCtx, cap: int = 20000) -> frozenset[Residues]:
    start = tuple(seq)
    seen = {start}
    todo = deque([start])
    while todo:
        cur = todo.popleft()
        for k in range(1, len(cur)):
            nxt = sim_step(cur, k, ctx)
            if nxt is not None and nxt not in seen:
                seen.add(nxt)
                if len(seen) > cap:
                    raise ClassTooLarge(f"class of {start} exceeds {cap}")
                todo.append(nxt)
    return frozenset(seen)


def all_blob_possible(m: int, ctx: MulticargeCtx) -> list[Residues]:
    """Every blob-possible sequence of length m, in lexicographic order."""
    level = [()]
    for _ in range(m):
        nxt = []
        for s in level:
            for r in range(ctx.e):
                if is_blob_possible(s + (r,), ctx):
                    nxt.append(s + (r,))
        level = nxt
    return sorted(level)
