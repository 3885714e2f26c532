"""Independent oracles used by the test-suite.

None of these share code with the package beyond plain data: they re-derive
everything from first principles (brute force or a faithful representation).
"""
from __future__ import annotations

from collections import deque

import sympy as sp


# ---------------------------------------------------------------- permutations

def bfs_lengths(m: int) -> dict[tuple[int, ...], int]:
    """Coxeter length of every permutation of 1..m by breadth-first search."""
    start = tuple(range(1, m + 1))
    dist = {start: 0}
    todo = deque([start])
    while todo:
        w = todo.popleft()
        for a in range(m - 1):
            v = list(w)
            v[a], v[a + 1] = v[a + 1], v[a]
            v = tuple(v)
            if v not in dist:
                dist[v] = dist[w] + 1
                todo.append(v)
    return dist


# ---------------------------------------------------------------- tableaux

def brute_std(seq, kappa, e):
    """Standard one-column tableaux with residue sequence seq, by exhaustion.

    A tableau is encoded as the tuple of components of 1..m; rows are implied.
    Every component is tried at every step and dead prefixes are cut early.
    """
    l = len(kappa)
    out = []

    def grow(comps, rows):
        k = len(comps)
        if k == len(seq):
            out.append(tuple(comps))
            return
        for c in range(l):
            if (kappa[c] - rows[c]) % e == seq[k]:
                rows[c] += 1
                grow(comps + [c], rows)
                rows[c] -= 1

    grow([], [0] * l)
    return out


def shape_counts(comps, l, k):
    h = [0] * l
    for c in comps[:k]:
        h[c] += 1
    return h


# ---------------------------------------------------------------- KLR polynomial representation

class PolyRep:
    """The faithful polynomial representation of the (non-cyclotomic) KLR algebra.

    Vectors are dicts {residue sequence: sympy expression}.  Words are lists of
    ('y', r) / ('s', r) read top to bottom, so they act right-to-left.
    """

    def __init__(self, e: int, m: int):
        self.e = e
        self.m = m
        self.y = sp.symbols(f"y1:{m + 1}")

    def _swap(self, f, r):
        a, b = self.y[r - 1], self.y[r]
        return f.subs({a: b, b: a}, simultaneous=True)

    def act_letter(self, tok, vec):
        kind, r = tok
        out = {}
        for seq, f in vec.items():
            if kind == "y":
                g, s2 = self.y[r - 1] * f, seq
            elif seq[r - 1] == seq[r]:
                g = sp.cancel((f - self._swap(f, r)) / (self.y[r - 1] - self.y[r]))
                s2 = seq
            else:
                p = self.y[r - 1] - self.y[r] if (seq[r] - seq[r - 1]) % self.e == 1 else 1
                g = p * self._swap(f, r)
                s2 = list(seq)
                s2[r - 1], s2[r] = s2[r], s2[r - 1]
                s2 = tuple(s2)
            out[s2] = sp.expand(out.get(s2, 0) + g)
        return {k: v for k, v in out.items() if v != 0}

    def act(self, word, seq, f=1):
        vec = {tuple(seq): sp.sympify(f)}
        for tok in reversed(word):
            vec = self.act_letter(tok, vec)
        return vec

    def element_action(self, terms, f):
        """Act by sum c * word e(idem) on f placed in every idem component."""
        total: dict = {}
        for (word, idem), c in terms.items():
            for seq, g in self.act(word, idem, f).items():
                total[seq] = sp.expand(total.get(seq, 0) + c * g)
        return {k: v for k, v in total.items() if v != 0}
