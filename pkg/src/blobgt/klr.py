"""Exact arithmetic in the generalized blob algebra over F_p.

An element is a sum of normal terms psi_w y^b e(k): a permutation w written with
its canonical reduced word (smallest left descent first, read top to bottom), a
dot exponent vector b sitting just above the bottom idempotent, and the bottom
residue sequence k.  Products are built one generator at a time from the left.
The local relations give a unique normal form in the non-cyclotomic algebra; on
top of that the quotient is handled by discarding terms that are provably zero:

* a through-idempotent is blob-impossible, or the first strand carries a dot;
* the degree is not the degree of any cellular basis element with the same top
  and bottom sequences (the graded cellular basis is taken on trust);
* the bottom dot monomial is shown to vanish by a bounded search.

Every step is an identity of the algebra, so a zero result is a proof.  The
converse does not hold in general, which is why `equal` is three-valued.
"""
from __future__ import annotations

import os
import sys
import threading
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

from .errors import InternalInconsistency, NonTermination, ShapeMismatch
from .residues import (MulticargeCtx, Residues, Tableau, enumerate_std, is_blob_possible,
                       max_tableau, official_word, residue_sequence)

Perm = tuple[int, ...]
Dots = tuple[int, ...]
Token = tuple[str, int]

DEFAULT_BUDGET = 2_000_000
SEARCH_BUDGET = 100_000


def env_budget(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("BLOBGT_BUDGET")
    return int(raw) if raw else default


def run_deep(fn: Callable, *args, **kwargs):
    """Run fn in a thread with a large stack; the rewriting recursion is deep."""
    box: dict = {}

    def target():
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as exc:  # re-raised in the caller
            box["error"] = exc

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 200_000))
    old_size = threading.stack_size()
    threading.stack_size(512 * 1024 * 1024)
    try:
        th = threading.Thread(target=target)
        th.start()
        th.join()
    finally:
        threading.stack_size(old_size)
    if "error" in box:
        raise box["error"]
    return box["value"]


class Verdict(Enum):
    VERIFIED = "Verified"
    REFUTED_BY_GRADING = "RefutedByGrading"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class CheckVerdict:
    verdict: Verdict
    trace: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.verdict is Verdict.VERIFIED


# ---------------------------------------------------------------- permutations

def identity(m: int) -> Perm:
    return tuple(range(m))


def swap(t: tuple, a: int) -> tuple:
    """Exchange 1-based positions a and a+1."""
    x = list(t)
    x[a - 1], x[a] = x[a], x[a - 1]
    return tuple(x)


def min_left_descent(u: Perm) -> int | None:
    for a in range(1, len(u)):
        if u[a - 1] > u[a]:
            return a
    return None


def perm_of_word(word: Sequence[int], m: int) -> Perm:
    """Top position j of psi_word carries the strand starting at bottom position u[j]."""
    u = identity(m)
    for a in reversed(word):
        u = swap(u, a)
    return u


def length(u: Perm) -> int:
    return sum(1 for i in range(len(u)) for j in range(i + 1, len(u)) if u[i] > u[j])


def top_sequence(u: Perm, k: Residues) -> Residues:
    return tuple(k[x] for x in u)


# ---------------------------------------------------------------- elements

class Element:
    """F_p-linear combination of normal terms; immutable by convention."""

    __slots__ = ("eng", "terms")

    def __init__(self, eng: "Engine", terms: dict | None = None):
        self.eng = eng
        self.terms = {t: c % eng.p for t, c in (terms or {}).items() if c % eng.p}

    def __add__(self, other: "Element") -> "Element":
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = (out.get(t, 0) + c) % self.eng.p
        return Element(self.eng, out)

    def __neg__(self) -> "Element":
        return Element(self.eng, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __rmul__(self, scalar: int) -> "Element":
        return Element(self.eng, {t: scalar * c for t, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.eng.product(self, other)
        return other * self

    def __eq__(self, other) -> bool:
        return isinstance(other, Element) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {self.eng.term_degree(t) for t in self.terms}

    def homogeneous_parts(self) -> dict[int, "Element"]:
        parts: dict[int, dict] = defaultdict(dict)
        for t, c in self.terms.items():
            parts[self.eng.term_degree(t)][t] = c
        return {d: Element(self.eng, ts) for d, ts in sorted(parts.items())}

    def is_pure_dot(self) -> bool:
        return all(t[0] == identity(self.eng.m) for t in self.terms)

    def dump(self) -> str:
        return self.eng.dump(self)

    def __repr__(self) -> str:
        return self.dump() or "0"


# ---------------------------------------------------------------- engine

class Engine:
    """Rewriting engine for B_m with fixed context and number of strands."""

    def __init__(self, ctx: MulticargeCtx, m: int, cap: int | None = None,
                 budget: int | None = None, search_budget: int | None = None, search_depth: int = 12,
                 use_search: bool = True, quotient: bool = True):
        self.ctx = ctx
        self.quotient = quotient
        self.m = m
        self.p = ctx.p
        self.e = ctx.e
        self.cap = cap
        self.budget = budget if budget is not None else env_budget()
        self.search_budget = search_budget if search_budget is not None else SEARCH_BUDGET
        self.search_depth = search_depth
        self.use_search = use_search
        self.steps = 0
        self.search_steps = 0
        self.search_exhausted = False
        self._id = identity(m)
        self._zero = (0,) * m
        self._canon: dict = {}
        self._wdeg: dict = {}
        self._alive: dict = {}
        self._ly: dict = {}
        self._lp: dict = {}
        self._rw: dict = {}
        self._bf: dict = {}
        self._tdeg: dict = {}
        self._ach: dict = {}
        self._vanish: dict = {}
        self._vfail: dict = {}
        self._canon_dots: dict = {}

    # ------------------------------------------------------------ residue helpers

    def relation(self, a: int, b: int) -> int:
        """0 sisters, 1 cousins, 2 not relatives."""
        if a == b:
            return 0
        return 1 if self.ctx.is_cousin(a, b) else 2

    def cross_degree(self, a: int, b: int) -> int:
        return (-2, 1, 0)[self.relation(a, b)]

    def gamma(self, a: int, b: int) -> int:
        if (b - a) % self.e == 1:
            return 1
        if (a - b) % self.e == 1:
            return -1
        return 0

    def alpha(self, i: int, j: int, k: int) -> int:
        if i != k:
            return 0
        if (j - i) % self.e == 1:
            return -1
        if (i - j) % self.e == 1:
            return 1
        return 0

    # ------------------------------------------------------------ words

    def canon(self, u: Perm) -> tuple[int, ...]:
        w = self._canon.get(u)
        if w is None:
            out = []
            v = u
            while True:
                a = min_left_descent(v)
                if a is None:
                    break
                out.append(a)
                v = swap(v, a)
            w = tuple(out)
            self._canon[u] = w
        return w

    def through(self, word: Sequence[int], k: Residues) -> list[Residues]:
        """Residue sequences met by psi_word e(k), bottom first."""
        seqs = [tuple(k)]
        cur = tuple(k)
        for a in reversed(word):
            cur = swap(cur, a)
            seqs.append(cur)
        return seqs

    def word_degree(self, word: Sequence[int], k: Residues) -> int:
        d = 0
        cur = tuple(k)
        for a in reversed(word):
            d += self.cross_degree(cur[a - 1], cur[a])
            cur = swap(cur, a)
        return d

    def perm_degree(self, u: Perm, k: Residues) -> int:
        key = (u, k)
        d = self._wdeg.get(key)
        if d is None:
            d = self.word_degree(self.canon(u), k)
            self._wdeg[key] = d
        return d

    def term_degree(self, term) -> int:
        u, b, k = term
        return self.perm_degree(u, k) + 2 * sum(b)

    # ------------------------------------------------------------ cellular data

    def tableau_degree(self, t: Tableau) -> int:
        key = t.entries
        d = self._tdeg.get(key)
        if d is None:
            d = self.word_degree(official_word(t), residue_sequence(t, self.ctx))
            self._tdeg[key] = d
        return d

    def degree_table(self, k: Residues) -> dict:
        """shape -> set of tableau degrees, over Std(k)."""
        key = ("table", k)
        tab = self._ach.get(key)
        if tab is None:
            tab = defaultdict(set)
            for t in enumerate_std(k, self.ctx):
                tab[t.shape].add(self.tableau_degree(t))
            tab = dict(tab)
            self._ach[key] = tab
        return tab

    def achievable(self, top: Residues, bottom: Residues) -> frozenset[int]:
        key = (top, bottom)
        out = self._ach.get(key)
        if out is None:
            a, b = self.degree_table(top), self.degree_table(bottom)
            out = frozenset(x + y for lam in a.keys() & b.keys() for x in a[lam] for y in b[lam])
            self._ach[key] = out
        return out

    def max_grade(self, k: Residues) -> int:
        ach = self.achievable(tuple(k), tuple(k))
        return max(ach) if ach else 0

    # ------------------------------------------------------------ pruning

    def alive_path(self, u: Perm, k: Residues) -> bool:
        key = (u, k)
        ok = self._alive.get(key)
        if ok is None:
            ok = all(is_blob_possible(s, self.ctx) for s in self.through(self.canon(u), k))
            self._alive[key] = ok
        return ok

    def keep(self, u: Perm, b: Dots, k: Residues) -> bool:
        if not self.quotient:
            return True
        if b[0] > 0:
            return False
        if not self.alive_path(u, k):
            return False
        deg = self.perm_degree(u, k) + 2 * sum(b)
        if self.cap is not None and deg > self.cap:
            return False
        return deg in self.achievable(top_sequence(u, k), k)

    def _prune(self, d: dict, k: Residues) -> dict:
        p = self.p
        return {t: c % p for t, c in d.items() if c % p and self.keep(t[0], t[1], k)}

    def _tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise NonTermination(f"rewriting budget of {self.budget} steps exhausted")

    # ------------------------------------------------------------ local dictionaries
    # These work on a fixed bottom sequence k with dict keys (perm, dots).

    @staticmethod
    def _acc(out: dict, key, c: int):
        out[key] = out.get(key, 0) + c

    def _shift(self, d: dict, b: Dots) -> dict:
        if not any(b):
            return d
        return {(v, tuple(x + y for x, y in zip(c, b))): coef for (v, c), coef in d.items()}

    def _unit(self, a: int) -> Dots:
        b = [0] * self.m
        b[a - 1] = 1
        return tuple(b)

    def lmul_y_dict(self, a: int, d: dict, k: Residues) -> dict:
        out: dict = {}
        for (v, b), c in d.items():
            for (w, b2), c2 in self._shift(self.lmul_y(a, v, k), b).items():
                self._acc(out, (w, b2), c * c2)
        return self._prune(out, k)

    def lmul_psi_dict(self, a: int, d: dict, k: Residues) -> dict:
        out: dict = {}
        for (v, b), c in d.items():
            for (w, b2), c2 in self._shift(self.lmul_psi(a, v, k), b).items():
                self._acc(out, (w, b2), c * c2)
        return self._prune(out, k)

    def _prepend(self, c: int, u: Perm, base: Perm, d: dict, k: Residues) -> dict:
        """psi_c * d where canon(u) = (c,) + canon(base)."""
        out: dict = {}
        for (v, b), coef in d.items():
            if v == base:
                self._acc(out, (u, b), coef)
            else:
                for key, c2 in self._shift(self.lmul_psi(c, v, k), b).items():
                    self._acc(out, key, coef * c2)
        return out

    def lmul_y(self, a: int, u: Perm, k: Residues) -> dict:
        """Normal form of y_a psi_u e(k)."""
        key = (a, u, k)
        hit = self._ly.get(key)
        if hit is not None:
            return hit
        self._tick()
        if u == self._id:
            out = {(u, self._unit(a)): 1}
        else:
            c = self.canon(u)[0]
            u1 = swap(u, c)
            seq = top_sequence(u1, k)
            sister = seq[c - 1] == seq[c]
            if a == c + 1:
                inner, corr = self.lmul_y(c, u1, k), -1
            elif a == c:
                inner, corr = self.lmul_y(c + 1, u1, k), 1
            else:
                inner, corr = self.lmul_y(a, u1, k), 0
            out = self._prepend(c, u, u1, inner, k)
            if sister and corr:
                self._acc(out, (u1, self._zero), corr)
        out = self._prune(out, k)
        self._ly[key] = out
        return out

    def lmul_psi(self, a: int, u: Perm, k: Residues) -> dict:
        """Normal form of psi_a psi_u e(k)."""
        key = (a, u, k)
        hit = self._lp.get(key)
        if hit is not None:
            return hit
        self._tick()
        u2 = swap(u, a)
        if u[a - 1] < u[a]:
            if min_left_descent(u2) == a:
                out = {(u2, self._zero): 1}
            else:
                out = dict(self.reword((a,) + self.canon(u), k))
        else:
            w = self.canon(u)
            if w[0] == a:
                w1, corr = w[1:], {}
            else:
                w1, corr = self.bring_front(w, a, k)
            x = self.reword(w1, k)
            t = top_sequence(u2, k)
            rel = self.relation(t[a - 1], t[a])
            out = {}
            if rel == 2:
                out = dict(x)
            elif rel == 1:
                g = self.gamma(t[a - 1], t[a])
                for key2, c2 in self.lmul_y_dict(a + 1, x, k).items():
                    self._acc(out, key2, g * c2)
                for key2, c2 in self.lmul_y_dict(a, x, k).items():
                    self._acc(out, key2, -g * c2)
            for key2, c2 in self.lmul_psi_dict(a, corr, k).items():
                self._acc(out, key2, c2)
        out = self._prune(out, k)
        self._lp[key] = out
        return out

    def reword(self, word: tuple[int, ...], k: Residues) -> dict:
        """Normal form of psi_word e(k) for a reduced word."""
        key = (word, k)
        hit = self._rw.get(key)
        if hit is not None:
            return hit
        self._tick()
        if not word:
            out = {(self._id, self._zero): 1}
        else:
            u = perm_of_word(word, self.m)
            c = min_left_descent(u)
            if word[0] == c:
                rest, corr = word[1:], {}
            else:
                rest, corr = self.bring_front(word, c, k)
            out = self._prepend(c, u, swap(u, c), self.reword(rest, k), k)
            for key2, c2 in corr.items():
                self._acc(out, key2, c2)
        out = self._prune(out, k)
        self._rw[key] = out
        return out

    def bring_front(self, word: tuple[int, ...], c: int, k: Residues) -> tuple[tuple[int, ...], dict]:
        """psi_word e(k) = psi_c psi_word' e(k) + corr, for c a left descent."""
        key = (word, c, k)
        hit = self._bf.get(key)
        if hit is not None:
            return hit
        self._tick()
        a = word[0]
        if a == c:
            res = (word[1:], {})
        elif abs(a - c) > 1:
            w1, corr1 = self.bring_front(word[1:], c, k)
            res = ((a,) + w1, self.lmul_psi_dict(a, corr1, k))
        else:
            w1, corr1 = self.bring_front(word[1:], c, k)
            w2, corr2 = self.bring_front(w1, a, k)
            t = top_sequence(perm_of_word(w2, self.m), k)
            r = min(a, c)
            al = self.alpha(t[r - 1], t[r], t[r + 1])
            sign = al if a == r else -al
            corr: dict = {}
            if sign:
                for key2, c2 in self.reword(w2, k).items():
                    self._acc(corr, key2, sign * c2)
            for key2, c2 in self.lmul_psi_dict(a, self.lmul_psi_dict(c, corr2, k), k).items():
                self._acc(corr, key2, c2)
            for key2, c2 in self.lmul_psi_dict(a, corr1, k).items():
                self._acc(corr, key2, c2)
            res = ((a, c) + w2, self._prune(corr, k))
        self._bf[key] = res
        return res

    # ------------------------------------------------------------ element API

    def element(self, terms: dict) -> Element:
        return Element(self, terms)

    def zero(self) -> Element:
        return Element(self, {})

    def idem(self, k: Sequence[int]) -> Element:
        k = tuple(k)
        if len(k) != self.m:
            raise ValueError(f"idempotent of length {len(k)} on {self.m} strands")
        if not self.keep(self._id, self._zero, k):
            return self.zero()
        return Element(self, {(self._id, self._zero, k): 1})

    def apply(self, tokens: Sequence[Token], x: Element) -> Element:
        """Left-multiply x by the word `tokens` (listed top to bottom)."""
        by_k: dict = defaultdict(dict)
        for (u, b, k), c in x.terms.items():
            by_k[k][(u, b)] = c
        out: dict = {}
        for k, d in by_k.items():
            for kind, r in reversed(list(tokens)):
                if not 1 <= r <= self.m - (kind == "s"):
                    raise ValueError(f"token {kind}{r} out of range")
                d = self.lmul_y_dict(r, d, k) if kind == "y" else self.lmul_psi_dict(r, d, k)
                if not d:
                    break
            for (u, b), c in d.items():
                out[(u, b, k)] = (out.get((u, b, k), 0) + c) % self.p
        return Element(self, out)

    def word(self, tokens: Sequence[Token], k: Sequence[int]) -> Element:
        return run_deep(self.apply, list(tokens), self.idem(k))

    def y(self, r: int, k: Sequence[int]) -> Element:
        return self.word([("y", r)], k)

    def psi(self, r: int, k: Sequence[int]) -> Element:
        return self.word([("s", r)], k)

    def dots(self, b: Sequence[int], k: Sequence[int]) -> Element:
        toks = [("y", r + 1) for r, x in enumerate(b) for _ in range(x)]
        return self.word(toks, k)

    def term_tokens(self, term) -> list[Token]:
        u, b, _ = term
        toks = [("s", a) for a in self.canon(u)]
        toks += [("y", r + 1) for r, x in enumerate(b) for _ in range(x)]
        return toks

    def product(self, x: Element, y: Element) -> Element:
        def go():
            out = self.zero()
            tops: dict = defaultdict(dict)
            for t, c in y.terms.items():
                tops[top_sequence(t[0], t[2])][t] = c
            for t, c in x.terms.items():
                right = tops.get(t[2])
                if right:
                    out = out + c * self.apply(self.term_tokens(t), Element(self, right))
            return out
        return run_deep(go)

    def star(self, x: Element) -> Element:
        def go():
            out = self.zero()
            for t, c in x.terms.items():
                u, b, k = t
                toks = [("y", r + 1) for r, v in enumerate(b) for _ in range(v)]
                toks += [("s", a) for a in reversed(self.canon(u))]
                out = out + c * self.apply(toks, self.idem(top_sequence(u, k)))
            return out
        return run_deep(go)

    def L(self, r: int, k: Sequence[int]) -> Element:
        """L_r e(k)."""
        if r == 1:
            return -self.y(1, k)
        return self.y(r - 1, k) - self.y(r, k)

    def jm(self, j: int, k: Sequence[int], c: int) -> Element:
        """(c - y_j) e(k); the scalar c is left to the caller."""
        return c * self.idem(k) - self.y(j, k)

    def truncate(self, x: Element, k: Sequence[int]) -> Element:
        k = tuple(k)
        return self.normalize(self.product(self.product(self.idem(k), x), self.idem(k)))

    # ------------------------------------------------------------ dot monomials

    def vanish(self, b: Dots, k: Residues) -> bool:
        """Sound (incomplete) test for y^b e(k) = 0."""
        return run_deep(self._vanish_rec, tuple(b), tuple(k))

    def _basic_zero(self, b: Dots, k: Residues) -> bool | None:
        if not is_blob_possible(k, self.ctx):
            return True
        if b[0] > 0:
            return True
        if 2 * sum(b) not in self.achievable(k, k):
            return True
        if not any(b):
            return False
        return None

    def _vanish_rec(self, b: Dots, k: Residues) -> bool:
        """Iterative deepening over single rewriting moves."""
        state = (b, k)
        if self._vanish.get(state):
            return True
        basic = self._basic_zero(b, k)
        if basic is not None:
            self._vanish[state] = basic
            return basic
        if not self.use_search:
            return False
        self.search_steps = 0
        for depth in range(1, self.search_depth + 1):
            if self._vanish_d(b, k, depth):
                return True
            if self.search_steps > self.search_budget:
                break
        return False

    def _vanish_d(self, b: Dots, k: Residues, depth: int) -> bool:
        state = (b, k)
        if self._vanish.get(state):
            return True
        basic = self._basic_zero(b, k)
        if basic is not None:
            self._vanish[state] = basic
            return basic
        if depth <= 0 or self._vfail.get(state, -1) >= depth:
            return False
        self.search_steps += 1
        if self.search_steps > self.search_budget:
            self.search_exhausted = True
            return False
        if self._moves(b, k, depth - 1):
            self._vanish[state] = True
            return True
        self._vfail[state] = depth
        return False

    def _moves(self, b: Dots, k: Residues, d: int) -> bool:
        m = self.m
        go = self._vanish_d
        for z in range(2, m + 1):
            rel = self.relation(k[z - 2], k[z - 1])
            if rel == 1:
                # y_z e = y_{z-1} e +- psi e(s k) psi, and the mirror image
                for src, dst in ((z - 1, z - 2), (z - 2, z - 1)):
                    if b[src] > 0:
                        rest = list(b)
                        rest[src] -= 1
                        moved = list(rest)
                        moved[dst] += 1
                        if go(swap(tuple(rest), z - 1), swap(k, z - 1), d) and go(tuple(moved), k, d):
                            return True
            elif rel == 0:
                if b[z - 2] != b[z - 1] and go(swap(b, z - 1), k, d):
                    return True
            elif go(swap(b, z - 1), swap(k, z - 1), d):
                return True
        for p in range(1, m - 1):
            if k[p - 1] == k[p + 1] and self.relation(k[p - 1], k[p]) == 1 \
                    and b[p - 1] == b[p] == b[p + 1]:
                if go(b, swap(k, p), d) and go(b, swap(k, p + 1), d):
                    return True
        return False

    def canon_dots(self, b: Dots, k: Residues) -> Dots | None:
        """Slide dots left while the correction term provably vanishes; None if zero."""
        key = (b, k)
        if key in self._canon_dots:
            return self._canon_dots[key]
        cur = b
        if self._vanish_rec(cur, k):
            self._canon_dots[key] = None
            return None
        moved = True
        while moved:
            moved = False
            for z in range(2, self.m + 1):
                if cur[z - 1] > 0 and self.relation(k[z - 2], k[z - 1]) == 1:
                    rest = list(cur)
                    rest[z - 1] -= 1
                    if self._vanish_rec(swap(tuple(rest), z - 1), swap(k, z - 1)):
                        rest[z - 2] += 1
                        cur = tuple(rest)
                        moved = True
                        break
            if moved and self._vanish_rec(cur, k):
                self._canon_dots[key] = None
                return None
        self._canon_dots[key] = cur
        return cur

    # ------------------------------------------------------------ normalization

    def normalize(self, x: Element) -> Element:
        """Prune, canonicalize bottom dot monomials, and re-prune."""
        def go():
            out: dict = {}
            for (u, b, k), c in x.terms.items():
                if not self.keep(u, b, k):
                    continue
                if self.use_search:
                    nb = self.canon_dots(b, k)
                    if nb is None:
                        continue
                    if nb != b:
                        # dots sit above e(k); rebuild psi_u y^nb e(k) in normal form
                        sub = self.apply([("s", a) for a in self.canon(u)], self.dots_raw(nb, k))
                        for t2, c2 in sub.terms.items():
                            nb2 = self.canon_dots(t2[1], k)
                            if nb2 is not None and self.keep(t2[0], nb2, k):
                                key = (t2[0], nb2, k)
                                out[key] = (out.get(key, 0) + c * c2) % self.p
                        continue
                key = (u, b, k)
                out[key] = (out.get(key, 0) + c) % self.p
            return Element(self, out)
        return run_deep(go)

    def dots_raw(self, b: Dots, k: Residues) -> Element:
        if not self.keep(self._id, b, k):
            return self.zero()
        return Element(self, {(self._id, tuple(b), tuple(k)): 1})

    def equal(self, a: Element, b: Element) -> CheckVerdict:
        self.search_exhausted = False
        try:
            diff = self.normalize(a - b)
        except NonTermination as exc:
            return CheckVerdict(Verdict.INCONCLUSIVE, {"reason": str(exc)})
        trace = {"steps": self.steps, "search_steps": self.search_steps,
                 "residual_terms": len(diff.terms)}
        if diff.is_zero():
            return CheckVerdict(Verdict.VERIFIED, trace)
        lhs = self.normalize(a).homogeneous_parts()
        rhs = self.normalize(b).homogeneous_parts()
        if lhs and rhs and len(lhs) == 1 and len(rhs) == 1 and set(lhs) != set(rhs):
            trace["degrees"] = [sorted(lhs), sorted(rhs)]
            return CheckVerdict(Verdict.REFUTED_BY_GRADING, trace)
        trace["residual"] = diff.dump()
        if self.search_exhausted:
            trace["reason"] = "search budget exhausted"
        return CheckVerdict(Verdict.INCONCLUSIVE, trace)

    # ------------------------------------------------------------ cellular words

    def cellular_psi(self, t: Tableau) -> Element:
        x = self.word([("s", a) for a in official_word(t)], residue_sequence(t, self.ctx))
        want = residue_sequence(max_tableau(t.shape, self.ctx), self.ctx)
        if any(top_sequence(u, k) != want for (u, _, k) in x.terms):
            raise InternalInconsistency("cellular word does not start at the maximal tableau")
        return x

    def cellular_basis_element(self, s: Tableau, t: Tableau) -> Element:
        if s.shape != t.shape:
            raise ShapeMismatch(f"{s.shape} != {t.shape}")
        ws = [("s", a) for a in reversed(official_word(s))]
        wt = [("s", a) for a in official_word(t)]
        return self.word(ws + wt, residue_sequence(t, self.ctx))

    # ------------------------------------------------------------ text form

    def dump(self, x: Element) -> str:
        lines = []
        for (u, b, k), c in x.terms.items():
            toks = [f"s{a}" for a in self.canon(u)]
            toks += [f"y{r + 1}" if v == 1 else f"y{r + 1}^{v}" for r, v in enumerate(b) if v]
            head = f"{c} * e({','.join(map(str, k))})"
            lines.append(" ".join([head] + toks))
        return "\n".join(sorted(lines))


def max_grade(k: Sequence[int], ctx: MulticargeCtx) -> int:
    return Engine(ctx, len(k)).max_grade(tuple(k))


def dim_truncation_formula(k: Sequence[int], ctx: MulticargeCtx) -> int:
    counts: dict = defaultdict(int)
    for t in enumerate_std(tuple(k), ctx):
        counts[t.shape] += 1
    return sum(c * c for c in counts.values())


def L_element(r: int, m: int) -> dict[int, int]:
    """L_r as a linear form {strand: coefficient} in the dots."""
    if not 1 <= r <= m:
        raise ValueError(f"r={r} outside 1..{m}")
    return {1: -1} if r == 1 else {r - 1: 1, r: -1}
