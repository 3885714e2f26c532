"""Gelfand-Tsetlin subalgebras: abstract presentations and concrete closures.

Abstract side: generators x_0..x_{n-1} indexed by grid points in ascending
m_(r,j), squarefree monomials stored as bitmasks, and one square relation per
generator.  Concrete side: the subalgebra of e(i) B_m e(i) generated by the dots,
spanned by engine normal forms.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .blocks import BlockData, detect_quasi_vertical, enclosing_block_data
from .errors import AssociativityFailure, BudgetExhausted, NonTermination
from .klr import Element, Engine
from .residues import (MulticargeCtx, enumerate_std, all_blob_possible, sim_class,
                       validate_multicharge)

GridIndex = tuple[int, int]
Poly = dict  # bitmask -> coefficient mod p


# ---------------------------------------------------------------- small polynomial helpers

def _add(a: Poly, b: Poly, p: int, c: int = 1) -> Poly:
    out = dict(a)
    for k, v in b.items():
        out[k] = (out.get(k, 0) + c * v) % p
    return {k: v for k, v in out.items() if v}


def _scale(a: Poly, c: int, p: int) -> Poly:
    return {k: v * c % p for k, v in a.items() if v * c % p}


def grid_order(k: int, l: int, e: int = 0, bd: BlockData | None = None) -> list[GridIndex]:
    """Grid points in ascending m_(r,j); for k rows this is row-major order."""
    if bd is not None:
        return bd.order
    return [(r, j) for r in range(1, k + 1) for j in range(l - 1)]


def grid_prev(g: GridIndex, l: int) -> GridIndex | None:
    r, j = g
    if j:
        return (r, j - 1)
    return (r - 1, l - 2) if r > 1 else None


@dataclass
class Presentation:
    """Commutative algebra on n generators with x_i^2 given by `squares[i]`."""

    variant: str
    k: int
    l: int
    p: int
    order: list[GridIndex]
    squares: list[Poly] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.order)

    def index(self, g: GridIndex) -> int:
        return self.order.index(g)

    def gen(self, g: GridIndex) -> Poly:
        return {1 << self.index(g): 1}

    def one(self) -> Poly:
        return {0: 1}

    # reduction ---------------------------------------------------------

    def reduce_exponents(self, exps: Sequence[int]) -> Poly:
        """Squarefree normal form of the monomial prod x_i^exps[i]."""
        return self._reduce(tuple(exps))

    def _reduce(self, exps: tuple[int, ...]) -> Poly:
        memo = self.__dict__.setdefault("_memo", {})
        hit = memo.get(exps)
        if hit is not None:
            return hit
        i = next((a for a, x in enumerate(exps) if x >= 2), None)
        if i is None:
            out = {sum(1 << a for a, x in enumerate(exps) if x): 1}
        else:
            active = self.__dict__.setdefault("_active", set())
            if exps in active:
                active.clear()
                raise NonTermination(f"reducing exponents {exps} loops back to itself")
            active.add(exps)
            rest = list(exps)
            rest[i] -= 2
            out = {}
            for mono, c in self.squares[i].items():
                e2 = [x + ((mono >> a) & 1) for a, x in enumerate(rest)]
                out = _add(out, self._reduce(tuple(e2)), self.p, c)
            active.discard(exps)
        memo[exps] = out
        return out

    def reduce(self, element: dict) -> Poly:
        """Reduce {exponent tuple: coefficient} to squarefree form."""
        out: Poly = {}
        for exps, c in element.items():
            out = _add(out, self._reduce(tuple(exps)), self.p, c)
        return out

    def mul_mono(self, a: int, b: int) -> Poly:
        exps = tuple(((a >> i) & 1) + ((b >> i) & 1) for i in range(self.n))
        return self._reduce(exps)

    def mul(self, x: Poly, y: Poly) -> Poly:
        out: Poly = {}
        for a, c in x.items():
            for b, d in y.items():
                out = _add(out, self.mul_mono(a, b), self.p, c * d)
        return out

    def evaluate(self, poly: Poly, images: list[Poly], target: "Presentation") -> Poly:
        """Substitute x_i -> images[i] (elements of `target`) into a squarefree poly."""
        out: Poly = {}
        for mono, c in poly.items():
            val = target.one()
            for i in range(self.n):
                if (mono >> i) & 1:
                    val = target.mul(val, images[i])
            out = _add(out, val, target.p, c)
        return out


def _lin_Y(pres: Presentation, g: GridIndex) -> Poly:
    """Barred calL_(r,j) as a linear form in the Y generators."""
    q = grid_prev(g, pres.l)
    if q is None:
        return _scale(pres.gen(g), -1, pres.p)
    return _add(pres.gen(q), pres.gen(g), pres.p, -1)


def build_Y_presentation(bd_or_k, l: int | None = None, p: int = 5) -> Presentation:
    """Square relations in the Y generators, expanded into squarefree form."""
    k, l = (bd_or_k.k, bd_or_k.l) if isinstance(bd_or_k, BlockData) else (bd_or_k, l)
    pres = Presentation("Y", k, l, p, grid_order(k, l))
    for g in pres.order:
        r, j = g
        if g == (1, 0):
            sq: Poly = {}
        elif r == 1:
            sq = {pres.gen((1, j - 1)).popitem()[0] | pres.gen(g).popitem()[0]: 1}
        else:
            sq = pres.mul(pres.gen(grid_prev(g, l)), pres.gen(g))
            for s in range(1, r):
                sq = _add(sq, pres.mul(_lin_Y(pres, (s, j)), _lin_Y(pres, g)), p, -1)
        pres.squares.append(sq)
    return pres


def c_coefficient(s_t: GridIndex, r_j: GridIndex) -> int:
    return -2 if s_t[1] == r_j[1] else -1


def build_L_presentation(bd_or_k, l: int | None = None, p: int = 5,
                         coeff=c_coefficient) -> Presentation:
    """Square relations in the L generators: sum of C_(s,t) L_(s,t) L_(r,j) over m_(s,t) < m_(r,j)."""
    k, l = (bd_or_k.k, bd_or_k.l) if isinstance(bd_or_k, BlockData) else (bd_or_k, l)
    pres = Presentation("L", k, l, p, grid_order(k, l))
    for i, g in enumerate(pres.order):
        sq: Poly = {}
        for h in pres.order[:i]:
            sq = _add(sq, {(1 << pres.index(h)) | (1 << i): 1}, p, coeff(h, g))
        pres.squares.append(sq)
    return pres


# ---------------------------------------------------------------- certification

def multiplication_operators(pres: Presentation) -> list[list[Poly]]:
    """ops[i][S] = x_i * x_S in squarefree form."""
    return [[pres.mul_mono(1 << i, S) for S in range(1 << pres.n)] for i in range(pres.n)]


def _apply(op: list[Poly], v: Poly, p: int) -> Poly:
    out: Poly = {}
    for S, c in v.items():
        out = _add(out, op[S], p, c)
    return out


def certify(pres: Presentation) -> dict:
    """Check that the squarefree monomials carry a commutative associative product.

    With M_i the operator of multiplication by x_i, it suffices that the M_i
    commute, that M_i^2 equals the square relation evaluated at the M's, and that
    the reduced product of any two basis monomials equals M_a applied to b.  Then
    the product is transported from the commutative matrix algebra F[M].
    """
    n, p = pres.n, pres.p
    ops = multiplication_operators(pres)
    basis = range(1 << n)
    for i in range(n):
        for j in range(i + 1, n):
            for S in basis:
                if _apply(ops[i], ops[j][S], p) != _apply(ops[j], ops[i][S], p):
                    raise AssociativityFailure(f"x{i} and x{j} do not commute on basis {S:b}")
    for i in range(n):
        for S in basis:
            lhs = _apply(ops[i], ops[i][S], p)
            rhs: Poly = {}
            for mono, c in pres.squares[i].items():
                v = {S: 1}
                for a in range(n):
                    if (mono >> a) & 1:
                        v = _apply(ops[a], v, p)
                rhs = _add(rhs, v, p, c)
            if lhs != rhs:
                raise AssociativityFailure(f"x{i}^2 relation fails on basis {S:b}")
    for a in basis:
        for b in basis:
            v = {b: 1}
            for i in range(n):
                if (a >> i) & 1:
                    v = _apply(ops[i], v, p)
            if v != pres.mul_mono(a, b):
                raise AssociativityFailure(f"reduced product of {a:b} and {b:b} disagrees")
    return {"n": n, "basis": 1 << n, "operators_commute": True}


def random_associativity(pres: Presentation, trials: int, seed: int = 0) -> bool:
    rnd = random.Random(seed)
    N = 1 << pres.n
    for _ in range(trials):
        a, b, c = ({rnd.randrange(N): 1} for _ in range(3))
        if pres.mul(pres.mul(a, b), c) != pres.mul(a, pres.mul(b, c)):
            return False
    return True


def dim_abstract(pres: Presentation) -> int:
    certify(pres)
    return 1 << pres.n


def presentations_isomorphic(y_pres: Presentation, l_pres: Presentation) -> bool:
    """L -> barred calL in the Y algebra and Y -> -(sum of L up to the point) back."""
    if y_pres.order != l_pres.order:
        return False
    p = y_pres.p
    to_y = [_lin_Y(y_pres, g) for g in y_pres.order]
    to_l = []
    for i in range(l_pres.n):
        acc: Poly = {}
        for a in range(i + 1):
            acc = _add(acc, {1 << a: 1}, p, -1)
        to_l.append(acc)
    for i in range(l_pres.n):
        lhs = y_pres.mul(to_y[i], to_y[i])
        if _add(lhs, l_pres.evaluate(l_pres.squares[i], to_y, y_pres), p, -1):
            return False
    for i in range(y_pres.n):
        lhs = l_pres.mul(to_l[i], to_l[i])
        if _add(lhs, y_pres.evaluate(y_pres.squares[i], to_l, l_pres), p, -1):
            return False
    return True


def top_monomial_pairing(pres: Presentation) -> bool:
    """P * F(P) = full product for every squarefree P, F the complement."""
    full = (1 << pres.n) - 1
    for P in range(1 << pres.n):
        if pres.mul_mono(P, full ^ P) != {full: 1}:
            return False
    return True


# ---------------------------------------------------------------- concrete side

def concrete_generator(g: GridIndex, bd: BlockData, eng: Engine, seq) -> tuple[Element, Element]:
    """(Y_(r,j), calL_(r,j)) as elements of e(seq) B_m e(seq)."""
    y = eng.y(bd.m_grid[g], seq)
    q = grid_prev(g, bd.l)
    calL = -y if q is None else eng.y(bd.m_grid[q], seq) - y
    return y, calL


class _RowSpace:
    """Incremental row echelon form over F_p keyed by term."""

    def __init__(self, p: int):
        self.p = p
        self.rows: dict = {}    # pivot -> row (dict), pivot coefficient 1

    def reduce(self, v: dict) -> dict:
        # rows are fully reduced, so one pass over the pivots suffices
        v = dict(v)
        for piv in [t for t in v if t in self.rows]:
            c = v.get(piv)
            if not c:
                continue
            for t, x in self.rows[piv].items():
                v[t] = (v.get(t, 0) - c * x) % self.p
                if not v[t]:
                    del v[t]
        return v

    def add(self, v: dict) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        piv = min(v, key=repr)
        inv = pow(v[piv], -1, self.p)
        v = {t: x * inv % self.p for t, x in v.items()}
        for q, row in self.rows.items():
            c = row.get(piv)
            if c:
                for t, x in v.items():
                    row[t] = (row.get(t, 0) - c * x) % self.p
                    if not row[t]:
                        del row[t]
        self.rows[piv] = v
        return True

    def __len__(self) -> int:
        return len(self.rows)


@dataclass
class ConcreteDim:
    dim: int
    exact: bool
    lower: int
    upper: int
    by_degree: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"dim": self.dim, "exact": self.exact, "lower": self.lower, "upper": self.upper}


def _shift_dots(x: Element, z: int) -> Element:
    out = {}
    for (u, b, k), c in x.terms.items():
        b2 = list(b)
        b2[z - 1] += 1
        key = (u, tuple(b2), k)
        out[key] = (out.get(key, 0) + c) % x.eng.p
    return Element(x.eng, out)


def _degree_of(x: Element) -> int:
    (d,) = x.degrees()
    return d


def dot_span(seq, eng: Engine, prefix: int | None = None) -> dict[int, _RowSpace]:
    """Row spaces, one per degree, of normal forms of dot monomials times e(seq)."""
    gens = range(2, (prefix if prefix is not None else len(seq)) + 1)   # y_1 e = 0
    spaces: dict[int, _RowSpace] = {}
    start = eng.normalize(eng.idem(seq))
    if start.is_zero():
        return spaces
    spaces.setdefault(0, _RowSpace(eng.p)).add(start.terms)
    frontier = [start]
    seen: set = set()
    while frontier:
        nxt = []
        for x in frontier:
            for z in gens:
                y = eng.normalize(_shift_dots(x, z))
                if y.is_zero():
                    continue
                key = frozenset(y.terms.items())
                if key in seen:
                    continue
                seen.add(key)
                if spaces.setdefault(_degree_of(y), _RowSpace(eng.p)).add(y.terms):
                    nxt.append(y)
        frontier = nxt
    return spaces


def cellular_by_degree(seq, ctx: MulticargeCtx, eng: Engine) -> dict[int, list[Element]]:
    """Normal forms of the cellular basis of e(seq) B e(seq), grouped by degree."""
    by_shape: dict = {}
    for t in enumerate_std(seq, ctx):
        by_shape.setdefault(t.shape, []).append(t)
    out: dict[int, list[Element]] = {}
    for ts in by_shape.values():
        for s in ts:
            for t in ts:
                d = eng.tableau_degree(s) + eng.tableau_degree(t)
                out.setdefault(d, []).append(eng.normalize(eng.cellular_basis_element(s, t)))
    return out


def concrete_dim_upper_bound(seq: Sequence[int], ctx: MulticargeCtx, budget: int | None = None,
                             prefix: int | None = None, engine: Engine | None = None) -> ConcreteDim:
    """Bounds on the dimension of the subalgebra generated by the y_j e(seq).

    Degree by degree, the span V_d of normal forms of dot monomials maps onto the
    subalgebra, and the cellular basis has N_d elements of degree d, so
    min(dim V_d, N_d) bounds from above.  Normal forms of cellular basis elements
    are formally independent, so the part of V_d inside their span W_d injects:
    dim(V_d & W_d) bounds from below (and e(seq) itself is nonzero).  The result
    is exact when the bounds meet.
    """
    seq = tuple(seq)
    eng = engine or Engine(ctx, len(seq), budget=budget)
    try:
        spaces = dot_span(seq, eng, prefix)
        cells = cellular_by_degree(seq, ctx, eng) if spaces else {}
    except NonTermination as exc:
        raise BudgetExhausted(str(exc)) from exc
    lower = upper = 0
    table = {}
    for d, V in sorted(spaces.items()):
        W = _RowSpace(eng.p)
        for x in cells.get(d, []):
            W.add(x.terms)
        both = _RowSpace(eng.p)
        for row in list(V.rows.values()) + list(W.rows.values()):
            both.add(row)
        meet = len(V) + len(W) - len(both)
        lo = max(meet, 1 if d == 0 else 0)
        hi = min(len(V), len(cells.get(d, [])))
        table[d] = (lo, hi)
        lower += lo
        upper += hi
    return ConcreteDim(upper, lower == upper, lower, upper, table)


def prefix_dim_predicted(bd: BlockData, a: int) -> int:
    return 1 << sum(1 for z in bd.m_grid.values() if z <= a)


# ---------------------------------------------------------------- question Q

def _shifted_ctx(ctx: MulticargeCtx, r0: int) -> MulticargeCtx:
    return validate_multicharge(ctx.e, ctx.l, ctx.p, tuple(k - r0 for k in ctx.kappa_lift),
                                ctx.interval_start - r0, 0)


def predicted_dim(seq: Sequence[int], ctx: MulticargeCtx) -> tuple[str, int | None]:
    kind, t, r0 = detect_quasi_vertical(seq, ctx)
    if kind == "vertical":
        bd = enclosing_block_data(ctx, t, len(seq))
        return kind, prefix_dim_predicted(bd, len(seq))
    if kind == "quasi-vertical":
        g = len(seq) - r0 * ctx.l
        sub = _shifted_ctx(ctx, r0)
        bd = enclosing_block_data(sub, t, g)
        return kind, prefix_dim_predicted(bd, g)
    return kind, None


@dataclass
class QRow:
    sequence: tuple
    class_rep: tuple
    classification: str
    std_count: int
    predicted_dim: int | None
    concrete_dim: int | None
    exact: bool | None
    verdict: str

    def as_dict(self) -> dict:
        return {"sequence": list(self.sequence), "class_rep": list(self.class_rep),
                "classification": self.classification, "std_count": self.std_count,
                "predicted_dim": self.predicted_dim, "concrete_dim": self.concrete_dim,
                "exact": self.exact, "verdict": self.verdict}


def sim_classes(m: int, ctx: MulticargeCtx) -> list[frozenset]:
    seen: set = set()
    out = []
    for s in all_blob_possible(m, ctx):
        if s in seen:
            continue
        cls = sim_class(s, ctx)
        seen |= cls
        out.append(cls)
    return out


def explore_Q(ctx: MulticargeCtx, m: int, concrete: bool = True, classes_only: bool = False,
              budget: int | None = None) -> list[QRow]:
    rows = []
    eng = Engine(ctx, m, budget=budget) if concrete and not classes_only else None
    for cls in sim_classes(m, ctx):
        rep = min(cls)
        kinds = {s: predicted_dim(s, ctx) for s in sorted(cls)}
        kind, pred = kinds[rep]
        witness = rep
        if kind == "other":
            for s, (kd, pd) in kinds.items():
                if kd != "other":
                    kind, pred, witness = f"equivalent-to-{kd}", pd, s
                    break
        std = len(enumerate_std(rep, ctx))
        if classes_only:
            rows.append(QRow(witness, rep, kind, std, pred, None, None, "not-computed"))
            continue
        dim = exact = None
        verdict = "not-computed"
        if eng is not None:
            try:
                cd = concrete_dim_upper_bound(rep, ctx, engine=eng)
                dim, exact = cd.dim, cd.exact
                if not exact:
                    verdict = "inconclusive"
                else:
                    verdict = "consistent" if dim == std else "refutes-Q"
            except BudgetExhausted:
                verdict = "inconclusive"
        rows.append(QRow(witness, rep, kind, std, pred, dim, exact, verdict))
    return rows
