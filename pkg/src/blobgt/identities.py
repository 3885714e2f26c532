"""Named identities about the Gelfand-Tsetlin generators, checked by the engine.

Every identity lives in the truncation e(i) B_m e(i) of a fundamental sequence
i with m = epsilon + k*e.  `verify_identity` builds both sides and compares them
with `Engine.equal`; `applicable_points` lists the parameter sets an identity
makes sense for, which is how the regression suite sweeps a context.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterator

from .blocks import BlockData, block_data, fundamental_sequence, principal_tableau
from .errors import BadParams, UnknownIdentity
from .klr import CheckVerdict, Element, Engine, Verdict
from .residues import MulticargeCtx, make_ctx

GridIndex = tuple[int, int]

NAMES = ("yz-inN-die", "clean-Y", "diag-L", "square-Y10", "square-Y1j", "square-Yrj",
         "EsLrj", "Y1jE1Lrj", "PsEsLrj", "Y-prod-reduction-2", "HvsH")


class Setting:
    """Context, blocks, fundamental sequence and a shared engine."""

    def __init__(self, e: int, l: int, kappa: tuple[int, ...], m: int, p: int = 5):
        self.ctx: MulticargeCtx = make_ctx(e, l, kappa, p=p)
        self.bd: BlockData = block_data(self.ctx, 1, m)
        self.m = m
        self.i = fundamental_sequence(self.ctx, m)
        self.eng = Engine(self.ctx, m)

    # generators ---------------------------------------------------------

    def Y(self, g: GridIndex) -> Element:
        return self.eng.y(self.bd.m_grid[g], self.i)

    def prev(self, g: GridIndex) -> GridIndex | None:
        r, j = g
        if j:
            return (r, j - 1)
        return (r - 1, self.bd.l - 2) if r > 1 else None

    def calL(self, g: GridIndex) -> Element:
        q = self.prev(g)
        if q is None:
            return -self.Y(g)
        return self.Y(q) - self.Y(g)

    def e(self) -> Element:
        return self.eng.idem(self.i)

    def prod(self, xs: list[Element]) -> Element:
        out = self.e()
        for x in xs:
            out = self.eng.product(out, x)
        return out

    # words ----------------------------------------------------------------

    def sandwich(self, g: GridIndex, erased: tuple[int, ...] = ()) -> Element:
        """(psi_1..psi_z with psi_v erased for v in `erased`)^* e(j) psi_1..psi_z e(i)."""
        z = self.bd.m_grid[g] - 1
        top = [a for a in range(1, z + 1) if a not in erased]
        tokens = [("s", a) for a in reversed(top)] + [("s", a) for a in range(1, z + 1)]
        return self.eng.word(tokens, self.i)

    def eraser(self, g: GridIndex, ss: tuple[int, ...]) -> Element:
        _, j = g
        return self.sandwich(g, tuple(self.bd.m_grid[(s, j)] for s in ss))

    def below(self, g: GridIndex, strict: bool = True) -> list[GridIndex]:
        cut = self.bd.m_grid[g]
        return [h for h in self.bd.order
                if self.bd.m_grid[h] < cut or (not strict and self.bd.m_grid[h] == cut)]


@lru_cache(maxsize=16)
def setting(e: int, l: int, kappa: tuple[int, ...], m: int, p: int = 5) -> Setting:
    return Setting(e, l, kappa, m, p)


def setting_from(params: dict) -> Setting:
    try:
        e, l = int(params["e"]), int(params["l"])
        kappa = tuple(int(x) for x in params["kappa"])
    except (KeyError, TypeError, ValueError) as exc:
        raise BadParams(f"need e, l, kappa: {exc}") from exc
    p = int(params.get("p", 5))
    if "m" in params:
        m = int(params["m"])
    else:
        ctx = make_ctx(e, l, kappa, p=p)
        from .blocks import epsilon_and_b
        eps, _ = epsilon_and_b(ctx, 1)
        m = eps + int(params.get("k", 1)) * e
    return setting(e, l, kappa, m, p)


def _grid(params: dict, st: Setting) -> GridIndex:
    try:
        g = (int(params["r"]), int(params["j"]))
    except KeyError as exc:
        raise BadParams(f"missing grid coordinate {exc}") from exc
    if g not in st.bd.m_grid:
        raise BadParams(f"grid point {g} outside 1..{st.bd.k} x 0..{st.bd.l - 2}")
    return g


def sides(name: str, params: dict) -> tuple[Element, Element]:
    """Left and right side of the identity `name` at `params`."""
    st = setting_from(params)
    bd = st.bd
    eng = st.eng
    if name == "yz-inN-die":
        z = int(params["z"])
        if not bd.N[0] <= z <= bd.N[1]:
            raise BadParams(f"z={z} is not in N={list(bd.N)}")
        return eng.y(z, st.i), eng.zero()
    if name == "clean-Y":
        z = int(params["z"])
        g = bd.block_of(z)
        if g is None:
            raise BadParams(f"z={z} lies in N")
        return eng.y(z, st.i), st.Y(g)
    g = _grid(params, st)
    r, j = g
    if name == "diag-L":
        return st.calL(g), st.sandwich(g)
    if name == "square-Y10":
        if g != (1, 0):
            raise BadParams("square-Y10 is stated at (1,0)")
        return st.prod([st.Y(g), st.Y(g)]), eng.zero()
    if name == "square-Y1j":
        if r != 1 or j == 0:
            raise BadParams("square-Y1j needs r=1 and j>0")
        return st.prod([st.Y(g), st.Y(g)]), st.prod([st.Y((1, j - 1)), st.Y(g)])
    if name == "square-Yrj":
        if r == 1:
            raise BadParams("square-Yrj needs r>1")
        rhs = st.prod([st.Y(st.prev(g)), st.Y(g)])
        for s in range(1, r):
            rhs = rhs - st.prod([st.calL((s, j)), st.calL(g)])
        return st.prod([st.Y(g), st.Y(g)]), rhs
    ss = tuple(int(x) for x in params.get("s", ()) or ())
    if name == "EsLrj":
        if len(ss) != 1 or not 1 <= ss[0] < r:
            raise BadParams("EsLrj needs a single s with 1 <= s < r")
        return st.eraser(g, ss), -st.prod([st.calL((ss[0], j)), st.calL(g)])
    if name == "Y1jE1Lrj":
        if not ss or ss[0] != 1 or list(ss) != sorted(set(ss)) or ss[-1] >= r:
            raise BadParams("Y1jE1Lrj needs 1 = s1 < s2 < ... < r")
        return st.prod([st.Y((1, j)), st.eraser(g, ss)]), eng.zero()
    if name == "PsEsLrj":
        if len(ss) != 1 or not 1 <= ss[0] < r:
            raise BadParams("PsEsLrj needs a single s with 1 <= s < r")
        factors = [st.Y((u, j)) for u in range(1, ss[0] + 1)]
        return st.prod(factors + [st.eraser(g, ss)]), eng.zero()
    if name == "Y-prod-reduction-2":
        factors = [st.Y(h) for h in st.below(g)]
        return st.prod(factors + [st.Y(g), st.Y(g)]), eng.zero()
    if name == "HvsH":
        t = principal_tableau(bd, g, st.ctx)
        lhs = eng.cellular_basis_element(t, t)
        rhs = st.prod([eng.L(bd.m_grid[h], st.i) for h in st.below(g, strict=False)])
        return lhs, rhs
    raise UnknownIdentity(name)


def verify_identity(name: str, params: dict) -> CheckVerdict:
    if name not in NAMES:
        raise UnknownIdentity(f"unknown identity {name!r}; known: {', '.join(NAMES)}")
    lhs, rhs = sides(name, params)
    st = setting_from(params)
    verdict = st.eng.equal(lhs, rhs)
    verdict.trace.update({"identity": name,
                          "lhs": st.eng.normalize(lhs).dump() or "0",
                          "rhs": st.eng.normalize(rhs).dump() or "0"})
    return verdict


def applicable_points(name: str, params: dict) -> Iterator[dict]:
    """All parameter sets at which `name` is stated, for the given context."""
    if name not in NAMES:
        raise UnknownIdentity(name)
    st = setting_from(params)
    bd = st.bd
    base = {k: params[k] for k in ("e", "l", "kappa", "p", "m", "k") if k in params}
    if name == "yz-inN-die":
        for z in range(bd.N[0], bd.N[1] + 1):
            yield {**base, "z": z}
        return
    if name == "clean-Y":
        for z in range(bd.N[1] + 1, bd.m + 1):
            yield {**base, "z": z}
        return
    for (r, j) in bd.order:
        pt = {**base, "r": r, "j": j}
        if name == "square-Y10" and (r, j) != (1, 0):
            continue
        if name == "square-Y1j" and (r != 1 or j == 0):
            continue
        if name == "square-Yrj" and r == 1:
            continue
        if name in ("EsLrj", "PsEsLrj"):
            for s in range(1, r):
                yield {**pt, "s": (s,)}
            continue
        if name == "Y1jE1Lrj":
            for size in range(0, r - 1):
                for rest in combinations(range(2, r), size):
                    yield {**pt, "s": (1,) + rest}
            continue
        yield pt


def prj_sign(params: dict) -> int | None:
    """Sign c with prod Y = c * prod calL over m_(s,t) <= m_(r,j), or None if undecided."""
    st = setting_from(params)
    g = _grid(params, st)
    pts = st.below(g, strict=False)
    ys = st.eng.normalize(st.prod([st.Y(h) for h in pts]))
    ls = st.eng.normalize(st.prod([st.calL(h) for h in pts]))
    for c in (1, -1):
        if st.eng.equal(ys, c * ls).verdict is Verdict.VERIFIED:
            return c
    return None
