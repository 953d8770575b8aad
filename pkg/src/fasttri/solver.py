"""Triangular decomposition of two-equation systems.

The bivariate solver works on lists of polynomials in ``k[x1, y]``.  A pair
sharing ``y`` is split by its resultant ``R``:

* ``R != 0``: points with both initials nonzero satisfy ``R = 0``, which
  reduces the problem modulo the squarefree factors of the univariate
  part; the remaining points make one of the initials vanish, so that
  polynomial is replaced by its reductum.
* ``R == 0``: the pair has a common factor ``G`` over ``k(x1)``; solutions
  lie on ``G = 0`` or on the common zeros of the cofactors.

Modulo a univariate chain ``{f(x1)}`` the ``y``-polynomials are folded
with :func:`regular_gcd`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import modarith as ma
from .errors import PreconditionError, UnsupportedError
from .mpoly import MultiPoly, prem_chain, prem_var
from .regchain import RegularChain, normal_form
from .regops import NULL, Context, _split_normalize, regular_gcd, regularize_dim0, regularize_initial_dim0


@dataclass
class Decomposition:
    chains: list
    notes: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.chains)

    def __len__(self):
        return len(self.chains)


class _Bivariate:
    def __init__(self, ring, ctx: Context):
        self.ring = ring
        self.ctx = ctx
        self.y = 1
        self.x = 0

    def solve(self, polys: list, note: str) -> list:
        polys = [p for p in polys if not p.is_zero()]
        if any(p.is_constant() for p in polys):
            return []
        U = [p for p in polys if self.y not in p.variables()]
        Y = [p for p in polys if self.y in p.variables()]
        if U:
            return self._modular(U, Y, note)
        if not Y:
            return [(RegularChain([], self.ring), note)]
        Y.sort(key=lambda p: (p.degree(self.y), p.degree(self.x)))
        if len(Y) == 1:
            P = Y[0]
            curve = P.monic(self.y) if P.init().is_constant() else P
            out = [(RegularChain([curve]), note + "/curve")]
            if not P.init().is_constant():
                out += self.solve([P.init(), P.tail()], note + "/init")
            return out
        B, A = Y[0], Y[1]
        others = Y[2:]
        cube = self.ctx.cube(A, B, self.y)
        R = cube.resultant()
        if not R.is_zero():
            out = self.solve(others + [A, B, R], note + "/res")
            for X, Z in ((A, B), (B, A)):
                if not X.init().is_constant():
                    out += self.solve(others + [X.tail(), Z, X.init()], note + "/init")
            return out
        G = regular_gcd(A, B, RegularChain([], self.ring), self.ctx, cube=cube)[0][0]
        Ac = prem_var(A, G, self.y)[1]
        Bc = prem_var(B, G, self.y)[1]
        out = self.solve(others + [G], note + "/gcd")
        out += self.solve(others + [Ac, Bc, A, B], note + "/cofactor")
        return out

    def _modular(self, U: list, Y: list, note: str) -> list:
        F = self.ring.field
        g = F.zeros(0)
        for u in U:
            g = ma.gcd(g, u.c.reshape(-1), F)
        if len(g) <= 1:
            return []
        out = []
        for f, _mult in ma.squarefree_factors(g, F):
            T = RegularChain([MultiPoly(self.ring, f.reshape(-1, 1))])
            out += self._reduce(Y, T, [], note + "/mod")
        return out

    def _reduce(self, rem: list, T: RegularChain, acc: list, note: str) -> list:
        if not rem:
            return self._fold(acc, T, note)
        P = rem[0]
        out = []
        for p, Ti in regularize_initial_dim0(P, T, self.ctx):
            if p.is_constant():
                if p.is_zero():
                    out += self._reduce(rem[1:], Ti, acc, note)
            elif self.y not in p.variables():
                for tag, Tj in regularize_dim0(p, Ti, self.ctx):
                    if tag == NULL:
                        out += self._reduce(rem[1:], Tj, acc, note)
            else:
                # an unpeeled polynomial keeps its cached subresultant chain
                keep = P if p.degree(self.y) == P.degree(self.y) else p
                out += self._reduce(rem[1:], Ti, acc + [keep], note)
        return out

    def _fold(self, acc: list, T: RegularChain, note: str) -> list:
        if not acc:
            return [(T, note)]
        branches = [(acc[0], T)]
        for P in acc[1:]:
            nxt = []
            for G, Ti in branches:
                for G2, T2 in regular_gcd(G, P, Ti, self.ctx):
                    if G2.degree(self.y) > 0:
                        nxt.append((G2, T2))
            branches = nxt
        out = []
        for G, Ti in branches:
            for Gn, Tn in _split_normalize(normal_form(G, Ti), Ti, self.ctx):
                out.append((Tn.extend(Gn), note))
        return out


def prune_chains(chains: list) -> list:
    """Drop duplicates and chains whose points satisfy another output chain."""
    seen, uniq = set(), []
    for c, note in chains:
        if c not in seen:
            seen.add(c)
            uniq.append((c, note))
    uniq.sort(key=lambda cn: cn[0].sort_key())
    kept = []
    for i, (T, note) in enumerate(uniq):
        dominated = False
        for j, (S, _) in enumerate(uniq):
            if i == j or (j > i and _contains(T, S)):
                continue
            if _contains(S, T):
                dominated = True
                break
        if not dominated:
            kept.append((T, note))
    return kept


def _contains(S: RegularChain, T: RegularChain) -> bool:
    """Every polynomial of ``S`` pseudo-reduces to zero modulo ``T``."""
    if not S.polys:
        return True
    return all(prem_chain(s, T.polys).is_zero() for s in S.polys)


def triangularize_bivariate(P: MultiPoly, Q: MultiPoly, ctx: Context | None = None) -> Decomposition:
    ctx = ctx or Context()
    P._check(Q)
    if P.ring.nvars != 2:
        raise PreconditionError("the bivariate solver needs exactly two variables")
    if P.is_constant() or Q.is_constant():
        raise PreconditionError("input polynomials must be non-constant")
    raw = _Bivariate(P.ring, ctx).solve([P, Q], "top")
    kept = prune_chains(raw)
    return Decomposition([c for c, _ in kept], [n for _, n in kept])


def solve_two_eqs(P: MultiPoly, Q: MultiPoly, ctx: Context | None = None) -> Decomposition:
    """Decompose ``V(P, Q)`` into regular chains."""
    ctx = ctx or Context()
    P._check(Q)
    if P.is_constant() or Q.is_constant():
        raise PreconditionError("input polynomials must be non-constant")
    y = P.mvar
    if Q.mvar != y:
        raise PreconditionError("P and Q must share their main variable")
    if P.ring.nvars == 2:
        return triangularize_bivariate(P, Q, ctx)
    if P.ring.nvars == 1:
        F = P.field
        g = ma.gcd(P.c.reshape(-1), Q.c.reshape(-1), F)
        chains = [RegularChain([MultiPoly(P.ring, f)]) for f, _ in ma.squarefree_factors(g, F)]
        return Decomposition(chains, ["gcd"] * len(chains))
    A, B = (P, Q) if P.degree(y) >= Q.degree(y) else (Q, P)
    R = ctx.cube(A, B, y).resultant()
    if R.is_constant() and not R.is_zero() and P.init().is_constant() and Q.init().is_constant():
        return Decomposition([], [])
    raise UnsupportedError(
        "systems in more than two variables are only handled when the resultant "
        "and both initials are nonzero constants")
