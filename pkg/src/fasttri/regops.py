"""Regularization and regular GCDs modulo zero-dimensional regular chains.

:func:`regularize_dim0` splits a chain so that a polynomial is either null
or regular on every branch; :func:`regular_gcd` computes a regular GCD
sequence of two polynomials sharing a main variable.  The two call each
other: regularization needs gcds when a resultant vanishes, and the gcd
scan regularizes principal subresultant coefficients.

Both share one :class:`Context`, which caches subresultant cubes so that a
pair ``(P, Q)`` has its chain computed only once, counts branch expansions,
and records every emitted gcd for later auditing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from . import modarith as ma
from .errors import BranchLimitError, NotInvertibleError, PreconditionError
from .mpoly import MultiPoly, _univariate_coeffs
from .regchain import RegularChain, SplitResult, normal_form, normalize, _divmod_monic
from .scube import GridConfig, build_cube

NULL = "null"
REGULAR = "regular"


@dataclass
class GcdRecord:
    P: MultiPoly
    Q: MultiPoly
    G: MultiPoly
    chain: RegularChain
    index: int | None  # subresultant index of G, None when G is the resultant
    raw: MultiPoly | None  # the chain entry G was reduced from


@dataclass
class Context:
    assume_radical: bool = False
    seed: int = 0
    max_expansions: int = 10_000
    use_ntt: bool = True
    cubes: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    expansions: int = 0

    def cube(self, P: MultiPoly, Q: MultiPoly, y: int):
        key = (P, Q, y)
        if key not in self.cubes:
            cfg = GridConfig(use_ntt=self.use_ntt, seed=self.seed)
            self.cubes[key] = build_cube(P, Q, y, cfg)
        return self.cubes[key]

    def tick(self):
        self.expansions += 1
        if self.expansions > self.max_expansions:
            raise BranchLimitError(
                f"more than {self.max_expansions} branch expansions; "
                f"{len(self.cubes)} subresultant chains built")


def _ordered_pair(P: MultiPoly, Q: MultiPoly, y: int):
    return (P, Q) if P.degree(y) >= Q.degree(y) else (Q, P)


def _check_dim0(P: MultiPoly, T: RegularChain):
    if not T.zero_dimensional:
        raise PreconditionError("chain must be zero-dimensional")
    if not T.normalized:
        raise PreconditionError("chain must be normalized")
    if not T.covers(P):
        raise PreconditionError("polynomial involves variables that are free modulo the chain")


# ---------------------------------------------------------------------------
# regularization

def regularize_initial_dim0(P: MultiPoly, T: RegularChain, ctx: Context | None = None):
    """Pairs ``(p_i, T_i)``: ``p_i`` constant or with initial regular modulo ``T_i``."""
    ctx = ctx or Context()
    out = []
    stack = [(normal_form(P, T), T)]
    while stack:
        p, C = stack.pop()
        if p.is_constant() or p.init().is_constant():
            out.append((p, C))
            continue
        for tag, D in regularize_dim0(p.init(), C, ctx):
            if tag == REGULAR:
                out.append((normal_form(p, D), D))
            else:
                stack.append((normal_form(p.tail(), D), D))
    out.reverse()
    return out


def regularize_dim0(P: MultiPoly, T: RegularChain, ctx: Context | None = None) -> SplitResult:
    """Split ``T`` so that ``P`` is null or regular modulo every branch."""
    ctx = ctx or Context()
    ctx.tick()
    if not T.polys:
        if not P.is_constant():
            raise PreconditionError("cannot regularize a non-constant against the empty chain")
        return SplitResult(((NULL if P.is_zero() else REGULAR, T),))
    _check_dim0(P, T)
    out = []
    for q, C in regularize_initial_dim0(P, T, ctx):
        if q.is_constant():
            out.append((NULL if q.is_zero() else REGULAR, C))
            continue
        out.extend(_regularize_nonconstant(q, C, ctx))
    return SplitResult(tuple(out))


def _regularize_nonconstant(q: MultiPoly, C: RegularChain, ctx: Context) -> list:
    v = q.mvar
    Cv, below, above = C.poly(v), C.below(v), C.above(v)
    if not below.polys and _univariate_coeffs(q, v) is not None:
        return _regularize_univariate(q, C, ctx)
    out = []
    A, B = _ordered_pair(Cv, q, v)
    cube = ctx.cube(A, B, v)
    r = cube.resultant()
    for tag, D in regularize_dim0(r, below, ctx):
        if tag == REGULAR and not normal_form(r, D).is_zero():
            out.append((REGULAR, D.extend(Cv, *above.polys)))
            continue
        for g, E in regular_gcd(q, Cv, D, ctx, cube=cube):
            if g.degree(v) <= 0:
                continue
            out.append((NULL, E.extend(g, *above.polys)))
            cof = _cofactor(Cv, g, v, E)
            if cof.degree(v) > 0:
                sub = E.extend(cof, *above.polys)
                out.extend(regularize_dim0(q, sub, ctx))
    return out


def _regularize_univariate(q: MultiPoly, C: RegularChain, ctx: Context) -> list:
    """Bottom of the tower: the gcd over the empty chain is the ordinary gcd."""
    v = q.mvar
    F = q.field
    above = C.above(v)
    t = C.poly(v).c.reshape(-1)
    out = []
    stack = [t]
    while stack:
        t = stack.pop()
        g = ma.gcd(q.c.reshape(-1), t, F)
        if len(g) == 1:
            out.append((REGULAR, RegularChain([_uni_poly(t, v, q.ring), *above.polys], q.ring)))
            continue
        out.append((NULL, RegularChain([_uni_poly(g, v, q.ring), *above.polys], q.ring)))
        ctx.tick()
        cof, _ = ma.divmod_poly(t, g, F)
        if len(cof) > 1:
            stack.append(cof)
    return out


def _uni_poly(a, v: int, ring) -> MultiPoly:
    shape = [1] * ring.nvars
    shape[v] = len(a)
    return MultiPoly(ring, a.reshape(shape))


def _cofactor(Cv: MultiPoly, g: MultiPoly, v: int, E: RegularChain) -> MultiPoly:
    """``NF(quo(C_v, g), E)`` for ``g`` monic in ``v``."""
    quot, rem = _divmod_monic(normal_form(Cv, E), g, v, E)
    if not rem.is_zero():
        raise AssertionError("gcd does not divide the chain polynomial modulo the chain")
    return quot


def _split_normalize(G: MultiPoly, T: RegularChain, ctx: Context) -> list:
    """Normalize ``G`` modulo ``T``, splitting if a zero divisor turns up."""
    try:
        return [(normalize(G, T), T)]
    except NotInvertibleError as exc:
        out = []
        for _tag, Ti in regularize_dim0(exc.witness, _lift(exc.chain, T), ctx):
            out.extend(_split_normalize(normal_form(G, Ti), Ti, ctx))
        return out


def _lift(sub: RegularChain, T: RegularChain) -> RegularChain:
    """Chain with ``sub`` as its lower part and the rest of ``T`` on top."""
    if not sub.polys:
        return T
    top = sub.mvars[-1]
    return sub.union(T.above(top))


# ---------------------------------------------------------------------------
# regular gcd

def regular_gcd(P: MultiPoly, Q: MultiPoly, T: RegularChain, ctx: Context | None = None,
                cube=None) -> list:
    """Regular GCD sequence ``[(G_i, T_i)]`` of ``P, Q`` modulo ``T``."""
    ctx = ctx or Context()
    P._check(Q)
    y = P.mvar
    if y is None or Q.mvar != y:
        raise PreconditionError("P and Q must share their main variable")
    if y in T.mvars:
        raise PreconditionError("the main variable of P and Q must be free modulo the chain")
    if T.polys and not T.zero_dimensional:
        raise PreconditionError("chain must be zero-dimensional")
    P, Q = _ordered_pair(P, Q, y)
    if cube is None:
        cube = ctx.cube(P, Q, y)
    q = cube.q_deg
    R = cube.resultant()
    out = []
    for tag, Ti in _regularize_any(R, T, ctx):
        if tag == REGULAR:
            G = normal_form(R, Ti) if Ti.polys else R
            out.append((G, Ti))
            ctx.trace.append(GcdRecord(P, Q, G, Ti, None, R))
        else:
            out.extend(_candidate_scan(cube, P, Q, Ti, ctx))
    return out


def _candidate_scan(cube, P, Q, T: RegularChain, ctx: Context) -> list:
    """Bottom-up search for the first non-defective subresultant, depth first."""
    q = cube.q_deg
    out = []
    pending = [(1, T)]
    while pending:
        d, Ti = pending.pop(0)
        if d == q:
            out.extend(_emit(cube, P, Q, q, Ti, ctx))
            continue
        ctx.tick()
        found = []
        for tag, Tj in _regularize_any(cube.subres_lc(d), Ti, ctx):
            if tag == REGULAR:
                found.extend((None, Tk) for Tk in _diagonal_check(cube, d, Tj, ctx))
            else:
                found.extend((d + 1, Tk) for Tk in _null_subresultant(cube, d, Tj, ctx))
        for nd, Tk in found:
            if nd is None:
                out.extend(_emit(cube, P, Q, d, Tk, ctx))
        pending[0:0] = [(nd, Tk) for nd, Tk in found if nd is not None]
    return out


def _regularize_any(f: MultiPoly, T: RegularChain, ctx: Context):
    """Regularize, treating the empty chain as the field of fractions."""
    if not T.polys:
        return [(NULL if f.is_zero() else REGULAR, T)]
    return list(regularize_dim0(f, T, ctx))


def _diagonal_check(cube, d: int, T: RegularChain, ctx: Context) -> list:
    """Split ``T`` so that every ``s_k`` with ``d < k < q`` is null or regular."""
    if ctx.assume_radical:
        return [T]
    chains = [T]
    for k in range(d + 1, cube.q_deg):
        nxt = []
        for C in chains:
            nxt.extend(Ck for _tag, Ck in _regularize_any(cube.subres_lc(k), C, ctx))
        chains = nxt
    return chains


def _null_subresultant(cube, d: int, T: RegularChain, ctx: Context) -> list:
    """Branches on which every coefficient of ``S_d`` is null."""
    if not T.polys:
        return [T]
    S = cube.subres_full(d)
    y = cube.y
    chains = [T]
    for k in range(S.degree(y), -1, -1):
        c = S.coeff(y, k)
        nxt = []
        for C in chains:
            for tag, Ck in regularize_dim0(c, C, ctx):
                if tag == REGULAR:
                    raise AssertionError(
                        f"coefficient of y^{k} in S_{d} is regular although s_{d} is null")
                nxt.append(Ck)
        chains = nxt
    return chains


def _emit(cube, P, Q, d: int, T: RegularChain, ctx: Context) -> list:
    raw = cube.subres_full(d)
    y = cube.y
    if not T.polys:
        G = raw
        ctx.trace.append(GcdRecord(P, Q, G, T, d, raw))
        return [(G, T)]
    out = []
    for G, Ti in _split_normalize(normal_form(raw, T), T, ctx):
        ctx.trace.append(GcdRecord(P, Q, G, Ti, d, raw))
        out.append((G, Ti))
    return out
