"""Regular chains and their modular arithmetic.

A chain is a tuple of polynomials with pairwise distinct main variables,
kept in ascending order of main variable.  Zero-dimensional normalized
chains (monic tower over a prefix ``x_1..x_k`` of the variables) support
reduction to normal form and inversion of regular elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import modarith as ma
from .errors import NotInvertibleError, PreconditionError, UnsupportedError
from .mpoly import MultiPoly, _divmod_axis_monic_uni, _univariate_coeffs, iter_res, prem_chain


class RegularChain:
    """Immutable triangular set, sorted by main variable."""

    __slots__ = ("ring", "polys", "_by_var", "_hash")

    def __init__(self, polys: Iterable[MultiPoly], ring=None):
        polys = [p for p in polys]
        if ring is None:
            if not polys:
                raise PreconditionError("an empty chain needs an explicit ring")
            ring = polys[0].ring
        by_var = {}
        for t in polys:
            t._check(ring.zero)
            v = t.mvar
            if v is None:
                raise PreconditionError("chain elements must be non-constant")
            if v in by_var:
                raise PreconditionError(f"two chain elements with main variable {ring.vars[v]}")
            by_var[v] = t
        self.ring = ring
        self.polys = tuple(by_var[v] for v in sorted(by_var))
        self._by_var = by_var
        self._hash = None

    # -- structure -----------------------------------------------------------

    @property
    def mvars(self) -> tuple:
        return tuple(sorted(self._by_var))

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __contains__(self, v) -> bool:
        return self.ring.index(v) in self._by_var

    def poly(self, v) -> MultiPoly:
        return self._by_var[self.ring.index(v)]

    def below(self, v) -> "RegularChain":
        v = self.ring.index(v)
        return RegularChain([t for w, t in self._by_var.items() if w < v], self.ring)

    def above(self, v) -> "RegularChain":
        v = self.ring.index(v)
        return RegularChain([t for w, t in self._by_var.items() if w > v], self.ring)

    def extend(self, *polys: MultiPoly) -> "RegularChain":
        return RegularChain(list(self.polys) + [p for p in polys], self.ring)

    def union(self, other: "RegularChain") -> "RegularChain":
        return RegularChain(list(self.polys) + list(other.polys), self.ring)

    @property
    def max_poly(self) -> MultiPoly:
        return self.polys[-1]

    @property
    def zero_dimensional(self) -> bool:
        """Main variables are exactly ``x_1..x_k`` for some ``k``."""
        return self.mvars == tuple(range(len(self.polys)))

    @property
    def normalized(self) -> bool:
        return all(t.init() == 1 for t in self.polys)

    def main_degrees(self) -> tuple:
        return tuple(t.degree(t.mvar) for t in self.polys)

    def degree(self) -> int:
        return int(np.prod(self.main_degrees(), dtype=object)) if self.polys else 1

    def covers(self, P: MultiPoly) -> bool:
        """Every variable of ``P`` is algebraic over the chain."""
        return all(v in self._by_var for v in P.variables())

    def __eq__(self, other):
        return isinstance(other, RegularChain) and self.ring == other.ring and self.polys == other.polys

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.polys))
        return self._hash

    def __str__(self):
        if not self.polys:
            return "{ }"
        return "{ " + ", ".join(str(t) for t in self.polys) + " }"

    def __repr__(self):
        return f"RegularChain({self})"

    def sort_key(self):
        return (len(self.polys), self.mvars, self.main_degrees(),
                tuple(tuple(t.terms()) for t in self.polys))


@dataclass(frozen=True)
class SplitResult:
    """Branches of a splitting, each tagged ``"null"`` or ``"regular"``."""

    branches: tuple

    def __iter__(self):
        return iter(self.branches)

    def __len__(self):
        return len(self.branches)

    def chains(self) -> list:
        return [c for _, c in self.branches]


def _require_dim0(T: RegularChain, normalized: bool = True):
    if not T.zero_dimensional:
        raise UnsupportedError("operation needs a zero-dimensional chain")
    if normalized and not T.normalized:
        raise PreconditionError("operation needs a normalized (monic) chain")


def is_null_mod_sat(P: MultiPoly, T: RegularChain) -> bool:
    return prem_chain(P, T.polys).is_zero()


def is_regular_resultant_test(P: MultiPoly, T: RegularChain) -> bool:
    _require_dim0(T, normalized=False)
    return not iter_res(P, T.polys).is_zero()


def _reduce_by(P: MultiPoly, t: MultiPoly, v: int) -> MultiPoly:
    """Remainder of ``P`` by a polynomial monic in ``v``."""
    n = t.degree(v)
    if P.degree(v) < n:
        return P
    ub = _univariate_coeffs(t, v)
    if ub is not None:
        _, r = _divmod_axis_monic_uni(P.c, v, ub, P.field)
        return MultiPoly(P.ring, np.ascontiguousarray(r))
    R = P
    for k in range(P.degree(v), n - 1, -1):
        c = R.coeff(v, k)
        if not c.is_zero():
            R = R - (c * t).shift(v, k - n)
    return R


def normal_form(P: MultiPoly, T: RegularChain) -> MultiPoly:
    """Reduce ``P`` modulo a monic tower, largest main variable first."""
    _require_dim0(T)
    R = P
    for t in reversed(T.polys):
        if R.is_constant():
            break
        R = _reduce_by(R, t, t.mvar)
    return R


def _nf_mul(A: MultiPoly, B: MultiPoly, T: RegularChain) -> MultiPoly:
    return normal_form(A * B, T)


def _divmod_monic(A: MultiPoly, B: MultiPoly, v: int, T: RegularChain):
    """Division by ``B`` monic in ``v`` with coefficients reduced modulo ``T``."""
    n = B.degree(v)
    quot = A.ring.zero
    R = A
    while not R.is_zero() and R.degree(v) >= n:
        k = R.degree(v)
        c = R.coeff(v, k)
        term = c.shift(v, k - n)
        quot = quot + term
        R = normal_form(R - c * B.shift(v, k - n), T)
    return normal_form(quot, T), R


def _uni_array(P: MultiPoly, v: int) -> np.ndarray:
    return P.c.reshape(-1) if not P.is_zero() else P.field.zeros(0)


def inverse(h: MultiPoly, T: RegularChain) -> MultiPoly:
    """Inverse of ``h`` modulo a zero-dimensional normalized chain.

    Raises :class:`NotInvertibleError` carrying a zero-divisor witness and
    the (sub)chain it was found against.
    """
    F = h.field
    h = normal_form(h, T)
    if h.is_constant():
        c = h.constant_value()
        if c == 0:
            raise NotInvertibleError("zero is not invertible", witness=h, chain=T)
        return h.ring.const(F.inv(c))
    v = h.mvar
    if v not in T.mvars:
        raise PreconditionError("element involves a variable that is not algebraic over the chain")
    t = T.poly(v)
    lower = T.below(v)
    if not lower.polys and _univariate_coeffs(h, v) is not None and _univariate_coeffs(t, v) is not None:
        g, s, _ = ma.xgcd(_uni_array(h, v), _uni_array(t, v), F)
        if len(g) != 1:
            raise NotInvertibleError("element is a zero divisor", witness=h, chain=T)
        arr = s * F.inv(int(g[0])) % F.p
        shape = [1] * h.ring.nvars
        shape[v] = len(arr)
        return MultiPoly(h.ring, arr.reshape(shape))
    # extended Euclid in (k[x_<v]/T_<v)[v], tracking r_i = u_i * h mod t
    r0, u0 = t, h.ring.zero
    r1, u1 = h, h.ring.one
    while not r1.is_zero():
        if r1.degree(v) < 0 or v not in r1.variables():
            lead = r1
        else:
            lead = r1.lc(v)
        try:
            linv = inverse(lead, lower)
        except NotInvertibleError as exc:
            raise NotInvertibleError(str(exc), witness=exc.witness, chain=exc.chain) from None
        r1 = _nf_mul(r1, linv, lower)
        u1 = _nf_mul(u1, linv, T)
        if v not in r1.variables():
            # r1 is 1 after scaling
            return normal_form(u1, T)
        q, r = _divmod_monic(r0, r1, v, lower)
        r0, u0, r1, u1 = r1, u1, r, normal_form(u0 - q * u1, T)
    raise NotInvertibleError("element is a zero divisor", witness=h, chain=T)


def normalize(P: MultiPoly, T: RegularChain) -> MultiPoly:
    """Representative of ``init(P)^-1 * P`` modulo ``T``, monic in ``mvar(P)``."""
    if P.is_constant():
        return P
    v = P.mvar
    H = P.lc(v)
    if H.is_constant():
        return normal_form(P.monic(v), T)
    return normal_form(inverse(H, T) * P, T)
