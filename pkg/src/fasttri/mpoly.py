"""Multivariate polynomials over Z/pZ under a fixed variable order.

A :class:`MultiPoly` stores a dense coefficient tensor with one axis per
ring variable (axis ``i`` holds exponents of ``vars[i]``), trimmed so that
the last slice along every axis is nonzero.  The recursive view used
throughout the package, a polynomial as a univariate polynomial in its main
variable whose coefficients involve only smaller variables, is obtained by
slicing along an axis (:meth:`MultiPoly.coeff`).
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from . import modarith as ma
from .errors import (
    InvalidDivisorError,
    NoMainVariableError,
    PreconditionError,
    RingMismatchError,
)


class PolyRing:
    """k[x_1, ..., x_n] with ``x_1 < ... < x_n``."""

    def __init__(self, p: int, variables: Sequence[str]):
        variables = tuple(variables)
        if not variables:
            raise PreconditionError("a polynomial ring needs at least one variable")
        if len(set(variables)) != len(variables):
            raise PreconditionError(f"duplicate variable names in {variables}")
        self.field = ma.field(int(p))
        self.vars = variables

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.vars == self.vars and other.field == self.field

    def __hash__(self):
        return hash((self.vars, self.field.p))

    def __repr__(self):
        return f"PolyRing({self.p}, {list(self.vars)})"

    def index(self, v) -> int:
        if isinstance(v, (int, np.integer)):
            if not 0 <= v < self.nvars:
                raise PreconditionError(f"variable index {v} out of range")
            return int(v)
        try:
            return self.vars.index(v)
        except ValueError:
            raise PreconditionError(f"unknown variable {v!r}") from None

    def const(self, c: int) -> "MultiPoly":
        a = self.field.zeros((1,) * self.nvars)
        a[(0,) * self.nvars] = int(c) % self.p
        return MultiPoly(self, a)

    @property
    def zero(self) -> "MultiPoly":
        return MultiPoly(self, self.field.zeros((0,) * self.nvars), trimmed=True)

    @property
    def one(self) -> "MultiPoly":
        return self.const(1)

    def var(self, v, power: int = 1) -> "MultiPoly":
        i = self.index(v)
        shape = [1] * self.nvars
        shape[i] = power + 1
        a = self.field.zeros(tuple(shape))
        idx = [0] * self.nvars
        idx[i] = power
        a[tuple(idx)] = 1
        return MultiPoly(self, a, trimmed=True)

    def gens(self) -> list["MultiPoly"]:
        return [self.var(i) for i in range(self.nvars)]

    def from_dict(self, terms: Mapping[tuple, int]) -> "MultiPoly":
        if not terms:
            return self.zero
        shape = [1] * self.nvars
        for e in terms:
            for i, k in enumerate(e):
                shape[i] = max(shape[i], k + 1)
        a = self.field.zeros(tuple(shape))
        for e, c in terms.items():
            a[tuple(e)] = (a[tuple(e)] + int(c)) % self.p
        return MultiPoly(self, a)

    def from_array(self, arr) -> "MultiPoly":
        arr = self.field.array(arr)
        if arr.ndim > self.nvars:
            raise PreconditionError("coefficient tensor has more axes than the ring has variables")
        arr = arr.reshape(arr.shape + (1,) * (self.nvars - arr.ndim))
        return MultiPoly(self, arr)


def _trim_nd(a: np.ndarray) -> np.ndarray:
    if a.size == 0:
        return a.reshape((0,) * a.ndim)
    nz = np.nonzero(a)
    if nz[0].size == 0:
        return a[tuple(slice(0, 0) for _ in range(a.ndim))]
    return a[tuple(slice(0, int(ix.max()) + 1) for ix in nz)]


def _pad_to(a: np.ndarray, shape: tuple, F) -> np.ndarray:
    if a.shape == shape:
        return a
    out = F.zeros(shape)
    out[tuple(slice(0, s) for s in a.shape)] = a
    return out


def _mul_arrays(a: np.ndarray, b: np.ndarray, F) -> np.ndarray:
    if a.size == 0 or b.size == 0:
        return F.zeros((0,) * a.ndim)
    if a.size == 1:
        return b * int(a.flat[0]) % F.p
    if b.size == 1:
        return a * int(b.flat[0]) % F.p
    shape = tuple(sa + sb - 1 for sa, sb in zip(a.shape, b.shape))
    # Kronecker substitution: result strides never carry between axes
    fa = ma.trim(_pad_to(a, shape, F).ravel())
    fb = ma.trim(_pad_to(b, shape, F).ravel())
    flat = ma.mul(fa, fb, F)
    out = F.zeros(int(np.prod(shape)))
    out[: len(flat)] = flat
    return out.reshape(shape)


class MultiPoly:
    """Immutable polynomial; see the module docstring for the layout."""

    __slots__ = ("ring", "c", "_hash")

    def __init__(self, ring: PolyRing, arr: np.ndarray, trimmed: bool = False):
        if arr.ndim != ring.nvars:
            raise PreconditionError(f"tensor rank {arr.ndim} does not match {ring.nvars} variables")
        if not trimmed:
            arr = _trim_nd(arr)
        arr.flags.writeable = False
        self.ring = ring
        self.c = arr
        self._hash = None

    # -- basic queries -------------------------------------------------------

    @property
    def field(self):
        return self.ring.field

    def is_zero(self) -> bool:
        return self.c.size == 0

    def is_constant(self) -> bool:
        return all(s <= 1 for s in self.c.shape)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise PreconditionError("polynomial is not constant")
        return 0 if self.is_zero() else int(self.c.flat[0])

    def degree(self, v) -> int:
        """Degree in ``v``; -1 for the zero polynomial."""
        return self.c.shape[self.ring.index(v)] - 1

    def variables(self) -> list[int]:
        return [i for i, s in enumerate(self.c.shape) if s > 1]

    @property
    def mvar(self) -> int | None:
        vs = self.variables()
        return vs[-1] if vs else None

    def coeff(self, v, k: int) -> "MultiPoly":
        i = self.ring.index(v)
        if k < 0 or k >= self.c.shape[i]:
            return self.ring.zero
        sl = [slice(None)] * self.ring.nvars
        sl[i] = slice(k, k + 1)
        return MultiPoly(self.ring, self.c[tuple(sl)])

    def coeffs(self, v) -> list["MultiPoly"]:
        return [self.coeff(v, k) for k in range(self.degree(v) + 1)]

    def lc(self, v) -> "MultiPoly":
        return self.coeff(v, self.degree(v))

    def init(self) -> "MultiPoly":
        v = self.mvar
        if v is None:
            raise NoMainVariableError("a constant has no main variable")
        return self.lc(v)

    def tail(self) -> "MultiPoly":
        """Reductum with respect to the main variable."""
        v = self.mvar
        if v is None:
            return self.ring.zero
        sl = [slice(None)] * self.ring.nvars
        sl[v] = slice(0, self.c.shape[v] - 1)
        return MultiPoly(self.ring, self.c[tuple(sl)])

    @classmethod
    def from_coeffs(cls, ring: PolyRing, v, coeffs: Sequence["MultiPoly"]) -> "MultiPoly":
        i = ring.index(v)
        coeffs = list(coeffs)
        if not coeffs:
            return ring.zero
        shape = [1] * ring.nvars
        for c in coeffs:
            for ax, s in enumerate(c.c.shape):
                if ax != i:
                    shape[ax] = max(shape[ax], s)
        shape[i] = len(coeffs)
        out = ring.field.zeros(tuple(shape))
        for k, c in enumerate(coeffs):
            if c.is_zero():
                continue
            if c.c.shape[i] > 1:
                raise PreconditionError("coefficient depends on the expansion variable")
            sl = [slice(0, s) for s in c.c.shape]
            sl[i] = slice(k, k + 1)
            out[tuple(sl)] = c.c
        return cls(ring, out)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if isinstance(other, MultiPoly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ring.const(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        shape = tuple(max(a, b) for a, b in zip(self.c.shape, other.c.shape))
        out = _pad_to(self.c, shape, self.field).copy()
        out[tuple(slice(0, s) for s in other.c.shape)] += other.c
        return MultiPoly(self.ring, out % self.field.p)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, (-self.c) % self.field.p, trimmed=True)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        other = self._check(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.ring, _mul_arrays(self.c, other.c, self.field))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise PreconditionError("negative exponent")
        result, base = self.ring.one, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c: int) -> "MultiPoly":
        c = int(c) % self.field.p
        if c == 0:
            return self.ring.zero
        return MultiPoly(self.ring, self.c * c % self.field.p, trimmed=True)

    def shift(self, v, k: int) -> "MultiPoly":
        """Multiply by ``v**k``."""
        if k == 0 or self.is_zero():
            return self
        i = self.ring.index(v)
        return MultiPoly(self.ring, ma.pad_axis(self.c, i, k, 0), trimmed=True)

    def monic(self, v=None) -> "MultiPoly":
        if self.is_zero():
            return self
        v = self.mvar if v is None else v
        lead = self.lc(v) if v is not None else self
        if not lead.is_constant():
            raise PreconditionError("leading coefficient is not a field element")
        return self.scale(self.field.inv(lead.constant_value()))

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.ring.const(int(other))
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.c.shape == other.c.shape and np.array_equal(self.c, other.c)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.c.shape, self.c.astype(np.int64).tobytes()
                               if self.field.dtype is not object else tuple(self.c.ravel())))
        return self._hash

    # -- evaluation and substitution ----------------------------------------

    def substitute(self, assignment: Mapping) -> "MultiPoly":
        """Replace the given variables by field values."""
        p = self.field.p
        a = self.c
        for v, val in assignment.items():
            i = self.ring.index(v)
            if a.shape[i] <= 1:
                continue
            a = np.moveaxis(a, i, 0)
            acc = a[-1].copy()
            for k in range(a.shape[0] - 2, -1, -1):
                acc = (acc * (int(val) % p) + a[k]) % p
            a = np.moveaxis(acc[None, ...], 0, i)
        return MultiPoly(self.ring, np.ascontiguousarray(a))

    def eval_points(self, values: Mapping) -> np.ndarray:
        """Evaluate at arrays of points (one array per variable, broadcastable).

        Variables absent from ``values`` must not occur in the polynomial.
        """
        p = self.field.p
        arrays = {self.ring.index(v): np.asarray(x) % p for v, x in values.items()}
        shape = np.broadcast_shapes(*[x.shape for x in arrays.values()]) if arrays else ()
        out = self.field.zeros(shape)
        if self.is_zero():
            return out
        for i in self.variables():
            if i not in arrays:
                raise PreconditionError(f"no value given for {self.ring.vars[i]}")
        powers = {}
        for i in self.variables():
            x = arrays[i]
            pw = [np.ones_like(x)]
            for _ in range(1, self.c.shape[i]):
                pw.append(pw[-1] * x % p)
            powers[i] = pw
        for e in zip(*np.nonzero(self.c)):
            term = np.full(shape, int(self.c[e]), dtype=out.dtype)
            for i in self.variables():
                if e[i]:
                    term = term * powers[i][e[i]] % p
            out = (out + term) % p
        return out

    def taylor_shift(self, v, c: int) -> "MultiPoly":
        """Substitute ``v -> v + c``."""
        i = self.ring.index(v)
        n = self.c.shape[i]
        if n <= 1 or int(c) % self.field.p == 0:
            return self
        m = ma.taylor_shift_matrix(self.field.p, n, int(c))
        a = np.moveaxis(self.c, i, -1)
        a = ma.matmul_mod(a, m.T.copy(), self.field)
        return MultiPoly(self.ring, np.ascontiguousarray(np.moveaxis(a, -1, i)))

    def terms(self) -> list[tuple[tuple, int]]:
        """Nonzero terms, highest first in the lexicographic order of the ring."""
        idx = [tuple(int(k) for k in e) for e in zip(*np.nonzero(self.c))]
        idx.sort(key=lambda e: e[::-1], reverse=True)
        return [(e, int(self.c[e])) for e in idx]

    def to_dict(self) -> dict:
        return dict(self.terms())

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r}, p={self.field.p})"


def format_poly(P: MultiPoly) -> str:
    p = P.field.p
    if P.is_zero():
        return "0"
    parts = []
    for e, c in P.terms():
        sc = c if c <= p // 2 else c - p
        mono = "*".join(
            P.ring.vars[i] + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
        mag = abs(sc)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not parts:
            parts.append(("-" if sc < 0 else "") + body)
        else:
            parts.append((" - " if sc < 0 else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# univariate-view operations

def mvar_init(P: MultiPoly):
    """``(main variable name, initial, main degree)`` of a non-constant polynomial."""
    v = P.mvar
    if v is None:
        raise NoMainVariableError("a constant has no main variable")
    return P.ring.vars[v], P.lc(v), P.degree(v)


def _divmod_axis_monic_uni(a: np.ndarray, axis: int, b: np.ndarray, F):
    """Divide along ``axis`` by a univariate ``b`` with constant coefficients."""
    p = F.p
    n = len(b) - 1
    inv = F.inv(b[-1])
    r = np.moveaxis(a, axis, 0).copy()
    m = r.shape[0] - 1
    if m < n:
        return None, np.moveaxis(r, 0, axis)
    q = F.zeros((m - n + 1,) + r.shape[1:])
    bcol = b.reshape((n + 1,) + (1,) * (r.ndim - 1))
    for k in range(m, n - 1, -1):
        c = r[k] * inv % p
        if not c.any():
            continue
        q[k - n] = c
        r[k - n: k + 1] = (r[k - n: k + 1] - bcol * c[None]) % p
    return np.moveaxis(q, 0, axis), np.moveaxis(r[:n], 0, axis)


def _univariate_coeffs(B: MultiPoly, i: int):
    """Coefficient vector if ``B`` only involves variable ``i``, else None."""
    if any(s > 1 for ax, s in enumerate(B.c.shape) if ax != i):
        return None
    return B.c.reshape(-1)


def _exact_div_kronecker(A: MultiPoly, B: MultiPoly):
    """Exact quotient through one univariate division of the packed tensors.

    ``A = B*C`` packs to the same identity when every axis of the packing is
    as long as in ``A``.  Returns None when that fails, so the caller can
    fall back to recursive division for the diagnostic.
    """
    F = A.field
    shape = A.c.shape
    if any(sb > sa for sa, sb in zip(shape, B.c.shape)):
        return None
    fb = ma.trim(_pad_to(B.c, shape, F).ravel())
    q, r = ma.divmod_poly(A.c.ravel(), fb, F)
    if len(r):
        return None
    out = F.zeros(int(np.prod(shape)))
    out[: len(q)] = q
    C = MultiPoly(A.ring, out.reshape(shape))
    if any(sc + sb - 1 > sa for sa, sb, sc in zip(shape, B.c.shape, C.c.shape)) or C * B != A:
        return None
    return C


def exact_div(A: MultiPoly, B: MultiPoly) -> MultiPoly:
    """Quotient of an exact division; raises ``ValueError`` if inexact."""
    if B.is_zero():
        raise InvalidDivisorError("division by zero polynomial")
    if A.is_zero():
        return A
    F = A.field
    if B.is_constant():
        return A.scale(F.inv(B.constant_value()))
    w = B.mvar
    n = B.degree(w)
    ub = _univariate_coeffs(B, w)
    if ub is not None:
        q, r = _divmod_axis_monic_uni(A.c, w, ub, F)
        if r.any() or q is None:
            raise ValueError("inexact polynomial division")
        return MultiPoly(A.ring, np.ascontiguousarray(q))
    quot = _exact_div_kronecker(A, B)
    if quot is not None:
        return quot
    bn = B.lc(w)
    quot = A.ring.zero
    R = A
    while not R.is_zero() and R.degree(w) >= n:
        k = R.degree(w)
        term = exact_div(R.coeff(w, k), bn).shift(w, k - n)
        quot = quot + term
        R = R - term * B
    if not R.is_zero():
        raise ValueError("inexact polynomial division")
    return quot


def prem_var(A: MultiPoly, B: MultiPoly, v):
    """Classical pseudo-division in ``v``.

    Returns ``(R, Q)`` with ``lc(B, v)**e * A = Q*B + R``, ``deg(R, v) < deg(B, v)``
    and ``e = max(deg(A, v) - deg(B, v) + 1, 0)``.
    """
    A._check(B)
    i = A.ring.index(v)
    n = B.degree(i)
    if n < 1:
        raise InvalidDivisorError("divisor is zero or constant in the division variable")
    m = A.degree(i)
    if m < n:
        return A, A.ring.zero
    b = B.lc(i)
    R, Q = A, A.ring.zero
    for k in range(m, n - 1, -1):
        c = R.coeff(i, k)
        R = b * R - (c * B).shift(i, k - n)
        Q = b * Q + c.shift(i, k - n)
    return R, Q


def _chain_by_var(T: Iterable[MultiPoly]) -> dict:
    out = {}
    for t in T:
        v = t.mvar
        if v is None or v in out:
            raise PreconditionError("not a triangular set")
        out[v] = t
    return out


def prem_chain(P: MultiPoly, T: Iterable[MultiPoly]) -> MultiPoly:
    """Iterated pseudo-remainder of ``P`` by a triangular set."""
    by_var = _chain_by_var(T)
    R = P
    bound = P.ring.nvars
    while not R.is_constant():
        alg = [v for v in R.variables() if v in by_var and v < bound]
        if not alg:
            break
        v = alg[-1]
        R = prem_var(R, by_var[v], v)[0]
        bound = v
    return R


def iter_res(P: MultiPoly, T: Iterable[MultiPoly]) -> MultiPoly:
    """Iterated resultant of ``P`` by a triangular set (top variable first)."""
    from .subres import resultant

    by_var = _chain_by_var(T)
    R = P
    bound = P.ring.nvars
    while not R.is_constant():
        alg = [v for v in R.variables() if v in by_var and v < bound]
        if not alg:
            break
        v = alg[-1]
        R = resultant(R, by_var[v], v)
        bound = v
    return R


# ---------------------------------------------------------------------------
# grid transforms on polynomials

def grid_eval(f: MultiPoly, grid: ma.Grid) -> np.ndarray:
    """Values of ``f`` on a grid over the first ``grid.ndim`` ring variables."""
    n = grid.ndim
    if any(s > 1 for s in f.c.shape[n:]):
        raise PreconditionError("polynomial involves variables outside the grid")
    a = f.c.reshape(f.c.shape[:n]) if f.c.size else grid.field.zeros((1,) * n)
    if f.is_zero():
        return grid.field.zeros(grid.shape)
    return ma.grid_eval_array(a, grid)


def grid_interp(values: np.ndarray, grid: ma.Grid, ring: PolyRing,
                caps: Sequence[int] | None = None) -> MultiPoly:
    """Polynomial of degree below the grid lengths taking ``values``."""
    a = ma.grid_interp_array(values, grid, caps)
    return ring.from_array(a)
