"""Arithmetic in Z/pZ, dense univariate polynomials and grid transforms.

Univariate polynomials are plain numpy coefficient arrays, lowest degree
first, with no trailing zeros (the zero polynomial is the empty array).
Every routine takes the :class:`PrimeField` it works in.  For moduli below
2**31 arrays are ``int64`` and all products fit in 63 bits; larger moduli
fall back to ``object`` arrays of Python ints.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sympy import factorint, isprime

from .errors import GridTooSmallError, InvalidRootError, PreconditionError, PrimeTooSmallError

DIV_CROSSOVER = 32
NTT_CROSSOVER = 64

# 119 * 2**23 + 1; 30 bits, two-adicity 23, primitive root 3.
DEFAULT_PRIME = 998244353


def next_pow2(n: int) -> int:
    return 1 if n <= 1 else 1 << (n - 1).bit_length()


class PrimeField:
    """The prime field Z/pZ."""

    def __init__(self, p: int):
        p = int(p)
        if p < 3 or p % 2 == 0 or p >= 1 << 63 or not isprime(p):
            raise PreconditionError(f"modulus {p} is not an odd prime below 2**63")
        self.p = p
        self.dtype = np.int64 if p < 1 << 31 else object
        n = p - 1
        self.two_adicity = (n & -n).bit_length() - 1

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    @functools.cached_property
    def generator(self) -> int:
        """Smallest primitive root modulo p."""
        p = self.p
        qs = list(factorint(p - 1))
        g = 2
        while any(pow(g, (p - 1) // q, p) == 1 for q in qs):
            g += 1
        return g

    def supports_ntt(self, n: int) -> bool:
        return n & (n - 1) == 0 and n.bit_length() - 1 <= self.two_adicity

    def root_of_unity(self, n: int) -> int:
        """Element of exact multiplicative order ``n`` (a power of two)."""
        if not self.supports_ntt(n):
            raise PrimeTooSmallError(f"p={self.p} has no root of unity of order {n}")
        return pow(self.generator, (self.p - 1) // n, self.p)

    def array(self, values) -> np.ndarray:
        if self.dtype is object:
            a = np.array(values, dtype=object)
            if a.size:
                a = np.vectorize(lambda v: int(v) % self.p, otypes=[object])(a)
            return a
        a = np.asarray(values)
        if a.dtype == object:
            a = np.vectorize(lambda v: int(v) % self.p, otypes=[np.int64])(a) if a.size else a.astype(np.int64)
            return a.astype(np.int64)
        return np.mod(a.astype(np.int64), self.p)

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            return np.full(shape, 0, dtype=object)
        return np.zeros(shape, dtype=np.int64)

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def inv_array(self, a: np.ndarray) -> np.ndarray:
        """Elementwise inverse; zeros map to zero."""
        a = np.asarray(a)
        if a.size <= 16 or self.dtype is object:
            return self.array([pow(int(v), self.p - 2, self.p) for v in a.ravel()]).reshape(a.shape)
        result = np.ones_like(a)
        base = a.copy()
        e = self.p - 2
        while e:
            if e & 1:
                result = result * base % self.p
            base = base * base % self.p
            e >>= 1
        return result

    def pow_array(self, a: np.ndarray, e: int) -> np.ndarray:
        result = np.ones_like(a)
        base = a % self.p
        while e:
            if e & 1:
                result = result * base % self.p
            base = base * base % self.p
            e >>= 1
        return result


@functools.lru_cache(maxsize=None)
def field(p: int) -> PrimeField:
    return PrimeField(p)


@dataclass(frozen=True)
class FieldElement:
    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise PreconditionError("field elements from different fields")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElement(self._coerce(other), self.p).inverse()

    def __pow__(self, e: int):
        return FieldElement(pow(self.value, e, self.p), self.p)

    def __int__(self):
        return self.value


# ---------------------------------------------------------------------------
# number-theoretic transform

@functools.lru_cache(maxsize=64)
def _bitrev(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


@functools.lru_cache(maxsize=256)
def _twiddles(p: int, w: int, m: int) -> np.ndarray:
    out = [1] * m
    for j in range(1, m):
        out[j] = out[j - 1] * w % p
    return np.array(out, dtype=np.int64 if p < 1 << 31 else object)


def _check_root(root: int, n: int, p: int) -> None:
    if n & (n - 1):
        raise InvalidRootError(f"transform length {n} is not a power of two")
    if pow(root, n, p) != 1 or (n > 1 and pow(root, n // 2, p) == 1):
        raise InvalidRootError(f"{root} does not have exact order {n} modulo {p}")


def ntt_transform(a, root: int, F: PrimeField, inverse: bool = False) -> np.ndarray:
    """Evaluate along the last axis at ``root**0 .. root**(n-1)``.

    With ``inverse=True`` the transform is inverted, including the 1/n
    scaling, so ``ntt_transform(ntt_transform(a, w, F), w, F, inverse=True)``
    returns ``a``.  Leading axes are batch axes.
    """
    p = F.p
    a = np.asarray(a)
    n = a.shape[-1]
    _check_root(root, n, p)
    if inverse:
        root = pow(root, -1, p)
    a = a[..., _bitrev(n)] % p
    batch = a.shape[:-1]
    m = 1
    while m < n:
        tw = _twiddles(p, pow(root, n // (2 * m), p), m)
        a = a.reshape(batch + (n // (2 * m), 2, m))
        u = a[..., 0, :]
        v = a[..., 1, :] * tw % p
        a = np.stack(((u + v) % p, (u - v) % p), axis=-2).reshape(batch + (n,))
        m *= 2
    if inverse:
        a = a * pow(n, -1, p) % p
    return a


# ---------------------------------------------------------------------------
# dense univariate arithmetic on coefficient arrays

def trim(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if nz.size else a[:0]


def degree(a: np.ndarray) -> int:
    return len(a) - 1


def _conv_school(a, b, F: PrimeField):
    p = F.p
    if F.dtype is object:
        return np.convolve(a, b) % p
    m = min(len(a), len(b))
    if (p - 1) ** 2 * m < 1 << 63:
        return np.convolve(a, b) % p
    lo = a & 0xFFFF
    hi = a >> 16
    return (np.convolve(hi, b) % p * 65536 + np.convolve(lo, b)) % p


def _conv_kronecker(a, b, F: PrimeField):
    """Product by packing coefficients into one big integer."""
    p = F.p
    m = min(len(a), len(b))
    nbytes = ((m * (p - 1) ** 2).bit_length() + 8) // 8
    n = len(a) + len(b) - 1

    def pack(x):
        if F.dtype is object:
            return sum(int(v) << (8 * nbytes * i) for i, v in enumerate(x))
        buf = np.zeros((len(x), nbytes), dtype=np.uint8)
        k = min(8, nbytes)
        buf[:, :k] = x.astype("<u8").view(np.uint8).reshape(len(x), 8)[:, :k]
        return int.from_bytes(buf.tobytes(), "little")

    prod = pack(a) * pack(b)
    raw = np.frombuffer(prod.to_bytes(n * nbytes, "little"), dtype=np.uint8).reshape(n, nbytes)
    if F.dtype is object:
        return np.array([int.from_bytes(r.tobytes(), "little") % p for r in raw], dtype=object)
    out = np.zeros(n, dtype=np.int64)
    shift = 1
    for start in range(0, nbytes, 2):
        chunk = raw[:, start:start + 2].astype(np.int64)
        val = chunk[:, 0] + (chunk[:, 1] << 8 if chunk.shape[1] > 1 else 0)
        out = (out + val % p * shift) % p
        shift = shift * 65536 % p
    return out


def _conv_ntt(a, b, F: PrimeField):
    n = len(a) + len(b) - 1
    size = next_pow2(n)
    w = F.root_of_unity(size)
    fa = F.zeros(size)
    fb = F.zeros(size)
    fa[: len(a)] = a
    fb[: len(b)] = b
    prod = ntt_transform(fa, w, F) * ntt_transform(fb, w, F) % F.p
    return ntt_transform(prod, w, F, inverse=True)[:n]


def mul(a, b, F: PrimeField, crossover: int = NTT_CROSSOVER) -> np.ndarray:
    """Exact product of two coefficient arrays."""
    if len(a) == 0 or len(b) == 0:
        return F.zeros(0)
    if min(len(a), len(b)) <= crossover:
        out = _conv_school(a, b, F)
    elif F.supports_ntt(next_pow2(len(a) + len(b) - 1)):
        out = _conv_ntt(a, b, F)
    else:
        out = _conv_kronecker(a, b, F)
    return trim(out)


def poly_mul_uni(a: "DensePoly1", b: "DensePoly1") -> "DensePoly1":
    if a.field != b.field:
        raise PreconditionError("polynomials over different fields")
    return DensePoly1(mul(a.coeffs, b.coeffs, a.field), a.field)


def add(a, b, F: PrimeField) -> np.ndarray:
    n = max(len(a), len(b))
    out = F.zeros(n)
    out[: len(a)] += a
    out[: len(b)] += b
    return trim(out % F.p)


def sub(a, b, F: PrimeField) -> np.ndarray:
    n = max(len(a), len(b))
    out = F.zeros(n)
    out[: len(a)] += a
    out[: len(b)] -= b
    return trim(out % F.p)


def scale(a, c: int, F: PrimeField) -> np.ndarray:
    return trim(a * (int(c) % F.p) % F.p)


def monic(a, F: PrimeField) -> np.ndarray:
    if len(a) == 0:
        return a
    return scale(a, F.inv(a[-1]), F)


def inv_series(b, k: int, F: PrimeField) -> np.ndarray:
    """First ``k`` coefficients of ``1/b`` as a power series (``b[0] != 0``)."""
    g = F.array([F.inv(b[0])])
    n = 1
    while n < k:
        n = min(2 * n, k)
        e = mul(b[:n], g, F)[:n]
        e = (-e) % F.p
        e[0] = (e[0] + 2) % F.p
        g = mul(g, e, F)[:n]
    return g


def divmod_poly(a, b, F: PrimeField):
    """Quotient and remainder; the leading coefficient of ``b`` must be nonzero."""
    if len(b) == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    p = F.p
    n = len(b) - 1
    if len(a) - 1 < n:
        return F.zeros(0), a.copy()
    k = len(a) - n
    if k > DIV_CROSSOVER and n > 0:
        # reversed quotient = reversed a / reversed b modulo x^k
        qr = F.zeros(k)
        prod = mul(a[::-1][:k] % p, inv_series(b[::-1], k, F), F)[:k]
        qr[: len(prod)] = prod
        q = trim(np.ascontiguousarray(qr[::-1]))
        r = sub(a[:n] % p, mul(q, b, F)[:n], F)
        return q, trim(r)
    r = a.copy() % p
    inv = F.inv(b[-1])
    bm = b * inv % p
    q = F.zeros(len(a) - n)
    for k in range(len(a) - 1, n - 1, -1):
        c = r[k]
        if c:
            q[k - n] = c * inv % p
            r[k - n: k + 1] = (r[k - n: k + 1] - c * bm) % p
    return trim(q), trim(r[:n])


def rem(a, b, F: PrimeField) -> np.ndarray:
    return divmod_poly(a, b, F)[1]


def derivative(a, F: PrimeField) -> np.ndarray:
    if len(a) <= 1:
        return F.zeros(0)
    return trim(a[1:] * F.array(np.arange(1, len(a))) % F.p)


def gcd(a, b, F: PrimeField) -> np.ndarray:
    """Monic gcd (zero if both inputs are zero)."""
    a, b = trim(a), trim(b)
    while len(b):
        a, b = b, rem(a, b, F)
    return monic(a, F)


def xgcd(a, b, F: PrimeField):
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = F.array([1]), F.zeros(0)
    t0, t1 = F.zeros(0), F.array([1])
    while len(r1):
        q, r = divmod_poly(r0, r1, F)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, F), F)
        t0, t1 = t1, sub(t0, mul(q, t1, F), F)
    if len(r0) == 0:
        return r0, s0, t0
    c = F.inv(r0[-1])
    return scale(r0, c, F), scale(s0, c, F), scale(t0, c, F)


def evaluate(a, x, F: PrimeField):
    """Horner evaluation; ``x`` may be an array of points."""
    x = np.asarray(x) % F.p
    acc = F.zeros(x.shape) if x.shape else 0
    for c in a[::-1]:
        acc = (acc * x + c) % F.p
    return acc


def squarefree_factors(f, F: PrimeField) -> list[tuple[np.ndarray, int]]:
    """Squarefree decomposition ``f = lc * prod g_i**m_i`` of a nonzero polynomial.

    The returned ``g_i`` are monic, squarefree, pairwise coprime and
    non-constant.  Characteristic-p derivatives vanishing are handled by
    taking p-th roots.
    """
    f = monic(trim(f), F)
    if len(f) <= 1:
        return []
    out: list[tuple[np.ndarray, int]] = []
    c = gcd(f, derivative(f, F), F)
    w = divmod_poly(f, c, F)[0]
    i = 1
    while len(w) > 1:
        y = gcd(w, c, F)
        fac = divmod_poly(w, y, F)[0]
        if len(fac) > 1:
            out.append((monic(fac, F), i))
        w = y
        c = divmod_poly(c, y, F)[0]
        i += 1
    if len(c) > 1:
        root = trim(c[:: F.p])
        out.extend((g, m * F.p) for g, m in squarefree_factors(root, F))
    return out


class DensePoly1:
    """Immutable dense univariate polynomial over a prime field."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, F: PrimeField):
        self.field = F
        self.coeffs = trim(F.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs))
        self.coeffs.flags.writeable = False

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self) -> int:
        return int(self.coeffs[-1]) if len(self.coeffs) else 0

    def _wrap(self, arr):
        return DensePoly1(arr, self.field)

    def __add__(self, other):
        return self._wrap(add(self.coeffs, other.coeffs, self.field))

    def __sub__(self, other):
        return self._wrap(sub(self.coeffs, other.coeffs, self.field))

    def __mul__(self, other):
        if isinstance(other, DensePoly1):
            return poly_mul_uni(self, other)
        return self._wrap(scale(self.coeffs, other, self.field))

    __rmul__ = __mul__

    def __divmod__(self, other):
        q, r = divmod_poly(self.coeffs, other.coeffs, self.field)
        return self._wrap(q), self._wrap(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        return evaluate(self.coeffs, x, self.field)

    def __eq__(self, other):
        return (isinstance(other, DensePoly1) and self.field == other.field
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.field.p, tuple(int(c) for c in self.coeffs)))

    def __repr__(self):
        return f"DensePoly1({[int(c) for c in self.coeffs]}, p={self.field.p})"


# ---------------------------------------------------------------------------
# grids

def matmul_mod(a: np.ndarray, b: np.ndarray, F: PrimeField) -> np.ndarray:
    """``a @ b mod p`` without int64 overflow."""
    p = F.p
    if F.dtype is object:
        return (a.astype(object) @ b.astype(object)) % p
    lo = a & 0xFFFF
    hi = a >> 16
    return ((hi @ b) % p * 65536 + (lo @ b)) % p


@dataclass(frozen=True)
class Grid:
    """Rectangular evaluation grid, one point list per dimension."""

    field: PrimeField
    points: tuple
    roots: tuple  # root of unity per dimension, or None for general points

    @property
    def shape(self) -> tuple:
        return tuple(len(pts) for pts in self.points)

    @property
    def ndim(self) -> int:
        return len(self.points)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64))


def make_grid(F: PrimeField, bounds: Sequence[int], use_ntt: bool = True, offset: int = 0) -> Grid:
    """Grid hosting polynomials of degree ``<= bounds[i]`` in dimension ``i``."""
    points, roots = [], []
    for b in bounds:
        need = b + 1
        size = next_pow2(need)
        if use_ntt and F.supports_ntt(size):
            w = F.root_of_unity(size)
            points.append(_twiddles(F.p, w, size).copy())
            roots.append(w)
            continue
        if need > F.p:
            raise PrimeTooSmallError(f"p={F.p} is smaller than the required grid length {need}")
        points.append(F.array((np.arange(need, dtype=np.int64) + offset) % F.p))
        roots.append(None)
    return Grid(F, tuple(points), tuple(roots))


@functools.lru_cache(maxsize=64)
def _vandermonde(p: int, pts: tuple) -> np.ndarray:
    F = field(p)
    x = F.array(list(pts))
    n = len(x)
    v = F.zeros((n, n))
    v[:, 0] = 1
    for k in range(1, n):
        v[:, k] = v[:, k - 1] * x % p
    return v


@functools.lru_cache(maxsize=64)
def _inverse_vandermonde(p: int, pts: tuple) -> np.ndarray:
    """Matrix mapping values at ``pts`` to interpolating coefficients."""
    F = field(p)
    x = F.array(list(pts))
    n = len(x)
    # master polynomial prod (z - x_j), lowest degree first
    master = F.array([1])
    for xj in x:
        master = mul(master, F.array([-int(xj), 1]), F, crossover=1 << 30)
    # synthetic division master / (z - x_i) for all i at once
    q = F.zeros((n, n))
    q[:, n - 1] = 1
    for k in range(n - 1, 0, -1):
        q[:, k - 1] = (master[k] + x * q[:, k]) % p
    denom = F.zeros(n)
    for k in range(n - 1, -1, -1):
        denom = (denom * x + q[:, k]) % p
    inv = F.inv_array(denom)
    # column i of the result holds the coefficients of the i-th Lagrange basis polynomial
    return (q * inv[:, None] % p).T.copy()


def pad_axis(t: np.ndarray, axis: int, before: int, after: int) -> np.ndarray:
    """Zero-pad one axis; keeps Python ints in object arrays."""
    shape = list(t.shape)
    shape[axis] += before + after
    out = np.full(shape, 0, dtype=t.dtype)
    sl = [slice(None)] * t.ndim
    sl[axis] = slice(before, before + t.shape[axis])
    out[tuple(sl)] = t
    return out


def _axis_apply(t: np.ndarray, axis: int, fn) -> np.ndarray:
    t = np.moveaxis(t, axis, -1)
    return np.moveaxis(fn(t), -1, axis)


def grid_eval_array(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    """Evaluate a dense coefficient tensor on ``grid``.

    The last ``grid.ndim`` axes of ``coeffs`` are exponent axes; leading
    axes are carried along as a batch.
    """
    F = grid.field
    t = np.asarray(coeffs)
    lead = t.ndim - grid.ndim
    for i, L in enumerate(grid.shape):
        ax = lead + i
        if t.shape[ax] > L:
            raise GridTooSmallError(
                f"degree {t.shape[ax] - 1} in dimension {i} exceeds grid length {L}")
        if t.shape[ax] < L:
            t = pad_axis(t, ax, 0, L - t.shape[ax])
        if grid.roots[i] is not None:
            w = grid.roots[i]
            t = _axis_apply(t, ax, lambda a: ntt_transform(a, w, F))
        else:
            v = _vandermonde(F.p, tuple(int(x) for x in grid.points[i]))
            t = _axis_apply(t, ax, lambda a: matmul_mod(a, v.T.copy(), F))
    return t


def grid_interp_array(values: np.ndarray, grid: Grid, caps: Sequence[int] | None = None) -> np.ndarray:
    """Inverse of :func:`grid_eval_array`; optionally truncate to degree caps."""
    F = grid.field
    t = np.asarray(values)
    lead = t.ndim - grid.ndim
    if t.shape[lead:] != grid.shape:
        raise GridTooSmallError(f"value tensor shape {t.shape[lead:]} does not match grid {grid.shape}")
    for i in range(grid.ndim):
        ax = lead + i
        if grid.roots[i] is not None:
            w = grid.roots[i]
            t = _axis_apply(t, ax, lambda a: ntt_transform(a, w, F, inverse=True))
        else:
            vi = _inverse_vandermonde(F.p, tuple(int(x) for x in grid.points[i]))
            t = _axis_apply(t, ax, lambda a: matmul_mod(a, vi.T.copy(), F))
    if caps is not None:
        idx = [slice(None)] * lead + [slice(0, c + 1) for c in caps]
        t = t[tuple(idx)]
    return t


def taylor_shift_matrix(p: int, n: int, c: int) -> np.ndarray:
    """Matrix M with ``coeffs(f(x + c)) = M @ coeffs(f)`` for ``deg f < n``."""
    F = field(p)
    m = F.zeros((n, n))
    row = F.zeros(n)
    # column j holds the coefficients of (x + c)**j
    col = F.array([1])
    for j in range(n):
        row[:] = 0
        row[: len(col)] = col
        m[:, j] = row
        nxt = F.zeros(len(col) + 1)
        nxt[1:] += col
        nxt[:-1] += col * (c % p)
        col = nxt % p
    return m
