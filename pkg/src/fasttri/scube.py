"""Subresultant chains encoded by their values on an evaluation grid.

For ``P, Q`` in ``k[x_1..x_n][y]`` the chain is specialized at every point
of a rectangular grid over ``x_1..x_n``; each specialization is a pair of
univariate polynomials whose chain is computed over ``F_p``.  Polynomial
data is recovered by interpolation on demand: principal coefficients first
(:meth:`SCube.subres_lc`), full subresultants only when asked
(:meth:`SCube.subres_full`).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import modarith as ma
from .errors import (
    IndexRangeError,
    PreconditionError,
    PrimeTooSmallError,
    RetriesExhaustedError,
)
from .mpoly import MultiPoly
from .subres import SubresChain, batch_chain, subres_chain_classical


@dataclass(frozen=True)
class GridConfig:
    use_ntt: bool = True
    offset: int = 0
    seed: int = 0
    max_retries: int = 5


def degree_bounds(P: MultiPoly, Q: MultiPoly, y: int) -> list[int]:
    """Per-variable degree bounds for every subresultant of ``P, Q``."""
    p, q = P.degree(y), Q.degree(y)
    return [max(P.degree(i), 0) * q + max(Q.degree(i), 0) * p for i in range(y)]


def _coeff_tensor(P: MultiPoly, y: int, n: int) -> np.ndarray:
    """Coefficients of ``P`` with the ``y`` axis first, then the grid axes."""
    a = np.moveaxis(P.c, y, 0)
    return a.reshape(a.shape[: n + 1])


class SCube:
    """Values of the subresultant chain of ``P, Q`` on a grid."""

    def __init__(self, P, Q, y, grid, bounds, shift, seed, tables):
        self.P, self.Q, self.y = P, Q, y
        self.ring = P.ring
        self.grid = grid
        self.bounds = tuple(bounds)
        self.shift = tuple(shift)
        self.seed = seed
        self.tables = tables
        self.p_deg, self.q_deg = P.degree(y), Q.degree(y)
        self._lc_cache: dict[int, MultiPoly] = {}
        self._full_cache: dict[int, MultiPoly] = {}

    @property
    def n(self) -> int:
        return self.y

    @property
    def degrees(self) -> tuple:
        return tuple(max(self.P.degree(i), self.Q.degree(i), 0) for i in range(self.ring.nvars)
                     if i <= self.y)

    def _check_index(self, j: int, allow_q: bool = True):
        top = self.q_deg if allow_q else self.q_deg - 1
        if not 0 <= j <= top:
            raise IndexRangeError(f"subresultant index {j} outside [0, {top}]")

    def _unshift(self, f: MultiPoly) -> MultiPoly:
        for i, c in enumerate(self.shift):
            if c:
                f = f.taylor_shift(i, -c)
        return f

    def _interp(self, values: np.ndarray) -> np.ndarray:
        """Interpolate value tensors with leading batch axes."""
        v = values.astype(self.ring.field.dtype)
        if self.n == 0:
            return v
        return ma.grid_interp_array(v, self.grid, caps=self.bounds)

    def _assemble(self, coeffs: np.ndarray) -> MultiPoly:
        """``coeffs`` has the ``y`` axis first followed by the grid axes."""
        a = np.moveaxis(coeffs, 0, -1)
        a = a.reshape(a.shape + (1,) * (self.ring.nvars - a.ndim))
        return self._unshift(MultiPoly(self.ring, np.ascontiguousarray(a)))

    def values(self, j: int) -> np.ndarray:
        """Stored values of ``S_j``: shape (j+1, *grid.shape)."""
        self._check_index(j)
        return self.tables[j]

    def subres_lc(self, j: int) -> MultiPoly:
        """Principal coefficient ``s_j`` (coefficient of ``y^j`` in ``S_j``)."""
        self._check_index(j)
        if j not in self._lc_cache:
            if j == self.q_deg:
                f = self.Q.lc(self.y) ** (self.p_deg - self.q_deg)
            else:
                vals = self.tables[j][j]
                f = self._assemble(self._interp(vals)[None])
            self._lc_cache[j] = f
        return self._lc_cache[j]

    def subres_full(self, j: int) -> MultiPoly:
        self._check_index(j)
        if j not in self._full_cache:
            if j == self.q_deg:
                lcq = self.Q.lc(self.y)
                f = self.Q * lcq ** (self.p_deg - self.q_deg - 1) if self.p_deg > self.q_deg else self.Q
            else:
                f = self._assemble(self._interp(self.tables[j]))
                self._lc_cache.setdefault(j, f.coeff(self.y, j))
            self._full_cache[j] = f
        return self._full_cache[j]

    def resultant(self) -> MultiPoly:
        return self.subres_full(0) if self.q_deg > 0 else self.subres_lc(0)

    def dump(self, path) -> None:
        """Binary dump: int64 header then every table, little endian, row-major."""
        head = [self.ring.p, self.n, *self.degrees, *self.bounds, self.seed, *self.shift,
                *self.grid.shape] if self.n else [self.ring.p, 0, *self.degrees, self.seed]
        with open(path, "wb") as fh:
            fh.write(b"SCUBE1\0\0")
            fh.write(struct.pack("<q", len(head)))
            fh.write(struct.pack(f"<{len(head)}q", *head))
            fh.write(struct.pack("<q", self.q_deg))
            for t in self.tables:
                fh.write(np.ascontiguousarray(t, dtype="<i8").tobytes())


def load_dump(path) -> dict:
    """Read a file written by :meth:`SCube.dump`."""
    data = Path(path).read_bytes()
    if data[:8] != b"SCUBE1\0\0":
        raise PreconditionError("not a scube dump")
    (hlen,) = struct.unpack_from("<q", data, 8)
    head = list(struct.unpack_from(f"<{hlen}q", data, 16))
    off = 16 + 8 * hlen
    (q,) = struct.unpack_from("<q", data, off)
    off += 8
    p, n = head[0], head[1]
    degrees = head[2: 3 + n]
    if n:
        bounds = head[3 + n: 3 + 2 * n]
        seed = head[3 + 2 * n]
        shift = head[4 + 2 * n: 4 + 3 * n]
        shape = tuple(head[4 + 3 * n: 4 + 4 * n])
    else:
        bounds, seed, shift, shape = [], head[3], [], ()
    size = int(np.prod(shape, dtype=np.int64))
    tables = []
    for j in range(q + 1):
        cnt = (j + 1) * size
        t = np.frombuffer(data, dtype="<i8", count=cnt, offset=off).reshape((j + 1,) + shape)
        tables.append(t)
        off += 8 * cnt
    return {"p": p, "n": n, "degrees": degrees, "bounds": bounds, "seed": seed,
            "shift": shift, "tables": tables}


def _storage_dtype(F):
    if F.dtype is object:
        return object
    return np.uint32


_ENUMERABLE = 1 << 20


def _avoiding_grid(F, bounds, lead: MultiPoly, n: int) -> ma.Grid:
    """General-point grid on which ``lead`` has no zero, chosen axis by axis.

    A value ``a`` is admitted on axis ``i`` when ``lead`` restricted to every
    already chosen prefix and ``x_i = a`` is not identically zero.
    """
    p = F.p
    cur = lead.c.reshape(lead.c.shape[:n]).astype(np.int64)[None]
    allpts = np.arange(p, dtype=np.int64)
    chosen = []
    for i, b in enumerate(bounds):
        deg = cur.shape[1]
        vander = np.ones((p, deg), dtype=np.int64)
        for k in range(1, deg):
            vander[:, k] = vander[:, k - 1] * allpts % p
        vals = np.moveaxis(np.tensordot(vander, cur, axes=([1], [1])), 0, 1) % p
        rest = tuple(range(2, vals.ndim))
        live = vals.any(axis=rest) if rest else vals != 0
        good = np.flatnonzero(live.all(axis=0))
        if len(good) < b + 1:
            raise RetriesExhaustedError(
                f"only {len(good)} usable sample values for {lead.ring.vars[i]}, need {b + 1}")
        pts = good[: b + 1]
        chosen.append(F.array(pts))
        cur = vals[:, pts].reshape((-1,) + vals.shape[2:])
    return ma.Grid(F, tuple(chosen), (None,) * n)


def build_scube(P: MultiPoly, Q: MultiPoly, y=None, cfg: GridConfig | None = None) -> SCube:
    """Evaluate ``P, Q`` on a grid and compute the chain at every point."""
    cfg = cfg or GridConfig()
    P._check(Q)
    ring = P.ring
    F = ring.field
    if y is None:
        y = P.mvar
    y = ring.index(y)
    for name, f in (("P", P), ("Q", Q)):
        if f.mvar != y:
            raise PreconditionError(f"{name} must have main variable {ring.vars[y]}")
    p, q = P.degree(y), Q.degree(y)
    if p < q:
        raise PreconditionError(f"need deg(P) >= deg(Q), got {p} < {q}")
    n = y
    bounds = degree_bounds(P, Q, y)
    grid = ma.make_grid(F, bounds, use_ntt=cfg.use_ntt, offset=cfg.offset) if n else None

    rng = np.random.default_rng(cfg.seed)
    shift = [0] * n
    Ps, Qs = P, Q
    for attempt in range(cfg.max_retries + 1):
        if n:
            Pv = ma.grid_eval_array(_coeff_tensor(Ps, y, n), grid).reshape(p + 1, -1)
            Qv = ma.grid_eval_array(_coeff_tensor(Qs, y, n), grid).reshape(q + 1, -1)
        else:
            Pv = Ps.c.reshape(p + 1, 1)
            Qv = Qs.c.reshape(q + 1, 1)
        if Pv[p].all() and Qv[q].all():
            break
        if attempt == cfg.max_retries or n == 0:
            if n == 0 or F.p > _ENUMERABLE:
                raise RetriesExhaustedError(
                    f"leading coefficients vanish on the grid after {attempt} coordinate shifts")
            # small field: pick sample points off the zero set of the initials
            grid = _avoiding_grid(F, bounds, P.lc(y) * Q.lc(y), n)
            shift = [0] * n
            Pv = ma.grid_eval_array(_coeff_tensor(P, y, n), grid).reshape(p + 1, -1)
            Qv = ma.grid_eval_array(_coeff_tensor(Q, y, n), grid).reshape(q + 1, -1)
            break
        shift = [int(c) for c in rng.integers(1, F.p, size=n)]
        Ps, Qs = P, Q
        for i, c in enumerate(shift):
            Ps, Qs = Ps.taylor_shift(i, c), Qs.taylor_shift(i, c)

    raw = batch_chain(Pv, Qv, F)
    shape = grid.shape if n else ()
    store = _storage_dtype(F)
    tables = []
    for j in range(q + 1):
        tables.append(raw[j].astype(store).reshape((j + 1,) + shape))
        raw[j] = None
    return SCube(P, Q, y, grid, bounds, shift, cfg.seed, tables)


class ClassicalCube:
    """Same interface as :class:`SCube`, backed by the chain over ``k[x][y]``.

    Used when the field is too small to host the grid.
    """

    def __init__(self, chain: SubresChain):
        self.chain = chain
        self.P, self.Q, self.y = chain.P, chain.Q, chain.y
        self.ring = chain.ring
        self.p_deg, self.q_deg = chain.p, chain.q

    def subres_lc(self, j: int) -> MultiPoly:
        return self.chain.principal(j)

    def subres_full(self, j: int) -> MultiPoly:
        return self.chain[j]

    def resultant(self) -> MultiPoly:
        return self.chain.S[0]


def build_cube(P: MultiPoly, Q: MultiPoly, y=None, cfg: GridConfig | None = None):
    """:func:`build_scube`, or the classical chain when the grid cannot be built."""
    try:
        return build_scube(P, Q, y, cfg)
    except (PrimeTooSmallError, RetriesExhaustedError):
        return ClassicalCube(subres_chain_classical(P, Q, y))


def scube_resultant(s) -> MultiPoly:
    return s.resultant()


def scube_subres_lc(s, j: int) -> MultiPoly:
    return s.subres_lc(j)


def scube_subres_full(s, j: int) -> MultiPoly:
    return s.subres_full(j)
