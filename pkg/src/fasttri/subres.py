"""Subresultant chains.

Three implementations live here:

* :func:`dpol_subres_oracle` builds the Sylvester-type matrix and takes
  determinantal polynomials with fraction-free elimination.  Slow, used as
  ground truth in tests.
* :func:`subres_chain_classical` runs the block relations of the classical
  subresultant PRS over ``k[x][y]``.
* :func:`batch_chain` runs the same relations over ``F_p`` for many
  specializations at once (one column per point), splitting the batch
  whenever points disagree on the degree of the next remainder.

Convention for ``S_q``: when ``p > q`` it is ``lc(Q)^(p-q-1) * Q``.  When
``p == q`` the chain stores ``Q`` itself and the principal coefficient
``s_q`` is taken to be 1; downstream code never needs ``S_q`` divided by
``lc(Q)`` outside a context where that initial is invertible.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping

import numpy as np

from .errors import IndexRangeError, InvalidDivisorError, NoMainVariableError, PreconditionError
from .mpoly import MultiPoly, exact_div, prem_var


def _check_pair(P: MultiPoly, Q: MultiPoly, y):
    P._check(Q)
    if y is None:
        y = P.mvar
        if y is None:
            raise NoMainVariableError("constant polynomial has no main variable")
    y = P.ring.index(y)
    p, q = P.degree(y), Q.degree(y)
    if q < 1:
        raise InvalidDivisorError("Q must have positive degree in the main variable")
    if p < q:
        raise PreconditionError(f"need deg(P) >= deg(Q), got {p} < {q}")
    return y, p, q


# ---------------------------------------------------------------------------
# determinantal oracle

def _bareiss_last_column(M: list[list[MultiPoly]], ring) -> list[MultiPoly]:
    """Determinants of the square minors ``M[:, :m-1] | M[:, c]`` for every trailing ``c``.

    ``M`` has ``m`` rows and at least ``m`` columns.  One fraction-free
    elimination of the first ``m - 1`` columns serves all the minors.
    """
    m = len(M)
    extra = len(M[0]) - (m - 1) if M else 0
    if m == 0:
        return [ring.one]
    M = [row[:] for row in M]
    sign = 1
    prev = ring.one
    for k in range(m - 1):
        if M[k][k].is_zero():
            for r in range(k + 1, m):
                if not M[r][k].is_zero():
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return [ring.zero] * extra
        for i in range(k + 1, m):
            for j in range(k + 1, len(M[i])):
                M[i][j] = exact_div(M[k][k] * M[i][j] - M[i][k] * M[k][j], prev)
        prev = M[k][k]
    out = M[m - 1][m - 1:]
    return [-d for d in out] if sign < 0 else out


def dpol_subres_oracle(P: MultiPoly, Q: MultiPoly, d: int, y=None) -> MultiPoly:
    """``S_d(P, Q)`` as the determinantal polynomial of the Sylvester-type matrix."""
    y, p, q = _check_pair(P, Q, y)
    if not 0 <= d < q:
        raise IndexRangeError(f"subresultant index {d} outside [0, {q})")
    ring = P.ring
    ncols = p + q - d
    rows = []
    pc, qc = P.coeffs(y), Q.coeffs(y)
    # column c holds the coefficient of y^(ncols - 1 - c)
    for coeffs, deg, count in ((pc, p, q - d), (qc, q, p - d)):
        for k in range(count - 1, -1, -1):
            row = [ring.zero] * ncols
            for j, c in enumerate(coeffs):
                row[ncols - 1 - (j + k)] = c
            rows.append(row)
    out = ring.zero
    for i, det in enumerate(_bareiss_last_column(rows, ring)):
        out = out + det.shift(y, d - i)
    return out


def sylvester_resultant(P: MultiPoly, Q: MultiPoly, y=None) -> MultiPoly:
    """Determinant of the Sylvester matrix (test oracle)."""
    return dpol_subres_oracle(P, Q, 0, y)


# ---------------------------------------------------------------------------
# relation-driven chain over k[x][y]

@dataclass
class SubresChain:
    """Subresultants ``S_0 .. S_q`` of ``P, Q`` with respect to ``y``."""

    P: MultiPoly
    Q: MultiPoly
    y: int
    p: int
    q: int
    S: list = dc_field(default_factory=list)

    @property
    def ring(self):
        return self.P.ring

    @property
    def delayed_inverse(self) -> bool:
        """True when ``S_q`` is stored as ``Q`` (equal degrees)."""
        return self.p == self.q

    def __getitem__(self, j: int) -> MultiPoly:
        if not 0 <= j <= self.q:
            raise IndexRangeError(f"subresultant index {j} outside [0, {self.q}]")
        return self.S[j]

    def principal(self, j: int) -> MultiPoly:
        """``s_j``, the coefficient of ``y^j`` in ``S_j``."""
        if j == self.q:
            return self.Q.lc(self.y) ** (self.p - self.q)
        return self[j].coeff(self.y, j)

    def resultant(self) -> MultiPoly:
        return self.S[0]


def subres_chain_classical(P: MultiPoly, Q: MultiPoly, y=None) -> SubresChain:
    y, p, q = _check_pair(P, Q, y)
    ring = P.ring
    S = [ring.zero] * (q + 1)
    lcq = Q.lc(y)
    S[q] = Q * lcq ** (p - q - 1) if p > q else Q
    S[q - 1] = prem_var(P, -Q, y)[0]
    d, Sd, sd, first = q, S[q], lcq ** (p - q), True
    while True:
        A = S[d - 1]
        if A.is_zero():
            break
        e = A.degree(y)
        if e < d - 1:
            S[e] = exact_div(A.lc(y) ** (d - e - 1) * A, sd ** (d - e - 1))
        if e == 0:
            break
        if first:
            S[e - 1] = exact_div(prem_var(Q, -A, y)[0], lcq ** ((p - q) * (q - e) + 1))
        else:
            S[e - 1] = exact_div(prem_var(Sd, -A, y)[0], sd ** (d - e + 1))
        first = False
        d, Sd = e, S[e]
        sd = Sd.lc(y)
    return SubresChain(P, Q, y, p, q, S)


def resultant(A: MultiPoly, B: MultiPoly, y) -> MultiPoly:
    """``res(A, B, y)`` for arbitrary degrees in ``y``."""
    y = A.ring.index(y)
    if A.is_zero() or B.is_zero():
        return A.ring.zero
    m, n = A.degree(y), B.degree(y)
    if n == 0:
        return B ** m
    if m == 0:
        return A ** n
    if m >= n:
        return subres_chain_classical(A, B, y).S[0]
    r = subres_chain_classical(B, A, y).S[0]
    return -r if (m * n) % 2 else r


def specialize_check(P: MultiPoly, Q: MultiPoly, assignment: Mapping, y=None) -> dict:
    """Compare ``S_d`` of specialized inputs with specialized ``S_d``, for every ``d``."""
    y, p, q = _check_pair(P, Q, y)
    for name, poly in (("P", P), ("Q", Q)):
        if poly.lc(y).substitute(assignment).is_zero():
            raise PreconditionError(f"assignment cancels the leading coefficient of {name}")
    full = subres_chain_classical(P, Q, y)
    special = subres_chain_classical(P.substitute(assignment), Q.substitute(assignment), y)
    return {j: special.S[j] == full.S[j].substitute(assignment) for j in range(q + 1)}


# ---------------------------------------------------------------------------
# batched chains over F_p

def _lazy_budget(F) -> int:
    """How many unreduced multiply-subtract steps an int64 row can absorb."""
    if F.dtype is object:
        return 1 << 30
    return max(1, ((1 << 63) - 1 - F.p) // (F.p - 1) ** 2)


def _rem_scaled(a, b, inv_lb, scale, F, budget):
    """``scale * (a mod b)`` column-wise over F_p.

    ``a`` has shape (m+1, N), ``b`` (k+1, N); ``inv_lb`` inverts ``b[k]``.
    Since ``prem(a, b) = lc(b)^(m-k+1) * (a mod b)``, callers fold the
    pseudo-division factor into ``scale``.
    """
    p = F.p
    m, k = a.shape[0] - 1, b.shape[0] - 1
    r = a.copy()
    bl = b[:k]
    pending = 0
    for i in range(m, k - 1, -1):
        c = (r[i] % p) * inv_lb % p
        if k:
            if pending == budget:
                r[i - k:i] %= p
                pending = 0
            r[i - k:i] -= c * bl
            pending += 1
    return (r[:k] % p) * scale % p


def _col_degrees(a: np.ndarray) -> np.ndarray:
    nz = a != 0
    L = a.shape[0]
    if L == 0:
        return np.full(a.shape[1], -1)
    last = L - 1 - np.argmax(nz[::-1], axis=0)
    return np.where(nz.any(axis=0), last, -1)


def batch_chain(Pv: np.ndarray, Qv: np.ndarray, F) -> list[np.ndarray]:
    """Subresultant chains of many univariate pairs over ``F_p``.

    ``Pv`` has shape (p+1, N) and ``Qv`` shape (q+1, N), lowest degree first,
    with nonzero last rows.  Returns ``tables`` where ``tables[j]`` has shape
    (j+1, N) and holds ``S_j`` at every column.
    """
    pmod = F.p
    p, q = Pv.shape[0] - 1, Qv.shape[0] - 1
    N = Pv.shape[1]
    if q < 1 or p < q:
        raise PreconditionError("need deg(P) >= deg(Q) >= 1")
    budget = _lazy_budget(F)
    dt = Pv.dtype
    tables = [F.zeros((j + 1, N)) if dt == object else np.zeros((j + 1, N), dtype=dt)
              for j in range(q + 1)]
    lcq = Qv[q]
    tables[q][:] = Qv * F.pow_array(lcq, p - q - 1) % pmod if p > q else Qv
    inv_lcq = F.inv_array(lcq)
    s_q = F.pow_array(lcq, p - q)
    # prem(P, -Q) = (-lc Q)^(p-q+1) * (P mod Q)
    tables[q - 1][:] = _rem_scaled(Pv, Qv, inv_lcq, F.pow_array((-lcq) % pmod, p - q + 1), F, budget)

    # work items: (columns, d, S_d values, s_d, first block?); columns is a
    # slice while the whole batch still shares one degree pattern
    stack = [(slice(None), q, tables[q], s_q, F.pow_array(inv_lcq, p - q), True)]
    while stack:
        cols, d, Sd, sd, inv_sd_all, first = stack.pop()
        A = tables[d - 1][:, cols]
        degs = _col_degrees(A)
        groups = np.unique(degs)
        for e in groups:
            e = int(e)
            if e < 0:
                continue
            if len(groups) == 1:
                sel, gcols = slice(None), cols
            else:
                sel = np.nonzero(degs == e)[0]
                gcols = sel if isinstance(cols, slice) else cols[sel]
            Ag = A[: e + 1, sel]
            sd_g = sd[sel]
            la = Ag[e]
            inv_sd = inv_sd_all[sel]
            if e == 0:
                if d > 1:
                    tables[0][:, gcols] = Ag * F.pow_array(la * inv_sd % pmod, d - 1) % pmod
                continue
            inv_la = F.inv_array(la)
            if e < d - 1:
                fac = F.pow_array(la * inv_sd % pmod, d - e - 1)
                Se = Ag * fac % pmod
                tables[e][:, gcols] = Se
                inv_se = inv_la * F.pow_array(sd_g * inv_la % pmod, d - e - 1) % pmod
            else:
                Se, inv_se = Ag, inv_la
            neg_la = (-la) % pmod
            # prem(X, -A) = (-lc A)^(deg X - e + 1) * (X mod A)
            if first:
                scal = F.pow_array(neg_la, q - e + 1) * F.pow_array(inv_lcq[gcols], (p - q) * (q - e) + 1) % pmod
                rem = _rem_scaled(Qv[:, gcols], Ag, inv_la, scal, F, budget)
            else:
                scal = F.pow_array(neg_la * inv_sd % pmod, d - e + 1)
                rem = _rem_scaled(Sd[:, sel], Ag, inv_la, scal, F, budget)
            tables[e - 1][:, gcols] = rem
            stack.append((gcols, e, Se, Se[e], inv_se, False))
    return tables
