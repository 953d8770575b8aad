"""Random systems and timing runs.

Families:

``dense``
    two random polynomials in ``x1, x2`` using every monomial of total
    degree at most ``d``; the coefficients of ``x2^d`` and ``x1^d`` are
    forced nonzero.
``split``
    a system whose solutions need several chains: over ``k = d // 2``
    distinct values ``a_i`` of ``x1`` the number of ``x2`` solutions is
    ``i + 1``.
``regularize``
    a random multiple of ``f(x1)`` regularized modulo a monic tower of main
    degrees ``(d, 2)`` whose first polynomial is ``f * g``, so the chain
    splits at least once.
"""

from __future__ import annotations

import csv
import time
from pathlib import Path
from typing import Iterable

import numpy as np

from .modarith import DEFAULT_PRIME
from .mpoly import MultiPoly, PolyRing
from .regchain import RegularChain
from .regops import Context, regularize_dim0
from .solver import triangularize_bivariate

FAMILIES = ("dense", "split", "regularize")
HEADER = ["family", "degree", "prime", "seed", "seconds", "chains"]


def random_dense(ring: PolyRing, d: int, rng: np.random.Generator) -> MultiPoly:
    p = ring.p
    terms = {}
    for i in range(d + 1):
        for j in range(d + 1 - i):
            terms[(i, j)] = int(rng.integers(0, p))
    for e in ((0, d), (d, 0)):
        while terms[e] == 0:
            terms[e] = int(rng.integers(0, p))
    return ring.from_dict(terms)


def split_system(ring: PolyRing, d: int, rng: np.random.Generator):
    """System with ``i + 1`` solutions in ``x2`` above the ``i``-th root of ``x1``."""
    p = ring.p
    x1, x2 = ring.gens()
    k = max(d // 2, 1)
    pts = [int(a) for a in rng.choice(min(p, 10 ** 6), size=k, replace=False)]
    roots = [int(b) for b in rng.integers(0, p, size=k)]
    vanish = ring.one
    for a in pts:
        vanish = vanish * (x1 - a)
    P = ring.zero
    for i, a in enumerate(pts):
        e = ring.one
        for j, b in enumerate(pts):
            if j != i:
                e = e * (x1 - b) * ring.field.inv(a - b)
        fib = ring.one
        for b in roots[: i + 1]:
            fib = fib * (x2 - b)
        P = P + e * fib
    r = int(rng.integers(1, p))
    Q = vanish + (x2 + r) * P
    return P, Q


def random_tower(ring: PolyRing, degrees: Iterable[int], rng: np.random.Generator) -> RegularChain:
    """Monic chain with main variables ``x1, x2, ...``; coefficients reduced below."""
    p = ring.p
    polys = []
    degs = list(degrees)
    for v, dv in enumerate(degs):
        shape = [1] * ring.nvars
        for w in range(v):
            shape[w] = degs[w]
        shape[v] = dv + 1
        arr = rng.integers(0, p, size=shape).astype(np.int64)
        idx = [slice(None)] * ring.nvars
        idx[v] = dv
        arr[tuple(idx)] = 0
        arr[tuple([0] * v + [dv] + [0] * (ring.nvars - v - 1))] = 1
        polys.append(MultiPoly(ring, ring.field.array(arr)))
    return RegularChain(polys, ring)


def run_case(family: str, degree: int, prime: int, seed: int):
    rng = np.random.default_rng([seed, degree])
    if family == "dense":
        ring = PolyRing(prime, ["x1", "x2"])
        P, Q = random_dense(ring, degree, rng), random_dense(ring, degree, rng)
        t0 = time.perf_counter()
        out = triangularize_bivariate(P, Q, Context(seed=seed))
    elif family == "split":
        ring = PolyRing(prime, ["x1", "x2"])
        P, Q = split_system(ring, degree, rng)
        t0 = time.perf_counter()
        out = triangularize_bivariate(P, Q, Context(seed=seed))
    elif family == "regularize":
        ring = PolyRing(prime, ["x1", "x2"])
        k = max(degree // 2, 1)
        f, g = random_tower(ring, [k], rng).polys[0], random_tower(ring, [max(degree - k, 1)], rng).polys[0]
        T = random_tower(ring, [degree, 2], rng)
        T = RegularChain([f * g, T.polys[1]], ring)
        P = f * random_dense(ring, degree, rng)
        t0 = time.perf_counter()
        out = regularize_dim0(P, T, Context(seed=seed))
    else:
        raise ValueError(f"unknown family {family!r}")
    return time.perf_counter() - t0, len(out)


def run_bench(families: Iterable[str], degrees: Iterable[int], out_path=None,
              prime: int = DEFAULT_PRIME, seed: int = 0, stream=None) -> list[dict]:
    """Time every (family, degree) pair and write CSV rows.

    An existing non-empty file is appended to without repeating the header.
    """
    rows = []
    fh = None
    if out_path is not None:
        path = Path(out_path)
        fresh = not path.exists() or path.stat().st_size == 0
        fh = open(path, "a", newline="")
        target = fh
    else:
        fresh = True
        target = stream
    try:
        writer = csv.DictWriter(target, fieldnames=HEADER) if target is not None else None
        if writer and fresh:
            writer.writeheader()
        for fam in families:
            for d in degrees:
                seconds, nchains = run_case(fam, d, prime, seed)
                row = {"family": fam, "degree": d, "prime": prime, "seed": seed,
                       "seconds": f"{seconds:.6f}", "chains": nchains}
                rows.append(row)
                if writer:
                    writer.writerow(row)
                    target.flush()
    finally:
        if fh:
            fh.close()
    return rows
