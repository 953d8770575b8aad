import numpy as np
import pytest

from _support import rand_pair, rand_poly
from fasttri import modarith as ma
from fasttri.errors import IndexRangeError, PrimeTooSmallError, RetriesExhaustedError
from fasttri.mpoly import PolyRing
from fasttri.scube import (
    ClassicalCube,
    GridConfig,
    build_cube,
    build_scube,
    degree_bounds,
    load_dump,
    scube_resultant,
    scube_subres_full,
    scube_subres_lc,
)
from fasttri.subres import subres_chain_classical, sylvester_resultant

R3 = PolyRing(998244353, ["x1", "x2", "x3"])
x1, x2, x3 = R3.gens()
P1 = x2 ** 2 * x3 ** 2 - x1 ** 4
Q1 = x1 ** 2 * x3 ** 2 - x2 ** 4


def test_example_pair():
    s = build_scube(P1, Q1, "x3")
    assert all(n >= 13 for n in s.grid.shape)
    assert scube_resultant(s) == (x1 ** 6 - x2 ** 6) ** 2
    assert scube_subres_lc(s, 1).is_zero()
    assert scube_subres_full(s, 1) == x1 ** 6 - x2 ** 6
    assert scube_subres_lc(s, 0) == scube_resultant(s)


def test_pointwise_values_linear_pair():
    R = PolyRing(7, ["x1", "y"])
    a, y = R.gens()
    s = build_scube(y - a, y - 1, "y", GridConfig(use_ntt=False))
    assert s.shift == (0,)
    for t, pt in enumerate(s.grid.points[0]):
        assert int(s.values(0)[0][t]) == (int(pt) - 1) % 7
    assert scube_resultant(s) == sylvester_resultant(y - a, y - 1)


def test_exact_division_gives_zero_tail():
    R = PolyRing(101, ["a", "y"])
    a, y = R.gens()
    Q = y ** 2 + a * y + 1
    s = build_scube(Q * (y + a + 3), Q, "y")
    for j in range(2):
        assert not np.asarray(s.values(j)).any()
        assert scube_subres_full(s, j).is_zero()


def test_small_examples():
    R = PolyRing(7, ["x1", "x2"])
    a, b = R.gens()
    assert scube_resultant(build_scube(b - a, b + a, "x2")) == 2 * a
    U = PolyRing(7, ["y"])
    y = U.var("y")
    assert scube_resultant(build_scube(y, y + 1)) == U.one


def test_index_q_convention():
    rng = np.random.default_rng(11)
    R = PolyRing(998244353, ["a", "y"])
    P = rand_poly(R, [2, 5], rng, 1.0)
    Q = rand_poly(R, [2, 3], rng, 1.0)
    s = build_scube(P, Q)
    assert scube_subres_lc(s, 3) == Q.lc("y") ** 2
    assert scube_subres_full(s, 3) == Q.lc("y") * Q
    with pytest.raises(IndexRangeError):
        scube_subres_lc(s, 4)


@pytest.mark.parametrize("p,n,use_ntt", [(998244353, 1, True), (998244353, 2, True), (101, 1, False),
                                          (101, 2, False), (2 ** 61 - 1, 1, False), (998244353, 3, True)])
def test_full_matches_classical(p, n, use_ntt):
    rng = np.random.default_rng(p % 991 + n)
    R = PolyRing(p, [f"x{i}" for i in range(1, n + 1)] + ["y"])
    for trial in range(10):
        P, Q = rand_pair(R, rng, 2 if n < 3 else 1, 5 if n < 3 else 3)
        if trial % 3 == 0:
            G = rand_poly(R, [1] * n + [1], rng, 1.0)
            if G.degree("y") >= 1:
                P, Q = P * G, Q * G
        s = build_scube(P, Q, "y", GridConfig(use_ntt=use_ntt, seed=trial))
        ch = subres_chain_classical(P, Q)
        for j in range(ch.q + 1):
            full = scube_subres_full(s, j)
            assert full == ch.S[j], (trial, j)
            assert scube_subres_lc(s, j) == ch.principal(j)
            for i, b in enumerate(s.bounds):
                assert full.degree(i) <= b


def test_lc_first_agrees_with_full():
    rng = np.random.default_rng(21)
    R = PolyRing(998244353, ["a", "b", "y"])
    for _ in range(5):
        P, Q = rand_pair(R, rng, 2, 4)
        lazy = build_scube(P, Q)
        eager = build_scube(P, Q)
        for j in range(lazy.q_deg + 1):
            assert lazy.subres_lc(j) == eager.subres_full(j).coeff("y", j) or j == lazy.q_deg


def test_degree_bounds():
    assert degree_bounds(P1, Q1, 2) == [2 * 2 + 4 * 2, 4 * 2 + 2 * 2]


def test_shift_applied_when_initial_vanishes():
    R = PolyRing(101, ["a", "y"])
    a, y = R.gens()
    P, Q = a * y ** 2 + 1, y + a
    s = build_scube(P, Q, "y", GridConfig(use_ntt=False, seed=3))
    assert s.shift != (0,)
    assert scube_resultant(s) == sylvester_resultant(P, Q)
    assert scube_subres_full(s, 0) == subres_chain_classical(P, Q).S[0]


def test_prime_too_small_and_fallback():
    R = PolyRing(7, ["a", "y"])
    a, y = R.gens()
    P, Q = a ** 5 * y ** 2 + 1, a ** 3 * y + a + 1
    with pytest.raises(PrimeTooSmallError):
        build_scube(P, Q)
    cube = build_cube(P, Q)
    assert isinstance(cube, ClassicalCube)
    assert cube.resultant() == sylvester_resultant(P, Q)


def test_retries_exhausted_and_fallback():
    R = PolyRing(5, ["a", "y"])
    a, y = R.gens()
    P, Q = (a ** 4 - 1) * y + 1, y + 1  # initial vanishes on every nonzero point
    with pytest.raises(RetriesExhaustedError):
        build_scube(P, Q)
    assert build_cube(P, Q).resultant() == sylvester_resultant(P, Q)


def test_determinism_and_dump(tmp_path):
    rng = np.random.default_rng(8)
    R = PolyRing(998244353, ["a", "b", "y"])
    P, Q = rand_pair(R, rng, 2, 4)
    s1 = build_scube(P, Q, "y", GridConfig(seed=5))
    s2 = build_scube(P, Q, "y", GridConfig(seed=5))
    s1.dump(tmp_path / "one.bin")
    s2.dump(tmp_path / "two.bin")
    assert (tmp_path / "one.bin").read_bytes() == (tmp_path / "two.bin").read_bytes()
    back = load_dump(tmp_path / "one.bin")
    assert back["p"] == R.p and back["n"] == 2 and back["seed"] == 5
    assert list(back["bounds"]) == list(s1.bounds)
    assert list(back["shift"]) == list(s1.shift)
    for j, t in enumerate(s1.tables):
        assert np.array_equal(back["tables"][j], np.asarray(t, dtype=np.int64))


def test_univariate_cube_dump(tmp_path):
    U = PolyRing(101, ["y"])
    y = U.var("y")
    s = build_scube(y ** 3 + 2, y ** 2 + 5 * y)
    s.dump(tmp_path / "u.bin")
    back = load_dump(tmp_path / "u.bin")
    assert back["n"] == 0 and len(back["tables"]) == 3
    assert s.resultant() == sylvester_resultant(y ** 3 + 2, y ** 2 + 5 * y)


def test_grid_sizes():
    s = build_scube(P1, Q1, "x3", GridConfig(use_ntt=True))
    assert all(n == ma.next_pow2(b + 1) for n, b in zip(s.grid.shape, s.bounds))
    s = build_scube(P1, Q1, "x3", GridConfig(use_ntt=False, offset=7))
    assert all(n == b + 1 for n, b in zip(s.grid.shape, s.bounds))
    assert int(s.grid.points[0][0]) == 7


def test_small_field_avoids_initial_zeros():
    R = PolyRing(17, ["a", "b", "y"])
    a, b, y = R.gens()
    P, Q = a * b * y ** 2 + a + 1, (a - b) * y + 1
    s = build_scube(P, Q, "y", GridConfig(use_ntt=False, max_retries=0))
    assert s.shift == (0, 0)
    assert 0 not in [int(v) for v in s.grid.points[0]]
    ch = subres_chain_classical(P, Q)
    for j in range(2):
        assert scube_subres_full(s, j) == ch.S[j]
