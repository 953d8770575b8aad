import numpy as np
import pytest

from _support import (
    all_points,
    gcd_pair_problems,
    matches_chain_row,
    quasi_component,
    rand_poly,
    random_tower,
    values,
    zero_mask,
)
from fasttri.errors import BranchLimitError, PreconditionError
from fasttri.mpoly import PolyRing, iter_res, prem_chain
from fasttri.regchain import RegularChain, normal_form
from fasttri.regops import NULL, REGULAR, Context, regular_gcd, regularize_dim0, regularize_initial_dim0
from fasttri.subres import subres_chain_classical

R5 = PolyRing(5, ["x1", "x2"])
a5, b5 = R5.gens()
T5 = RegularChain([a5 ** 2 - 1])


def show(pairs):
    return [(str(x), str(t)) for x, t in pairs]


def test_regularize_initial_examples():
    T = RegularChain([a5 ** 2 - 1])
    P = b5 ** 2 + a5 * b5 + 7
    assert show(regularize_initial_dim0(P, T)) == [(str(normal_form(P, T)), str(T))]
    assert show(regularize_initial_dim0(a5 * b5 + 1, T)) == [("x1*x2 + 1", "{ x1^2 - 1 }")]
    assert show(regularize_initial_dim0((a5 - 1) * b5 + 3, T)) == [
        ("-2", "{ x1 - 1 }"), ("-2*x2 - 2", "{ x1 + 1 }")]


def test_regularize_examples():
    assert show(regularize_dim0(R5.one, T5)) == [("regular", "{ x1^2 - 1 }")]
    assert show(regularize_dim0(a5 - 1, T5)) == [("null", "{ x1 - 1 }"), ("regular", "{ x1 + 1 }")]
    assert show(regularize_dim0(a5, T5)) == [("regular", "{ x1^2 - 1 }")]


def test_regularize_empty_chain():
    empty = RegularChain([], R5)
    assert show(regularize_dim0(R5.const(3), empty)) == [("regular", "{ }")]
    assert show(regularize_dim0(R5.zero, empty)) == [("null", "{ }")]


def test_regular_gcd_examples():
    R = PolyRing(5, ["x1", "y"])
    x, y = R.gens()
    T = RegularChain([x ** 2 - 1])
    P = y ** 2 + x * y + 2
    assert show(regular_gcd(P, P, T)) == [(str(P), str(T))]
    assert show(regular_gcd(y - x, y - 1, T)) == [("y - 1", "{ x1 - 1 }"), ("-2", "{ x1 + 1 }")]
    R = PolyRing(7, ["x1", "y"])
    x, y = R.gens()
    T = RegularChain([x ** 2 - 1])
    P, Q = y ** 2 + (1 - x) * y - x, y ** 2 - (1 + x) * y + x
    assert show(regular_gcd(P, Q, T)) == [("y - x1", "{ x1^2 - 1 }")]
    assert show(regular_gcd(P, Q, T, Context(assume_radical=True))) == [("y - x1", "{ x1^2 - 1 }")]


def test_regular_gcd_preconditions():
    R = PolyRing(5, ["x1", "y"])
    x, y = R.gens()
    T = RegularChain([x ** 2 - 1])
    with pytest.raises(PreconditionError):
        regular_gcd(y - x, x + 1, T)
    with pytest.raises(PreconditionError):
        regular_gcd(x - 1, x + 1, T)


def _check_split(P, T, split, pts=None):
    """Tags, degree accounting and (optionally) the rational point partition."""
    total = 0
    for tag, Ti in split:
        assert Ti.zero_dimensional and Ti.normalized and Ti.mvars == T.mvars
        null = prem_chain(P, Ti.polys).is_zero()
        regular = not iter_res(P, Ti.polys).is_zero()
        assert null != regular
        assert (tag == NULL) == null and (tag == REGULAR) == regular
        for t in T.polys:
            assert prem_chain(t, Ti.polys).is_zero()
        total += int(np.prod(Ti.main_degrees()))
    assert total == int(np.prod(T.main_degrees()))
    if pts is None:
        return
    V = zero_mask(T.polys, pts)
    cover = np.zeros_like(V)
    Pv = values(P, pts)
    for tag, Ti in split:
        Vi = zero_mask(Ti.polys, pts)
        assert not (Vi & ~V).any()
        cover |= Vi
        if tag == NULL:
            assert (Pv[Vi] == 0).all()
        else:
            assert (Pv[Vi] != 0).all()
    assert (cover == V).all()


@pytest.mark.parametrize("p,degs", [(5, [3, 2]), (7, [2, 3]), (11, [2, 2, 2]), (13, [3, 2, 1])])
def test_regularize_brute_force(p, degs):
    rng = np.random.default_rng(p)
    R = PolyRing(p, [f"x{i + 1}" for i in range(len(degs))])
    pts = all_points(p, len(degs))
    for _ in range(15):
        T = random_tower(R, degs, rng)
        P = rand_poly(R, [d + 1 for d in degs], rng, 0.5)
        if rng.random() < 0.5:
            # force a split: share a factor with the bottom polynomial
            f = R.var(0) - int(rng.integers(0, p))
            T = RegularChain([f * (R.var(0) - int(rng.integers(0, p)))] + list(T.polys[1:]), R)
            P = P * f
        ctx = Context(seed=1)
        _check_split(P, T, regularize_dim0(P, T, ctx), pts)


def test_regularize_initial_postconditions():
    rng = np.random.default_rng(4)
    R = PolyRing(7, ["x1", "x2", "x3"])
    for _ in range(20):
        T = random_tower(R, [2, 2], rng)
        P = rand_poly(R, [2, 2, 3], rng, 0.6)
        for p_i, Ti in regularize_initial_dim0(P, T):
            assert normal_form(P - p_i, Ti).is_zero() or P.degree(2) > p_i.degree(2)
            if not p_i.is_constant():
                assert not iter_res(p_i.init(), Ti.polys).is_zero()


@pytest.mark.parametrize("radical", [False, True])
def test_regular_gcd_random(radical):
    rng = np.random.default_rng(17 + radical)
    p = 101
    R = PolyRing(p, ["x1", "y"])
    x, y = R.gens()
    for trial in range(25):
        T = random_tower(R, [int(rng.integers(1, 5))], rng)
        G0 = y - rand_poly(R, [2, 0], rng)
        P = rand_poly(R, [2, 2], rng) * G0 + y ** 3
        Q = rand_poly(R, [2, 1], rng) * G0 + y ** 2
        ctx = Context(assume_radical=radical, seed=trial)
        seq = regular_gcd(P, Q, T, ctx)
        total = 0
        for G, Ti in seq:
            assert gcd_pair_problems(P, Q, G, Ti, 1) == []
            total += int(np.prod(Ti.main_degrees()))
        assert total == int(np.prod(T.main_degrees()))
        for rec in ctx.trace:
            if rec.G.degree(1) > 0:
                assert matches_chain_row(rec.G, rec.raw, rec.chain, 1)
                assert rec.raw == subres_chain_classical(rec.P, rec.Q).S[rec.index]


def test_regular_gcd_brute_force():
    p = 7
    rng = np.random.default_rng(3)
    R = PolyRing(p, ["x1", "y"])
    pts = all_points(p, 2)
    for trial in range(30):
        T = random_tower(R, [int(rng.integers(1, 4))], rng)
        P = rand_poly(R, [2, 2], rng) * (R.var(1) - rand_poly(R, [1, 0], rng))
        Q = rand_poly(R, [2, 1], rng) * (R.var(1) - rand_poly(R, [1, 0], rng))
        if P.degree(1) < 1 or Q.degree(1) < 1:
            continue
        P, Q = P + R.var(1) ** 4, Q + R.var(1) ** 3
        common = zero_mask([P, Q], pts)
        for G, Ti in regular_gcd(P, Q, T, Context(seed=trial)):
            assert gcd_pair_problems(P, Q, G, Ti, 1) == []
            # above every rational root of T_i the common roots in y are the roots of G
            base = zero_mask(Ti.polys, pts)
            G_zero = values(G, pts) == 0
            assert (common[base] == G_zero[base]).all()


def test_determinism():
    rng = np.random.default_rng(12)
    R = PolyRing(101, ["x1", "x2", "x3"])
    T = random_tower(R, [4, 3], rng)
    f = R.var(0) - 5
    T = RegularChain([T.polys[0] * f, T.polys[1]], R)
    P = rand_poly(R, [3, 3, 0], rng) * f
    runs = [show(regularize_dim0(P, T, Context(seed=7))) for _ in range(2)]
    assert runs[0] == runs[1] and len(runs[0]) >= 2


def test_branch_limit():
    R = PolyRing(7, ["x1"])
    x = R.var("x1")
    T = RegularChain([(x - 1) * (x - 2) * (x - 3) * (x - 4)])
    with pytest.raises(BranchLimitError):
        regularize_dim0((x - 1) * (x - 3), T, Context(max_expansions=0))
