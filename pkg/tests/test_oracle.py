import math
import random

import numpy as np
import pytest

from permpoly.families import Family, FamilyParams, construct
from permpoly.ffield import SizeCap, enumerate_unit_circle, make_field
from permpoly.oracle import (
    BadParameter,
    is_bijection_exhaustive,
    linear_search,
    linearized_permutations,
    qm_search,
    roots_in_mu,
    verify_inverse,
)
from permpoly.qpoly import LinearizedPoly


def test_bijection_basics():
    ctx = make_field(3, 1, 3)
    assert is_bijection_exhaustive(lambda x: x, ctx)
    assert not is_bijection_exhaustive(lambda x: ctx.one, ctx)
    f8 = make_field(2, 1, 3)
    assert is_bijection_exhaustive(construct(FamilyParams(Family.F5, f8.gen, 1)), f8)


def test_verify_inverse_basics():
    ctx = make_field(3, 1, 3)
    assert verify_inverse(lambda x: x, lambda x: x, ctx)
    f = lambda x: x ** 5 + ctx.one  # noqa: E731  gcd(5, 26) = 1
    assert is_bijection_exhaustive(f, ctx)
    assert not verify_inverse(f, f, ctx)


def test_table_length_checked():
    ctx = make_field(2, 1, 3)
    with pytest.raises(ValueError):
        is_bijection_exhaustive(np.arange(7), ctx)


@pytest.mark.parametrize("m", [1, 2])
def test_lemma31_one_is_always_a_root(m):
    ctx = make_field(2, m, 3)
    for A in list(ctx.elements())[1:]:
        assert ctx.one in roots_in_mu("lemma31", A, ctx)


def test_lemma31_generator_has_three_roots():
    ctx = make_field(2, 1, 3)
    g = ctx.gen
    assert not (g ** 3 + g + 1)
    assert len(roots_in_mu("lemma31", g, ctx)) == 3


def test_lemma32_f8():
    ctx = make_field(2, 3, 3)
    for c in range(1, 8):
        assert roots_in_mu("lemma32", ctx.from_base(c), ctx) == [ctx.one]


def test_lemma32_q4_exceptions():
    # when A^2+A+1 = 0 in F_4 the single-root statement is not claimed; it indeed fails
    ctx = make_field(2, 2, 3)
    for c in range(1, 4):
        A = ctx.from_base(c)
        roots = roots_in_mu("lemma32", A, ctx)
        assert (roots == [ctx.one]) == bool(A * A + A + 1)


def test_roots_bad_parameters():
    f8 = make_field(2, 1, 3)
    with pytest.raises(BadParameter):
        roots_in_mu("lemma31", f8.zero, f8)
    with pytest.raises(BadParameter):
        roots_in_mu("lemma32", f8.gen, f8)
    with pytest.raises(BadParameter):
        roots_in_mu("other", f8.one, f8)
    with pytest.raises(BadParameter):
        roots_in_mu("lemma31", make_field(3, 1, 3).one, make_field(3, 1, 3))


def test_qm_trivial_witness():
    ctx = make_field(2, 1, 3)
    t = construct(FamilyParams(Family.F5, ctx.gen, 1)).table()
    a, b, d = qm_search(t, t, ctx)
    assert (a, b, d) == (ctx.one, ctx.one, 1)


@pytest.mark.parametrize("p", [2, 3])
def test_qm_planted_scalars(p):
    ctx = make_field(p, 1, 3)
    v = ctx.vec
    rnd = random.Random(p)
    for _ in range(30):
        g = np.array(rnd.sample(range(ctx.order), ctx.order), dtype=np.int64)
        c, e = rnd.randrange(1, ctx.order), rnd.randrange(1, ctx.order)
        f = v.mul_const(g[v.mul_const(v.all, e)], c)
        a, b, d = qm_search(f, g, ctx)
        assert d == 1
        assert np.array_equal(f, v.mul_const(g[v.mul_const(v.all, b.code)], a.code))


def test_qm_none_for_non_equivalent():
    ctx = make_field(3, 1, 3)
    ident = np.arange(27, dtype=np.int64)
    const = np.zeros(27, dtype=np.int64)
    assert qm_search(ident, const, ctx) is None


def test_linear_permutation_counts():
    # |GL_3(F_q)| = (q^3-1)(q^3-q)(q^3-q^2)
    assert len(linearized_permutations(make_field(2, 1, 3))) == 7 * 6 * 4
    ctx = make_field(3, 1, 3)
    perms = linearized_permutations(ctx)
    assert len(perms) == 26 * 24 * 18
    L0, t0 = perms[0]
    assert L0 == LinearizedPoly.identity(ctx)
    for L, t in perms[:: 997]:
        assert L.is_permutation() and np.array_equal(L.table(), t)


def test_linear_trivial_and_planted():
    ctx = make_field(2, 1, 3)
    g = construct(FamilyParams(Family.F6, ctx.gen, 1)).table()
    L1, L2 = linear_search(g, g, ctx)
    assert L1 == L2 == LinearizedPoly.identity(ctx)
    perms = linearized_permutations(ctx)
    rnd = random.Random(7)
    nonlin = np.array([0, 1, 3, 2, 6, 7, 5, 4], dtype=np.int64)
    nonlin[[5, 6]] = nonlin[[6, 5]]
    for _ in range(20):
        (A1, t1), (A2, t2) = rnd.choice(perms), rnd.choice(perms)
        f = t2[nonlin[t1]]
        B1, B2 = linear_search(f, nonlin, ctx)
        assert np.array_equal(B2.table()[nonlin[B1.table()]], f)


def test_search_caps():
    big = make_field(2, 4, 3)
    t = np.arange(big.order, dtype=np.int64)
    with pytest.raises(SizeCap):
        qm_search(t, t, big)
    mid = make_field(2, 3, 3)
    t = np.arange(mid.order, dtype=np.int64)
    with pytest.raises(SizeCap):
        linear_search(t, t, mid)


def test_f5_f6_over_f8_are_equivalent():
    """Every a != 1 gives a QM witness between f5 and f6 over F_8, checked pointwise."""
    ctx = make_field(2, 1, 3)
    for a in enumerate_unit_circle(ctx)[1:]:
        f5 = construct(FamilyParams(Family.F5, a, 1))
        f6 = construct(FamilyParams(Family.F6, a, 1))
        w = qm_search(f5, f6, ctx)
        assert w is not None
        c, b, d = w
        assert math.gcd(d, 7) == 1
        assert all(f5(x) == c * f6(b * x ** d) for x in ctx.elements())
        # f1 with k = 1 is literally f5 in characteristic 2
        f1 = construct(FamilyParams(Family.F1, a, 1, 1))
        assert np.array_equal(f1.table(), f5.table())
