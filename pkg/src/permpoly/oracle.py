"""Brute-force ground truth over a whole (small) field.

Every check here works on value tables: a map on F_{q^n} is an int64 array
``t`` with ``t[code(x)] = code(f(x))``.  Objects exposing ``table()`` are used
directly; plain callables on :class:`Elem` are tabulated point by point.
"""

from __future__ import annotations

import math
from functools import cache
from typing import Callable, Optional, Union

import numpy as np

from .ffield import Elem, FieldCtx, SizeCap, frobenius

QM_CAP = 1 << 10
LINEAR_CAP = 1 << 7
EXHAUSTIVE_CAP = 1 << 24


class RoundTripFailure(AssertionError):
    pass


class BadParameter(ValueError):
    pass


MapLike = Union[np.ndarray, Callable[[Elem], Elem]]


def as_table(f: MapLike, ctx: FieldCtx) -> np.ndarray:
    if isinstance(f, np.ndarray):
        t = f
    elif hasattr(f, "table"):
        t = f.table()
    else:
        t = np.fromiter((f(x).code for x in ctx.elements()), dtype=np.int64, count=ctx.order)
    if t.shape != (ctx.order,):
        raise ValueError("table has the wrong length for this field")
    return np.asarray(t, dtype=np.int64)


def _cap(ctx: FieldCtx, cap: int):
    if ctx.order > cap:
        raise SizeCap(f"field of order {ctx.order} exceeds the search cap {cap}")


def is_bijection_exhaustive(f: MapLike, ctx: FieldCtx) -> bool:
    _cap(ctx, EXHAUSTIVE_CAP)
    t = as_table(f, ctx)
    seen = np.zeros(ctx.order, dtype=bool)
    seen[t] = True
    return bool(seen.all())


def verify_inverse(f: MapLike, g: MapLike, ctx: FieldCtx) -> bool:
    """True iff g(f(x)) = x for every x."""
    _cap(ctx, EXHAUSTIVE_CAP)
    tf = as_table(f, ctx)
    tg = as_table(g, ctx)
    return bool(np.array_equal(tg[tf], np.arange(ctx.order)))


def roots_in_mu(kind: str, A: Elem, ctx: FieldCtx) -> list[Elem]:
    """Roots on the unit circle of the polynomials of the two char-2 lemmas.

    lemma31: X^(q+1) + (A+1) X + A,   A != 0
    lemma32: X^(q+1) + (A+1) X^q + A, A in F_q^*
    """
    if ctx.p != 2 or ctx.n != 3:
        raise BadParameter("root counts are defined for q = 2^m, n = 3")
    if not A:
        raise BadParameter("A must be nonzero")
    v = ctx.vec
    mu = v.unit_circle_codes
    xq = v.frob(mu, 1)
    lead = v.mul(xq, mu)
    A1 = (A + 1).code
    if kind == "lemma31":
        vals = v.add(v.add(lead, v.mul_const(mu, A1)), np.full_like(mu, A.code))
    elif kind == "lemma32":
        if frobenius(A, 1) != A:
            raise BadParameter("A must lie in F_q for lemma32")
        vals = v.add(v.add(lead, v.mul_const(xq, A1)), np.full_like(mu, A.code))
    else:
        raise BadParameter(f"unknown kind {kind!r}")
    return [ctx(int(c)) for c in mu[vals == 0]]


def qm_search(f: MapLike, g: MapLike, ctx: FieldCtx) -> Optional[tuple[Elem, Elem, int]]:
    """First (a, b, d) with f(x) = a*g(b*x^d) for all x, gcd(d, |F|-1) = 1.

    Witnesses are ordered by (d, code(a), code(b)) over 1 <= d <= |F| - 2.
    """
    _cap(ctx, QM_CAP)
    tf = as_table(f, ctx)
    tg = as_table(g, ctx)
    v = ctx.vec
    N = ctx.order - 1
    nz_f = tf != 0
    for d in range(1, max(N, 2)):
        if math.gcd(d, N) != 1:
            continue
        xd = v.pow_const(v.all, d)
        hits = []
        for b in range(1, ctx.order):
            h = tg[v.mul_const(xd, b)]
            nz_h = h != 0
            if not np.array_equal(nz_f, nz_h):
                continue
            if not nz_h.any():
                hits.append((1, b))
                continue
            idx = int(np.argmax(nz_h))
            a = v.mul(tf[idx], v.pow_const(h[idx], -1))
            a = int(a)
            if np.array_equal(v.mul_const(h, a), tf):
                hits.append((a, b))
        if hits:
            a, b = min(hits)
            return ctx(a), ctx(b), d
    return None


@cache
def linearized_permutations(ctx: FieldCtx):
    """All invertible q-linearized polynomials with their value tables.

    Ordered by coefficient tuple with the X^(q^(n-1)) coefficient most
    significant, so the identity comes first.
    """
    from .qpoly import LinearizedPoly

    _cap(ctx, LINEAR_CAP)
    v = ctx.vec
    n = ctx.n
    order = ctx.order
    frob = [v.frob_tables[j] for j in range(n)]
    # all coefficient tuples, lowest coefficient varying fastest
    grid = np.indices((order,) * n).reshape(n, -1)[::-1]
    out = []
    chunk = max(1, (1 << 20) // order)
    for start in range(0, grid.shape[1], chunk):
        cs = grid[:, start:start + chunk]
        T = np.zeros((cs.shape[1], order), dtype=np.int64)
        for j in range(n):
            T = v.add(T, v.mul(cs[j][:, None], frob[j][None, :]))
        ok = (T[:, 1:] != 0).all(axis=1)
        for k in np.flatnonzero(ok):
            L = LinearizedPoly.of(ctx, [int(c) for c in cs[:, k]])
            out.append((L, T[k]))
    return out


def linear_search(f: MapLike, g: MapLike, ctx: FieldCtx):
    """First (A1, A2) of linearized permutations with f = A2 o g o A1."""
    _cap(ctx, LINEAR_CAP)
    tf = as_table(f, ctx)
    tg = as_table(g, ctx)
    perms = linearized_permutations(ctx)
    index = {t.tobytes(): i for i, (_, t) in enumerate(perms)}
    for L1, t1 in perms:
        h = tg[t1]
        if np.unique(h).size == ctx.order:
            cand = np.empty_like(tf)
            cand[h] = tf
            i = index.get(cand.tobytes())
            if i is not None:
                return L1, perms[i][0]
            continue
        for L2, t2 in perms:
            if np.array_equal(t2[h], tf):
                return L1, L2
    return None
