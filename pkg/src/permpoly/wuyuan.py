"""The Wu-Yuan permutation criterion and its compositional inverse.

A polynomial of the shape

    f(X) = A_1(X)^m_1 + u_2 A_2(X)^m_2 + ... + u_n A_n(X)^m_n

with each a_i of norm 1 over F_q permutes F_{q^n} iff gcd(m_1...m_n, q-1) = 1
and det(D_1) det(D_2) != 0.  Each A_i takes values on an F_q-line
{y : y^q = a_i^q y}, which is what makes the inverse explicit: the Frobenius
conjugates of y = f(x) are D_1 applied to (A_i(x)^m_i), and the vector of
A_i(x) is D_2 applied to (x^(q^(n-1)), ..., x^q, x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .ffield import Elem, FieldCtx, frobenius, in_unit_circle
from .oracle import RoundTripFailure, verify_inverse

MAX_N = 4


class WuYuanError(Exception):
    pass


class SingularMatrix(WuYuanError, ArithmeticError):
    pass


class NoSolution(WuYuanError, ValueError):
    pass


class IndexOutOfRange(WuYuanError, IndexError):
    pass


Matrix = list[list[Elem]]


# ---------------------------------------------------------------------------
# exact linear algebra


def mat_det(M: Matrix) -> Elem:
    """Determinant by elimination, first nonzero pivot in column order."""
    n = len(M)
    A = [list(row) for row in M]
    ctx = A[0][0].ctx
    det = ctx.one
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return ctx.zero
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det = det * A[col][col]
        inv = A[col][col].inv()
        for r in range(col + 1, n):
            if A[r][col]:
                f = A[r][col] * inv
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return det


def mat_inv(M: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises SingularMatrix."""
    n = len(M)
    ctx = M[0][0].ctx
    A = [list(row) + [ctx.one if i == j else ctx.zero for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        A[col], A[piv] = A[piv], A[col]
        inv = A[col][col].inv()
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    ctx = A[0][0].ctx
    return [
        [reduce(lambda s, t: s + t, (A[i][k] * B[k][j] for k in range(len(B))), ctx.zero) for j in range(len(B[0]))]
        for i in range(len(A))
    ]


# ---------------------------------------------------------------------------
# the canonical form


@dataclass(frozen=True)
class WuYuanSpec:
    a: tuple[Elem, ...]
    u: tuple[Elem, ...]
    mexp: tuple[int, ...]

    def __post_init__(self):
        ctx = self.a[0].ctx
        n = ctx.n
        if not 2 <= n <= MAX_N:
            raise ValueError(f"criterion supports 2 <= n <= {MAX_N}, got n = {n}")
        if not (len(self.a) == len(self.u) == len(self.mexp) == n):
            raise ValueError("a, u and mexp must all have length n")
        for ai in self.a:
            if not in_unit_circle(ai):
                raise ValueError(f"{ai!r} is not in the unit circle")
        if self.u[0] != ctx.one:
            raise ValueError("u_1 must be 1")
        if any(mi < 1 for mi in self.mexp):
            raise ValueError("exponents must be positive")

    @property
    def ctx(self) -> FieldCtx:
        return self.a[0].ctx

    @property
    def n(self) -> int:
        return self.ctx.n


def a_exponents(q: int, n: int) -> list[int]:
    """Exponents of a_i in A_i, coefficient j multiplying X^(q^(n-1-j))."""
    out = [0, 1]
    e = 1
    for j in range(2, n):
        e += q ** (n - j + 1)
        out.append(e)
    return out[:n]


def A_coeffs(ai: Elem) -> list[Elem]:
    """Coefficients of A_i, low to high: entry j multiplies X^(q^j)."""
    ctx = ai.ctx
    exps = a_exponents(ctx.q, ctx.n)
    return [ai ** e for e in reversed(exps)]


def eval_A(i: int, spec: WuYuanSpec, x: Elem) -> Elem:
    """A_i(x) for 1 <= i <= n."""
    if not 1 <= i <= spec.n:
        raise IndexOutOfRange(f"index {i} outside 1..{spec.n}")
    acc = x.ctx.zero
    for j, c in enumerate(A_coeffs(spec.a[i - 1])):
        acc = acc + c * frobenius(x, j)
    return acc


def A_table(i: int, spec: WuYuanSpec) -> np.ndarray:
    if not 1 <= i <= spec.n:
        raise IndexOutOfRange(f"index {i} outside 1..{spec.n}")
    v = spec.ctx.vec
    out = np.zeros(spec.ctx.order, dtype=np.int64)
    for j, c in enumerate(A_coeffs(spec.a[i - 1])):
        out = v.add(out, v.mul_const(v.frob_tables[j], c.code))
    return out


def build_D1(spec: WuYuanSpec) -> Matrix:
    q, n = spec.ctx.q, spec.n
    rows = []
    for j in range(n):
        e = sum(q ** t for t in range(1, j + 1))
        rows.append([frobenius(spec.u[i], j) * spec.a[i] ** (spec.mexp[i] * e) for i in range(n)])
    return rows


def build_D2(spec: WuYuanSpec) -> Matrix:
    exps = a_exponents(spec.ctx.q, spec.n)
    return [[ai ** e for e in exps] for ai in spec.a]


def dets(spec: WuYuanSpec) -> tuple[Elem, Elem]:
    return mat_det(build_D1(spec)), mat_det(build_D2(spec))


def gcd_condition(spec: WuYuanSpec) -> bool:
    return math.gcd(math.prod(spec.mexp), spec.ctx.q - 1) == 1


def is_pp(spec: WuYuanSpec) -> bool:
    if not gcd_condition(spec):
        return False
    d1, d2 = dets(spec)
    return bool(d1 * d2)


class Expanded:
    """x -> A_1(x)^m_1 + sum u_i A_i(x)^m_i, callable and tabulable."""

    def __init__(self, spec: WuYuanSpec):
        self.spec = spec
        self.ctx = spec.ctx

    def __call__(self, x: Elem) -> Elem:
        s = self.spec
        acc = x.ctx.zero
        for i in range(s.n):
            acc = acc + s.u[i] * eval_A(i + 1, s, x) ** s.mexp[i]
        return acc

    def table(self) -> np.ndarray:
        s = self.spec
        v = self.ctx.vec
        out = np.zeros(self.ctx.order, dtype=np.int64)
        for i in range(s.n):
            term = v.pow_const(A_table(i + 1, s), s.mexp[i])
            out = v.add(out, v.mul_const(term, s.u[i].code))
        return out


def expand(spec: WuYuanSpec) -> Expanded:
    return Expanded(spec)


# ---------------------------------------------------------------------------
# compositional inverse


def solve_congruence(mi: int, q: int, n: int) -> tuple[int, int]:
    """Smallest r > 0 with mi*r = 1 + sshift*(q-1) (mod q^n - 1).

    sshift is reported reduced mod (q^n - 1)/(q - 1).
    """
    if mi < 1:
        raise ValueError("mi must be positive")
    if math.gcd(mi, q - 1) != 1:
        raise NoSolution(f"gcd({mi}, {q - 1}) != 1")
    r = 1 if q == 2 else pow(mi, -1, q - 1)
    order = q ** n - 1
    sshift = ((mi * r - 1) // (q - 1)) % (order // (q - 1))
    assert (mi * r - 1 - sshift * (q - 1)) % order == 0
    return r, sshift


@dataclass(frozen=True)
class InverseForm:
    """x = sum_i theta_i * abase_i^(-q*sshift_i) * (eta_i . (y, y^q, ...))^r_i"""

    theta: tuple[Elem, ...]
    eta: tuple[tuple[Elem, ...], ...]
    r: tuple[int, ...]
    sshift: tuple[int, ...]
    abase: tuple[Elem, ...]

    @property
    def ctx(self) -> FieldCtx:
        return self.theta[0].ctx

    def scales(self) -> list[Elem]:
        q = self.ctx.q
        return [b ** (-q * s) for b, s in zip(self.abase, self.sshift)]

    def __call__(self, y: Elem) -> Elem:
        return eval_inverse(self, y)

    def table(self) -> np.ndarray:
        ctx = self.ctx
        v = ctx.vec
        conj = [v.frob_tables[j] for j in range(ctx.n)]
        out = np.zeros(ctx.order, dtype=np.int64)
        for th, row, r, sc in zip(self.theta, self.eta, self.r, self.scales()):
            z = np.zeros(ctx.order, dtype=np.int64)
            for c, Y in zip(row, conj):
                if c.code:
                    z = v.add(z, v.mul_const(Y, c.code))
            lam = v.mul_const(v.pow_const(z, r), sc.code)
            out = v.add(out, v.mul_const(lam, th.code))
        return out


def eval_inverse(inv: InverseForm, y: Elem) -> Elem:
    ctx = y.ctx
    conj = [frobenius(y, j) for j in range(ctx.n)]
    acc = ctx.zero
    for th, row, r, sc in zip(inv.theta, inv.eta, inv.r, inv.scales()):
        z = ctx.zero
        for c, Y in zip(row, conj):
            z = z + c * Y
        acc = acc + th * sc * z ** r
    return acc


def generic_inverse(spec: WuYuanSpec, verify: bool = True) -> InverseForm:
    """Assemble the compositional inverse of a permutation in canonical form.

    With ``verify`` the round trip is checked on every field element and
    RoundTripFailure is raised on any mismatch.
    """
    d1, d2 = dets(spec)
    if not d1 or not d2:
        raise SingularMatrix("det D1 or det D2 vanishes")
    D1inv = mat_inv(build_D1(spec))
    D2inv = mat_inv(build_D2(spec))
    q, n = spec.ctx.q, spec.n
    rs = [solve_congruence(mi, q, n) for mi in spec.mexp]
    inv = InverseForm(
        theta=tuple(D2inv[-1]),
        eta=tuple(tuple(row) for row in D1inv),
        r=tuple(r for r, _ in rs),
        sshift=tuple(s for _, s in rs),
        abase=tuple(spec.a),
    )
    if verify and not verify_inverse(expand(spec), inv, spec.ctx):
        raise RoundTripFailure("generic inverse failed the exhaustive round trip")
    return inv


def random_spec(ctx: FieldCtx, rng, mmax: int = 10, mexp: Sequence[int] | None = None) -> WuYuanSpec:
    """A random valid spec: a_i uniform on the unit circle, u_i uniform."""
    mu = ctx.vec.unit_circle_codes
    n = ctx.n
    a = tuple(ctx(int(rng.choice(mu))) for _ in range(n))
    u = (ctx.one,) + tuple(ctx(int(rng.integers(ctx.order))) for _ in range(n - 1))
    if mexp is None:
        mexp = tuple(int(rng.integers(1, mmax + 1)) for _ in range(n))
    return WuYuanSpec(a, u, tuple(mexp))
