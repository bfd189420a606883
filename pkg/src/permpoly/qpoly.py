"""q-linearized polynomials and polynomials of the form L(X) + c*Tr(X)^s.

Polynomials here are compared as functions on F_{q^n}; nothing is expanded
into dense coefficient vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ffield import CtxMismatch, Elem, FieldCtx, frobenius, trace_rel


def _same_ctx(a: FieldCtx, b: FieldCtx):
    if a is not b and a.key != b.key:
        raise CtxMismatch(f"{a!r} vs {b!r}")


@dataclass(frozen=True)
class LinearizedPoly:
    """sum_j coeffs[j] * X^(q^j), j = 0..n-1."""

    coeffs: tuple[Elem, ...]

    def __post_init__(self):
        ctx = self.coeffs[0].ctx
        if len(self.coeffs) != ctx.n:
            raise ValueError(f"need {ctx.n} coefficients, got {len(self.coeffs)}")
        for c in self.coeffs[1:]:
            _same_ctx(ctx, c.ctx)

    @classmethod
    def of(cls, ctx: FieldCtx, coeffs: Sequence) -> "LinearizedPoly":
        """Build from Elems or integer codes; pads with zeros to length n."""
        cs = [c if isinstance(c, Elem) else ctx(int(c)) for c in coeffs]
        cs += [ctx.zero] * (ctx.n - len(cs))
        return cls(tuple(cs))

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "LinearizedPoly":
        return cls.of(ctx, [1])

    @classmethod
    def frob_power(cls, ctx: FieldCtx, j: int) -> "LinearizedPoly":
        cs = [0] * ctx.n
        cs[j % ctx.n] = 1
        return cls.of(ctx, cs)

    @property
    def ctx(self) -> FieldCtx:
        return self.coeffs[0].ctx

    def __call__(self, x: Elem) -> Elem:
        return eval_lin(self, x)

    def table(self) -> np.ndarray:
        """Values on every field element, indexed by code."""
        v = self.ctx.vec
        out = np.zeros(self.ctx.order, dtype=np.int64)
        for j, c in enumerate(self.coeffs):
            if c.code:
                out = v.add(out, v.mul_const(v.frob_tables[j], c.code))
        return out

    def is_permutation(self) -> bool:
        return np.unique(self.table()).size == self.ctx.order

    def codes(self) -> tuple[int, ...]:
        return tuple(c.code for c in self.coeffs)


@dataclass(frozen=True)
class TracePowerPoly:
    """linear(X) + trace_coeff * Tr(X)^s."""

    linear: LinearizedPoly
    trace_coeff: Elem
    s: int

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be >= 1")
        _same_ctx(self.linear.ctx, self.trace_coeff.ctx)

    @property
    def ctx(self) -> FieldCtx:
        return self.linear.ctx

    def __call__(self, x: Elem) -> Elem:
        return eval_tp(self, x)

    def table(self) -> np.ndarray:
        v = self.ctx.vec
        tr = v.trace(v.all)
        power = v.mul_const(v.pow_const(tr, self.s), self.trace_coeff.code)
        return v.add(self.linear.table(), power)


def eval_lin(L: LinearizedPoly, x: Elem) -> Elem:
    _same_ctx(L.ctx, x.ctx)
    acc = x.ctx.zero
    for j, c in enumerate(L.coeffs):
        if c.code:
            acc = acc + c * frobenius(x, j)
    return acc


def eval_tp(f: TracePowerPoly, x: Elem) -> Elem:
    return eval_lin(f.linear, x) + f.trace_coeff * trace_rel(x) ** f.s


def compose_lin(L1: LinearizedPoly, L2: LinearizedPoly) -> LinearizedPoly:
    """Coefficients of L1(L2(X)) reduced mod X^(q^n) - X."""
    _same_ctx(L1.ctx, L2.ctx)
    ctx = L1.ctx
    n = ctx.n
    out = [ctx.zero] * n
    for i, a in enumerate(L1.coeffs):
        if not a:
            continue
        for j, b in enumerate(L2.coeffs):
            if b:
                out[(i + j) % n] = out[(i + j) % n] + a * frobenius(b, i)
    return LinearizedPoly(tuple(out))
