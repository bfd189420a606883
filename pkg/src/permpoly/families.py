"""The six families f_1..f_6 of L(X) + Tr(X)^s over F_{q^3}.

Each family fixes a in mu_{q^2+q+1} and writes f as A_1 + A_2 + A_3^s with
a_1 = a, a_3 = 1 (so A_3 is the trace) and a family-specific a_2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .ffield import Elem, FieldCtx, in_unit_circle, nu_p, sqrt_in_field
from .oracle import RoundTripFailure, verify_inverse
from .qpoly import LinearizedPoly, TracePowerPoly
from .wuyuan import InverseForm, SingularMatrix, WuYuanSpec, dets, expand, solve_congruence


class Family(str, enum.Enum):
    F1 = "f1"
    F2 = "f2"
    F3 = "f3"
    F4 = "f4"
    F5 = "f5"
    F6 = "f6"

    @classmethod
    def parse(cls, s: str) -> "Family":
        return cls(s.lower())


class FamilyError(Exception):
    pass


class WrongCharacteristic(FamilyError, ValueError):
    pass


class InapplicableHypothesis(FamilyError):
    pass


class FormMismatch(FamilyError, AssertionError):
    pass


class NotAPP(FamilyError):
    pass


@dataclass(frozen=True)
class FamilyParams:
    family: Family
    a: Elem
    s: int
    k: int = 1

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.s < 1 or self.k < 1:
            raise ValueError("s and k must be positive")
        if self.a.ctx.n != 3:
            raise ValueError("families live over F_{q^3}")
        if not in_unit_circle(self.a):
            raise ValueError(f"{self.a!r} is not in mu_(q^2+q+1)")

    @property
    def ctx(self) -> FieldCtx:
        return self.a.ctx


def _check_char(params: FamilyParams):
    p = params.ctx.p
    fam = params.family
    if fam is Family.F1 and p != 2:
        raise WrongCharacteristic("f1 needs characteristic 2")
    if fam in (Family.F2, Family.F3, Family.F4) and p == 2:
        raise WrongCharacteristic(f"{fam.value} needs odd characteristic")


def second_base(params: FamilyParams) -> Elem:
    """The a_2 of the canonical form."""
    a, q = params.a, params.ctx.q
    return {
        Family.F1: lambda: a ** (2 ** params.k),
        Family.F2: lambda: a ** q,
        Family.F3: lambda: a ** (2 + q),
        Family.F4: lambda: a ** (2 + q * q),
        Family.F5: lambda: a ** 2,
        Family.F6: lambda: a ** (q + q * q),
    }[params.family]()


def construct(params: FamilyParams) -> TracePowerPoly:
    _check_char(params)
    ctx = params.ctx
    a, q, fam = params.a, ctx.q, params.family
    K = 2 ** params.k
    e = 1 + q * q
    two = ctx.from_int(2)
    if fam is Family.F1:
        cq2, cq, c1 = ctx.zero, a + a ** K, a ** e + a ** (K * e)
    elif fam is Family.F2:
        cq2, cq, c1 = two, a + a ** q, a ** e + a ** (1 + q)
    elif fam is Family.F3:
        cq2, cq, c1 = two, a + a ** (2 + q), a ** e + a ** (2 + q * q)
    elif fam is Family.F4:
        cq2, cq, c1 = two, a + a ** (2 + q * q), a ** e + a ** (1 + 2 * q * q)
    elif fam is Family.F5:
        cq2, cq, c1 = two, a + a ** 2, a ** e + a ** (2 * e)
    else:
        cq2, cq, c1 = two, a + a ** (q + q * q), a ** e + a ** q
    return TracePowerPoly(LinearizedPoly((c1, cq, cq2)), ctx.one, params.s)


def to_wuyuan(params: FamilyParams, validate: bool = True) -> WuYuanSpec:
    ctx = params.ctx
    spec = WuYuanSpec(
        a=(params.a, second_base(params), ctx.one),
        u=(ctx.one, ctx.one, ctx.one),
        mexp=(1, 1, params.s),
    )
    if validate:
        if not np.array_equal(expand(spec).table(), construct(params).table()):
            raise FormMismatch(f"canonical form of {params.family.value} disagrees with the polynomial")
    return spec


# ---------------------------------------------------------------------------
# permutation prediction


class Prediction(NamedTuple):
    is_pp: bool
    reason: str


def _q_mod3(ctx: FieldCtx) -> int:
    return ctx.q % 3


def check_hypotheses(params: FamilyParams):
    """Raise InapplicableHypothesis when the family's theorem does not apply."""
    _check_char(params)
    ctx = params.ctx
    if params.family is Family.F1:
        if nu_p(params.k, 3) > nu_p(ctx.m, 3):
            raise InapplicableHypothesis(f"nu_3(k={params.k}) > nu_3(m={ctx.m})")
        if _q_mod3(ctx) == 1 and params.k % 2 == 0:
            raise InapplicableHypothesis(f"q = {ctx.q} = 1 mod 3 needs k odd, got k = {params.k}")


def _root_of_minus3(ctx: FieldCtx) -> Elem:
    r = sqrt_in_field(ctx.from_int(-3))
    if r is None:
        raise FamilyError("-3 has no square root here")  # cannot happen for q = 1 mod 3
    return r


def exclusion_equations(params: FamilyParams, amended: bool = False) -> list[tuple[str, Callable[[Elem], Elem]]]:
    """Named polynomials whose roots a must avoid (odd characteristic).

    For f4 with q = 0 mod 3 the stated list has only X^(q+1)+X+1, yet roots
    of X^(q+1)+X^q+1 on the unit circle also kill det D1; ``amended`` adds it.
    """
    ctx = params.ctx
    q = ctx.q
    fam = params.family
    one, two = ctx.one, ctx.from_int(2)

    def x1(x):
        return x ** (q + 1)

    eq_lin = ("X^(q+1)+X+1", lambda x: x1(x) + x + one)
    eq_frob = ("X^(q+1)+X^q+1", lambda x: x1(x) + x ** q + one)
    r = _q_mod3(ctx)
    if r == 2 or fam in (Family.F1, Family.F5, Family.F6):
        return []
    if r == 0:
        f4 = [eq_lin, eq_frob] if amended else [eq_lin]
        return {Family.F2: [eq_lin, eq_frob], Family.F3: [eq_frob, eq_lin], Family.F4: f4}[fam]

    root = _root_of_minus3(ctx)
    out = []
    for sign_a in (1, -1):
        al = root if sign_a == 1 else -root
        for sign_b in (1, -1):
            be = root if sign_b == 1 else -root
            tag = f"[alpha={'+' if sign_a == 1 else '-'}r, beta={'+' if sign_b == 1 else '-'}r]"
            if fam is Family.F2:
                eqs = [
                    ("X^(q+1)+(1+al)/(1-al)X-2/(1-al)",
                     lambda x, al=al: x1(x) + (one + al) / (one - al) * x - two / (one - al)),
                    ("X^(q+1)+(1-al)/(1+al)X-2/(1+al)",
                     lambda x, al=al: x1(x) + (one - al) / (one + al) * x - two / (one + al)),
                    ("2X^(q+1)-(1-be)X^q-(1+be)",
                     lambda x, be=be: two * x1(x) - (one - be) * x ** q - (one + be)),
                    ("2X^(q+1)-(1+be)X^q-(1-be)",
                     lambda x, be=be: two * x1(x) - (one + be) * x ** q - (one - be)),
                ]
            else:
                eqs = [
                    ("X^(q+1)-2/(1+al)X^q+(1-al)/(1+al)",
                     lambda x, al=al: x1(x) - two / (one + al) * x ** q + (one - al) / (one + al)),
                    ("X^(q+1)-2/(1-al)X^q+(1+al)/(1-al)",
                     lambda x, al=al: x1(x) - two / (one - al) * x ** q + (one + al) / (one - al)),
                    ("X^(q+1)-2/(1+be)X+(1-be)/(1+be)",
                     lambda x, be=be: x1(x) - two / (one + be) * x + (one - be) / (one + be)),
                    ("X^(q+1)-2/(1-be)X+(1+be)/(1-be)",
                     lambda x, be=be: x1(x) - two / (one - be) * x + (one + be) / (one - be)),
                ]
            out.extend((name + tag, fn) for name, fn in eqs)
    return out


def predict_is_pp(params: FamilyParams, amended: bool = False) -> Prediction:
    """The family theorem's iff-condition evaluated at the given a and s.

    Raises InapplicableHypothesis when the theorem says nothing.
    """
    check_hypotheses(params)
    ctx = params.ctx
    if math.gcd(params.s, ctx.q - 1) != 1:
        return Prediction(False, "gcd(s,q-1)!=1")
    eqs = exclusion_equations(params, amended)
    if not eqs:
        if params.a == ctx.one:
            return Prediction(False, "a=1")
        return Prediction(True, "pp")
    for name, fn in eqs:
        if not fn(params.a):
            return Prediction(False, f"root of {name}")
    return Prediction(True, "pp")


# ---------------------------------------------------------------------------
# determinants as displayed in the family proofs


def _terms(a: Elem, terms: list[tuple[int, int]]) -> Elem:
    acc = a.ctx.zero
    for sign, e in terms:
        acc = acc + a ** e if sign > 0 else acc - a ** e
    return acc


def closed_form_dets(params: FamilyParams) -> tuple[Elem, Elem]:
    """(det D1, det D2) from the per-family closed forms.

    f4 has no displayed closed form; its values come from the generic matrices.
    """
    _check_char(params)
    a, q, fam = params.a, params.ctx.q, params.family
    q2 = q * q
    if fam is Family.F1:
        K = 2 ** params.k
        d1 = _terms(a, [(1, (K + 1) * q + K * q2), (1, q), (1, K * q), (1, (K + 1) * q + q2),
                        (1, q + q2), (1, K * q + K * q2)])
        d2 = _terms(a, [(1, K + 1 + K * q2), (1, 1), (1, K), (1, K + 1 + q2),
                        (1, 1 + q2), (1, K + K * q2)])
    elif fam is Family.F2:
        d1 = _terms(a, [(1, 0), (-1, q), (1, q2), (-1, 2 * q2 + q), (1, q + q2), (-1, q2 + 1)])
        d2 = _terms(a, [(1, q + 2), (-1, 1), (1, q), (-1, 0), (1, 1 + q2), (-1, q + 1)])
    elif fam is Family.F3:
        d1 = _terms(a, [(1, 2 * q + 2 * q2), (-1, q), (1, 2 * q + q2), (-1, 3 * q + 2 * q2),
                        (1, q + q2), (-1, q + 2 * q2)])
        d2 = _terms(a, [(1, 3 + q2), (-1, 1), (1, 2 + q), (-1, 2), (1, 1 + q2), (-1, 2 + q2)])
    elif fam is Family.F4:
        d1, d2 = dets(to_wuyuan(params, validate=False))
    elif fam is Family.F5:
        d1 = _terms(a, [(1, 3 * q + 2 * q2), (-1, q), (1, 2 * q), (-1, 3 * q + q2),
                        (1, q + q2), (-1, 2 * q + 2 * q2)])
        d2 = _terms(a, [(1, 3 + 2 * q2), (-1, 1), (1, 2), (-1, 3 + q2), (1, 1 + q2), (-1, 2 + 2 * q2)])
    else:
        d1 = _terms(a, [(1, q + 1), (-1, q), (1, q2 + 1), (-1, q2), (1, q2 + q), (-1, 1)])
        d2 = d1
    return d1, d2


# ---------------------------------------------------------------------------
# tabulated inverse coefficients

# One column per printed table heading.  Each entry is a signed list of
# exponents of a, written as functions of (q, K) with K = 2^k.  Column 1 is
# printed with '+' (characteristic 2); '+' and '-' coincide there.
_P, _M = 1, -1

TABLE1: dict[int, dict[str, list[tuple[int, Callable[[int, int], int]]]]] = {
    1: {
        "a11": [(_P, lambda q, K: K * q), (_P, lambda q, K: -K)],
        "a12": [(_P, lambda q, K: 0), (_P, lambda q, K: -K)],
        "a13": [(_P, lambda q, K: 0), (_P, lambda q, K: K * q)],
        "a21": [(_P, lambda q, K: q), (_P, lambda q, K: -1)],
        "a22": [(_P, lambda q, K: 0), (_P, lambda q, K: -1)],
        "a23": [(_P, lambda q, K: 0), (_P, lambda q, K: q)],
        "a31": [(_P, lambda q, K: q - K), (_P, lambda q, K: K - 1)],
        "a32": [(_P, lambda q, K: (K + 1) * q), (_P, lambda q, K: -1)],
        "a33": [(_P, lambda q, K: K * q), (_P, lambda q, K: q)],
        "d31": [(_P, lambda q, K: 0), (_P, lambda q, K: K)],
        "d32": [(_P, lambda q, K: 0), (_P, lambda q, K: 1)],
        "d33": [(_P, lambda q, K: 1), (_P, lambda q, K: K)],
    },
    2: {
        "a11": [(_P, lambda q, K: 2 * q), (_M, lambda q, K: -2)],
        "a12": [(_P, lambda q, K: -2), (_M, lambda q, K: 0)],
        "a13": [(_P, lambda q, K: 0), (_M, lambda q, K: 2 * q)],
        "a31": [(_P, lambda q, K: q - 2), (_M, lambda q, K: 2 * q - 1)],
        "a32": [(_P, lambda q, K: -1), (_M, lambda q, K: -2)],
        "a33": [(_P, lambda q, K: 2 * q), (_M, lambda q, K: q)],
        "d31": [(_P, lambda q, K: 0), (_M, lambda q, K: 2)],
        "d33": [(_P, lambda q, K: 2), (_M, lambda q, K: 1)],
    },
    3: {
        "a11": [(_P, lambda q, K: -q), (_M, lambda q, K: 1)],
        "a12": [(_P, lambda q, K: 1), (_M, lambda q, K: 0)],
        "a13": [(_P, lambda q, K: 0), (_M, lambda q, K: -q)],
        "a31": [(_P, lambda q, K: -q * q), (_M, lambda q, K: q * q)],
        "a32": [(_P, lambda q, K: -1), (_M, lambda q, K: 1)],
        "a33": [(_P, lambda q, K: -q), (_M, lambda q, K: q)],
        "d31": [(_P, lambda q, K: 0), (_M, lambda q, K: -1)],
        "d33": [(_P, lambda q, K: -1), (_M, lambda q, K: 1)],
    },
    4: {
        "a11": [(_P, lambda q, K: q * q), (_M, lambda q, K: -q)],
        "a12": [(_P, lambda q, K: -q), (_M, lambda q, K: 0)],
        "a13": [(_P, lambda q, K: 0), (_M, lambda q, K: q * q)],
        "a31": [(_P, lambda q, K: 0), (_M, lambda q, K: q * q - 1)],
        "a32": [(_P, lambda q, K: -1), (_M, lambda q, K: -q)],
        "a33": [(_P, lambda q, K: q * q), (_M, lambda q, K: q)],
        "d31": [(_P, lambda q, K: 0), (_M, lambda q, K: q)],
        "d33": [(_P, lambda q, K: q), (_M, lambda q, K: 1)],
    },
    5: {
        "a11": [(_P, lambda q, K: q - 1), (_M, lambda q, K: q * q - 1)],
        "a12": [(_P, lambda q, K: q * q - 1), (_M, lambda q, K: 0)],
        "a13": [(_P, lambda q, K: 0), (_M, lambda q, K: q - 1)],
        "a31": [(_P, lambda q, K: -2), (_M, lambda q, K: q - 2)],
        "a32": [(_P, lambda q, K: -1), (_M, lambda q, K: q * q - 1)],
        "a33": [(_P, lambda q, K: q - 1), (_M, lambda q, K: q)],
        "d31": [(_P, lambda q, K: 0), (_M, lambda q, K: 2 + q)],
        "d33": [(_P, lambda q, K: 2 + q), (_M, lambda q, K: 1)],
    },
    6: {
        "a11": [(_P, lambda q, K: 2 * q + 1), (_M, lambda q, K: q - 1)],
        "a12": [(_P, lambda q, K: q - 1), (_M, lambda q, K: 0)],
        "a13": [(_P, lambda q, K: 0), (_M, lambda q, K: 2 * q + 1)],
        "a31": [(_P, lambda q, K: 2 * q - 1), (_M, lambda q, K: 2 * q)],
        "a32": [(_P, lambda q, K: -1), (_M, lambda q, K: q - 1)],
        "a33": [(_P, lambda q, K: 2 * q + 1), (_M, lambda q, K: q)],
        "d31": [(_P, lambda q, K: 0), (_M, lambda q, K: 2 + q * q)],
        "d33": [(_P, lambda q, K: 2 + q * q), (_M, lambda q, K: 1)],
    },
}
# row 2 and d32 are shared by columns 2..6
for _col in range(2, 7):
    TABLE1[_col].update({
        "a21": [(_P, lambda q, K: -1), (_M, lambda q, K: q)],
        "a22": [(_P, lambda q, K: 0), (_M, lambda q, K: -1)],
        "a23": [(_P, lambda q, K: q), (_M, lambda q, K: 0)],
        "d32": [(_P, lambda q, K: 1), (_M, lambda q, K: 0)],
    })

# The printed column headings do not follow f_1..f_6: matching each column
# against the adjugates of D1 and D2 places the families as below.
PRINTED_COLUMN = {
    Family.F1: 1, Family.F5: 2, Family.F6: 3, Family.F2: 4, Family.F3: 5, Family.F4: 6,
}

# Column 1 entries that disagree with the adjugate of D1 for every a; the
# printed forms are a^(q-K) + a^(K-1) and a^((K+1)q) + a^(-1).
TABLE1_CORRECTIONS = {
    1: {
        "a31": [(_P, lambda q, K: q - K), (_P, lambda q, K: K * q - 1)],
        "a32": [(_P, lambda q, K: -1), (_P, lambda q, K: -K)],
    },
}


@dataclass(frozen=True)
class Table1Coeffs:
    column: int
    a_mat: tuple[tuple[Elem, ...], ...]
    d_row: tuple[Elem, ...]
    detD1: Elem
    detD2: Elem

    @property
    def c_mat(self) -> tuple[tuple[Elem, ...], ...]:
        inv = self.detD1.inv()
        return tuple(tuple(x * inv for x in row) for row in self.a_mat)

    @property
    def b_row(self) -> tuple[Elem, ...]:
        inv = self.detD2.inv()
        return tuple(x * inv for x in self.d_row)


def table1_entry(column: int, name: str, a: Elem, k: int = 1, verbatim: bool = False) -> Elem:
    entry = TABLE1[column][name]
    if not verbatim:
        entry = TABLE1_CORRECTIONS.get(column, {}).get(name, entry)
    return _terms_fn(a, entry, a.ctx.q, 2 ** k)


def _terms_fn(a: Elem, entry, q: int, K: int) -> Elem:
    return _terms(a, [(sign, f(q, K)) for sign, f in entry])


def table1_coeffs(params: FamilyParams, verbatim: bool = False) -> Table1Coeffs:
    """Tabulated adjugate entries for the family.

    ``verbatim`` reads the printed column numbered like the family with no
    entry corrections.
    """
    _check_char(params)
    col = int(params.family.value[1]) if verbatim else PRINTED_COLUMN[params.family]
    a, k = params.a, params.k
    a_mat = tuple(
        tuple(table1_entry(col, f"a{i}{j}", a, k, verbatim) for j in (1, 2, 3)) for i in (1, 2, 3)
    )
    d_row = tuple(table1_entry(col, f"d3{j}", a, k, verbatim) for j in (1, 2, 3))
    d1, d2 = closed_form_dets(params)
    return Table1Coeffs(col, a_mat, d_row, d1, d2)


def inverse_table1(params: FamilyParams, verbatim: bool = False, verify: bool = True) -> InverseForm:
    """Compositional inverse assembled from the tabulated coefficients.

    The power-term scale uses the canonical-form base a_3 = 1; ``verbatim``
    uses the family parameter a for every term instead.
    """
    ctx = params.ctx
    coeffs = table1_coeffs(params, verbatim)
    if not coeffs.detD1 or not coeffs.detD2:
        raise SingularMatrix("det D1 or det D2 vanishes")
    rs = [solve_congruence(mi, ctx.q, 3) for mi in (1, 1, params.s)]
    abase = (params.a,) * 3 if verbatim else (params.a, second_base(params), ctx.one)
    inv = InverseForm(
        theta=coeffs.b_row,
        eta=coeffs.c_mat,
        r=tuple(r for r, _ in rs),
        sshift=tuple(s for _, s in rs),
        abase=abase,
    )
    if verify and not verify_inverse(construct(params), inv, ctx):
        raise RoundTripFailure(
            f"tabulated inverse of {params.family.value} failed the round trip (a={params.a!r}, s={params.s})"
        )
    return inv
