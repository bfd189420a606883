"""Permutation polynomials L(X) + Tr(X)^s over F_{q^3} and their inverses."""

from .ffield import (
    Elem,
    FieldCtx,
    NonPrime,
    SizeCap,
    enumerate_unit_circle,
    frobenius,
    in_unit_circle,
    make_field,
    trace_rel,
)
from .qpoly import LinearizedPoly, TracePowerPoly, compose_lin
from .wuyuan import WuYuanSpec, dets, expand, generic_inverse, is_pp, solve_congruence
from .families import (
    Family,
    FamilyParams,
    InapplicableHypothesis,
    NotAPP,
    WrongCharacteristic,
    closed_form_dets,
    construct,
    inverse_table1,
    predict_is_pp,
    table1_coeffs,
    to_wuyuan,
)
from .oracle import RoundTripFailure, is_bijection_exhaustive, linear_search, qm_search, verify_inverse

__version__ = "0.1.0"
