"""Command-line front end: ``permpoly verify|inverse|lemma|equiv``.

Exit codes: 0 success, 1 disagreement/exception found, 2 usage error,
3 size cap exceeded, 4 instance is not a PP, 5 inverse round trip failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .families import (
    Family,
    FamilyParams,
    InapplicableHypothesis,
    WrongCharacteristic,
    closed_form_dets,
    construct,
    inverse_table1,
    predict_is_pp,
    table1_coeffs,
    to_wuyuan,
)
from .ffield import FieldCtx, SizeCap, enumerate_unit_circle, make_field
from .oracle import RoundTripFailure, is_bijection_exhaustive, linear_search, qm_search, roots_in_mu, verify_inverse
from .wuyuan import NoSolution, SingularMatrix, dets, generic_inverse, is_pp

EXIT_OK, EXIT_DISAGREE, EXIT_USAGE, EXIT_SIZECAP, EXIT_NOTPP, EXIT_ROUNDTRIP = 0, 1, 2, 3, 4, 5

ROW_COLUMNS = ["a_index", "a_coeffs", "s", "predicted", "reason", "criterion", "oracle", "detD1", "detD2", "agree"]

VERIFY_SCHEMA = {
    "type": "object",
    "required": ["command", "field", "family", "k", "rows", "disagreements"],
    "properties": {
        "command": {"const": "verify"},
        "field": {"$ref": "#/$defs/field"},
        "family": {"enum": [f.value for f in Family]},
        "k": {"type": "integer", "minimum": 1},
        "disagreements": {"type": "integer", "minimum": 0},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ROW_COLUMNS,
                "additionalProperties": False,
                "properties": {
                    "a_index": {"type": "integer", "minimum": 0},
                    "a_coeffs": {"$ref": "#/$defs/elem"},
                    "s": {"type": "integer", "minimum": 1},
                    "predicted": {"enum": [True, False, "inapplicable"]},
                    "reason": {"type": "string"},
                    "criterion": {"type": "boolean"},
                    "oracle": {"type": "boolean"},
                    "detD1": {"$ref": "#/$defs/elem"},
                    "detD2": {"$ref": "#/$defs/elem"},
                    "agree": {"type": "boolean"},
                },
            },
        },
    },
    "$defs": {
        "elem": {"type": "string", "pattern": "^[0-9]+(\\|[0-9]+)*$"},
        "field": {
            "type": "object",
            "required": ["p", "m", "n", "q", "order", "base_modulus", "top_modulus"],
        },
    },
}


def threads() -> int:
    try:
        return max(1, int(os.environ.get("PERMPOLY_THREADS", "")))
    except ValueError:
        return os.cpu_count() or 1


def field_info(ctx: FieldCtx) -> dict:
    return {"p": ctx.p, "m": ctx.m, "n": ctx.n, "q": ctx.q, "order": ctx.order, **ctx.moduli_str()}


def _parse_window(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError("window must look like LO..HI")
    lo_i, hi_i = int(lo), int(hi)
    if lo_i < 1 or hi_i < lo_i:
        raise argparse.ArgumentTypeError("need 1 <= LO <= HI")
    return list(range(lo_i, hi_i + 1))


class _Usage(Exception):
    pass


def _pick_a(ctx: FieldCtx, index: int):
    mu = enumerate_unit_circle(ctx)
    if not 0 <= index < len(mu):
        raise _Usage(f"a-index {index} outside 0..{len(mu) - 1}")
    return mu[index]


# ---------------------------------------------------------------------------
# verify


def verify_cell(ctx: FieldCtx, family: Family, k: int, a_index: int, a, s: int, amended: bool = False) -> dict:
    params = FamilyParams(family, a, s, k)
    f = construct(params)
    oracle = is_bijection_exhaustive(f, ctx)
    spec = to_wuyuan(params)
    criterion = is_pp(spec)
    d1, d2 = dets(spec)
    try:
        pred = predict_is_pp(params, amended=amended)
        predicted, reason = pred.is_pp, pred.reason
    except InapplicableHypothesis as exc:
        predicted, reason = "inapplicable", str(exc)
    agree = criterion == oracle and (predicted == "inapplicable" or predicted == oracle)
    return {
        "a_index": a_index,
        "a_coeffs": a.digit_string(),
        "s": s,
        "predicted": predicted,
        "reason": reason,
        "criterion": criterion,
        "oracle": oracle,
        "detD1": d1.digit_string(),
        "detD2": d2.digit_string(),
        "agree": agree,
    }


def run_verify(args) -> tuple[dict, int]:
    ctx = make_field(args.p, args.m, 3)
    family = Family.parse(args.family)
    mu = enumerate_unit_circle(ctx)
    a_idx = range(len(mu)) if args.a_all else [args.a_index]
    for i in a_idx:
        if not 0 <= i < len(mu):
            raise _Usage(f"a-index {i} outside 0..{len(mu) - 1}")
    s_vals = args.s_window if args.s_window else [args.s]
    cells = [(i, s) for i in a_idx for s in s_vals]
    # raise characteristic errors before fanning out
    construct(FamilyParams(family, mu[0], 1, args.k))
    with ThreadPoolExecutor(max_workers=threads()) as ex:
        rows = list(ex.map(lambda c: verify_cell(ctx, family, args.k, c[0], mu[c[0]], c[1], args.amended), cells))
    bad = sum(not r["agree"] for r in rows)
    report = {
        "command": "verify",
        "field": field_info(ctx),
        "family": family.value,
        "k": args.k,
        "amended": args.amended,
        "rows": rows,
        "disagreements": bad,
    }
    return report, EXIT_OK if bad == 0 else EXIT_DISAGREE


def _fmt(v) -> str:
    if v is True:
        return "true"
    if v is False:
        return "false"
    return str(v)


def render_verify(report: dict, fmt: str) -> str:
    if fmt == "json":
        report = dict(report)
        report.pop("amended", None)
        return json.dumps(report, sort_keys=True, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        fi = report["field"]
        buf.write(f"# field p={fi['p']} m={fi['m']} base_modulus={fi['base_modulus']} top_modulus={fi['top_modulus']}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(ROW_COLUMNS)
        for r in report["rows"]:
            w.writerow([_fmt(r[c]) for c in ROW_COLUMNS])
        return buf.getvalue()
    fi = report["field"]
    lines = [
        f"family {report['family']}  k={report['k']}  p={fi['p']} m={fi['m']} q={fi['q']}",
        f"base modulus {fi['base_modulus']}  top modulus {fi['top_modulus']}",
        f"{'a#':>4} {'a':>14} {'s':>3} {'predicted':>12} {'criterion':>9} {'oracle':>6} {'detD1':>14} {'detD2':>14}  verdict",
    ]
    for r in report["rows"]:
        lines.append(
            f"{r['a_index']:>4} {r['a_coeffs']:>14} {r['s']:>3} {_fmt(r['predicted']):>12} "
            f"{_fmt(r['criterion']):>9} {_fmt(r['oracle']):>6} {r['detD1']:>14} {r['detD2']:>14}  "
            f"{'AGREE' if r['agree'] else 'DISAGREE'}"
        )
    pps = sum(r["oracle"] for r in report["rows"])
    lines.append(f"rows={len(report['rows'])} pp={pps} disagreements={report['disagreements']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# inverse


def run_inverse(args) -> tuple[dict, int]:
    ctx = make_field(args.p, args.m, 3)
    family = Family.parse(args.family)
    a = _pick_a(ctx, args.a_index)
    params = FamilyParams(family, a, args.s, args.k)
    f = construct(params)
    base = {
        "command": "inverse",
        "field": field_info(ctx),
        "family": family.value,
        "k": args.k,
        "a_index": args.a_index,
        "a_coeffs": a.digit_string(),
        "s": args.s,
    }
    if not is_bijection_exhaustive(f, ctx):
        return {**base, "error": "NotAPP"}, EXIT_NOTPP
    coeffs = table1_coeffs(params, verbatim=args.verbatim)
    try:
        inv = inverse_table1(params, verbatim=args.verbatim, verify=False)
    except (SingularMatrix, NoSolution):
        return {**base, "error": "NotAPP"}, EXIT_NOTPP
    ok = verify_inverse(f, inv, ctx)
    report = {
        **base,
        "table_column": coeffs.column,
        "verbatim": args.verbatim,
        "a_mat": [[x.digit_string() for x in row] for row in coeffs.a_mat],
        "d_row": [x.digit_string() for x in coeffs.d_row],
        "detD1": coeffs.detD1.digit_string(),
        "detD2": coeffs.detD2.digit_string(),
        "c_mat": [[x.digit_string() for x in row] for row in coeffs.c_mat],
        "b_row": [x.digit_string() for x in coeffs.b_row],
        "r": list(inv.r),
        "sshift": list(inv.sshift),
        "terms": [
            {
                "b": th.digit_string(),
                "scale": sc.digit_string(),
                "c": [c.digit_string() for c in row],
                "r": r,
            }
            for th, sc, row, r in zip(inv.theta, inv.scales(), inv.eta, inv.r)
        ],
    }
    if not ok:
        report["error"] = "RoundTripFailure"
        return report, EXIT_ROUNDTRIP
    report["verified"] = True
    gen = generic_inverse(to_wuyuan(params))
    report["agrees_with_generic"] = bool((gen.table() == inv.table()).all())
    return report, EXIT_OK


def render_inverse(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=1) + "\n"
    fi = report["field"]
    lines = [
        f"family {report['family']}  k={report['k']}  p={fi['p']} m={fi['m']} q={fi['q']}",
        f"base modulus {fi['base_modulus']}  top modulus {fi['top_modulus']}",
        f"a[{report['a_index']}] = {report['a_coeffs']}  s = {report['s']}",
    ]
    if "terms" in report:
        lines.append(f"table column {report['table_column']}  detD1 {report['detD1']}  detD2 {report['detD2']}")
        for i, t in enumerate(report["terms"], 1):
            lines.append(
                f"term {i}: b={t['b']} * {t['scale']} * ({t['c'][0]} X + {t['c'][1]} X^q + {t['c'][2]} X^q^2)^{t['r']}"
            )
    if "error" in report:
        lines.append(f"error: {report['error']}")
    else:
        lines.append("verified: true")
        lines.append(f"agrees with generic inverse: {_fmt(report['agrees_with_generic'])}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# lemma


def run_lemma(args) -> tuple[dict, int]:
    if args.p != 2:
        raise _Usage("the lemmas are about q = 2^m; use --p 2")
    ctx = make_field(2, args.m, 3)
    q = ctx.q
    rows = []
    exceptions = 0
    if args.which == "3.1":
        for c in range(1, ctx.order):
            A = ctx(c)
            roots = roots_in_mu("lemma31", A, ctx)
            special = not (A ** (q + 1) + A + 1)
            expected = q + 1 if special else 1
            ok = len(roots) == expected and ctx.one in roots
            exceptions += not ok
            rows.append({"A": A.digit_string(), "count": len(roots), "expected": expected, "ok": ok})
    else:
        for c in range(1, q):
            A = ctx.from_base(c)
            roots = roots_in_mu("lemma32", A, ctx)
            applies = args.m % 2 == 1 or bool(A * A + A + 1)
            ok = (not applies) or roots == [ctx.one]
            exceptions += not ok
            rows.append({
                "A": A.digit_string(),
                "roots": [r.digit_string() for r in roots],
                "applies": applies,
                "ok": ok,
            })
    report = {"command": "lemma", "which": args.which, "field": field_info(ctx), "rows": rows, "exceptions": exceptions}
    return report, EXIT_OK if exceptions == 0 else EXIT_DISAGREE


def render_lemma(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=1) + "\n"
    fi = report["field"]
    lines = [f"lemma {report['which']}  q={fi['q']}  top modulus {fi['top_modulus']}"]
    for r in report["rows"]:
        if report["which"] == "3.1":
            lines.append(f"A={r['A']:>12}  roots={r['count']:>3}  expected={r['expected']:>3}  {'ok' if r['ok'] else 'EXCEPTION'}")
        else:
            tag = "ok" if r["ok"] else "EXCEPTION"
            if not r["applies"]:
                tag = "n/a (A^2+A+1=0)"
            lines.append(f"A={r['A']:>12}  roots={','.join(r['roots'])}  {tag}")
    if report["which"] == "3.1":
        counts = sorted({r["count"] for r in report["rows"]})
        lines.append(f"classified {len(report['rows'])} values of A; root counts {counts}")
    lines.append(f"exceptions={report['exceptions']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# equiv


def run_equiv(args) -> tuple[dict, int]:
    ctx = make_field(args.p, args.m, 3)
    a = _pick_a(ctx, args.a_index)
    fa = FamilyParams(Family.parse(args.fam_a), a, args.s, args.k)
    fb = FamilyParams(Family.parse(args.fam_b), a, args.s, args.k)
    f, g = construct(fa), construct(fb)
    out = {
        "command": "equiv",
        "field": field_info(ctx),
        "fam_a": fa.family.value,
        "fam_b": fb.family.value,
        "a_index": args.a_index,
        "a_coeffs": a.digit_string(),
        "s": args.s,
        "k": args.k,
    }
    if args.search in ("qm", "both"):
        w = qm_search(f, g, ctx)
        out["qm"] = None if w is None else {"a": w[0].digit_string(), "b": w[1].digit_string(), "d": w[2]}
    if args.search in ("linear", "both"):
        w = linear_search(f, g, ctx)
        out["linear"] = None if w is None else {
            "A1": [c.digit_string() for c in w[0].coeffs],
            "A2": [c.digit_string() for c in w[1].coeffs],
        }
    return out, EXIT_OK


def render_equiv(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=1) + "\n"
    lines = [f"{report['fam_a']} vs {report['fam_b']}  a={report['a_coeffs']}  s={report['s']}"]
    if "qm" in report:
        w = report["qm"]
        lines.append("qm: NONE" if w is None else f"qm: witness a={w['a']} b={w['b']} d={w['d']}")
    if "linear" in report:
        w = report["linear"]
        lines.append("linear: NONE" if w is None else f"linear: witness A1={w['A1']} A2={w['A2']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="permpoly", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, with_format=("table", "json")):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--format", choices=with_format, default="table")
        sp.add_argument("--out", help="write the report to FILE instead of stdout")

    v = sub.add_parser("verify", help="theorem vs criterion vs exhaustive oracle")
    common(v, ("table", "json", "csv"))
    v.add_argument("--family", required=True, choices=[f.value for f in Family])
    v.add_argument("--k", type=int, default=1)
    ga = v.add_mutually_exclusive_group(required=True)
    ga.add_argument("--a-index", type=int)
    ga.add_argument("--a-all", action="store_true")
    gs = v.add_mutually_exclusive_group(required=True)
    gs.add_argument("--s", type=int)
    gs.add_argument("--s-window", type=_parse_window)
    v.add_argument("--amended", action="store_true",
                   help="add X^(q+1)+X^q+1 to the f4 exclusion list when q = 0 mod 3")

    i = sub.add_parser("inverse", help="tabulated compositional inverse")
    common(i)
    i.add_argument("--family", required=True, choices=[f.value for f in Family])
    i.add_argument("--k", type=int, default=1)
    i.add_argument("--a-index", type=int, required=True)
    i.add_argument("--s", type=int, required=True)
    i.add_argument("--verbatim", action="store_true", help="use the printed table with no corrections")

    lm = sub.add_parser("lemma", help="root counts on the unit circle")
    common(lm)
    lm.add_argument("--which", choices=["3.1", "3.2"], required=True,
                    help="3.1: X^(q+1)+(A+1)X+A for A in F_{q^3}^*; 3.2: X^(q+1)+(A+1)X^q+A for A in F_q^*")

    e = sub.add_parser("equiv", help="QM and linear equivalence searches")
    common(e)
    e.add_argument("--fam-a", required=True, choices=[f.value for f in Family])
    e.add_argument("--fam-b", required=True, choices=[f.value for f in Family])
    e.add_argument("--a-index", type=int, default=1)
    e.add_argument("--s", type=int, default=1)
    e.add_argument("--k", type=int, default=1)
    e.add_argument("--same-params", action="store_true", help="both families share a, s, k (the default)")
    e.add_argument("--search", choices=["qm", "linear", "both"], default="both")
    return ap


RUNNERS = {
    "verify": (run_verify, render_verify),
    "inverse": (run_inverse, render_inverse),
    "lemma": (run_lemma, render_lemma),
    "equiv": (run_equiv, render_equiv),
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "s", None) is not None and args.s < 1:
        ap.error("s must be positive")
    if getattr(args, "k", 1) < 1:
        ap.error("k must be positive")
    run, render = RUNNERS[args.command]
    try:
        report, code = run(args)
    except SizeCap as exc:
        print(f"permpoly: {exc}", file=sys.stderr)
        return EXIT_SIZECAP
    except (_Usage, WrongCharacteristic, ValueError) as exc:
        print(f"permpoly: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
