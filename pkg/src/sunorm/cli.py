"""Command-line front end.

Every subcommand loads a fixture (shipped name or path), runs one library
operation, and emits either a human-readable table or, with ``--json``, a
single deterministic JSON document in which every numeric output carries its
certified error bound.

Exit codes: 0 ok, 2 usage, 3 fixture/validation, 4 precision.
"""

import argparse
import hashlib
import json
import os
import random
import sys
from fractions import Fraction

from .certreal import working_precision
from .errors import (
    FixtureParseError,
    InvariantViolation,
    LPError,
    PrecisionError,
    SunormError,
    SupportError,
    UsageError,
)
from .field_model import load_fixture, shipped_fixture_path
from .heights import delta, h_p, mahler_upper
from .quotient import (
    a_matrix,
    eta_min_height,
    quotient_norm,
    quotient_norm_via_simplex,
    quotient_norm_via_subgradient,
    residual_l1,
)
from .projections import build_alpha_v_system, proj_field, proj_sunits
from .extremal import build_S, extremal_m1

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_PRECISION = 4

SUBCOMMANDS = (
    "validate", "height", "delta", "qnorm", "eta",
    "project-field", "project-sunits", "extremal-m1", "oracle-check",
)


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="sunorm",
        description="Heights, quotient norms, projections, and the extremal "
                    "Mahler norm on S-unit lattices of Galois number fields.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--fixture", required=True,
                        help="shipped fixture name (q, qsqrt2, qsqrt2-ext, qsqrt5, qbiquad) or a path")
        sp.add_argument("--element",
                        help="named fixture element or comma-separated basis coordinates")
        sp.add_argument("--p", default="1", choices=["1", "2", "inf"])
        sp.add_argument("--subfield", help="subfield name or lattice index")
        sp.add_argument("--precision", type=int, default=200, help="working precision in bits")
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--count", type=int, default=25,
                        help="random instances for oracle-check")
        sp.add_argument("--seed", type=int, default=0)
    return ap


def _fixture_path(spec: str) -> str:
    if os.path.exists(spec):
        return spec
    return shipped_fixture_path(spec)


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def _ve(ball) -> dict:
    value, error = ball.str_pair()
    return {"value": value, "error": error}


def _vec_doc(vec) -> dict:
    doc = {"fin": {str(w): str(m) for w, m in sorted(vec.fin.items())}}
    doc["arch"] = {str(w): _ve(x) for w, x in sorted(vec.arch.items())}
    if vec.fin_approx:
        doc["fin_approx"] = {str(w): _ve(x) for w, x in sorted(vec.fin_approx.items())}
    return doc


def _need(args, attr):
    if getattr(args, attr) is None:
        raise UsageError(f"--{attr} is required for {args.command}")
    return getattr(args, attr)


def _resolve_subfield(fix, spec):
    try:
        return fix.subfield_by(int(spec))
    except (ValueError, TypeError):
        return fix.subfield_by(spec)


def _p_arg(args):
    return {"1": 1, "2": 2, "inf": "inf"}[args.p]


def _cmd_validate(fix, args):
    return {
        "label": fix.label,
        "degree": fix.degree,
        "places": len(fix.places),
        "class_number": fix.class_number,
        "core_s": sorted(fix.core_s),
        "s_unit_rank": len(fix.s_unit_basis),
        "subfields": [
            {"index": sf.index, "name": sf.name, "degree": sf.degree}
            for sf in fix.subfields
        ],
        "elements": sorted(fix.named_elements),
    }


def _cmd_height(fix, args):
    vec = fix.element(_need(args, "element"))
    hv = h_p(vec, _p_arg(args))
    return {"p": args.p, "height": _ve(hv.value), "normalization": hv.normalization}


def _cmd_delta(fix, args):
    vec = fix.element(_need(args, "element"))
    d = delta(vec)
    return {"delta": d, "mahler_upper": _ve(mahler_upper(vec, _p_arg(args)).value)}


def _cmd_qnorm(fix, args):
    vec = fix.element(_need(args, "element"))
    sf = _resolve_subfield(fix, _need(args, "subfield"))
    A = a_matrix(vec, sf)
    return {
        "subfield": sf.name,
        "qnorm": _ve(quotient_norm(A)),
        "rows": {str(r.rep): [_ve(e) for e in r.entries] for r in A.rows},
    }


def _cmd_eta(fix, args):
    vec = fix.element(_need(args, "element"))
    sf = _resolve_subfield(fix, _need(args, "subfield"))
    A = a_matrix(vec, sf)
    sol = eta_min_height(A)
    resid = residual_l1(A, sol.x)
    ext = A.ext_count
    h_alpha = h_p(vec, 1).value
    lhs = sol.eta_height + sol.qnorm.scale(ext)
    rhs = h_alpha.scale(ext)
    gap = rhs - lhs
    return {
        "subfield": sf.name,
        "k": sol.k,
        "qnorm": _ve(sol.qnorm),
        "x": {str(w): _ve(v) for w, v in sorted(sol.x.items())},
        "x_exact": sol.x_exact,
        "eta": _vec_doc(sol.eta),
        "eta_height": _ve(sol.eta_height),
        "eta_height_raw": _ve(sol.eta_height_raw),
        "height_formula": _ve(sol.height_formula),
        "residual_raw": _ve(resid),
        "xv_inequality_ok": bool(gap.mid >= -(gap.rad + args.tol)),
    }


def _cmd_project_field(fix, args):
    vec = fix.element(_need(args, "element"))
    sf = _resolve_subfield(fix, _need(args, "subfield"))
    out = proj_field(sf, vec)
    return {
        "subfield": sf.name,
        "projection": _vec_doc(out),
        "height_before": _ve(h_p(vec, 1).value),
        "height_after": _ve(h_p(out, 1).value),
    }


def _cmd_project_sunits(fix, args):
    vec = fix.element(_need(args, "element"))
    system = build_alpha_v_system(fix, fix.core_s)
    out = proj_sunits(fix, fix.core_s, system, vec)
    return {
        "s_places": sorted(fix.core_s),
        "alpha_v_places": sorted(system.vectors),
        "projection": _vec_doc(out),
        "height_before": _ve(h_p(vec, 1).value),
        "height_after": _ve(h_p(out, 1).value),
        "delta_before": delta(vec),
        "delta_after": delta(out),
    }


def _cmd_extremal(fix, args):
    vec = fix.element(_need(args, "element"))
    res = extremal_m1(fix, vec, tol=args.tol)
    return {
        "total": _ve(res.total),
        "lp_value": str(res.lp_value),
        "lp_error": repr(res.lp_error),
        "s_used": sorted(res.s_used),
        "certified": res.certified,
        "repair_rounds": res.repair_rounds,
        "attained_rational": res.attained_rational,
        "sandwich": {"h1": _ve(res.sandwich_low), "delta_h1": _ve(res.sandwich_high)},
        "parts": [
            {
                "subfield": p.subfield.name,
                "weight": p.weight,
                "height": _ve(p.height),
                "certified": p.certified,
                "vector": _vec_doc(p.vector),
            }
            for p in res.parts
        ],
    }


def _cmd_oracle_check(fix, args):
    rng = random.Random(args.seed)
    vecs = []
    if args.element is not None:
        vecs.append(fix.element(args.element))
    else:
        nb = len(fix.s_unit_basis)
        for _ in range(args.count):
            coords = [Fraction(rng.randint(-8, 8), rng.randint(1, 3)) for _ in range(nb)]
            vecs.append(fix.combo(coords))
    worst_simplex = 0.0
    worst_subgrad = 0.0
    instances = 0
    for vec in vecs:
        for sf in fix.subfields:
            A = a_matrix(vec, sf)
            qn = float(quotient_norm(A).mid) * fix.degree
            vs = float(quotient_norm_via_simplex(A))
            vg = quotient_norm_via_subgradient(A)
            worst_simplex = max(worst_simplex, abs(qn - vs))
            worst_subgrad = max(worst_subgrad, abs(qn - vg))
            instances += 1
    ok = worst_simplex <= args.tol and worst_subgrad <= args.tol
    if not ok:
        raise InvariantViolation(
            "oracle agreement",
            f"max deviations simplex={worst_simplex!r} subgradient={worst_subgrad!r}",
        )
    return {
        "instances": instances,
        "max_abs_dev_simplex": repr(worst_simplex),
        "max_abs_dev_subgradient": repr(worst_subgrad),
        "tolerance": repr(args.tol),
    }


_HANDLERS = {
    "validate": _cmd_validate,
    "height": _cmd_height,
    "delta": _cmd_delta,
    "qnorm": _cmd_qnorm,
    "eta": _cmd_eta,
    "project-field": _cmd_project_field,
    "project-sunits": _cmd_project_sunits,
    "extremal-m1": _cmd_extremal,
    "oracle-check": _cmd_oracle_check,
}


def run(argv):
    """Execute one command; returns (result document, exit code)."""
    ap = _build_parser()
    args = ap.parse_args(argv)
    doc = {"command": list(argv), "status": "ok", "inputs": {}, "outputs": {}}
    try:
        path = _fixture_path(args.fixture)
        doc["inputs"] = {"fixture_path": path, "digest": _digest(path)}
        if args.element is not None:
            doc["inputs"]["element"] = args.element
        fix = load_fixture(path, precision=args.precision)
        doc["inputs"]["fixture"] = fix.label
        with working_precision(args.precision):
            doc["outputs"] = _HANDLERS[args.command](fix, args)
    except UsageError as exc:
        doc.update(status="error", error={"type": type(exc).__name__, "message": str(exc)})
        return doc, EXIT_USAGE
    except (FixtureParseError, InvariantViolation, SupportError, LPError) as exc:
        doc.update(status="error", error={"type": type(exc).__name__, "message": str(exc)})
        return doc, EXIT_VALIDATION
    except PrecisionError as exc:
        doc.update(status="error", error={"type": type(exc).__name__, "message": str(exc)})
        return doc, EXIT_PRECISION
    except SunormError as exc:
        doc.update(status="error", error={"type": type(exc).__name__, "message": str(exc)})
        return doc, EXIT_VALIDATION
    return doc, EXIT_OK


def _print_table(doc, stream):
    def emit(prefix, obj):
        if isinstance(obj, dict):
            if set(obj) == {"value", "error"}:
                stream.write(f"{prefix}: {obj['value']} +/- {obj['error']}\n")
                return
            for k in sorted(obj):
                emit(f"{prefix}.{k}" if prefix else str(k), obj[k])
        elif isinstance(obj, list):
            for i, item in enumerate(obj):
                emit(f"{prefix}[{i}]", item)
        else:
            stream.write(f"{prefix}: {obj}\n")

    stream.write(f"status: {doc['status']}\n")
    if doc["status"] == "ok":
        emit("", doc["outputs"])
    else:
        emit("error", doc["error"])


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    doc, code = run(argv)
    if "--json" in argv:
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        _print_table(doc, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
