"""Command-line interface: ``qfunctions <command> [flags] <input...>``.

Every command prints a JSON certificate.  Without ``--output`` the document
on stdout is ``{"certificate": ..., "result": ...}``; with ``--output`` the
result goes to that file and stdout carries the certificate alone.

Exit codes: 0 all checks passed, 1 some check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import jsonio, qfun, qrel, vnalg
from . import matkernel as mk
from .battery import INTERTWINE_TOL, ISOMETRY_TOL, ROUNDTRIP_TOL, Certificate, Check, run_battery
from .errors import ShapeError
from .matkernel import Tolerances

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno} "
                         f"(char {exc.pos}): {exc.msg}") from None


def _decode(fn, doc, path, *args):
    try:
        return fn(doc, *args)
    except (jsonio.SchemaError, ShapeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _tol(args) -> Tolerances:
    try:
        return Tolerances(args.tol_rank, args.tol_membership, args.tol_eq)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _check(name, residual, bound, note="") -> Check:
    return Check(name, bool(residual <= bound), residual, 1, note)


# -- commands -------------------------------------------------------------------------

def cmd_commutant(args, tol):
    doc = _load(args.input)
    m = _decode(jsonio.algebra_from_json, doc, args.input, tol)
    cert = Certificate("commutant", jsonio.digest(doc), tol)
    bicommutant = vnalg.commutant_of(m.commutant.basis, m.hilbert_dim, tol)
    res = vnalg.algebra_residuals(m)
    cert.checks.append(_check("commutant commutes with algebra", res["commutation"], tol.eq_tol))
    cert.checks.append(_check("identity in commutant", res["unit_in_commutant"], tol.membership_tol))
    cert.checks.append(_check("double commutant equals algebra",
                              mk.equality_residual(bicommutant, m.algebra), tol.membership_tol))
    info = {"hilbert_dim": m.hilbert_dim, "algebra_dim": m.dim, "commutant_dim": m.commutant.dim,
            "center_dim": vnalg.center(m, tol).dim}
    return cert, jsonio.subspace_to_json(m.commutant), info


def _relation_checks(r, tol):
    return [_check("bimodule: N' V M' <= V", qrel.bimodule_residual(r), tol.membership_tol)]


def _qf_checks(r, tol):
    res = qfun.quantum_function_residuals(r, tol)
    return [_check(f"quantum function: {qfun.INCLUSION_NAMES[k]}", x, tol.membership_tol)
            for k, x in res.items()]


def _hom_check_list(pi, tol):
    return [_check(f"homomorphism: {k}", x, tol.eq_tol) for k, x in qfun.hom_residuals(pi).items()]


def cmd_relprops(args, tol):
    doc = _load(args.input)
    r = _decode(jsonio.relation_from_json, doc, args.input, tol)
    cert = Certificate("relprops", jsonio.digest(doc), tol)
    cert.checks += _relation_checks(r, tol)
    info = {"dim": r.dim}
    if not cert.overall:
        info["properties"] = None
        return cert, None, info
    if not vnalg.same_algebra(r.source, r.target, tol):
        raise InputError(f"{args.input}: properties need a relation on a single algebra")
    res = qrel.property_residuals(r, tol)
    info["properties"] = {k: {"holds": bool(x <= tol.membership_tol), "residual": float(min(x, 1e300))}
                          for k, x in res.items()}
    return cert, None, info


def cmd_gmap(args, tol):
    doc = _load(args.input)
    pi = _decode(jsonio.hom_from_json, doc, args.input, tol)
    cert = Certificate("gmap", jsonio.digest(doc), tol)
    cert.checks += _hom_check_list(pi, tol)
    if not cert.overall:
        return cert, None, {}
    r = qfun.g_forward(pi, tol)
    cert.checks += _relation_checks(r, tol) + _qf_checks(r, tol)
    return cert, jsonio.relation_to_json(r), {"dim": r.dim}


def cmd_ginv(args, tol):
    doc = _load(args.input)
    r = _decode(jsonio.relation_from_json, doc, args.input, tol)
    cert = Certificate("ginv", jsonio.digest(doc), tol)
    cert.checks += _relation_checks(r, tol) + _qf_checks(r, tol)
    if not cert.overall:
        failed = [c.name for c in cert.checks if not c.passed]
        return cert, None, {"error": "not a quantum function", "violated": failed}
    fam = qfun.extract_family(r, tol=tol)
    for k, x in fam.residuals().items():
        cert.checks.append(_check(f"family: {k}", x, tol.eq_tol))
    pi = qfun.g_inverse(r, fam, tol=tol)
    cert.checks += _hom_check_list(pi, tol)
    if args.family:
        _write(args.family, jsonio.family_to_json(fam), args.pretty)
    return cert, jsonio.hom_to_json(pi), {"family_size": len(fam)}


def cmd_roundtrip(args, tol):
    doc = _load(args.input)
    pi = _decode(jsonio.hom_from_json, doc, args.input, tol)
    cert = Certificate("roundtrip", jsonio.digest(doc), tol)
    cert.checks += _hom_check_list(pi, tol)
    if not cert.overall:
        return cert, None, {}
    r = qfun.g_forward(pi, tol)
    cert.checks += _qf_checks(r, tol)
    back = qfun.g_inverse(r, tol=tol)
    cert.checks.append(_check("roundtrip: max basis-image residual", qfun.hom_distance(back, pi),
                              ROUNDTRIP_TOL))
    return cert, None, {}


def cmd_dilate(args, tol):
    doc = _load(args.input)
    pi = _decode(jsonio.hom_from_json, doc, args.input, tol)
    cert = Certificate("dilate", jsonio.digest(doc), tol)
    cert.checks += _hom_check_list(pi, tol)
    if not cert.overall:
        return cert, None, {}
    r = qfun.g_forward(pi, tol)
    w = qfun.isometry_from_family(qfun.extract_family(r, tol=tol))
    cert.checks.append(_check("isometry: w*w = 1", w.isometry_residual(), ISOMETRY_TOL))
    cert.checks.append(_check("intertwining: (b x 1) w = w pi(b)",
                              qfun.intertwine_residual(w, pi), INTERTWINE_TOL))
    cert.checks.append(_check("compression: w*(b x 1) w = pi(b)",
                              qfun.compression_residual(w, pi), INTERTWINE_TOL))
    if args.generation:
        cert.checks.append(_check("generation: (N x C)' w M' = V x B(C, l2(I))",
                                  qfun.generation_residual(r, w, tol), tol.membership_tol))
    return cert, jsonio.isometry_to_json(w), {"index_size": w.index_size}


def cmd_selftest(args, tol):
    if args.max_dim < 1:
        raise InputError("--max-dim must be at least 1")
    params = {"seed": args.seed, "max_dim": args.max_dim, "count": args.count,
              "pairs": args.pairs, "corrupt": bool(args.corrupt)}
    cert = Certificate("selftest", jsonio.digest(params), tol)
    cert.checks += run_battery(seed=args.seed, max_dim=args.max_dim, count=args.count,
                               pair_count=args.pairs, corrupt=args.corrupt, tol=tol)
    return cert, None, params


COMMANDS = {
    "commutant": (cmd_commutant, "commutant of an algebra, with double-commutant check"),
    "relprops": (cmd_relprops, "validate a relation and report the four relation properties"),
    "gmap": (cmd_gmap, "quantum function G(pi) of a homomorphism"),
    "ginv": (cmd_ginv, "homomorphism G^-1(V) of a quantum function"),
    "roundtrip": (cmd_roundtrip, "check G^-1(G(pi)) = pi"),
    "dilate": (cmd_dilate, "dilation isometry w with pi(b) = w*(b x 1) w"),
    "selftest": (cmd_selftest, "run the full seeded verification battery"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    d = Tolerances()
    common.add_argument("--tol-rank", type=float, default=d.rank_tol)
    common.add_argument("--tol-membership", type=float, default=d.membership_tol)
    common.add_argument("--tol-eq", type=float, default=d.eq_tol)
    common.add_argument("--output", "-o", help="write the result document to this file")
    common.add_argument("--pretty", action="store_true", help="indent JSON output")

    parser = argparse.ArgumentParser(prog="qfunctions", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "selftest":
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--max-dim", type=int, default=6)
            p.add_argument("--count", type=int, default=200, help="random homomorphisms")
            p.add_argument("--pairs", type=int, default=100, help="composable and distinct pairs")
            p.add_argument("--corrupt", action="store_true",
                           help="add a deliberately broken fixture (negative control)")
        else:
            p.add_argument("input", help="input JSON file, or - for stdin")
        if name == "dilate":
            p.add_argument("--generation", action="store_true", help="also check the generation identity")
        if name == "ginv":
            p.add_argument("--family", help="also write the partial isometry family here")
    return parser


def _write(path, doc, pretty):
    Path(path).write_text(jsonio.canonical_dumps(doc, pretty) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        tol = _tol(args)
        cert, result, info = COMMANDS[args.command][0](args, tol)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = cert.as_dict()
    if info:
        out["info"] = info
    if args.output and result is not None:
        _write(args.output, result, args.pretty)
        doc = out
    else:
        doc = {"certificate": out, "result": result} if result is not None else out
    sys.stdout.write(jsonio.canonical_dumps(doc, args.pretty) + "\n")
    if not cert.overall:
        failed = ", ".join(c.name for c in cert.checks if not c.passed)
        print(f"checks failed: {failed}", file=sys.stderr)
    return EXIT_OK if cert.overall else EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
