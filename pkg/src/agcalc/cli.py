"""Command-line front end with deterministic reports and exit codes.

Exit codes: 0 all checks passed, 1 a verification check failed, 2 input or
contract error, 3 resource-guard abort.  Reports (text or JSON) carry no
timestamps; --timing prints elapsed seconds to stderr so report bytes stay
identical across runs.  The AGCALC_TERM_CEILING environment variable
overrides the scan resource guard.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .errors import (
    AgcalcError,
    ContractViolation,
    MapFileError,
    PreconditionError,
    TermCeilingExceeded,
    TruncationError,
)
from .inversion import (
    ABHYANKAR_GURJAR,
    FIXED_POINT,
    LAMBDA_SERIES,
    ag_jacobian_identity,
    cross_method_results,
    invert_ag,
    invert_fixed_point,
    invert_lambda,
    jacobian_factor,
    verify_phi_exponential,
    verify_round_trip,
    xi_moment_series,
)
from .lab import (
    check_equivalences,
    gen_corpus,
    is_nilpotent,
    standard_corpus,
    vanishing_scan,
    CorpusSpec,
)
from .mapfile import load_map_file, parse_poly, poly_to_entries
from .poly import (
    MapTuple,
    SparsePoly,
    VarSet,
    compose,
    det,
    diff_witness,
    jacobian,
    render_poly,
    xi_pairing,
)
from .report import Check, Report, failed_check, passed_check, skipped_check
from .weyl import verify_phi_normal_order

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

METHOD_FLAGS = {
    "fixedpoint": FIXED_POINT,
    "ag": ABHYANKAR_GURJAR,
    "lambda": LAMBDA_SERIES,
}


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _digest_file(path: str) -> str:
    return _digest(Path(path).read_bytes())


def _term_ceiling() -> int | None:
    raw = os.environ.get("AGCALC_TERM_CEILING")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise MapFileError(f"AGCALC_TERM_CEILING must be an integer, got {raw!r}")


def _g_result(result) -> dict:
    return {
        "method": result.method,
        "degree": result.D,
        "G": [render_poly(c) for c in result.G.components],
        "G_terms": [poly_to_entries(c) for c in result.G.components],
        "N_order": (None if result.N.order() == float("inf")
                    else int(result.N.order())),
    }


# -- invert -------------------------------------------------------------------


def cmd_invert(args) -> Report:
    h, _meta = load_map_file(args.mapfile)
    if args.degree < 1:
        raise MapFileError("--degree must be >= 1")
    checks: list[Check] = []
    if args.method == "all":
        results = cross_method_results(h, args.degree, debug=args.debug)
        base = results[FIXED_POINT]
        agree = (results[ABHYANKAR_GURJAR].G == base.G
                 and results[LAMBDA_SERIES].G == base.G)
        if agree:
            checks.append(passed_check("cross-method agreement",
                                       detail="3 methods, coefficientwise"))
        else:
            wit = (diff_witness(results[ABHYANKAR_GURJAR].G.components[0],
                                base.G.components[0])
                   or diff_witness(results[LAMBDA_SERIES].G.components[0],
                                   base.G.components[0]))
            checks.append(failed_check("cross-method agreement", witness=wit))
        shown = base
    else:
        runner = {
            FIXED_POINT: invert_fixed_point,
            ABHYANKAR_GURJAR: lambda m, d: invert_ag(m, d, debug=args.debug),
            LAMBDA_SERIES: lambda m, d: invert_lambda(m, d, debug=args.debug),
        }[METHOD_FLAGS[args.method]]
        shown = runner(h, args.degree)
        checks.append(passed_check(f"inverted via {shown.method}"))
    return Report(
        command="invert",
        args={"mapfile": str(args.mapfile), "degree": args.degree,
              "method": args.method},
        input_digest=_digest_file(args.mapfile),
        checks=tuple(checks),
        result=_g_result(shown),
    )


# -- verify -------------------------------------------------------------------


def _symbol_battery(n: int) -> Check:
    vs = VarSet.xiz(n)
    for xa in itertools.product(range(3), repeat=n):
        if sum(xa) > 2:
            continue
        for zb in itertools.product(range(3), repeat=n):
            if sum(zb) > 2:
                continue
            rep = verify_phi_normal_order(SparsePoly.monomial(vs, xa + zb))
            if not rep.passed:
                return failed_check("symbol transport battery", witness=rep.witness)
    return passed_check("symbol transport battery",
                        detail=f"monomials |a|<=2, |b|<=2, n={n}")


def verify_suite(h: MapTuple, bound: int, xi_bound: int,
                 q: SparsePoly) -> list[Check]:
    checks: list[Check] = []

    results = cross_method_results(h, bound)
    base = results[FIXED_POINT]
    agree = (results[ABHYANKAR_GURJAR].G == base.G
             and results[LAMBDA_SERIES].G == base.G)
    checks.append(passed_check("cross-method agreement") if agree
                  else failed_check("cross-method agreement", witness=None))

    rt = verify_round_trip(h, base)
    checks.append(passed_check(rt.name) if rt.passed
                  else failed_check(rt.name, witness=rt.witness))

    oracle = invert_fixed_point(h, bound + 1)
    jf = jacobian_factor(h, bound)
    jf_of_g = compose(jf, oracle.G, bound).poly
    jg = det(jacobian(oracle.G), trunc=bound)
    chain = jf_of_g.mul(jg, trunc=bound)
    if chain == SparsePoly.one(h.vars):
        checks.append(passed_check("chain rule JF(G) * JG == 1"))
    else:
        checks.append(failed_check("chain rule JF(G) * JG == 1",
                                   witness=diff_witness(chain, SparsePoly.one(h.vars))))

    ident = ag_jacobian_identity(q, h, bound)
    checks.append(passed_check(ident.name) if ident.passed
                  else failed_check(ident.name, witness=ident.witness))

    moment_ok = True
    moment_witness = None
    target = VarSet.xiz(h.n)
    q_of_g = compose(q, oracle.G, bound).poly.lift(target)
    xi_n = xi_pairing(oracle.N)
    for k in range(3):
        got = xi_moment_series(h, q, k, bound)
        expected = q_of_g.mul(xi_n.power(k, trunc=bound), trunc=bound)
        if got != expected:
            moment_ok = False
            moment_witness = f"k={k}: {diff_witness(got, expected)}"
            break
    checks.append(passed_check("xi-moment series k=0,1,2") if moment_ok
                  else failed_check("xi-moment series k=0,1,2", witness=moment_witness))

    exp = verify_phi_exponential(h, q, xi_bound, bound)
    checks.append(passed_check(exp.name) if exp.passed
                  else failed_check(exp.name, witness=exp.witness))

    checks.append(_symbol_battery(h.n))
    return checks


def cmd_verify(args) -> Report:
    h, _meta = load_map_file(args.mapfile)
    if args.degree < 1:
        raise MapFileError("--degree must be >= 1")
    k_eff = args.xi_degree
    if k_eff > args.degree:
        print(f"warning: window rule caps effective xi-degree at {args.degree}",
              file=sys.stderr)
        k_eff = args.degree
    q = parse_poly(args.q, VarSet.z(h.n))
    checks = verify_suite(h, args.degree, k_eff, q)
    return Report(
        command="verify",
        args={"mapfile": str(args.mapfile), "degree": args.degree,
              "xi_degree": k_eff, "q": args.q},
        input_digest=_digest_file(args.mapfile),
        checks=tuple(checks),
    )


# -- lab ----------------------------------------------------------------------


def cmd_lab(args) -> Report:
    h, meta = load_map_file(args.mapfile)
    if args.m_max < 1:
        raise MapFileError("--m-max must be >= 1")
    ceiling = _term_ceiling()
    wanted = args.checks
    checks: list[Check] = []
    result: dict = {}
    flags: dict = {}

    def scan_result(rep) -> dict:
        return {
            "k": rep.k,
            "mmax": rep.mmax,
            "first_nonzero": rep.first_nonzero,
            "last_nonzero": rep.last_nonzero,
            "values": [{"m": m, "value": render_poly(v)} for m, v in rep.values],
        }

    try:
        if wanted in ("nilpotent", "all"):
            cert = is_nilpotent(h)
            checks.append(passed_check(
                "nilpotency certificate",
                detail=f"nilpotent={cert.nilpotent}"))
            result["det_deformation"] = render_poly(cert.det_deformation)
            result["nilpotent"] = cert.nilpotent
        if wanted in ("scan0", "all"):
            rep = vanishing_scan(h, 0, args.m_max, term_ceiling=ceiling)
            checks.append(passed_check(
                "vanishing scan k=0",
                detail=("all zero" if rep.all_zero
                        else f"first nonzero at m={rep.first_nonzero}")))
            result["scan0"] = scan_result(rep)
        if wanted in ("scan1", "all"):
            rep = vanishing_scan(h, 1, args.m_max, term_ceiling=ceiling)
            checks.append(passed_check(
                "vanishing scan k=1",
                detail=("all zero" if rep.all_zero
                        else f"last nonzero at m={rep.last_nonzero}")))
            result["scan1"] = scan_result(rep)
        if wanted in ("equiv", "all"):
            nt_degree = meta.get("nt_degree")
            eq = check_equivalences(h, args.m_max, known_nt_degree=nt_degree,
                                    term_ceiling=ceiling,
                                    label=meta.get("name", "map"))
            checks.extend(eq.checks)
            result["nilpotent"] = eq.nilpotent
    except TermCeilingExceeded as err:
        flags["resource_guard"] = str(err)
        flags["partial"] = True
        checks.append(failed_check("resource guard", witness=str(err),
                                   detail="scan aborted at term ceiling"))
    return Report(
        command="lab",
        args={"mapfile": str(args.mapfile), "m_max": args.m_max,
              "checks": args.checks},
        input_digest=_digest_file(args.mapfile),
        checks=tuple(checks),
        result=result or None,
        flags=flags,
    )


# -- corpus -------------------------------------------------------------------


def _corpus_items(args):
    if args.family == "mixed":
        return standard_corpus(seed=args.seed)
    if args.n is None:
        raise MapFileError("--n is required unless --family mixed")
    spec = CorpusSpec(n=args.n, family=args.family, count=args.count,
                      seed=args.seed)
    return gen_corpus(spec)


def _run_suite_on_item(item, args, ceiling) -> Check:
    try:
        if args.run == "invert-all":
            results = cross_method_results(item.h, args.degree, debug=args.debug)
            base = results[FIXED_POINT]
            if not (results[ABHYANKAR_GURJAR].G == base.G
                    and results[LAMBDA_SERIES].G == base.G):
                return failed_check(item.item_id, witness="cross-method mismatch")
            rt = verify_round_trip(item.h, base)
            if not rt.passed:
                return failed_check(item.item_id, witness=rt.witness)
            if item.known_n is not None:
                for known, got in zip(item.known_n.components, base.N.components):
                    if known.truncate_z(args.degree) != got:
                        return failed_check(item.item_id,
                                            witness="known inverse mismatch")
            return passed_check(item.item_id, detail=f"invert-all D={args.degree}")
        if args.run == "lab":
            if not item.is_polynomial:
                return skipped_check(item.item_id, detail="series map; lab is exact-only")
            eq = check_equivalences(item.h, args.m_max,
                                    known_nt_degree=item.nt_degree,
                                    term_ceiling=ceiling, label=item.item_id)
            bad = [c for c in eq.checks if c.status == "fail"]
            if bad:
                return failed_check(item.item_id, witness=bad[0].witness,
                                    detail=bad[0].name)
            return passed_check(
                item.item_id,
                detail=f"lab mmax={args.m_max}, nilpotent={eq.nilpotent}")
        # verify suite
        q = SparsePoly.one(item.h.vars)
        checks = verify_suite(item.h, args.degree, args.xi_degree, q)
        bad = [c for c in checks if c.status == "fail"]
        if bad:
            return failed_check(item.item_id, witness=bad[0].witness, detail=bad[0].name)
        return passed_check(item.item_id,
                            detail=f"verify D={args.degree} K={args.xi_degree}")
    except (TruncationError, PreconditionError) as err:
        return failed_check(item.item_id, witness=str(err), detail="contract")


def cmd_corpus(args) -> Report:
    items = _corpus_items(args)
    ceiling = _term_ceiling()
    checks: list[Check] = []
    guard_hit = False
    flags: dict = {}
    for item in sorted(items, key=lambda i: i.item_id):
        try:
            checks.append(_run_suite_on_item(item, args, ceiling))
        except TermCeilingExceeded as err:
            guard_hit = True
            checks.append(failed_check(item.item_id, witness=str(err),
                                       detail="resource guard"))
    if guard_hit:
        flags["resource_guard"] = True
        flags["partial"] = True
    descriptor = {"family": args.family, "n": args.n, "count": args.count,
                  "seed": args.seed, "run": args.run}
    summary = {
        "items": len(checks),
        "passed": sum(1 for c in checks if c.status == "pass"),
        "failed": sum(1 for c in checks if c.status == "fail"),
        "skipped": sum(1 for c in checks if c.status == "skip"),
    }
    return Report(
        command="corpus",
        args=descriptor,
        input_digest=_digest(json.dumps(descriptor, sort_keys=True).encode()),
        checks=tuple(checks),
        result=summary,
        flags=flags,
    )


# -- plumbing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agcalc",
        description=("Exact inversion of formal maps F = z - H, phase-space "
                     "identity checks, and Jacobian nilpotency scans."))
    parser.add_argument("--version", action="version", version=f"agcalc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text",
                       help="report format on stdout")
        p.add_argument("--out", metavar="FILE", default=None,
                       help="also write the JSON report to FILE")
        p.add_argument("--timing", action="store_true",
                       help="print elapsed seconds to stderr (kept out of reports)")

    p = sub.add_parser("invert", help="compute the inverse map to a degree")
    p.add_argument("mapfile")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--method", choices=("fixedpoint", "ag", "lambda", "all"),
                   default="all")
    p.add_argument("--debug", action="store_true",
                   help="verify that every summation-cutoff discard has order > D")
    common(p)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("verify", help="run the identity suite on a map")
    p.add_argument("mapfile")
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--xi-degree", type=int, default=3, dest="xi_degree")
    p.add_argument("--q", default="1", help="polynomial literal, e.g. '1 + z1*z2'")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lab", help="nilpotency and vanishing-scan reports")
    p.add_argument("mapfile")
    p.add_argument("--m-max", type=int, default=6, dest="m_max")
    p.add_argument("--checks", choices=("nilpotent", "scan0", "scan1", "equiv", "all"),
                   default="all")
    common(p)
    p.set_defaults(func=cmd_lab)

    p = sub.add_parser("corpus", help="generate a corpus and run a suite over it")
    p.add_argument("--family", required=True,
                   choices=("triangular", "cubic", "control", "series", "mixed"))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--run", required=True, choices=("invert-all", "lab", "verify"))
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--m-max", type=int, default=4, dest="m_max")
    p.add_argument("--xi-degree", type=int, default=2, dest="xi_degree")
    p.add_argument("--debug", action="store_true")
    common(p)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        report: Report = args.func(args)
    except (MapFileError, ContractViolation, PreconditionError, TruncationError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except TermCeilingExceeded as err:
        print(f"resource guard: {err}", file=sys.stderr)
        return EXIT_RESOURCE
    except AgcalcError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAIL

    if args.timing:
        print(f"elapsed_seconds={time.perf_counter() - started:.3f}", file=sys.stderr)
    payload = report.to_json() if args.format == "json" else report.to_text()
    sys.stdout.write(payload)
    if args.out:
        Path(args.out).write_text(report.to_json(), encoding="utf-8")
    if report.flags.get("resource_guard"):
        return EXIT_RESOURCE
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
