"""Command-line surface: construct, ramify, verify, sample, table, path,
selftest.  JSON on stdout, typed errors as JSON on stderr.

Exit codes: 0 success, 1 invalid input, 2 computation failure.  Output is
byte-identical for identical (inputs, seed, version).  HARMAP_THREADS
caps the worker pool used for batch sampling.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import jsonio, plots
from .eellswood import gauss_transform, orthogonality_residual, containment_residual, classify_component
from .errors import HarmapError
from .exact import Poly
from .holomap import dependency_identity_check, ramification_data, validate
from .paths import connect, verify_path
from .quadrature import QuadratureConfig, verify_harmonic_map
from .strata import build_L, component_table, kernel_exact, random_full_map, sample_stratum


def worker_count() -> int:
    env = os.environ.get("HARMAP_THREADS", "")
    try:
        n = int(env)
    except ValueError:
        n = 0
    return max(1, n) if n else min(8, os.cpu_count() or 1)


def _read_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(obj) -> None:
    sys.stdout.write(jsonio.dumps(obj))


# ---------------------------------------------------------------------------
# subcommands


def cmd_construct(args) -> int:
    f = jsonio.holomap_from_json(_read_json(args.file))
    rep = gauss_transform(f)
    _emit(jsonio.harmonic_to_json(rep))
    return 0


def cmd_ramify(args) -> int:
    f = jsonio.holomap_from_json(_read_json(args.file))
    divisor, curve = ramification_data(f)
    _emit(
        {
            "schema": jsonio.SCHEMA,
            "r": divisor.total_degree,
            "divisor": jsonio.divisor_to_json(divisor),
            "curve": {
                "q": [jsonio.poly_to_json(q) for q in curve.q],
                "degree": curve.degree,
            },
        }
    )
    return 0


def cmd_verify(args) -> int:
    f = jsonio.holomap_from_json(_read_json(args.file))
    rep = gauss_transform(f)
    cfg = QuadratureConfig(resolution=args.grid)
    report = verify_harmonic_map(rep, cfg)
    _emit(jsonio.verification_to_json(report))
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "residuals.csv").write_text(jsonio.residuals_csv(report.tension_residuals))
        plots.save_verification_figure(report, out / "verify.png")
    return 0


def cmd_sample(args) -> int:
    seeds = [args.seed + i for i in range(args.count)]

    def one(s: int):
        pt = sample_stratum(args.k, args.r, s)
        divisor, _ = ramification_data(pt.f)
        rec = jsonio.stratum_record(pt, divisor)
        rec["seed"] = s
        return rec

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        records = list(pool.map(one, seeds))
    _emit({"schema": jsonio.SCHEMA, "k": args.k, "r": args.r, "samples": records})
    return 0


def cmd_table(args) -> int:
    rows = component_table(args.max_k, args.max_r)
    csv = jsonio.component_table_csv(rows)
    sys.stdout.write(csv)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "table.csv").write_text(csv)
        plots.save_table_figure(rows, out / "table.png")
    return 0


def cmd_path(args) -> int:
    start = jsonio.stratum_point_from_json(_read_json(args.src))
    end = jsonio.stratum_point_from_json(_read_json(args.dst))
    path = connect(start, end, args.steps, seed=args.seed)
    report = verify_path(path)
    _emit(jsonio.path_to_json(path, report))
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "path.csv").write_text(jsonio.path_csv(path, report))
        plots.save_path_figure(path, report, out / "path.png")
    return 0


def cmd_selftest(args) -> int:
    checks = run_selftest(args.seed)
    ok = all(checks.values())
    _emit({"schema": jsonio.SCHEMA, "checks": checks, "pass": ok})
    return 0 if ok else 2


def run_selftest(seed: int = 0) -> dict:
    """Exact-identity suite: algebra dependency identity, construction
    certificates, formula consistency, and constraint-kernel agreement."""
    from .exact import poly_divrem

    checks = {}

    fixtures = [
        (Poly.one(), Poly.x(), Poly.monomial(2)),
        (Poly([1, 0, 0, 1]), Poly.monomial(2), Poly.monomial(3)),
    ]
    maps = [gauss_transform(validate(*t)) for t in fixtures]
    maps += [gauss_transform(random_full_map(k, seed + k)) for k in (3, 4, 5)]

    checks["dependency_identity"] = all(
        dependency_identity_check(rep.source) for rep in maps
    )
    checks["orthogonality"] = all(orthogonality_residual(rep).is_zero for rep in maps)
    checks["containment"] = all(containment_residual(rep).is_zero for rep in maps)

    consistent = True
    for k in range(2, 21):
        for r in range(0, k - 1):
            d = classify_component(k - 2 - r, r)
            consistent &= d.source_hol_degree == k and d.energy == 3 * k - 2 - r
    checks["formula_consistency"] = consistent

    kernel_ok = True
    for rep in maps:
        pt_a = rep.divisor.finite
        if pt_a.degree >= 1 and rep.source.p[0](0j) != 0:
            L = build_L(pt_a, rep.source.p[0])
            for u in kernel_exact(L):
                q = rep.source.p[0] * u.derivative() - rep.source.p[0].derivative() * u
                kernel_ok &= poly_divrem(q, pt_a)[1].is_zero
    checks["constraint_kernel"] = kernel_ok
    return checks


# ---------------------------------------------------------------------------
# parser / entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="harmap", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="harmonic map from a holomorphic map JSON")
    c.add_argument("-f", "--file", required=True)
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("ramify", help="ramification divisor, index, associated curve")
    c.add_argument("-f", "--file", required=True)
    c.set_defaults(func=cmd_ramify)

    c = sub.add_parser("verify", help="quadrature + harmonicity report for the constructed map")
    c.add_argument("-f", "--file", required=True)
    c.add_argument("--grid", type=int, default=48)
    c.add_argument("--out-dir", default=None, help="write CSV and figures here")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("sample", help="seeded stratum samples")
    c.add_argument("-k", type=int, required=True)
    c.add_argument("-r", type=int, required=True)
    c.add_argument("--count", type=int, required=True)
    c.add_argument("--seed", type=int, required=True)
    c.set_defaults(func=cmd_sample)

    c = sub.add_parser("table", help="component invariants table (CSV)")
    c.add_argument("--max-k", type=int, required=True)
    c.add_argument("--max-r", type=int, required=True)
    c.add_argument("--out-dir", default=None, help="write CSV and figures here")
    c.set_defaults(func=cmd_table)

    c = sub.add_parser("path", help="in-stratum path between two sample records")
    c.add_argument("--from", dest="src", required=True)
    c.add_argument("--to", dest="dst", required=True)
    c.add_argument("--steps", type=int, default=50)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--out-dir", default=None, help="write CSV and figures here")
    c.set_defaults(func=cmd_path)

    c = sub.add_parser("selftest", help="run the exact-identity suite")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_selftest)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HarmapError as exc:
        sys.stderr.write(
            jsonio.dumps(
                {
                    "schema": jsonio.SCHEMA,
                    "error": exc.code,
                    "message": str(exc),
                    "details": {k: repr(v) for k, v in exc.details.items()},
                }
            )
        )
        return 2
    except (ValueError, KeyError, TypeError, json.JSONDecodeError, OSError) as exc:
        sys.stderr.write(
            jsonio.dumps(
                {"schema": jsonio.SCHEMA, "error": "InvalidInput", "message": str(exc)}
            )
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
