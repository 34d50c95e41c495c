"""JSON and CSV wire formats.

Scalars are {"re": "num/den", "im": "num/den"} with decimal integer
strings of arbitrary length; polynomials are {"coeffs": [scalar, ...]}
ascending; maps are {"k": int, "p": [poly, poly, poly]}.  All encoders
sort keys and emit compact separators so identical inputs give
byte-identical output.
"""

from __future__ import annotations

import io
import json
from fractions import Fraction

from .eellswood import ComponentDescriptor, HarmonicMapRep
from .exact import BiPoly, GaussianRational, Poly
from .holomap import Divisor, HoloMap, validate
from .quadrature import VerificationReport
from .strata import StratumPoint, build_L, kernel_exact

SCHEMA = "harmap/1"


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


# ---------------------------------------------------------------------------
# scalars and polynomials


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def scalar_to_json(c: GaussianRational) -> dict:
    return {"re": _frac_str(c.re), "im": _frac_str(c.im)}


def scalar_from_json(obj) -> GaussianRational:
    if not isinstance(obj, dict) or set(obj) != {"re", "im"}:
        raise ValueError(f"malformed scalar: {obj!r}")
    return GaussianRational(Fraction(obj["re"]), Fraction(obj["im"]))


def poly_to_json(p: Poly) -> dict:
    return {"coeffs": [scalar_to_json(c) for c in p.coeffs]}


def poly_from_json(obj) -> Poly:
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise ValueError(f"malformed polynomial: {obj!r}")
    return Poly([scalar_from_json(c) for c in obj["coeffs"]])


def bipoly_to_json(b: BiPoly) -> dict:
    return {
        "terms": [
            {"i": i, "j": j, "c": scalar_to_json(c)} for (i, j), c in b.sorted_terms()
        ]
    }


def bipoly_from_json(obj) -> BiPoly:
    if not isinstance(obj, dict) or "terms" not in obj:
        raise ValueError(f"malformed bipolynomial: {obj!r}")
    return BiPoly([((t["i"], t["j"]), scalar_from_json(t["c"])) for t in obj["terms"]])


# ---------------------------------------------------------------------------
# maps, divisors, harmonic representations


def holomap_to_json(f: HoloMap) -> dict:
    return {"k": f.k, "p": [poly_to_json(q) for q in f.p]}


def holomap_from_json(obj) -> HoloMap:
    if not isinstance(obj, dict) or "p" not in obj or len(obj["p"]) != 3:
        raise ValueError("malformed map: expected {'k': int, 'p': [poly, poly, poly]}")
    f = validate(*(poly_from_json(q) for q in obj["p"]))
    if "k" in obj and obj["k"] != f.k:
        raise ValueError(f"declared degree {obj['k']} but triple has degree {f.k}")
    return f


def divisor_to_json(d: Divisor) -> dict:
    return {
        "finite": poly_to_json(d.finite),
        "inf": d.inf,
        "roots_approx": [[z.real, z.imag] for z in d.roots_approx()],
    }


def divisor_from_json(obj) -> Divisor:
    if not isinstance(obj, dict) or "finite" not in obj or "inf" not in obj:
        raise ValueError("malformed divisor")
    return Divisor(poly_from_json(obj["finite"]), int(obj["inf"]))


def harmonic_to_json(rep: HarmonicMapRep) -> dict:
    return {
        "schema": SCHEMA,
        "source": holomap_to_json(rep.source),
        "k": rep.k,
        "r": rep.r,
        "deg": rep.predicted_degree,
        "energy": rep.predicted_energy,
        "lift": [bipoly_to_json(v) for v in rep.lift],
    }


def stratum_record(pt: StratumPoint, divisor: Divisor) -> dict:
    return {
        "a": poly_to_json(pt.a),
        "f": holomap_to_json(pt.f),
        "r": pt.r,
        "divisor": divisor_to_json(divisor),
    }


def stratum_point_from_json(obj) -> StratumPoint:
    if not isinstance(obj, dict) or "a" not in obj or "f" not in obj:
        raise ValueError("malformed stratum record")
    a = poly_from_json(obj["a"])
    f = holomap_from_json(obj["f"])
    witness = tuple(kernel_exact(build_L(a, f.p[0])))
    return StratumPoint(a, f, witness)


# ---------------------------------------------------------------------------
# reports


def verification_to_json(report: VerificationReport) -> dict:
    return {
        "schema": SCHEMA,
        "degree_num": report.degree_num,
        "energy_num": report.energy_num,
        "e_prime": report.e_prime,
        "e_doubleprime": report.e_doubleprime,
        "error_est": report.error_est,
        "predicted": report.predicted,
        "snapped": report.snapped,
        "tension_residuals": [[h, res] for h, res in report.tension_residuals],
        "tension_order": report.tension_order,
        "flags": report.flags,
        "grid": report.grid,
        "levels": report.levels,
        "pass": report.all_ok,
    }


def path_to_json(path, report) -> dict:
    return {
        "schema": SCHEMA,
        "k": path.k,
        "r": path.r,
        "n_steps": len(path.steps) - 1,
        "nominal_step": path.nominal_step,
        "steps": [
            {
                "t": step.t,
                "a": [[c.real, c.imag] for c in step.a],
                "p": [[[c.real, c.imag] for c in row] for row in step.p],
                "flags": {k: v for k, v in step.flags.items()},
                "repairs": step.repairs,
            }
            for step in path.steps
        ],
        "verification": {
            "quadrature": [
                {"step": i, "degree_num": d, "energy_num": e, "ok": ok}
                for i, d, e, ok in report.quadrature
            ],
            "continuity_ok": report.continuity_ok,
            "max_step_distance": report.max_step_distance,
            "failures": [[i, why] for i, why in report.failures],
            "pass": report.all_ok,
        },
    }


# ---------------------------------------------------------------------------
# CSV emitters (hand-off format for plotting)


def component_table_csv(rows: list[ComponentDescriptor]) -> str:
    out = io.StringIO()
    out.write(f"# {SCHEMA}\n")
    out.write("k_prime,r,energy,complex_dim,source_k\n")
    for d in rows:
        out.write(f"{d.k_prime},{d.r},{d.energy},{d.complex_dim},{d.source_hol_degree}\n")
    return out.getvalue()


def residuals_csv(rows) -> str:
    out = io.StringIO()
    out.write(f"# {SCHEMA}\n")
    out.write("h,residual\n")
    for h, res in rows:
        out.write(f"{h!r},{res!r}\n")
    return out.getvalue()


def path_csv(path, report) -> str:
    quad = {i: (d, e) for i, d, e, _ok in report.quadrature}
    out = io.StringIO()
    out.write(f"# {SCHEMA}\n")
    out.write("step,t,index_margin,full_margin,coprime_margin,repairs,degree_num,energy_num\n")
    for i, step in enumerate(path.steps):
        d, e = quad.get(i, (None, None))
        tail = f"{d!r},{e!r}" if d is not None else ","
        out.write(
            f"{i},{step.t!r},{step.flags['index_margin']!r},{step.flags['full_margin']!r},"
            f"{step.flags['coprime_margin']!r},{step.repairs},{tail}\n"
        )
    return out.getvalue()
