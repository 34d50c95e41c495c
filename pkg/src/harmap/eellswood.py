"""From a full holomorphic map to its non-minimal harmonic partner.

The harmonic map is the intersection of the first associated curve with
the orthogonal complement of the original line; concretely it is spanned
by the projection of p' off p.  We store the denominator-cleared lift

    V = <p,p> p' - <p',p> p

as an exact vector of bivariate polynomials, which turns the two
containment statements into zero-tolerance certificates:

    <V, p> == 0            (V lies in the orthogonal complement of p)
    V . (p ^ p') == 0      (V lies in the plane of p and p', via the
                            bilinear triple pairing)

The common factor of V vanishing at ramification points is not removed
globally (no bivariate GCD); float evaluation near those points falls
back to a perturbed sample point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NearSingular, NotFull
from .exact import BiPoly, Poly, hermitian_pairing
from .holomap import Divisor, HoloMap, is_full, ramification_data, wedge_curve

BiTriple = tuple[BiPoly, BiPoly, BiPoly]


@dataclass(frozen=True)
class HarmonicMapRep:
    """Exact lift of the constructed harmonic map plus its provenance
    and the integer invariants predicted from (k, r)."""

    lift: BiTriple
    source: HoloMap
    k: int
    r: int
    predicted_degree: int
    predicted_energy: int
    divisor: Divisor


@dataclass(frozen=True)
class ComponentDescriptor:
    """One non-minimal component: degree, index, critical energy level,
    claimed complex dimension, and the holomorphic source degree."""

    k_prime: int
    r: int
    energy: int
    complex_dim: int
    source_hol_degree: int


def gauss_transform(f: HoloMap) -> HarmonicMapRep:
    """Construct the harmonic map attached to a full holomorphic map.

    The lift satisfies both containment identities exactly by
    construction; predicted degree and energy are k-2-r and 3k-2-r.
    """
    if not is_full(f):
        raise NotFull("construction requires a full map")
    p = f.p
    dp = tuple(q.derivative() for q in p)
    pp = hermitian_pairing(p, p)
    dpp = hermitian_pairing(dp, p)
    lift = tuple(pp * BiPoly.from_poly(dq) - dpp * BiPoly.from_poly(q) for q, dq in zip(p, dp))
    if all(v.is_zero for v in lift):
        raise NotFull("projection of p' off p vanishes identically")
    divisor, _curve = ramification_data(f)
    r = divisor.total_degree
    return HarmonicMapRep(
        lift=lift,
        source=f,
        k=f.k,
        r=r,
        predicted_degree=f.k - 2 - r,
        predicted_energy=3 * f.k - 2 - r,
        divisor=divisor,
    )


def orthogonality_residual(rep: HarmonicMapRep) -> BiPoly:
    """<V, p> as an exact BiPoly; zero for every constructed map."""
    acc = BiPoly.zero()
    for v, q in zip(rep.lift, rep.source.p):
        acc = acc + v * BiPoly.from_poly(q, conjugated=True)
    return acc


def wedge_pairing(v: BiTriple, h) -> BiPoly:
    """Bilinear pairing of a vector with a wedge in (01, 02, 12) component
    order: v0*h12 - v1*h02 + v2*h01.  Vanishes iff v lies in the plane
    the wedge represents."""
    h01, h02, h12 = (hi if isinstance(hi, BiPoly) else BiPoly.from_poly(hi) for hi in h)
    return v[0] * h12 - v[1] * h02 + v[2] * h01


def containment_residual(rep: HarmonicMapRep) -> BiPoly:
    """V paired against p ^ p'; zero certifies phi(z) inside the
    associated plane."""
    return wedge_pairing(rep.lift, wedge_curve(rep.source))


def _lift_value(rep: HarmonicMapRep, z: complex) -> tuple[np.ndarray, float]:
    v = np.array([comp(z) for comp in rep.lift])
    # scale bound: sum of |coefficients| times growth of the monomials
    za = 1.0 + abs(z)
    scale = 0.0
    for comp in rep.lift:
        for (i, j), c in comp.terms.items():
            scale += abs(c.to_complex()) * za ** (i + j)
    return v, scale


def evaluate(rep: HarmonicMapRep, z: complex, threshold: float = 1e-8) -> np.ndarray:
    """Unit representative of the harmonic map at z (phase arbitrary).

    Raises NearSingular when the float lift is too small relative to its
    coefficient scale (near a ramification point).
    """
    v, scale = _lift_value(rep, z)
    norm = float(np.linalg.norm(v))
    if scale == 0.0 or norm < threshold * scale:
        raise NearSingular(
            f"lift nearly vanishes at z={z!r}", z=z, ratio=norm / scale if scale else 0.0
        )
    return v / norm


def evaluate_robust(rep: HarmonicMapRep, z: complex, threshold: float = 1e-8):
    """Like `evaluate`, but retreats to a perturbed point when the lift
    vanishes; returns (unit vector, perturbation radius used)."""
    radius = 0.0
    for _ in range(40):
        try:
            return evaluate(rep, z + radius, threshold), radius
        except NearSingular:
            radius = 1e-12 if radius == 0.0 else radius * 10.0
    raise NearSingular(f"no usable point near z={z!r}", z=z)


def classify_component(k_prime: int, r: int) -> ComponentDescriptor:
    """Invariants of the component holding maps of degree k' built from
    sources with ramification index r:

        energy      = 3|k'| + 2r + 4
        complex dim = 3|k'| + r + 8
        source deg  = |k'| + r + 2

    Consistent with the source-side formulas: with k = |k'|+r+2 the
    energy equals 3k-2-r and the degree equals k-2-r.
    """
    if r < 0:
        raise ValueError("ramification index must be nonnegative")
    a = abs(k_prime)
    k = a + r + 2
    if r > k - 2:
        raise ValueError(f"index {r} exceeds source bound {k - 2}")
    return ComponentDescriptor(
        k_prime=k_prime,
        r=r,
        energy=3 * a + 2 * r + 4,
        complex_dim=3 * a + r + 8,
        source_hol_degree=k,
    )
