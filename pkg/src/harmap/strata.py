"""Stratification machinery: divisibility constraints, exact kernels,
stratum samplers, codimension checks, and degeneration families.

A point of the stratum chart is a pair (a, f): a monic divisor
polynomial a of degree r together with a map f = [p0, p1, p2] whose
ramification divisor contains the roots of a.  The divisibility of the
wedge components by a is linear in each p_i once p0 is fixed: u lies in
the kernel of the constraint matrix L(a, p0) exactly when a divides
p0*u' - p0'*u.  Two of the three divisibility conditions suffice; the
third follows from the dependency identity whenever a and p0 are
coprime, which keeps the constraint count at 2r.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .eellswood import ComponentDescriptor, classify_component
from .errors import IndeterminateRank, NotAMap, NotFull, SamplingFailure
from .exact import (
    GR_ZERO,
    GaussianRational,
    Poly,
    divides,
    poly_divrem,
    poly_gcd,
    poly_gcd_many,
)
from .holomap import Divisor, HoloMap, is_full, ramification_data, validate


@dataclass(frozen=True)
class StratumPoint:
    """Sampled chart point: divisor polynomial, map, and the exact kernel
    basis that witnessed the construction."""

    a: Poly
    f: HoloMap
    kernel_witness: tuple

    @property
    def r(self) -> int:
        return int(self.a.degree)


@dataclass(frozen=True)
class LMatrix:
    """Constraint matrix of u -> (p u' - p' u) mod a in the coefficient
    bases of V_k and V_{r-1}."""

    entries: tuple          # r rows of k+1 GaussianRational entries
    a: Poly
    p: Poly
    k: int

    @property
    def shape(self) -> tuple:
        return (len(self.entries), self.k + 1)


def build_L(a: Poly, p: Poly) -> LMatrix:
    """Column j is the coefficient vector of (p*(z^j)' - p'*z^j) mod a.

    Requires a monic and coprime to p; the kernel then consists of the
    u with a dividing p*u' - p'*u.
    """
    if a.is_zero or not a.lead() == 1:
        raise ValueError("divisor polynomial must be monic")
    if not a.degree == 0 and poly_gcd(a, p).degree > 0:
        raise ValueError("divisor polynomial and p must be coprime")
    r = int(a.degree)
    k = max(int(p.degree), 0)
    dp = p.derivative()
    cols = []
    for j in range(k + 1):
        zj = Poly.monomial(j)
        rem = poly_divrem(p * zj.derivative() - dp * zj, a)[1] if r else Poly.zero()
        cols.append(rem.padded(r) if r else [])
    rows = tuple(tuple(cols[j][m] for j in range(k + 1)) for m in range(r))
    return LMatrix(rows, a, p, k)


def kernel_exact(M: LMatrix) -> list[Poly]:
    """Exact kernel basis as polynomials, ordered by ascending free column."""
    vectors = linalg.kernel([list(row) for row in M.entries], M.k + 1)
    return [Poly(v) for v in vectors]


# ---------------------------------------------------------------------------
# samplers


def _rand_scalar(rng: random.Random, lo=-3, hi=3) -> GaussianRational:
    return GaussianRational(rng.randint(lo, hi), rng.randint(lo, hi))


def _rand_poly(rng: random.Random, deg: int, exact_degree=True) -> Poly:
    coeffs = [_rand_scalar(rng) for _ in range(deg + 1)]
    if exact_degree:
        while not coeffs[-1]:
            coeffs[-1] = _rand_scalar(rng)
    return Poly(coeffs)


def _distinct_roots(rng: random.Random, count: int) -> list[GaussianRational]:
    roots: list[GaussianRational] = []
    while len(roots) < count:
        x = _rand_scalar(rng)
        if all(x != y for y in roots):
            roots.append(x)
    return roots


def random_full_map(k: int, seed: int, max_attempts: int = 1000) -> HoloMap:
    """Seeded generic full map of degree exactly k (k >= 2)."""
    if k < 2:
        raise ValueError("full maps need degree at least 2")
    # string seed: deterministic across processes, unlike tuple hashing
    rng = random.Random(f"full:{k}:{seed}")
    for _ in range(max_attempts):
        try:
            f = validate(*(_rand_poly(rng, k, exact_degree=(i == 0)) for i in range(3)))
        except NotAMap:
            continue
        if f.k == k and is_full(f):
            return f
    raise SamplingFailure(f"no full degree-{k} map after {max_attempts} draws")


def sample_stratum(k: int, r: int, seed: int, max_attempts: int = 1000) -> StratumPoint:
    """Seeded point of the (k, r) stratum with divisor exactly the roots
    of the sampled monic a (small-integer Gaussian-rational roots).

    Draws a and p0 coprime, fills p1 and p2 from the exact kernel of the
    constraint matrix, and accepts only when the triple is coprime, full,
    of degree exactly k, and has exact ramification divisor <roots of a>.
    """
    if not (0 <= r <= k - 2 and 2 * r <= 3 * k - 6):
        raise ValueError(f"stratum ({k}, {r}) admits no full maps")
    rng = random.Random(f"stratum:{k}:{r}:{seed}")
    last = "no attempts made"
    for _ in range(max_attempts):
        a = Poly.from_roots(_distinct_roots(rng, r)) if r else Poly.one()
        p0 = _rand_poly(rng, k)
        if r and poly_gcd(a, p0).degree > 0:
            last = "p0 shares a root with the divisor polynomial"
            continue
        L = build_L(a, p0)
        basis = kernel_exact(L)
        if len(basis) != k + 1 - r:
            last = "constraint matrix not of full rank"
            continue
        p1 = _kernel_combo(rng, basis)
        p2 = _kernel_combo(rng, basis)
        try:
            f = validate(p0, p1, p2)
        except NotAMap:
            last = "triple has a common zero"
            continue
        if f.k != k:
            last = "degree dropped below k"
            continue
        if not is_full(f):
            last = "triple is not full"
            continue
        divisor, _ = ramification_data(f)
        if divisor != Divisor(a, 0):
            last = "extra ramification beyond the prescribed divisor"
            continue
        return StratumPoint(a, f, tuple(basis))
    raise SamplingFailure(f"stratum ({k},{r}) sampling failed: {last}", k=k, r=r, reason=last)


def _kernel_combo(rng: random.Random, basis: list[Poly]) -> Poly:
    while True:
        coeffs = [_rand_scalar(rng) for _ in basis]
        if any(coeffs):
            break
    acc = Poly.zero()
    for c, b in zip(coeffs, basis):
        acc = acc + b * c
    return acc


# ---------------------------------------------------------------------------
# numerical codimension


@dataclass(frozen=True)
class CodimReport:
    rank: int
    codim_estimate: int
    gap: float
    singular_values: tuple
    ambient_dim: int
    dim_estimate: int


def _numerical_rank(M: np.ndarray, gap_threshold: float = 1e6) -> tuple[int, float]:
    """Rank cut at the largest consecutive singular-value ratio gap; the
    machine floor acts as one more candidate cut so full rank is
    detectable.  Returns (rank, gap)."""
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0, float("inf")
    floor = s[0] * np.finfo(float).eps * max(M.shape)
    padded = np.concatenate([s, [floor]])
    ratios = padded[:-1] / np.maximum(padded[1:], 1e-300)
    cut = int(np.argmax(ratios))
    return cut + 1, float(ratios[cut])


def codimension_check(pt: StratumPoint, gap_threshold: float = 1e6) -> CodimReport:
    """Rank of the float Jacobian of the 2r divisibility constraints with
    respect to all 3(k+1) triple coefficients, at the sampled point.

    Expected rank 2r; raises IndeterminateRank when no singular-value
    ratio gap exceeds the threshold.
    """
    a, f = pt.a, pt.f
    r, k = pt.r, pt.f.k
    if r == 0:
        return CodimReport(0, 0, float("inf"), (), 3 * (k + 1) - 1, 3 * (k + 1) - 1)
    p0, p1, p2 = f.p
    d0 = p0.derivative()

    def mod_a(q: Poly) -> list:
        return poly_divrem(q, a)[1].padded(r)

    rows = []
    for target, other in ((1, p1), (2, p2)):
        d_other = other.derivative()
        # derivative of (p0*other' - p0'*other) mod a in each coefficient
        block_p0 = []
        for j in range(k + 1):
            zj = Poly.monomial(j)
            block_p0.append(mod_a(zj * d_other - zj.derivative() * other))
        block_pi = [mod_a(p0 * Poly.monomial(j).derivative() - d0 * Poly.monomial(j)) for j in range(k + 1)]
        zero = [[GR_ZERO] * r for _ in range(k + 1)]
        blocks = [block_p0, zero, zero]
        blocks[target] = block_pi
        for m in range(r):
            row = []
            for block in blocks:
                row.extend(block[j][m] for j in range(k + 1))
            rows.append(row)

    M = np.array([[x.to_complex() for x in row] for row in rows])
    rank, gap = _numerical_rank(M)
    if gap < gap_threshold:
        raise IndeterminateRank(
            f"singular-value gap {gap:.3g} below threshold", gap=gap, k=k, r=r
        )
    svals = tuple(float(s) for s in np.linalg.svd(M, compute_uv=False))
    ambient = 3 * (k + 1) - 1
    return CodimReport(rank, rank, gap, svals, ambient, ambient - rank)


# ---------------------------------------------------------------------------
# degeneration families


@dataclass(frozen=True)
class FamilyEntry:
    t: Fraction
    index: int | None      # None when the triple fails validation
    note: str


@dataclass(frozen=True)
class DegenerationReport:
    kind: str
    entries: tuple
    limit: FamilyEntry

    @property
    def generic_index(self) -> int | None:
        vals = [e.index for e in self.entries if e.index is not None]
        return min(vals) if vals else None

    @property
    def index_only_jumps_up(self) -> bool:
        g = self.generic_index
        if self.limit.index is None:
            return True  # degree drop: the limit left the space entirely
        return g is not None and self.limit.index >= g


_FAMILY_TS = tuple(Fraction(1, 2**n) for n in range(5))


def _family_entry(triple, t: Fraction) -> FamilyEntry:
    try:
        f = validate(*triple)
    except NotAMap:
        return FamilyEntry(t, None, "degree-drop (common zero)")
    if not is_full(f):
        return FamilyEntry(t, None, "not full")
    divisor, _ = ramification_data(f)
    return FamilyEntry(t, divisor.total_degree, "")


def degeneration_family(k: int, seed: int, kind: str = "ramified_limit") -> DegenerationReport:
    """One-parameter family whose t -> 0 limit is deeper in the
    stratification; exact ramification indices at sampled rational t.

    kinds: "ramified_limit" (limit ramified, generic t less so),
    "common_root" (limit rejected by validation: degree drop),
    "constant" (control family).
    """
    if k < 3:
        raise ValueError("degeneration families need degree at least 3")
    rng = random.Random(f"family:{k}:{seed}:{kind}")
    if kind == "ramified_limit":
        limit_pt = sample_stratum(k, 1, seed)
        base = limit_pt.f.p
        direction = [_rand_poly(rng, k - 1) for _ in range(3)]
    elif kind == "common_root":
        inner = random_full_map(k - 1, seed)
        z = Poly.x()
        base = tuple(z * q for q in inner.p)
        direction = [Poly([_rand_scalar(rng)]) for _ in range(3)]
        while all(not d.coeffs for d in direction):
            direction = [Poly([_rand_scalar(rng)]) for _ in range(3)]
    elif kind == "constant":
        limit_pt = sample_stratum(k, 1, seed)
        base = limit_pt.f.p
        direction = [Poly.zero()] * 3
    else:
        raise ValueError(f"unknown family kind {kind!r}")

    entries = []
    for t in _FAMILY_TS:
        scalar = GaussianRational(t)
        triple = tuple(b + d * scalar for b, d in zip(base, direction))
        entries.append(_family_entry(triple, t))
    limit = _family_entry(base, Fraction(0))
    return DegenerationReport(kind, tuple(entries), limit)


# ---------------------------------------------------------------------------
# divisors as point multisets


def divisor_points(d: Divisor) -> tuple[list[complex], int]:
    """Float point multiset view: finite roots plus infinity multiplicity."""
    if d.finite.degree <= 0:
        return [], d.inf
    roots = np.roots([c.to_complex() for c in d.finite.coeffs][::-1])
    return sorted((complex(x) for x in roots), key=lambda w: (w.real, w.imag)), d.inf


def _snap_point(x: complex, max_den: int = 64) -> GaussianRational:
    return GaussianRational(
        Fraction(x.real).limit_denominator(max_den),
        Fraction(x.imag).limit_denominator(max_den),
    )


def divisor_roundtrip(d: Divisor) -> Divisor:
    """Divisor -> point multiset -> divisor.

    Finite roots are snapped to small Gaussian rationals and verified by
    exact division, so exact-root divisors round-trip exactly; otherwise
    the finite part is rebuilt from the float roots.
    """
    points, inf = divisor_points(d)
    remaining = d.finite.monic() if not d.finite.is_zero else Poly.one()
    exact_roots = []
    ok = True
    for x in points:
        cand = _snap_point(x)
        factor = Poly((-cand, 1))
        if divides(factor, remaining):
            remaining = poly_divrem(remaining, factor)[0]
            exact_roots.append(cand)
        else:
            ok = False
            break
    if ok and remaining.degree == 0:
        return Divisor(Poly.from_roots(exact_roots), inf)
    # float reconstruction: exact-from-float coefficients of prod (z - x_i)
    coeffs = np.poly(points)[::-1] if points else np.array([1.0 + 0j])
    finite = Poly(
        [GaussianRational(Fraction(c.real), Fraction(c.imag)) for c in coeffs]
    ).monic()
    return Divisor(finite, inf)


# ---------------------------------------------------------------------------
# the product stratification of triples (gcd view)


def stratum_embed(b: Poly, q: tuple, ambient_k: int) -> tuple:
    """Multiply a divisor class into a coprime triple: ([b], [q]) -> [b q]."""
    out = tuple(b * qi for qi in q)
    if max(int(p.degree) for p in out if not p.is_zero) > ambient_k:
        raise ValueError("product leaves the ambient coefficient space")
    return out


def stratum_factor(triple: tuple, ambient_k: int) -> tuple[int, Poly, tuple]:
    """Factor a triple as b * q with q coprime; the stratum index is the
    ambient degree minus the max degree of q (degree drop counts)."""
    if all(p.is_zero for p in triple):
        raise ValueError("zero triple has no stratum")
    b = poly_gcd_many(triple)
    q = tuple(poly_divrem(p, b)[0] for p in triple)
    max_q = int(max(p.degree for p in q if not p.is_zero))
    return ambient_k - max_q, b, q


# ---------------------------------------------------------------------------
# component table


def component_table(max_k_prime: int, max_r: int) -> list[ComponentDescriptor]:
    """All component descriptors with |k'| <= max_k_prime, r <= max_r;
    k' ordered 0, 1, -1, 2, -2, ... with the mirror rows included."""
    if max_k_prime < 0 or max_r < 0:
        raise ValueError("table bounds must be nonnegative")
    k_values = [0]
    for m in range(1, max_k_prime + 1):
        k_values.extend((m, -m))
    return [classify_component(kp, r) for kp in k_values for r in range(max_r + 1)]
