"""Holomorphic maps S^2 -> CP^2 as coprime polynomial triples.

A map is the projective class [p0, p1, p2] of polynomials sharing no
common zero; its degree is the maximum of the component degrees.  The
wedge of the triple with its derivative carries the ramification data:
the monic GCD of the wedge components is the finite part of the
ramification divisor, and the degree drop of the cofactors accounts for
ramification at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import NotAMap, NotFull
from .exact import GR_ZERO, GaussianRational, Poly, poly_divrem, poly_gcd_many

Triple = tuple[Poly, Poly, Poly]


@dataclass(frozen=True)
class HoloMap:
    """Canonical representative of a point of Hol_k.

    Built through `validate`; the first nonzero component has leading
    coefficient 1, so equality of maps is equality of representatives.
    """

    p: Triple
    k: int

    def wedge(self) -> Triple:
        return wedge_curve(self)


@dataclass(frozen=True)
class Divisor:
    """Unordered point multiset on S^2: monic finite part plus an
    infinity multiplicity."""

    finite: Poly
    inf: int

    def __post_init__(self):
        if self.inf < 0:
            raise ValueError("infinity multiplicity must be nonnegative")
        if not self.finite.is_zero and self.finite.degree >= 0:
            if self.finite.lead() != 1:
                raise ValueError("finite part must be monic")
        if self.finite.is_zero:
            raise ValueError("finite part must be a nonzero (possibly constant) polynomial")

    @property
    def total_degree(self) -> int:
        return int(self.finite.degree) + self.inf

    def roots_approx(self) -> list[complex]:
        """Float positions of the finite points (advisory only)."""
        if self.finite.degree <= 0:
            return []
        cs = [c.to_complex() for c in self.finite.coeffs]
        roots = np.roots(cs[::-1])
        return sorted((complex(r) for r in roots), key=lambda w: (w.real, w.imag))

    @classmethod
    def empty(cls) -> "Divisor":
        return cls(Poly.one(), 0)


@dataclass(frozen=True)
class AssociatedCurve:
    """First associated curve: coprime wedge cofactors, a holomorphic
    curve of degree 2k-2-r in the Grassmannian of 2-planes."""

    q: Triple
    degree: int


def validate(p0: Poly, p1: Poly, p2: Poly) -> HoloMap:
    """Check a triple defines a map and return its canonical representative.

    Raises NotAMap when the triple is identically zero or the components
    share a zero (nonconstant triple GCD).
    """
    triple = (p0, p1, p2)
    if all(p.is_zero for p in triple):
        raise NotAMap("all three polynomials are zero")
    g = poly_gcd_many(triple)
    if g.degree > 0:
        raise NotAMap(f"components share a zero (common factor of degree {int(g.degree)})")
    lead = next(p for p in triple if not p.is_zero).lead()
    inv = lead.inverse()
    canon = tuple(p * inv for p in triple)
    k = int(max(p.degree for p in triple))
    return HoloMap(canon, k)


def coefficient_matrix(f: HoloMap) -> list:
    """3 x (k+1) matrix of component coefficients."""
    return [p.padded(f.k + 1) for p in f.p]


def is_full(f: HoloMap) -> bool:
    """True iff the image lies in no projective line (exact rank 3)."""
    return linalg.rank(coefficient_matrix(f)) == 3


def wedge_curve(f: HoloMap) -> Triple:
    """Wedge of the lift with its derivative, components ordered
    (01, 02, 12) with positive signs; each degree <= 2k-2."""
    p0, p1, p2 = f.p
    d0, d1, d2 = p0.derivative(), p1.derivative(), p2.derivative()
    return (p0 * d1 - d0 * p1, p0 * d2 - d0 * p2, p1 * d2 - d1 * p2)


def ramification_data(f: HoloMap) -> tuple[Divisor, AssociatedCurve]:
    """Exact ramification divisor and first associated curve.

    The finite part is the monic GCD b of the wedge components, the
    index is r = (2k-2) - max deg(h_i/b), and the infinity multiplicity
    is r - deg b.  Rejects maps whose image lies in a line: the
    correspondence with harmonic maps covers full maps only.
    """
    if not is_full(f):
        raise NotFull("image lies in a projective line")
    h = wedge_curve(f)
    b = poly_gcd_many(h)
    q = tuple(poly_divrem(hi, b)[0] for hi in h)
    max_q = int(max(p.degree for p in q))
    r = (2 * f.k - 2) - max_q
    inf_mult = r - int(b.degree)
    divisor = Divisor(b, inf_mult)
    curve = AssociatedCurve(q, max_q)
    return divisor, curve


def ramification_index(f: HoloMap) -> int:
    return ramification_data(f)[0].total_degree


def apply_automorphism(matrix, f: HoloMap) -> HoloMap:
    """Act by an exact invertible 3x3 matrix: [p] -> [A p].

    Projective automorphisms leave the ramification divisor unchanged.
    """
    rows = [[GaussianRational._coerce(x) for x in row] for row in matrix]
    if len(rows) != 3 or any(len(r) != 3 or any(x is None for x in r) for r in rows):
        raise ValueError("automorphism must be a 3x3 exact matrix")
    if not linalg.det(rows):
        raise ValueError("automorphism matrix is singular")
    new = []
    for row in rows:
        acc = Poly.zero()
        for a, p in zip(row, f.p):
            acc = acc + p * a
        new.append(acc)
    return validate(*new)


def mirror(f: HoloMap) -> HoloMap:
    """Coefficient conjugation: the holomorphic model of the
    z -> zbar mirror between degree k and degree -k components.
    An exact involution."""
    return validate(*(p.conjugate() for p in f.p))


def dependency_identity_check(f: HoloMap) -> bool:
    """Exact identity p1*h02 - p2*h01 = p0*h12 tying the three wedge
    components together; always true, used as an algebra self-test."""
    p0, p1, p2 = f.p
    h01, h02, h12 = wedge_curve(f)
    return (p1 * h02 - p2 * h01 - p0 * h12).is_zero


def fullness_bound_ok(f: HoloMap, r: int) -> bool:
    """Index bounds: r <= 2k-2 always, and 2r <= 3k-6 for full maps."""
    if r > 2 * f.k - 2:
        return False
    if is_full(f) and 2 * r > 3 * f.k - 6:
        return False
    return True
