"""Exact scalar and polynomial arithmetic over the Gaussian rationals.

Every divisor and stratum decision downstream reduces to a polynomial GCD,
which is numerically unstable in floats, so coefficients are kept as pairs
of arbitrary-precision rationals throughout.  Floats appear only at
evaluation boundaries (`Poly.__call__`, `BiPoly.__call__`).

Three layers:

  * GaussianRational -- a + b*i with `fractions.Fraction` components.
  * Poly             -- univariate polynomial in z, ascending coefficients,
                        no trailing zeros; the zero polynomial has degree
                        MINUS_INF (a sentinel, never -1).
  * BiPoly           -- finitely supported map (i, j) -> coefficient for
                        sums c_ij * z^i * zbar^j; houses Hermitian pairings
                        as exact objects.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

MINUS_INF = float("-inf")

_FRACTIONABLE = (int, Fraction, str)


class GaussianRational:
    """Exact complex scalar with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- coercion -------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "GaussianRational | None":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, _FRACTIONABLE):
            return GaussianRational(x)
        return None

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def inverse(self) -> "GaussianRational":
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("inverse of zero GaussianRational")
        return GaussianRational(self.re / n, -self.im / n)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|x|^2, exact."""
        return self.re * self.re + self.im * self.im

    # -- predicates / conversions ----------------------------------------

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def __repr__(self):
        if not self.im:
            return f"GR({self.re})"
        return f"GR({self.re}, {self.im})"


GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)
GR_I = GaussianRational(0, 1)


def _as_scalar(x) -> GaussianRational:
    c = GaussianRational._coerce(x)
    if c is None:
        raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")
    return c


class Poly:
    """Univariate polynomial in z with GaussianRational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_scalar(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((GR_ONE,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((GR_ZERO, GR_ONE))

    @classmethod
    def monomial(cls, n: int, c=1) -> "Poly":
        return cls((GR_ZERO,) * n + (_as_scalar(c),))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        p = cls.one()
        for x in roots:
            p = p * cls((-_as_scalar(x), GR_ONE))
        return p

    # -- structure -------------------------------------------------------

    @property
    def degree(self):
        """Degree, or MINUS_INF for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else MINUS_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> GaussianRational:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, n: int) -> GaussianRational:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else GR_ZERO

    def padded(self, length: int) -> list:
        """Coefficient vector of fixed length (asserts the poly fits)."""
        if len(self.coeffs) > length:
            raise ValueError(f"degree {self.degree} does not fit in length {length}")
        return list(self.coeffs) + [GR_ZERO] * (length - len(self.coeffs))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] + other[i] for i in range(n)])

    def __sub__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] - other[i] for i in range(n)])

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Poly):
            if self.is_zero or other.is_zero:
                return Poly.zero()
            out = [GR_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return Poly(out)
        c = GaussianRational._coerce(other)
        if c is None:
            return NotImplemented
        return Poly([a * c for a in self.coeffs])

    __rmul__ = __mul__

    def derivative(self) -> "Poly":
        return Poly([self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def monic(self) -> "Poly":
        if self.is_zero:
            raise ValueError("zero polynomial cannot be made monic")
        inv = self.lead().inverse()
        return Poly([c * inv for c in self.coeffs])

    def conjugate(self) -> "Poly":
        """Coefficient-wise complex conjugation."""
        return Poly([c.conjugate() for c in self.coeffs])

    # -- evaluation --------------------------------------------------------

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c.to_complex()
        return acc

    def eval_exact(self, x: GaussianRational) -> GaussianRational:
        acc = GR_ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if not c.im:
                s = str(c.re)
            elif not c.re:
                s = f"{c.im}i"
            else:
                s = f"({c.re}{'+' if c.im > 0 else ''}{c.im}i)"
            parts.append(s if i == 0 else (f"{s}*z" if i == 1 else f"{s}*z^{i}"))
        return "Poly(" + " + ".join(parts) + ")"


def poly_derivative(p: Poly) -> Poly:
    """Formal derivative dp/dz."""
    return p.derivative()


def poly_divrem(p: Poly, a: Poly) -> tuple[Poly, Poly]:
    """Exact division with remainder: p = q*a + r with deg r < deg a."""
    if a.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    if p.is_zero:
        return Poly.zero(), Poly.zero()
    da = len(a.coeffs) - 1
    inv_lead = a.lead().inverse()
    rem = list(p.coeffs)
    q = [GR_ZERO] * max(len(rem) - da, 0)
    for i in range(len(rem) - 1, da - 1, -1):
        c = rem[i]
        if not c:
            continue
        f = c * inv_lead
        q[i - da] = f
        for j in range(da + 1):
            rem[i - da + j] = rem[i - da + j] - f * a.coeffs[j]
    return Poly(q), Poly(rem[:da])


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic exact greatest common divisor (Euclid)."""
    if p.is_zero and q.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    a, b = p, q
    while not b.is_zero:
        a, b = b, poly_divrem(a, b)[1]
    return a.monic()


def poly_gcd_many(ps: Sequence[Poly]) -> Poly:
    """Monic GCD of a sequence of polynomials (not all zero)."""
    nonzero = [p for p in ps if not p.is_zero]
    if not nonzero:
        raise ValueError("gcd of all-zero family is undefined")
    g = nonzero[0]
    for p in nonzero[1:]:
        if g.degree == 0:
            break
        g = poly_gcd(g, p)
    return g.monic()


def divides(a: Poly, p: Poly) -> bool:
    """True iff a divides p exactly."""
    return poly_divrem(p, a)[1].is_zero


class BiPoly:
    """Bivariate polynomial sum c_ij * z^i * zbar^j, finitely supported."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        d = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for (i, j), c in items:
                c = _as_scalar(c)
                if not c:
                    continue
                key = (int(i), int(j))
                acc = d.get(key)
                d[key] = c if acc is None else acc + c
                if not d[key]:
                    del d[key]
        object.__setattr__(self, "terms", d)

    def __setattr__(self, name, value):
        raise AttributeError("BiPoly is immutable")

    @classmethod
    def zero(cls) -> "BiPoly":
        return cls()

    @classmethod
    def from_poly(cls, p: Poly, conjugated: bool = False) -> "BiPoly":
        """Embed p(z), or conj(p)(zbar) when `conjugated` is set."""
        if conjugated:
            return cls({(0, n): c.conjugate() for n, c in enumerate(p.coeffs)})
        return cls({(n, 0): c for n, c in enumerate(p.coeffs)})

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> tuple:
        """(max z-degree, max zbar-degree); MINUS_INF pair when zero."""
        if not self.terms:
            return (MINUS_INF, MINUS_INF)
        return (max(i for i, _ in self.terms), max(j for _, j in self.terms))

    def sorted_terms(self):
        return sorted(self.terms.items())

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        d = dict(self.terms)
        for k, c in other.terms.items():
            acc = d.get(k)
            d[k] = c if acc is None else acc + c
            if not d[k]:
                del d[k]
        out = BiPoly()
        object.__setattr__(out, "terms", d)
        return out

    def __sub__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        out = BiPoly()
        object.__setattr__(out, "terms", {k: -c for k, c in self.terms.items()})
        return out

    def __mul__(self, other):
        if isinstance(other, BiPoly):
            d = {}
            for (i1, j1), c1 in self.terms.items():
                for (i2, j2), c2 in other.terms.items():
                    k = (i1 + i2, j1 + j2)
                    c = c1 * c2
                    acc = d.get(k)
                    d[k] = c if acc is None else acc + c
                    if not d[k]:
                        del d[k]
            out = BiPoly()
            object.__setattr__(out, "terms", d)
            return out
        c = GaussianRational._coerce(other)
        if c is None:
            return NotImplemented
        if not c:
            return BiPoly.zero()
        out = BiPoly()
        object.__setattr__(out, "terms", {k: v * c for k, v in self.terms.items()})
        return out

    __rmul__ = __mul__

    def conj(self) -> "BiPoly":
        """Complex conjugate: swaps (i, j) and conjugates coefficients."""
        out = BiPoly()
        object.__setattr__(
            out, "terms", {(j, i): c.conjugate() for (i, j), c in self.terms.items()}
        )
        return out

    def dz(self) -> "BiPoly":
        """Formal partial derivative with respect to z."""
        return BiPoly([((i - 1, j), c * i) for (i, j), c in self.terms.items() if i])

    def dzbar(self) -> "BiPoly":
        """Formal partial derivative with respect to zbar."""
        return BiPoly([((i, j - 1), c * j) for (i, j), c in self.terms.items() if j])

    # -- evaluation -----------------------------------------------------------

    def __call__(self, z: complex) -> complex:
        zb = complex(z).conjugate()
        acc = 0j
        for (i, j), c in self.terms.items():
            acc += c.to_complex() * z**i * zb**j
        return acc

    # -- comparison --------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "BiPoly(0)"
        return "BiPoly(" + ", ".join(f"({i},{j}): {c!r}" for (i, j), c in self.sorted_terms()) + ")"


def hermitian_pairing(u: Sequence[Poly], v: Sequence[Poly]) -> BiPoly:
    """<u, v>(z, zbar) = sum_i u_i(z) * conj(v_i)(zbar), exact."""
    if len(u) != len(v):
        raise ValueError("pairing needs equal-length tuples")
    acc = BiPoly.zero()
    for ui, vi in zip(u, v):
        acc = acc + BiPoly.from_poly(ui) * BiPoly.from_poly(vi, conjugated=True)
    return acc
