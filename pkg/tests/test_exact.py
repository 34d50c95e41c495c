"""Exact scalar, polynomial, and bipolynomial arithmetic."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from harmap.exact import (
    GR_I,
    GR_ONE,
    MINUS_INF,
    BiPoly,
    GaussianRational,
    Poly,
    hermitian_pairing,
    poly_derivative,
    poly_divrem,
    poly_gcd,
    poly_gcd_many,
)

fractions = st.fractions(min_value=-4, max_value=4, max_denominator=6)
scalars = st.builds(GaussianRational, fractions, fractions)
polys = st.builds(Poly, st.lists(scalars, max_size=5))
nonzero_polys = polys.filter(lambda p: not p.is_zero)


class TestGaussianRational:
    def test_field_axioms_spot(self):
        a = GaussianRational(Fraction(1, 2), Fraction(-3, 4))
        b = GaussianRational(2, 1)
        c = GaussianRational(Fraction(-1, 3), Fraction(5))
        assert (a * b) * c == a * (b * c)
        assert a * a.inverse() == GR_ONE
        assert (a + b) * c == a * c + b * c

    @given(scalars, scalars, scalars)
    def test_mul_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @given(scalars.filter(bool))
    def test_inverse(self, a):
        assert a * a.inverse() == GR_ONE

    def test_conjugation(self):
        a = GaussianRational(1, 2)
        assert a.conjugate() == GaussianRational(1, -2)
        assert a * a.conjugate() == GaussianRational(a.abs2())

    def test_canonical_reduction(self):
        assert GaussianRational(Fraction(2, 4)) == GaussianRational(Fraction(1, 2))
        assert hash(GaussianRational(Fraction(2, 4))) == hash(GaussianRational(Fraction(1, 2)))

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            GaussianRational(0).inverse()


class TestPoly:
    def test_zero_degree_sentinel(self):
        assert Poly.zero().degree == MINUS_INF
        assert Poly.zero().degree < 0
        assert not isinstance(Poly.zero().degree, int)

    def test_trailing_zeros_trimmed(self):
        assert Poly([1, 2, 0, 0]) == Poly([1, 2])

    @given(nonzero_polys, nonzero_polys)
    def test_degree_multiplicative(self, p, q):
        assert (p * q).degree == p.degree + q.degree

    def test_derivative_power_rule(self):
        assert poly_derivative(Poly.monomial(2)) == Poly([0, 2])

    def test_derivative_constant(self):
        assert poly_derivative(Poly([5])) == Poly.zero()

    def test_derivative_cubic(self):
        # d/dz (1 + z^3) = 3 z^2, by hand
        assert poly_derivative(Poly([1, 0, 0, 1])) == Poly([0, 0, 3])

    def test_eval_matches_exact(self):
        p = Poly([GaussianRational(1, 1), GaussianRational(0, -2), GR_ONE])
        x = GaussianRational(Fraction(1, 3), Fraction(2))
        assert abs(p(x.to_complex()) - p.eval_exact(x).to_complex()) < 1e-12


class TestDivRem:
    def test_simple(self):
        q, r = poly_divrem(Poly.monomial(2), Poly.x())
        assert q == Poly.x() and r == Poly.zero()

    def test_long_division(self):
        # z^3 + 1 = z * (z^2 + 1) + (1 - z)
        q, r = poly_divrem(Poly([1, 0, 0, 1]), Poly([1, 0, 1]))
        assert q == Poly.x()
        assert r == Poly([1, -1])

    def test_constant_by_x(self):
        q, r = poly_divrem(Poly([7]), Poly.x())
        assert q == Poly.zero() and r == Poly([7])

    def test_divide_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            poly_divrem(Poly.one(), Poly.zero())

    @given(polys, nonzero_polys)
    def test_reconstruction(self, p, a):
        q, r = poly_divrem(p, a)
        assert q * a + r == p
        assert r.degree < a.degree


class TestGcd:
    def test_powers(self):
        assert poly_gcd(Poly.monomial(2), Poly.monomial(3)) == Poly.monomial(2)

    def test_wedge_pair(self):
        # gcd(2z - z^4, 3z^2) = z, by Euclid
        assert poly_gcd(Poly([0, 2, 0, 0, -1]), Poly([0, 0, 3])) == Poly.x()

    def test_coprime(self):
        assert poly_gcd(Poly([-1, 1]), Poly([1, 1])) == Poly.one()

    def test_both_zero_rejected(self):
        with pytest.raises(ValueError):
            poly_gcd(Poly.zero(), Poly.zero())

    @given(nonzero_polys, nonzero_polys)
    @settings(max_examples=60)
    def test_divides_both(self, p, q):
        g = poly_gcd(p, q)
        assert poly_divrem(p, g)[1].is_zero
        assert poly_divrem(q, g)[1].is_zero
        assert g.lead() == GR_ONE

    @given(nonzero_polys, nonzero_polys, nonzero_polys)
    @settings(max_examples=40)
    def test_common_divisor_divides_gcd(self, d, u, v):
        g = poly_gcd(d * u, d * v)
        # d is a common divisor, so it divides the gcd; g divides both inputs
        assert poly_divrem(g, d.monic())[1].is_zero
        assert poly_divrem(d * u, g)[1].is_zero
        assert poly_divrem(d * v, g)[1].is_zero


class TestBiPoly:
    def test_conj_involution_spot(self):
        b = BiPoly({(0, 1): GR_I, (2, 0): GaussianRational(1, 2)})
        assert b.conj().conj() == b
        assert b.conj().terms[(1, 0)] == GaussianRational(0, -1)

    @given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), scalars, max_size=6))
    def test_conj_involution(self, terms):
        b = BiPoly(terms)
        assert b.conj().conj() == b

    @given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), scalars, max_size=6),
           st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
    @settings(max_examples=60)
    def test_eval_consistency(self, terms, z):
        """Term-by-term float expansion agrees with the evaluator."""
        b = BiPoly(terms)
        direct = sum(
            c.to_complex() * z**i * z.conjugate() ** j for (i, j), c in b.terms.items()
        )
        got = b(z)
        assert abs(got - direct) <= 1e-12 * max(1.0, abs(direct))

    def test_partials(self):
        b = BiPoly({(2, 1): GR_ONE})
        assert b.dz() == BiPoly({(1, 1): GaussianRational(2)})
        assert b.dzbar() == BiPoly({(2, 0): GR_ONE})

    def test_mul_matches_eval(self):
        u = BiPoly({(1, 0): GR_ONE, (0, 1): GR_I})
        v = BiPoly({(1, 1): GaussianRational(2)})
        z = 0.7 - 0.3j
        assert abs((u * v)(z) - u(z) * v(z)) < 1e-12


class TestHermitianPairing:
    def test_line_example(self):
        # <(1,z,0), (1,z,0)> = 1 + z zbar, expanded by hand
        u = (Poly.one(), Poly.x(), Poly.zero())
        assert hermitian_pairing(u, u) == BiPoly({(0, 0): GR_ONE, (1, 1): GR_ONE})

    def test_diagonal_is_squared_norm_at_zero(self):
        p = (Poly([GaussianRational(1, 2)]), Poly([3, 1]), Poly([0, 0, 1]))
        pp = hermitian_pairing(p, p)
        val = pp(0j)
        expect = sum(abs(q(0j)) ** 2 for q in p)
        assert abs(val - expect) < 1e-12

    def test_orthogonal_axes(self):
        u = (Poly.one(), Poly.zero(), Poly.zero())
        v = (Poly.zero(), Poly.one(), Poly.zero())
        assert hermitian_pairing(u, v).is_zero

    @given(st.lists(polys, min_size=3, max_size=3), st.lists(polys, min_size=3, max_size=3))
    @settings(max_examples=40)
    def test_swap_conjugates(self, u, v):
        assert hermitian_pairing(u, v) == hermitian_pairing(v, u).conj()

    @given(st.lists(polys, min_size=3, max_size=3),
           st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
    @settings(max_examples=40)
    def test_diagonal_real_nonnegative(self, u, z):
        val = hermitian_pairing(u, u)(z)
        assert abs(val.imag) <= 1e-10 * max(1.0, abs(val))
        assert val.real >= -1e-12


def test_gcd_many_triple():
    g = poly_gcd_many([Poly([0, 2, 0, 0, -1]), Poly([0, 0, 3]), Poly([0, 0, 0, 0, 1])])
    assert g == Poly.x()
