"""Constraint matrices, exact kernels, samplers, codimension, families,
divisor round-trips, and the component table."""

import random
from fractions import Fraction

import pytest

from harmap.eellswood import classify_component
from harmap.errors import NotAMap, SamplingFailure
from harmap.exact import GR_ONE, GR_ZERO, GaussianRational, Poly, poly_divrem
from harmap.holomap import Divisor, is_full, ramification_data, validate
from harmap.linalg import matvec
from harmap.strata import (
    StratumPoint,
    build_L,
    codimension_check,
    component_table,
    degeneration_family,
    divisor_points,
    divisor_roundtrip,
    kernel_exact,
    random_full_map,
    sample_stratum,
    stratum_embed,
    stratum_factor,
)

ONE, Z = Poly.one(), Poly.x()
Z2, Z3 = Poly.monomial(2), Poly.monomial(3)


class TestBuildL:
    def test_point_divisor_row(self):
        # a = z, p = 1 + z^3, k = 3: the single row is (0, 1, 0, 0)
        L = build_L(Z, Poly([1, 0, 0, 1]))
        assert L.shape == (1, 4)
        assert L.entries == ((GR_ZERO, GR_ONE, GR_ZERO, GR_ZERO),)

    def test_general_point_row(self):
        # a = z: L*u = p(0) u'(0) - p'(0) u(0)
        p = Poly([2, 5, 0, 1])
        L = build_L(Z, p)
        assert L.entries[0][0] == -p.derivative()[0]
        assert L.entries[0][1] == p[0]

    def test_empty_for_trivial_divisor(self):
        L = build_L(ONE, Poly([1, 0, 0, 1]))
        assert L.shape == (0, 4)
        assert len(kernel_exact(L)) == 4

    def test_noncoprime_rejected(self):
        with pytest.raises(ValueError):
            build_L(Z, Z2)

    def test_nonmonic_rejected(self):
        with pytest.raises(ValueError):
            build_L(Z * GaussianRational(2), ONE)


class TestKernelExact:
    def test_witness_kernel(self):
        basis = kernel_exact(build_L(Z, Poly([1, 0, 0, 1])))
        assert basis == [ONE, Z2, Z3]

    def test_kernel_members_satisfy_divisibility(self):
        # cross-check by a different code path: direct remainder
        rng = random.Random("kernelcheck")
        for _ in range(10):
            a = Poly.from_roots([GaussianRational(rng.randint(-3, 3), rng.randint(-3, 3))])
            p = Poly([GaussianRational(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(5)])
            if p.is_zero or (a.degree > 0 and not p.eval_exact(GaussianRational(-a[0].re, -a[0].im))):
                continue
            try:
                L = build_L(a, p)
            except ValueError:
                continue
            for u in kernel_exact(L):
                assert matvec([list(r) for r in L.entries], u.padded(L.k + 1)) == [GR_ZERO] * L.shape[0]
                q = p * u.derivative() - p.derivative() * u
                assert poly_divrem(q, a)[1].is_zero

    def test_rank_nullity(self):
        L = build_L(Poly.from_roots([GaussianRational(1), GaussianRational(2)]), Poly([1, 0, 0, 0, 1]))
        basis = kernel_exact(L)
        assert len(basis) == 5 - 2


class TestSampler:
    def test_witness_point_passes_acceptance(self):
        # the hand-built chart point: a = z, f = [1+z^3, z^2, z^3]
        f = validate(Poly([1, 0, 0, 1]), Z2, Z3)
        d, _ = ramification_data(f)
        assert d == Divisor(Z, 0)

    @pytest.mark.parametrize("k,r", [(3, 0), (3, 1), (4, 1), (4, 2), (5, 3)])
    def test_sound_samples(self, k, r):
        for seed in range(5):
            pt = sample_stratum(k, r, seed)
            assert pt.f.k == k
            assert is_full(pt.f)
            d, _ = ramification_data(pt.f)
            assert d == Divisor(pt.a, 0)
            assert d.total_degree == r

    def test_deterministic(self):
        assert sample_stratum(3, 1, 42).f == sample_stratum(3, 1, 42).f

    def test_empty_stratum_rejected(self):
        # degree-2 full maps are unramified; (2, 1) admits none
        with pytest.raises(ValueError):
            sample_stratum(2, 1, 0)

    def test_unramified_degree_two(self):
        pt = sample_stratum(2, 0, 3)
        assert ramification_data(pt.f)[0] == Divisor.empty()


class TestCodimension:
    def test_open_stratum_rank_zero(self):
        pt = sample_stratum(3, 0, 1)
        rep = codimension_check(pt)
        assert rep.rank == 0

    def test_k3_r1(self):
        rep = codimension_check(sample_stratum(3, 1, 2))
        assert rep.rank == 2
        assert rep.ambient_dim == 11
        assert rep.dim_estimate == 9

    def test_k4_r2(self):
        rep = codimension_check(sample_stratum(4, 2, 2))
        assert rep.rank == 4
        assert rep.dim_estimate == 3 * 4 - 2 * 2 + 2


class TestDegeneration:
    def test_ramified_limit(self):
        rep = degeneration_family(3, 4, kind="ramified_limit")
        assert rep.limit.index == 1
        assert rep.index_only_jumps_up

    def test_constant_family(self):
        rep = degeneration_family(3, 1, kind="constant")
        indices = {e.index for e in rep.entries} | {rep.limit.index}
        assert indices == {1}

    def test_common_root_limit_is_degree_drop(self):
        rep = degeneration_family(3, 2, kind="common_root")
        assert rep.limit.index is None
        assert "degree-drop" in rep.limit.note
        assert any(e.index is not None for e in rep.entries)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            degeneration_family(3, 0, kind="bogus")


class TestDivisorRoundtrip:
    def test_rational_pair(self):
        d = Divisor(Poly([-1, 0, 1]), 0)  # z^2 - 1
        assert divisor_roundtrip(d) == d

    def test_infinity_only(self):
        d = Divisor(ONE, 2)
        pts, inf = divisor_points(d)
        assert pts == [] and inf == 2
        assert divisor_roundtrip(d) == d

    def test_double_gaussian_root(self):
        # (z - i)^2: multiplicity preserved through the point multiset
        d = Divisor(Poly([-1, GaussianRational(0, -2), 1]), 0)
        assert divisor_roundtrip(d) == d

    def test_irrational_roots_reconstruct_approximately(self):
        d = Divisor(Poly([-2, 0, 1]), 0)  # roots +-sqrt(2): not snappable
        back = divisor_roundtrip(d)
        assert back.inf == 0
        got = [c.to_complex() for c in back.finite.padded(3)]
        want = [c.to_complex() for c in d.finite.padded(3)]
        assert max(abs(a - b) for a, b in zip(got, want)) < 1e-9


class TestProductStratification:
    def test_embed_then_factor(self):
        rng = random.Random("xi")
        for _ in range(8):
            r = rng.randint(1, 2)
            b = Poly.from_roots(
                [GaussianRational(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(r)]
            )
            inner = random_full_map(3, rng.randint(0, 99))
            k = 3 + r
            triple = stratum_embed(b, inner.p, k)
            index, b_back, q_back = stratum_factor(triple, k)
            assert index == r
            assert b_back == b
            assert q_back == inner.p

    def test_degree_drop_counts(self):
        # coprime triple of degree 2 sitting in the ambient degree-3 space
        index, b, _ = stratum_factor((ONE, Z, Z2), 3)
        assert index == 1
        assert b == ONE


class TestComponentTable:
    def test_row_order_and_values(self):
        rows = component_table(1, 1)
        got = [(d.k_prime, d.r, d.energy, d.complex_dim) for d in rows]
        assert got == [
            (0, 0, 4, 8),
            (0, 1, 6, 9),
            (1, 0, 7, 11),
            (1, 1, 9, 12),
            (-1, 0, 7, 11),
            (-1, 1, 9, 12),
        ]

    def test_mirror_rows_match(self):
        rows = component_table(3, 3)
        table = {(d.k_prime, d.r): d for d in rows}
        for kp in range(1, 4):
            for r in range(4):
                a, b = table[(kp, r)], table[(-kp, r)]
                assert (a.energy, a.complex_dim) == (b.energy, b.complex_dim)

    def test_matches_direct_formula(self):
        for d in component_table(3, 3):
            assert d.energy == 3 * abs(d.k_prime) + 2 * d.r + 4
            assert d.complex_dim == 3 * abs(d.k_prime) + d.r + 8
