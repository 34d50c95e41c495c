"""Degree/energy quadrature and the harmonicity residual.

Calibration oracle: for the lift (1, z, 0) the first partial energy has
the closed form (1/pi) * int_0^{2pi} int_0^inf r dr dtheta / (1+r^2)^2
= (1/pi) * 2pi * (1/2) = 1, and the antiholomorphic part vanishes.
"""

import numpy as np
import pytest

from harmap.eellswood import gauss_transform
from harmap.errors import IntegrationFailure
from harmap.exact import BiPoly, GaussianRational, Poly
from harmap.holomap import apply_automorphism, validate
from harmap.quadrature import (
    QuadratureConfig,
    convergence_order,
    integrate_invariants,
    tension_convergence,
    tension_residual,
    verify_harmonic_map,
)

ONE, Z = Poly.one(), Poly.x()
Z2, Z3, Z4 = Poly.monomial(2), Poly.monomial(3), Poly.monomial(4)

CFG = QuadratureConfig()


class TestConfig:
    def test_resolution_floor(self):
        with pytest.raises(ValueError):
            QuadratureConfig(resolution=8)

    def test_exclusion_positive(self):
        with pytest.raises(ValueError):
            QuadratureConfig(exclusion_radius=0.0)

    def test_needs_two_levels(self):
        with pytest.raises(ValueError):
            QuadratureConfig(refinement_levels=1)


class TestCalibration:
    def test_degree_one_line(self):
        res = integrate_invariants((ONE, Z, Poly.zero()), CFG)
        assert abs(res.e_prime - 1.0) < 1e-3
        assert res.e_doubleprime == 0.0

    @pytest.mark.parametrize(
        "triple, k",
        [((ONE, Z, Z2), 2), ((ONE, Z, Z3), 3), ((ONE, Z2, Z4), 4)],
    )
    def test_holomorphic_energy_is_degree(self, triple, k):
        res = integrate_invariants(triple, CFG)
        assert abs(res.e_prime - k) < 1e-3
        assert abs(res.degree_num - k) < 1e-3


class TestHarmonicInvariants:
    def test_conic(self):
        rep = gauss_transform(validate(ONE, Z, Z2))
        res = integrate_invariants(rep.lift, CFG, singular=rep.divisor.roots_approx())
        assert abs(res.degree_num - 0) < 1e-3
        assert abs(res.energy_num - 4) < 1e-3

    def test_infinity_ramified_cubic(self):
        rep = gauss_transform(validate(ONE, Z, Z3))
        res = integrate_invariants(rep.lift, CFG)
        assert abs(res.degree_num - 0) < 1e-2
        assert abs(res.energy_num - 6) < 1e-2
        assert abs(res.e_prime - 3) < 1e-2
        assert abs(res.e_doubleprime - 3) < 1e-2

    def test_doubly_ramified(self):
        rep = gauss_transform(validate(ONE, Z2, Z4))
        res = integrate_invariants(rep.lift, CFG, singular=rep.divisor.roots_approx())
        assert abs(res.degree_num - 0) < 1e-2
        assert abs(res.energy_num - 8) < 1e-2

    def test_report_snaps(self):
        rep = gauss_transform(validate(ONE, Z, Z3))
        report = verify_harmonic_map(rep)
        assert report.snapped == {"degree": 0, "energy": 6, "e_prime": 3, "e_doubleprime": 3}
        assert report.all_ok
        assert report.error_est < 0.5

    def test_unitary_invariance(self):
        # exact unitary from Pythagorean phases: diag(3/5+4/5 i, 1, 5/13-12/13 i)
        from fractions import Fraction as F

        U = [
            [GaussianRational(F(3, 5), F(4, 5)), 0, 0],
            [0, 1, 0],
            [0, 0, GaussianRational(F(5, 13), F(-12, 13))],
        ]
        f = validate(ONE, Z, Z3)
        g = apply_automorphism(U, f)
        ra = integrate_invariants(gauss_transform(f).lift, CFG)
        rb = integrate_invariants(gauss_transform(g).lift, CFG)
        assert abs(ra.degree_num - rb.degree_num) < 1e-3
        assert abs(ra.energy_num - rb.energy_num) < 1e-3


class TestTensionResidual:
    def test_holomorphic_map_is_harmonic(self):
        rows = tension_convergence((ONE, Z, Z2))
        order = convergence_order(rows)
        assert 1.7 <= order <= 2.3

    def test_constructed_map_second_order(self):
        rep = gauss_transform(validate(ONE, Z, Z2))
        rows = tension_convergence(rep)
        ratio = rows[-2][1] / rows[-1][1]
        assert 3.2 <= ratio <= 4.8  # halving h divides the residual by ~4

    def test_control_map_plateaus(self):
        # lift (1, z + zbar^2, z^2) is not harmonic
        control = (
            BiPoly({(0, 0): 1}),
            BiPoly({(1, 0): 1, (0, 2): 1}),
            BiPoly({(2, 0): 1}),
        )
        rows = tension_convergence(control)
        for (_, r1), (_, r2) in zip(rows, rows[1:]):
            assert r2 > 0.9 * r1  # decreases by < 10% per halving

    def test_bad_spacing_rejected(self):
        rep = gauss_transform(validate(ONE, Z, Z2))
        with pytest.raises(ValueError):
            tension_residual(rep, 0.0)


class TestFailureModes:
    def test_all_points_excluded(self):
        rep = gauss_transform(validate(ONE, Z, Z2))
        with pytest.raises(IntegrationFailure):
            tension_residual(rep, 0.1, box=1.0, exclusion=10.0, singular=[0j])

    def test_nan_density_reported(self):
        # lift zero at the origin with the nudge disabled by a tiny radius
        rep = gauss_transform(validate(ONE, Z2, Z4))
        cfg = QuadratureConfig(resolution=16, exclusion_radius=1e-300)
        try:
            integrate_invariants(rep.lift, cfg, singular=[])
        except IntegrationFailure:
            pass  # acceptable: the unguarded zero was detected
        # with the divisor supplied the same integral succeeds
        res = integrate_invariants(
            rep.lift, QuadratureConfig(resolution=16), singular=rep.divisor.roots_approx()
        )
        assert np.isfinite(res.energy_num)
