"""Certified quadrature: tail bounds, Simpson grids, and the auto ladder."""

import math

import numpy as np
import pytest

from heatline.catalog import bump_fn, constant_fn, gauss_fn, unit_gaussian, weierstrass_fn
from heatline.kernels import KernelScale, weierstrass_peak
from heatline.quadrature import (
    CompactSupport,
    GaussianDecay,
    GridSpec,
    PolynomialDecay,
    QuadratureError,
    TestFunction,
    auto_grid,
    integrate,
    integrate_auto,
    l1_norm,
    node_budget,
)


class TestGridSpec:
    def test_rejects_odd_or_tiny_point_counts(self):
        for bad in (3, 5, 2, 0, -4):
            with pytest.raises(ValueError):
                GridSpec(4.0, bad, 1)

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(ValueError):
            GridSpec(0.0, 128, 1)

    def test_node_budget_enforced(self):
        with pytest.raises(QuadratureError, match="node budget"):
            GridSpec(4.0, 8192, 2)

    def test_budget_env_override(self, monkeypatch):
        monkeypatch.setenv("HEATLINE_BUDGET", "1000")
        assert node_budget() == 1000
        with pytest.raises(QuadratureError, match="node budget"):
            GridSpec(4.0, 2048, 1)

    def test_spacing(self):
        assert GridSpec(6.0, 256, 1).spacing == pytest.approx(12.0 / 256.0)


class TestEnvelopeChecks:
    def test_envelope_violation_rejected(self):
        # unit gaussian peaks at 1, above the declared 0.5 ceiling
        with pytest.raises(ValueError, match="envelope"):
            TestFunction(
                f=lambda pts: np.exp(-math.pi * np.sum(pts * pts, axis=1)),
                dim=1,
                envelope=GaussianDecay(math.pi, 0.5),
            )

    def test_compact_support_violation_rejected(self):
        with pytest.raises(ValueError, match="compact support"):
            TestFunction(
                f=lambda pts: np.exp(-np.sum(pts * pts, axis=1)),
                dim=1,
                envelope=CompactSupport(2.0),
            )

    def test_declared_sup_bound_checked(self):
        with pytest.raises(ValueError, match="sup bound"):
            TestFunction(
                f=lambda pts: np.exp(-math.pi * np.sum(pts * pts, axis=1)),
                dim=1,
                envelope=GaussianDecay(math.pi, 1.0),
                bounded=True,
                sup_bound=0.25,
            )

    def test_bounded_requires_declared_sup(self):
        with pytest.raises(ValueError, match="sup_bound"):
            TestFunction(
                f=lambda pts: np.zeros(pts.shape[0]),
                dim=1,
                envelope=GaussianDecay(1.0, 1.0),
                bounded=True,
            )

    def test_non_finite_values_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            TestFunction(
                f=lambda pts: np.full(pts.shape[0], np.nan),
                dim=1,
                envelope=GaussianDecay(1.0, 1.0),
            )

    def test_polynomial_power_must_exceed_dimension(self):
        fn = lambda pts: (1.0 + np.sqrt(np.sum(pts * pts, axis=1))) ** -1.5
        with pytest.raises(ValueError, match="power"):
            TestFunction(f=fn, dim=2, envelope=PolynomialDecay(1.5, 1.0))
        # 1.5 > 1 is accepted in dimension 1
        TestFunction(f=fn, dim=1, envelope=PolynomialDecay(1.5, 1.0))


class TestIntegrate:
    def test_unit_gaussian_normalization(self):
        result = integrate(unit_gaussian(1), GridSpec(6.0, 256, 1))
        assert abs(result.value - 1.0) < 1e-10

    @pytest.mark.parametrize("alpha", [0.05, 0.1, 0.5])
    def test_weierstrass_unit_mass(self, alpha):
        result, _ = integrate_auto(weierstrass_fn(alpha, 1), 1e-8)
        assert abs(result.value - 1.0) < 1e-8

    def test_gauss_kernel_mass_hits_the_peak_value(self):
        # integral of the gauss kernel equals the weierstrass peak at 0
        result, _ = integrate_auto(gauss_fn(0.1, 1), 1e-8)
        assert abs(result.value - 0.8920620580763856) < 1e-8

    def test_two_dimensional_normalization(self):
        result, _ = integrate_auto(unit_gaussian(2), 1e-8)
        assert abs(result.value - 1.0) < 1e-8

    def test_not_certified_integrable(self):
        with pytest.raises(QuadratureError, match="not certified integrable"):
            integrate(constant_fn(1.0), GridSpec(4.0, 128, 1))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            integrate(unit_gaussian(2), GridSpec(4.0, 128, 1))

    def test_fixed_grid_is_bit_reproducible(self):
        grid = GridSpec(6.0, 512, 1)
        a = integrate(unit_gaussian(1), grid)
        b = integrate(unit_gaussian(1), grid)
        assert a.value == b.value
        assert a.disc_error_est == b.disc_error_est
        assert a.tail_bound == b.tail_bound

    def test_polynomial_decay_against_exact_tail(self):
        # |f| = (1+|x|)^(-3): the tail bound formula is exact for this envelope
        f = TestFunction(
            f=lambda pts: (1.0 + np.abs(pts[:, 0])) ** -3.0,
            dim=1,
            envelope=PolynomialDecay(3.0, 1.0),
        )
        result, grid = integrate_auto(f, 2e-2)
        assert abs(result.value - 1.0) <= result.error_budget + 1e-12
        assert result.tail_bound == pytest.approx((1.0 + grid.radius) ** -2.0, rel=1e-12)


class TestOracleAgreement:
    @pytest.mark.parametrize(
        "builder,closed",
        [
            (lambda: unit_gaussian(1), 1.0),
            (lambda: weierstrass_fn(0.05, 1), 1.0),
            (lambda: weierstrass_fn(0.5, 1), 1.0),
            (lambda: gauss_fn(0.1, 1), 0.8920620580763856),
            (lambda: gauss_fn(0.5, 1), weierstrass_peak(KernelScale(0.5, 1))),
        ],
    )
    def test_error_within_reported_budget(self, builder, closed):
        result, _ = integrate_auto(builder(), 1e-9)
        assert abs(result.value - closed) <= result.error_budget + 1e-12

    def test_refinement_never_leaves_the_estimate(self):
        g = gauss_fn(0.2, 1)
        closed = weierstrass_peak(KernelScale(0.2, 1))
        for n in (128, 256, 512, 1024):
            coarse = integrate(g, GridSpec(6.0, n, 1))
            fine = integrate(g, GridSpec(6.0, 2 * n, 1))
            err_coarse = abs(coarse.value - closed)
            err_fine = abs(fine.value - closed)
            assert err_fine <= err_coarse + coarse.disc_error_est + 1e-15

    def test_linearity(self):
        g1 = gauss_fn(0.1, 1)
        g2 = weierstrass_fn(0.2, 1)
        a, b = 2.0, 3.0

        def combo(pts):
            return a * g1(pts) + b * g2(pts)

        combined = TestFunction(
            f=combo,
            dim=1,
            envelope=GaussianDecay(1.25, a + b * weierstrass_peak(KernelScale(0.2, 1))),
        )
        r_combo, _ = integrate_auto(combined, 1e-9)
        r1, _ = integrate_auto(g1, 1e-9)
        r2, _ = integrate_auto(g2, 1e-9)
        budget = r_combo.error_budget + a * r1.error_budget + b * r2.error_budget
        assert abs(r_combo.value - (a * r1.value + b * r2.value)) <= budget + 1e-12

    def test_translation_invariance(self):
        g = unit_gaussian(1)
        shifted = g.shifted([1.5])
        base, _ = integrate_auto(g, 1e-9)
        moved, _ = integrate_auto(shifted, 1e-9)
        assert abs(base.value - moved.value) <= base.error_budget + moved.error_budget + 1e-10


class TestAutoGrid:
    def test_gaussian_envelope_needs_modest_radius(self):
        grid = auto_grid(unit_gaussian(1), 1e-8)
        assert grid.radius <= 6.0
        envelope = GaussianDecay(math.pi, 1.0)
        assert envelope.tail_bound(grid.radius, 1) <= 0.5e-8

    def test_compact_support_picks_first_covering_rung(self):
        grid = auto_grid(bump_fn(1.0, 1), 1e-6)
        assert grid.radius == 4.0
        assert CompactSupport(1.0).tail_bound(grid.radius, 1) == 0.0

    def test_slow_polynomial_tail_exhausts_the_ladder(self):
        f = TestFunction(
            f=lambda pts: (1.0 + np.abs(pts[:, 0])) ** -1.5,
            dim=1,
            envelope=PolynomialDecay(1.5, 1.0),
        )
        with pytest.raises(QuadratureError, match="tolerance unreachable"):
            integrate_auto(f, 1e-8)

    def test_bounded_only_rejected(self):
        with pytest.raises(QuadratureError, match="not certified integrable"):
            integrate_auto(constant_fn(2.0), 1e-6)

    def test_oscillation_floor_raises_point_count(self):
        quiet = auto_grid(gauss_fn(0.1, 1), 1e-8, phase_rate=0.0)
        rapid = auto_grid(gauss_fn(0.1, 1), 1e-8, phase_rate=20.0)
        assert rapid.points_per_axis > quiet.points_per_axis
        assert rapid.points_per_axis >= 8.0 * rapid.radius * 20.0

    def test_ladder_env_overrides(self, monkeypatch):
        monkeypatch.setenv("HEATLINE_RADIUS_LADDER", "5,10")
        monkeypatch.setenv("HEATLINE_POINTS_LADDER", "96,192")
        grid = auto_grid(unit_gaussian(1), 1e-7)
        assert grid.radius == 5.0
        assert grid.points_per_axis == 96

    def test_bad_ladder_env_rejected(self, monkeypatch):
        monkeypatch.setenv("HEATLINE_POINTS_LADDER", "96,95")
        with pytest.raises(QuadratureError, match="increasing"):
            auto_grid(unit_gaussian(1), 1e-8)


class TestHelpers:
    def test_l1_norm_of_odd_function_counts_magnitude(self):
        # f(x) = x exp(-pi x^2) integrates to 0; its |f| mass is 1/pi
        def odd(pts):
            return pts[:, 0] * np.exp(-math.pi * np.sum(pts * pts, axis=1))

        f = TestFunction(f=odd, dim=1, envelope=GaussianDecay(math.pi / 2.0, 0.35))
        plain, _ = integrate_auto(f, 1e-9)
        mass = l1_norm(f, 1e-9)
        assert abs(plain.value) < 1e-12
        assert abs(mass.value - 1.0 / math.pi) < 1e-8

    def test_tail_bound_matches_hand_computation(self):
        # 1-d gaussian tail bound: exp(-c R^2) / (c R) at c = pi, R = 6
        envelope = GaussianDecay(math.pi, 1.0)
        expected = math.exp(-math.pi * 36.0) / (math.pi * 6.0)
        assert envelope.tail_bound(6.0, 1) == pytest.approx(expected, rel=1e-12)
        assert expected < 1e-48

    def test_scaled_and_shifted_envelopes_stay_valid(self):
        g = gauss_fn(0.2, 1)
        doubled = g.scaled(2.0)
        assert doubled.envelope.scale == pytest.approx(2.0)
        moved = g.shifted([0.8])
        assert moved.envelope.rate == pytest.approx(g.envelope.rate / 2.0)
        # the shifted function still peaks at its new center
        assert abs(moved(0.8)) == pytest.approx(1.0)
