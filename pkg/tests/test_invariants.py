import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steiner_soddy.centers import Triangle, intouch_triangle
from steiner_soddy.chain import CausticSingular, PorismConfig, Regime, chain_at, classify_regime
from steiner_soddy.geom import Circle, Point, Polygon
from steiner_soddy.invariants import (RatioUndefined, centroid_ratio_check, chain_pedal_cot_sums,
                                      curvature_power_sums, descartes_check, half_tangent_report,
                                      half_tangent_sum, half_tangent_table, half_tangents,
                                      pedal_cot_sums, radius_half_tangents, tangential_polygon)

SQ3 = math.sqrt(3)
EQ = Triangle(Point(1, 0), Point(-0.5, SQ3 / 2), Point(-0.5, -SQ3 / 2))


class TestHalfTangents:
    def test_symmetric(self):
        assert half_tangent_sum(PorismConfig(3, 1, 0, 1), 0.3) == pytest.approx(SQ3, abs=1e-14)

    def test_parabola_regime_gives_two(self):
        cfg = PorismConfig(3, 1, 1 - SQ3 / 2, 1)
        for t in (0.1, 0.8, 1.9):
            assert half_tangent_sum(cfg, t) == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("cfg", [PorismConfig(3, 1, 0.1, 1), PorismConfig(4, 1, 0.9, 1),
                                     PorismConfig(5, 1.3, 1.2, 0.8)])
    def test_angles_match_radii(self, cfg):
        for t in (0.05, 0.5, 1.1):
            ch = chain_at(cfg, t)
            assert np.allclose(half_tangents(cfg, t, ch), radius_half_tangents(ch), atol=1e-12)

    def test_batch_matches_single(self):
        cfg = PorismConfig(5, 1.0, 1.3, 1.0)
        ts = np.linspace(0.01, 1.2, 11)
        table = half_tangent_table(cfg, ts)
        for row, t in zip(table, ts):
            assert np.allclose(row, half_tangents(cfg, t), atol=1e-12)

    def test_literal_neighbour_rule_is_not_conserved(self):
        cfg = PorismConfig(3, 1.0, 0.7, 1.0)
        sums = [half_tangent_sum(cfg, t, rule="neighbors") for t in np.linspace(0.01, 2, 40)]
        assert np.ptp(sums) > 1e-3

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            half_tangent_report(PorismConfig(3, 1, 0.1, 1), 3)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(3, 8), st.floats(0.0, 3.0), st.floats(0.4, 2.0))
    def test_conservation_property(self, n, x0, lam):
        cfg = PorismConfig(n, 1.0, x0, lam)
        # stay off the pre-image incircle, where the caustic is a line
        if abs(x0 - math.cos(math.pi / n)) < 1e-2:
            return
        for k in range(1, n):
            rep = half_tangent_report(cfg, k, samples=90)
            assert rep.relative_deviation < 1e-8, (cfg, k, rep)


def test_tau_trichotomy():
    taus = {}
    for x0 in (0.1, 1 - SQ3 / 2, 0.7):
        cfg = PorismConfig(3, 1.0, x0, 1.0)
        taus[classify_regime(cfg)] = half_tangent_sum(cfg, 0.3)
    assert taus[Regime.ELLIPSE] < 2 < taus[Regime.HYPERBOLA]
    assert taus[Regime.PARABOLA] == pytest.approx(2, abs=1e-12)


class TestDescartes:
    def test_unit_circles(self):
        # three unit circles at the vertices of a side-2 equilateral: Soddy curvatures 3 +- 2 sqrt 3
        k4, k5 = 3 + 2 * SQ3, 3 - 2 * SQ3
        assert 3.0 == pytest.approx((k4 + k5) / 2)

    def test_symmetric_chain(self):
        assert descartes_check(chain_at(PorismConfig(3, 1, 0, 1), 0.2)) < 1e-12

    @pytest.mark.parametrize("x0", [0.1, 1 - SQ3 / 2, 0.7, 2.5])
    def test_all_regimes(self, x0):
        for t in (0.1, 1.0):
            assert descartes_check(chain_at(PorismConfig(3, 1, x0, 1), t)) < 1e-10

    def test_parabola_line_curvature(self):
        ch = chain_at(PorismConfig(3, 1, 1 - SQ3 / 2, 1), 0.4)
        assert 0.0 in ch.soddy_curvatures
        assert ch.caustic.radius * sum(ch.curvatures) == pytest.approx(2.0, abs=1e-12)

    def test_needs_three_circles(self):
        with pytest.raises(ValueError):
            descartes_check(chain_at(PorismConfig(4, 1, 0.1, 1), 0.1))


class TestPedalCot:
    def test_equilateral(self):
        contact = intouch_triangle(EQ)
        lhs, rhs = pedal_cot_sums(EQ.vertices, contact.vertices, 1)
        assert lhs == pytest.approx(SQ3) and rhs == pytest.approx(SQ3)
        lhs, rhs = pedal_cot_sums(EQ.vertices, contact.vertices, 2)
        assert lhs == pytest.approx(1.0) and rhs == pytest.approx(1.0)

    @pytest.mark.parametrize("x0", [0.1, 0.7, 2.5])
    def test_porism_sweep(self, x0):
        cfg = PorismConfig(3, 1.0, x0, 1.0)
        for k in (1, 2):
            values = []
            for t in np.linspace(0.01, 2.0, 24):
                lhs, rhs = chain_pedal_cot_sums(cfg, t, k)
                assert abs(lhs - rhs) < 1e-10
                values.append(lhs)
            assert np.ptp(values) < 1e-10


class TestCurvatureSums:
    def test_symmetric(self):
        cfg = PorismConfig(4, 1.0, 0.0, 1.0)
        ch = chain_at(cfg, 0.1)
        a = math.pi / 4
        kappa = math.cos(a) ** 2 / math.sin(a)  # lambda = R = 1
        assert curvature_power_sums(ch, 2) == pytest.approx(4 * kappa ** 2)

    def test_n5_constant(self):
        cfg = PorismConfig(5, 1.0, 0.3, 0.8)
        for k in range(1, 5):
            vals = [curvature_power_sums(chain_at(cfg, t), k) for t in np.linspace(0.01, 1.2, 36)]
            assert np.ptp(vals) / abs(np.mean(vals)) < 1e-9

    def test_first_sum_is_tau_over_r(self):
        cfg = PorismConfig(3, 1.0, 0.1, 1.0)
        ch = chain_at(cfg, 0.3)
        assert ch.caustic.radius * curvature_power_sums(ch, 1) == pytest.approx(half_tangent_sum(cfg, 0.3, chain=ch))


class TestCentroidRatio:
    def test_regular_polygon_undefined(self):
        with pytest.raises(RatioUndefined):
            centroid_ratio_check(tangential_polygon((0, 0), 1.0, np.arange(5) * 2 * math.pi / 5), (0, 0))

    def test_porism_polygon(self):
        ch = chain_at(PorismConfig(5, 1.0, 0.3, 0.8), 0.4)
        col, ratio = centroid_ratio_check(Polygon(ch.centers), ch.caustic.center)
        assert col < 1e-9 and ratio < 1e-9

    @settings(max_examples=30)
    @given(st.lists(st.floats(0.2, 1.4), min_size=4, max_size=4))
    def test_random_tangential_quadrilateral(self, gaps):
        # tangent points at increasing angles with every gap below pi keep the polygon convex
        angles = np.cumsum([0.0] + gaps[:3])
        if 2 * math.pi - angles[-1] >= math.pi or 2 * math.pi - angles[-1] <= 0.2:
            return
        poly = tangential_polygon((0.3, -0.1), 1.7, angles)
        try:
            col, ratio = centroid_ratio_check(poly, (0.3, -0.1))
        except RatioUndefined:
            return
        assert col < 1e-9 and ratio < 1e-9


def test_caustic_singular_config():
    with pytest.raises(CausticSingular):
        chain_at(PorismConfig(3, 1.0, 0.5, 1.0), 0.3)


def test_circle_type():
    assert isinstance(chain_at(PorismConfig(3, 1, 0.1, 1), 0.2).caustic, Circle)
