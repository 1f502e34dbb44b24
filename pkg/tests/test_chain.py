import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steiner_soddy.chain import (CausticSingular, FormulaSingular, InvalidConfig, PorismConfig, Regime,
                                 brocard_closed_form, brocard_inellipse_closed_form,
                                 caustic_closed_form, chain_at, chain_batch, classify_regime,
                                 numeric_caustic, outer_conic_closed_form, parabola_x0,
                                 regular_preimage)
from steiner_soddy.geom import Circle, Line, dist

SQ3 = math.sqrt(3)


def tangency_gap(c1, c2):
    d = dist(c1.center, c2.center)
    return min(abs(d - c1.radius - c2.radius), abs(d - abs(c1.radius - c2.radius)))


class TestConfig:
    @pytest.mark.parametrize("kwargs", [
        dict(n=2, r=1, x0=0.1, lam=1), dict(n=3, r=0, x0=0.1, lam=1), dict(n=3, r=1, x0=0.1, lam=0),
        dict(n=3, r=1, x0=math.nan, lam=1), dict(n=3.5, r=1, x0=0.1, lam=1),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidConfig):
            PorismConfig(**kwargs)

    def test_negative_x0_is_mirrored(self):
        assert PorismConfig(3, 1, -0.2, 1).x0 == 0.2


class TestPreimage:
    def test_n3(self):
        pre = regular_preimage(PorismConfig(3, 1.0, 0.0, 1.0))
        assert pre.chain[0].radius == pytest.approx(SQ3 / 2)
        assert pre.incircle.radius == pytest.approx(0.5)
        assert pre.soddy_inner.radius == pytest.approx(1 - SQ3 / 2)
        assert pre.soddy_outer.radius == pytest.approx(1 + SQ3 / 2)

    def test_n4(self):
        assert regular_preimage(PorismConfig(4, 1.0, 0.0, 1.0)).chain[0].radius == pytest.approx(math.sqrt(2) / 2)

    @pytest.mark.parametrize("n", range(3, 9))
    def test_adjacent_tangency(self, n):
        pre = regular_preimage(PorismConfig(n, 1.3, 0.0, 1.0), 0.4)
        for i in range(n):
            a, b = pre.chain[i], pre.chain[(i + 1) % n]
            assert dist(a.center, b.center) == pytest.approx(a.radius + b.radius, rel=1e-14)


class TestChain:
    def test_symmetric_chain_is_regular(self):
        cfg = PorismConfig(3, 1.0, 0.0, 1.3)
        ch = chain_at(cfg, 0.77)
        assert np.ptp(ch.radii) < 1e-14
        assert dist(ch.caustic.center, (0, 0)) < 1e-14
        assert ch.caustic.radius == pytest.approx(1.3 ** 2 / math.cos(math.pi / 3))

    def test_contacts_on_caustic(self):
        cfg = PorismConfig(5, 1.0, 0.3, 0.8)
        for t in np.linspace(0.01, 1.2, 7):
            ch = chain_at(cfg, t)
            for p in ch.contacts:
                assert abs(dist(p, ch.caustic.center) - ch.caustic.radius) < 1e-10 * ch.caustic.radius

    @settings(max_examples=40, deadline=None)
    @given(st.integers(3, 8), st.floats(0.0, 3.0), st.floats(0.3, 2.0), st.floats(0.0, 6.3))
    def test_tangency_property(self, n, x0, lam, t):
        cfg = PorismConfig(n, 1.0, x0, lam)
        try:
            ch = chain_at(cfg, t)
        except (CausticSingular, FormulaSingular, ValueError):
            return
        for i in range(n):
            a, b = ch.circles[i], ch.circles[(i + 1) % n]
            assert tangency_gap(a, b) < 1e-8 * max(a.radius, b.radius)

    def test_soddy_inner_degenerates_to_a_line(self):
        cfg = PorismConfig(3, 1.0, 1 - SQ3 / 2, 1.0)
        assert isinstance(chain_at(cfg, 0.2).soddy_inner, Line)

    def test_batch_matches_single(self):
        cfg = PorismConfig(4, 1.0, 0.6, 0.9)
        ts = np.linspace(0.01, 1.5, 9)
        batch = chain_batch(cfg, ts)
        for k, t in enumerate(ts):
            ch = chain_at(cfg, t)
            assert np.allclose(batch.centers[k], np.asarray(ch.centers), rtol=1e-12, atol=1e-12)
            assert np.allclose(batch.curvatures[k], ch.curvatures, rtol=1e-12)


class TestRegime:
    @pytest.mark.parametrize("x0, regime", [
        (0.05, Regime.ELLIPSE), (1 - SQ3 / 2, Regime.PARABOLA), (0.5, Regime.HYPERBOLA),
        (1 + SQ3 / 2, Regime.PARABOLA), (2.5, Regime.ELLIPSE),
    ])
    def test_n3(self, x0, regime):
        assert classify_regime(PorismConfig(3, 1.0, x0, 1.0)) == regime

    def test_parabola_x0(self):
        assert parabola_x0(3, 1.0) == pytest.approx(1 - SQ3 / 2)


class TestClosedForms:
    def test_caustic_symmetric(self):
        c = caustic_closed_form(PorismConfig(3, 1.0, 0.0, 1.0))
        assert dist(c.center, (0, 0)) == 0 and c.radius == pytest.approx(2.0)

    @pytest.mark.parametrize("cfg", [PorismConfig(3, 1, 0.1, 1), PorismConfig(6, 1.5, 2.4, 0.7),
                                     PorismConfig(5, 1.3, 1.2, 0.8)])
    def test_caustic_matches_numeric(self, cfg):
        cf = caustic_closed_form(cfg)
        num = numeric_caustic(chain_at(cfg, 0.3))
        assert dist(cf.center, num.center) < 1e-9 * num.radius
        assert cf.radius == pytest.approx(num.radius, rel=1e-9)

    def test_caustic_singular_on_incircle(self):
        with pytest.raises(CausticSingular):
            caustic_closed_form(PorismConfig(3, 1.0, 0.5, 1.0))

    def test_foci_symmetric(self):
        f1, f2, _ = outer_conic_closed_form(PorismConfig(3, 1.0, 0.0, 1.0))
        assert f1 == (0.0, 0.0) and f2 == (0.0, 0.0)

    @pytest.mark.parametrize("x0", [0.1, 0.7, 2.5])
    def test_foci_are_soddy_centers(self, x0):
        cfg = PorismConfig(3, 1.0, x0, 1.0)
        f1, f2, _ = outer_conic_closed_form(cfg)
        ch = chain_at(cfg, 0.2)
        got = sorted([ch.soddy_inner.center.x, ch.soddy_outer.center.x])
        assert got == pytest.approx(sorted([f1.x, f2.x]), rel=1e-12)

    def test_foci_singular_in_parabola_regime(self):
        with pytest.raises(FormulaSingular):
            outer_conic_closed_form(PorismConfig(3, 1.0, 1 - SQ3 / 2, 1.0))

    def test_brocard_symmetric_is_circle(self):
        o, a, b = brocard_inellipse_closed_form(PorismConfig(3, 2.0, 0.0, 1.0))
        assert o == (0.0, 0.0) and a == pytest.approx(0.5) and b == pytest.approx(0.5)

    def test_brocard_parabola_aspect(self):
        assert brocard_closed_form(PorismConfig(3, 1.0, 1 - SQ3 / 2, 1.0)).aspect_ratio == \
            pytest.approx(math.sqrt(5) / 2, abs=1e-12)

    def test_brocard_tangent_to_pedal_sides(self):
        cfg = PorismConfig(3, 1.0, 0.1, 1.0)
        b = brocard_closed_form(cfg)
        for t in np.linspace(0.01, 2.0, 9):
            ch = chain_at(cfg, t)
            for i in range(3):
                p, q = ch.contacts[i], ch.contacts[(i + 1) % 3]
                ln = Line.through(p, q)
                # support function of the axis-aligned ellipse at O'
                h = math.sqrt((b.a * ln.a) ** 2 + (b.b * ln.b) ** 2)
                assert abs(abs(ln.signed_distance(b.center)) - h) < 1e-8


def test_caustic_is_circle_instance():
    assert isinstance(chain_at(PorismConfig(4, 1, 0.2, 1), 0.1).caustic, Circle)
