"""Verification harness: every claim about the porism as a named numeric check.

Claims live in a static registry (id -> check). A check returns a residual
and the tolerance it is judged against. Closed-form claims also report
whether the purely numeric cross-check behind them held; if it did and the
closed form still misses, the status is ``SUSPECTED_TYPO`` instead of
``FAIL``.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .centers import Triangle, intouch_triangle, is_acute, kimberling
from .chain import (FormulaSingular, PorismConfig, Regime, brocard_closed_form, caustic_closed_form,
                    chain_at, classify_regime, numeric_caustic, outer_conic_closed_form)
from .geom import (Circle, Conic, ConicKind, GeometryError, Line, Point, Polygon, conic_axes,
                   conic_foci, conic_from_tangent_lines, dist)
from .invariants import (RatioUndefined, centroid_ratio_check, chain_pedal_cot_sums,
                         curvature_power_sums, descartes_check, half_tangent_table, half_tangents,
                         radius_half_tangents)
from .loci import (LocusKind, circle_conic_contacts, classify_locus,
                   implicit_residual, locus, locus_conic_closed_form, parabola_incircle,
                   parabola_poncelet_triangle, refine_axis_extremes, sweep_center,
                   x4_parabola_line, x15_circle_closed_form, x20_segment_closed_form)
from .porism import (BranchState, caustic_scale, eversion_sweep, fit_outer_conic,
                     pedal_polygon, swept_vertices, polar_family_fits, polar_image_family)
from .tolerances import DEFAULT, Tolerances

PASS = "PASS"
FAIL = "FAIL"
SUSPECTED_TYPO = "SUSPECTED_TYPO"
NOT_APPLICABLE = "NOT_APPLICABLE"


@dataclass(frozen=True)
class SuiteMember:
    name: str
    cfg: PorismConfig


def _member(name, n, r, x0, lam):
    return SuiteMember(name, PorismConfig(n, r, x0, lam))


SQRT3 = math.sqrt(3.0)

DEFAULT_SUITE = (
    _member("ellipse-n3", 3, 1.0, 0.1, 1.0),
    _member("ellipse-n3-b", 3, 1.3, 0.05, 0.7),
    _member("ellipse-n3-far", 3, 1.0, 2.5, 1.2),
    _member("ellipse-n4", 4, 1.0, 0.2, 1.0),
    _member("ellipse-n5", 5, 1.0, 0.3, 0.8),
    _member("ellipse-n6-far", 6, 1.5, 2.4, 0.7),
    _member("ellipse-n8", 8, 1.0, 0.2, 1.1),
    _member("symmetric-n3", 3, 1.0, 0.0, 1.0),
    _member("parabola-n3", 3, 1.0, 1.0 - SQRT3 / 2, 1.0),
    _member("parabola-n3-outer", 3, 1.0, 1.0 + SQRT3 / 2, 0.9),
    _member("parabola-n6", 6, 1.0, 0.5, 1.0),
    _member("hyperbola-n3", 3, 1.0, 0.7, 1.0),
    _member("hyperbola-n3-b", 3, 1.0, 1.5, 1.0),
    _member("hyperbola-n5", 5, 1.3, 1.2, 0.8),
    _member("hyperbola-n7", 7, 1.0, 1.3, 1.0),
)


@dataclass
class Outcome:
    residual: float
    tolerance: float
    cross_check: bool = True
    detail: str = ""
    applicable: bool = True


@dataclass(frozen=True)
class Claim:
    id: str
    anchor: str
    check: Callable[["Context"], Outcome]
    closed_form: bool = False


@dataclass
class Context:
    suite: Sequence[SuiteMember]
    samples: int = 180
    tol: Tolerances = DEFAULT
    _cache: dict = field(default_factory=dict)

    def members(self, n=None, regimes=None, symmetric=None):
        out = []
        for m in self.suite:
            if n is not None and m.cfg.n != n:
                continue
            if regimes is not None and classify_regime(m.cfg) not in regimes:
                continue
            if symmetric is not None and (m.cfg.x0 == 0.0) != symmetric:
                continue
            out.append(m)
        return out

    def phases(self, cfg, count=None):
        return cfg.phases(count or max(8, self.samples // 8), 1e-3)


@dataclass(frozen=True)
class Record:
    id: str
    anchor: str
    residual: Optional[float]
    tolerance: float
    status: str
    detail: str = ""

    def as_dict(self, details=False):
        out = {"id": self.id, "anchor": self.anchor, "residual": self.residual,
               "tolerance": self.tolerance, "status": self.status}
        if details:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class VerificationReport:
    records: tuple
    registered: int

    @property
    def coverage(self):
        return len(self.records)

    @property
    def failed(self):
        return [r for r in self.records if r.status == FAIL]

    def to_json(self, details=False):
        return json.dumps([r.as_dict(details) for r in self.records], indent=2) + "\n"

    def to_table(self):
        rows = [("id", "status", "residual", "tolerance", "anchor")]
        for r in self.records:
            res = "n/a" if r.residual is None else f"{r.residual:.3e}"
            rows.append((r.id, r.status, res, f"{r.tolerance:.1e}", r.anchor))
        widths = [max(len(row[i]) for row in rows) for i in range(4)]
        lines = ["  ".join(row[i].ljust(widths[i]) for i in range(4)) + "  " + row[4] for row in rows]
        counts = {s: sum(r.status == s for r in self.records)
                  for s in (PASS, FAIL, SUSPECTED_TYPO, NOT_APPLICABLE)}
        lines.append("")
        lines.append(f"coverage: {self.coverage}/{self.registered} claims; "
                     + ", ".join(f"{k}={v}" for k, v in counts.items()))
        return "\n".join(lines) + "\n"


def _na(reason):
    return Outcome(math.nan, 0.0, applicable=False, detail=reason)


def _worst(items):
    """Max residual over ``(residual, label)`` pairs, with the label of the worst."""
    items = list(items)
    if not items:
        return 0.0, ""
    res, label = max(items, key=lambda p: (p[0] if math.isfinite(p[0]) else math.inf))
    return res, label


def _chains(ctx, cfg, count=None):
    key = ("chains", cfg, count)
    if key not in ctx._cache:
        out = []
        for t in ctx.phases(cfg, count):
            try:
                out.append(chain_at(cfg, t))
            except GeometryError:
                continue
        ctx._cache[key] = out
    return ctx._cache[key]


def _outer_fit(ctx, cfg):
    key = ("outer", cfg)
    if key not in ctx._cache:
        ctx._cache[key] = fit_outer_conic(cfg, samples=max(60, ctx.samples // 2))
    return ctx._cache[key]


def _gcircle_tangency(circle: Circle, other):
    if isinstance(other, Line):
        return abs(abs(other.signed_distance(circle.center)) - circle.radius) / circle.radius
    d = dist(circle.center, other.center)
    big = max(circle.radius, other.radius)
    return min(abs(d - circle.radius - other.radius), abs(d - abs(circle.radius - other.radius))) / big


ELLIPSE = (Regime.ELLIPSE,)
HYPERBOLA = (Regime.HYPERBOLA,)
PARABOLA = (Regime.PARABOLA,)
NON_PARABOLA = (Regime.ELLIPSE, Regime.HYPERBOLA)


# -- chain and caustic ------------------------------------------------------------

def _chain_tangency(ctx):
    items = []
    for m in ctx.suite:
        for ch in _chains(ctx, m.cfg):
            n = len(ch.circles)
            for i in range(n):
                items.append((_gcircle_tangency(ch.circles[i], ch.circles[(i + 1) % n]), m.name))
                items.append((_gcircle_tangency(ch.circles[i], ch.soddy_inner), m.name))
                items.append((_gcircle_tangency(ch.circles[i], ch.soddy_outer), m.name))
    res, worst = _worst(items)
    return Outcome(res, ctx.tol.geometry, detail=f"worst member {worst}")


def _caustic_concyclic(ctx):
    items = []
    for m in ctx.suite:
        for ch in _chains(ctx, m.cfg):
            c = ch.caustic
            items.append((max(abs(dist(p, c.center) - c.radius) for p in ch.contacts) / c.radius, m.name))
    res, worst = _worst(items)
    return Outcome(res, ctx.tol.geometry, detail=f"worst member {worst}")


def _caustic_closed_form(ctx):
    items = []
    cross = True
    for m in ctx.suite:
        try:
            cf = caustic_closed_form(m.cfg)
        except FormulaSingular:
            continue
        for ch in _chains(ctx, m.cfg):
            num = numeric_caustic(ch)
            if dist(num.center, ch.caustic.center) > 1e-9 * num.radius:
                cross = False
            items.append((max(dist(cf.center, num.center), abs(cf.radius - num.radius)) / num.radius,
                          m.name))
    res, worst = _worst(items)
    return Outcome(res, 1e-9, cross, detail=f"worst member {worst}")


def _regime_classification(ctx):
    bad = []
    for m in ctx.members(symmetric=False):
        kind = _outer_fit(ctx, m.cfg).kind
        expected = {Regime.ELLIPSE: (ConicKind.ELLIPSE, ConicKind.CIRCLE),
                    Regime.PARABOLA: (ConicKind.PARABOLA,),
                    Regime.HYPERBOLA: (ConicKind.HYPERBOLA,)}[classify_regime(m.cfg)]
        if kind not in expected:
            bad.append(f"{m.name}:{kind.value}")
    return Outcome(float(len(bad)), 0.5, detail="mismatches: " + (", ".join(bad) or "none"))


def _outer_foci(ctx):
    items, cross_items = [], []
    for m in ctx.members(regimes=NON_PARABOLA, symmetric=False):
        f1, f2, _ = outer_conic_closed_form(m.cfg)
        fit = _outer_fit(ctx, m.cfg)
        g1, g2 = conic_foci(fit)
        ch = chain_at(m.cfg, 1e-3)
        s1, s2 = ch.soddy_inner.center, ch.soddy_outer.center
        scale = max(1.0, abs(f1.x), abs(f2.x))

        def pair(p, q, u, v):
            return min(max(dist(p, u), dist(q, v)), max(dist(p, v), dist(q, u))) / scale

        items.append((pair(f1, f2, g1, g2), m.name))
        cross_items.append(pair(s1, s2, g1, g2))
    if not items:
        return _na("no non-parabola member")
    res, worst = _worst(items)
    cross = max(cross_items) < 1e-6
    return Outcome(res, 1e-6, cross, detail=f"worst member {worst}; fitted foci vs Soddy centers "
                                            f"{max(cross_items):.2e}")


def _outer_vertex(ctx):
    items = []
    for m in ctx.members(regimes=NON_PARABOLA, symmetric=False):
        _, _, vx = outer_conic_closed_form(m.cfg)
        c, a, _, d = conic_axes(_outer_fit(ctx, m.cfg))
        verts = (c.x + a * d.x, c.x - a * d.x)
        items.append((min(abs(v - vx) for v in verts) / max(1.0, abs(vx)), m.name))
    if not items:
        return _na("no non-parabola member")
    res, worst = _worst(items)
    return Outcome(res, 1e-6, detail=f"worst member {worst}; matched against either axis vertex")


def _poncelet_closure(ctx):
    items = []
    for m in ctx.members(symmetric=False):
        fit = _outer_fit(ctx, m.cfg)
        items.append((fit.residual, m.name + ":conic"))
        for ch in _chains(ctx, m.cfg):
            c = ch.caustic
            side = max(abs(abs(ln.signed_distance(c.center)) - c.radius)
                       for ln in Polygon(ch.centers).side_lines()) / c.radius
            items.append((side, m.name + ":caustic"))
    res, worst = _worst(items)
    return Outcome(res, 1e-8, detail=f"worst {worst}")


# -- conservation -----------------------------------------------------------------

def _half_tangent_conservation(ctx):
    items = []
    for m in ctx.suite:
        table = half_tangent_table(m.cfg, m.cfg.phases(ctx.samples, 1e-3))
        for k in range(1, m.cfg.n):
            s = np.sum(table ** k, axis=1)
            items.append((float(np.max(np.abs(s - s.mean())) / max(abs(s.mean()), ctx.tol.relative_floor)),
                          f"{m.name}:k={k}"))
    res, worst = _worst(items)
    return Outcome(res, 1e-8, detail=f"worst {worst}")


def _half_tangent_radius(ctx):
    items = []
    for m in ctx.suite:
        for ch in _chains(ctx, m.cfg):
            t = ch.phase
            h = half_tangents(m.cfg, t, ch)
            items.append((float(np.max(np.abs(h - radius_half_tangents(ch)) / (1 + np.abs(h)))), m.name))
    res, worst = _worst(items)
    return Outcome(res, 1e-9, detail=f"worst member {worst}; signed tan(theta/2) vs r * curvature")


def _sign_rule_literal(ctx):
    members = ctx.members(regimes=HYPERBOLA)
    if not members:
        return _na("no hyperbola member")
    items, distal = [], []
    for m in members:
        sums_lit, sums_dist = [], []
        for ch in _chains(ctx, m.cfg):
            sums_lit.append(float(np.sum(half_tangents(m.cfg, ch.phase, ch, rule="neighbors"))))
            sums_dist.append(float(np.sum(half_tangents(m.cfg, ch.phase, ch))))
        for store, sums in ((items, sums_lit), (distal, sums_dist)):
            s = np.asarray(sums)
            store.append(float(np.max(np.abs(s - s.mean())) / abs(s.mean())))
    return Outcome(max(items), 1e-8, max(distal) < 1e-8,
                   detail=f"neighbour rule deviation {max(items):.3e}; lone-distal-vertex rule "
                          f"deviation {max(distal):.3e}")


def _tau_parabola(ctx):
    members = ctx.members(n=3, regimes=PARABOLA)
    if not members:
        return _na("no N=3 parabola member")
    items = []
    for m in members:
        for ch in _chains(ctx, m.cfg):
            items.append((abs(float(np.sum(half_tangents(m.cfg, ch.phase, ch))) - 2.0), m.name))
    res, worst = _worst(items)
    return Outcome(res, 1e-8, detail=f"worst member {worst}")


def _tau_trichotomy(ctx):
    bad, seen = [], []
    for m in ctx.members(n=3):
        regime = classify_regime(m.cfg)
        taus = [float(np.sum(half_tangents(m.cfg, ch.phase, ch))) for ch in _chains(ctx, m.cfg)]
        lo, hi = min(taus), max(taus)
        ok = {Regime.ELLIPSE: hi < 2.0, Regime.HYPERBOLA: lo > 2.0,
              Regime.PARABOLA: abs(hi - 2.0) < 1e-8 and abs(lo - 2.0) < 1e-8}[regime]
        seen.append(f"{m.name}:{regime.value[0]}:{lo:.6f}")
        if not ok:
            bad.append(m.name)
    if not seen:
        return _na("no N=3 member")
    return Outcome(float(len(bad)), 0.5, detail="; ".join(seen))


def _descartes(ctx):
    items = []
    for m in ctx.members(n=3):
        for ch in _chains(ctx, m.cfg):
            items.append((descartes_check(ch), m.name))
    if not items:
        return _na("no N=3 member")
    res, worst = _worst(items)
    return Outcome(res, 1e-10, detail=f"worst member {worst}")


def _parabola_outer_curvature(ctx):
    members = ctx.members(n=3, regimes=PARABOLA)
    if not members:
        return _na("no N=3 parabola member")
    items = []
    for m in members:
        for ch in _chains(ctx, m.cfg):
            k4, k5 = ch.soddy_curvatures
            line_k = k4 if isinstance(ch.soddy_inner, Line) else k5
            tau = ch.caustic.radius * sum(ch.curvatures)
            items.append((max(abs(line_k), abs(tau - 2.0)), m.name))
    res, worst = _worst(items)
    return Outcome(res, 1e-8, detail=f"line curvature and r / rho - 2; worst {worst}")


def _curvature_power_sums(ctx):
    items = []
    for m in ctx.suite:
        chains = _chains(ctx, m.cfg)
        for k in range(1, m.cfg.n):
            s = np.array([curvature_power_sums(ch, k) for ch in chains])
            items.append((float(np.max(np.abs(s - s.mean())) / max(abs(s.mean()), ctx.tol.relative_floor)),
                          f"{m.name}:k={k}"))
        if classify_regime(m.cfg) == Regime.ELLIPSE:
            for ch in chains:
                tau = float(np.sum(half_tangents(m.cfg, ch.phase, ch)))
                items.append((abs(ch.caustic.radius * curvature_power_sums(ch, 1) - tau) / tau,
                               f"{m.name}:tau"))
    res, worst = _worst(items)
    return Outcome(res, 1e-9, detail=f"worst {worst}")


# -- pedal polygon and centroids ------------------------------------------------

def _pedal_polygon(ctx):
    items = []
    for m in ctx.suite:
        for ch in _chains(ctx, m.cfg):
            feet = pedal_polygon(Polygon(ch.centers), ch.caustic.center)
            items.append((max(dist(p, q) for p, q in zip(feet, ch.contacts)) / ch.caustic.radius, m.name))
            if m.cfg.n == 3 and classify_regime(m.cfg) != Regime.HYPERBOLA:
                tri = Triangle.from_points(ch.centers)
                touch = intouch_triangle(tri)
                gap = max(min(dist(p, q) for q in ch.contacts) for p in touch.vertices)
                # side-length formula: error scales with the triangle, not the caustic
                items.append((gap / max(tri.sides), m.name + ":intouch"))
    res, worst = _worst(items)
    return Outcome(res, ctx.tol.geometry, detail=f"worst {worst}")


def _pedal_cot(ctx):
    items = []
    for m in ctx.members(n=3):
        for k in (1, 2):
            lhs_all = []
            for ch in _chains(ctx, m.cfg):
                lhs, rhs = chain_pedal_cot_sums(m.cfg, ch.phase, k, ch)
                items.append((abs(lhs - rhs), f"{m.name}:k={k}"))
                lhs_all.append(lhs)
            items.append((max(lhs_all) - min(lhs_all), f"{m.name}:k={k}:sweep"))
    if not items:
        return _na("no N=3 member")
    res, worst = _worst(items)
    return Outcome(res, 1e-9, detail=f"worst {worst}")


def _centroid_ratio(ctx):
    # the relation needs a polygon circumscribing its circle: convex ellipse/parabola regimes
    items = []
    for m in ctx.members(regimes=(Regime.ELLIPSE, Regime.PARABOLA), symmetric=False):
        for ch in _chains(ctx, m.cfg):
            try:
                col, ratio = centroid_ratio_check(Polygon(ch.centers), ch.caustic.center)
            except RatioUndefined:
                continue
            items.append((max(col, ratio), m.name))
    res, worst = _worst(items)
    return Outcome(res, 1e-9, detail=f"worst member {worst}")


def _centroid_loci(ctx):
    items, kinds = [], []
    for m in ctx.members(regimes=ELLIPSE, symmetric=False):
        for cid in ("C0", "C1", "C2"):
            res = locus(m.cfg, cid, ctx.samples, ctx.tol)
            kinds.append(f"{m.name}:{cid}:{res.kind.value}")
            if res.kind != LocusKind.CONIC:
                items.append((math.inf, f"{m.name}:{cid}"))
                continue
            coef = np.asarray(res.params["coef"])
            conic = Conic.from_coefficients(coef)
            c = conic.center()
            scale = 1.0 + abs(c.x)
            items.append((max(abs(c.y) / scale, abs(coef[1]), abs(coef[4]) / scale), f"{m.name}:{cid}"))
    if not items:
        return _na("no ellipse-regime member")
    res, worst = _worst(items)
    return Outcome(res, 1e-6, detail=f"worst {worst}; " + ", ".join(kinds))


# -- hyperbola states, homothetic family -------------------------------------------

def _eversion(ctx):
    members = ctx.members(regimes=HYPERBOLA)
    if not members:
        return _na("no hyperbola member")
    bad, notes = 0, []
    for m in members:
        rows = eversion_sweep(m.cfg, 3600)
        disagree = sum((state == BranchState.SPLIT) == inside for _, state, inside in rows)
        flips = sum(rows[i][1] != rows[i - 1][1] for i in range(len(rows)))
        bad += disagree + (flips % 2)
        notes.append(f"{m.name}: {disagree} disagreements, {flips} flips")
    return Outcome(float(bad), 0.5, detail="; ".join(notes))


HOMOTHETIC_CASES = ((2.0, 1.2), (2.0, 1.9), (3.0, 1.0))


def _homothetic_polar(ctx):
    items, notes = [], []
    for a, b in HOMOTHETIC_CASES:
        polys = polar_image_family(a, b, samples=max(60, ctx.samples // 2))
        verts, env = polar_family_fits(polys)
        if env.kind != ConicKind.CIRCLE:
            items.append((math.inf, f"{a},{b}"))
            continue
        c, rho, _, _ = conic_axes(env)
        tang = max(abs(abs(ln.signed_distance(c)) - rho) for p in polys for ln in p.side_lines()) / rho
        items.append((max(verts.residual, env.residual, tang), f"{a},{b}"))
        notes.append(f"({a},{b}) vertices on {verts.kind.value}")
    res, worst = _worst(items)
    return Outcome(res, 1e-6, detail=f"worst {worst}; " + "; ".join(notes))


# -- Brocard inellipse ---------------------------------------------------------------

def _pedal_sides(ctx, cfg):
    return [ln for ch in _chains(ctx, cfg, 64) for ln in Polygon(ch.contacts).side_lines()]


def _brocard(ctx):
    items, cross = [], True
    for m in ctx.members(regimes=NON_PARABOLA):
        try:
            cf = brocard_closed_form(m.cfg)
        except FormulaSingular:
            continue
        fit = conic_from_tangent_lines(_pedal_sides(ctx, m.cfg))
        if fit.residual > 1e-9:
            cross = False
        if fit.kind == ConicKind.CIRCLE:
            c, ax, ay = fit.center(), *conic_axes(fit)[1:3]
        else:
            c, a1, a2, d = conic_axes(fit)
            ax, ay = (a1, a2) if abs(d.x) > abs(d.y) else (a2, a1)
        scale = max(cf.a, cf.b)
        items.append((max(dist(c, cf.center) / max(1.0, abs(cf.center.x)),
                          abs(ax - cf.a) / scale, abs(ay - cf.b) / scale), m.name))
    if not items:
        return _na("no member with a Brocard closed form")
    res, worst = _worst(items)
    return Outcome(res, 1e-6, cross, detail=f"worst member {worst}; a' along the axis, b' across")


def _brocard_aspect(ctx):
    members = ctx.members(n=3, regimes=PARABOLA)
    if not members:
        return _na("no N=3 parabola member")
    target = math.sqrt(5.0) / 2
    items = []
    for m in members:
        cf = brocard_closed_form(m.cfg)
        fit = conic_from_tangent_lines(_pedal_sides(ctx, m.cfg))
        _, a1, a2, _ = conic_axes(fit)
        items.append((abs(cf.b / cf.a - target), m.name + ":closed"))
        items.append((abs(a1 / a2 - target), m.name + ":fit"))
    res, worst = _worst(items)
    return Outcome(res, 1e-9, detail=f"ratio b'/a' (across over along the axis); worst {worst}")


# -- parabola regime ------------------------------------------------------------

def _parabola_frame(ctx, cfg):
    """Focus, unit axis direction (towards the focus), vertex and ``c`` of the fitted parabola."""
    fit = _outer_fit(ctx, cfg)
    if fit.kind != ConicKind.PARABOLA:
        raise GeometryError(f"fitted conic is {fit.kind.value}")
    focus, directrix = conic_foci(fit)
    n = np.array([directrix.a, directrix.b])
    if directrix.signed_distance(focus) < 0:
        n = -n
    c = abs(directrix.signed_distance(focus)) / 2
    vertex = np.asarray(focus) - c * n
    return fit, focus, directrix, n, vertex, c


def _parabola_focal_frame(ctx, cfg):
    """Axis direction, vertex and ``c`` from the focus and the swept vertices, with no fit.

    The focus is the center of the finite Soddy image and the axis is the
    x-axis. Every vertex ``p`` gives ``c = (|p - F| - (p - F).n) / 2``; the
    orientation ``n`` is whichever of +x, -x makes that constant.
    """
    ch = chain_at(cfg, 1e-3)
    finite = ch.soddy_outer if isinstance(ch.soddy_inner, Line) else ch.soddy_inner
    focus = np.asarray(finite.center)
    pts = np.asarray(swept_vertices(cfg, max(60, ctx.samples // 2))) - focus
    r = np.hypot(pts[:, 0], pts[:, 1])
    best = None
    for sx in (1.0, -1.0):
        cs = (r - sx * pts[:, 0]) / 2
        if best is None or np.ptp(cs) < np.ptp(best[1]):
            best = (sx, cs)
    n = np.array([best[0], 0.0])
    c = float(np.median(best[1]))
    return n, focus - c * n, c


def _parabola_soddy_line(ctx):
    members = ctx.members(regimes=PARABOLA)
    if not members:
        return _na("no parabola member")
    items = []
    for m in members:
        _, _, directrix, _, _, _ = _parabola_frame(ctx, m.cfg)
        ch = chain_at(m.cfg, 1e-3)
        line = ch.soddy_inner if isinstance(ch.soddy_inner, Line) else ch.soddy_outer
        if not isinstance(line, Line):
            items.append((math.inf, m.name))
            continue
        items.append((abs(line.a * directrix.b - line.b * directrix.a), m.name))
    res, worst = _worst(items)
    return Outcome(res, 1e-8, detail=f"angle in radians; worst {worst}")


def _x4_parabola_steiner_soddy(ctx):
    members = ctx.members(n=3, regimes=PARABOLA)
    if not members:
        return _na("no N=3 parabola member")
    items, notes = [], []
    for m in members:
        n, vertex, c = _parabola_focal_frame(ctx, m.cfg)
        # drop triangles with a vertex far out on the parabola: X4 loses digits there
        bound = 50 * caustic_scale(m.cfg)
        pts = [kimberling(Triangle.from_points(ch.centers), 4)
               for ch in _chains(ctx, m.cfg, ctx.samples)
               if max(math.hypot(*q) for q in ch.centers) <= bound]
        ords = np.array([(np.asarray(p) - vertex) @ n for p in pts])
        items.append((float(np.max(np.abs(ords / c + 1.75))), m.name))
        # the general law with the incircle ordinate measured in the same frame
        y0 = float((np.asarray(chain_at(m.cfg, 1e-3).caustic.center) - vertex) @ n)
        law = -x4_parabola_line(c, y0).c
        notes.append(f"{m.name}: incircle ordinate {y0 / c:.12f} c, law line {law / c:.12f} c")
    res, worst = _worst(items)
    return Outcome(res, 1e-8, detail=f"|y/c + 7/4|; worst {worst}; " + "; ".join(notes))


def _x4_parabola_law(ctx):
    c = 0.25
    items = []
    for r in (0.1, 0.3, 0.5, 1.0, 2.0):
        y0 = r * r + r
        rr, _ = parabola_incircle(c, y0)
        line_y = -x4_parabola_line(c, y0).c
        expected = r * r + 2 * r - 1
        items.append((abs(rr - r), f"r={r}:radius"))
        items.append((abs(line_y - expected), f"r={r}:line"))
        for u in np.linspace(-3.0, 3.0, 25):
            try:
                tri = parabola_poncelet_triangle(c, y0, r, float(u))
                h = kimberling(Triangle(*tri), 4)
            except GeometryError:
                continue
            items.append((abs(h.y - expected), f"r={r}"))
    res, worst = _worst(items)
    return Outcome(res, 1e-9, detail=f"unit parabola; worst {worst}")


# -- locus equations ----------------------------------------------------------------

def _locus_members(ctx):
    return ctx.members(n=3, regimes=ELLIPSE, symmetric=False)


def _locus_conic(center, sign=-1):
    def check(ctx):
        members = _locus_members(ctx)
        if not members:
            return _na("no N=3 ellipse member")
        items, fits = [], []
        for m in members:
            pts = sweep_center(m.cfg, center, ctx.samples).valid
            items.append((implicit_residual(locus_conic_closed_form(m.cfg, center, sign), pts), m.name))
            fits.append(classify_locus(pts, ctx.tol).fit_residual)
        res, worst = _worst(items)
        return Outcome(res, 1e-6, max(fits) < ctx.tol.conic,
                       detail=f"worst member {worst}; numeric conic fit residual {max(fits):.2e}")
    return check


def _x15(ctx):
    members = [m for m in _locus_members(ctx)
               if m.cfg.x0 < m.cfg.r * (1 - math.sin(m.cfg.alpha))]
    if not members:
        return _na("no member with the inversion center inside the inner Soddy circle")
    items, cross = [], True
    for m in members:
        cf = x15_circle_closed_form(m.cfg)
        pts = np.asarray(sweep_center(m.cfg, 15, ctx.samples).valid)
        on = np.abs(np.hypot(pts[:, 0] - cf.center.x, pts[:, 1] - cf.center.y) - cf.radius) / cf.radius
        items.append((float(on.max()), m.name))
        fit = locus(m.cfg, 15, ctx.samples, ctx.tol)
        cross &= fit.kind == LocusKind.CIRCLE
    res, worst = _worst(items)
    return Outcome(res, 1e-6, cross, detail=f"relative radial residual; worst member {worst}")


def _x20(ctx):
    members = _locus_members(ctx)
    if not members:
        return _na("no N=3 ellipse member")
    items, notes = [], []
    for m in members:
        lo, hi = refine_axis_extremes(m.cfg, 20, ctx.samples)
        x_minus, x_plus, length = x20_segment_closed_form(m.cfg)
        ends = sorted((x_minus, x_plus))
        scale = max(abs(lo), abs(hi), 1e-300)
        items.append((max(abs(lo - ends[0]), abs(hi - ends[1])) / scale, m.name + ":ends"))
        # the printed length is signed; far-side configs give its negative
        items.append((abs((hi - lo) - abs(length)) / max(abs(length), 1e-300), m.name + ":length"))
        notes.append(f"{m.name}: printed minus/plus {x_minus:.6f}/{x_plus:.6f}")
    res, worst = _worst(items)
    return Outcome(res, 1e-6, detail=f"endpoints compared as a set, length unsigned; worst {worst}; " + "; ".join(notes))


# -- locus classification -----------------------------------------------------------

EXPECTED_KINDS = {
    **{k: LocusKind.CONIC for k in (2, 3, 4, 5, 6, 8, 9, 10)},
    **{k: LocusKind.CIRCLE for k in (13, 14, 15, 16, 80, 105)},
    **{k: LocusKind.SEGMENT for k in (20, 77, 170)},
    **{k: LocusKind.STATIONARY for k in (1, 7, 175, 176)},
}


def _reference(ctx):
    members = _locus_members(ctx)
    return members[0] if members else None


def _intouch_acute(ctx, cfg):
    key = ("acute", cfg)
    if key not in ctx._cache:
        ctx._cache[key] = all(is_acute(intouch_triangle(Triangle.from_points(ch.centers)))
                              for ch in _chains(ctx, cfg))
    return ctx._cache[key]


def _locus_table(ctx):
    ref = _reference(ctx)
    if ref is None:
        return _na("no N=3 ellipse member")
    bad, notes = [], []
    acute = _intouch_acute(ctx, ref.cfg)
    for k, expected in sorted(EXPECTED_KINDS.items()):
        if k in (1, 7) and not acute:
            continue
        res = locus(ref.cfg, k, ctx.samples, ctx.tol)
        ok = res.kind == expected
        if ok and expected == LocusKind.SEGMENT:
            line = res.params["line"]
            ok = abs(line[0]) < 1e-8 and abs(line[2]) < 1e-8 * max(1.0, res.params["length"])
        notes.append(f"X{k}:{res.kind.value}")
        if not ok:
            bad.append(k)
    x65 = locus(ref.cfg, 65, ctx.samples, ctx.tol)
    notes.append(f"X65:{x65.kind.value} (reported only)")
    return Outcome(float(len(bad)), 0.5, detail=f"{ref.name}: " + ", ".join(notes))


def _x105_axis(ctx):
    ref = _reference(ctx)
    if ref is None:
        return _na("no N=3 ellipse member")
    res = locus(ref.cfg, 105, ctx.samples, ctx.tol)
    if res.kind != LocusKind.CIRCLE:
        return Outcome(math.inf, 1e-8, detail=f"classified {res.kind.value}")
    return Outcome(abs(res.params["center"][1]), 1e-8, detail=f"center {res.params['center']}")


def _x105_tangency(ctx):
    ref = _reference(ctx)
    if ref is None:
        return _na("no N=3 ellipse member")
    res = locus(ref.cfg, 105, ctx.samples, ctx.tol)
    if res.kind != LocusKind.CIRCLE:
        return Outcome(math.inf, 1e-6, detail=f"classified {res.kind.value}")
    circ = Circle(Point(*res.params["center"]), res.params["radius"])
    contacts = circle_conic_contacts(circ, _outer_fit(ctx, ref.cfg))
    if len(contacts) != 2:
        return Outcome(math.inf, 1e-6, detail=f"{len(contacts)} contacts")
    return Outcome(max(g for _, g in contacts), 1e-6,
                   detail="contact angles " + ", ".join(f"{t:.6f}" for t, _ in contacts))


def _soddy_centers(ctx):
    members = ctx.members(n=3, regimes=ELLIPSE, symmetric=False)
    if not members:
        return _na("no N=3 ellipse member")
    items = []
    for m in members:
        f1, f2, _ = outer_conic_closed_form(m.cfg)
        g = conic_foci(_outer_fit(ctx, m.cfg))
        for k in (175, 176):
            res = locus(m.cfg, k, ctx.samples, ctx.tol)
            if res.kind != LocusKind.STATIONARY:
                items.append((math.inf, f"{m.name}:X{k}"))
                continue
            p = Point(*res.params["point"])
            scale = max(1.0, abs(p.x))
            items.append((min(dist(p, f1), dist(p, f2)) / scale, f"{m.name}:X{k}:closed"))
            items.append((min(dist(p, g[0]), dist(p, g[1])) / scale, f"{m.name}:X{k}:fit"))
        ch = chain_at(m.cfg, 0.37)
        tri = Triangle.from_points(ch.centers)
        for k in (175, 176):
            kimberling(tri, k, cross_check=True)
    res, worst = _worst(items)
    return Outcome(res, 1e-8, detail=f"worst {worst}")


def _stationary_x1_x7(ctx):
    items, notes = [], []
    for m in ctx.members(n=3, regimes=ELLIPSE, symmetric=False):
        if not _intouch_acute(ctx, m.cfg):
            notes.append(f"{m.name}: intouch not always acute, skipped")
            continue
        for k in (1, 7):
            pts = np.asarray(sweep_center(m.cfg, k, ctx.samples).valid)
            spread = float(np.max(np.hypot(*(pts - pts.mean(axis=0)).T)))
            items.append((spread / (1 + float(np.max(np.hypot(*pts.T)))), f"{m.name}:X{k}"))
    if not items:
        return _na("no member with an acute intouch triangle throughout")
    res, worst = _worst(items)
    return Outcome(res, 1e-9, detail=f"worst {worst}; " + "; ".join(notes))


def _intouch_centers(ctx):
    items = []
    for m in ctx.members(n=3, regimes=(Regime.ELLIPSE, Regime.PARABOLA)):
        for ch in _chains(ctx, m.cfg):
            tri = Triangle.from_points(ch.centers)
            touch = intouch_triangle(tri)
            if not is_acute(touch):
                continue
            scale = ch.caustic.radius
            items.append((dist(kimberling(touch, 3), kimberling(tri, 1)) / scale, m.name + ":X3"))
            items.append((dist(kimberling(touch, 6), kimberling(tri, 7)) / scale, m.name + ":X6"))
    if not items:
        return _na("no acute intouch triangle")
    res, worst = _worst(items)
    return Outcome(res, 1e-9, detail=f"worst {worst}")


def _harmonic_symmedian(ctx):
    items = []
    for m in ctx.members(n=3, regimes=(Regime.ELLIPSE, Regime.PARABOLA)):
        for ch in _chains(ctx, m.cfg):
            h = Triangle.from_points(ch.contacts)
            k = kimberling(h, 6)
            sides = Polygon(h.vertices).side_lines()
            lengths = [dist(p, q) for p, q in Polygon(h.vertices).edges()]
            ratios = np.array([abs(ln.signed_distance(k)) / L for ln, L in zip(sides, lengths)])
            items.append((float(np.ptp(ratios) / ratios.mean()), m.name))
    if not items:
        return _na("no N=3 member")
    res, worst = _worst(items)
    return Outcome(res, 1e-10, detail=f"worst member {worst}")


def _symmetric_reductions(ctx):
    members = ctx.members(symmetric=True)
    if not members:
        return _na("no x0 = 0 member")
    items = []
    for m in members:
        cfg = m.cfg
        R, lam, a = cfg.r, cfg.lam, cfg.alpha
        c = caustic_closed_form(cfg)
        r0 = lam * lam / (R * math.cos(a))
        items.append((max(abs(c.center.x), abs(c.radius - r0) / r0), m.name + ":caustic"))
        f1, f2, _ = outer_conic_closed_form(cfg)
        items.append((max(abs(f1.x), abs(f2.x)), m.name + ":foci"))
        b = brocard_closed_form(cfg)
        items.append((max(abs(b.center.x), abs(b.a - lam * lam / R), abs(b.b - lam * lam / R)) * R / (lam * lam),
                      m.name + ":brocard"))
        if cfg.n == 3:
            items.append((abs(x20_segment_closed_form(cfg)[2]), m.name + ":L20"))
        ch = chain_at(cfg, 0.3)
        items.append((float(np.ptp(ch.radii) / np.mean(ch.radii)), m.name + ":regular"))
    res, worst = _worst(items)
    return Outcome(res, 1e-12, detail=f"worst {worst}")


CLAIMS: Dict[str, Claim] = {c.id: c for c in (
    Claim("brocard_aspect_ratio", "N=3 parabola regime: Brocard inellipse aspect ratio sqrt(5)/2",
          _brocard_aspect, closed_form=True),
    Claim("brocard_closed_form", "closed form of the Brocard inellipse (caustic of the pedal family)",
          _brocard, closed_form=True),
    Claim("caustic_closed_form", "closed form of the caustic center and radius", _caustic_closed_form,
          closed_form=True),
    Claim("caustic_concyclic", "contact points of consecutive chain circles are concyclic",
          _caustic_concyclic),
    Claim("centroid_loci", "vertex, perimeter and area centroid loci are axis-aligned conics",
          _centroid_loci),
    Claim("centroid_ratio", "I, C2, C1 collinear with C1 - I = 3/2 (C2 - I)", _centroid_ratio),
    Claim("chain_tangency", "chain circles tangent to neighbours and to both Soddy images",
          _chain_tangency),
    Claim("curvature_power_sums", "power sums of chain curvatures are invariant",
          _curvature_power_sums),
    Claim("descartes", "1/rho equals the mean of the Soddy curvatures", _descartes),
    Claim("eversion", "hyperbola regime: split-branch state iff I lies outside the pedal polygon",
          _eversion),
    Claim("half_tangent_conservation", "power sums of signed half-angle tangents are conserved",
          _half_tangent_conservation),
    Claim("half_tangent_radius", "tan(theta_i / 2) = r / r_i at every vertex", _half_tangent_radius),
    Claim("half_tangent_sign_rule_literal",
          "sign flip on the two angles whose neighbours lie on different branches",
          _sign_rule_literal, closed_form=True),
    Claim("harmonic_symmedian", "symmedian of the harmonic triangle: side distances proportional "
          "to side lengths", _harmonic_symmedian),
    Claim("homothetic_polar_image", "polar image of the homothetic family about a focus is "
          "conic-inscribed and circle-circumscribed", _homothetic_polar),
    Claim("intouch_centers", "acute intouch triangle: its X3 is X1 and its X6 is X7 of the reference",
          _intouch_centers),
    Claim("locus_classification", "locus types of the triangle-center tour", _locus_table),
    Claim("locus_x15_circle", "closed form of the X15 circle", _x15, closed_form=True),
    Claim("locus_x20_segment", "closed form of the X20 segment endpoints and length", _x20,
          closed_form=True),
    Claim("locus_x2_conic", "implicit equation of the X2 locus", _locus_conic(2), closed_form=True),
    Claim("locus_x3_conic", "implicit equation of the X3 locus", _locus_conic(3), closed_form=True),
    Claim("locus_x4_conic", "implicit equation of the X4 locus", _locus_conic(4), closed_form=True),
    Claim("locus_x6_conic", "implicit equation of the X6 locus (missing operator read as minus)",
          _locus_conic(6), closed_form=True),
    Claim("locus_x6_plus_reading", "implicit equation of the X6 locus (missing operator read as plus)",
          _locus_conic(6, sign=1), closed_form=True),
    Claim("outer_conic_foci", "closed form of the outer conic foci; foci are the Soddy centers",
          _outer_foci, closed_form=True),
    Claim("outer_conic_vertex", "closed form of the outer conic vertex", _outer_vertex,
          closed_form=True),
    Claim("parabola_outer_curvature", "parabola regime: one Soddy curvature vanishes and tau = 2",
          _parabola_outer_curvature),
    Claim("parabola_soddy_line", "parabola regime: degenerate Soddy image parallel to the directrix",
          _parabola_soddy_line),
    Claim("pedal_cot_identity", "sum tan^k(A/2) equals sum cot^k of the intouch angles, k = 1, 2",
          _pedal_cot),
    Claim("pedal_polygon", "contact polygon is the pedal polygon of the center polygon from I",
          _pedal_polygon),
    Claim("poncelet_closure", "vertices on one conic and sides tangent to one circle",
          _poncelet_closure),
    Claim("regime_classification", "conic type set by the inversion center vs the Soddy circles",
          _regime_classification),
    Claim("soddy_centers_x175_x176", "X175 and X176 are stationary at the outer conic foci",
          _soddy_centers),
    Claim("stationary_x1_x7", "X1 and X7 are stationary while the intouch triangle is acute",
          _stationary_x1_x7),
    Claim("symmetric_reductions", "x0 = 0 reductions of the closed forms", _symmetric_reductions),
    Claim("tau_parabola_two", "N=3 parabola regime: tau = 2", _tau_parabola),
    Claim("tau_trichotomy", "N=3: tau below, at or above 2 for ellipse, parabola, hyperbola",
          _tau_trichotomy),
    Claim("x105_circle_axis", "X105 locus is a circle centred on the major axis", _x105_axis),
    Claim("x105_tangency", "X105 circle touches the outer ellipse at two points", _x105_tangency),
    Claim("x4_parabola_law", "unit parabola: X4 ordinate r^2 + 2r - 1 for every Poncelet triangle",
          _x4_parabola_law),
    Claim("x4_parabola_steiner_soddy", "Steiner-Soddy parabola: X4 on the line y = -7c/4",
          _x4_parabola_steiner_soddy),
)}


def _status(claim: Claim, out: Outcome) -> str:
    if not out.applicable:
        return NOT_APPLICABLE
    if math.isfinite(out.residual) and out.residual <= out.tolerance:
        return PASS
    if claim.closed_form and out.cross_check:
        return SUSPECTED_TYPO
    return FAIL


def run_claim(claim: Claim, ctx: Context) -> Record:
    try:
        out = claim.check(ctx)
    except (GeometryError, ValueError, ArithmeticError) as exc:
        out = Outcome(math.inf, 0.0, cross_check=False, detail=f"error: {exc}")
    residual = float(out.residual) if math.isfinite(out.residual) else None
    return Record(claim.id, claim.anchor, residual, float(out.tolerance), _status(claim, out), out.detail)


def verify_all(suite: Sequence = DEFAULT_SUITE, samples: int = 180, only=None,
               tol: Tolerances = DEFAULT) -> VerificationReport:
    """Run the registered claims (or the subset ``only``) in claim-id order."""
    members = [m if isinstance(m, SuiteMember) else SuiteMember(f"cfg{i}", m) for i, m in enumerate(suite)]
    ids = sorted(CLAIMS) if only is None else sorted(set(only))
    unknown = [i for i in ids if i not in CLAIMS]
    if unknown:
        raise KeyError(f"unknown claim ids: {', '.join(unknown)}")
    ctx = Context(members, samples, tol)
    return VerificationReport(tuple(run_claim(CLAIMS[i], ctx) for i in ids), len(CLAIMS))


def load_suite(path) -> List[SuiteMember]:
    """Read a suite from JSON: a list of configs or ``{"configs": [...]}``.

    Each config has keys ``n, r, x0, lambda`` and an optional ``name``.
    """
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("configs")
    if not isinstance(data, list) or not data:
        raise ValueError("suite must be a non-empty list of configs")
    out = []
    for i, item in enumerate(data):
        if not isinstance(item, dict):
            raise ValueError(f"suite entry {i} is not an object")
        try:
            cfg = PorismConfig(item["n"], item["r"], item["x0"], item["lambda"])
        except KeyError as exc:
            raise ValueError(f"suite entry {i} lacks key {exc}") from exc
        except TypeError as exc:
            raise ValueError(f"suite entry {i}: {exc}") from exc
        out.append(SuiteMember(str(item.get("name", f"cfg{i}")), cfg))
    return out
