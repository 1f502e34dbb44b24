"""Loci of triangle centers over the three-circle porism.

A sweep evaluates one center at uniformly spaced phases; ``classify_locus``
runs the cascade stationary -> segment -> circle -> conic -> other on the
normalized point cloud, taking the first kind whose residual clears its bar.
"""

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from scipy.optimize import minimize_scalar

from .centers import Triangle, UnsupportedCenter, kimberling
from .chain import FormulaSingular, PorismConfig, chain_at, classify_regime
from .geom import (Circle, GeometryError, Line, Point, RankDeficient, Polygon,
                   conic_axes, conic_from_points, fit_circle, fit_line)
from .porism import centroids
from .tolerances import DEFAULT


class TooFewPoints(ValueError):
    pass


class InvalidConfiguration(GeometryError):
    pass


class LocusKind(str, enum.Enum):
    STATIONARY = "Stationary"
    SEGMENT = "Segment"
    CIRCLE = "Circle"
    CONIC = "Conic"
    OTHER = "Other"


@dataclass(frozen=True)
class LocusResult:
    kind: LocusKind
    params: dict
    fit_residual: float
    samples: int
    gaps: int = 0
    gap_flag: bool = False

    def as_dict(self):
        out = {"kind": self.kind.value, "fit_residual": self.fit_residual,
               "samples": self.samples, "gaps": self.gaps, "gap_flag": self.gap_flag}
        out["params"] = {k: (list(v) if isinstance(v, (tuple, list)) else v) for k, v in self.params.items()}
        return out


@dataclass(frozen=True)
class Sweep:
    """Points of a swept locus; ``None`` marks phases where the point is undefined."""

    phases: Tuple[float, ...]
    points: Tuple[Optional[Point], ...]

    @property
    def valid(self):
        return [p for p in self.points if p is not None]

    @property
    def gaps(self):
        return sum(p is None for p in self.points)


CENTROID_IDS = {"C0": 0, "C1": 1, "C2": 2}


def locus_point(cfg: PorismConfig, t: float, center):
    chain = chain_at(cfg, t)
    if isinstance(center, str):
        return centroids(Polygon(chain.centers))[CENTROID_IDS[center]]
    tri = Triangle.from_points(chain.centers)
    return kimberling(tri, int(center))


def sweep_center(cfg: PorismConfig, center, samples: int = 360, offset: float = 1e-3) -> Sweep:
    """Evaluate X_k (or a centroid "C0"/"C1"/"C2") over one period.

    Phases where the chain degenerates or the center is undefined become gaps.
    """
    if samples < 16:
        raise TooFewPoints("need at least 16 samples")
    if not isinstance(center, str) and cfg.n != 3:
        raise ValueError("triangle centers need n = 3")
    phases = tuple(cfg.phases(samples, offset))
    pts = []
    for t in phases:
        try:
            p = locus_point(cfg, t, center)
            pts.append(p if math.isfinite(p.x) and math.isfinite(p.y) else None)
        except (GeometryError, ZeroDivisionError, ValueError):
            pts.append(None)
    return Sweep(phases, tuple(pts))


def classify_locus(pts, tol=DEFAULT, gaps: int = 0) -> LocusResult:
    """Classify a planar point cloud.

    Residuals are RMS values in the normalized frame (zero mean, unit RMS
    radius) except for the stationary test, which compares the diameter of the
    cloud with its distance from the origin plus one.
    """
    pts = np.asarray([p for p in pts if p is not None], dtype=float)
    total = len(pts) + gaps
    if total and gaps > total / 2:
        return LocusResult(LocusKind.OTHER, {}, math.inf, len(pts), gaps, True)
    if len(pts) < 16:
        raise TooFewPoints(f"need at least 16 valid points, got {len(pts)}")

    mean = pts.mean(axis=0)
    spread = float(np.max(np.hypot(*(pts - mean).T)))
    scale = 1.0 + float(np.max(np.hypot(*pts.T)))
    if spread / scale < tol.stationary:
        return LocusResult(LocusKind.STATIONARY, {"point": (float(mean[0]), float(mean[1]))},
                           spread / scale, len(pts), gaps)

    line, line_res = fit_line(pts)
    if line_res < tol.segment:
        d = np.array([line.direction.x, line.direction.y])
        proj = pts @ d
        i, j = int(np.argmin(proj)), int(np.argmax(proj))
        p0, p1 = line.foot(pts[i]), line.foot(pts[j])
        return LocusResult(LocusKind.SEGMENT,
                           {"endpoints": ((p0.x, p0.y), (p1.x, p1.y)),
                            "line": (line.a, line.b, line.c),
                            "length": float(proj[j] - proj[i])},
                           line_res, len(pts), gaps)

    try:
        circle, circ_res = fit_circle(pts)
    except GeometryError:
        circle, circ_res = None, math.inf
    if circ_res < tol.circle:
        return LocusResult(LocusKind.CIRCLE,
                           {"center": (circle.center.x, circle.center.y), "radius": circle.radius},
                           circ_res, len(pts), gaps)

    try:
        conic = conic_from_points(pts)
    except (RankDeficient, GeometryError):
        conic = None
    if conic is not None and conic.residual < tol.conic:
        return LocusResult(LocusKind.CONIC, {"coef": conic.coef, "conic_kind": conic.kind.value},
                           conic.residual, len(pts), gaps)
    res = conic.residual if conic is not None else math.inf
    return LocusResult(LocusKind.OTHER, {}, res, len(pts), gaps)


def locus(cfg: PorismConfig, center, samples: int = 360, tol=DEFAULT) -> LocusResult:
    sw = sweep_center(cfg, center, samples)
    return classify_locus(sw.valid, tol, gaps=sw.gaps)


# -- parabola families with an axis-centred incircle ------------------------------

def parabola_incircle(c: float, y0: float):
    """Radius of the circle centred at (0, y0) admitting Poncelet triangles in 4cy = x^2."""
    if c <= 0:
        raise InvalidConfiguration("parabola parameter must be positive")
    inner = c ** 3 * (c + y0)
    if inner < 0:
        raise InvalidConfiguration("no closing circle for this center")
    xs = -2 * c * c + y0 * c + 2 * math.sqrt(inner)
    if xs <= 0:
        raise InvalidConfiguration("no closing circle for this center")
    x0 = 2 * math.sqrt(xs)
    r = 4 * y0 * c / math.sqrt(16 * c * c + x0 * x0)
    if r <= 0:
        raise InvalidConfiguration("circle center must lie inside the parabola")
    return r, x0


def x4_parabola_line(c: float, y0: float) -> Line:
    """Horizontal line carrying the orthocenters of the Poncelet family."""
    parabola_incircle(c, y0)
    y = (-6 * c * c + y0 * c + 2 * math.sqrt(c ** 3 * (c + y0))) / c
    return Line.from_coefficients(0.0, 1.0, -y)


def parabola_poncelet_triangle(c: float, y0: float, r: float, u: float):
    """Triangle with vertex (u, u^2/4c) inscribed in 4cy = x^2 and tangent to the circle.

    Built by drawing the two tangents from the first vertex and intersecting
    them with the parabola again; closure of the third side is left to the
    caller to check.
    """
    A = np.array([u, u * u / (4 * c)])
    O = np.array([0.0, y0])
    d = O - A
    L = float(np.hypot(*d))
    if L <= r:
        raise InvalidConfiguration("vertex lies inside the circle")
    half = math.asin(r / L)
    base = math.atan2(d[1], d[0])
    others = []
    for ang in (base + half, base - half):
        dx, dy = math.cos(ang), math.sin(ang)
        # A + s (dx, dy) on x^2 = 4 c y:  (ux + s dx)^2 = 4c (uy + s dy), s != 0
        s = (4 * c * dy - 2 * A[0] * dx) / (dx * dx) if abs(dx) > 1e-15 else math.inf
        if not math.isfinite(s):
            raise InvalidConfiguration("tangent parallel to the axis")
        others.append(A + s * np.array([dx, dy]))
    return Point(*A), Point(*others[0]), Point(*others[1])


# -- printed locus equations ---------------------------------------------------

def _x6_constant(R, x0, l2, sign):
    l4 = l2 * l2
    return (R ** 10 + sign * (8 * l2 + 4 * x0 ** 2) * R ** 8
            + (16 * l4 - 320 * l2 * x0 ** 2 + 544 * x0 ** 4) * R ** 6
            - 64 * x0 ** 2 * (15 * l4 - 48 * l2 * x0 ** 2 + 34 * x0 ** 4) * R ** 4
            + 256 * x0 ** 4 * (l2 - x0 ** 2) * (3 * l2 - x0 ** 2) * R ** 2
            - 1024 * x0 ** 6 * (l2 - x0 ** 2) ** 2)


def locus_conic_closed_form(cfg: PorismConfig, center: int, x6_sign: int = -1):
    """Coefficients ``(A, B, C, D, E, F)`` of the X2, X3, X4 or X6 locus for N = 3.

    The X6 constant term has an operator missing between ``R^10`` and
    ``(8 lambda^2 + 4 x0^2) R^8``; ``x6_sign`` selects the reading (-1 fits
    the sampled loci). The X4 linear term is read with a leading ``+``.
    """
    if cfg.n != 3:
        raise ValueError("locus equations are for N = 3")
    R, x0, l2 = cfg.r, cfg.x0, cfg.lam ** 2
    l4 = l2 * l2
    a = R * R - 4 * x0 * x0
    q = R ** 4 - 56 * R * R * x0 * x0 + 16 * x0 ** 4
    if center == 2:
        return np.array([
            a * q, 0.0, a ** 3,
            -2 * x0 * (R ** 6 - 60 * R ** 4 * x0 ** 2 + 12 * R ** 4 * l2 + 240 * R ** 2 * x0 ** 4
                       - 192 * R ** 2 * x0 ** 2 * l2 - 64 * x0 ** 6 + 64 * x0 ** 4 * l2),
            0.0,
            x0 ** 2 * (R ** 6 - 60 * R ** 4 * x0 ** 2 + 24 * R ** 4 * l2 + 240 * R ** 2 * x0 ** 4
                       - 384 * R ** 2 * x0 ** 2 * l2 + 144 * R ** 2 * l4 - 64 * x0 ** 6
                       + 128 * x0 ** 4 * l2 - 64 * x0 ** 2 * l4)])
    if center == 3:
        return np.array([
            q * a ** 4, 0.0, a ** 2 * (R ** 4 + 40 * R ** 2 * x0 ** 2 + 16 * x0 ** 4) ** 2,
            -2 * x0 * a * (R ** 10 - 68 * R ** 8 * x0 ** 2 + 28 * R ** 8 * l2 + 736 * R ** 6 * x0 ** 4
                           - 928 * R ** 6 * x0 ** 2 * l2 - 2944 * R ** 4 * x0 ** 6
                           - 768 * R ** 4 * x0 ** 4 * l2 + 4352 * R ** 2 * x0 ** 8
                           - 2560 * R ** 2 * x0 ** 6 * l2 - 1024 * x0 ** 10 + 1024 * x0 ** 8 * l2),
            0.0,
            x0 ** 2 * (R ** 12 + (-72 * x0 ** 2 + 56 * l2) * R ** 10
                       + (1008 * x0 ** 4 - 2080 * x0 ** 2 * l2 + 784 * l4) * R ** 8
                       - 256 * x0 ** 2 * (23 * x0 ** 4 - 23 * x0 ** 2 * l2 + 16 * l4) * R ** 6
                       + 256 * x0 ** 4 * (63 * x0 ** 4 + 4 * x0 ** 2 * l2 - 18 * l4) * R ** 4
                       - 2048 * x0 ** 6 * (x0 ** 2 - l2) * (9 * x0 ** 2 - 2 * l2) * R ** 2
                       + 4096 * x0 ** 8 * (x0 ** 2 - l2) ** 2)])
    if center == 4:
        return np.array([
            a ** 4, 0.0, q * a ** 2,
            x0 * (-2 * R ** 8 + 32 * R ** 6 * x0 ** 2 + 40 * R ** 6 * l2 - 192 * R ** 4 * x0 ** 4
                  + 96 * R ** 4 * x0 ** 2 * l2 + 512 * R ** 2 * x0 ** 6 - 1152 * R ** 2 * x0 ** 4 * l2
                  - 512 * x0 ** 8 + 512 * x0 ** 6 * l2),
            0.0,
            x0 ** 2 * (R ** 8 - 16 * R ** 6 * x0 ** 2 - 40 * R ** 6 * l2 + 96 * R ** 4 * x0 ** 4
                       - 96 * R ** 4 * x0 ** 2 * l2 + 400 * R ** 4 * l4 - 256 * R ** 2 * x0 ** 6
                       + 1152 * R ** 2 * x0 ** 4 * l2 - 896 * R ** 2 * x0 ** 2 * l4
                       + 256 * x0 ** 8 - 512 * x0 ** 6 * l2 + 256 * x0 ** 4 * l4)])
    if center == 6:
        p = (R * R + 4 * x0 * x0) ** 2
        return np.array([
            a * (R ** 8 + 544 * R ** 4 * x0 ** 4 + 256 * x0 ** 8) * p, 0.0,
            (R ** 4 + 16 * x0 ** 4) ** 2 * a ** 3,
            -2 * x0 * p * (R ** 10 - 4 * R ** 8 * l2 - 4 * R ** 8 * x0 ** 2 - 160 * R ** 6 * l2 * x0 ** 2
                           + 544 * R ** 6 * x0 ** 4 + 1536 * R ** 4 * l2 * x0 ** 4
                           - 2176 * R ** 4 * x0 ** 6 - 512 * R ** 2 * l2 * x0 ** 6
                           + 256 * R ** 2 * x0 ** 8 + 1024 * l2 * x0 ** 8 - 1024 * x0 ** 10),
            0.0,
            x0 ** 2 * p * _x6_constant(R, x0, l2, x6_sign)])
    raise UnsupportedCenter(f"no printed locus equation for X({center})")


def implicit_residual(coef, pts) -> float:
    """Max of ``|P(x, y)| / (1 + |p|^2)`` with ``P`` scaled to unit max coefficient."""
    coef = np.asarray(coef, dtype=float)
    big = np.abs(coef).max()
    if big == 0:
        raise InvalidConfiguration("all coefficients vanish")
    A, B, C, D, E, F = coef / big
    pts = np.asarray(pts, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    val = A * x * x + B * x * y + C * y * y + D * x + E * y + F
    return float(np.max(np.abs(val) / (1 + x * x + y * y)))


def x15_circle_closed_form(cfg: PorismConfig) -> Circle:
    """Locus of X15 for N = 3 with the inversion center inside the inner Soddy circle."""
    R, x0, l2 = cfg.r, cfg.x0, cfg.lam ** 2
    den = R ** 6 - 24 * R ** 4 * x0 ** 2 + 144 * R ** 2 * x0 ** 4 - 256 * x0 ** 6
    if abs(den) < 1e-12 * R ** 6:
        raise FormulaSingular("X15 circle: denominator vanishes")
    cx = x0 * (-256 * x0 ** 6 + 144 * R ** 2 * x0 ** 4 - 24 * (R ** 4 + 6 * R ** 2 * l2) * x0 ** 2
               + R ** 6 + 12 * R ** 4 * l2) / den
    radius = math.sqrt(36864 * R ** 2 * x0 ** 8 * l2 * l2) / abs(den)
    if radius == 0:
        raise FormulaSingular("X15 circle collapses to a point")
    return Circle(Point(cx, 0.0), radius)


def x20_segment_closed_form(cfg: PorismConfig):
    """``(x_minus, x_plus, length)`` of the X20 segment on the axis, N = 3."""
    R, x0, l2 = cfg.r, cfg.x0, cfg.lam ** 2
    zeta = R ** 6 + (76 * l2 - 28 * x0 ** 2) * R ** 4 + 16 * x0 ** 2 * (12 * l2 + 7 * x0 ** 2) * R ** 2
    den_p = (R * R + 8 * R * x0 + 4 * x0 * x0) * (R - 2 * x0) ** 3 * (R + 2 * x0)
    den_m = (R * R - 8 * R * x0 + 4 * x0 * x0) * (R + 2 * x0) ** 3 * (R - 2 * x0)
    den_l = (R * R - 4 * x0 * x0) ** 3 * (R ** 4 - 56 * R * R * x0 * x0 + 16 * x0 ** 4)
    for den in (den_p, den_m, den_l):
        if abs(den) < 1e-12 * R ** 6:
            raise FormulaSingular("X20 segment: denominator vanishes")
    plus = x0 * (zeta + 4 * x0 * R ** 5 + 304 * R ** 3 * x0 * l2
                 - 64 * x0 ** 3 * (x0 * x0 - l2) * (R + x0)) / den_p
    minus = x0 * (zeta - 4 * x0 * R ** 5 - 304 * R ** 3 * x0 * l2
                  + 64 * x0 ** 3 * (x0 * x0 - l2) * (R - x0)) / den_m
    length = 18432 * x0 ** 4 * R ** 5 * l2 / den_l
    return minus, plus, length


# -- refinements -----------------------------------------------------------------

def refine_axis_extremes(cfg: PorismConfig, center, samples: int = 360):
    """Extreme abscissas of a center's locus, polished with a bounded scalar search.

    The sweep brackets each extremum; the search then runs on the two
    neighbouring phase intervals.
    """
    sw = sweep_center(cfg, center, samples)
    xs = np.array([p.x if p is not None else np.nan for p in sw.points])
    if np.all(np.isnan(xs)):
        raise TooFewPoints("locus has no valid points")
    step = cfg.period / samples

    def fx(t):
        try:
            p = locus_point(cfg, t, center)
        except (GeometryError, ZeroDivisionError, ValueError):
            return math.nan
        return math.nan if p is None else p.x

    out = []
    for sign, idx in ((1.0, int(np.nanargmin(xs))), (-1.0, int(np.nanargmax(xs)))):
        t0 = sw.phases[idx]
        res = minimize_scalar(lambda t: sign * fx(t), bounds=(t0 - step, t0 + step),
                              method="bounded", options={"xatol": 1e-12})
        # keep the sampled value if the search wandered off or hit a degenerate phase
        best = sign * xs[idx]
        out.append(sign * (min(res.fun, best) if math.isfinite(res.fun) else best))
    return out[0], out[1]


def clip_points(pts, center, radius):
    """Points within ``radius`` of ``center``.

    Near a parabola or hyperbola regime a few vertices run off towards the
    conic's points at infinity and ruin the conditioning of a global fit.
    """
    c = np.asarray(center, dtype=float)
    return [p for p in pts if p is not None and float(np.hypot(*(np.asarray(p) - c))) <= radius]


def circle_conic_contacts(circle: Circle, conic, samples: int = 4096, tol: float = 1e-6):
    """Parameters on a central conic where it touches ``circle``.

    Returns a list of ``(theta, gap)`` for local minima of ``| |E(theta) - O| - rho |``
    below ``tol``, each refined by a bounded search. ``theta`` is the eccentric
    angle along the conic's major axis.
    """
    c, a, b, d = conic_axes(conic)
    e1 = np.array([d.x, d.y])
    e2 = np.array([-d.y, d.x])
    o = np.array(circle.center)

    def gap(th):
        p = np.array([c.x, c.y]) + a * math.cos(th) * e1 + b * math.sin(th) * e2
        return abs(float(np.hypot(*(p - o))) - circle.radius)

    grid = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    vals = np.array([gap(t) for t in grid])
    step = grid[1] - grid[0]
    found = []
    for i in range(samples):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[(i + 1) % samples]:
            res = minimize_scalar(gap, bounds=(grid[i] - step, grid[i] + step), method="bounded",
                                  options={"xatol": 1e-13})
            if res.fun < tol:
                found.append((float(res.x % (2 * np.pi)), float(res.fun)))
    return found


def x4_outer_conic_scan(x0_values, r: float = 1.0, lam: float = 1.0, samples: int = 180):
    """Distance between the X4 locus and the outer conic, N = 3, per inversion center.

    Both conics are fitted numerically and compared through their unit
    coefficient vectors (up to sign). Rows are ``(x0, regime, distance)``;
    ``distance`` is ``nan`` where a fit fails. Nothing is asserted.
    """
    from .porism import fit_outer_conic

    rows = []
    for x0 in x0_values:
        cfg = PorismConfig(3, r, x0, lam)
        try:
            outer = fit_outer_conic(cfg, samples=max(60, samples // 2)).coef
            pts = clip_points(sweep_center(cfg, 4, samples).points, (0.0, 0.0),
                              50 * (abs(x0) + r + lam))
            x4 = conic_from_points(pts).coef
        except GeometryError:
            rows.append((float(x0), classify_regime(cfg).value, math.nan))
            continue
        u = np.asarray(outer) / np.linalg.norm(outer)
        w = np.asarray(x4) / np.linalg.norm(x4)
        rows.append((float(x0), classify_regime(cfg).value,
                     float(min(np.linalg.norm(u - w), np.linalg.norm(u + w)))))
    return rows
