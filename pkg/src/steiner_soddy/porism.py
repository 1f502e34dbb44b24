"""The Poncelet family of centre polygons and its companions.

``polygon_at`` is the polygon of chain-circle centres, ``pedal_polygon_at``
the polygon of contact points (the pedal of the former with respect to the
caustic centre). Also here: hyperbola branch states, centroids, and the
homothetic triangle family with its polar images.
"""

import enum
import math

import numpy as np

from .chain import (PorismConfig, Regime, SteinerChain, chain_at, classify_regime,
                    regular_preimage)
from .geom import (Circle, Conic, GeometryError, Line, Point, Polygon, conic_from_points,
                   conic_from_tangent_lines, dist,
                   invert_gcircle, point_in_polygon, polar_line, pole_point)


class BranchState(str, enum.Enum):
    SINGLE = "SingleBranch"
    SPLIT = "SplitBranch"
    NOT_HYPERBOLA = "NotHyperbola"


class NotHyperbola(GeometryError):
    pass


class DegeneratePolar(GeometryError):
    pass


class ZeroPerimeter(GeometryError):
    pass


class ZeroArea(GeometryError):
    pass


def polygon_at(cfg: PorismConfig, t: float, chain: SteinerChain = None) -> Polygon:
    chain = chain or chain_at(cfg, t)
    return Polygon(chain.centers)


def pedal_polygon(poly: Polygon, p) -> Polygon:
    """Feet of the perpendiculars from ``p`` to the side lines of ``poly``."""
    return Polygon(tuple(line.foot(p) for line in poly.side_lines()))


def pedal_polygon_at(cfg: PorismConfig, t: float, chain: SteinerChain = None,
                     rel_tol=1e-8) -> Polygon:
    """Contact-point polygon, checked against the pedal construction.

    Vertex ``k`` is the tangency of circles ``k`` and ``k+1``; it must equal
    the foot of the perpendicular from the caustic centre to side ``k``.
    """
    chain = chain or chain_at(cfg, t)
    contacts = Polygon(chain.contacts)
    feet = pedal_polygon(Polygon(chain.centers), chain.caustic.center)
    scale = chain.caustic.radius
    worst = max(dist(p, q) for p, q in zip(contacts, feet))
    if worst > rel_tol * scale:
        raise GeometryError(f"contact polygon differs from pedal polygon by {worst:.3g}")
    return contacts


def branch_labels(chain: SteinerChain):
    """+1/-1 per vertex: side of the hyperbola's conjugate axis.

    The foci of the outer conic are the centres of the two Soddy images, so
    the transverse axis is the x-axis and the centre is their midpoint.
    """
    cx = 0.5 * (chain.soddy_inner.center.x + chain.soddy_outer.center.x)
    return [1 if p.x > cx else -1 for p in chain.centers]


def distal_vertices(chain: SteinerChain):
    """Indices of the vertices on the minority branch (empty when all agree)."""
    labels = branch_labels(chain)
    plus = [i for i, s in enumerate(labels) if s > 0]
    minus = [i for i, s in enumerate(labels) if s < 0]
    if not plus or not minus:
        return []
    return plus if len(plus) < len(minus) else minus


def branch_state(cfg: PorismConfig, t: float, chain: SteinerChain = None) -> BranchState:
    if classify_regime(cfg) != Regime.HYPERBOLA:
        return BranchState.NOT_HYPERBOLA
    chain = chain or chain_at(cfg, t)
    return BranchState.SPLIT if len(distal_vertices(chain)) == 1 else BranchState.SINGLE


def centroids(poly: Polygon):
    """Vertex, perimeter and area centroids ``(C0, C1, C2)``."""
    v = poly.as_array()
    w = np.roll(v, -1, axis=0)
    c0 = v.mean(axis=0)
    lengths = np.hypot(*(w - v).T)
    perimeter = lengths.sum()
    if perimeter <= 0:
        raise ZeroPerimeter("polygon has zero perimeter")
    c1 = (lengths[:, None] * 0.5 * (v + w)).sum(axis=0) / perimeter
    cross = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
    area = 0.5 * cross.sum()
    if abs(area) <= 1e-300:
        raise ZeroArea("polygon has zero signed area")
    c2 = ((v + w) * cross[:, None]).sum(axis=0) / (6.0 * area)
    return Point(*c0), Point(*c1), Point(*c2)


# -- homothetic family ---------------------------------------------------------

def homothetic_triangle(a: float, b: float, t: float) -> Polygon:
    """Triangle inscribed in ellipse (a, b) at eccentric angles t + 2 pi k / 3.

    Its sides touch the concentric ellipse (a/2, b/2).
    """
    if not (a >= b > 0):
        raise GeometryError("need a >= b > 0")
    return Polygon(tuple(Point(a * math.cos(t + 2 * math.pi * k / 3),
                               b * math.sin(t + 2 * math.pi * k / 3)) for k in range(3)))


def ellipse_tangency_residual(line: Line, a: float, b: float):
    """Zero when the line touches the axis-aligned ellipse (a, b) at the origin.

    Support function: ``a^2 n_x^2 + b^2 n_y^2 = c^2`` for unit normal n.
    """
    return math.sqrt(a * a * line.a ** 2 + b * b * line.b ** 2) - abs(line.c)


def polar_image_polygon(poly: Polygon, inv: Circle, rel_tol=1e-9) -> Polygon:
    """Polygon whose sides are the polars of ``poly``'s vertices.

    Vertex ``k`` is the pole of side ``(P_k, P_k+1)``; it is cross-checked
    against the intersection of the polars of ``P_k`` and ``P_k+1``.
    """
    polars = [polar_line(p, inv) for p in poly]
    verts = []
    n = len(poly)
    for k, side in enumerate(poly.side_lines()):
        pole = pole_point(side, inv)
        l1, l2 = polars[k], polars[(k + 1) % n]
        if abs(l1.a * l2.b - l1.b * l2.a) < 1e-12:
            raise DegeneratePolar(f"polars of vertices {k} and {k + 1} are parallel")
        meet = l1.intersect(l2)
        scale = max(1.0, math.hypot(*pole))
        if dist(pole, meet) > rel_tol * scale:
            raise DegeneratePolar(f"pole and polar intersection disagree at side {k}")
        verts.append(pole)
    return Polygon(tuple(verts))


def homothetic_focus(a: float, b: float, which: str = "outer"):
    """Right-hand focus of the outer ellipse (a, b) or the inner one (a/2, b/2)."""
    c = math.sqrt(a * a - b * b)
    return Point(c if which == "outer" else c / 2, 0.0)


def caustic_scale(cfg: PorismConfig) -> float:
    """``|I| + r`` for the caustic, a natural length for clipping windows."""
    pre = regular_preimage(cfg)
    c = invert_gcircle(pre.incircle, cfg.inversion_circle)
    if isinstance(c, Line):
        raise GeometryError("caustic is a line")
    return math.hypot(*c.center) + c.radius


def swept_vertices(cfg: PorismConfig, samples: int = 90, offset: float = 1e-3, clip=50.0):
    """Polygon vertices collected over a phase sweep.

    Degenerate phases are skipped. Outside the ellipse regime, vertices farther
    than ``clip`` caustic scales from the origin are dropped (``clip=None``
    keeps everything).
    """
    pts = []
    for t in cfg.phases(samples, offset):
        try:
            pts.extend(chain_at(cfg, t).centers)
        except GeometryError:
            continue
    if clip is not None and classify_regime(cfg) != Regime.ELLIPSE:
        bound = clip * caustic_scale(cfg)
        pts = [p for p in pts if math.hypot(*p) <= bound]
    return pts


def fit_outer_conic(cfg: PorismConfig, samples: int = 90, clip=50.0) -> Conic:
    """Conic through the swept vertices (numeric counterpart of the closed forms)."""
    return conic_from_points(swept_vertices(cfg, samples, clip=clip))


def eversion_sweep(cfg: PorismConfig, samples: int = 3600, offset: float = 1e-3):
    """Per phase: ``(t, branch_state, I inside the pedal polygon)``.

    Phases where the chain degenerates are skipped.
    """
    if classify_regime(cfg) != Regime.HYPERBOLA:
        raise NotHyperbola("eversion is a hyperbola-regime phenomenon")
    rows = []
    for t in cfg.phases(samples, offset):
        try:
            chain = chain_at(cfg, t)
        except GeometryError:
            continue
        state = branch_state(cfg, t, chain)
        inside = point_in_polygon(chain.caustic.center, Polygon(chain.contacts))
        rows.append((t, state, inside))
    return rows


def polar_image_family(a: float, b: float, samples: int = 120, which: str = "outer",
                       radius: float = 1.0, offset: float = 1e-3):
    """Polar images of the homothetic triangles about a circle centred at a focus.

    One period of the homothetic family is ``2 pi / 3`` in the eccentric angle.
    """
    inv = Circle(homothetic_focus(a, b, which), radius)
    ts = offset + 2 * math.pi / 3 * np.arange(samples) / samples
    return [polar_image_polygon(homothetic_triangle(a, b, float(t)), inv) for t in ts]


def polar_family_fits(polys):
    """Conic through the image vertices and envelope of the image sides.

    Returns ``(vertex_conic, side_envelope)``; for the Steiner-Soddy-like
    image the envelope is a circle.
    """
    verts = [p for poly in polys for p in poly]
    lines = [ln for poly in polys for ln in poly.side_lines()]
    return conic_from_points(verts), conic_from_tangent_lines(lines)
