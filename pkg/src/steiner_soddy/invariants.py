"""Conserved quantities of the Steiner-Soddy family.

Interior angles are measured from vertex positions only, so comparing them
with chain radii is a real check and not an identity.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .chain import (PorismConfig, Regime, SteinerChain, chain_at, chain_batch, classify_regime,
                    regular_preimage)
from .geom import GeometryError, Point, Polygon, invert_gcircle
from .porism import branch_labels, centroids, distal_vertices
from .tolerances import DEFAULT


class RatioUndefined(GeometryError):
    pass


@dataclass(frozen=True)
class InvariantReport:
    name: str
    k: int
    samples: int
    mean: float
    max_abs_deviation: float
    relative_deviation: float
    passed: bool

    @classmethod
    def from_values(cls, name, values, tol, k=0, floor=DEFAULT.relative_floor):
        values = np.asarray(values, dtype=float)
        mean = float(values.mean())
        dev = float(np.max(np.abs(values - mean)))
        rel = dev / max(abs(mean), floor)
        return cls(name, k, len(values), mean, dev, rel, rel < tol)

    def as_dict(self):
        return asdict(self)


def interior_angles(poly: Polygon):
    """Unsigned angle at each vertex between its two incident edges, in [0, pi]."""
    v = poly.as_array()
    prev = np.roll(v, 1, axis=0) - v
    nxt = np.roll(v, -1, axis=0) - v
    cross = np.abs(prev[:, 0] * nxt[:, 1] - prev[:, 1] * nxt[:, 0])
    dot = np.sum(prev * nxt, axis=1)
    return np.arctan2(cross, dot)


def caustic_wedge_angles(poly: Polygon, incenter):
    """Angle at each vertex of the wedge between its side lines that holds ``incenter``.

    For a convex tangential polygon this is the interior angle. When the
    polygon crosses itself (split hyperbola state) the wedge facing the
    caustic can be the supplement of the interior angle.
    """
    v = poly.as_array()
    prev = np.roll(v, 1, axis=0) - v
    nxt = np.roll(v, -1, axis=0) - v
    u = prev / np.linalg.norm(prev, axis=1)[:, None]
    w = nxt / np.linalg.norm(nxt, axis=1)[:, None]
    theta = np.arctan2(np.abs(u[:, 0] * w[:, 1] - u[:, 1] * w[:, 0]), np.sum(u * w, axis=1))
    d = np.asarray(incenter, dtype=float)[None, :] - v
    d = d / np.linalg.norm(d, axis=1)[:, None]
    inner, outer = u + w, u - w
    off_inner = np.abs(d[:, 0] * inner[:, 1] - d[:, 1] * inner[:, 0]) / np.linalg.norm(inner, axis=1)
    off_outer = np.abs(d[:, 0] * outer[:, 1] - d[:, 1] * outer[:, 0]) / np.linalg.norm(outer, axis=1)
    return np.where(off_inner <= off_outer, theta, np.pi - theta)


def half_tangent_signs(chain: SteinerChain, regime: Regime, rule="distal"):
    """Per-vertex sign applied to tan(theta_i / 2) on a hyperbola.

    ``"distal"`` flips the lone vertex on the far branch, which is what keeps
    the sums constant. ``"neighbors"`` flips the vertices whose two neighbours
    sit on different branches; it is kept for comparison only and does not
    conserve anything.
    """
    n = len(chain.circles)
    signs = [1] * n
    if regime != Regime.HYPERBOLA:
        return signs
    far = distal_vertices(chain)
    if len(far) != 1:
        return signs
    if rule == "distal":
        signs[far[0]] = -1
    elif rule == "neighbors":
        labels = branch_labels(chain)
        for i in range(n):
            if labels[i - 1] != labels[(i + 1) % n]:
                signs[i] = -1
    else:
        raise ValueError(f"unknown sign rule {rule!r}")
    return signs


def half_tangents(cfg: PorismConfig, t: float, chain: SteinerChain = None, rule="distal"):
    """Signed ``tan(theta_i / 2)``, with ``theta_i`` the caustic-facing vertex angle."""
    chain = chain or chain_at(cfg, t)
    th = caustic_wedge_angles(Polygon(chain.centers), chain.caustic.center)
    signs = half_tangent_signs(chain, classify_regime(cfg), rule)
    return np.asarray(signs) * np.tan(th / 2)


def half_tangent_sum(cfg: PorismConfig, t: float, k: int = 1, chain: SteinerChain = None,
                     rule="distal") -> float:
    """Sum over vertices of ``(s_i tan(theta_i / 2)) ** k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return float(np.sum(half_tangents(cfg, t, chain, rule) ** k))


def _wedge_angles_batch(v, incenter):
    # v: (T, N, 2); same construction as caustic_wedge_angles, over all phases
    prev = np.roll(v, 1, axis=1) - v
    nxt = np.roll(v, -1, axis=1) - v
    u = prev / np.linalg.norm(prev, axis=2)[..., None]
    w = nxt / np.linalg.norm(nxt, axis=2)[..., None]
    cross = np.abs(u[..., 0] * w[..., 1] - u[..., 1] * w[..., 0])
    theta = np.arctan2(cross, np.sum(u * w, axis=2))
    d = np.asarray(incenter, dtype=float) - v
    d = d / np.linalg.norm(d, axis=2)[..., None]

    def off(axis):
        return np.abs(d[..., 0] * axis[..., 1] - d[..., 1] * axis[..., 0]) / np.linalg.norm(axis, axis=2)

    return np.where(off(u + w) <= off(u - w), theta, np.pi - theta)


def half_tangent_table(cfg: PorismConfig, phases):
    """Signed ``tan(theta_i / 2)`` for every phase, shape ``(T, N)``.

    Batch version of :func:`half_tangents` with the distal sign rule.
    """
    batch = chain_batch(cfg, phases)
    pre = regular_preimage(cfg)
    caustic = invert_gcircle(pre.incircle, cfg.inversion_circle)
    th = _wedge_angles_batch(batch.centers, caustic.center)
    tans = np.tan(th / 2)
    if classify_regime(cfg) == Regime.HYPERBOLA:
        s_in = invert_gcircle(pre.soddy_inner, cfg.inversion_circle)
        s_out = invert_gcircle(pre.soddy_outer, cfg.inversion_circle)
        cx = 0.5 * (s_in.center.x + s_out.center.x)
        plus = batch.centers[..., 0] > cx
        n_plus = plus.sum(axis=1, keepdims=True)
        n = cfg.n
        lone_plus = (n_plus == 1) & plus
        lone_minus = (n_plus == n - 1) & ~plus
        # a lone vertex is distal only when the other branch holds the majority
        distal = lone_plus | lone_minus
        tans = np.where(distal, -tans, tans)
    return tans


def half_tangent_report(cfg: PorismConfig, k: int, samples: int = 360, tol=1e-8,
                        offset=1e-3) -> InvariantReport:
    """Constancy of ``sum (s_i tan(theta_i/2))^k`` over a uniform phase sweep."""
    if not 1 <= k <= cfg.n - 1:
        raise ValueError("k must lie in 1..N-1")
    table = half_tangent_table(cfg, cfg.phases(samples, offset))
    return InvariantReport.from_values("half_tangent_sum", np.sum(table ** k, axis=1), tol, k=k)


def radius_half_tangents(chain: SteinerChain):
    """``r * kappa_i``: caustic radius times signed chain curvature."""
    return chain.caustic.radius * np.asarray(chain.curvatures)


def curvature_power_sums(chain: SteinerChain, k: int) -> float:
    return float(np.sum(np.asarray(chain.curvatures) ** k))


def descartes_check(chain: SteinerChain) -> float:
    """``|1/rho - (k4 + k5) / 2|`` with signed Soddy curvatures (0 for a line)."""
    if len(chain.circles) != 3:
        raise ValueError("Descartes check needs a three-circle chain")
    inv_rho = sum(chain.curvatures)
    k4, k5 = chain.soddy_curvatures
    return abs(inv_rho - 0.5 * (k4 + k5))


def pedal_cot_sums(tri, pedal, k: int = 1, signs=None, incenter=None):
    """``(sum tan^k(A/2), sum cot^k(A'))`` for a triangle and its intouch triangle.

    ``pedal[i]`` must lie on the side opposite ``tri[i]``. Half-angles of
    ``tri`` are caustic-facing when ``incenter`` is given and carry ``signs``
    (the hyperbola sign rule); angles of ``pedal`` are plain interior angles,
    so an obtuse one contributes a negative cotangent.
    """
    tri = tri if isinstance(tri, Polygon) else Polygon(tuple(tri))
    pedal = pedal if isinstance(pedal, Polygon) else Polygon(tuple(pedal))
    if len(tri) != 3 or len(pedal) != 3:
        raise ValueError("pedal cotangent sums need triangles")
    th = caustic_wedge_angles(tri, incenter) if incenter is not None else interior_angles(tri)
    half = np.tan(th / 2)
    if signs is not None:
        half = half * np.asarray(signs)
    cot = 1.0 / np.tan(interior_angles(pedal))
    return float(np.sum(half ** k)), float(np.sum(cot ** k))


def chain_pedal_cot_sums(cfg: PorismConfig, t: float, k: int = 1, chain: SteinerChain = None):
    """:func:`pedal_cot_sums` on the N=3 porism triangle and its contact triangle."""
    chain = chain or chain_at(cfg, t)
    contacts = chain.contacts
    # contact k sits on side (k, k+1), i.e. opposite vertex k+2
    pedal = (contacts[1], contacts[2], contacts[0])
    signs = half_tangent_signs(chain, classify_regime(cfg))
    return pedal_cot_sums(chain.centers, pedal, k, signs, chain.caustic.center)


def centroid_ratio_check(poly: Polygon, incenter, tol=DEFAULT.geometry):
    """Collinearity and 3/2-ratio residuals of (I, C2, C1) for a tangential polygon.

    Both residuals are relative to ``|C2 - I|``.
    """
    _, c1, c2 = centroids(poly)
    ix, iy = incenter
    u = np.array([c2.x - ix, c2.y - iy])
    w = np.array([c1.x - ix, c1.y - iy])
    nu = float(np.hypot(*u))
    scale = max(abs(c) for p in poly for c in p) or 1.0
    if nu < tol * scale:
        raise RatioUndefined("area centroid coincides with the incenter")
    collinear = abs(u[0] * w[1] - u[1] * w[0]) / (nu * nu)
    ratio = abs(float(np.hypot(*w)) / nu - 1.5)
    return collinear, ratio


def tangential_polygon(center, radius, tangent_angles):
    """Polygon circumscribing a circle, touching it at the given polar angles."""
    cx, cy = center
    lines = []
    for a in tangent_angles:
        lines.append((math.cos(a), math.sin(a)))
    verts = []
    n = len(lines)
    for i in range(n):
        (a1, b1), (a2, b2) = lines[i - 1], lines[i]
        det = a1 * b2 - a2 * b1
        # both lines satisfy n.(p - c) = radius
        x = (radius * b2 - radius * b1) / det
        y = (a1 * radius - a2 * radius) / det
        verts.append(Point(cx + x, cy + y))
    return Polygon(tuple(verts))


def sweep_invariant(name, fn, phases, tol, k=0):
    values = []
    for t in phases:
        values.append(fn(t))
    return InvariantReport.from_values(name, values, tol, k=k)

