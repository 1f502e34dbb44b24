"""Triangle centers from trilinear coordinates.

Only the centers that show up in the locus tour are tabulated. Each entry is
a function ``f(a, b, c, A, B, C) -> alpha`` for the first trilinear
coordinate; the others follow by cyclic permutation.
"""

import math
from dataclasses import dataclass

import numpy as np

from .geom import Circle, GeometryError, Point, Polygon, dist


class InfinitePoint(GeometryError):
    pass


class CenterUndefined(GeometryError):
    pass


class UnsupportedCenter(ValueError):
    pass


@dataclass(frozen=True)
class Triangle:
    """Counter-clockwise triangle; side ``a`` is opposite vertex ``A``."""

    A: Point
    B: Point
    C: Point

    def __post_init__(self):
        A, B, C = (Point(float(p[0]), float(p[1])) for p in (self.A, self.B, self.C))
        cross = (B.x - A.x) * (C.y - A.y) - (B.y - A.y) * (C.x - A.x)
        if cross < 0:
            B, C = C, B
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        a, b, c = self.sides
        if not (a < b + c and b < c + a and c < a + b) or cross == 0:
            raise GeometryError("degenerate triangle")

    @classmethod
    def from_points(cls, pts):
        pts = list(pts)
        if len(pts) != 3:
            raise GeometryError("a triangle needs three points")
        return cls(*pts)

    @property
    def vertices(self):
        return (self.A, self.B, self.C)

    @property
    def sides(self):
        return dist(self.B, self.C), dist(self.C, self.A), dist(self.A, self.B)

    @property
    def angles(self):
        a, b, c = self.sides
        # law of cosines, clipped against round-off
        def ang(opp, s1, s2):
            return math.acos(max(-1.0, min(1.0, (s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2))))
        return ang(a, b, c), ang(b, c, a), ang(c, a, b)

    def as_polygon(self):
        return Polygon(self.vertices)


def _cyc(f):
    """Turn a first-coordinate function into a full trilinear triple."""
    def full(a, b, c, A, B, C):
        return (f(a, b, c, A, B, C), f(b, c, a, B, C, A), f(c, a, b, C, A, B))
    return full


def _sec(x):
    return 1.0 / math.cos(x)


def _x175(a, b, c, A, B, C):
    return _sec(A / 2) * math.cos(B / 2) * math.cos(C / 2) - 1


def _x176(a, b, c, A, B, C):
    return _sec(A / 2) * math.cos(B / 2) * math.cos(C / 2) + 1


def _x170(a, b, c, A, B, C):
    """X(75)-Ceva conjugate of X(7), as a full trilinear triple."""
    bary = ceva_conjugate((1 / a, 1 / b, 1 / c),
                          (1 / (b + c - a), 1 / (c + a - b), 1 / (a + b - c)))
    return (bary[0] / a, bary[1] / b, bary[2] / c)


TRILINEARS = {
    1: _cyc(lambda a, b, c, A, B, C: 1.0),
    2: _cyc(lambda a, b, c, A, B, C: 1.0 / a),
    3: _cyc(lambda a, b, c, A, B, C: math.cos(A)),
    4: _cyc(lambda a, b, c, A, B, C: _sec(A)),
    5: _cyc(lambda a, b, c, A, B, C: math.cos(B - C)),
    6: _cyc(lambda a, b, c, A, B, C: a),
    7: _cyc(lambda a, b, c, A, B, C: 1.0 / (a * (b + c - a))),
    8: _cyc(lambda a, b, c, A, B, C: (b + c - a) / a),
    9: _cyc(lambda a, b, c, A, B, C: b + c - a),
    10: _cyc(lambda a, b, c, A, B, C: b * c * (b + c)),
    13: _cyc(lambda a, b, c, A, B, C: 1.0 / math.sin(A + math.pi / 3)),
    14: _cyc(lambda a, b, c, A, B, C: 1.0 / math.sin(A - math.pi / 3)),
    15: _cyc(lambda a, b, c, A, B, C: math.sin(A + math.pi / 3)),
    16: _cyc(lambda a, b, c, A, B, C: math.sin(A - math.pi / 3)),
    20: _cyc(lambda a, b, c, A, B, C: math.cos(A) - math.cos(B) * math.cos(C)),
    65: _cyc(lambda a, b, c, A, B, C: math.cos(B) + math.cos(C)),
    77: _cyc(lambda a, b, c, A, B, C: 1.0 / (1.0 + _sec(A))),
    80: _cyc(lambda a, b, c, A, B, C: 1.0 / (1.0 - 2.0 * math.cos(A))),
    105: _cyc(lambda a, b, c, A, B, C: 1.0 / (b * b + c * c - a * b - a * c)),
    170: _x170,
    175: _cyc(_x175),
    176: _cyc(_x176),
}

SUPPORTED = tuple(sorted(TRILINEARS))


def ceva_conjugate(p, u):
    """Barycentric P-Ceva conjugate of U.

    With ``P = p:q:r`` and ``U = u:v:w`` the first coordinate is
    ``u (-u/p + v/q + w/r)``.
    """
    p1, p2, p3 = p
    u1, u2, u3 = u
    return (u1 * (-u1 / p1 + u2 / p2 + u3 / p3),
            u2 * (u1 / p1 - u2 / p2 + u3 / p3),
            u3 * (u1 / p1 + u2 / p2 - u3 / p3))


def center_from_trilinear(tri: Triangle, f, rel_tol=1e-12) -> Point:
    """Cartesian point with trilinears ``f(a, b, c, A, B, C)``."""
    a, b, c = tri.sides
    A, B, C = tri.angles
    al, be, ga = f(a, b, c, A, B, C)
    return center_from_barycentric(tri, (a * al, b * be, c * ga), rel_tol)


def center_from_barycentric(tri: Triangle, weights, rel_tol=1e-12) -> Point:
    u, v, w = (float(x) for x in weights)
    total = u + v + w
    if not math.isfinite(total) or abs(total) <= rel_tol * (abs(u) + abs(v) + abs(w)):
        raise InfinitePoint("barycentric weights sum to zero")
    A, B, C = tri.vertices
    return Point((u * A.x + v * B.x + w * C.x) / total, (u * A.y + v * B.y + w * C.y) / total)


def soddy_circles(tri: Triangle):
    """Inner and outer Soddy circles of the vertex circles of radii s-a, s-b, s-c.

    Returns ``((k_in, inner), (k_out, outer))`` with signed curvatures from
    Descartes' theorem. ``outer`` is ``None`` when ``k_out`` vanishes (the
    circle is a line); a negative ``k_out`` means it encloses the three.
    """
    a, b, c = tri.sides
    s = 0.5 * (a + b + c)
    ks = np.array([1.0 / (s - a), 1.0 / (s - b), 1.0 / (s - c)])
    zs = np.array([complex(*p) for p in tri.vertices])
    root = math.sqrt(ks[0] * ks[1] + ks[1] * ks[2] + ks[2] * ks[0])
    kz = ks * zs
    zroot = np.sqrt(kz[0] * kz[1] + kz[1] * kz[2] + kz[2] * kz[0])
    out = []
    for sign in (1, -1):
        k4 = float(ks.sum() + sign * 2 * root)
        if abs(k4) < 1e-12 * ks.max():
            out.append((0.0, None))
            continue
        best = None
        # the complex root's branch is not tied to the real one; keep the tangent candidate
        for cz in (kz.sum() + 2 * zroot, kz.sum() - 2 * zroot):
            z4 = cz / k4
            err = float(np.max(np.abs(np.abs(z4 - zs) - np.abs(1 / k4 + 1 / ks))))
            if best is None or err < best[0]:
                best = (err, z4)
        out.append((k4, Circle(Point(best[1].real, best[1].imag), 1 / abs(k4))))
    return out[0], out[1]


def half_tangent_sum(tri: Triangle) -> float:
    return sum(math.tan(x / 2) for x in tri.angles)


def kimberling(tri: Triangle, k: int, cross_check=False, rel_tol=1e-8) -> Point:
    """Center ``X(k)`` of ``tri``.

    With ``cross_check`` the trilinear value of ``X(175)``/``X(176)`` is
    compared with the center of the outer/inner Soddy circle and a mismatch
    raises :class:`GeometryError`.
    """
    if k not in TRILINEARS:
        raise UnsupportedCenter(f"X({k}) is not supported; choose from {SUPPORTED}")
    if k == 175 and abs(half_tangent_sum(tri) - 2.0) < 1e-12:
        raise CenterUndefined("X(175) is at infinity when the half-tangent sum is 2")
    try:
        p = center_from_trilinear(tri, TRILINEARS[k])
    except (InfinitePoint, ZeroDivisionError) as exc:
        raise CenterUndefined(f"X({k}) undefined for this triangle") from exc
    if cross_check and k in (175, 176):
        inner, outer = soddy_circles(tri)
        circ = inner[1] if k == 176 else outer[1]
        if circ is not None:
            scale = max(1.0, math.hypot(*circ.center))
            if dist(p, circ.center) > rel_tol * scale:
                raise GeometryError(f"X({k}) disagrees with the Soddy construction")
    return p


def intouch_triangle(tri: Triangle) -> Triangle:
    """Contact points of the incircle, ordered opposite A, B, C."""
    a, b, c = tri.sides
    s = 0.5 * (a + b + c)
    A, B, C = tri.vertices

    def along(p, q, d):
        L = dist(p, q)
        return Point(p.x + (q.x - p.x) * d / L, p.y + (q.y - p.y) * d / L)

    return Triangle(along(B, C, s - b), along(C, A, s - c), along(A, B, s - a))


def is_acute(tri: Triangle) -> bool:
    a, b, c = tri.sides
    a2, b2, c2 = a * a, b * b, c * c
    return a2 + b2 > c2 and b2 + c2 > a2 and c2 + a2 > b2
