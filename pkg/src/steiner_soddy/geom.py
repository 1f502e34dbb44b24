"""Planar primitives: points, lines, circles, conics.

Inversion and pole/polar duality with respect to a circle, least-squares
conic fitting on normalized points, conic classification and foci.
Everything here is an immutable value type or a pure function.
"""

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Tuple, Union

import numpy as np

from .tolerances import DEFAULT


class GeometryError(ValueError):
    """Base class for geometric degeneracies."""


class PointAtInversionCenter(GeometryError):
    pass


class LineThroughCenter(GeometryError):
    pass


class RankDeficient(GeometryError):
    pass


class DegenerateConic(GeometryError):
    pass


class Point(NamedTuple):
    x: float
    y: float

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def __add__(self, other):
        return Point(self.x + other[0], self.y + other[1])

    def scaled(self, k):
        return Point(k * self.x, k * self.y)

    def norm(self):
        return math.hypot(self.x, self.y)


def as_point(p):
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise GeometryError(f"non-finite point ({x}, {y})")
    return Point(x, y)


def dist(p, q):
    return math.hypot(p[0] - q[0], p[1] - q[1])


@dataclass(frozen=True)
class Line:
    """Implicit line ``a*x + b*y + c = 0`` with ``a**2 + b**2 == 1``.

    Use :meth:`from_coefficients` to build one; it normalizes the sign so
    that ``a > 0`` (or ``a == 0`` and ``b > 0``).
    """

    a: float
    b: float
    c: float

    @classmethod
    def from_coefficients(cls, a, b, c):
        n = math.hypot(a, b)
        if n == 0.0 or not math.isfinite(n):
            raise GeometryError("line normal vanishes")
        a, b, c = a / n, b / n, c / n
        if a < 0 or (a == 0 and b < 0):
            a, b, c = -a, -b, -c
        return cls(a, b, c)

    @classmethod
    def through(cls, p, q):
        dx, dy = q[0] - p[0], q[1] - p[1]
        return cls.from_coefficients(dy, -dx, dx * p[1] - dy * p[0])

    @property
    def normal(self):
        return Point(self.a, self.b)

    @property
    def direction(self):
        return Point(-self.b, self.a)

    def signed_distance(self, p):
        return self.a * p[0] + self.b * p[1] + self.c

    def foot(self, p):
        d = self.signed_distance(p)
        return Point(p[0] - d * self.a, p[1] - d * self.b)

    def intersect(self, other, tol=1e-14):
        det = self.a * other.b - self.b * other.a
        if abs(det) < tol:
            raise GeometryError("parallel lines")
        x = (self.b * other.c - other.b * self.c) / det
        y = (other.a * self.c - self.a * other.c) / det
        return Point(x, y)


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not self.radius > 0 or not math.isfinite(self.radius):
            raise GeometryError(f"circle radius must be positive, got {self.radius}")

    def contains(self, p):
        return dist(p, self.center) < self.radius

    def point_at(self, theta):
        return Point(self.center.x + self.radius * math.cos(theta),
                     self.center.y + self.radius * math.sin(theta))


GCircle = Union[Circle, Line]


# -- inversion -----------------------------------------------------------

def invert_point(p, inv: Circle, tol=DEFAULT.geometry):
    dx, dy = p[0] - inv.center.x, p[1] - inv.center.y
    d2 = dx * dx + dy * dy
    if d2 <= (tol * inv.radius) ** 2:
        raise PointAtInversionCenter(f"{tuple(p)} coincides with the inversion center")
    k = inv.radius ** 2 / d2
    return Point(inv.center.x + k * dx, inv.center.y + k * dy)


def passes_through_center(g: GCircle, inv: Circle, rel_tol=DEFAULT.through_center):
    """True when the curve passes within ``rel_tol * inv.radius`` of the center."""
    if isinstance(g, Line):
        return abs(g.signed_distance(inv.center)) < rel_tol * inv.radius
    return abs(dist(g.center, inv.center) - g.radius) < rel_tol * inv.radius


def invert_gcircle(g: GCircle, inv: Circle, rel_tol=DEFAULT.through_center) -> GCircle:
    """Image of a circle or line under inversion in ``inv``."""
    o, lam2 = inv.center, inv.radius ** 2
    if isinstance(g, Line):
        delta = g.signed_distance(o)
        if abs(delta) < rel_tol * inv.radius:
            return g
        k = lam2 / (2.0 * delta)
        return Circle(Point(o.x - k * g.a, o.y - k * g.b), abs(k))

    dx, dy = g.center.x - o.x, g.center.y - o.y
    d = math.hypot(dx, dy)
    if abs(d - g.radius) < rel_tol * inv.radius:
        # circle through the center: image is the line n.(p - o) = lam^2 / (2 rho)
        nx, ny = dx / d, dy / d
        h = lam2 / (2.0 * g.radius)
        return Line.from_coefficients(nx, ny, -(nx * o.x + ny * o.y) - h)
    power = d * d - g.radius ** 2
    k = lam2 / power
    return Circle(Point(o.x + k * dx, o.y + k * dy), lam2 * g.radius / abs(power))


# -- pole / polar ----------------------------------------------------------

def polar_line(p, inv: Circle, tol=DEFAULT.geometry) -> Line:
    dx, dy = p[0] - inv.center.x, p[1] - inv.center.y
    d = math.hypot(dx, dy)
    if d <= tol * inv.radius:
        raise PointAtInversionCenter(f"{tuple(p)} coincides with the inversion center")
    nx, ny = dx / d, dy / d
    return Line.from_coefficients(nx, ny, -(nx * inv.center.x + ny * inv.center.y) - inv.radius ** 2 / d)


def pole_point(line: Line, inv: Circle, tol=DEFAULT.geometry) -> Point:
    s = -line.signed_distance(inv.center)
    if abs(s) <= tol * inv.radius:
        raise LineThroughCenter("line passes through the inversion center")
    k = inv.radius ** 2 / s
    return Point(inv.center.x + k * line.a, inv.center.y + k * line.b)


# -- conics ------------------------------------------------------------------

class ConicKind(str, enum.Enum):
    ELLIPSE = "Ellipse"
    PARABOLA = "Parabola"
    HYPERBOLA = "Hyperbola"
    CIRCLE = "Circle"
    DEGENERATE_PAIR = "DegeneratePair"
    EMPTY = "Empty"


def _unit(coef):
    coef = np.asarray(coef, dtype=float)
    n = np.linalg.norm(coef)
    if n == 0:
        raise DegenerateConic("all conic coefficients vanish")
    coef = coef / n
    lead = coef[np.argmax(np.abs(coef) > 1e-12 * np.abs(coef).max())]
    return coef if lead > 0 else -coef


def conic_matrix(coef):
    A, B, C, D, E, F = coef
    return np.array([[A, B / 2, D / 2], [B / 2, C, E / 2], [D / 2, E / 2, F]])


def conic_classify(coef, tol=DEFAULT.classification) -> ConicKind:
    """Type of the conic with coefficients ``(A, B, C, D, E, F)``.

    The discriminant is taken relative to the size of the quadratic part so
    the parabola test is scale free; degeneracy is judged on the unit-norm
    coefficient vector.
    """
    coef = _unit(coef)
    A, B, C = coef[:3]
    quad = A * A + B * B + C * C
    if quad < tol:
        raise DegenerateConic("quadratic part vanishes (line or empty)")
    disc = (B * B - 4 * A * C) / quad
    M = conic_matrix(coef)
    if abs(np.linalg.det(M)) < tol ** 2:
        return ConicKind.DEGENERATE_PAIR
    if abs(disc) < tol:
        return ConicKind.PARABOLA
    if disc > 0:
        return ConicKind.HYPERBOLA
    # ellipse-like: real points exist only when F' has the opposite sign of A
    Q = M[:2, :2]
    center = -np.linalg.solve(Q, M[:2, 2])
    f_center = M[2, 2] + M[2, :2] @ center
    if f_center * A > 0:
        return ConicKind.EMPTY
    if abs(A - C) < tol * (abs(A) + abs(C)) and abs(B) < tol * (abs(A) + abs(C)):
        return ConicKind.CIRCLE
    return ConicKind.ELLIPSE


@dataclass(frozen=True)
class Conic:
    """``A x^2 + B xy + C y^2 + D x + E y + F = 0``, coefficients of unit norm."""

    coef: Tuple[float, float, float, float, float, float]
    kind: ConicKind
    residual: float = 0.0

    @classmethod
    def from_coefficients(cls, coef, kind=None, tol=DEFAULT.classification, residual=0.0):
        unit = _unit(coef)
        if kind is None:
            kind = conic_classify(unit, tol)
        return cls(tuple(float(c) for c in unit), ConicKind(kind), residual)

    @property
    def matrix(self):
        return conic_matrix(self.coef)

    def evaluate(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        x, y = pts[:, 0], pts[:, 1]
        A, B, C, D, E, F = self.coef
        return A * x * x + B * x * y + C * y * y + D * x + E * y + F

    def center(self):
        M = self.matrix
        try:
            c = -np.linalg.solve(M[:2, :2], M[:2, 2])
        except np.linalg.LinAlgError as exc:
            raise DegenerateConic("conic has no center") from exc
        return Point(float(c[0]), float(c[1]))


def normalize_points(pts):
    """Shift to zero mean and scale to unit RMS radius.

    Returns the normalized array together with ``(mean, scale)`` so that
    ``normalized = (pts - mean) * scale``.
    """
    pts = np.asarray(pts, dtype=float)
    mean = pts.mean(axis=0)
    centred = pts - mean
    rms = math.sqrt(float(np.mean(np.sum(centred ** 2, axis=1))))
    if rms == 0.0:
        raise RankDeficient("all points coincide")
    return centred / rms, mean, 1.0 / rms


def _design(u):
    x, y = u[:, 0], u[:, 1]
    return np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])


def _denormalize(coef, mean, scale):
    # [u, v, 1] = T [x, y, 1]
    T = np.array([[scale, 0.0, -scale * mean[0]],
                  [0.0, scale, -scale * mean[1]],
                  [0.0, 0.0, 1.0]])
    M = T.T @ conic_matrix(coef) @ T
    return np.array([M[0, 0], 2 * M[0, 1], M[1, 1], 2 * M[0, 2], 2 * M[1, 2], M[2, 2]])


def conic_from_points(pts, tol=DEFAULT.classification, separation=DEFAULT.rank_separation) -> Conic:
    """Least-squares conic through five or more points.

    The fit is the smallest right singular vector of the monomial design
    matrix, computed on normalized points and mapped back. ``residual`` is the
    RMS algebraic residual in the normalized frame.
    """
    pts = np.asarray(pts, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 5:
        raise RankDeficient("need at least five 2-D points")
    u, mean, scale = normalize_points(pts)
    design = _design(u)
    _, s, vt = np.linalg.svd(design, full_matrices=True)
    sv = np.zeros(6)
    sv[: len(s)] = s
    if sv[4] < separation * sv[0]:
        raise RankDeficient("conic through the points is not unique")
    v = vt[-1]
    residual = float(np.sqrt(np.mean((design @ v) ** 2)))
    kind = conic_classify(v, tol)
    return Conic.from_coefficients(_denormalize(v, mean, scale), kind=kind, residual=residual)


def conic_from_tangent_lines(lines, tol=DEFAULT.classification,
                             separation=DEFAULT.rank_separation) -> Conic:
    """Conic tangent to five or more lines (least-squares dual fit).

    A line ``l`` touches the conic ``M`` iff ``l^T adj(M) l = 0``, so the dual
    matrix is the null vector of a design matrix in the line coordinates. The
    frame is normalized on the feet of the perpendiculars from the origin.
    ``residual`` is the RMS dual residual in that frame.
    """
    lines = list(lines)
    if len(lines) < 5:
        raise RankDeficient("need at least five lines")
    feet = np.array([ln.foot((0.0, 0.0)) for ln in lines])
    _, mean, scale = normalize_points(feet)
    # a x + b y + c = 0 with x = mean + u / scale
    L = np.array([[ln.a, ln.b, (ln.c + ln.a * mean[0] + ln.b * mean[1]) * scale] for ln in lines])
    L /= np.linalg.norm(L, axis=1)[:, None]
    a, b, c = L.T
    design = np.column_stack([a * a, a * b, b * b, a * c, b * c, c * c])
    _, s, vt = np.linalg.svd(design, full_matrices=True)
    sv = np.zeros(6)
    sv[: len(s)] = s
    if sv[4] < separation * sv[0]:
        raise RankDeficient("conic tangent to the lines is not unique")
    v = vt[-1]
    residual = float(np.sqrt(np.mean((design @ v) ** 2)))
    dual = conic_matrix(v)
    try:
        M = np.linalg.inv(dual)
    except np.linalg.LinAlgError as exc:
        raise DegenerateConic("dual conic is singular") from exc
    coef = np.array([M[0, 0], 2 * M[0, 1], M[1, 1], 2 * M[0, 2], 2 * M[1, 2], M[2, 2]])
    kind = conic_classify(coef, tol)
    return Conic.from_coefficients(_denormalize(coef, mean, scale), kind=kind, residual=residual)


def _principal_frame(conic: Conic):
    M = conic.matrix
    w, vecs = np.linalg.eigh(M[:2, :2])
    return M, w, vecs


def conic_foci(conic: Conic, tol=DEFAULT.classification):
    """Foci of a central conic, or ``(focus, directrix)`` for a parabola.

    For ellipses the foci are returned along the major axis; for a circle both
    foci are the center.
    """
    kind = conic.kind
    if kind in (ConicKind.DEGENERATE_PAIR, ConicKind.EMPTY):
        raise DegenerateConic(f"{kind.value} conic has no foci")
    M, w, vecs = _principal_frame(conic)
    if kind == ConicKind.PARABOLA:
        # eigenvector with the (near) zero eigenvalue is the axis direction
        i_axis = int(np.argmin(np.abs(w)))
        e1, e2 = vecs[:, i_axis], vecs[:, 1 - i_axis]
        lam = w[1 - i_axis]
        lin = 2 * M[:2, 2]
        d1, d2 = lin @ e1, lin @ e2
        F = M[2, 2]
        v0 = -d2 / (2 * lam)
        u0 = -(F - d2 * d2 / (4 * lam)) / d1
        p = -d1 / (4 * lam)
        focus = (u0 + p) * e1 + v0 * e2
        # directrix: e1 . x = u0 - p
        directrix = Line.from_coefficients(e1[0], e1[1], -(u0 - p))
        return Point(*focus), directrix
    c = conic.center()
    f_center = M[2, 2] + M[2, :2] @ np.asarray(c)
    sq = -f_center / w  # squared semi-axes along the eigenvectors (signed)
    if kind == ConicKind.CIRCLE:
        return c, c
    if kind == ConicKind.ELLIPSE:
        i = int(np.argmax(sq))
        focal = math.sqrt(max(sq[i] - sq[1 - i], 0.0))
    else:
        i = int(np.argmax(sq))  # the positive one is the transverse axis
        focal = math.sqrt(sq[i] - sq[1 - i])
    e = vecs[:, i]
    return (Point(c.x + focal * e[0], c.y + focal * e[1]),
            Point(c.x - focal * e[0], c.y - focal * e[1]))


def conic_axes(conic: Conic):
    """Center, semi-axes ``(a, b)`` and unit major-axis direction of a central conic.

    For a hyperbola ``a`` is the transverse semi-axis.
    """
    M, w, vecs = _principal_frame(conic)
    c = conic.center()
    f_center = M[2, 2] + M[2, :2] @ np.asarray(c)
    sq = -f_center / w
    i = int(np.argmax(sq))
    return c, math.sqrt(abs(sq[i])), math.sqrt(abs(sq[1 - i])), Point(*vecs[:, i])


def conic_from_foci(f1, f2, a):
    """Ellipse with foci ``f1``, ``f2`` and major semi-axis ``a``."""
    f1, f2 = np.asarray(f1, float), np.asarray(f2, float)
    c = 0.5 * np.linalg.norm(f2 - f1)
    if a <= c:
        raise DegenerateConic("major semi-axis must exceed the focal half-distance")
    b = math.sqrt(a * a - c * c)
    mid = 0.5 * (f1 + f2)
    e = (f2 - f1) / (2 * c) if c > 0 else np.array([1.0, 0.0])
    R = np.array([[e[0], -e[1]], [e[1], e[0]]])
    Q = R @ np.diag([1 / a ** 2, 1 / b ** 2]) @ R.T
    lin = -2 * Q @ mid
    const = mid @ Q @ mid - 1.0
    return Conic.from_coefficients([Q[0, 0], 2 * Q[0, 1], Q[1, 1], lin[0], lin[1], const])


def circle_from_points(p, q, s) -> Circle:
    """Circumcircle of three points."""
    ax, ay = p
    bx, by = q
    cx, cy = s
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-300:
        raise GeometryError("collinear points have no circumcircle")
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    return Circle(Point(ux, uy), math.hypot(ax - ux, ay - uy))


# -- polygons ----------------------------------------------------------------

@dataclass(frozen=True)
class Polygon:
    vertices: Tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(as_point(v) for v in self.vertices)
        if len(verts) < 3:
            raise GeometryError("a polygon needs at least three vertices")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def check(cls, vertices, tol=DEFAULT.geometry):
        poly = cls(tuple(vertices))
        scale = max(max(abs(v.x), abs(v.y)) for v in poly.vertices) or 1.0
        for p, q in poly.edges():
            if dist(p, q) <= tol * scale:
                raise GeometryError("consecutive vertices coincide")
        return poly

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __getitem__(self, i):
        return self.vertices[i % len(self.vertices)]

    def edges(self):
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def side_lines(self):
        return [Line.through(p, q) for p, q in self.edges()]

    def as_array(self):
        return np.array(self.vertices, dtype=float)

    def signed_area(self):
        v = self.as_array()
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def point_in_polygon(p, poly: Polygon, tol=DEFAULT.geometry) -> bool:
    """Winding-number containment test; points on the boundary count as inside."""
    px, py = p
    scale = max(1.0, max(max(abs(v.x), abs(v.y)) for v in poly))
    winding = 0
    for a, b in poly.edges():
        # boundary check
        ex, ey = b.x - a.x, b.y - a.y
        elen = math.hypot(ex, ey)
        if elen > 0:
            t = ((px - a.x) * ex + (py - a.y) * ey) / (elen * elen)
            if -tol <= t <= 1 + tol:
                if abs((px - a.x) * ey - (py - a.y) * ex) / elen <= tol * scale:
                    return True
        cross = ex * (py - a.y) - (px - a.x) * ey
        if a.y <= py:
            if b.y > py and cross > 0:
                winding += 1
        elif b.y <= py and cross < 0:
            winding -= 1
    return winding != 0


def fit_circle(pts):
    """Algebraic (Kasa) circle fit refined by Gauss-Newton on geometric distance.

    Returns ``(circle, rms_residual)`` with the residual in the normalized frame.
    """
    u, mean, scale = normalize_points(pts)
    x, y = u[:, 0], u[:, 1]
    A = np.column_stack([x, y, np.ones_like(x)])
    sol, *_ = np.linalg.lstsq(A, x * x + y * y, rcond=None)
    cx, cy = sol[0] / 2, sol[1] / 2
    r = math.sqrt(max(sol[2] + cx * cx + cy * cy, 0.0))
    for _ in range(20):
        dx, dy = x - cx, y - cy
        d = np.hypot(dx, dy)
        d[d == 0] = 1e-300
        res = d - r
        J = np.column_stack([-dx / d, -dy / d, -np.ones_like(d)])
        step, *_ = np.linalg.lstsq(J, -res, rcond=None)
        cx, cy, r = cx + step[0], cy + step[1], r + step[2]
        if np.max(np.abs(step)) < 1e-15:
            break
    rms = float(np.sqrt(np.mean((np.hypot(x - cx, y - cy) - r) ** 2)))
    center = Point(cx / scale + mean[0], cy / scale + mean[1])
    return Circle(center, abs(r) / scale), rms


def fit_line(pts):
    """Total-least-squares line; returns ``(line, rms_residual_normalized)``."""
    u, mean, scale = normalize_points(pts)
    _, s, vt = np.linalg.svd(u, full_matrices=False)
    normal = vt[-1]
    rms = float(s[-1] / math.sqrt(len(u)))
    line = Line.from_coefficients(normal[0], normal[1], -float(normal @ mean))
    return line, rms


def as_array(points: Sequence) -> np.ndarray:
    return np.asarray([(p[0], p[1]) for p in points], dtype=float)
