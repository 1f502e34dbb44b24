"""Steiner chains as inversive images of a regular ring of circles.

The pre-image is ``N`` equal circles of radius ``R sin(pi/N)`` centred on a
regular N-gon of circumradius ``R``; vertex ``k`` sits at angle
``t + 2 pi k / N``. Inverting in the circle of radius ``lambda`` centred at
``(x0, 0)`` gives the chain at phase ``t``.
"""

import enum
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .geom import (Circle, GCircle, GeometryError, Line, Point, circle_from_points,
                   invert_gcircle, invert_point, passes_through_center)
from .tolerances import DEFAULT


class InvalidConfig(GeometryError):
    pass


class DegenerateChainCircle(GeometryError):
    pass


class FormulaSingular(GeometryError):
    pass


class CausticSingular(FormulaSingular):
    pass


class Regime(str, enum.Enum):
    ELLIPSE = "Ellipse"
    PARABOLA = "Parabola"
    HYPERBOLA = "Hyperbola"


@dataclass(frozen=True)
class PorismConfig:
    """The four numbers that fix the porism.

    Negative ``x0`` is mirrored to ``|x0|``. Configs whose inversion center
    lies on the pre-image incircle are accepted, but have no circular caustic
    (``chain_at`` raises :class:`CausticSingular`).
    """

    n: int
    r: float
    x0: float
    lam: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise InvalidConfig(f"n must be an integer >= 3, got {self.n}")
        for name in ("r", "x0", "lam"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidConfig(f"{name} must be finite")
        if not self.r > 0:
            raise InvalidConfig(f"r must be positive, got {self.r}")
        if not self.lam > 0:
            raise InvalidConfig(f"lambda must be positive, got {self.lam}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "x0", abs(float(self.x0)))

    @property
    def alpha(self):
        return math.pi / self.n

    @property
    def inversion_circle(self):
        return Circle(Point(self.x0, 0.0), self.lam)

    @property
    def period(self):
        return 2 * math.pi / self.n

    def phases(self, samples, offset=0.0):
        """``samples`` uniformly spaced phases covering one period."""
        return [offset + self.period * k / samples for k in range(samples)]


@dataclass(frozen=True)
class RegularPreImage:
    chain: Tuple[Circle, ...]
    incircle: Circle
    soddy_inner: Circle
    soddy_outer: Circle


def _rotated_centers(cfg, t):
    return [Point(cfg.r * math.cos(t + 2 * math.pi * k / cfg.n),
                  cfg.r * math.sin(t + 2 * math.pi * k / cfg.n)) for k in range(cfg.n)]


def regular_preimage(cfg: PorismConfig, t: float = 0.0) -> RegularPreImage:
    sa = math.sin(cfg.alpha)
    origin = Point(0.0, 0.0)
    chain = tuple(Circle(c, cfg.r * sa) for c in _rotated_centers(cfg, t))
    return RegularPreImage(
        chain=chain,
        incircle=Circle(origin, cfg.r * math.cos(cfg.alpha)),
        soddy_inner=Circle(origin, cfg.r * (1 - sa)),
        soddy_outer=Circle(origin, cfg.r * (1 + sa)),
    )


@dataclass(frozen=True)
class SteinerChain:
    """Chain at one phase.

    ``contacts[k]`` is the tangency point of circles ``k`` and ``k + 1``.
    ``curvatures`` are signed: negative for a circle whose pre-image contains
    the inversion center (its image encloses the rest of the configuration).
    ``soddy_inner``/``soddy_outer`` are the images of the pre-image circles of
    radius ``R(1 - sin a)`` and ``R(1 + sin a)``; either may be a line.
    """

    phase: float
    circles: Tuple[Circle, ...]
    curvatures: Tuple[float, ...]
    contacts: Tuple[Point, ...]
    soddy_inner: GCircle
    soddy_outer: GCircle
    soddy_curvatures: Tuple[float, float]
    caustic: Circle

    @property
    def centers(self):
        return tuple(c.center for c in self.circles)

    @property
    def radii(self):
        return tuple(c.radius for c in self.circles)


def _signed_curvature(image: GCircle, inverted_disk_contains_center: bool):
    if isinstance(image, Line):
        return 0.0
    return (-1.0 if inverted_disk_contains_center else 1.0) / image.radius


def chain_at(cfg: PorismConfig, t: float) -> SteinerChain:
    inv = cfg.inversion_circle
    pre = regular_preimage(cfg, t)
    o = inv.center
    circles, curv = [], []
    for k, c in enumerate(pre.chain):
        if passes_through_center(c, inv):
            raise DegenerateChainCircle(f"chain circle {k} passes through the inversion center at t={t}")
        img = invert_gcircle(c, inv)
        circles.append(img)
        curv.append(_signed_curvature(img, c.contains(o)))
    rc = cfg.r * math.cos(cfg.alpha)
    contacts = tuple(invert_point(Point(rc * math.cos(t + (2 * k + 1) * cfg.alpha),
                                        rc * math.sin(t + (2 * k + 1) * cfg.alpha)), inv)
                     for k in range(cfg.n))
    caustic = invert_gcircle(pre.incircle, inv)
    if isinstance(caustic, Line):
        raise CausticSingular("caustic degenerates to a line")
    s_in = invert_gcircle(pre.soddy_inner, inv)
    s_out = invert_gcircle(pre.soddy_outer, inv)
    # the "disk" of the outer pre-image Soddy circle is its exterior
    k_in = _signed_curvature(s_in, pre.soddy_inner.contains(o))
    k_out = _signed_curvature(s_out, not pre.soddy_outer.contains(o))
    return SteinerChain(phase=t, circles=tuple(circles), curvatures=tuple(curv),
                        contacts=contacts, soddy_inner=s_in, soddy_outer=s_out,
                        soddy_curvatures=(k_in, k_out), caustic=caustic)


def numeric_caustic(chain: SteinerChain) -> Circle:
    """Circle through three of the contact points."""
    n = len(chain.contacts)
    return circle_from_points(chain.contacts[0], chain.contacts[n // 3], chain.contacts[(2 * n) // 3])


def classify_regime(cfg: PorismConfig, tol=DEFAULT.classification) -> Regime:
    sa = math.sin(cfg.alpha)
    inner, outer = cfg.r * (1 - sa), cfg.r * (1 + sa)
    scale = max(cfg.r, 1.0) * tol
    if abs(cfg.x0 - inner) < scale or abs(cfg.x0 - outer) < scale:
        return Regime.PARABOLA
    if cfg.x0 < inner or cfg.x0 > outer:
        return Regime.ELLIPSE
    return Regime.HYPERBOLA


def parabola_x0(n, r, which="inner"):
    """Inversion abscissa that puts the center on a pre-image Soddy circle."""
    sa = math.sin(math.pi / n)
    return r * (1 - sa) if which == "inner" else r * (1 + sa)


# -- closed forms -------------------------------------------------------------

def _check_den(den, scale, what, tol=1e-12):
    if abs(den) < tol * scale:
        raise FormulaSingular(f"{what}: denominator vanishes")


def caustic_closed_form(cfg: PorismConfig) -> Circle:
    R, x0, lam, a = cfg.r, cfg.x0, cfg.lam, cfg.alpha
    den = R * R * math.cos(a) ** 2 - x0 * x0
    if abs(den) < 1e-12 * R * R:
        raise CausticSingular("R^2 cos^2(alpha) = x0^2")
    ix = x0 + x0 * lam * lam / den
    r = lam * lam * R * math.cos(a) / abs(den)
    return Circle(Point(ix, 0.0), r)


def outer_conic_closed_form(cfg: PorismConfig):
    """Foci abscissas ``(f1, f2)`` and vertex abscissa of the outer conic.

    Returns ``(Point(f1, 0), Point(f2, 0), vx)``. ``f1`` takes the ``+`` branch.
    """
    R, x0, lam, a = cfg.r, cfg.x0, cfg.lam, cfg.alpha
    ca2 = math.cos(a) ** 2
    L2 = lam * lam
    den = R ** 4 * ca2 ** 2 + 2 * R * R * ca2 * x0 * x0 - 4 * R * R * x0 * x0 + x0 ** 4
    _check_den(den, R ** 4 + x0 ** 4, "foci")
    common = (R ** 4 * ca2 ** 2 - R * R * ca2 * (L2 - 2 * x0 * x0)
              + 2 * R * R * (L2 - 2 * x0 * x0) - x0 * x0 * (L2 - x0 * x0))
    pm = 2 * R * R * math.sin(a) * L2
    f1 = x0 * (common + pm) / den
    f2 = x0 * (common - pm) / den
    c2a = math.cos(2 * a)
    vden = R * R * c2a + R * R - 4 * R * x0 + 2 * x0 * x0
    _check_den(vden, R * R + x0 * x0, "vertex")
    vx = (c2a * R * R * x0 + R * (R * x0 + 2 * L2 - 4 * x0 * x0) - 2 * x0 * (L2 - x0 * x0)) / vden
    return Point(f1, 0.0), Point(f2, 0.0), vx


@dataclass(frozen=True)
class BrocardClosedForm:
    center: Point
    a: float
    b: float
    a_sign: int
    b_sign: int

    @property
    def aspect_ratio(self):
        """Major over minor semi-axis."""
        return max(self.a, self.b) / min(self.a, self.b)


def brocard_closed_form(cfg: PorismConfig) -> BrocardClosedForm:
    R, x0, lam, a = cfg.r, cfg.x0, cfg.lam, cfg.alpha
    ca2 = math.cos(a) ** 2
    L2 = lam * lam
    den = R * R * (R * R - 4 * x0 * x0) * ca2 ** 2 + 2 * R * R * x0 * x0 * ca2 + x0 ** 4
    _check_den(den, R ** 4 + x0 ** 4, "brocard")
    ox = x0 + L2 * x0 * (R * R * ca2 * math.cos(2 * a) - x0 * x0) / den
    ap = L2 * R * (x0 * x0 - R * R * ca2) * ca2 / den
    if den < 0:
        raise FormulaSingular("brocard: negative radicand in minor semi-axis")
    bp = L2 * R * ca2 / math.sqrt(den)
    return BrocardClosedForm(Point(ox, 0.0), abs(ap), abs(bp),
                             1 if ap >= 0 else -1, 1 if bp >= 0 else -1)


def brocard_inellipse_closed_form(cfg: PorismConfig):
    """``(O', a', b')``: center, semi-axis along x and semi-axis along y."""
    b = brocard_closed_form(cfg)
    return b.center, b.a, b.b


# -- batch evaluation -----------------------------------------------------------

@dataclass(frozen=True)
class ChainBatch:
    """Chain circles for many phases at once.

    ``centers`` has shape ``(T, N, 2)``; ``curvatures`` (signed) and
    ``radii`` have shape ``(T, N)``. The caustic and the Soddy images do not
    depend on the phase.
    """

    phases: np.ndarray
    centers: np.ndarray
    radii: np.ndarray
    curvatures: np.ndarray


def chain_batch(cfg: PorismConfig, phases, rel_tol=DEFAULT.through_center) -> ChainBatch:
    """Vectorized counterpart of :func:`chain_at` for the chain circles only."""
    t = np.asarray(phases, dtype=float)[:, None]
    ang = t + 2 * np.pi * np.arange(cfg.n)[None, :] / cfg.n
    rho = cfg.r * math.sin(cfg.alpha)
    dx = cfg.r * np.cos(ang) - cfg.x0
    dy = cfg.r * np.sin(ang)
    power = dx * dx + dy * dy - rho * rho
    # distance from the inversion center to the circle is |d - rho|
    gap = np.abs(np.sqrt(dx * dx + dy * dy) - rho)
    if np.any(gap < rel_tol * cfg.lam):
        raise DegenerateChainCircle("a chain circle passes through the inversion center")
    k = cfg.lam ** 2 / power
    centers = np.stack([cfg.x0 + k * dx, k * dy], axis=-1)
    radii = cfg.lam ** 2 * rho / np.abs(power)
    return ChainBatch(np.asarray(phases, dtype=float), centers, radii,
                      power / (cfg.lam ** 2 * rho))
