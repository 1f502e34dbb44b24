"""Static SVG 1.1 figures of a porism configuration.

Layers (``<g>`` ids): ``outer-conic``, ``caustic``, ``chain`` and, when a locus
is given, ``locus``. The drawing uses math orientation (y up).
"""

import math
import xml.etree.ElementTree as ET

import numpy as np

from .chain import PorismConfig, chain_at
from .geom import Circle, GeometryError, Line
from .porism import caustic_scale

LAYERS = ("outer-conic", "caustic", "chain", "locus")
SVG_NS = "http://www.w3.org/2000/svg"


def _fmt(x):
    return f"{x:.6g}"


def _outer_trace(cfg: PorismConfig, samples: int, bound: float):
    """Polylines along the outer conic: vertex 0 over a full turn of the phase.

    The trace is broken where it leaves the drawing box (hyperbola and
    parabola branches run off to infinity).
    """
    runs, run = [], []
    for t in np.linspace(0.0, 2 * math.pi, samples, endpoint=False) + 1e-3:
        try:
            p = chain_at(cfg, float(t)).centers[0]
        except GeometryError:
            p = None
        if p is None or max(abs(p.x), abs(p.y)) > bound:
            if len(run) > 1:
                runs.append(run)
            run = []
            continue
        run.append(p)
    if len(run) > 1:
        runs.append(run)
    return runs


def _circle(parent, c: Circle, **attrs):
    ET.SubElement(parent, "circle", cx=_fmt(c.center.x), cy=_fmt(c.center.y), r=_fmt(c.radius), **attrs)


def _line(parent, ln: Line, bound, **attrs):
    # two far points along the line, clipped by the viewBox
    foot = np.array([-ln.a * ln.c, -ln.b * ln.c])
    d = np.array([-ln.b, ln.a]) * 4 * bound
    p, q = foot - d, foot + d
    ET.SubElement(parent, "line", x1=_fmt(p[0]), y1=_fmt(p[1]), x2=_fmt(q[0]), y2=_fmt(q[1]), **attrs)


def _polyline(parent, pts, **attrs):
    ET.SubElement(parent, "polyline", points=" ".join(f"{_fmt(p[0])},{_fmt(p[1])}" for p in pts),
                  fill="none", **attrs)


def render_svg(cfg: PorismConfig, locus_points=None, t: float = 0.0, size: int = 800,
               samples: int = 720, clip: float = 6.0) -> str:
    """SVG document for ``cfg``: outer conic, caustic, the chain at phase ``t`` and a locus.

    ``clip`` bounds the drawing box in caustic scales (``|I| + r``).
    """
    bound = clip * caustic_scale(cfg)
    try:
        chain = chain_at(cfg, t)
    except GeometryError:
        chain = chain_at(cfg, t + 1e-3)
    pts = [p for p in chain.centers]
    pts += [p for p in (locus_points or []) if p is not None]
    xs = [p[0] for p in pts if max(abs(p[0]), abs(p[1])) <= bound] + [chain.caustic.center.x]
    ys = [p[1] for p in pts if max(abs(p[0]), abs(p[1])) <= bound] + [chain.caustic.center.y]
    r = chain.caustic.radius
    x0, x1 = min(xs) - 2 * r, max(xs) + 2 * r
    y0, y1 = min(ys) - 2 * r, max(ys) + 2 * r
    w, h = x1 - x0, y1 - y0
    stroke = _fmt(max(w, h) / 400)

    ET.register_namespace("", SVG_NS)
    svg = ET.Element("svg", xmlns=SVG_NS, version="1.1", width=str(size),
                     height=str(int(round(size * h / w))), viewBox=f"{_fmt(x0)} {_fmt(-y1)} {_fmt(w)} {_fmt(h)}")
    ET.SubElement(svg, "title").text = f"porism n={cfg.n} r={cfg.r!r} x0={cfg.x0!r} lambda={cfg.lam!r}"
    root = ET.SubElement(svg, "g", transform="scale(1,-1)")

    g = ET.SubElement(root, "g", id="outer-conic")
    for run in _outer_trace(cfg, samples, 4 * max(w, h, bound)):
        _polyline(g, run, stroke="#888888", **{"stroke-width": stroke})

    g = ET.SubElement(root, "g", id="caustic")
    _circle(g, chain.caustic, fill="none", stroke="#1f77b4", **{"stroke-width": stroke})

    g = ET.SubElement(root, "g", id="chain")
    for c in chain.circles:
        _circle(g, c, fill="none", stroke="#ff7f0e", **{"stroke-width": stroke})
    for s in (chain.soddy_inner, chain.soddy_outer):
        if isinstance(s, Line):
            _line(g, s, max(w, h), stroke="#2ca02c", **{"stroke-width": stroke})
        else:
            _circle(g, s, fill="none", stroke="#2ca02c", **{"stroke-width": stroke})
    _polyline(g, list(chain.centers) + [chain.centers[0]], stroke="#d62728", **{"stroke-width": stroke})

    if locus_points is not None:
        g = ET.SubElement(root, "g", id="locus")
        dot = _fmt(max(w, h) / 300)
        for p in locus_points:
            if p is not None and max(abs(p[0]), abs(p[1])) <= 4 * max(w, h, bound):
                ET.SubElement(g, "circle", cx=_fmt(p[0]), cy=_fmt(p[1]), r=dot, fill="#9467bd")
    return ET.tostring(svg, encoding="unicode", xml_declaration=True) + "\n"
