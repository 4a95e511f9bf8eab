"""SVG staircase pictures of rank-two regions.

Points are drawn in coordinates with respect to the two Nef rays, where the
nef order becomes the componentwise order and the region boundary is an
ordinary staircase.  The polyline's inner corners are the region minima;
``parse_staircase`` reads them back.
"""

import xml.etree.ElementTree as ET
from fractions import Fraction

from .errors import UnsupportedError
from .linalg import solve_rational

CELL = 20


def _ray_coords(p, rays):
    (a, b), (c, d) = rays
    return tuple(solve_rational([[a, c], [b, d]], list(p)))


def _from_ray_coords(u, rays):
    (a, b), (c, d) = rays
    return (u[0] * a + u[1] * c, u[0] * b + u[1] * d)


def _fmt(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%.6g" % float(x)


def staircase_corners(minima_u, lo, hi):
    """Polyline of the region boundary in ray coordinates: down from the top
    edge at the first minimum, then alternating right/down steps."""
    ms = sorted(minima_u)
    if not ms:
        return []
    pts = [(ms[0][0], hi[1])]
    for k, (x, y) in enumerate(ms):
        if k:
            pts.append((x, ms[k - 1][1]))
        pts.append((x, y))
    pts.append((hi[0], ms[-1][1]))
    return pts


def render_staircase(points, minima, nef, title="region"):
    if len(nef.rays) != 2 or any(len(r) != 2 for r in nef.rays):
        raise UnsupportedError("unsupported rank: SVG staircases need rank 2")
    rays = list(nef.rays)
    if rays[0][0] * rays[1][1] - rays[0][1] * rays[1][0] < 0:
        rays.reverse()  # counter-clockwise, so the first ray points "right"
    pu = [_ray_coords(p, rays) for p in points]
    mu = [_ray_coords(m, rays) for m in minima]
    allu = pu + mu or [(0, 0)]
    lo = (min(u[0] for u in allu), min(u[1] for u in allu))
    hi = (max(u[0] for u in allu) + 1, max(u[1] for u in allu) + 1)
    w = int((hi[0] - lo[0] + 2) * CELL)
    h = int((hi[1] - lo[1] + 2) * CELL)
    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(w), height=str(h))
    svg.set("data-rays", ";".join("%d,%d" % tuple(r) for r in rays))
    ET.SubElement(svg, "title").text = title
    # flip y so that larger degrees go up
    g = ET.SubElement(svg, "g", transform="translate(%d,%d) scale(%d,%d)"
                      % (CELL * (1 - float(lo[0])), CELL * (1 + float(hi[1])), CELL, -CELL))
    for p, u in sorted(zip(points, pu)):
        ET.SubElement(g, "rect", {"class": "cell", "x": _fmt(u[0]), "y": _fmt(u[1]),
                                  "width": "1", "height": "1", "fill": "#9ab",
                                  "data-pic": "%d,%d" % p})
    corners = staircase_corners(mu, lo, hi)
    ET.SubElement(g, "polyline", {"class": "staircase", "fill": "none", "stroke": "black",
                                  "stroke-width": "0.08",
                                  "points": " ".join("%s,%s" % (_fmt(x), _fmt(y))
                                                     for x, y in corners)})
    for m in sorted(minima):
        u = _ray_coords(m, rays)
        ET.SubElement(g, "circle", {"class": "minimum", "cx": _fmt(u[0]), "cy": _fmt(u[1]),
                                    "r": "0.15", "data-pic": "%d,%d" % tuple(m)})
    return ET.tostring(svg, encoding="unicode")


def parse_staircase(text):
    """Minima (Pic coordinates) recovered from the staircase polyline."""
    root = ET.fromstring(text)
    rays = [tuple(int(x) for x in r.split(",")) for r in root.get("data-rays").split(";")]
    line = next(el for el in root.iter() if el.get("class") == "staircase")
    pts = [tuple(Fraction(v) for v in pair.split(","))
           for pair in line.get("points").split()]
    # the minima are the odd-indexed vertices (after each downward step)
    out = []
    for k in range(1, len(pts) - 1, 2):
        x, y = _from_ray_coords(pts[k], rays)
        out.append((round(x), round(y)))
    return sorted(out)


def parse_cells(text):
    root = ET.fromstring(text)
    return sorted(tuple(int(x) for x in el.get("data-pic").split(","))
                  for el in root.iter() if el.get("class") == "cell")
