"""Deterministic SVG output: domino tilings of diamonds, region tilings
(diabolos with the square ones shaded, rhombi, grid dominoes),
probability heat maps, and the degree-8 curve overlay for fortresses.

Identical inputs produce byte-identical SVG.  All geometry is float64
regardless of the computation backend; coordinates are printed with a
fixed format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .grid import Matching, SLOTS, edge_vertices
from .probs import ProbGrid
from .regions import Embedding, FortressSpec, GridSpec, HexagonSpec, RegionTiling

_STYLE = """
  .domino-n { fill: #d94040; stroke: #222; stroke-width: 0.04; }
  .domino-s { fill: #3d7ad1; stroke: #222; stroke-width: 0.04; }
  .domino-e { fill: #3fae5a; stroke: #222; stroke-width: 0.04; }
  .domino-w { fill: #e8c23a; stroke: #222; stroke-width: 0.04; }
  .shaded-square { fill: #444; stroke: #111; stroke-width: 0.02; }
  .triangle { fill: #f4f0e4; stroke: #999; stroke-width: 0.02; }
  .octic { fill: none; stroke: #cc2200; stroke-width: 0.1; }
  .edge-prob { stroke-linecap: round; }
  .outline { fill: none; stroke: #000; stroke-width: 0.05; }
"""


@dataclass
class Scene:
    shapes: list[str] = field(default_factory=list)
    bounds: tuple[float, float, float, float] = (0.0, 0.0, 1.0, 1.0)

    def to_svg(self) -> str:
        x0, y0, x1, y1 = self.bounds
        pad = 0.05 * max(x1 - x0, y1 - y0, 1.0)
        header = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            '<svg xmlns="http://www.w3.org/2000/svg" '
            f'viewBox="{_f(x0 - pad)} {_f(y0 - pad)} '
            f'{_f(x1 - x0 + 2 * pad)} {_f(y1 - y0 + 2 * pad)}">\n'
            f"<style>{_STYLE}</style>\n"
        )
        return header + "\n".join(self.shapes) + "\n</svg>\n"


def _f(v: float) -> str:
    s = f"{float(v):.4f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _polygon(points, cls: str, extra: str = "") -> str:
    pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in points)
    return f'<polygon class="{cls}"{extra} points="{pts}"/>'


def _polyline(points, cls: str) -> str:
    pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in points)
    return f'<polyline class="{cls}" points="{pts}"/>'


# -- dominoes -----------------------------------------------------------------

_SLOT_CLASS = {"NW": "domino-n", "SE": "domino-s", "NE": "domino-e", "SW": "domino-w"}


def _square_of_vertex(v):
    # Rotate the diagonal lattice so each diamond vertex owns a unit square.
    i, j = v
    return (i + j - 1) // 2, (j - i - 1) // 2


def render_matching(m: Matching) -> str:
    """Dominoes (2x1 rectangles dual to matched edges), slot-colored."""
    n = m.order
    scene = Scene(bounds=(-n - 0.5, -n - 0.5, n + 0.5, n + 0.5))
    for e in sorted(m.edges, key=lambda e: (e.r, e.c, SLOTS.index(e.slot))):
        (u1, v1), (u2, v2) = (_square_of_vertex(v) for v in sorted(edge_vertices(n, e)))
        x0, x1 = min(u1, u2), max(u1, u2) + 1
        y0, y1 = min(v1, v2), max(v1, v2) + 1
        # SVG y grows downward: flip.
        rect = [(x0, -y0), (x1, -y0), (x1, -y1), (x0, -y1)]
        scene.shapes.append(_polygon(rect, _SLOT_CLASS[e.slot]))
    return scene.to_svg()


# -- region tilings -----------------------------------------------------------

def _signed_area(poly) -> float:
    s = 0.0
    for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1]):
        s += x1 * y2 - x2 * y1
    return s / 2


def _merge_cells(p1, p2):
    """Union polygon of two convex cells sharing exactly one edge."""
    shared = {v for v in p1 if v in p2}
    if len(shared) != 2:
        raise ValueError("cells do not share an edge")
    if _signed_area(p1) < 0:
        p1 = p1[::-1]
    if _signed_area(p2) < 0:
        p2 = p2[::-1]
    step = {}
    for poly in (p1, p2):
        for u, v in zip(poly, poly[1:] + poly[:1]):
            if {u, v} == shared:
                continue
            step[u] = v
    start = min(step)
    out = [start]
    cur = step[start]
    while cur != start:
        out.append(cur)
        cur = step[cur]
    return out


def _fortress_triangle(n: int, v):
    i, j, part = v
    x0, y0 = float(j - 1), float(i - 1)  # y grows downward; row 1 on top
    cx, cy = x0 + 0.5, y0 + 0.5
    corners = {
        "N": [(x0, y0), (x0 + 1, y0), (cx, cy)],
        "E": [(x0 + 1, y0), (x0 + 1, y0 + 1), (cx, cy)],
        "S": [(x0 + 1, y0 + 1), (x0, y0 + 1), (cx, cy)],
        "W": [(x0, y0 + 1), (x0, y0), (cx, cy)],
    }
    return corners[part]


def render_tiling(tiling: RegionTiling, emb: Embedding) -> str:
    """Region tilings: shaded square diabolos for fortresses, rhombi for
    hexagons, dominoes for grids."""
    spec = emb.spec
    if isinstance(spec, FortressSpec):
        return _render_fortress_tiling(tiling, emb)
    if isinstance(spec, HexagonSpec):
        return _render_hexagon_tiling(tiling, emb)
    return _render_grid_tiling(tiling, emb)


def _render_fortress_tiling(tiling: RegionTiling, emb: Embedding) -> str:
    n = emb.target.order
    scene = Scene(bounds=(0.0, 0.0, float(n), float(n)))
    for pair in sorted(tiling.edges, key=sorted):
        u, v = sorted(pair)
        poly = _merge_cells(_fortress_triangle(n, u), _fortress_triangle(n, v))
        square = u[:2] != v[:2]  # spans two squares: a square diabolo
        scene.shapes.append(_polygon(poly, "shaded-square" if square else "triangle"))
    return scene.to_svg()


def _render_grid_tiling(tiling: RegionTiling, emb: Embedding) -> str:
    m = emb.spec.m
    scene = Scene(bounds=(0.0, 0.0, float(m), float(m)))
    for pair in sorted(tiling.edges, key=sorted):
        (a1, b1), (a2, b2) = sorted(pair)
        x0, y0 = float(min(b1, b2) - 1), float(min(a1, a2) - 1)
        x1, y1 = float(max(b1, b2)), float(max(a1, a2))
        cls = "domino-e" if a1 == a2 else "domino-n"
        scene.shapes.append(_polygon([(x0, y0), (x1, y0), (x1, y1), (x0, y1)], cls))
    return scene.to_svg()


def _hexagon_tri_poly(strips_up: dict, v):
    k, mctr = v
    ys = 0.8660254037844386
    up = strips_up[v]
    y_top, y_bot = (k - 1) * ys, k * ys
    if up:
        return [((mctr - 1) / 2, y_bot), ((mctr + 1) / 2, y_bot), (mctr / 2, y_top)]
    return [((mctr - 1) / 2, y_top), ((mctr + 1) / 2, y_top), (mctr / 2, y_bot)]


def _render_hexagon_tiling(tiling: RegionTiling, emb: Embedding) -> str:
    from .regions import _hexagon_strips

    spec = emb.spec
    strips, _ = _hexagon_strips(spec.a, spec.b, spec.c)
    up_of = {(k, mctr): up for k, row in enumerate(strips, start=1) for mctr, up in row}
    xs = [mctr / 2 for (k, mctr) in up_of]
    ys = 0.8660254037844386
    scene = Scene(bounds=(min(xs) - 1, 0.0, max(xs) + 1, (spec.b + spec.c) * ys))
    classes = ("domino-n", "domino-e", "domino-w")
    for pair in sorted(tiling.edges, key=sorted):
        u, v = sorted(pair)
        poly = _merge_cells(_hexagon_tri_poly(up_of, u), _hexagon_tri_poly(up_of, v))
        if u[0] == v[0]:
            cls = classes[1] if up_of[u] else classes[2]
        else:
            cls = classes[0]
        scene.shapes.append(_polygon(poly, cls))
    return scene.to_svg()


# -- probability heat maps -----------------------------------------------------

def render_prob_grid(pg: ProbGrid) -> str:
    """Each edge drawn in diamond coordinates, stroke darkness = probability."""
    n = pg.order
    scene = Scene(bounds=(-n - 0.5, -n - 0.5, n + 0.5, n + 0.5))
    for e, value in pg.items():
        u, v = sorted(edge_vertices(n, e))
        level = float(value)
        gray = int(round(235 * (1.0 - level)))
        color = f"rgb({gray},{gray},{235 - gray})"
        scene.shapes.append(
            f'<line class="edge-prob" x1="{_f(u[0])}" y1="{_f(-u[1])}" '
            f'x2="{_f(v[0])}" y2="{_f(-v[1])}" stroke="{color}" '
            f'stroke-width="{_f(0.12 + 0.25 * level)}">'
            f"<title>({e.r},{e.c},{e.slot}) = {value}</title></line>"
        )
    return scene.to_svg()


# -- the octic curve ------------------------------------------------------------

OCTIC_TERMS = (
    (8, 0, 400), (0, 8, 400), (2, 6, 3400), (6, 2, 3400), (4, 4, 8025),
    (6, 0, 1000), (0, 6, 1000), (4, 2, -17250), (2, 4, -17250),
    (4, 0, -1431), (0, 4, -1431), (2, 2, 25812), (2, 0, -3402),
    (0, 2, -3402), (0, 0, 729),
)


def octic_value(x, y):
    """The degree-8 polynomial whose real components bound the frozen and
    tropical zones of large random fortress tilings (drawn, not proved)."""
    total = 0
    for a, b, coef in OCTIC_TERMS:
        total = total + coef * x**a * y**b
    return total


def octic_segments(resolution: int = 400, extent: float = 2.05):
    """Zero-crossing segments of the octic polynomial by marching squares."""
    step = 2 * extent / resolution
    vals = [
        [octic_value(-extent + i * step, -extent + j * step) for j in range(resolution + 1)]
        for i in range(resolution + 1)
    ]

    def cross(va, vb, pa, pb):
        f = va / (va - vb)
        return (pa[0] + f * (pb[0] - pa[0]), pa[1] + f * (pb[1] - pa[1]))

    segments = []
    for i in range(resolution):
        for j in range(resolution):
            x0, y0 = -extent + i * step, -extent + j * step
            corners = [(x0, y0), (x0 + step, y0), (x0 + step, y0 + step), (x0, y0 + step)]
            values = [vals[i][j], vals[i + 1][j], vals[i + 1][j + 1], vals[i][j + 1]]
            pts = []
            for k in range(4):
                va, vb = values[k], values[(k + 1) % 4]
                if (va > 0) != (vb > 0):
                    pts.append(cross(va, vb, corners[k], corners[(k + 1) % 4]))
            if len(pts) >= 2:
                segments.append((pts[0], pts[1]))
            if len(pts) == 4:
                segments.append((pts[2], pts[3]))
    return segments


def render_octic_overlay(svg: str, order: int, resolution: int = 400) -> str:
    """Draw both real components of the octic curve over a fortress
    tiling rendered by render_tiling (order-n fortress fills [0, n]^2,
    its corners at the frame's (0, +-2) and (+-2, 0))."""
    half = order / 2.0
    quarter = order / 4.0
    shapes = []
    for (xa, ya), (xb, yb) in octic_segments(resolution):
        pa = (half + (xa - ya) * quarter, half + (xa + ya) * quarter)
        pb = (half + (xb - yb) * quarter, half + (xb + yb) * quarter)
        shapes.append(_polyline([pa, pb], "octic"))
    return svg.replace("</svg>", "\n".join(shapes) + "\n</svg>")
