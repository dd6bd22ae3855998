"""SVG and CSV rendering of planar bodies. Floats appear only in the SVG."""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from pathlib import Path

from . import geometry
from .errors import ComputationError
from .geometry import QPolytope
from .surface import OkBody2D

SIZE = 400
MARGIN = 20


def _polytope(body) -> QPolytope:
    P = body.polytope if isinstance(body, OkBody2D) else body
    if not isinstance(P, QPolytope) or P.dim != 2:
        raise ComputationError("plots need a body in dimension 2")
    return P


def boundary(body) -> list[tuple[Fraction, Fraction]]:
    """Vertices in boundary order (counterclockwise for polygons)."""
    P = _polytope(body)
    return P.cyclic_vertices() if P.affine_dim == 2 else list(P.vertices)


def to_csv(body) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for v in boundary(body):
        w.writerow([str(x) for x in v])
    return buf.getvalue()


def from_csv(text: str) -> QPolytope:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    return geometry.hull([tuple(Fraction(x) for x in r) for r in rows])


def to_svg(body) -> str:
    pts = boundary(body)
    xs = [float(p[0]) for p in pts]
    ys = [float(p[1]) for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    k = (SIZE - 2 * MARGIN) / span

    def sx(x):
        return MARGIN + (x - min(xs)) * k

    def sy(y):
        return SIZE - MARGIN - (y - min(ys)) * k

    coords = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in zip(xs, ys))
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">'
    if len(pts) == 1:
        shape = f'<circle cx="{sx(xs[0]):.3f}" cy="{sy(ys[0]):.3f}" r="3" fill="black"/>'
    elif len(pts) == 2:
        shape = f'<polyline points="{coords}" fill="none" stroke="black" stroke-width="2"/>'
    else:
        shape = f'<polygon points="{coords}" fill="#9ecae1" stroke="black" stroke-width="1.5"/>'
    labels = "".join(
        f'<text x="{sx(x) + 4:.3f}" y="{sy(y) - 4:.3f}" font-size="11">({p[0]}, {p[1]})</text>'
        for p, x, y in zip(pts, xs, ys)
    )
    return f"{head}\n{shape}\n{labels}\n</svg>\n"


def emit_plot(body, path: str | Path) -> tuple[Path, Path]:
    """Write ``path`` (SVG) and the exact vertex CSV next to it."""
    path = Path(path)
    svg, table = to_svg(body), to_csv(body)
    path.write_text(svg)
    csv_path = path.with_suffix(".csv")
    csv_path.write_text(table)
    return path, csv_path
