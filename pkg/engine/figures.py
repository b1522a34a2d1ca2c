"""
Named SVG figures.

Geometry lives in projective space; every figure is drawn in an affine chart
x4 != 0 (optionally after moving a chosen point to the identity), projected
orthographically along the configured direction and fitted into a 1000 x 1000
viewBox. Projective lines stay straight in the chart, so geodesics and totally
geodesic planes render as lines and flat grids.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from .boundary import BoundaryPoint, meridian_from_homeo, two_step_meridian
from .circle_maps import CircleMap
from .config_loader import RunConfig
from .core_models import (GEN_U, MatPoint, QuadricPoint, UnivCoverPoint, cover_project,
                          klein_chart, matrix_of, vector_of)
from .domains import convex_hull_oracle, extremal_extensions
from .earthquake_lab import pleat_single
from .errors import OutOfChart, UnknownFigure
from .geodesics_duality import dual_plane, exp_point
from .hyperbolic import OrientedGeodesic, cayley_inverse, mobius, order_two_elliptic
from .mgh_holonomy import TetraChart, tetra_embed

log = logging.getLogger(__name__)

VIEW_SIZE = 1000
MARGIN = 50
CURVE_SAMPLES = 128
CHART_BOX = 4.0

GREY = "#b0b0b0"
BLUE = "#1f5fa8"
GREEN = "#2e8b57"
RED = "#c0392b"
ORANGE = "#d9822b"
BLACK = "#202020"


# =============================================================================
# Scene model
# =============================================================================

@dataclass
class Polyline:
    points: np.ndarray  # (n, 3) chart coordinates
    stroke: str = BLACK
    width: float = 1.0
    dashed: bool = False


@dataclass
class Scene:
    title: str
    frame: Optional[np.ndarray] = None
    polylines: List[Polyline] = field(default_factory=list)

    def add_curve(self, vectors: Sequence[np.ndarray], stroke: str = BLACK, width: float = 1.0,
                  dashed: bool = False) -> None:
        """Chart a curve of R^{2,2} vectors, split where it leaves the chart."""
        for piece in chart_pieces(vectors, self.frame):
            self.polylines.append(Polyline(piece, stroke, width, dashed))

    def add_segment(self, a: np.ndarray, b: np.ndarray, stroke: str = BLACK, width: float = 1.0,
                    dashed: bool = False) -> None:
        """Straight chart segment, already in chart coordinates."""
        s = np.linspace(0.0, 1.0, CURVE_SAMPLES)[:, None]
        self.polylines.append(Polyline((1 - s) * a + s * b, stroke, width, dashed))


def chart_pieces(vectors: Sequence[np.ndarray], frame: Optional[np.ndarray] = None,
                 box: float = CHART_BOX) -> List[np.ndarray]:
    """
    Chart coordinates of a sampled curve, cut into pieces that stay inside the
    chart box and do not cross the plane at infinity.
    """
    frame_inv = None if frame is None else np.linalg.inv(frame)
    pieces: List[np.ndarray] = []
    current: List[np.ndarray] = []
    last_sign = 0.0
    for v in vectors:
        v = np.asarray(v, dtype=float)
        if frame_inv is not None:
            v = vector_of(frame_inv @ matrix_of(v))
        try:
            p = klein_chart(v)
        except OutOfChart:
            p = None
        sign = math.copysign(1.0, v[3])
        if p is None or np.max(np.abs(p)) > box or (current and sign != last_sign):
            if len(current) > 1:
                pieces.append(np.array(current))
            current = [] if p is None or np.max(np.abs(p)) > box else [p]
        else:
            current.append(p)
        last_sign = sign
    if len(current) > 1:
        pieces.append(np.array(current))
    return pieces


# =============================================================================
# Projection and SVG output
# =============================================================================

@dataclass(frozen=True)
class Projection:
    """Orthographic projection along `direction`, with the chart x3 axis pointing up."""
    right: np.ndarray
    up: np.ndarray

    @classmethod
    def from_direction(cls, direction: Sequence[float]) -> "Projection":
        d = np.asarray(direction, dtype=float)
        norm = float(np.linalg.norm(d))
        if norm == 0:
            raise ValueError("projection direction must be nonzero")
        d = d / norm
        up = np.array([0.0, 0.0, 1.0])
        if abs(d @ up) > 0.99:
            up = np.array([0.0, 1.0, 0.0])
        up = up - (up @ d) * d
        up /= np.linalg.norm(up)
        return cls(np.cross(up, d), up)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        return np.column_stack([pts @ self.right, pts @ self.up])


def render_svg(scene: Scene, projection: Projection) -> str:
    """SVG 1.1 document for a scene, fitted into the viewBox."""
    flat = [projection(line.points) for line in scene.polylines]
    if flat:
        stacked = np.vstack(flat)
        lo, hi = stacked.min(axis=0), stacked.max(axis=0)
    else:
        lo, hi = np.zeros(2), np.ones(2)
    span = max(float((hi - lo).max()), 1e-9)
    scale = (VIEW_SIZE - 2 * MARGIN) / span
    centre = 0.5 * (lo + hi)

    rows = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (f'<svg version="1.1" width="{VIEW_SIZE}" height="{VIEW_SIZE}" '
         f'viewBox="0 0 {VIEW_SIZE} {VIEW_SIZE}" xmlns="http://www.w3.org/2000/svg">'),
        f"<title>{scene.title}</title>",
        f'<rect x="0" y="0" width="{VIEW_SIZE}" height="{VIEW_SIZE}" fill="white"/>',
    ]
    for line, pts in zip(scene.polylines, flat):
        sx = VIEW_SIZE / 2 + scale * (pts[:, 0] - centre[0])
        sy = VIEW_SIZE / 2 - scale * (pts[:, 1] - centre[1])
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(sx, sy))
        dash = ' stroke-dasharray="6,4"' if line.dashed else ""
        rows.append(f'<polyline points="{coords}" fill="none" stroke="{line.stroke}" '
                    f'stroke-width="{line.width:g}"{dash}/>')
    rows.append("</svg>")
    return "\n".join(rows) + "\n"


# =============================================================================
# Building blocks
# =============================================================================

def _param(lo: float, hi: float, n: int = CURVE_SAMPLES) -> np.ndarray:
    return np.linspace(lo, hi, n)


def _boundary_rulings(scene: Scene, count: int = 12, stroke: str = GREY, width: float = 0.6) -> None:
    """Left and right rulings of the boundary quadric: one coordinate fixed."""
    sweep = _param(0.0, math.pi, 2 * CURVE_SAMPLES)
    for fixed in np.arange(count) * math.pi / count:
        scene.add_curve([BoundaryPoint(fixed, e).null_vector() for e in sweep], stroke, width)
        scene.add_curve([BoundaryPoint(e, fixed).null_vector() for e in sweep], stroke, width, dashed=True)


def _plane_grid(scene: Scene, point_map: Callable[[complex], np.ndarray], stroke: str,
                width: float = 0.8, keep: Callable[[complex], bool] = lambda q: True,
                rings: int = 6, rays: int = 12) -> None:
    """Polar grid of the disc carried into a spacelike plane by q -> point_map(q)."""
    def trace(ws):
        vectors = []
        for w in ws:
            q = complex(cayley_inverse(w))
            vectors.append(point_map(q) if keep(q) else np.array([0.0, 0.0, 0.0, 0.0]))
        scene.add_curve(vectors, stroke, width)

    for r in np.arange(1, rings + 1) / (rings + 1):
        trace(r * np.exp(1j * _param(0.0, 2 * math.pi)))
    for a in np.arange(rays) * 2 * math.pi / rays:
        trace(_param(0.0, 0.97) * np.exp(1j * a))


def _figure_frame(t: float) -> np.ndarray:
    """exp(t U): the point at timelike distance t from the identity."""
    return math.cos(t) * np.eye(2) + math.sin(t) * GEN_U


# =============================================================================
# Figures
# =============================================================================

def figure_boundary_quadric(cfg: RunConfig) -> Scene:
    scene = Scene("boundary quadric with its two rulings")
    _boundary_rulings(scene, count=16, stroke=BLUE, width=0.9)
    return scene


def figure_lightcone(cfg: RunConfig) -> Scene:
    """Lightlike geodesics from the identity, inside the boundary quadric."""
    scene = Scene("light cone of the identity")
    _boundary_rulings(scene)
    origin = QuadricPoint(vector_of(np.eye(2)))
    ts = _param(0.0, 2.5)
    for phi in np.arange(24) * 2 * math.pi / 24:
        for sign in (1.0, -1.0):
            v = np.array([math.cos(phi), math.sin(phi), sign, 0.0])
            scene.add_curve([exp_point(origin, v, float(t)).x for t in ts], RED, 1.0)
    return scene


def figure_dual_planes(cfg: RunConfig) -> Scene:
    """Two points on a timelike geodesic and their dual spacelike planes."""
    scene = Scene("dual planes")
    _boundary_rulings(scene)
    for t, colour in ((1.0, BLUE), (math.pi - 1.0, GREEN)):
        x = MatPoint(_figure_frame(t))
        centre = matrix_of(dual_plane(x).normal)
        _plane_grid(scene, lambda q, c=centre: vector_of(c @ order_two_elliptic(q)), colour)
        p = klein_chart(x.quadric().x)
        for axis in range(3):
            e = np.zeros(3)
            e[axis] = 0.08
            scene.add_segment(p - e, p + e, colour, 2.0)
    return scene


def _wobble_meridian(samples: int):
    return meridian_from_homeo(
        CircleMap.from_function(lambda a: a + 0.25 * np.sin(2 * a), samples), label="wobble")


def figure_invisible_domain(cfg: RunConfig) -> Scene:
    """A smooth meridian and the graphs of f_- and f_+ bounding its invisible domain."""
    meridian = _wobble_meridian(cfg.samples)
    witness = meridian.properness_witness(cfg.samples)
    scene = Scene("invisible domain", frame=witness.centre)
    _boundary_rulings(scene)
    nulls = meridian.null_vectors(2 * CURVE_SAMPLES)
    scene.add_curve(np.vstack([nulls, nulls[:1]]), BLACK, 2.0)

    def trace(disc_points: np.ndarray, colour: str) -> None:
        f_minus, f_plus = extremal_extensions(meridian, disc_points, cfg.samples, cfg.workers)
        for heights, stroke in ((f_minus, colour), (f_plus, colour)):
            vectors = [cover_project(UnivCoverPoint.from_disc(tuple(w), float(t))).x
                       for w, t in zip(disc_points, heights)]
            scene.add_curve(vectors, stroke, 0.9)

    for r in (0.3, 0.6, 0.9):
        angles = _param(0.0, 2 * math.pi)
        trace(np.column_stack([r * np.cos(angles), r * np.sin(angles)]), ORANGE)
    for a in np.arange(8) * math.pi / 4:
        radii = _param(0.0, 0.98)
        trace(np.column_stack([radii * math.cos(a), radii * math.sin(a)]), BLUE)
    return scene


def figure_light_tetra(cfg: RunConfig) -> Scene:
    """The lightlike tetrahedron: four lightlike edges on the boundary and two spacelike diagonals."""
    meridian = two_step_meridian(math.pi / 2, 0.0)
    hull = convex_hull_oracle(meridian, cfg.hull_samples)
    scene = Scene("lightlike tetrahedron", frame=hull.centre)
    _boundary_rulings(scene)
    corners = [hull.chart(BoundaryPoint(*v).null_vector()) for v in meridian.vertices]
    for k in range(4):
        scene.add_segment(corners[k], corners[(k + 1) % 4], BLACK, 2.0)
    scene.add_segment(corners[0], corners[2], RED, 2.0, dashed=True)
    scene.add_segment(corners[1], corners[3], RED, 2.0, dashed=True)
    return scene


def figure_tetra_foliation(cfg: RunConfig) -> Scene:
    """Level sets z = c of the tetrahedron chart; the maximal slice z = pi/4 in red."""
    chart = TetraChart()
    scene = Scene("tetrahedron foliation")
    lines = _param(-1.5, 1.5, 7)
    sweep = _param(-1.5, 1.5)
    for z in (math.pi / 8, math.pi / 4, 3 * math.pi / 8):
        colour, width = (RED, 1.6) if z == math.pi / 4 else (BLUE, 0.7)
        for c in lines:
            scene.add_curve([tetra_embed(chart, float(c), float(s), z).x for s in sweep], colour, width)
            scene.add_curve([tetra_embed(chart, float(s), float(c), z).x for s in sweep], colour, width)
    return scene


def figure_pleated(cfg: RunConfig) -> Scene:
    """The plane of the identity bent along a leaf: S1 right of it, sigma0 S2 left of it."""
    leaf = OrientedGeodesic(-0.6, 0.6 + math.pi)
    surface = pleat_single(leaf, 0.6)
    scene = Scene("pleated surface", frame=_figure_frame(math.pi / 4))
    _plane_grid(scene, lambda q: vector_of(order_two_elliptic(q)), BLUE,
                keep=lambda q: leaf.side(q) > 0)
    _plane_grid(scene, lambda q: vector_of(surface.sigma0 @ order_two_elliptic(q)), GREEN,
                keep=lambda q: leaf.side(q) < 0)
    frame = leaf.frame()
    bend = [vector_of(order_two_elliptic(complex(mobius(frame, 1j * math.exp(s)))))
            for s in _param(-3.0, 3.0)]
    scene.add_curve(bend, RED, 2.0)
    return scene


FIGURES: Dict[str, Callable[[RunConfig], Scene]] = {
    "boundary-quadric": figure_boundary_quadric,
    "lightcone": figure_lightcone,
    "dual-planes": figure_dual_planes,
    "invisible-domain": figure_invisible_domain,
    "light-tetra": figure_light_tetra,
    "tetra-foliation": figure_tetra_foliation,
    "pleated": figure_pleated,
}


def build_figure(name: str, cfg: RunConfig) -> Scene:
    """
    Raises:
        UnknownFigure: for names outside FIGURES
    """
    builder = FIGURES.get(name)
    if builder is None:
        raise UnknownFigure(f"unknown figure '{name}' (choose from {', '.join(FIGURES)})")
    scene = builder(cfg)
    log.debug("figure %s: %d polylines", name, len(scene.polylines))
    return scene


def write_figure(name: str, cfg: RunConfig, path: Union[str, Path, None] = None) -> Path:
    """Render a named figure to `path` (default <out_dir>/<name>.svg)."""
    scene = build_figure(name, cfg)
    svg_path = Path(path) if path is not None else Path(cfg.out_dir) / f"{name}.svg"
    svg_path.parent.mkdir(parents=True, exist_ok=True)
    svg_path.write_text(render_svg(scene, Projection.from_direction(cfg.projection)), encoding="utf-8")
    log.info("wrote figure %s to %s", name, svg_path)
    return svg_path
