"""
Domains bounded by an achronal meridian.

For a meridian lifted as a graph t = f(alpha) on the boundary cylinder:

* the extremal extensions f_-(y) = sup(f - d) and f_+(y) = inf(f + d) over the
  hemisphere model bound the invisible domain Omega
* the convex hull C of the meridian, computed in an affine chart centred at a
  point of Omega, is contained in Omega
* the width of C is the largest timelike distance between two of its points

All distances use the hemisphere model of the disc, where d is the spherical
angle between unit vectors.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull

from .boundary import (HORIZONTAL, VERTICAL, AchronalMeridian, BoundaryPoint)
from .core_models import ETA, QuadricPoint, inner, matrix_of, vector_of
from .errors import DegenerateHull, Inconclusive, OutOfChart
from .hyperbolic import rp1_act, rp1_vector

log = logging.getLogger(__name__)

LIGHTLIKE_FACET_TOL = 1e-6


# =============================================================================
# Extremal extensions
# =============================================================================

def disc_grid(n: int) -> np.ndarray:
    """Points of an n x n Cartesian grid on [-1, 1]^2 lying in the closed disc."""
    ticks = np.linspace(-1.0, 1.0, n)
    xx, yy = np.meshgrid(ticks, ticks, indexing="xy")
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    return pts[np.einsum("ij,ij->i", pts, pts) <= 1.0 + 1e-12]


def hemisphere(points: np.ndarray) -> np.ndarray:
    """Poincare disc to the upper unit hemisphere, (2x, 1 - r^2) / (1 + r^2)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    r2 = np.einsum("ij,ij->i", pts, pts)
    return np.column_stack([2 * pts, 1 - r2]) / (1 + r2)[:, None]


def _extensions_chunk(hemi: np.ndarray, equator: np.ndarray, heights: np.ndarray):
    cos = np.clip(hemi @ equator.T, -1.0, 1.0)
    d = np.arccos(cos)
    return (heights[None, :] - d).max(axis=1), (heights[None, :] + d).min(axis=1)


def extremal_extensions(meridian: AchronalMeridian, points: np.ndarray, samples: int = 256,
                        workers: int = 1, chunk: int = 2048) -> Tuple[np.ndarray, np.ndarray]:
    """
    Evaluate f_- and f_+ at disc points.

    Args:
        meridian: proper achronal meridian
        points: (N, 2) points of the closed unit disc
        samples: resolution of the meridian
        workers: threads used over chunks of points; results do not depend on it

    Returns:
        (f_minus, f_plus) arrays of length N
    """
    ext_alpha, ext_t = meridian.height_samples(samples)
    n = len(ext_alpha) // 3
    alpha, heights = ext_alpha[n:2 * n], ext_t[n:2 * n]
    equator = np.column_stack([np.cos(alpha), np.sin(alpha), np.zeros_like(alpha)])
    hemi = hemisphere(points)
    blocks = [hemi[i:i + chunk] for i in range(0, len(hemi), chunk)]
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _extensions_chunk(b, equator, heights), blocks))
    else:
        parts = [_extensions_chunk(b, equator, heights) for b in blocks]
    f_minus = np.concatenate([p[0] for p in parts])
    f_plus = np.concatenate([p[1] for p in parts])
    return f_minus, f_plus


def cover_coordinates(x: QuadricPoint) -> List[Tuple[np.ndarray, float]]:
    """Disc point and time of both cover lifts of +-x (modulo 2 pi in time)."""
    out = []
    for sign in (1.0, -1.0):
        x1, x2, x3, x4 = sign * x.x
        y3 = math.hypot(x3, x4)
        out.append((np.array([x1, x2]) / (1 + y3), math.atan2(x4, x3)))
    return out


def lift_membership(x: QuadricPoint, meridian: AchronalMeridian, samples: int = 256) -> bool:
    """x is in Omega iff some lift of x lies strictly between f_- and f_+."""
    for disc, t in cover_coordinates(x):
        f_minus, f_plus = extremal_extensions(meridian, disc[None, :], samples)
        lo, hi = float(f_minus[0]), float(f_plus[0])
        k_lo = math.ceil((lo - t) / (2 * math.pi))
        for k in range(k_lo - 1, k_lo + 2):
            if lo < t + 2 * math.pi * k < hi:
                return True
    return False


# =============================================================================
# Invisible domain
# =============================================================================

def dual_plane_disjoint(x: QuadricPoint, meridian: AchronalMeridian, samples: int = 256,
                        tol: float = 1e-10) -> bool:
    """
    Whether the dual plane of x misses the meridian.

    The pairing <x, n> along the closed null lift has no zero exactly when the
    plane misses the curve.

    Raises:
        Inconclusive: if the pairing comes within tol of zero without changing sign
    """
    values = meridian.null_vectors(samples) @ (ETA @ x.x)
    if values.min() < 0 < values.max():
        return False
    if np.abs(values).min() < tol:
        raise Inconclusive("dual plane is tangent to the meridian", residual=float(np.abs(values).min()))
    return True


def _displacement(x: np.ndarray, meridian: AchronalMeridian, samples: int) -> np.ndarray:
    theta = np.arange(samples) * math.pi / samples
    phi_vals = meridian.circle_map(theta)
    moved = rp1_act(x, phi_vals)
    steps = np.mod(np.diff(np.append(moved, moved[0] + 0.0)), math.pi)
    lifted = moved[0] + np.concatenate([[0.0], np.cumsum(steps[:-1])])
    return lifted - theta


def in_invisible_domain(x: QuadricPoint, meridian: AchronalMeridian, samples: int = 256,
                        tol: float = 1e-10) -> bool:
    """
    Membership in the invisible domain.

    For graphs of homeomorphisms: x is invisible iff x o phi has no fixed
    point, which is read from the range of the lifted displacement. Polygon
    meridians use the dual plane test.

    Raises:
        Inconclusive: when a near-zero displacement does not settle the answer
    """
    if meridian.kind != "homeo":
        return dual_plane_disjoint(x, meridian, samples, tol)
    disp = _displacement(matrix_of(x.x), meridian, samples)
    lo, hi = float(disp.min()), float(disp.max())
    for k in range(math.floor(lo / math.pi) - 1, math.ceil(hi / math.pi) + 2):
        shifted = disp - k * math.pi
        if shifted.min() < 0 < shifted.max():
            return False
        if np.all(np.abs(shifted) < tol):
            return False
        if np.abs(shifted).min() < tol:
            raise Inconclusive("fixed point is tangential", residual=float(np.abs(shifted).min()))
    return True


# =============================================================================
# Convex hull
# =============================================================================

@dataclass
class SupportPlane:
    equation: np.ndarray
    dual: np.ndarray
    kind: str


@dataclass(eq=False)
class HullOracle:
    """
    Convex hull of a meridian in the chart centred at a point of Omega.

    Points are moved by X -> centre^-1 X and charted as x123 / x4. A flat hull
    (meridian bounding a spacelike plane) is flagged `degenerate` and tested
    against its plane and planar hull instead.
    """
    centre: np.ndarray
    points: np.ndarray
    degenerate: bool
    equations: np.ndarray = field(default_factory=lambda: np.zeros((0, 4)))
    simplices: np.ndarray = field(default_factory=lambda: np.zeros((0, 3), dtype=int))
    plane: Optional[np.ndarray] = None
    planar_equations: Optional[np.ndarray] = None
    planar_basis: Optional[np.ndarray] = None

    def chart(self, x) -> np.ndarray:
        moved = vector_of(np.linalg.solve(self.centre, matrix_of(np.asarray(x, dtype=float))))
        if abs(moved[3]) < 1e-12:
            raise OutOfChart("point is at infinity in the hull chart")
        return moved[:3] / moved[3]

    def unchart(self, p: np.ndarray) -> np.ndarray:
        """Lift a chart point back to R^{2,2} (not normalised)."""
        v = np.append(np.asarray(p, dtype=float), 1.0)
        return vector_of(self.centre @ matrix_of(v))

    def contains(self, x, tol: float = 1e-9) -> bool:
        p = self.chart(x)
        if not self.degenerate:
            return bool(np.all(self.equations[:, :3] @ p + self.equations[:, 3] <= tol))
        normal, offset = self.plane[:3], self.plane[3]
        if abs(normal @ p + offset) > tol:
            return False
        q = self.planar_basis @ p
        return bool(np.all(self.planar_equations[:, :2] @ q + self.planar_equations[:, 2] <= tol))

    def signed_distance(self, x) -> float:
        p = self.chart(x)
        if self.degenerate:
            return float(abs(self.plane[:3] @ p + self.plane[3]))
        return float(np.max(self.equations[:, :3] @ p + self.equations[:, 3]))

    def facets(self) -> List[SupportPlane]:
        """Merged supporting planes with the causal type of their dual vector."""
        out = []
        for eq in self.equations:
            a, b = eq[:3], eq[3]
            dual = np.array([a[0], a[1], -a[2], -b])
            ratio = inner(dual, dual) / float(dual @ dual)
            if abs(ratio) < LIGHTLIKE_FACET_TOL:
                kind = "lightlike"
            else:
                kind = "spacelike" if ratio < 0 else "timelike"
            out.append(SupportPlane(eq, dual, kind))
        return out


def _merge_equations(equations: np.ndarray, tol: float = 1e-7) -> np.ndarray:
    eqs = equations / np.linalg.norm(equations[:, :3], axis=1)[:, None]
    merged: List[np.ndarray] = []
    for eq in eqs:
        if not any(np.linalg.norm(eq - m) < tol for m in merged):
            merged.append(eq)
    return np.array(merged)


def convex_hull_oracle(meridian: AchronalMeridian, samples: int = 96) -> HullOracle:
    """
    Hull of `samples` meridian points in the chart of a properness witness.

    Raises:
        DegenerateHull: if the meridian is not proper
    """
    witness = meridian.properness_witness()
    if not witness.proper:
        log.warning("meridian %s is not proper (oscillation %.6g)", meridian.label, witness.oscillation)
        raise DegenerateHull("meridian bounds a lightlike plane", residual=witness.oscillation)
    centre = witness.centre
    nulls = np.array([p.null_vector() for p in meridian.boundary_points(samples)])
    centre_inv = np.linalg.inv(centre)
    moved = np.array([vector_of(centre_inv @ matrix_of(n)) for n in nulls])
    pts = moved[:, :3] / moved[:, 3:4]

    centred = pts - pts.mean(axis=0)
    _, sing, vt = np.linalg.svd(centred, full_matrices=False)
    if sing[-1] < 1e-9 * sing[0]:
        normal = vt[2]
        plane = np.append(normal, -normal @ pts.mean(axis=0))
        basis = vt[:2]
        flat = ConvexHull(pts @ basis.T)
        log.warning("meridian %s has a flat hull", meridian.label)
        return HullOracle(centre, pts, True, plane=plane,
                          planar_equations=flat.equations, planar_basis=basis)

    hull = ConvexHull(pts)
    equations = _merge_equations(hull.equations)
    log.debug("hull of %s: %d simplices, %d facets", meridian.label, len(hull.simplices), len(equations))
    return HullOracle(centre, pts, False, equations=equations, simplices=hull.simplices)


def facet_count(meridian: AchronalMeridian, samples: int = 96) -> int:
    hull = convex_hull_oracle(meridian, samples)
    return 0 if hull.degenerate else len(hull.equations)


# =============================================================================
# Width
# =============================================================================

def _normalised(hull: HullOracle, chart_points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Unit timelike lifts (x4 > 0 in the moved frame) and a mask of valid points."""
    v = np.column_stack([chart_points, np.ones(len(chart_points))])
    q = np.einsum("ij,j,ij->i", v, np.diag(ETA), v)
    valid = q < -1e-14
    out = np.zeros_like(v)
    out[valid] = v[valid] / np.sqrt(-q[valid])[:, None]
    return out, valid


def _pair_inner(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ ETA @ b.T


def width_estimate(meridian: AchronalMeridian, samples: int = 96, starts: int = 64) -> float:
    """
    Width of the convex hull: sup of the timelike distance arccos(-<P, Q>).

    Candidates are edge midpoints and centroids of the hull triangles; the
    best pairs are refined by Nelder-Mead over barycentric coordinates.
    Distances are computed in the moved frame, where the form is unchanged.
    """
    hull = convex_hull_oracle(meridian, samples)
    if hull.degenerate:
        return 0.0
    tris = hull.points[hull.simplices]
    cands = [tris.mean(axis=1)]
    owners = [np.arange(len(tris))]
    weights = [np.tile([1 / 3, 1 / 3], (len(tris), 1))]
    for (i, j), w in (((0, 1), (0.5, 0.5)), ((1, 2), (0.0, 0.5)), ((0, 2), (0.5, 0.0))):
        cands.append(0.5 * (tris[:, i] + tris[:, j]))
        owners.append(np.arange(len(tris)))
        weights.append(np.tile(w, (len(tris), 1)))
    points = np.vstack(cands)
    owner = np.concatenate(owners)
    bary = np.vstack(weights)

    unit, valid = _normalised(hull, points)
    idx = np.flatnonzero(valid)
    gram = _pair_inner(unit[idx], unit[idx])
    gram[gram > 1.0] = -np.inf
    np.fill_diagonal(gram, -np.inf)
    best = float(gram.max())
    if not np.isfinite(best) or best < -1.0:
        return 0.0

    flat = np.argsort(gram, axis=None)[::-1][:starts]
    rows, cols = np.unravel_index(flat, gram.shape)

    def point_at(tri: int, w: np.ndarray) -> np.ndarray:
        a, b = np.clip(w, 0.0, 1.0)
        if a + b > 1.0:
            a, b = a / (a + b), b / (a + b)
        t = tris[tri]
        return a * t[0] + b * t[1] + (1 - a - b) * t[2]

    def objective(params, ti, tj):
        pair = np.array([point_at(ti, params[:2]), point_at(tj, params[2:])])
        u, ok = _normalised(hull, pair)
        if not ok.all():
            return 2.0
        g = float(_pair_inner(u[:1], u[1:])[0, 0])
        return -g if g <= 1.0 else 2.0

    for r, c in zip(rows, cols):
        if not np.isfinite(gram[r, c]):
            continue
        i, j = idx[r], idx[c]
        x0 = np.concatenate([bary[i], bary[j]])
        res = minimize(objective, x0, args=(owner[i], owner[j]), method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 400})
        if res.fun <= 1.0:
            best = max(best, -float(res.fun))
    return float(np.arccos(np.clip(-best, -1.0, 1.0)))


# =============================================================================
# Sawteeth
# =============================================================================

def detect_sawteeth(meridian: AchronalMeridian) -> List[BoundaryPoint]:
    """Junctions of a maximal horizontal segment with a maximal vertical one."""
    if meridian.kind != "polygon":
        return []
    types = meridian.segment_types()
    verts = meridian.vertices
    out = []
    for k, kind in enumerate(types):
        before = types[k - 1]
        if {before, kind} == {HORIZONTAL, VERTICAL}:
            out.append(BoundaryPoint(verts[k][0], verts[k][1]))
    return out


# =============================================================================
# Report
# =============================================================================

@dataclass
class DomainReport:
    label: str
    proper: bool
    oscillation: float
    grid: int
    points: np.ndarray
    f_minus: np.ndarray
    f_plus: np.ndarray
    width: float
    facets: Dict[int, int]
    facet_kinds: List[str]
    sawteeth: List[BoundaryPoint]
    hull_samples: np.ndarray

    def to_dict(self) -> dict:
        return {
            "meridian": self.label,
            "proper": self.proper,
            "oscillation": self.oscillation,
            "grid": self.grid,
            "points": self.points,
            "fMinus": self.f_minus,
            "fPlus": self.f_plus,
            "width": self.width,
            "facetCounts": {str(k): v for k, v in self.facets.items()},
            "facetKinds": self.facet_kinds,
            "sawteeth": [[p.xi, p.eta] for p in self.sawteeth],
            "hullSamples": self.hull_samples,
        }


def build_domain_report(meridian: AchronalMeridian, grid: int = 33, samples: int = 256,
                        hull_samples: int = 96, starts: int = 64, workers: int = 1) -> DomainReport:
    """Everything the `domain` command reports about one meridian."""
    witness = meridian.properness_witness(samples)
    if not witness.proper:
        raise DegenerateHull("meridian bounds a lightlike plane", residual=witness.oscillation)
    points = disc_grid(grid)
    f_minus, f_plus = extremal_extensions(meridian, points, samples, workers)
    hull = convex_hull_oracle(meridian, hull_samples)
    counts = {hull_samples: facet_count(meridian, hull_samples),
              hull_samples // 2: facet_count(meridian, hull_samples // 2)}
    kinds = [f.kind for f in hull.facets()] if not hull.degenerate else []
    vertices = hull.points if hull.degenerate else hull.points[np.unique(hull.simplices)]
    quadric = np.array([hull.unchart(p) for p in vertices])
    log.info("domain report for %s: %d grid points", meridian.label, len(points))
    return DomainReport(
        label=meridian.label,
        proper=True,
        oscillation=witness.oscillation,
        grid=grid,
        points=points,
        f_minus=f_minus,
        f_plus=f_plus,
        width=width_estimate(meridian, hull_samples, starts),
        facets=counts,
        facet_kinds=kinds,
        sawteeth=detect_sawteeth(meridian),
        hull_samples=quadric,
    )
