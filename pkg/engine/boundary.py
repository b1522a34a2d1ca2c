"""
The boundary at infinity RP^1 x RP^1 and achronal meridians.

A boundary point is a pair (xi, eta) of RP^1 angles: the image and the kernel
of a rank-one matrix. In the universal cover the same point sits on the
cylinder at angle alpha = xi + eta + pi/2 and time t = xi - eta, so
increasing xi is future directed.

Achronal meridians are closed curves whose lifted coordinates are both
nondecreasing. Two flavours exist: graphs of circle homeomorphisms and
polygons, mostly made of lightlike segments.
"""

import json
import logging
import math
import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .circle_maps import CircleMap
from .errors import NotMonotone, NotRankOne, OutOfChart
from .hyperbolic import (cayley, mobius, rp1_act, rp1_angle, rp1_vector,
                         rp1_wrap, three_point_map, disc_to_rp1)

log = logging.getLogger(__name__)

HORIZONTAL = "horizontal"
VERTICAL = "vertical"
SPACELIKE_ARC = "spacelike"
MIN_HOMEO_SAMPLES = 64


class CausalRelation(Enum):
    SPACELIKE = "spacelike"
    LIGHTLIKE = "lightlike"
    TIMELIKE = "timelike"


@dataclass(frozen=True)
class NoLimit:
    """Returned by boundary_limit when a sequence does not reach the boundary."""
    reason: str


@dataclass(frozen=True)
class BoundaryPoint:
    xi: float
    eta: float

    def __post_init__(self):
        object.__setattr__(self, "xi", float(self.xi) % math.pi)
        object.__setattr__(self, "eta", float(self.eta) % math.pi)

    def matrix(self) -> np.ndarray:
        """Rank-one representative u w^T with image u and kernel eta."""
        u = rp1_vector(self.xi)
        w = np.array([-math.sin(self.eta), math.cos(self.eta)])
        return np.outer(u, w)

    def null_vector(self) -> np.ndarray:
        alpha, t = boundary_to_cover(self)
        return 0.5 * np.array([math.cos(alpha), math.sin(alpha), math.cos(t), math.sin(t)])

    def transform(self, left: np.ndarray, right: np.ndarray) -> "BoundaryPoint":
        """Image under X -> A X B^-1, which moves image by A and kernel by B."""
        return BoundaryPoint(float(rp1_act(left, self.xi)), float(rp1_act(right, self.eta)))

    def distance(self, other: "BoundaryPoint") -> float:
        return max(float(abs(rp1_wrap(self.xi - other.xi))),
                   float(abs(rp1_wrap(self.eta - other.eta))))


def boundary_swap(p: BoundaryPoint) -> BoundaryPoint:
    """Image of a boundary point under the isometry X -> X^-1."""
    return BoundaryPoint(p.eta, p.xi)


def boundary_to_cover(p: BoundaryPoint) -> Tuple[float, float]:
    """Cylinder coordinates (alpha, t) of a boundary point, alpha in [0, 2 pi)."""
    alpha = (p.xi + p.eta + math.pi / 2) % (2 * math.pi)
    return alpha, p.xi - p.eta


def boundary_from_rank1(x: np.ndarray, tol: float = 1e-9) -> BoundaryPoint:
    """
    Boundary point of a rank-one 2x2 matrix.

    Raises:
        NotRankOne: if the second singular value is not negligible
    """
    u, s, vt = np.linalg.svd(np.asarray(x, dtype=float))
    if s[0] <= 0 or s[1] > tol * s[0]:
        raise NotRankOne("matrix does not have rank one",
                         residual=float(s[1] / s[0]) if s[0] > 0 else None)
    return BoundaryPoint(float(rp1_angle(u[:, 0])), float(rp1_angle(vt[1])))


def _disc_limit(points: Sequence[complex], tol: float) -> Optional[float]:
    discs = [complex(cayley(z)) for z in points]
    if len(discs) < 2:
        return None
    last, prev = discs[-1], discs[-2]
    if abs(last - prev) > tol or 1.0 - abs(last) > tol:
        return None
    return float(disc_to_rp1(math.atan2(last.imag, last.real)))


def boundary_limit(xs: Sequence[np.ndarray], tol: float = 1e-6) -> Union[BoundaryPoint, NoLimit]:
    """
    Limit on RP^1 x RP^1 of a sequence of SL(2,R) elements.

    The limit is read off the orbits X_n(i) and X_n^-1(i); both must settle
    on the boundary circle for the sequence to converge.
    """
    forward = [complex(mobius(np.asarray(x, dtype=float), 1j)) for x in xs]
    backward = [complex(mobius(np.linalg.inv(np.asarray(x, dtype=float)), 1j)) for x in xs]
    xi = _disc_limit(forward, tol)
    eta = _disc_limit(backward, tol)
    if xi is None or eta is None:
        log.warning("sequence of %d elements has no boundary limit", len(forward))
        return NoLimit("orbit does not converge to the boundary circle")
    return BoundaryPoint(xi, eta)


def causal_sign(p0: BoundaryPoint, p: BoundaryPoint, tol: float = 1e-12,
                chart: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None) -> CausalRelation:
    """
    Causal relation between nearby boundary points.

    Differences are measured in the product chart centred at p0, or in the
    given chart of two open intervals (one per factor).

    Raises:
        OutOfChart: if p is antipodal to p0 in a factor or leaves the chart
    """
    d1 = float(rp1_wrap(p.xi - p0.xi))
    d2 = float(rp1_wrap(p.eta - p0.eta))
    if chart is not None:
        for value, (lo, hi) in ((p0.xi + d1, chart[0]), (p0.eta + d2, chart[1])):
            shifted = lo + (value - lo) % math.pi
            if not lo < shifted < hi:
                raise OutOfChart("point leaves the chart")
    if max(abs(d1), abs(d2)) >= math.pi / 2 - tol:
        raise OutOfChart("points are antipodal in one factor")
    if abs(d1) <= tol or abs(d2) <= tol:
        return CausalRelation.LIGHTLIKE
    return CausalRelation.TIMELIKE if d1 * d2 < 0 else CausalRelation.SPACELIKE


# =============================================================================
# Achronal meridians
# =============================================================================

@dataclass
class ProperWitness:
    proper: bool
    oscillation: float
    centre: Optional[np.ndarray] = None
    phi0: Optional[np.ndarray] = None
    # sampled distance between the graphs of phi0 and phi, mod pi
    gap: Optional[float] = None


class AchronalMeridian:
    """
    Achronal closed curve in RP^1 x RP^1.

    Either a graph of a CircleMap (kind "homeo") or a polygon given by its
    lifted vertices (kind "polygon"). Height samples are
    computed once and cached; the cache is guarded so that concurrent readers
    see a single consistent set.
    """

    def __init__(self, kind: str, circle_map: Optional[CircleMap] = None,
                 vertices: Optional[np.ndarray] = None, label: str = ""):
        self.kind = kind
        self.circle_map = circle_map
        self.vertices = None if vertices is None else np.asarray(vertices, dtype=float)
        self.label = label
        self._cache: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"AchronalMeridian(kind={self.kind!r}, label={self.label!r})"

    # -- lifted curve -------------------------------------------------------

    def segment_types(self) -> List[str]:
        if self.kind != "polygon":
            return []
        closed = np.vstack([self.vertices, self.vertices[:1] + math.pi])
        types = []
        for a, b in zip(closed[:-1], closed[1:]):
            if abs(b[1] - a[1]) < 1e-12:
                types.append(HORIZONTAL)
            elif abs(b[0] - a[0]) < 1e-12:
                types.append(VERTICAL)
            else:
                types.append(SPACELIKE_ARC)
        return types

    def lifted_curve(self, samples: int) -> np.ndarray:
        """
        One turn of the lifted curve as an (m, 2) array of (xi, eta).

        Polygon vertices are always included so piecewise-linear data is exact.
        """
        if self.kind == "homeo":
            theta = np.arange(samples) * math.pi / samples
            return np.column_stack([theta, self.circle_map.lifted(theta)])
        closed = np.vstack([self.vertices, self.vertices[:1] + math.pi])
        lengths = np.abs(np.diff(closed, axis=0)).sum(axis=1)
        total = float(lengths.sum())
        rows = []
        for a, b, length in zip(closed[:-1], closed[1:], lengths):
            count = max(1, int(math.ceil(samples * length / total)))
            s = np.arange(count) / count
            rows.append(a + np.outer(s, b - a))
        return np.vstack(rows)

    def height_samples(self, samples: int = 256) -> Tuple[np.ndarray, np.ndarray]:
        """
        The lift as a graph t = f(alpha) over the cylinder.

        Returns:
            (alpha, t) covering [alpha0 - 2 pi, alpha0 + 4 pi) for periodic
            interpolation; f(0) is normalised into (-pi, pi]
        """
        with self._lock:
            cached = self._cache.get(samples)
            if cached is not None:
                return cached
            curve = self.lifted_curve(samples)
            alpha = curve[:, 0] + curve[:, 1] + math.pi / 2
            t = curve[:, 0] - curve[:, 1]
            alpha = alpha - 2 * math.pi * math.floor(alpha[0] / (2 * math.pi))
            ext_alpha = np.concatenate([alpha - 2 * math.pi, alpha, alpha + 2 * math.pi])
            ext_t = np.concatenate([t, t, t])
            f0 = float(np.interp(0.0, ext_alpha, ext_t))
            shift = 2 * math.pi * math.ceil((f0 - math.pi) / (2 * math.pi))
            result = (ext_alpha, ext_t - shift)
            self._cache[samples] = result
            return result

    def height(self, alpha, samples: int = 256) -> np.ndarray:
        ext_alpha, ext_t = self.height_samples(samples)
        return np.interp(np.mod(np.asarray(alpha, dtype=float), 2 * math.pi), ext_alpha, ext_t)

    def oscillation(self, samples: int = 256) -> float:
        _, t = self.height_samples(samples)
        return float(t.max() - t.min())

    def boundary_points(self, samples: int = 256) -> List[BoundaryPoint]:
        return [BoundaryPoint(a, b) for a, b in self.lifted_curve(samples)]

    def null_vectors(self, samples: int = 256) -> np.ndarray:
        """Null representatives (cos a, sin a, cos f, sin f) along one turn."""
        ext_alpha, ext_t = self.height_samples(samples)
        n = len(ext_alpha) // 3
        alpha, t = ext_alpha[n:2 * n], ext_t[n:2 * n]
        return np.column_stack([np.cos(alpha), np.sin(alpha), np.cos(t), np.sin(t)])

    # -- properness ---------------------------------------------------------

    def properness_witness(self, samples: int = 256, tol: float = 1e-9) -> ProperWitness:
        """
        Decide properness and return a point of the invisible domain.

        The centre is the cover point over the disc centre halfway between the
        extreme heights. For homeomorphism graphs the three-point map phi0
        sending (1, inf, 0) to (phi(0), phi(1), phi(inf)) is also returned;
        phi0^-1 is another interior point. Its graph must miss the meridian on
        the samples; otherwise it is dropped with a warning.
        """
        osc = self.oscillation(samples)
        if osc >= math.pi - tol:
            return ProperWitness(False, osc)
        _, t = self.height_samples(samples)
        mid = 0.5 * (float(t.max()) + float(t.min()))
        centre = np.array([[math.sin(mid), math.cos(mid)], [-math.cos(mid), math.sin(mid)]])
        phi0 = None
        if self.kind == "homeo":
            src = [math.pi / 4, 0.0, math.pi / 2]
            dst = [float(v) for v in self.circle_map(np.array([math.pi / 2, math.pi / 4, 0.0]))]
            phi0 = three_point_map(src, dst)
            gap = _graph_gap(phi0, self.circle_map, samples)
            if gap <= tol:
                log.warning("witness graph meets meridian %s (gap %.3e)", self.label, gap)
                phi0 = None
            return ProperWitness(True, osc, centre, phi0, gap)
        return ProperWitness(True, osc, centre)

    def is_proper(self, samples: int = 256) -> bool:
        return self.properness_witness(samples).proper

    # -- serialisation ------------------------------------------------------

    def to_dict(self) -> dict:
        if self.kind == "polygon":
            return {"kind": "polygon", "label": self.label, "vertices": self.vertices.tolist()}
        return {"kind": "homeo", "label": self.label,
                "theta": self.circle_map.theta.tolist(), "phi": self.circle_map.phi.tolist()}


def _graph_gap(matrix: np.ndarray, phi: CircleMap, samples: int) -> float:
    """Distance from the lifted difference of the two graphs to the multiples of pi."""
    theta = np.arange(samples) * math.pi / samples
    diff = np.unwrap(rp1_act(matrix, theta) - phi(theta), period=math.pi)
    lo, hi = float(diff.min()), float(diff.max())
    k = math.floor(lo / math.pi)
    if math.floor(hi / math.pi) != k:
        return 0.0
    return min(lo - k * math.pi, (k + 1) * math.pi - hi)


def meridian_from_homeo(phi: CircleMap, label: str = "homeo") -> AchronalMeridian:
    """
    Graph meridian of a sampled circle map.

    Raises:
        ValueError: with fewer than MIN_HOMEO_SAMPLES samples
        NotMonotone: if the lift is not increasing
    """
    if len(phi.theta) < MIN_HOMEO_SAMPLES:
        raise ValueError(f"homeomorphism meridians need at least {MIN_HOMEO_SAMPLES} samples, "
                         f"got {len(phi.theta)}")
    if np.any(np.diff(phi.phi) <= 0) or phi.phi[-1] >= phi.phi[0] + math.pi:
        raise NotMonotone("circle map is not orientation preserving")
    return AchronalMeridian("homeo", circle_map=phi, label=label)


def meridian_from_polygon(vertices: Sequence[Sequence[float]], label: str = "polygon",
                          tol: float = 1e-12) -> AchronalMeridian:
    """
    Polygon meridian from lifted vertices.

    Coordinates must be nondecreasing along every edge and the closing edge
    runs to the first vertex plus (pi, pi). Edges moving a single coordinate
    are lightlike segments; the others follow a spacelike arc.

    Raises:
        NotMonotone: on backward or degenerate edges
    """
    verts = np.asarray(vertices, dtype=float)
    closed = np.vstack([verts, verts[:1] + math.pi])
    for a, b in zip(closed[:-1], closed[1:]):
        d = b - a
        if np.any(d < -tol):
            raise NotMonotone("polygon edge runs backwards", residual=float(d.min()))
        if not np.any(d > tol):
            raise NotMonotone("polygon has a repeated vertex")
    return AchronalMeridian("polygon", vertices=verts, label=label)


def _lift_after(base: float, angle: float) -> float:
    """Smallest lift of angle strictly greater than base."""
    lifted = base + (angle - base) % math.pi
    return lifted if lifted > base else lifted + math.pi


def two_step_meridian(x: float, y: float, variant: int = 1) -> AchronalMeridian:
    """
    Two-step meridian through the boundary points (x, y) and (y, x).

    Variant 1 alternates horizontal then vertical edges, so its lift has minima
    at (x, y) and (y, x); variant 2 is the time reversal.
    """
    y = _lift_after(x, y)
    if y - x < 1e-12 or y - x > math.pi - 1e-12:
        raise NotMonotone("two-step meridian needs distinct endpoints")
    if variant == 1:
        verts = [(x, y), (y, y), (y, x + math.pi), (x + math.pi, x + math.pi)]
    elif variant == 2:
        verts = [(x, y), (x, x + math.pi), (y, x + math.pi), (y, y + math.pi)]
    else:
        raise ValueError(f"variant must be 1 or 2, got {variant}")
    return meridian_from_polygon(verts, label=f"two-step-{variant}")


def lightlike_plane_meridian(x: float, y: float) -> AchronalMeridian:
    """Boundary of the lightlike plane tangent at (x, y)."""
    return meridian_from_polygon([(x, y), (x + math.pi, y)], label="lightlike-plane")


def sawtooth_meridian(a: float) -> AchronalMeridian:
    """Polygon (0, 0) -> (a, 0) -> (a, a) -> (pi, pi), a single sawtooth at (a, 0)."""
    if not 0 < a < math.pi:
        raise NotMonotone("sawtooth parameter must lie in (0, pi)")
    return meridian_from_polygon([(0.0, 0.0), (a, 0.0), (a, a)], label="sawtooth")


def graph_meridian(matrix: np.ndarray, samples: int = 256) -> AchronalMeridian:
    """Graph of a Mobius map, the boundary of a spacelike plane."""
    return meridian_from_homeo(CircleMap.from_matrix(matrix, samples), label="plane")


# =============================================================================
# JSON input/output
# =============================================================================

def meridian_from_dict(payload: dict, samples: int = 256) -> AchronalMeridian:
    kind = payload.get("kind")
    if kind == "polygon":
        return meridian_from_polygon(payload["vertices"], label=payload.get("label", "polygon"))
    if kind == "two-step":
        return two_step_meridian(float(payload["x"]), float(payload["y"]),
                                 int(payload.get("variant", 1)))
    if kind == "homeo":
        phi = CircleMap.from_samples(payload["theta"], payload["phi"])
        return meridian_from_homeo(phi, label=payload.get("label", "homeo"))
    if kind == "mobius":
        return graph_meridian(np.asarray(payload["matrix"], dtype=float), samples)
    raise ValueError(f"unknown meridian kind: {kind!r}")


def load_meridian(path: Union[str, Path], samples: int = 256) -> AchronalMeridian:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Meridian file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        payload = json.load(f)
    log.debug("loaded meridian %s from %s", payload.get("kind"), path)
    return meridian_from_dict(payload, samples)


def save_meridian(meridian: AchronalMeridian, path: Union[str, Path]) -> Path:
    """Write `meridian.to_dict()` with full float precision."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(meridian.to_dict(), f, indent=2, sort_keys=True)
    log.debug("saved %s meridian to %s", meridian.kind, path)
    return path
