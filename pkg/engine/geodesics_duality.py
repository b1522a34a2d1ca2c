"""
Geodesics, totally geodesic planes and projective duality.

Every geodesic through x with unit speed v is t -> cosh(t) x + sinh(t) v,
cos(t) x + sin(t) v or x + t v depending on the sign of <v, v>. Timelike
geodesics are the sets {X : X(q) = p} and spacelike ones the sets
{X : X(l2) = l1} for oriented geodesics of the hyperbolic plane.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .boundary import BoundaryPoint, boundary_from_rank1
from .core_models import (MatPoint, QuadricPoint, TangentVector, TOL_ALG, inner,
                          matrix_of, q22, vector_of)
from .errors import DegenerateGeodesic, NotSpacelike, NotTangent
from .hyperbolic import (OrientedGeodesic, mobius, order_two_elliptic, rotation,
                         rp1_act, rp1_distance, standard_frame)

log = logging.getLogger(__name__)


class GeodesicKind(Enum):
    SPACELIKE = "spacelike"
    LIGHTLIKE = "lightlike"
    TIMELIKE = "timelike"


def classify(v, tol: float = TOL_ALG) -> GeodesicKind:
    q = q22(v)
    if abs(q) < tol:
        return GeodesicKind.LIGHTLIKE
    return GeodesicKind.SPACELIKE if q > 0 else GeodesicKind.TIMELIKE


def exp_point(x: QuadricPoint, v, t: float, kind: Optional[GeodesicKind] = None,
              tol: float = TOL_ALG) -> QuadricPoint:
    """
    Point at parameter t on the geodesic through x with initial velocity v.

    Args:
        x: base point
        v: TangentVector or 4-vector tangent at x (need not be unit)
        t: geodesic parameter
        kind: forces the branch; classified from <v, v> when omitted

    Raises:
        NotTangent: if v is not orthogonal to x
    """
    vec = v.v if isinstance(v, TangentVector) else np.asarray(v, dtype=float)
    if abs(inner(vec, x.x)) > tol * max(1.0, float(np.linalg.norm(vec))):
        raise NotTangent("velocity is not tangent at the base point", residual=abs(inner(vec, x.x)))
    kind = kind or classify(vec, tol)
    if kind is GeodesicKind.LIGHTLIKE:
        return QuadricPoint(x.x + t * vec)
    s = math.sqrt(abs(q22(vec)))
    if kind is GeodesicKind.SPACELIKE:
        return QuadricPoint(math.cosh(s * t) * x.x + math.sinh(s * t) * vec / s)
    return QuadricPoint(math.cos(s * t) * x.x + math.sin(s * t) * vec / s)


@dataclass(eq=False)
class Geodesic:
    """Geodesic through `base` with unit (or null) velocity `direction`."""
    kind: GeodesicKind
    base: QuadricPoint
    direction: np.ndarray
    source: Optional[Tuple] = None

    def point(self, t: float) -> QuadricPoint:
        return exp_point(self.base, self.direction, t, self.kind)

    def sample(self, ts) -> np.ndarray:
        return np.array([self.point(float(t)).x for t in ts])

    def endpoints(self) -> Tuple[BoundaryPoint, BoundaryPoint]:
        """Forward and backward ideal endpoints of a spacelike geodesic."""
        if self.kind is not GeodesicKind.SPACELIKE:
            raise NotSpacelike("only spacelike geodesics have two ideal endpoints")
        x, v = self.base.x, self.direction
        return (boundary_from_rank1(matrix_of(x + v)), boundary_from_rank1(matrix_of(x - v)))

    def hyperbolic_pair(self) -> Tuple[OrientedGeodesic, OrientedGeodesic]:
        """The oriented geodesics (l1, l2) with this geodesic = {X : X(l2) = l1}."""
        forward, backward = self.endpoints()
        l1 = OrientedGeodesic.from_rp1(backward.xi, forward.xi)
        l2 = OrientedGeodesic.from_rp1(forward.eta, backward.eta)
        return l1, l2

    def contains(self, x: QuadricPoint, tol: float = 1e-8) -> bool:
        """Membership: x lies in the span of base and direction."""
        basis = np.column_stack([self.base.x, self.direction])
        coeffs, *_ = np.linalg.lstsq(basis, x.x, rcond=None)
        return float(np.linalg.norm(basis @ coeffs - x.x)) < tol


def timelike_geodesic(p: complex, q: complex) -> Geodesic:
    """
    The timelike geodesic {X : X(q) = p}, a closed curve of length pi.

    Parametrised as A_p R_theta A_q^-1; the base point is the sample closest
    to +-identity in the Frobenius norm.
    """
    a_p = standard_frame(p)
    a_q_inv = np.linalg.inv(standard_frame(q))

    def distance(theta: float) -> float:
        m = a_p @ rotation(theta) @ a_q_inv
        return min(np.linalg.norm(m - np.eye(2)), np.linalg.norm(m + np.eye(2)))

    grid = np.linspace(0.0, math.pi, 257)[:-1]
    values = [distance(t) for t in grid]
    k = int(np.argmin(values))
    step = grid[1] - grid[0]
    res = minimize_scalar(distance, bounds=(grid[k] - step, grid[k] + step), method="bounded",
                          options={"xatol": 1e-12})
    theta0 = float(res.x)
    base = vector_of(a_p @ rotation(theta0) @ a_q_inv)
    direction = vector_of(a_p @ rotation(theta0 + math.pi / 2) @ a_q_inv)
    return Geodesic(GeodesicKind.TIMELIKE, QuadricPoint(base), direction, source=(p, q))


def spacelike_geodesic(l1: OrientedGeodesic, l2: OrientedGeodesic) -> Geodesic:
    """
    The spacelike geodesic {X : X(l2) = l1} = {G1 exp(sW) G2^-1}.

    Raises:
        DegenerateGeodesic: if either hyperbolic geodesic has coinciding endpoints
    """
    if l1.is_degenerate() or l2.is_degenerate():
        raise DegenerateGeodesic("hyperbolic geodesic has coinciding endpoints")
    g1 = l1.frame()
    g2_inv = np.linalg.inv(l2.frame())
    base = vector_of(g1 @ g2_inv)
    direction = vector_of(g1 @ np.diag([1.0, -1.0]) @ g2_inv)
    return Geodesic(GeodesicKind.SPACELIKE, QuadricPoint(base), direction, source=(l1, l2))


def geodesic_through(x: QuadricPoint, v) -> Geodesic:
    """Geodesic with initial velocity v, rescaled to unit speed when not null."""
    vec = v.v if isinstance(v, TangentVector) else np.asarray(v, dtype=float)
    kind = classify(vec)
    if kind is not GeodesicKind.LIGHTLIKE:
        vec = vec / math.sqrt(abs(q22(vec)))
    return Geodesic(kind, x, vec)


def in_timelike_geodesic(x: MatPoint, p: complex, q: complex, tol: float = 1e-8) -> bool:
    return abs(complex(mobius(x.m, q)) - p) < tol


def in_spacelike_geodesic(x: MatPoint, l1: OrientedGeodesic, l2: OrientedGeodesic,
                          tol: float = 1e-8) -> bool:
    """X maps the endpoints of l2 onto those of l1, preserving order."""
    start = rp1_act(x.m, l2.start_rp1)
    end = rp1_act(x.m, l2.end_rp1)
    return (float(rp1_distance(start, l1.start_rp1)) < tol
            and float(rp1_distance(end, l1.end_rp1)) < tol)


# =============================================================================
# Planes and duality
# =============================================================================

@dataclass(eq=False)
class Plane:
    """
    Totally geodesic plane: the orthogonal of a timelike vector (spacelike
    plane) or of a null vector (lightlike plane).
    """
    kind: str
    normal: np.ndarray

    def contains(self, x: QuadricPoint, tol: float = 1e-9) -> bool:
        return abs(inner(self.normal, x.x)) < tol * max(1.0, float(np.linalg.norm(x.x)))

    def sample(self, points: List[complex]) -> List[MatPoint]:
        """Points X J_p of a spacelike plane dual to X."""
        if self.kind != "spacelike":
            raise NotSpacelike("only spacelike planes are parametrised by the hyperbolic plane")
        x = matrix_of(self.normal)
        return [MatPoint(x @ order_two_elliptic(p)) for p in points]

    def boundary(self, angles) -> List[BoundaryPoint]:
        """Ideal boundary of a spacelike plane: the graph of X^-1."""
        x_inv = np.linalg.inv(matrix_of(self.normal))
        return [BoundaryPoint(a, float(rp1_act(x_inv, a))) for a in np.asarray(angles, dtype=float)]


def dual_plane(x: MatPoint) -> Plane:
    return Plane("spacelike", x.quadric().x)


def dual_point(plane: Plane) -> MatPoint:
    if plane.kind != "spacelike":
        raise NotSpacelike("a lightlike plane has no dual point")
    return MatPoint(matrix_of(plane.normal))


def lightlike_plane(p: BoundaryPoint) -> Plane:
    """Lightlike plane tangent to the boundary at p."""
    return Plane("lightlike", p.null_vector())


def dual_geodesic(g: Geodesic) -> Geodesic:
    """
    Dual of a spacelike geodesic: all points whose dual planes contain g.

    For g = {X : X(l2) = l1} the dual is {X : X(l2') = l1} with l2' the
    reversal of l2.

    Raises:
        NotSpacelike: for timelike or lightlike input
    """
    if g.kind is not GeodesicKind.SPACELIKE:
        raise NotSpacelike("duality is defined for spacelike geodesics")
    l1, l2 = g.hyperbolic_pair()
    return spacelike_geodesic(l1, l2.reversed())


def connecting_kind(x: QuadricPoint, y: QuadricPoint,
                    tol: float = TOL_ALG) -> Optional[GeodesicKind]:
    """
    Type of the geodesic joining two points of the quadric.

    <x, y> < -1 spacelike, = -1 lightlike, in (-1, 1) timelike; for
    <x, y> >= 1 no geodesic joins them and None is returned.
    """
    c = inner(x.x, y.x)
    if abs(c + 1.0) < tol:
        return GeodesicKind.LIGHTLIKE
    if c < -1.0:
        return GeodesicKind.SPACELIKE
    return GeodesicKind.TIMELIKE if c < 1.0 else None


def in_dirichlet_region(x: QuadricPoint, centre: QuadricPoint) -> bool:
    """x lies in the affine chart centred at `centre` where <x, centre> < 0."""
    return inner(x.x, centre.x) < 0


def geodesic_sample(g: Geodesic, ts) -> List[QuadricPoint]:
    return [g.point(float(t)) for t in ts]
