"""
Models of anti-de Sitter 3-space.

Three coordinate systems are kept mutually consistent:

* the quadric  {x in R^{2,2} : x1^2 + x2^2 - x3^2 - x4^2 = -1}
* the matrix model SL(2,R), through the linear isometry
  x -> [[x4 + x1, x3 + x2], [x2 - x3, x4 - x1]]
  whose determinant is minus the quadratic form
* the universal cover H^2 x R with the warped metric g_H - y3^2 dt^2

The projective model identifies x with -x; sign-canonical matrices (first
nonzero entry positive) represent points of PSL(2,R).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import DegeneratePlane, NotOnQuadric, NotTangent, OutOfChart
from .hyperbolic import ROT_GEN

log = logging.getLogger(__name__)

TOL_ALG = 1e-9
TOL_FD = 1e-5
FD_STEP = 1e-4
DEGENERATE_TOL = 1e-8

ETA = np.diag([1.0, 1.0, -1.0, -1.0])
IDENTITY = np.eye(2)
GEN_U = ROT_GEN
GEN_V = np.array([[0.0, 1.0], [1.0, 0.0]])
GEN_W = np.array([[1.0, 0.0], [0.0, -1.0]])


# =============================================================================
# Linear algebra of R^{2,2}
# =============================================================================

def q22(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(x[0] ** 2 + x[1] ** 2 - x[2] ** 2 - x[3] ** 2)


def inner(v, w) -> float:
    """The bilinear form of signature (2,2)."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    return float(v[0] * w[0] + v[1] * w[1] - v[2] * w[2] - v[3] * w[3])


def ads_inner(at, v, w) -> float:
    """Metric at a point; the quadric metric is the restriction of the ambient form."""
    return inner(v, w)


def matrix_of(x) -> np.ndarray:
    """Linear isometry R^{2,2} -> M(2,R)."""
    x1, x2, x3, x4 = (float(c) for c in np.asarray(x, dtype=float))
    return np.array([[x4 + x1, x3 + x2], [x2 - x3, x4 - x1]])


def vector_of(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    return np.array([
        (m[0, 0] - m[1, 1]) / 2,
        (m[0, 1] + m[1, 0]) / 2,
        (m[0, 1] - m[1, 0]) / 2,
        (m[0, 0] + m[1, 1]) / 2,
    ])


def mat_inner(a, b) -> float:
    """<A, B> = (tr(AB) - tr A tr B) / 2, so that <X, X> = -det X."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return 0.5 * (float(np.trace(a @ b)) - float(np.trace(a)) * float(np.trace(b)))


def canonical_sign(m) -> np.ndarray:
    """Representative of +-m whose first nonzero entry (row-major) is positive."""
    m = np.array(m, dtype=float)
    for value in m.flat:
        if abs(value) > 1e-300:
            return m if value > 0 else -m
    return m


def cross(at, v, w) -> np.ndarray:
    """
    Cross product of tangent vectors at a point, as 4-vectors.

    At the identity V x W = -[V, W] / 2; elsewhere it is right-translated.
    """
    x = matrix_of(at)
    x_inv = np.linalg.inv(x)
    a = matrix_of(v) @ x_inv
    b = matrix_of(w) @ x_inv
    return vector_of(-0.5 * (a @ b - b @ a) @ x)


def future_generator(at) -> np.ndarray:
    """The future timelike field X -> U X, evaluated at a quadric point."""
    return vector_of(GEN_U @ matrix_of(at))


def is_future(at, v) -> bool:
    return inner(v, future_generator(at)) < 0


def tangent_projection(at, v) -> np.ndarray:
    x = np.asarray(at, dtype=float)
    v = np.asarray(v, dtype=float)
    return v + inner(v, x) * x


def klein_chart(x) -> np.ndarray:
    """Affine chart {x4 != 0} of projective space, coordinates x123 / x4."""
    x = np.asarray(x, dtype=float)
    if abs(x[3]) < 1e-12:
        raise OutOfChart("point lies on the plane at infinity x4 = 0")
    return x[:3] / x[3]


# =============================================================================
# Points, tangents and isometries
# =============================================================================

@dataclass(frozen=True, eq=False)
class QuadricPoint:
    """Point of the quadric model (a 4-vector with q22 = -1)."""
    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float).reshape(4))

    @classmethod
    def normalized(cls, x) -> "QuadricPoint":
        """Rescale a vector of negative square onto the quadric."""
        q = q22(x)
        if q >= 0:
            raise NotOnQuadric("vector is not timelike", residual=q)
        return cls(np.asarray(x, dtype=float) / math.sqrt(-q))

    def residual(self) -> float:
        return abs(q22(self.x) + 1.0)

    def matrix(self) -> np.ndarray:
        return matrix_of(self.x)

    def same_point(self, other: "QuadricPoint", tol: float = 1e-8) -> bool:
        """Equality in the projective model."""
        return (np.linalg.norm(self.x - other.x) < tol
                or np.linalg.norm(self.x + other.x) < tol)


@dataclass(frozen=True, eq=False)
class MatPoint:
    """Point of PSL(2,R), stored sign-canonically."""
    m: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m", canonical_sign(np.asarray(self.m, dtype=float).reshape(2, 2)))

    def quadric(self) -> QuadricPoint:
        return QuadricPoint(vector_of(self.m))

    def inverse(self) -> "MatPoint":
        a, b = self.m[0]
        c, d = self.m[1]
        return MatPoint(np.array([[d, -b], [-c, a]]))


@dataclass(frozen=True, eq=False)
class TangentVector:
    base: QuadricPoint
    v: np.ndarray
    tol: float = TOL_ALG

    def __post_init__(self):
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float).reshape(4))
        res = inner(self.v, self.base.x)
        if abs(res) > self.tol * max(1.0, float(np.linalg.norm(self.v))):
            raise NotTangent("vector is not orthogonal to its base point", residual=abs(res))


@dataclass(frozen=True, eq=False)
class Isometry:
    """
    The isometry X -> A X B^-1 of the matrix model.

    (A, B) and (-A, -B) act alike; the pair is stored with A sign-canonical.
    """
    left: np.ndarray
    right: np.ndarray = field(default_factory=lambda: np.eye(2))

    def __post_init__(self):
        for name in ("left", "right"):
            m = np.asarray(getattr(self, name), dtype=float)
            det = float(np.linalg.det(m))
            if abs(det - 1.0) > 1e-8:
                raise NotOnQuadric(f"{name} factor is not in SL(2,R)", residual=abs(det - 1.0))
            object.__setattr__(self, name, m)
        if not np.array_equal(canonical_sign(self.left), self.left):
            object.__setattr__(self, "left", -self.left)
            object.__setattr__(self, "right", -self.right)

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other."""
        return Isometry(self.left @ other.left, self.right @ other.right)

    def inverse(self) -> "Isometry":
        return Isometry(np.linalg.inv(self.left), np.linalg.inv(self.right))

    def act_matrix(self, m: np.ndarray) -> np.ndarray:
        return self.left @ m @ np.linalg.inv(self.right)

    def act_vector(self, v) -> np.ndarray:
        """The isometry is linear on R^{2,2}, so points and tangent vectors move alike."""
        return vector_of(self.act_matrix(matrix_of(v)))


@dataclass(frozen=True, eq=False)
class UnivCoverPoint:
    """Point (y, t) of H^2 x R, y on the upper sheet of the hyperboloid."""
    y: np.ndarray
    t: float

    def __post_init__(self):
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float).reshape(3))
        object.__setattr__(self, "t", float(self.t))

    @classmethod
    def from_disc(cls, w: Tuple[float, float], t: float) -> "UnivCoverPoint":
        """Lift a Poincare disc point through the hemisphere model."""
        a, b = w
        r2 = a * a + b * b
        if r2 >= 1.0:
            raise OutOfChart("disc point outside the open unit disc")
        return cls(np.array([2 * a, 2 * b, 1 + r2]) / (1 - r2), t)

    def disc(self) -> Tuple[float, float]:
        return (self.y[0] / (1 + self.y[2]), self.y[1] / (1 + self.y[2]))


# =============================================================================
# Conversions
# =============================================================================

def mat_from_quadric(x: QuadricPoint, tol: float = TOL_ALG) -> MatPoint:
    if x.residual() > tol:
        raise NotOnQuadric("point is off the quadric", residual=x.residual())
    return MatPoint(x.matrix())


def quadric_from_mat(m: MatPoint, tol: float = TOL_ALG) -> QuadricPoint:
    det = float(np.linalg.det(m.m))
    if abs(det - 1.0) > tol:
        raise NotOnQuadric("matrix is not in SL(2,R)", residual=abs(det - 1.0))
    return m.quadric()


def apply_isometry(g: Isometry, x: MatPoint) -> MatPoint:
    return MatPoint(g.act_matrix(x.m))


def cover_project(p: UnivCoverPoint) -> QuadricPoint:
    y1, y2, y3 = p.y
    return QuadricPoint(np.array([y1, y2, y3 * math.cos(p.t), y3 * math.sin(p.t)]))


def cover_lift(x: QuadricPoint, branch: int = 0) -> UnivCoverPoint:
    """Lift on sheet `branch`; t lies in (-pi, pi] + 2 pi branch."""
    x1, x2, x3, x4 = x.x
    y3 = math.hypot(x3, x4)
    return UnivCoverPoint(np.array([x1, x2, y3]), math.atan2(x4, x3) + 2 * math.pi * branch)


def cover_chart_embedding(a: float, b: float, t: float) -> np.ndarray:
    """Quadric point with hyperboloid chart (a, b) and time t."""
    y3 = math.sqrt(1 + a * a + b * b)
    return np.array([a, b, y3 * math.cos(t), y3 * math.sin(t)])


def cover_chart_metric(a: float, b: float) -> np.ndarray:
    """Warped metric g_H - y3^2 dt^2 in coordinates (a, b, t)."""
    y = np.array([a, b])
    y3sq = 1 + a * a + b * b
    g = np.zeros((3, 3))
    g[:2, :2] = np.eye(2) - np.outer(y, y) / y3sq
    g[2, 2] = -y3sq
    return g


def pullback_metric(embed: Callable[..., np.ndarray], params: Sequence[float],
                    h: float = FD_STEP) -> np.ndarray:
    """
    Metric pulled back from R^{2,2} through `embed`, by fourth-order differences.

    Args:
        embed: callable taking len(params) floats and returning a 4-vector
        params: coordinates of the point
        h: finite-difference step

    Returns:
        Gram matrix of the coordinate derivatives
    """
    params = [float(p) for p in params]
    cols = []
    for k in range(len(params)):
        def shifted(s):
            moved = list(params)
            moved[k] += s
            return np.asarray(embed(*moved), dtype=float)
        cols.append((-shifted(2 * h) + 8 * shifted(h) - 8 * shifted(-h) + shifted(-2 * h)) / (12 * h))
    jac = np.column_stack(cols)
    return jac.T @ ETA @ jac


# =============================================================================
# Curvature
# =============================================================================

def sectional_curvature(at, u, v, tol: float = TOL_ALG,
                        degenerate_tol: float = DEGENERATE_TOL) -> float:
    """
    Sectional curvature of a non-degenerate tangent plane, from the quadric's
    curvature tensor R(u, v)w = <u, w>v - <v, w>u.

    Raises:
        NotTangent: if u or v leaves the tangent space by more than tol
        DegeneratePlane: if |<u,u><v,v> - <u,v>^2| < degenerate_tol
    """
    x = at.x if isinstance(at, QuadricPoint) else np.asarray(at, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    for vec in (u, v):
        res = abs(inner(vec, x))
        if res > tol * max(1.0, float(np.linalg.norm(vec))):
            raise NotTangent("vector is not tangent", residual=res)
    gram = inner(u, u) * inner(v, v) - inner(u, v) ** 2
    if abs(gram) < degenerate_tol:
        raise DegeneratePlane("tangent plane is degenerate", residual=abs(gram))
    r_uvv = inner(u, v) * v - inner(v, v) * u
    return inner(r_uvv, u) / gram


def christoffel_symbols(metric: Callable[[np.ndarray], np.ndarray], c: np.ndarray,
                        h: float = 1e-5) -> np.ndarray:
    """Gamma[k, i, j] of a metric given as a callable of chart coordinates."""
    c = np.asarray(c, dtype=float)
    n = len(c)
    dg = np.zeros((n, n, n))  # dg[l, i, j] = d_l g_ij
    for l in range(n):
        e = np.zeros(n)
        e[l] = h
        dg[l] = (metric(c + e) - metric(c - e)) / (2 * h)
    g_inv = np.linalg.inv(metric(c))
    # lowered[i, j, l] = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    lowered = 0.5 * (dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0))
    return np.einsum("kl,ijl->kij", g_inv, lowered)


def christoffel_curvature(metric: Callable[[np.ndarray], np.ndarray], c, u, v,
                          h: float = FD_STEP) -> float:
    """
    Sectional curvature of span(u, v) computed from Christoffel symbols alone.

    Used as an independent check of sectional_curvature in the cover chart.
    """
    c = np.asarray(c, dtype=float)
    n = len(c)
    gamma = christoffel_symbols(metric, c)
    d_gamma = np.zeros((n, n, n, n))  # d_gamma[j, l, i, k] = d_j Gamma^l_ik
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        d_gamma[j] = (christoffel_symbols(metric, c + e) - christoffel_symbols(metric, c - e)) / (2 * h)
    # R^l_{ijk} = d_j G^l_ki - d_k G^l_ji + G^l_jm G^m_ki - G^l_km G^m_ji
    riemann = (np.einsum("jlki->lijk", d_gamma)
               - np.einsum("klji->lijk", d_gamma)
               + np.einsum("ljm,mki->lijk", gamma, gamma)
               - np.einsum("lkm,mji->lijk", gamma, gamma))
    g = metric(c)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    r_uvv = np.einsum("lijk,j,k,i->l", riemann, u, v, v)
    gram = (u @ g @ u) * (v @ g @ v) - (u @ g @ v) ** 2
    if abs(gram) < 1e-12:
        raise DegeneratePlane("tangent plane is degenerate", residual=abs(gram))
    return float(r_uvv @ g @ u) / gram


def cover_metric_callable(c: np.ndarray) -> np.ndarray:
    return cover_chart_metric(float(c[0]), float(c[1]))


# =============================================================================
# Random sampling
# =============================================================================

def random_point(rng: np.random.Generator, radius: float = 2.0) -> QuadricPoint:
    a, b = rng.uniform(-radius, radius, size=2)
    t = rng.uniform(-math.pi, math.pi)
    return QuadricPoint(cover_chart_embedding(a, b, t))


def random_tangent(rng: np.random.Generator, at: QuadricPoint) -> TangentVector:
    return TangentVector(at, tangent_projection(at.x, rng.normal(size=4)))


def random_sl2(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    m = np.eye(2) + scale * rng.normal(size=(2, 2))
    det = float(np.linalg.det(m))
    if det <= 0:
        m[0] = -m[0]
        det = -det
    return m / math.sqrt(det)


def parse_point(text: Optional[str]) -> Optional[np.ndarray]:
    """Parse 'a,b,c,d' into a 4-vector."""
    if text is None:
        return None
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError(f"expected four comma separated numbers, got {text!r}")
    return np.array(parts)
