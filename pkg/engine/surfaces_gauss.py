"""
Spacelike surfaces: fundamental forms, Gauss map and normal evolution.

A patch is a map sigma from a parameter rectangle into the quadric. At each
parameter the kernel computes, with central differences,

    I     first fundamental form
    nu    future unit normal
    II    -<nu, sigma_ij>
    B     shape operator I^-1 II (so that d nu = sigma_* B)
    III   I(B., B.)
    J     almost-complex structure, sigma_*(J e) = nu x sigma_*(e)

The Gauss map sends a point to the pair (Fix(nu sigma^-1), Fix(sigma^-1 nu))
of the hyperbolic plane.
"""

import logging
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from .core_models import (ETA, FD_STEP, TOL_ALG, cross, inner, is_future, matrix_of,
                          vector_of)
from .errors import (DomainBoundary, NonPositiveK, NotFuture, NotSpacelike, NotTangent,
                     NotTimelike)
from .hyperbolic import order_two_elliptic
from .reports import write_csv

log = logging.getLogger(__name__)

CURVATURE_STEP = 1e-2
# Evolution time along the future normal taking the umbilic surface with
# B = sqrt(K) id to constant mean curvature; tan(t) = 1 / sqrt(K).
CGC_CMC_CONVENTION = "reciprocal"

Domain = Tuple[float, float, float, float]


@dataclass(eq=False)
class SurfacePatch:
    """
    Parametrised spacelike surface.

    Args:
        name: label used in reports
        func: (u1, u2) -> 4-vector on the quadric
        domain: (u1_min, u1_max, u2_min, u2_max)
        h: central-difference step
        thread_safe: False serialises evaluations of `func`
        jacobian: optional (u1, u2) -> (4, 2) array of sigma_1, sigma_2
        hessian: optional (u1, u2) -> (4, 2, 2) array of sigma_ij

    Derivatives without a callable come from the central-difference stencil.
    """
    name: str
    func: Callable[[float, float], np.ndarray]
    domain: Domain
    h: float = FD_STEP
    thread_safe: bool = True
    jacobian: Optional[Callable[[float, float], np.ndarray]] = None
    hessian: Optional[Callable[[float, float], np.ndarray]] = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __call__(self, u1: float, u2: float) -> np.ndarray:
        return self._eval(self.func, u1, u2)

    def _eval(self, fn: Callable, u1: float, u2: float) -> np.ndarray:
        if self.thread_safe:
            return np.asarray(fn(u1, u2), dtype=float)
        with self._lock:
            return np.asarray(fn(u1, u2), dtype=float)

    def stencil_margin(self) -> float:
        """Clearance from the edges the derivative scheme needs."""
        return 0.0 if self.jacobian is not None and self.hessian is not None else 2 * self.h

    def interior(self, u: Tuple[float, float], margin: float) -> bool:
        a0, a1, b0, b1 = self.domain
        return a0 + margin <= u[0] <= a1 - margin and b0 + margin <= u[1] <= b1 - margin

    def centre(self) -> Tuple[float, float]:
        a0, a1, b0, b1 = self.domain
        return (0.5 * (a0 + a1), 0.5 * (b0 + b1))

    def grid(self, n: int, margin: float = 0.1) -> List[Tuple[float, float]]:
        """n x n parameters, shrunk away from the edges by a relative margin."""
        a0, a1, b0, b1 = self.domain
        da, db = margin * (a1 - a0), margin * (b1 - b0)
        us = np.linspace(a0 + da, a1 - da, n)
        vs = np.linspace(b0 + db, b1 - db, n)
        return [(float(a), float(b)) for b in vs for a in us]


@dataclass
class FormsAtPoint:
    point: np.ndarray
    tangents: np.ndarray  # columns sigma_1, sigma_2
    I: np.ndarray
    II: np.ndarray
    B: np.ndarray
    III: np.ndarray
    nu: np.ndarray
    J: np.ndarray
    orientation: int


@dataclass(frozen=True)
class GaussImage:
    left: complex
    right: complex


def _derivatives(sigma: SurfacePatch, u: Tuple[float, float]):
    h = sigma.h
    u1, u2 = u
    c = sigma(u1, u2)
    if sigma.jacobian is not None:
        jac = sigma._eval(sigma.jacobian, u1, u2).reshape(4, 2)
        d1, d2 = jac[:, 0], jac[:, 1]
    if sigma.hessian is not None:
        hess = sigma._eval(sigma.hessian, u1, u2).reshape(4, 2, 2)
        d11, d12, d22 = hess[:, 0, 0], hess[:, 0, 1], hess[:, 1, 1]
    if sigma.jacobian is None or sigma.hessian is None:
        p1, m1 = sigma(u1 + h, u2), sigma(u1 - h, u2)
        p2, m2 = sigma(u1, u2 + h), sigma(u1, u2 - h)
        if sigma.jacobian is None:
            d1 = (p1 - m1) / (2 * h)
            d2 = (p2 - m2) / (2 * h)
        if sigma.hessian is None:
            d11 = (p1 - 2 * c + m1) / h ** 2
            d22 = (p2 - 2 * c + m2) / h ** 2
            d12 = (sigma(u1 + h, u2 + h) - sigma(u1 + h, u2 - h)
                   - sigma(u1 - h, u2 + h) + sigma(u1 - h, u2 - h)) / (4 * h * h)
    return c, d1, d2, d11, d12, d22


def first_form(sigma: SurfacePatch, u: Tuple[float, float]) -> np.ndarray:
    _, d1, d2, *_ = _derivatives(sigma, u)
    t = np.column_stack([d1, d2])
    return t.T @ ETA @ t


def forms(sigma: SurfacePatch, u: Tuple[float, float]) -> FormsAtPoint:
    """
    Fundamental forms at a parameter.

    Raises:
        DomainBoundary: if the difference stencil leaves the domain
        NotSpacelike: if the first form is not positive definite
    """
    if not sigma.interior(u, sigma.stencil_margin()):
        raise DomainBoundary(f"parameter {u} too close to the edge of {sigma.name}")
    c, d1, d2, d11, d12, d22 = _derivatives(sigma, u)
    tangents = np.column_stack([d1, d2])
    first = tangents.T @ ETA @ tangents
    eig = np.linalg.eigvalsh(0.5 * (first + first.T))
    if eig[0] <= 0:
        raise NotSpacelike(f"first fundamental form of {sigma.name} is not positive", residual=float(eig[0]))

    rows = np.vstack([c, d1, d2]) @ ETA
    _, _, vt = np.linalg.svd(rows)
    nu = vt[-1]
    norm = inner(nu, nu)
    if norm >= 0:
        raise NotSpacelike("normal is not timelike", residual=norm)
    nu = nu / math.sqrt(-norm)
    if not is_future(c, nu):
        nu = -nu

    second = -np.array([[inner(nu, d11), inner(nu, d12)],
                        [inner(nu, d12), inner(nu, d22)]])
    shape = np.linalg.solve(first, second)
    third = shape.T @ first @ shape

    # nu x sigma_1 fixes the orientation; J itself is the I-rotation by pi/2
    rotated = cross(c, nu, d1)
    coeffs = np.linalg.solve(first, tangents.T @ ETA @ rotated)
    orientation = 1 if coeffs[1] > 0 else -1
    jmat = orientation / math.sqrt(float(np.linalg.det(first))) * np.array(
        [[-first[0, 1], -first[1, 1]], [first[0, 0], first[0, 1]]])
    return FormsAtPoint(c, tangents, first, second, shape, third, nu, jmat, orientation)


def fix_point(v: np.ndarray, tol: float = 1e-8) -> complex:
    """
    Fixed point in the upper half-plane of the elliptic flow exp(t v).

    Args:
        v: unit future timelike element of sl(2,R), as a 2x2 matrix

    Raises:
        NotTimelike: if <v, v> differs from -1
        NotFuture: if v is past directed
    """
    v = np.asarray(v, dtype=float)
    vec = vector_of(v)
    norm = inner(vec, vec)
    if abs(norm + 1.0) > tol:
        raise NotTimelike("element is not unit timelike", residual=abs(norm + 1.0))
    a, b = v[0]
    c, d = v[1]
    if c <= b:
        raise NotFuture("element is past directed")
    root = np.sqrt(complex((d - a) ** 2 + 4 * b * c))
    z = (a - d + root) / (2 * c)
    if z.imag <= 0:
        z = (a - d - root) / (2 * c)
    return complex(z)


def gauss_map(sigma: SurfacePatch, u: Tuple[float, float]) -> GaussImage:
    f = forms(sigma, u)
    return gauss_from_forms(f)


def gauss_from_forms(f: FormsAtPoint) -> GaussImage:
    s = matrix_of(f.point)
    s_inv = np.linalg.inv(s)
    n = matrix_of(f.nu)
    return GaussImage(fix_point(n @ s_inv), fix_point(s_inv @ n))


def pullback_metrics(sigma: SurfacePatch, u: Tuple[float, float]) -> Tuple[np.ndarray, np.ndarray]:
    """Formula metrics I((id -+ JB)., (id -+ JB).) pulled back by the two projections."""
    f = forms(sigma, u)
    ident = np.eye(2)
    a_left = ident - f.J @ f.B
    a_right = ident + f.J @ f.B
    return a_left.T @ f.I @ a_left, a_right.T @ f.I @ a_right


def fd_projection_pullbacks(sigma: SurfacePatch, u: Tuple[float, float],
                            step: float = 1e-3) -> Tuple[np.ndarray, np.ndarray]:
    """Pull-backs of the hyperbolic metric through the projections, by differences."""
    out = []
    for side in ("left", "right"):
        cols = []
        for k in range(2):
            plus = list(u)
            minus = list(u)
            plus[k] += step
            minus[k] -= step
            zp = getattr(gauss_map(sigma, tuple(plus)), side)
            zm = getattr(gauss_map(sigma, tuple(minus)), side)
            dz = (zp - zm) / (2 * step)
            cols.append([dz.real, dz.imag])
        jac = np.array(cols).T
        y = getattr(gauss_map(sigma, u), side).imag
        out.append(jac.T @ jac / y ** 2)
    return out[0], out[1]


# =============================================================================
# Curvature and integrability
# =============================================================================

def _stencil5(values: Dict[int, np.ndarray], step: float) -> np.ndarray:
    return (values[-2] - 8 * values[-1] + 8 * values[1] - values[2]) / (12 * step)


def _second5(values: Dict[int, np.ndarray], step: float) -> np.ndarray:
    return (-values[-2] + 16 * values[-1] - 30 * values[0] + 16 * values[1] - values[2]) / (12 * step ** 2)


def intrinsic_curvature(sigma: SurfacePatch, u: Tuple[float, float],
                        step: float = CURVATURE_STEP) -> float:
    """Gaussian curvature of I by the Brioschi formula on a 5 x 5 stencil."""
    if not sigma.interior(u, 2 * step + 2 * sigma.h):
        raise DomainBoundary(f"curvature stencil leaves the domain of {sigma.name}")
    grid = {(i, j): first_form(sigma, (u[0] + i * step, u[1] + j * step))
            for i in range(-2, 3) for j in range(-2, 3)}

    def comp(i, j, a, b):
        return grid[(i, j)][a, b]

    def d_u(a, b, j=0):
        return _stencil5({i: comp(i, j, a, b) for i in range(-2, 3)}, step)

    def d_v(a, b, i=0):
        return _stencil5({j: comp(i, j, a, b) for j in range(-2, 3)}, step)

    e, f_, g = comp(0, 0, 0, 0), comp(0, 0, 0, 1), comp(0, 0, 1, 1)
    e_u, e_v = d_u(0, 0), d_v(0, 0)
    f_u, f_v = d_u(0, 1), d_v(0, 1)
    g_u, g_v = d_u(1, 1), d_v(1, 1)
    e_vv = _second5({j: comp(0, j, 0, 0) for j in range(-2, 3)}, step)
    g_uu = _second5({i: comp(i, 0, 1, 1) for i in range(-2, 3)}, step)
    f_uv = _stencil5({j: _stencil5({i: comp(i, j, 0, 1) for i in range(-2, 3)}, step)
                      for j in range(-2, 3)}, step)

    m1 = np.array([
        [-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, e, f_],
        [0.5 * g_v, f_, g],
    ])
    m2 = np.array([
        [0.0, 0.5 * e_v, 0.5 * g_u],
        [0.5 * e_v, e, f_],
        [0.5 * g_u, f_, g],
    ])
    return float((np.linalg.det(m1) - np.linalg.det(m2)) / (e * g - f_ * f_) ** 2)


def gauss_residual(sigma: SurfacePatch, u: Tuple[float, float]) -> float:
    """|K_I + 1 + det B|."""
    f = forms(sigma, u)
    return abs(intrinsic_curvature(sigma, u) + 1.0 + float(np.linalg.det(f.B)))


def codazzi_residual(sigma: SurfacePatch, u: Tuple[float, float],
                     step: float = CURVATURE_STEP) -> float:
    """I-norm of the exterior covariant derivative of B on (e1, e2)."""
    if not sigma.interior(u, 2 * step + 2 * sigma.h):
        raise DomainBoundary(f"Codazzi stencil leaves the domain of {sigma.name}")
    shape_u = {i: forms(sigma, (u[0] + i * step, u[1])).B for i in range(-2, 3)}
    shape_v = {j: forms(sigma, (u[0], u[1] + j * step)).B for j in range(-2, 3)}
    d1_b = _stencil5(shape_u, step)
    d2_b = _stencil5(shape_v, step)

    first_u = {i: first_form(sigma, (u[0] + i * step, u[1])) for i in range(-2, 3)}
    first_v = {j: first_form(sigma, (u[0], u[1] + j * step)) for j in range(-2, 3)}
    dg = np.array([_stencil5(first_u, step), _stencil5(first_v, step)])  # dg[l, i, j]
    g = first_u[0]
    lowered = 0.5 * (dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0))
    gamma = np.einsum("kl,ijl->kij", np.linalg.inv(g), lowered)
    b = shape_u[0]
    vec = d1_b[:, 1] + gamma[:, 0, :] @ b[:, 1] - d2_b[:, 0] - gamma[:, 1, :] @ b[:, 0]
    return float(math.sqrt(abs(vec @ g @ vec)))


# =============================================================================
# Normal evolution and curvature correspondences
# =============================================================================

@dataclass
class EvolvedMetric:
    metric: np.ndarray
    degenerate: bool


def equidistant_metric(first: np.ndarray, shape: np.ndarray, t: float,
                       tol: float = 1e-8) -> EvolvedMetric:
    """I((cos t + sin t B)., (cos t + sin t B).), flagged where cos t + sin t B is singular."""
    a = math.cos(t) * np.eye(2) + math.sin(t) * shape
    lam = np.linalg.eigvals(shape)
    degenerate = bool(np.any(np.abs(math.cos(t) + math.sin(t) * lam) < tol))
    if degenerate:
        log.warning("equidistant surface at t=%.6g is singular", t)
    return EvolvedMetric(a.T @ first @ a, degenerate)


def tubular_metric(first: np.ndarray, second: np.ndarray, third: np.ndarray, t: float) -> np.ndarray:
    """-dt^2 + cos^2 t I + 2 cos t sin t II + sin^2 t III in coordinates (t, u1, u2)."""
    out = np.zeros((3, 3))
    out[0, 0] = -1.0
    c, s = math.cos(t), math.sin(t)
    out[1:, 1:] = c * c * first + 2 * c * s * second + s * s * third
    return out


def normal_evolution(sigma: SurfacePatch, t: float, step: float = 2e-3) -> SurfacePatch:
    """Patch u -> cos(t) sigma(u) + sin(t) nu(u); the normal itself is differenced."""
    def evolved(u1: float, u2: float) -> np.ndarray:
        f = forms(sigma, (u1, u2))
        return math.cos(t) * f.point + math.sin(t) * f.nu

    a0, a1, b0, b1 = sigma.domain
    margin = 3 * sigma.h
    return SurfacePatch(f"{sigma.name}+{t:g}", evolved, (a0 + margin, a1 - margin, b0 + margin, b1 - margin),
                        h=step, thread_safe=sigma.thread_safe)


def mean_curvature(sigma: SurfacePatch, u: Tuple[float, float]) -> float:
    return float(np.trace(forms(sigma, u).B))


def umbilic_evolution_spread(k: float, t: float, points: int = 5) -> Tuple[float, float]:
    surface = umbilic_surface(math.atan(math.sqrt(k)))
    evolved = normal_evolution(surface, t)
    values = [mean_curvature(evolved, u) for u in evolved.grid(points, margin=0.3)[:points]]
    return float(np.std(values)), float(np.mean(values))


def resolve_cgc_cmc_convention(k: float = 4.0, tol: float = 1e-3) -> str:
    """
    Decide which evolution time turns the curvature-K umbilic surface into a
    constant mean curvature surface with |H| = |K - 1| / sqrt(K).

    Returns:
        "reciprocal" for tan(t) = 1/sqrt(K), "direct" for tan(t) = sqrt(K)
    """
    target = abs(k - 1.0) / math.sqrt(k)
    for name, t in (("reciprocal", math.atan(1 / math.sqrt(k))), ("direct", math.atan(math.sqrt(k)))):
        spread, mean = umbilic_evolution_spread(k, t)
        log.debug("convention %s: spread %.3g mean %.6g target %.6g", name, spread, mean, target)
        if spread < tol and abs(abs(mean) - target) < tol:
            return name
    raise NonPositiveK("no evolution time reaches constant mean curvature")


def cgc_cmc_pair(k: float) -> Tuple[float, float]:
    """
    Evolution time and mean curvature H = tr B of the CMC surface obtained
    from a constant curvature K surface.

    Raises:
        NonPositiveK: if K <= 0
    """
    if k <= 0:
        raise NonPositiveK("curvature must be positive", residual=k)
    root = math.sqrt(k)
    t = math.atan(1 / root) if CGC_CMC_CONVENTION == "reciprocal" else math.atan(root)
    return t, (k - 1) / root


def landslide_pair(theta: float) -> Tuple[float, float, float]:
    """The curvatures tan^2(theta/2), 1/tan^2(theta/2) and their common |H| = 2/|tan theta|."""
    if not 0 < theta < math.pi:
        raise NonPositiveK("landslide angle must lie in (0, pi)", residual=theta)
    k = math.tan(theta / 2) ** 2
    return k, 1 / k, 2 / abs(math.tan(theta))


def cross_product(at, v, w) -> np.ndarray:
    """Cross product of tangent vectors, checking tangency first."""
    for vec in (v, w):
        res = abs(inner(vec, at))
        if res > TOL_ALG * max(1.0, float(np.linalg.norm(vec))):
            raise NotTangent("vector is not tangent", residual=res)
    return cross(at, v, w)


# =============================================================================
# Built-in surfaces
# =============================================================================

def _point_in_plane(a: float, s: float) -> complex:
    return complex(a, math.exp(s))


def plane_surface() -> SurfacePatch:
    """The dual plane of the identity, sigma(a, s) = J_{a + i e^s}."""
    return SurfacePatch("plane", lambda a, s: vector_of(order_two_elliptic(_point_in_plane(a, s))),
                        (-1.0, 1.0, -1.0, 1.0))


def umbilic_surface(s: float) -> SurfacePatch:
    """Equidistant surface cos(s) J_p + sin(s) 1, with B = tan(s) id."""
    one = vector_of(np.eye(2))

    def func(a, b):
        return math.cos(s) * vector_of(order_two_elliptic(_point_in_plane(a, b))) + math.sin(s) * one
    return SurfacePatch(f"umbilic:{s:g}", func, (-1.0, 1.0, -1.0, 1.0))


def graph_surface(coeffs) -> SurfacePatch:
    """cos f J_p + sin f 1 for a quadratic height f over the plane."""
    c = list(coeffs) + [0.0] * (6 - len(coeffs))
    one = vector_of(np.eye(2))

    def func(a, b):
        f = c[0] + c[1] * a + c[2] * b + c[3] * a * a + c[4] * a * b + c[5] * b * b
        return math.cos(f) * vector_of(order_two_elliptic(_point_in_plane(a, b))) + math.sin(f) * one
    return SurfacePatch("graph:" + ",".join(f"{v:g}" for v in c), func, (-0.5, 0.5, -0.5, 0.5))


def tetra_slice_surface(z: float) -> SurfacePatch:
    """The slice z = const of the tetrahedron chart, with exact derivatives."""
    from .mgh_holonomy import TetraChart, tetra_embed
    chart = TetraChart()
    cz, sz = math.cos(z), math.sin(z)

    def jacobian(x, y):
        return np.column_stack([cz * np.array([math.cosh(x), 0.0, 0.0, math.sinh(x)]),
                                sz * np.array([0.0, -math.cosh(y), -math.sinh(y), 0.0])])

    def hessian(x, y):
        out = np.zeros((4, 2, 2))
        out[:, 0, 0] = cz * chart.gamma(x)
        out[:, 1, 1] = sz * chart.eta(y)
        return out

    return SurfacePatch(f"tetra-slice:{z:g}", lambda x, y: tetra_embed(chart, x, y, z).x,
                        (-1.0, 1.0, -1.0, 1.0), jacobian=jacobian, hessian=hessian)


def named_surface(label: str) -> SurfacePatch:
    """Resolve 'plane', 'tetra-slice:c', 'umbilic:s' or 'graph:c0,c1,...'."""
    name, _, arg = label.partition(":")
    if name == "plane":
        return plane_surface()
    if name == "tetra-slice":
        return tetra_slice_surface(float(arg or math.pi / 4))
    if name == "umbilic":
        return umbilic_surface(float(arg or 0.3))
    if name == "graph":
        return graph_surface([float(v) for v in arg.split(",")] if arg else [0.1, 0.2, -0.1, 0.15, 0.05, -0.1])
    raise ValueError(f"unknown surface: {label!r}")


# =============================================================================
# Forms dump
# =============================================================================

FORMS_HEADER = ["u1", "u2", "I11", "I12", "I22", "B11", "B12", "B21", "B22",
                "PiL_re", "PiL_im", "PiR_re", "PiR_im"]


def forms_rows(sigma: SurfacePatch, n: int) -> List[List[float]]:
    rows = []
    for u in sigma.grid(n):
        f = forms(sigma, u)
        g = gauss_from_forms(f)
        rows.append([u[0], u[1], f.I[0, 0], f.I[0, 1], f.I[1, 1],
                     f.B[0, 0], f.B[0, 1], f.B[1, 0], f.B[1, 1],
                     g.left.real, g.left.imag, g.right.real, g.right.imag])
    log.debug("sampled forms of %s on %d points", sigma.name, len(rows))
    return rows


def write_forms_csv(sigma: SurfacePatch, n: int, path: Union[str, Path]) -> Path:
    return write_csv(FORMS_HEADER, forms_rows(sigma, n), path)
