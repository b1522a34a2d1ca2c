"""
Hyperbolic plane and projective line toolkit.

Points of the upper half-plane are complex numbers, points of the projective
line RP^1 are angles psi in [0, pi) standing for the line through
(cos psi, sin psi). PSL(2,R) acts on both: by Mobius maps on the half-plane
and linearly on representative vectors of RP^1.

Disc boundary angles theta and RP^1 angles are related by psi = -theta/2 mod pi,
which matches the Cayley map z -> (z - i)/(z + i) under z = cot(psi).
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateGeodesic, NotMonotone

ROT_GEN = np.array([[0.0, -1.0], [1.0, 0.0]])
AXIS_GEN = np.array([[1.0, 0.0], [0.0, -1.0]])


# =============================================================================
# Projective line
# =============================================================================

def rp1_vector(angle) -> np.ndarray:
    """Unit representative (cos, sin) of an RP^1 angle; broadcasts over arrays."""
    angle = np.asarray(angle, dtype=float)
    return np.stack([np.cos(angle), np.sin(angle)], axis=-1)


def rp1_angle(vec) -> np.ndarray:
    """Angle in [0, pi) of the line spanned by vec (last axis of length 2)."""
    vec = np.asarray(vec, dtype=float)
    return np.mod(np.arctan2(vec[..., 1], vec[..., 0]), math.pi)


def rp1_wrap(delta) -> np.ndarray:
    """Reduce angle differences to [-pi/2, pi/2)."""
    return np.mod(np.asarray(delta, dtype=float) + math.pi / 2, math.pi) - math.pi / 2


def rp1_distance(a, b) -> np.ndarray:
    return np.abs(rp1_wrap(np.asarray(a) - np.asarray(b)))


def rp1_act(matrix: np.ndarray, angles) -> np.ndarray:
    """Linear action of a 2x2 matrix on RP^1 angles."""
    vec = rp1_vector(angles)
    return rp1_angle(vec @ np.asarray(matrix, dtype=float).T)


def disc_to_rp1(theta) -> np.ndarray:
    return np.mod(-np.asarray(theta, dtype=float) / 2, math.pi)


def rp1_to_disc(psi) -> np.ndarray:
    return np.mod(-2 * np.asarray(psi, dtype=float), 2 * math.pi)


def rp1_to_real(psi) -> float:
    """Half-plane coordinate cot(psi); infinity for psi = 0."""
    s = math.sin(psi)
    if abs(s) < 1e-15:
        return math.inf
    return math.cos(psi) / s


def real_to_rp1(x: float) -> float:
    if math.isinf(x):
        return 0.0
    return float(rp1_angle(np.array([x, 1.0])))


def ccw_between(start: float, x: float, end: float) -> bool:
    """True when disc angle x lies strictly inside the ccw arc start -> end."""
    span = (end - start) % (2 * math.pi)
    offset = (x - start) % (2 * math.pi)
    return 0.0 < offset < span


# =============================================================================
# Upper half-plane
# =============================================================================

def mobius(matrix: np.ndarray, z):
    a, b = matrix[0]
    c, d = matrix[1]
    return (a * z + b) / (c * z + d)


def cayley(z):
    """Upper half-plane to unit disc."""
    return (z - 1j) / (z + 1j)


def cayley_inverse(w):
    return 1j * (1 + w) / (1 - w)


def hyperbolic_distance(z: complex, w: complex) -> float:
    num = abs(z - w) ** 2
    return math.acosh(1.0 + num / (2.0 * z.imag * w.imag))


def normalize_sl2(matrix: np.ndarray) -> np.ndarray:
    """Rescale a matrix of positive determinant to determinant one."""
    matrix = np.asarray(matrix, dtype=float)
    det = float(np.linalg.det(matrix))
    if det <= 0:
        raise ValueError(f"determinant {det} is not positive")
    return matrix / math.sqrt(det)


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def standard_frame(p: complex) -> np.ndarray:
    """Upper-triangular A_p in SL(2,R) with A_p(i) = p."""
    x, y = p.real, p.imag
    r = math.sqrt(y)
    return np.array([[r, x / r], [0.0, 1.0 / r]])


def order_two_elliptic(p: complex) -> np.ndarray:
    """The rotation J_p = A_p U A_p^-1 by pi/2 about p, a point of P_1."""
    x, y = p.real, p.imag
    return np.array([[x / y, -(x * x + y * y) / y], [1.0 / y, -x / y]])


def translation_length(matrix: np.ndarray) -> float:
    tr = abs(float(np.trace(matrix)))
    if tr <= 2.0:
        return 0.0
    return 2.0 * math.acosh(tr / 2.0)


def is_hyperbolic(matrix: np.ndarray, tol: float = 1e-9) -> bool:
    return abs(float(np.trace(matrix))) > 2.0 + tol


def attracting_angles(matrices: np.ndarray) -> np.ndarray:
    """
    RP^1 angles of the attracting eigenlines of a stack of hyperbolic matrices.

    Args:
        matrices: array of shape (N, 2, 2) with |trace| > 2

    Returns:
        array of N angles in [0, pi)
    """
    m = np.asarray(matrices, dtype=float)
    a, b, c, d = m[:, 0, 0], m[:, 0, 1], m[:, 1, 0], m[:, 1, 1]
    tr = a + d
    disc = np.sqrt(np.maximum(tr * tr - 4.0, 0.0))
    lam = (tr + np.where(tr >= 0, 1.0, -1.0) * disc) / 2.0
    first = np.stack([b, lam - a], axis=-1)
    second = np.stack([lam - d, c], axis=-1)
    pick = (np.abs(first).sum(axis=-1) >= np.abs(second).sum(axis=-1))[:, None]
    return rp1_angle(np.where(pick, first, second))


def three_point_map(src: Sequence[float], dst: Sequence[float]) -> np.ndarray:
    """
    SL(2,R) element carrying three RP^1 angles to three others.

    Both triples must have the same cyclic order, otherwise the projective map
    reverses orientation and NotMonotone is raised.
    """
    def frame(angles):
        u = rp1_vector(angles)
        # columns scaled so the third vector is their sum
        coeffs = np.linalg.solve(np.column_stack([u[0], u[1]]), u[2])
        return np.column_stack([coeffs[0] * u[0], coeffs[1] * u[1]])

    m = frame(dst) @ np.linalg.inv(frame(src))
    det = float(np.linalg.det(m))
    if det <= 0:
        raise NotMonotone("triples have opposite cyclic order", residual=det)
    return m / math.sqrt(det)


# =============================================================================
# Oriented geodesics
# =============================================================================

@dataclass(frozen=True)
class OrientedGeodesic:
    """A geodesic of the hyperbolic plane given by disc boundary angles."""
    start: float
    end: float

    def __post_init__(self):
        object.__setattr__(self, "start", float(self.start) % (2 * math.pi))
        object.__setattr__(self, "end", float(self.end) % (2 * math.pi))

    @classmethod
    def from_rp1(cls, start_psi: float, end_psi: float) -> "OrientedGeodesic":
        return cls(float(rp1_to_disc(start_psi)), float(rp1_to_disc(end_psi)))

    def reversed(self) -> "OrientedGeodesic":
        return OrientedGeodesic(self.end, self.start)

    @property
    def start_rp1(self) -> float:
        return float(disc_to_rp1(self.start))

    @property
    def end_rp1(self) -> float:
        return float(disc_to_rp1(self.end))

    def is_degenerate(self, tol: float = 1e-9) -> bool:
        gap = abs(self.start - self.end)
        return min(gap, 2 * math.pi - gap) < tol

    def frame(self) -> np.ndarray:
        """G in SL(2,R) taking the upward imaginary axis onto this geodesic."""
        if self.is_degenerate():
            raise DegenerateGeodesic("endpoints coincide")
        u_end = rp1_vector(self.end_rp1)
        u_start = rp1_vector(self.start_rp1)
        det = u_end[0] * u_start[1] - u_end[1] * u_start[0]
        return np.column_stack([u_end, u_start / det])

    def generator(self) -> np.ndarray:
        """Unit spacelike W with attracting line at the end point."""
        g = self.frame()
        return g @ AXIS_GEN @ np.linalg.inv(g)

    def translation(self, distance: float) -> np.ndarray:
        """exp(distance * W): hyperbolic translation of length 2 * distance."""
        return math.cosh(distance) * np.eye(2) + math.sinh(distance) * self.generator()

    def midpoint(self) -> complex:
        return complex(mobius(self.frame(), 1j))

    def side(self, p: complex) -> float:
        """sinh of the signed distance from p; negative on the left."""
        jp = order_two_elliptic(p)
        return 0.5 * float(np.trace(jp @ self.generator()))

    def is_left(self, p: complex) -> bool:
        return self.side(p) < 0

    def ideal_on_left(self, theta: float) -> bool:
        return ccw_between(self.end, theta, self.start)

    def linked_with(self, other: "OrientedGeodesic", tol: float = 1e-12) -> bool:
        """Whether the two geodesics cross in the open plane."""
        ends = (other.start, other.end)
        for e in ends:
            for f in (self.start, self.end):
                d = abs(e - f) % (2 * math.pi)
                if min(d, 2 * math.pi - d) < tol:
                    return False
        inside = [ccw_between(self.start, e, self.end) for e in ends]
        return inside[0] != inside[1]
