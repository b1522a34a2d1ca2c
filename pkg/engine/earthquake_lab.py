"""
Pleated surfaces, earthquakes along finite laminations, and quasiconformal
diagnostics.

The fundamental example bends the plane P_1 (points J_q) along the dual of the
line through 1 and sigma0 = exp(d W_l): the piece S1 = {J_q : q right of l}
stays, the piece S2 = {sigma0 J_q : q left of l} lies in the dual plane of
sigma0. Its Gauss map sends J_q to (q, q) and sigma0 J_q to (sigma0 q, q).
"""

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .circle_maps import CircleMap
from .core_models import IDENTITY, inner, vector_of
from .errors import NonPositiveWeight, OnBendingLine, OnLeaf, SingularJacobian
from .geodesics_duality import Geodesic, dual_geodesic, spacelike_geodesic
from .hyperbolic import (OrientedGeodesic, cayley_inverse, disc_to_rp1, mobius,
                         order_two_elliptic, rp1_act, rp1_angle, rp1_to_disc, rp1_vector)

log = logging.getLogger(__name__)

LEAF_TOL = 1e-8
DENSE_QUADRUPLES = 1_000_000
BASEPOINT = 1j
SIDES = ("left", "right")

# RP^1 angles of e1, e2, (1, -1), (1, 1): a harmonic quadruple
HARMONIC = np.array([0.0, math.pi / 2, 3 * math.pi / 4, math.pi / 4])


# =============================================================================
# Pleated surfaces
# =============================================================================

@dataclass(eq=False)
class PleatedSurface:
    leaf: OrientedGeodesic
    bend: float
    sigma0: np.ndarray = field(repr=False)
    bending: Geodesic = field(repr=False)

    def dual_points(self) -> Tuple[np.ndarray, np.ndarray]:
        """Dual points of the planes containing S1 and S2."""
        return IDENTITY.copy(), self.sigma0.copy()

    def dual_distance(self) -> float:
        """Distance between the dual points along the line they span."""
        c = -inner(vector_of(IDENTITY), vector_of(self.sigma0))
        return math.acosh(max(c, 1.0))

    def s1_point(self, q: complex) -> np.ndarray:
        if not self.leaf.side(q) > 0:
            raise ValueError("S1 is parametrised by points right of the leaf")
        return order_two_elliptic(q)

    def s2_point(self, q: complex) -> np.ndarray:
        if not self.leaf.side(q) < 0:
            raise ValueError("S2 is parametrised by points left of the leaf")
        return self.sigma0 @ order_two_elliptic(q)

    def gauss_image(self, q: complex) -> Tuple[complex, complex]:
        """Left and right projections of the surface point over q."""
        if self.leaf.side(q) < 0:
            return complex(mobius(self.sigma0, q)), q
        return q, q

    def to_dict(self) -> dict:
        forward, backward = self.bending.endpoints()
        return {
            "leaf": [self.leaf.start, self.leaf.end],
            "bend": self.bend,
            "sigma0": self.sigma0,
            "dualDistance": self.dual_distance(),
            "bendingEndpoints": [[forward.xi, forward.eta], [backward.xi, backward.eta]],
        }


def pleat_single(leaf: OrientedGeodesic, d: float) -> PleatedSurface:
    """
    Bend P_1 along the leaf by the angle d.

    sigma0 = cosh(d) 1 + sinh(d) W_leaf is hyperbolic with axis the leaf and
    translation length 2d on the hyperbolic plane.

    Raises:
        NonPositiveWeight: if d <= 0
    """
    if not d > 0:
        raise NonPositiveWeight(f"bend parameter must be positive, got {d}")
    sigma0 = leaf.translation(d)
    axis_line = spacelike_geodesic(leaf, leaf)
    return PleatedSurface(leaf, float(d), sigma0, dual_geodesic(axis_line))


def pleated_composition(surface: PleatedSurface, p: complex) -> complex:
    """
    Pi_r o Pi_l^-1 at p: the identity right of the leaf, sigma0^-1 on the left.

    On P_1 the left piece is conjugated by sigma0, J_p -> sigma0^-1 J_p sigma0,
    which is J of sigma0^-1 p. A single-leaf earthquake of weight d agrees with
    it, so bends and weights share one unit and move points by 2d.

    Raises:
        OnBendingLine: if p lies on the leaf
    """
    s = surface.leaf.side(p)
    if abs(s) < LEAF_TOL:
        raise OnBendingLine("point lies on the bending line", residual=abs(s))
    if s > 0:
        return p
    return complex(mobius(np.linalg.inv(surface.sigma0), p))


# =============================================================================
# Finite laminations
# =============================================================================

@dataclass(eq=False)
class FiniteLamination:
    """Weighted pairwise unlinked geodesics given by disc boundary angles."""
    leaves: List[Tuple[OrientedGeodesic, float]] = field(default_factory=list)

    def __post_init__(self):
        self.leaves = [(g if isinstance(g, OrientedGeodesic) else OrientedGeodesic(*g), float(w))
                       for g, w in self.leaves]
        for g, w in self.leaves:
            if w < 0:
                raise NonPositiveWeight(f"negative weight {w}")
            if g.is_degenerate():
                raise ValueError("leaf endpoints coincide")
        for i, (g, _) in enumerate(self.leaves):
            for h, _ in self.leaves[i + 1:]:
                if g.linked_with(h):
                    raise ValueError(f"leaves {g} and {h} cross")

    def __len__(self) -> int:
        return len(self.leaves)

    def to_list(self) -> List[dict]:
        return [{"a": g.start, "b": g.end, "w": w} for g, w in self.leaves]


def load_lamination(path: Union[str, Path]) -> FiniteLamination:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Lamination file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    if isinstance(data, dict):
        data = data.get("leaves", [])
    return FiniteLamination([((float(e["a"]), float(e["b"])), float(e["w"])) for e in data])


def save_lamination(lamination: FiniteLamination, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(lamination.to_list(), f, indent=2, sort_keys=True)
    return path


def _crossed(lamination: FiniteLamination, separates: Callable[[OrientedGeodesic], int]
             ) -> List[Tuple[OrientedGeodesic, float]]:
    """
    Leaves separating the basepoint from a target, oriented with the target on
    the left, sorted from the basepoint outwards.

    `separates(g)` is +1 when the target is left of g and the basepoint right,
    -1 for the mirrored situation and 0 otherwise.
    """
    crossed = []
    for g, w in lamination.leaves:
        sign = separates(g)
        if sign > 0:
            crossed.append((g, w))
        elif sign < 0:
            crossed.append((g.reversed(), w))

    def depth(item):
        g = item[0]
        mid = g.midpoint()
        return sum(1 for h, _ in crossed if h is not g and h.side(mid) < -LEAF_TOL)

    return sorted(crossed, key=depth)


def _stratum(crossed: Sequence[Tuple[OrientedGeodesic, float]], side: str) -> np.ndarray:
    sign = -1.0 if side == "left" else 1.0
    m = np.eye(2)
    for g, w in crossed:
        m = m @ g.translation(sign * w)
    return m


def _check_side(side: str) -> None:
    if side not in SIDES:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def stratum_map(lamination: FiniteLamination, p: complex, side: str = "left",
                basepoint: complex = BASEPOINT) -> np.ndarray:
    """
    The Mobius map the earthquake applies on the stratum of p.

    Raises:
        OnLeaf: if p or the basepoint lies on a leaf
    """
    _check_side(side)
    for g, _ in lamination.leaves:
        for z, what in ((p, "point"), (basepoint, "basepoint")):
            s = g.side(z)
            if abs(s) < LEAF_TOL:
                raise OnLeaf(f"{what} {z} lies on a leaf", residual=abs(s))

    def separates(g: OrientedGeodesic) -> int:
        sp, sb = g.side(p), g.side(basepoint)
        if sp < 0 < sb:
            return 1
        if sb < 0 < sp:
            return -1
        return 0

    return _stratum(_crossed(lamination, separates), side)


def earthquake(lamination: FiniteLamination, p: complex, side: str = "left",
               basepoint: complex = BASEPOINT) -> complex:
    """
    Finite earthquake normalised to be the identity on the basepoint stratum.

    Crossing a leaf with the target on its left applies exp(-w W) for a left
    earthquake and exp(w W) for a right one; the maps of the leaves crossed
    from the basepoint are composed in crossing order.

    Raises:
        OnLeaf: if p lies on a leaf
    """
    return complex(mobius(stratum_map(lamination, p, side, basepoint), p))


def earthquake_boundary_map(lamination: FiniteLamination, samples: int = 256,
                            side: str = "left", basepoint: complex = BASEPOINT) -> CircleMap:
    """Extension of the earthquake to RP^1, sampled off the leaf endpoints."""
    _check_side(side)
    psi = (np.arange(samples) + 0.5) * math.pi / samples
    values = np.empty(samples)
    for k, a in enumerate(psi):
        theta = float(rp1_to_disc(a))

        def separates(g: OrientedGeodesic) -> int:
            base_left = g.side(basepoint) < 0
            target_left = g.ideal_on_left(theta)
            if target_left and not base_left:
                return 1
            if base_left and not target_left and g.reversed().ideal_on_left(theta):
                return -1
            return 0

        m = _stratum(_crossed(lamination, separates), side)
        values[k] = float(rp1_act(m, a))
    return CircleMap.from_samples(psi, values)


# =============================================================================
# Quasiconformal diagnostics
# =============================================================================

def _disc_samples(rng: np.random.Generator, n: int, radius: float = 0.95) -> np.ndarray:
    u = rng.random((n, 2))
    return radius * np.sqrt(u[:, 0]) * np.exp(2j * math.pi * u[:, 1])


def _cross_ratio(vecs: np.ndarray) -> np.ndarray:
    """det(a,c) det(b,d) / (det(a,d) det(b,c)) for rows of shape (N, 4, 2)."""
    def det(i, j):
        return vecs[:, i, 0] * vecs[:, j, 1] - vecs[:, i, 1] * vecs[:, j, 0]
    return det(0, 2) * det(1, 3) / (det(0, 3) * det(1, 2))


def symmetric_quadruples(n: int, seed: int = 42) -> np.ndarray:
    """
    RP^1 angles of n quadruples with cross ratio -1: endpoints of orthogonal
    geodesic pairs through random points of the disc of radius 0.95.

    The stream is prefix-stable: the first n rows do not depend on larger n.
    """
    rng = np.random.default_rng(seed)
    draws = rng.random((n, 3))
    points = cayley_inverse(0.95 * np.sqrt(draws[:, 0]) * np.exp(2j * math.pi * draws[:, 1]))
    betas = draws[:, 2] * math.pi
    # stacked upper-triangular frames A_p with A_p(i) = p
    r = np.sqrt(points.imag)
    frames = np.zeros((n, 2, 2))
    frames[:, 0, 0] = r
    frames[:, 0, 1] = points.real / r
    frames[:, 1, 1] = 1.0 / r
    vecs = rp1_vector(HARMONIC[None, :] + betas[:, None])
    return rp1_angle(np.einsum("nij,nkj->nki", frames, vecs))


def cross_ratio_norm(phi: Callable, n: int = 2000, seed: int = 42, workers: int = 1) -> float:
    """
    Lower estimate of sup |log|cr(phi(Q))|| over symmetric quadruples Q.

    Nondecreasing in n for a fixed seed; zero for Mobius maps.
    """
    if n < 1:
        raise ValueError("need at least one quadruple")
    quads = symmetric_quadruples(n, seed)

    def chunk_max(block: np.ndarray) -> float:
        images = np.asarray(phi(block.ravel()), dtype=float).reshape(block.shape)
        cr = _cross_ratio(rp1_vector(images))
        return float(np.max(np.abs(np.log(np.abs(cr)))))

    blocks = np.array_split(quads, max(1, workers))
    blocks = [b for b in blocks if len(b)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk_max, blocks))
    else:
        parts = [chunk_max(b) for b in blocks]
    value = max(parts)
    log.debug("cross-ratio norm over %d quadruples: %.6g", n, value)
    return value


def _jacobian(func: Callable[[complex], complex], z: complex, h: float) -> np.ndarray:
    dx = (func(z + h) - func(z - h)) / (2 * h)
    dy = (func(z + 1j * h) - func(z - 1j * h)) / (2 * h)
    return np.array([[dx.real, dy.real], [dx.imag, dy.imag]])


def max_dilatation(func: Callable[[complex], complex], n: int = 500, seed: int = 42,
                   domain: str = "disc", step: float = 1e-6) -> float:
    """
    Supremum over sample points of the singular value ratio of dF.

    Samples are drawn in the disc of radius 0.95, mapped to the upper
    half-plane when domain == "half-plane".

    Raises:
        SingularJacobian: if a sampled differential is (numerically) singular
    """
    if domain not in ("disc", "half-plane"):
        raise ValueError(f"unknown domain {domain!r}")
    points = _disc_samples(np.random.default_rng(seed), n)
    if domain == "half-plane":
        points = cayley_inverse(points)
    worst = 1.0
    for z in points:
        sv = np.linalg.svd(_jacobian(func, complex(z), step), compute_uv=False)
        if sv[-1] < 1e-12:
            raise SingularJacobian(f"singular differential at {complex(z)}", residual=float(sv[-1]))
        worst = max(worst, float(sv[0] / sv[-1]))
    return worst


def quake_report(lamination: FiniteLamination, points: Sequence[complex],
                 samples: Optional[int] = None) -> dict:
    """Images of points under both earthquakes, plus boundary-map diagnostics."""
    rows = []
    for p in points:
        rows.append({
            "point": [p.real, p.imag],
            "left": _pair(earthquake(lamination, p, "left")),
            "right": _pair(earthquake(lamination, p, "right")),
        })
    report = {"leaves": lamination.to_list(), "points": rows}
    if samples:
        boundary = earthquake_boundary_map(lamination, samples, "left")
        report["boundarySamples"] = samples
        report["crossRatioNorm"] = cross_ratio_norm(boundary, n=samples)
    return report


def _pair(z: complex) -> List[float]:
    return [z.real, z.imag]


def disc_isometry(a: complex, angle: float = 0.0) -> Callable[[complex], complex]:
    """z -> e^{i angle} (z - a) / (1 - conj(a) z)."""
    rot = complex(math.cos(angle), math.sin(angle))
    return lambda z: rot * (z - a) / (1 - a.conjugate() * z)


def disc_to_rp1_map(func: Callable[[complex], complex]) -> Callable:
    """Boundary restriction of a disc map, on RP^1 angles."""
    def boundary(psi):
        theta = rp1_to_disc(psi)
        images = np.array([func(complex(math.cos(t), math.sin(t))) for t in np.ravel(theta)])
        return disc_to_rp1(np.angle(images)).reshape(np.shape(psi))
    return boundary
