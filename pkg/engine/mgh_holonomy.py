"""
Explicit maximal globally hyperbolic spacetimes.

Genus one: the lightlike tetrahedron, charted by
Phi(x, y, z) = cos(z) gamma(x) + sin(z) eta(y) with gamma the hyperbolic
one-parameter group along the (0, inf) axis and eta its dual geodesic. Z^2
acts by translations in (x, y) and the quotients are the genus-one examples.

Genus two: pairs of Fuchsian groups built from a centrally symmetric
hyperbolic octagon with opposite sides paired; the limit curve is sampled
through attracting fixed points of words on both sides.
"""

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from .boundary import AchronalMeridian, meridian_from_homeo, save_meridian, two_step_meridian
from .circle_maps import CircleMap
from .core_models import QuadricPoint, inner
from .errors import (DegenerateLattice, NonHyperbolicWord, NonMonotoneSamples, NotMonotone,
                     OutOfRange, RelatorViolation)
from .hyperbolic import attracting_angles

log = logging.getLogger(__name__)

# g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3 for opposite-side pairings of an octagon
RELATOR = ((0, 1), (1, -1), (2, 1), (3, -1), (0, -1), (1, 1), (2, -1), (3, 1))
MERGE_TOL = 1e-10


# =============================================================================
# Lightlike tetrahedron
# =============================================================================

@dataclass(frozen=True)
class TetraChart:
    """Canonical pair of dual spacelike geodesics through the identity and U."""

    def gamma(self, x: float) -> np.ndarray:
        return np.array([math.sinh(x), 0.0, 0.0, math.cosh(x)])

    def eta(self, y: float) -> np.ndarray:
        return np.array([0.0, -math.sinh(y), -math.cosh(y), 0.0])


def tetra_embed(chart: TetraChart, x: float, y: float, z: float) -> QuadricPoint:
    """
    Phi(x, y, z); the metric pulled back is cos^2 z dx^2 + sin^2 z dy^2 - dz^2.

    Raises:
        OutOfRange: unless 0 < z < pi/2
    """
    if not 0.0 < z < math.pi / 2:
        raise OutOfRange(f"z = {z} outside (0, pi/2)")
    return QuadricPoint(math.cos(z) * chart.gamma(x) + math.sin(z) * chart.eta(y))


def tetra_metric(z: float) -> np.ndarray:
    return np.diag([math.cos(z) ** 2, math.sin(z) ** 2, -1.0])


def two_step_from_tetra(chart: TetraChart) -> AchronalMeridian:
    """
    Boundary curve of the tetrahedron spanned by the ideal endpoints of gamma
    and eta: (0, pi/2), (pi/2, 0), (0, 0) and (pi/2, pi/2) in RP^1 angles.
    """
    return two_step_meridian(math.pi / 2, 0.0, variant=1)


@dataclass(frozen=True)
class TorusHolonomy:
    v1: Tuple[float, float]
    v2: Tuple[float, float]

    def __post_init__(self):
        det = self.v1[0] * self.v2[1] - self.v2[0] * self.v1[1]
        if abs(det) <= 1e-9:
            raise DegenerateLattice("holonomy vectors are linearly dependent", residual=abs(det))

    def lattice_basis(self) -> np.ndarray:
        """Rows are the (x, y) displacements of the two generators."""
        return np.array([_displacement(self.v1), _displacement(self.v2)])


def _displacement(v: Tuple[float, float]) -> np.ndarray:
    l, m = v
    return np.array([(l - m) / 2, (l + m) / 2])


def torus_translate(h: TorusHolonomy, k1: int, k2: int,
                    p: Tuple[float, float, float]) -> Tuple[float, float, float]:
    shift = k1 * _displacement(h.v1) + k2 * _displacement(h.v2)
    return (p[0] + shift[0], p[1] + shift[1], p[2])


def _shortest_vector(basis: np.ndarray) -> np.ndarray:
    """Lagrange-Gauss reduction of a planar lattice basis."""
    a, b = np.array(basis[0], dtype=float), np.array(basis[1], dtype=float)
    if a @ a > b @ b:
        a, b = b, a
    while True:
        mu = round(float(a @ b) / float(a @ a))
        b = b - mu * a
        if b @ b >= a @ a:
            return a
        a, b = b, a


@dataclass
class Genus1Report:
    v1: Tuple[float, float]
    v2: Tuple[float, float]
    area: float
    min_displacement: float
    injectivity_radius: float
    free: bool
    basis: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "v1": list(self.v1),
            "v2": list(self.v2),
            "area": self.area,
            "minDisplacement": self.min_displacement,
            "injectivityRadius": self.injectivity_radius,
            "free": self.free,
            "basis": self.basis,
        }


def genus1_report(h: TorusHolonomy) -> Genus1Report:
    """Area, freeness and injectivity radius on the z = pi/4 slice of the quotient."""
    basis = h.lattice_basis()
    area = abs(float(np.linalg.det(basis)))
    shortest = float(np.linalg.norm(_shortest_vector(basis)))
    # the z = pi/4 slice carries (dx^2 + dy^2) / 2
    radius = 0.5 * shortest / math.sqrt(2.0)
    return Genus1Report(tuple(h.v1), tuple(h.v2), area, shortest, radius, shortest > 0, basis)


# =============================================================================
# Fuchsian groups from octagons
# =============================================================================

def _to_centre(w: complex, z: complex) -> complex:
    return (z - w) / (1 - w.conjugate() * z)


def _from_centre(w: complex, z: complex) -> complex:
    return (z + w) / (1 + w.conjugate() * z)


def _interior_angles(vertices: Sequence[complex]) -> List[float]:
    n = len(vertices)
    out = []
    for k in range(n):
        w = vertices[k]
        a = _to_centre(w, vertices[k - 1])
        b = _to_centre(w, vertices[(k + 1) % n])
        out.append(abs(math.atan2((b / a).imag, (b / a).real)))
    return out


def _geodesic_midpoint(a: complex, b: complex) -> complex:
    q = _to_centre(a, b)
    r = math.tanh(math.atanh(abs(q)) / 2)
    return _from_centre(a, r * q / abs(q))


def octagon_vertices(deformation: Sequence[float] = (0.0, 0.0, 0.0, 0.0)) -> List[complex]:
    """
    Centrally symmetric octagon with interior angle sum 2 pi.

    Vertex k sits at angle (2k + 1) pi / 8 with radius proportional to
    (1 + deformation[k mod 4]); the common scale is solved for the angle sum.
    """
    cosh_r = (1 + math.sqrt(2)) ** 2
    base = math.tanh(math.acosh(cosh_r) / 2)
    radii = [base * (1 + float(d)) for d in deformation]
    dirs = [complex(math.cos((2 * k + 1) * math.pi / 8), math.sin((2 * k + 1) * math.pi / 8))
            for k in range(4)]

    def build(scale: float) -> List[complex]:
        half = [scale * r * d for r, d in zip(radii, dirs)]
        return half + [-w for w in half]

    def excess(scale: float) -> float:
        return sum(_interior_angles(build(scale))) - 2 * math.pi

    hi = (1 - 1e-9) / max(radii)
    scale = brentq(excess, 1e-3, hi, xtol=1e-15) if any(deformation) else 1.0
    return build(scale)


def _su11_to_sl2(m: np.ndarray) -> np.ndarray:
    c = np.array([[1, -1j], [1, 1j]])
    out = np.linalg.inv(c) @ m @ c
    if np.max(np.abs(out.imag)) > 1e-9:
        raise RelatorViolation("conjugated generator is not real", residual=float(np.max(np.abs(out.imag))))
    return out.real


def fuchsian_octagon(side: str = "left",
                     deformation: Sequence[float] = (0.0, 0.0, 0.0, 0.0)) -> List[np.ndarray]:
    """
    Side-pairing generators g0..g3 of a genus-two surface group.

    g_k translates along the diameter through the midpoint m_k of side k by
    twice its distance from the centre, carrying side k+4 onto side k. The
    right factor takes the deformation with the opposite sign, so a single
    deformation vector moves the two factors apart; at zero both coincide.

    Raises:
        RelatorViolation: if the product RELATOR is not +-1
        NonHyperbolicWord: if a reduced word of length <= 4 is not hyperbolic
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    sign = 1.0 if side == "left" else -1.0
    verts = octagon_vertices([sign * float(d) for d in deformation])
    gens = []
    for k in range(4):
        mid = _geodesic_midpoint(verts[k - 1], verts[k])
        half = 2 * math.atanh(abs(mid))
        half_turn = cmath.exp(0.5j * cmath.phase(mid))
        rot = np.array([[half_turn, 0], [0, half_turn.conjugate()]])
        trans = np.array([[math.cosh(half), math.sinh(half)], [math.sinh(half), math.cosh(half)]])
        gens.append(_su11_to_sl2(rot @ trans @ np.linalg.inv(rot)))
    check_group(gens)
    log.debug("%s octagon group with deformation %s", side, list(deformation))
    return gens


def _letters(gens: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Letters 0..7: g0, g0^-1, g1, g1^-1, ..."""
    out = []
    for g in gens:
        out.append(np.asarray(g, dtype=float))
        out.append(np.linalg.inv(g))
    return out


def relator_residual(gens: Sequence[np.ndarray]) -> float:
    prod = np.eye(2)
    for idx, sign in RELATOR:
        prod = prod @ (gens[idx] if sign > 0 else np.linalg.inv(gens[idx]))
    return float(min(np.linalg.norm(prod - np.eye(2)), np.linalg.norm(prod + np.eye(2))))


def check_group(gens: Sequence[np.ndarray], max_len: int = 4, tol: float = 1e-8) -> None:
    res = relator_residual(gens)
    if res > tol:
        raise RelatorViolation("surface relator fails", residual=res)
    for words in _enumerate_levels(_letters(gens), max_len):
        traces = np.abs(np.trace(words[0], axis1=1, axis2=2))
        if np.any(traces <= 2 + 1e-9):
            raise NonHyperbolicWord("a short word is not hyperbolic", residual=float(traces.min()))


def _enumerate_levels(letters: List[np.ndarray], max_len: int, first: int = -1):
    """Yield (matrices, last letters) of reduced words, one level per length."""
    stack = np.array(letters)
    if first >= 0:
        mats, last = stack[first:first + 1], np.array([first])
    else:
        mats, last = stack, np.arange(len(letters))
    yield mats, last
    for _ in range(max_len - 1):
        new_mats, new_last = [], []
        for j in range(len(letters)):
            keep = last != (j ^ 1)
            new_mats.append(mats[keep] @ stack[j])
            new_last.append(np.full(int(keep.sum()), j))
        mats = np.concatenate(new_mats)
        last = np.concatenate(new_last)
        yield mats, last


@dataclass(eq=False)
class FuchsianPair:
    left: List[np.ndarray]
    right: List[np.ndarray]

    def __post_init__(self):
        check_group(self.left)
        check_group(self.right)


def _block_fixed_points(pair: FuchsianPair, first: int, max_len: int) -> Tuple[np.ndarray, np.ndarray]:
    left_levels = _enumerate_levels(_letters(pair.left), max_len, first)
    right_levels = _enumerate_levels(_letters(pair.right), max_len, first)
    xs, ys = [], []
    for (lm, _), (rm, _) in zip(left_levels, right_levels):
        xs.append(attracting_angles(lm))
        ys.append(attracting_angles(rm))
    return np.concatenate(xs), np.concatenate(ys)


@dataclass
class LimitCurve:
    left: np.ndarray
    right: np.ndarray
    meridian: AchronalMeridian


def limit_curve(pair: FuchsianPair, max_len: int = 6, workers: int = 1) -> LimitCurve:
    """
    Sample the equivariant circle map through fixed points of words.

    Words are enumerated per first letter (in parallel when workers > 1) and
    merged in letter order, so the result does not depend on `workers`.

    Raises:
        ValueError: unless 3 <= max_len <= 8, the range giving at least 64 samples
        NonMonotoneSamples: if the right fixed points are not cyclically ordered
            like the left ones
    """
    if not 3 <= max_len <= 8:
        raise ValueError("word length must lie in 3..8")
    blocks = range(8)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _block_fixed_points(pair, b, max_len), blocks))
    else:
        parts = [_block_fixed_points(pair, b, max_len) for b in blocks]
    left = np.concatenate([p[0] for p in parts])
    right = np.concatenate([p[1] for p in parts])

    order = np.lexsort((right, left))
    left, right = left[order], right[order]
    keep = np.concatenate([[True], np.diff(left) > MERGE_TOL])
    left, right = left[keep], right[keep]
    if len(left) > 1 and left[0] + math.pi - left[-1] <= MERGE_TOL:
        left, right = left[:-1], right[:-1]
    log.debug("limit curve: %d distinct fixed points from words up to length %d", len(left), max_len)

    try:
        circle_map = CircleMap.from_samples(left, right, tol=0.0)
    except NotMonotone as exc:
        raise NonMonotoneSamples("fixed points are not monotonically paired",
                                 residual=exc.residual) from exc
    return LimitCurve(left, right, meridian_from_homeo(circle_map, label=f"limit-curve-{max_len}"))


def export_limit_curve(curve: LimitCurve, path: Union[str, Path]) -> Path:
    """Write the samples as a homeo meridian JSON."""
    return save_meridian(curve.meridian, path)


def check_orthogonal(chart: TetraChart, xs: Sequence[float], ys: Sequence[float]) -> float:
    """Largest |<gamma(x), eta(y)>| over the samples."""
    return max(abs(inner(chart.gamma(x), chart.eta(y))) for x in xs for y in ys)
