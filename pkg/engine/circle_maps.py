"""
Orientation-preserving homeomorphisms of RP^1.

A CircleMap is stored as samples of a lift: increasing angles theta in [0, pi)
and lifted values phi with phi(theta + pi) = phi(theta) + pi. Evaluation
between samples uses a periodic monotone PCHIP interpolant; maps built from a
closed form keep that form for exact evaluation.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import NotMonotone
from .hyperbolic import rp1_act, rp1_wrap

AngleFunction = Callable[[np.ndarray], np.ndarray]


def lift_increasing(values: np.ndarray) -> np.ndarray:
    """Lift angles mod pi assuming each step moves forward by less than pi."""
    values = np.asarray(values, dtype=float)
    steps = np.mod(np.diff(values), math.pi)
    return values[0] + np.concatenate([[0.0], np.cumsum(steps)])


@dataclass(eq=False)
class CircleMap:
    theta: np.ndarray
    phi: np.ndarray
    exact: Optional[AngleFunction] = None

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float)
        self.phi = np.asarray(self.phi, dtype=float)
        ext_theta = np.concatenate([self.theta - math.pi, self.theta, self.theta + math.pi])
        ext_phi = np.concatenate([self.phi - math.pi, self.phi, self.phi + math.pi])
        self._interp = PchipInterpolator(ext_theta, ext_phi, extrapolate=True)

    @classmethod
    def from_samples(cls, theta, phi, exact: Optional[AngleFunction] = None,
                     tol: float = 1e-12) -> "CircleMap":
        """
        Build a map from samples, checking it is an orientation-preserving
        homeomorphism at the sampled resolution.

        Raises:
            NotMonotone: if the samples step backwards or wind more than once
        """
        theta = np.mod(np.asarray(theta, dtype=float), math.pi)
        order = np.argsort(theta, kind="stable")
        theta = theta[order]
        raw = np.mod(np.asarray(phi, dtype=float)[order], math.pi)
        if len(theta) < 3:
            raise NotMonotone("need at least three samples")
        if np.any(np.diff(theta) <= tol):
            raise NotMonotone("repeated sample angles", residual=float(np.min(np.diff(theta))))
        steps = np.mod(np.diff(np.append(raw, raw[0])), math.pi)
        winding = float(steps.sum())
        if np.any(steps <= tol) or abs(winding - math.pi) > 1e-6:
            raise NotMonotone("samples are not cyclically increasing",
                              residual=float(abs(winding - math.pi)))
        return cls(theta, lift_increasing(raw), exact)

    @classmethod
    def from_function(cls, func: AngleFunction, samples: int = 256) -> "CircleMap":
        theta = np.arange(samples) * math.pi / samples
        return cls.from_samples(theta, func(theta), exact=func)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, samples: int = 256) -> "CircleMap":
        matrix = np.asarray(matrix, dtype=float)
        return cls.from_function(lambda a: rp1_act(matrix, a), samples)

    @classmethod
    def identity(cls, samples: int = 256) -> "CircleMap":
        return cls.from_function(lambda a: np.mod(np.asarray(a, dtype=float), math.pi), samples)

    def lifted(self, theta) -> np.ndarray:
        """Continuous lift evaluated anywhere on the line; snapped to the closed form when known."""
        theta = np.asarray(theta, dtype=float)
        k = np.floor(theta / math.pi)
        approx = self._interp(theta - k * math.pi) + k * math.pi
        if self.exact is None:
            return approx
        return approx + rp1_wrap(self.exact(theta) - approx)

    def __call__(self, theta) -> np.ndarray:
        """Values mod pi, exact when a closed form is known."""
        if self.exact is not None:
            return np.mod(self.exact(np.asarray(theta, dtype=float)), math.pi)
        return np.mod(self.lifted(theta), math.pi)

    def compose_left(self, matrix: np.ndarray) -> "CircleMap":
        """The map A o phi."""
        matrix = np.asarray(matrix, dtype=float)
        exact = None
        if self.exact is not None:
            inner_map = self.exact
            exact = lambda a: rp1_act(matrix, inner_map(a))
        return CircleMap.from_samples(self.theta, rp1_act(matrix, self.phi), exact)

    def compose_right(self, matrix: np.ndarray) -> "CircleMap":
        """The map phi o B, resampled on the same grid."""
        matrix = np.asarray(matrix, dtype=float)
        exact = None
        if self.exact is not None:
            inner_map = self.exact
            exact = lambda a: inner_map(rp1_act(matrix, a))
        values = exact(self.theta) if exact is not None else self(rp1_act(matrix, self.theta))
        return CircleMap.from_samples(self.theta, values, exact)
