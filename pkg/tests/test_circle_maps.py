"""Tests for sampled circle homeomorphisms."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from engine.circle_maps import CircleMap, lift_increasing
from engine.errors import NotMonotone
from engine.hyperbolic import rotation, rp1_act


class TestCircleMap:
    def test_lift_increasing(self):
        assert_allclose(lift_increasing(np.array([3.0, 0.1])), [3.0, 0.1 + math.pi])

    def test_identity_is_periodic(self):
        ident = CircleMap.identity(64)
        theta = np.array([0.2, 1.4, 2.9])
        assert_allclose(ident(theta), theta, atol=1e-12)
        assert_allclose(ident.lifted(theta + math.pi), ident.lifted(theta) + math.pi, atol=1e-12)

    def test_rotation_map(self):
        shift = CircleMap.from_matrix(rotation(0.3), 64)
        assert float(shift(np.array(0.1))) == pytest.approx(0.4)

    def test_interpolated_values_track_exact_map(self, hyperbolic_matrix):
        exact = CircleMap.from_matrix(hyperbolic_matrix, 512)
        sampled = CircleMap(exact.theta, exact.phi)
        theta = np.linspace(0.01, 3.1, 37)
        assert np.max(np.abs(np.sin(sampled(theta) - exact(theta)))) < 1e-3

    def test_reversing_samples_rejected(self):
        with pytest.raises(NotMonotone):
            CircleMap.from_samples([0.0, 1.0, 2.0], [2.0, 1.0, 0.0])

    def test_too_few_samples(self):
        with pytest.raises(NotMonotone):
            CircleMap.from_samples([0.0, 1.0], [0.0, 1.0])

    def test_repeated_angles(self):
        with pytest.raises(NotMonotone):
            CircleMap.from_samples([0.0, 1.0, 1.0, 2.0], [0.0, 1.0, 1.5, 2.0])

    def test_compose_left(self, hyperbolic_matrix):
        phi = CircleMap.from_matrix(hyperbolic_matrix, 64)
        composed = phi.compose_left(rotation(0.5))
        theta = np.array([0.3, 2.0])
        assert_allclose(composed(theta), rp1_act(rotation(0.5), phi(theta)), atol=1e-12)

    def test_compose_right(self, hyperbolic_matrix):
        phi = CircleMap.from_matrix(hyperbolic_matrix, 64)
        composed = phi.compose_right(rotation(0.5))
        theta = np.array([0.3, 2.0])
        assert_allclose(composed(theta), phi(rp1_act(rotation(0.5), theta)), atol=1e-12)
