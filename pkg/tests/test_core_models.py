"""Tests for the quadric, matrix and cover models."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from engine import core_models as cm
from engine.errors import DegeneratePlane, NotOnQuadric, NotTangent, OutOfChart

E4 = np.array([0.0, 0.0, 0.0, 1.0])


# =============================================================================
# Linear algebra
# =============================================================================

class TestMatrixModel:
    def test_determinant_is_minus_quadratic_form(self, rng):
        for x in rng.normal(size=(20, 4)):
            assert np.linalg.det(cm.matrix_of(x)) == pytest.approx(-cm.q22(x), abs=1e-12)

    def test_vector_of_inverts_matrix_of(self, rng):
        x = rng.normal(size=4)
        assert_allclose(cm.vector_of(cm.matrix_of(x)), x, atol=1e-14)

    def test_mat_inner_polarises_determinant(self, rng):
        v, w = rng.normal(size=(2, 4))
        assert cm.mat_inner(cm.matrix_of(v), cm.matrix_of(v)) == pytest.approx(
            -np.linalg.det(cm.matrix_of(v)), abs=1e-12)
        assert cm.mat_inner(cm.matrix_of(v), cm.matrix_of(w)) == pytest.approx(cm.inner(v, w), abs=1e-12)

    def test_identity_matrix_is_e4(self):
        assert_allclose(cm.matrix_of(E4), np.eye(2))

    def test_canonical_sign(self):
        assert_allclose(cm.canonical_sign(-np.eye(2)), np.eye(2))
        assert_allclose(cm.canonical_sign([[0.0, -2.0], [0.5, 0.0]]), [[0.0, 2.0], [-0.5, 0.0]])

    def test_cross_product_is_orthogonal(self):
        v = cm.vector_of(cm.GEN_U)
        w = cm.vector_of(cm.GEN_V)
        c = cm.cross(E4, v, w)
        assert cm.inner(c, v) == pytest.approx(0.0, abs=1e-12)
        assert cm.inner(c, w) == pytest.approx(0.0, abs=1e-12)
        assert cm.inner(c, E4) == pytest.approx(0.0, abs=1e-12)

    def test_future_generator_is_future_timelike(self, rng):
        p = cm.random_point(rng)
        f = cm.future_generator(p.x)
        assert cm.inner(f, f) == pytest.approx(-1.0)
        assert cm.is_future(p.x, f)
        assert not cm.is_future(p.x, -f)

    def test_klein_chart(self):
        assert_allclose(cm.klein_chart([1.0, 2.0, 3.0, 2.0]), [0.5, 1.0, 1.5])
        with pytest.raises(OutOfChart):
            cm.klein_chart([0.0, 0.0, 1.0, 0.0])


# =============================================================================
# Points and isometries
# =============================================================================

class TestPoints:
    def test_normalized_lands_on_quadric(self):
        p = cm.QuadricPoint.normalized([0.3, 0.1, 2.0, 1.0])
        assert p.residual() < 1e-14

    def test_normalized_rejects_spacelike(self):
        with pytest.raises(NotOnQuadric):
            cm.QuadricPoint.normalized([1.0, 0.0, 0.0, 0.0])

    def test_mat_point_is_sign_canonical(self):
        assert_allclose(cm.MatPoint(-np.eye(2)).m, np.eye(2))

    def test_mat_roundtrip_up_to_sign(self, rng):
        p = cm.random_point(rng)
        back = cm.quadric_from_mat(cm.mat_from_quadric(p))
        assert back.same_point(p)

    def test_mat_from_quadric_rejects_off_quadric(self):
        with pytest.raises(NotOnQuadric):
            cm.mat_from_quadric(cm.QuadricPoint([0.0, 0.0, 0.0, 2.0]))

    def test_tangent_vector_checks_orthogonality(self):
        base = cm.QuadricPoint(E4)
        cm.TangentVector(base, [1.0, 0.0, 0.0, 0.0])
        with pytest.raises(NotTangent):
            cm.TangentVector(base, [0.0, 0.0, 0.0, 1.0])

    def test_isometry_preserves_inner_product(self, rng):
        g = cm.Isometry(cm.random_sl2(rng, 0.5), cm.random_sl2(rng, 0.5))
        p = cm.random_point(rng)
        u = cm.random_tangent(rng, p).v
        v = cm.random_tangent(rng, p).v
        assert cm.inner(g.act_vector(u), g.act_vector(v)) == pytest.approx(cm.inner(u, v), abs=1e-9)
        assert cm.QuadricPoint(g.act_vector(p.x)).residual() < 1e-9

    def test_isometry_inverse_and_compose(self, rng):
        g = cm.Isometry(cm.random_sl2(rng), cm.random_sl2(rng))
        x = cm.random_point(rng).matrix()
        assert_allclose(g.compose(g.inverse()).act_matrix(x), x, atol=1e-9)

    def test_isometry_sign_is_canonical(self, rng):
        b = cm.random_sl2(rng, 0.5)
        g = cm.Isometry(-np.eye(2), -b)
        assert_allclose(g.left, np.eye(2))
        assert_allclose(g.right, b)
        x = cm.random_point(rng).matrix()
        assert_allclose(g.act_matrix(x), cm.Isometry(np.eye(2), b).act_matrix(x), atol=1e-12)

    def test_isometry_rejects_non_unimodular(self):
        with pytest.raises(NotOnQuadric):
            cm.Isometry(2 * np.eye(2))

    def test_apply_isometry(self):
        g = cm.Isometry(cm.GEN_V @ cm.GEN_W, np.eye(2))
        image = cm.apply_isometry(g, cm.MatPoint(np.eye(2)))
        assert_allclose(image.m, cm.canonical_sign(cm.GEN_V @ cm.GEN_W))


# =============================================================================
# Universal cover
# =============================================================================

class TestCover:
    @pytest.mark.parametrize("branch", [-1, 0, 3])
    def test_lift_projects_back(self, rng, branch):
        p = cm.random_point(rng)
        lifted = cm.cover_lift(p, branch)
        assert_allclose(cm.cover_project(lifted).x, p.x, atol=1e-12)
        assert -math.pi + 2 * math.pi * branch < lifted.t <= math.pi + 2 * math.pi * branch

    def test_from_disc_centre(self):
        p = cm.UnivCoverPoint.from_disc((0.0, 0.0), 0.5)
        assert_allclose(p.y, [0.0, 0.0, 1.0])
        assert p.disc() == pytest.approx((0.0, 0.0))

    def test_from_disc_outside(self):
        with pytest.raises(OutOfChart):
            cm.UnivCoverPoint.from_disc((1.0, 0.0), 0.0)

    def test_chart_metric_matches_pullback(self):
        fd = cm.pullback_metric(cm.cover_chart_embedding, (0.3, -0.4, 0.7))
        assert_allclose(fd, cm.cover_chart_metric(0.3, -0.4), atol=1e-8)


# =============================================================================
# Curvature
# =============================================================================

class TestCurvature:
    def test_sectional_curvature_is_minus_one(self, rng):
        for _ in range(50):
            p = cm.random_point(rng)
            u = cm.random_tangent(rng, p).v
            v = cm.random_tangent(rng, p).v
            assert cm.sectional_curvature(p, u, v) == pytest.approx(-1.0, abs=1e-8)

    def test_degenerate_plane(self):
        p = cm.QuadricPoint(E4)
        u = np.array([1.0, 0.0, 0.0, 0.0])
        with pytest.raises(DegeneratePlane):
            cm.sectional_curvature(p, u, 2 * u)

    def test_nearly_degenerate_plane(self):
        p = cm.QuadricPoint(E4)
        u = np.array([1.0, 0.0, 0.0, 0.0])
        # gram determinant 2.5e-9
        with pytest.raises(DegeneratePlane):
            cm.sectional_curvature(p, u, [0.0, 5e-5, 0.0, 0.0])
        assert cm.sectional_curvature(p, u, [0.0, 1e-3, 0.0, 0.0]) == pytest.approx(-1.0)

    def test_non_tangent_vector(self):
        p = cm.QuadricPoint(E4)
        with pytest.raises(NotTangent):
            cm.sectional_curvature(p, [1.0, 0.0, 0.0, 0.0], E4)

    def test_christoffel_oracle(self):
        c = np.array([0.3, -0.2, 0.5])
        k = cm.christoffel_curvature(cm.cover_metric_callable, c, [1.0, 0.0, 0.0], [0.0, 0.0, 1.0])
        assert k == pytest.approx(-1.0, abs=1e-3)


# =============================================================================
# Helpers
# =============================================================================

class TestHelpers:
    def test_random_sl2_has_unit_determinant(self, rng):
        for _ in range(10):
            assert np.linalg.det(cm.random_sl2(rng)) == pytest.approx(1.0)

    def test_parse_point(self):
        assert_allclose(cm.parse_point("1,2,3,4"), [1, 2, 3, 4])
        assert cm.parse_point(None) is None
        with pytest.raises(ValueError):
            cm.parse_point("1,2")
