"""Tests for invisible domains, convex hulls and width."""

import logging
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from engine import domains
from engine.boundary import graph_meridian, lightlike_plane_meridian, meridian_from_homeo, sawtooth_meridian
from engine.circle_maps import CircleMap
from engine.core_models import MatPoint, QuadricPoint, q22
from engine.errors import DegenerateHull, Inconclusive

E4 = QuadricPoint([0.0, 0.0, 0.0, 1.0])
QUARTER_TURN = np.array([[0.0, -1.0], [1.0, 0.0]])


def equator(alpha):
    return np.array([math.cos(alpha), math.sin(alpha), 0.0])


def hemi_distance(points, alpha):
    return np.arccos(np.clip(domains.hemisphere(points) @ equator(alpha), -1.0, 1.0))


def charted(hull, p):
    """Unit quadric point over a chart point of the hull oracle."""
    v = hull.unchart(p)
    return QuadricPoint(v / math.sqrt(-q22(v)))


def wobble(theta):
    return theta + 0.01 * np.sin(4 * theta)


# =============================================================================
# Extremal extensions
# =============================================================================

class TestExtensions:
    def test_disc_grid_drops_corners(self):
        assert len(domains.disc_grid(3)) == 5

    def test_hemisphere(self):
        assert_allclose(domains.hemisphere([[0.0, 0.0], [1.0, 0.0]]), [[0, 0, 1], [1, 0, 0]], atol=1e-15)

    def test_flat_meridian_at_centre(self):
        flat = meridian_from_homeo(CircleMap.identity(64))
        f_minus, f_plus = domains.extremal_extensions(flat, np.zeros((1, 2)), 64)
        assert f_minus[0] == pytest.approx(-math.pi / 2, abs=1e-12)
        assert f_plus[0] == pytest.approx(math.pi / 2, abs=1e-12)

    def test_ordered_on_grid(self, two_step):
        f_minus, f_plus = domains.extremal_extensions(two_step, domains.disc_grid(9), 128)
        assert np.all(f_minus <= f_plus + 1e-12)

    def test_two_step_closed_forms(self, two_step):
        # lift minima -pi/2 at alpha = 0, pi and maxima 0 at alpha = pi/2, 3 pi/2
        pts = domains.disc_grid(9)
        f_minus, f_plus = domains.extremal_extensions(two_step, pts, 128)
        lower = np.maximum(-hemi_distance(pts, math.pi / 2), -hemi_distance(pts, 3 * math.pi / 2))
        upper = np.minimum(hemi_distance(pts, 0.0), hemi_distance(pts, math.pi)) - math.pi / 2
        assert_allclose(f_minus, lower, rtol=0, atol=1e-9)
        assert_allclose(f_plus, upper, rtol=0, atol=1e-9)

    def test_lightlike_plane_extensions_coincide(self):
        meridian = lightlike_plane_meridian(0.3, 1.1)
        f_minus, f_plus = domains.extremal_extensions(meridian, domains.disc_grid(9), 128)
        assert_allclose(f_minus, f_plus, rtol=0, atol=1e-9)

    def test_workers_do_not_change_result(self, two_step):
        pts = domains.disc_grid(21)
        one = domains.extremal_extensions(two_step, pts, 128, workers=1, chunk=50)
        many = domains.extremal_extensions(two_step, pts, 128, workers=4, chunk=50)
        assert_allclose(one[0], many[0], rtol=0, atol=0)
        assert_allclose(one[1], many[1], rtol=0, atol=0)


# =============================================================================
# Invisible domain
# =============================================================================

class TestInvisibleDomain:
    def test_witness_is_inside(self, hyperbolic_matrix):
        meridian = graph_meridian(hyperbolic_matrix)
        centre = MatPoint(meridian.properness_witness().centre).quadric()
        assert domains.lift_membership(centre, meridian)
        assert domains.in_invisible_domain(centre, meridian)
        assert domains.dual_plane_disjoint(centre, meridian)

    def test_identity_sees_hyperbolic_graph(self, hyperbolic_matrix):
        # the dual plane of the identity is bounded by the diagonal, which the
        # graph of a hyperbolic map crosses at its fixed points
        meridian = graph_meridian(hyperbolic_matrix)
        assert not domains.dual_plane_disjoint(E4, meridian)
        assert not domains.in_invisible_domain(E4, meridian)

    def test_two_step_witness(self, two_step):
        centre = MatPoint(two_step.properness_witness().centre).quadric()
        assert domains.lift_membership(centre, two_step)
        assert domains.in_invisible_domain(centre, two_step)

    def test_identity_graph(self, hyperbolic_matrix):
        flat = meridian_from_homeo(CircleMap.identity(256))
        assert domains.in_invisible_domain(MatPoint(QUARTER_TURN).quadric(), flat)
        assert not domains.in_invisible_domain(E4, flat)
        assert not domains.in_invisible_domain(MatPoint(hyperbolic_matrix).quadric(), flat)

    def test_lift_membership_agrees(self, hyperbolic_matrix, rng):
        meridian = graph_meridian(hyperbolic_matrix)
        hull = domains.convex_hull_oracle(meridian, 48)
        points = [E4, MatPoint(hull.centre).quadric()]
        for p in rng.normal(scale=0.4, size=(20, 3)):
            if q22(hull.unchart(p)) < -1e-3:
                points.append(charted(hull, p))
        compared = 0
        for x in points:
            try:
                expected = domains.in_invisible_domain(x, meridian)
            except Inconclusive:
                continue
            assert domains.lift_membership(x, meridian) == expected
            compared += 1
        assert compared >= 10

    def test_domain_is_convex(self, hyperbolic_matrix):
        meridian = graph_meridian(hyperbolic_matrix)
        hull = domains.convex_hull_oracle(meridian, 48)
        a, b = np.array([0.15, 0.0, 0.05]), np.array([-0.1, 0.12, -0.08])
        for s in np.linspace(0.0, 1.0, 7):
            x = charted(hull, (1 - s) * a + s * b)
            assert domains.lift_membership(x, meridian)
            assert domains.in_invisible_domain(x, meridian)


# =============================================================================
# Convex hull and width
# =============================================================================

class TestHull:
    def test_two_step_has_four_lightlike_facets(self, two_step):
        hull = domains.convex_hull_oracle(two_step, 96)
        kinds = [f.kind for f in hull.facets()]
        assert kinds == ["lightlike"] * 4

    def test_hull_contains_its_barycentre(self, two_step):
        hull = domains.convex_hull_oracle(two_step, 48)
        assert hull.contains(hull.unchart(hull.points.mean(axis=0)))

    def test_hull_lies_in_domain(self, two_step):
        hull = domains.convex_hull_oracle(two_step, 48)
        bary = hull.points.mean(axis=0)
        for vertex in hull.points[::6]:
            assert domains.lift_membership(charted(hull, bary + 0.9 * (vertex - bary)), two_step)

    def test_mobius_graph_is_flat(self, hyperbolic_matrix, caplog):
        meridian = graph_meridian(hyperbolic_matrix, 128)
        with caplog.at_level(logging.WARNING, logger="engine.domains"):
            hull = domains.convex_hull_oracle(meridian, 48)
        assert hull.degenerate
        assert "flat hull" in caplog.text
        assert domains.facet_count(meridian, 48) == 0
        assert domains.width_estimate(meridian, 48) == 0.0

    def test_lightlike_plane_rejected(self, caplog):
        with caplog.at_level(logging.WARNING, logger="engine.domains"):
            with pytest.raises(DegenerateHull):
                domains.convex_hull_oracle(lightlike_plane_meridian(0.3, 1.1))
        assert "not proper" in caplog.text

    def test_sawtooth_has_lightlike_facet(self):
        hull = domains.convex_hull_oracle(sawtooth_meridian(1.0), 96)
        assert not hull.degenerate
        assert "lightlike" in [f.kind for f in hull.facets()]

    def test_small_perturbation_is_thin(self):
        meridian = meridian_from_homeo(CircleMap.from_function(wobble))
        assert not domains.convex_hull_oracle(meridian, 48).degenerate
        assert 0.0 <= domains.width_estimate(meridian, 48, 16) < 0.1

    @pytest.mark.slow
    def test_two_step_width(self, two_step):
        assert domains.width_estimate(two_step, 96, 64) == pytest.approx(math.pi / 2, abs=1e-6)


class TestSawteeth:
    def test_counts(self, two_step):
        assert len(domains.detect_sawteeth(two_step)) == 4
        teeth = domains.detect_sawteeth(sawtooth_meridian(1.0))
        assert len(teeth) == 1
        assert teeth[0].xi == pytest.approx(1.0)
        assert teeth[0].eta == pytest.approx(0.0)

    def test_graphs_have_none(self, hyperbolic_matrix):
        assert domains.detect_sawteeth(graph_meridian(hyperbolic_matrix)) == []


# =============================================================================
# Report
# =============================================================================

class TestReport:
    def test_two_step_report(self, two_step):
        report = domains.build_domain_report(two_step, grid=5, samples=64, hull_samples=48, starts=8)
        data = report.to_dict()
        assert set(data) == {"meridian", "proper", "oscillation", "grid", "points", "fMinus", "fPlus",
                             "width", "facetCounts", "facetKinds", "sawteeth", "hullSamples"}
        assert data["proper"] is True
        assert data["oscillation"] == pytest.approx(math.pi / 2)
        assert set(data["facetCounts"]) == {"48", "24"}
        assert len(data["sawteeth"]) == 4
        assert len(report.f_minus) == len(report.points)

    def test_improper_report(self):
        with pytest.raises(DegenerateHull):
            domains.build_domain_report(lightlike_plane_meridian(0.3, 1.1), grid=3)
