"""Tests for pleated surfaces, finite earthquakes and quasiconformal diagnostics."""

import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from engine import earthquake_lab as eq
from engine.errors import NonPositiveWeight, OnBendingLine, OnLeaf, SingularJacobian
from engine.hyperbolic import (OrientedGeodesic, cayley_inverse, hyperbolic_distance, mobius, order_two_elliptic,
                               rp1_act, rp1_vector, standard_frame, translation_length)

AXIS = OrientedGeodesic(0.0, math.pi)
OFF_AXIS = 1 + 1j


def wobble(psi):
    return psi + 0.15 * np.sin(2 * psi)


# =============================================================================
# Pleated surfaces
# =============================================================================

class TestPleated:
    def test_dual_distance_is_bend(self):
        assert eq.pleat_single(AXIS, 0.7).dual_distance() == pytest.approx(0.7)

    def test_sigma0_translation_length(self):
        surface = eq.pleat_single(AXIS, 0.4)
        assert translation_length(surface.sigma0) == pytest.approx(0.8)

    def test_non_positive_bend(self):
        with pytest.raises(NonPositiveWeight):
            eq.pleat_single(AXIS, 0.0)

    def test_gauss_image_sides(self):
        surface = eq.pleat_single(AXIS, 0.5)
        right = -1 + 2j
        assert surface.gauss_image(right) == (right, right)
        left, fixed = surface.gauss_image(OFF_AXIS)
        assert fixed == OFF_AXIS
        assert left == pytest.approx(complex(mobius(surface.sigma0, OFF_AXIS)))

    def test_composition_matches_projections(self):
        surface = eq.pleat_single(AXIS, 0.5)
        for q in (OFF_AXIS, -1 + 2j, 0.3 + 0.4j):
            left, right = surface.gauss_image(q)
            assert eq.pleated_composition(surface, left) == pytest.approx(right)

    def test_composition_conjugates_by_sigma0(self):
        surface = eq.pleat_single(AXIS, 0.5)
        image = eq.pleated_composition(surface, OFF_AXIS)
        # sigma0 attracts towards 0, so its inverse pushes left points up by e^(2d)
        assert image == pytest.approx(math.e * OFF_AXIS)
        sigma_inv = np.linalg.inv(surface.sigma0)
        assert_allclose(order_two_elliptic(image),
                        sigma_inv @ order_two_elliptic(OFF_AXIS) @ surface.sigma0, atol=1e-12)
        assert hyperbolic_distance(1j, eq.pleated_composition(surface, 1j + 1e-3)) == pytest.approx(1.0, abs=1e-3)

    def test_composition_is_single_leaf_earthquake(self):
        d = 0.5
        surface = eq.pleat_single(AXIS, d)
        lam = eq.FiniteLamination([((0.0, math.pi), d)])
        for q in (OFF_AXIS, 0.3 + 0.4j, 2 + 0.1j):
            assert eq.earthquake(lam, q, "left", basepoint=-1 + 1j) == pytest.approx(
                eq.pleated_composition(surface, q))

    def test_composition_on_leaf(self):
        with pytest.raises(OnBendingLine):
            eq.pleated_composition(eq.pleat_single(AXIS, 0.5), 2j)

    def test_pieces_are_parametrised_by_sides(self):
        surface = eq.pleat_single(AXIS, 0.5)
        assert_allclose(surface.s1_point(-1 + 1j) @ surface.s1_point(-1 + 1j), -np.eye(2), atol=1e-12)
        with pytest.raises(ValueError):
            surface.s1_point(OFF_AXIS)
        with pytest.raises(ValueError):
            surface.s2_point(-1 + 1j)


# =============================================================================
# Finite laminations
# =============================================================================

class TestLamination:
    def test_negative_weight(self):
        with pytest.raises(NonPositiveWeight):
            eq.FiniteLamination([((0.0, math.pi), -1.0)])

    def test_crossing_leaves(self):
        with pytest.raises(ValueError):
            eq.FiniteLamination([((0.0, math.pi), 1.0), ((math.pi / 2, 3 * math.pi / 2), 1.0)])

    def test_degenerate_leaf(self):
        with pytest.raises(ValueError):
            eq.FiniteLamination([((1.0, 1.0), 1.0)])

    def test_nested_leaves_are_accepted(self):
        lam = eq.FiniteLamination([((0.0, math.pi), 1.0), ((0.2, 0.8), 0.5)])
        assert len(lam) == 2

    def test_save_and_load(self, tmp_path):
        lam = eq.FiniteLamination([((-0.6, math.pi + 0.6), 0.6)])
        path = eq.save_lamination(lam, tmp_path / "lam.json")
        assert eq.load_lamination(path).to_list() == lam.to_list()

    def test_load_wrapped_leaves(self, tmp_path):
        path = tmp_path / "wrapped.json"
        path.write_text(json.dumps({"leaves": [{"a": 0.0, "b": 3.0, "w": 1.5}]}))
        lam = eq.load_lamination(path)
        assert lam.to_list() == [{"a": 0.0, "b": 3.0, "w": 1.5}]

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            eq.load_lamination(tmp_path / "absent.json")


# =============================================================================
# Earthquakes
# =============================================================================

class TestEarthquake:
    def test_empty_lamination_is_identity(self):
        lam = eq.FiniteLamination()
        for side in eq.SIDES:
            assert eq.earthquake(lam, 0.3 + 2j, side) == pytest.approx(0.3 + 2j)

    def test_basepoint_stratum_is_fixed(self):
        lam = eq.FiniteLamination([((0.0, math.pi), 0.8)])
        assert eq.earthquake(lam, 2 + 1j, basepoint=OFF_AXIS) == pytest.approx(2 + 1j)

    def test_far_stratum_slides_along_leaf(self):
        lam = eq.FiniteLamination([((0.0, math.pi), 0.8)])
        p = -1 + 1j
        image = eq.earthquake(lam, p, "left", basepoint=OFF_AXIS)
        ratio = image / p
        assert ratio.imag == pytest.approx(0.0, abs=1e-12)
        assert ratio.real > 0
        assert abs(math.log(ratio.real)) == pytest.approx(1.6)

    def test_left_and_right_are_inverse(self):
        lam = eq.FiniteLamination([((0.0, math.pi), 0.8)])
        p = -1 + 0.5j
        left = eq.stratum_map(lam, p, "left", OFF_AXIS)
        right = eq.stratum_map(lam, p, "right", OFF_AXIS)
        assert_allclose(left @ right, np.eye(2), atol=1e-12)

    def test_basepoint_on_leaf(self):
        lam = eq.FiniteLamination([((0.0, math.pi), 0.8)])
        with pytest.raises(OnLeaf):
            eq.earthquake(lam, -1 + 1j)

    def test_invalid_side(self):
        with pytest.raises(ValueError):
            eq.earthquake(eq.FiniteLamination(), 1j, "up")

    def test_boundary_map_of_empty_lamination(self):
        boundary = eq.earthquake_boundary_map(eq.FiniteLamination(), 64)
        psi = np.array([0.1, 1.2, 2.8])
        assert_allclose(boundary(psi), psi, atol=1e-10)

    def test_report_shape(self):
        report = eq.quake_report(eq.FiniteLamination(), [eq.BASEPOINT])
        assert set(report) == {"leaves", "points"}
        assert report["points"][0]["left"] == pytest.approx([0.0, 1.0])
        with_boundary = eq.quake_report(eq.FiniteLamination(), [eq.BASEPOINT], samples=64)
        assert with_boundary["boundarySamples"] == 64
        assert with_boundary["crossRatioNorm"] < 1e-8


# =============================================================================
# Quasiconformal diagnostics
# =============================================================================

class TestDiagnostics:
    def test_quadruples_are_harmonic(self):
        quads = eq.symmetric_quadruples(20)
        cr = eq._cross_ratio(rp1_vector(quads))
        assert_allclose(cr, -np.ones(20), atol=1e-9)

    def test_quadruples_are_prefix_stable(self):
        assert_allclose(eq.symmetric_quadruples(5), eq.symmetric_quadruples(40)[:5])

    def test_quadruples_match_point_frames(self):
        rng = np.random.default_rng(7)
        draws = rng.random((6, 3))
        points = cayley_inverse(0.95 * np.sqrt(draws[:, 0]) * np.exp(2j * math.pi * draws[:, 1]))
        quads = eq.symmetric_quadruples(6, seed=7)
        for row, p, beta in zip(quads, points, draws[:, 2] * math.pi):
            expected = rp1_act(standard_frame(complex(p)), eq.HARMONIC + beta)
            assert_allclose(np.sin(row - expected), np.zeros(4), atol=1e-12)

    def test_mobius_maps_preserve_cross_ratio(self, hyperbolic_matrix):
        assert eq.cross_ratio_norm(lambda psi: rp1_act(hyperbolic_matrix, psi), n=200) < 1e-9

    def test_two_sided_mobius(self, hyperbolic_matrix, elliptic_matrix):
        def both(psi):
            return rp1_act(hyperbolic_matrix, rp1_act(elliptic_matrix, psi))
        assert eq.cross_ratio_norm(both, n=500) < 1e-9

    def test_post_composition_is_exact(self, hyperbolic_matrix):
        base = eq.cross_ratio_norm(wobble, n=500)
        moved = eq.cross_ratio_norm(lambda psi: rp1_act(hyperbolic_matrix, wobble(psi)), n=500)
        assert base > 0
        assert moved == pytest.approx(base, abs=1e-9)

    @pytest.mark.slow
    def test_sampled_norm_against_dense(self):
        dense = eq.cross_ratio_norm(wobble, eq.DENSE_QUADRUPLES, workers=4)
        assert eq.cross_ratio_norm(wobble, 50_000) == pytest.approx(dense, rel=0.02)

    @pytest.mark.slow
    def test_pre_composition_against_dense(self):
        shift = np.diag([math.exp(0.2), math.exp(-0.2)])
        dense = eq.cross_ratio_norm(wobble, eq.DENSE_QUADRUPLES, workers=4)
        pre = eq.cross_ratio_norm(lambda psi: wobble(rp1_act(shift, psi)), eq.DENSE_QUADRUPLES, workers=4)
        assert pre == pytest.approx(dense, rel=0.02)

    def test_norm_grows_with_samples(self):
        small = eq.cross_ratio_norm(wobble, n=50)
        large = eq.cross_ratio_norm(wobble, n=400, workers=3)
        assert 0 < small <= large

    def test_isometry_has_unit_dilatation(self):
        assert eq.max_dilatation(eq.disc_isometry(0.3 + 0.1j, 0.5), n=50) == pytest.approx(1.0, abs=1e-5)

    def test_affine_stretch(self):
        k = eq.max_dilatation(lambda z: z + 0.25 * z.conjugate(), n=20)
        assert k == pytest.approx(5 / 3, abs=1e-6)

    def test_half_plane_samples(self):
        k = eq.max_dilatation(lambda z: 2 * z + 1, n=20, domain="half-plane")
        assert k == pytest.approx(1.0, abs=1e-6)

    def test_singular_differential(self):
        with pytest.raises(SingularJacobian):
            eq.max_dilatation(lambda z: 0 * z, n=5)

    def test_unknown_domain(self):
        with pytest.raises(ValueError):
            eq.max_dilatation(lambda z: z, domain="sphere")

    def test_isometry_boundary_is_mobius(self):
        boundary = eq.disc_to_rp1_map(eq.disc_isometry(0.2 - 0.3j, 1.0))
        assert eq.cross_ratio_norm(boundary, n=100) < 1e-8
