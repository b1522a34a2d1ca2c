"""Tests for boundary points and achronal meridians."""

import json
import logging
import math

import numpy as np
import pytest

from engine import boundary as bd
from engine.core_models import matrix_of, q22, random_sl2
from engine.circle_maps import CircleMap
from engine.errors import NotMonotone, NotRankOne, OutOfChart

ADJUGATE = np.array([[0.0, -1.0], [1.0, 0.0]])


# =============================================================================
# Boundary points
# =============================================================================

class TestBoundaryPoint:
    def test_angles_are_reduced(self):
        p = bd.BoundaryPoint(math.pi + 0.2, -0.3)
        assert p.xi == pytest.approx(0.2)
        assert p.eta == pytest.approx(math.pi - 0.3)

    def test_rank_one_roundtrip(self):
        p = bd.BoundaryPoint(0.4, 2.2)
        assert bd.boundary_from_rank1(p.matrix()).distance(p) < 1e-12

    def test_adjugate_swaps(self, rng):
        for xi, eta in rng.uniform(0, math.pi, size=(20, 2)):
            p = bd.BoundaryPoint(xi, eta)
            swapped = bd.boundary_from_rank1(ADJUGATE @ p.matrix().T @ ADJUGATE.T)
            assert swapped.distance(bd.boundary_swap(p)) < 1e-10

    def test_equivariance(self, rng):
        p = bd.BoundaryPoint(1.0, 0.3)
        a, b = random_sl2(rng, 0.5), random_sl2(rng, 0.5)
        image = bd.boundary_from_rank1(a @ p.matrix() @ np.linalg.inv(b))
        assert image.distance(p.transform(a, b)) < 1e-9

    def test_null_vector(self):
        p = bd.BoundaryPoint(0.9, 2.0)
        v = p.null_vector()
        assert q22(v) == pytest.approx(0.0, abs=1e-14)
        assert bd.boundary_from_rank1(matrix_of(v)).distance(p) < 1e-10

    def test_cover_coordinates(self):
        alpha, t = bd.boundary_to_cover(bd.BoundaryPoint(1.0, 0.5))
        assert alpha == pytest.approx(1.5 + math.pi / 2)
        assert t == pytest.approx(0.5)

    def test_full_rank_rejected(self):
        with pytest.raises(NotRankOne):
            bd.boundary_from_rank1(np.eye(2))


class TestLimits:
    def test_diagonal_sequence(self):
        seq = [np.diag([math.exp(n), math.exp(-n)]) for n in range(8, 15)]
        limit = bd.boundary_limit(seq)
        assert isinstance(limit, bd.BoundaryPoint)
        assert limit.distance(bd.BoundaryPoint(0.0, math.pi / 2)) < 1e-6

    def test_conjugated_sequence(self, rng):
        a, b = random_sl2(rng, 0.5), random_sl2(rng, 0.5)
        seq = [a @ np.diag([math.exp(n), math.exp(-n)]) @ np.linalg.inv(b) for n in range(8, 15)]
        expected = bd.BoundaryPoint(0.0, math.pi / 2).transform(a, b)
        assert bd.boundary_limit(seq).distance(expected) < 1e-6

    def test_bounded_sequence(self):
        assert isinstance(bd.boundary_limit([np.eye(2)] * 5), bd.NoLimit)


class TestCausalSign:
    ORIGIN = bd.BoundaryPoint(0.0, 0.0)

    @pytest.mark.parametrize("xi,eta,expected", [
        (0.1, 0.2, bd.CausalRelation.SPACELIKE),
        (0.1, -0.2, bd.CausalRelation.TIMELIKE),
        (0.1, 0.0, bd.CausalRelation.LIGHTLIKE),
    ])
    def test_relations(self, xi, eta, expected):
        assert bd.causal_sign(self.ORIGIN, bd.BoundaryPoint(xi, eta)) is expected

    def test_antipodal(self):
        with pytest.raises(OutOfChart):
            bd.causal_sign(self.ORIGIN, bd.BoundaryPoint(math.pi / 2, 0.1))

    def test_chart(self):
        with pytest.raises(OutOfChart):
            bd.causal_sign(self.ORIGIN, bd.BoundaryPoint(0.4, 0.1), chart=((-0.2, 0.2), (-0.2, 0.2)))


# =============================================================================
# Meridians
# =============================================================================

class TestMeridians:
    def test_two_step_is_proper(self, two_step):
        assert two_step.is_proper()
        assert two_step.oscillation() == pytest.approx(math.pi / 2)
        assert two_step.segment_types() == [bd.HORIZONTAL, bd.VERTICAL, bd.HORIZONTAL, bd.VERTICAL]

    def test_lightlike_plane_is_improper(self):
        witness = bd.lightlike_plane_meridian(0.3, 1.1).properness_witness()
        assert not witness.proper
        assert witness.centre is None

    def test_mobius_graph_is_proper(self, hyperbolic_matrix):
        meridian = bd.graph_meridian(hyperbolic_matrix)
        witness = meridian.properness_witness()
        assert witness.proper
        assert witness.phi0 is not None
        assert witness.gap > 1e-3
        assert np.linalg.det(witness.centre) == pytest.approx(1.0)

    def test_identity_witness_is_quarter_turn(self):
        # phi0 shifts the three marked angles by pi/4
        witness = bd.meridian_from_homeo(CircleMap.identity(64)).properness_witness(64)
        assert witness.phi0 is not None
        assert witness.gap == pytest.approx(math.pi / 4, abs=1e-9)

    def test_graph_gap(self):
        identity = CircleMap.identity(64)
        assert bd._graph_gap(np.eye(2), identity, 64) == pytest.approx(0.0, abs=1e-12)
        c, s = math.cos(0.3), math.sin(0.3)
        assert bd._graph_gap(np.array([[c, -s], [s, c]]), identity, 64) == pytest.approx(0.3)

    def test_witness_graph_must_miss_meridian(self, monkeypatch, caplog):
        monkeypatch.setattr(bd, "_graph_gap", lambda matrix, phi, samples: 0.0)
        meridian = bd.meridian_from_homeo(CircleMap.identity(64))
        with caplog.at_level(logging.WARNING, logger="engine.boundary"):
            witness = meridian.properness_witness(64)
        assert witness.proper
        assert witness.phi0 is None
        assert witness.gap == 0.0
        assert "witness graph meets meridian" in caplog.text

    def test_identity_graph_is_flat(self):
        meridian = bd.meridian_from_homeo(CircleMap.identity(64))
        assert meridian.oscillation(64) == pytest.approx(0.0, abs=1e-12)

    def test_homeo_needs_enough_samples(self):
        assert bd.MIN_HOMEO_SAMPLES == 64
        with pytest.raises(ValueError):
            bd.meridian_from_homeo(CircleMap.identity(32))

    def test_null_vectors_are_null(self, two_step):
        vecs = two_step.null_vectors(64)
        assert np.max(np.abs(vecs[:, 0] ** 2 + vecs[:, 1] ** 2 - vecs[:, 2] ** 2 - vecs[:, 3] ** 2)) < 1e-12

    def test_graph_is_achronal(self, hyperbolic_matrix):
        curve = bd.graph_meridian(hyperbolic_matrix).boundary_points(64)
        relations = {bd.causal_sign(p, q) for p, q in zip(curve, curve[1:])}
        assert relations == {bd.CausalRelation.SPACELIKE}

    def test_backward_polygon(self):
        with pytest.raises(NotMonotone):
            bd.meridian_from_polygon([(0.0, 0.0), (1.0, -0.5)])

    def test_two_step_needs_distinct_points(self):
        with pytest.raises(NotMonotone):
            bd.two_step_meridian(0.5, 0.5)
        with pytest.raises(ValueError):
            bd.two_step_meridian(0.5, 1.0, variant=3)

    def test_sawtooth_parameter(self):
        with pytest.raises(NotMonotone):
            bd.sawtooth_meridian(4.0)


class TestMeridianFiles:
    def test_polygon_dict(self, two_step):
        again = bd.meridian_from_dict(two_step.to_dict())
        np.testing.assert_allclose(again.vertices, two_step.vertices)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            bd.meridian_from_dict({"kind": "spiral"})

    def test_load_two_step(self, tmp_path):
        path = tmp_path / "twostep.json"
        path.write_text(json.dumps({"kind": "two-step", "x": math.pi / 2, "y": 0.0}))
        meridian = bd.load_meridian(path)
        assert meridian.kind == "polygon"
        assert meridian.oscillation() == pytest.approx(math.pi / 2)

    def test_saved_homeo_reloads(self, hyperbolic_matrix, tmp_path):
        meridian = bd.graph_meridian(hyperbolic_matrix, 64)
        path = bd.save_meridian(meridian, tmp_path / "nested" / "graph.json")
        again = bd.load_meridian(path)
        np.testing.assert_allclose(again.circle_map.theta, meridian.circle_map.theta, rtol=0, atol=1e-15)
        np.testing.assert_allclose(again.circle_map.phi, meridian.circle_map.phi, rtol=0, atol=1e-12)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            bd.load_meridian(tmp_path / "absent.json")
