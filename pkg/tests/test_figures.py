"""Tests for chart projection and SVG figures."""

import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from engine import figures
from engine.core_models import GEN_U, QuadricPoint, vector_of
from engine.errors import UnknownFigure
from engine.geodesics_duality import exp_point

SVG = "{http://www.w3.org/2000/svg}"
E4 = QuadricPoint([0.0, 0.0, 0.0, 1.0])


def _timelike(ts):
    return [exp_point(E4, vector_of(GEN_U), float(t)).x for t in ts]


class TestChart:
    def test_curve_inside_chart_is_one_piece(self):
        pieces = figures.chart_pieces(_timelike(np.linspace(-1, 1, 50)))
        assert len(pieces) == 1
        assert pieces[0].shape == (50, 3)

    def test_curve_through_infinity_is_split(self):
        pieces = figures.chart_pieces(_timelike(np.linspace(0.2, math.pi - 0.2, 81)))
        assert len(pieces) == 2

    def test_projection_is_orthonormal(self):
        proj = figures.Projection.from_direction((1.0, 0.4, 0.25))
        assert float(proj.right @ proj.up) == pytest.approx(0.0, abs=1e-12)
        assert float(np.linalg.norm(proj.right)) == pytest.approx(1.0)

    def test_zero_direction(self):
        with pytest.raises(ValueError):
            figures.Projection.from_direction((0.0, 0.0, 0.0))


class TestFigures:
    def test_unknown_figure(self, quick_cfg):
        with pytest.raises(UnknownFigure):
            figures.build_figure("penrose", quick_cfg)

    @pytest.mark.parametrize("name", [
        "boundary-quadric", "lightcone", "dual-planes", "light-tetra", "tetra-foliation", "pleated",
        pytest.param("invisible-domain", marks=pytest.mark.slow),
    ])
    def test_svg_is_well_formed(self, quick_cfg, name):
        path = figures.write_figure(name, quick_cfg)
        assert path.name == f"{name}.svg"
        root = ET.parse(path).getroot()
        assert root.tag == f"{SVG}svg"
        assert root.get("viewBox") == "0 0 1000 1000"
        assert root.findall(f"{SVG}polyline")

    def test_tetra_edges_are_densely_sampled(self, quick_cfg, tmp_path):
        path = figures.write_figure("light-tetra", quick_cfg, tmp_path / "tetra.svg")
        lines = ET.parse(path).getroot().findall(f"{SVG}polyline")
        counts = [len(line.get("points").split()) for line in lines]
        assert max(counts) >= figures.CURVE_SAMPLES

    def test_rendering_is_deterministic(self, quick_cfg, tmp_path):
        a = figures.write_figure("pleated", quick_cfg, tmp_path / "a.svg").read_text()
        b = figures.write_figure("pleated", quick_cfg, tmp_path / "b.svg").read_text()
        assert a == b
