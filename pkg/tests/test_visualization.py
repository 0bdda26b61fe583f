import xml.etree.ElementTree as ET

import numpy as np
import pytest
from conftest import random_density

from qlinksim import (
    BlochVector,
    ConstellationPlotPoint,
    bloch_points,
    bloch_vector,
    constellation_point,
    depolarizing_apply,
    embed_alpha,
    erasure_apply,
    make_pure,
    qam_constellation,
    render_bloch_svg,
    render_constellation_svg,
)


class TestConstellationPoint:
    def test_identity_recovery(self):
        rng = np.random.default_rng(81)
        for _ in range(30):
            alpha = complex(*rng.standard_normal(2))
            p = constellation_point(embed_alpha(alpha))
            assert p.i + 1j * p.q == pytest.approx(alpha, abs=1e-12)
            assert not p.clipped

    def test_power_scale_inverted(self):
        points, scale = qam_constellation(16)
        for cp in points:
            p = constellation_point(embed_alpha(cp.alpha), power_scale=scale)
            assert p.i + 1j * p.q == pytest.approx(cp.alpha / scale, abs=1e-9)

    def test_ground_state_at_origin(self):
        p = constellation_point(make_pure([1, 0]))
        assert (p.i, p.q) == (0.0, 0.0)

    def test_excited_state_clips(self):
        p = constellation_point(make_pure([0, 1]), clip_radius=2.0)
        assert p.clipped
        assert p.i**2 + p.q**2 == pytest.approx(4.0, abs=1e-9)

    def test_clip_direction_follows_coherence(self):
        # rho00 tiny but rho10 dominated by a negative real coherence
        eps = 1e-12
        amp = np.sqrt(eps)
        rho = make_pure([amp, -np.sqrt(1 - eps)])
        p = constellation_point(rho, clip_radius=1.5)
        assert p.clipped
        assert p.i == pytest.approx(-1.5, abs=1e-6)

    def test_erasure_output_recovers_alpha(self):
        alpha = 0.7 - 0.2j
        enlarged = erasure_apply(0.4, embed_alpha(alpha))
        p = constellation_point(enlarged)
        assert p.i + 1j * p.q == pytest.approx(alpha, abs=1e-9)


class TestBlochPoints:
    def test_pure_inputs_unit_norm(self):
        rng = np.random.default_rng(82)
        states = [embed_alpha(complex(*rng.standard_normal(2))) for _ in range(10)]
        for vec, trace in bloch_points(states):
            assert vec.norm() == pytest.approx(1.0, abs=1e-9)
            assert trace == pytest.approx(1.0, abs=1e-12)

    def test_depolarized_norm_halves(self):
        rho = make_pure([0.8, 0.6])
        (before, _), (after, _) = bloch_points([rho, depolarizing_apply(0.5, rho)])
        assert after.norm() == pytest.approx(0.5 * before.norm(), abs=1e-9)

    def test_erasure_keeps_direction_reports_renorm(self):
        rho = embed_alpha(0.3 + 0.5j)
        (vec_in, _), = bloch_points([rho])
        (vec_out, trace), = bloch_points([erasure_apply(0.25, rho)])
        assert trace == pytest.approx(0.75, abs=1e-12)
        assert np.allclose([vec_in.x, vec_in.y, vec_in.z], [vec_out.x, vec_out.y, vec_out.z])

    def test_norms_bounded(self):
        rng = np.random.default_rng(83)
        for vec, _ in bloch_points([random_density(rng, 2) for _ in range(40)]):
            assert vec.norm() <= 1 + 1e-9


def _tx_rx_points():
    tx = [
        ConstellationPlotPoint(1.0, 1.0, 0),
        ConstellationPlotPoint(-1.0, 1.0, 1),
        ConstellationPlotPoint(-1.0, -1.0, 2),
    ]
    rx = [
        ConstellationPlotPoint(0.9, 1.1, 0),
        ConstellationPlotPoint(-1.2, 0.8, 1),
        ConstellationPlotPoint(1.5, 0.0, -1, clipped=True),
    ]
    return tx, rx


class TestRenderConstellation:
    def test_valid_xml(self, tmp_path):
        tx, rx = _tx_rx_points()
        path = tmp_path / "c.svg"
        render_constellation_svg(tx, rx, path, title="test")
        root = ET.parse(path).getroot()
        assert root.tag.endswith("svg")

    def test_byte_deterministic(self, tmp_path):
        tx, rx = _tx_rx_points()
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        render_constellation_svg(tx, rx, a)
        render_constellation_svg(tx, rx, b)
        assert a.read_bytes() == b.read_bytes()

    def test_sixteen_distinct_colors(self, tmp_path):
        pts = [ConstellationPlotPoint(0.1 * k, 0.0, k) for k in range(16)]
        path = tmp_path / "c.svg"
        render_constellation_svg(pts, pts, path)
        text = path.read_text()
        colors = {
            seg.split('"')[0]
            for seg in text.split('fill="#')[1:]
            if not seg.startswith(("ffffff", "111", "333", "999"))
        }
        assert len(colors) >= 16

    def test_clipped_marker_is_cross(self, tmp_path):
        tx, rx = _tx_rx_points()
        path = tmp_path / "c.svg"
        render_constellation_svg(tx, rx, path)
        text = path.read_text()
        # exactly one clipped point -> two stroked cross segments beyond the axes
        assert text.count("<line") == 2 * 2 + 2

    def test_empty_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="nonempty"):
            render_constellation_svg([], [], tmp_path / "c.svg")


class TestRenderBloch:
    def test_valid_xml_and_deterministic(self, tmp_path):
        pts = [(BlochVector(0.0, 0.0, 1.0), 0), (BlochVector(1.0, 0.0, 0.0), 1)]
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        render_bloch_svg(pts, pts, a, title="spin")
        render_bloch_svg(pts, pts, b, title="spin")
        assert ET.parse(a).getroot().tag.endswith("svg")
        assert a.read_bytes() == b.read_bytes()

    def test_north_pole_renders_at_top(self, tmp_path):
        path = tmp_path / "b.svg"
        render_bloch_svg([(BlochVector(0, 0, 1), 0)], [(BlochVector(0, 0, 1), 0)], path)
        root = ET.parse(path).getroot()
        ns = {"svg": "http://www.w3.org/2000/svg"}
        circles = [
            c
            for c in root.findall(".//svg:circle", ns)
            if c.get("fill") not in (None, "none")
        ]
        panel_cx, panel_cy, radius = 240.0, 240.0, 176.0
        cx, cy = float(circles[0].get("cx")), float(circles[0].get("cy"))
        assert cx == pytest.approx(panel_cx, abs=0.01)
        assert cy == pytest.approx(panel_cy - radius * np.cos(np.deg2rad(20)), abs=0.01)

    def test_points_inside_outline(self, tmp_path):
        rng = np.random.default_rng(84)
        pts = [
            (bloch_vector(random_density(rng, 2)), int(rng.integers(0, 4)))
            for _ in range(50)
        ]
        path = tmp_path / "b.svg"
        render_bloch_svg(pts, pts, path)
        root = ET.parse(path).getroot()
        ns = {"svg": "http://www.w3.org/2000/svg"}
        outlines = [c for c in root.findall(".//svg:circle", ns) if c.get("fill") == "none"]
        dots = [c for c in root.findall(".//svg:circle", ns) if c.get("fill", "none") != "none"]
        radius = float(outlines[0].get("r"))
        centers = [(float(c.get("cx")), float(c.get("cy"))) for c in outlines]
        for dot in dots:
            x, y = float(dot.get("cx")), float(dot.get("cy"))
            dist = min(np.hypot(x - cx, y - cy) for cx, cy in centers)
            assert dist <= radius + 1e-6

    def test_empty_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="nonempty"):
            render_bloch_svg([], [], tmp_path / "b.svg")
