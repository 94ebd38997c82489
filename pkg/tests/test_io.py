import xml.etree.ElementTree as ET

import numpy as np
import pytest

from dahlres.contour import contours
from dahlres.errors import IoFailure
from dahlres.field import GridSpec, sample_field
from dahlres.io import CSV_COLUMNS, emit_csv, emit_svg, load_presets, read_csv
from dahlres.methods import parse_spec
from dahlres.ratfun import RationalFunction

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def euler_field():
    return sample_field("theta:0", GridSpec.square((-3, 1, -2, 2), 32))


class TestCsv:
    def test_row_count_and_header(self, tmp_path):
        path = tmp_path / "f.csv"
        emit_csv(sample_field("theta:0.5", GridSpec.square((-1, 1, -1, 1), 8)), path)
        lines = path.read_text().splitlines()
        assert len(lines) == 65
        assert lines[0] == "mu_re,mu_im,k,delta_re,delta_im,abs_delta,abs_R,classical,orderstar,singular"
        assert tuple(lines[0].split(",")) == CSV_COLUMNS

    def test_round_trip(self, tmp_path, euler_field):
        path = tmp_path / "f.csv"
        emit_csv(euler_field, path)
        d = read_csv(path)
        ok = np.isfinite(d["abs_delta"])
        assert np.max(np.abs(np.hypot(d["delta_re"], d["delta_im"])[ok] - d["abs_delta"][ok])) <= 1e-12
        assert np.array_equal(d["mu_re"] + 1j * d["mu_im"], euler_field.mu.ravel())
        assert np.array_equal(d["delta_re"], euler_field.delta.real.ravel())
        assert set(np.unique(d["orderstar"])) <= {-1, 0, 1}

    def test_row_major(self, tmp_path, euler_field):
        path = tmp_path / "f.csv"
        emit_csv(euler_field, path)
        d = read_csv(path)
        assert d["mu_im"][0] == d["mu_im"][31] < d["mu_im"][32]

    def test_singular_written_as_inf(self, tmp_path):
        g = GridSpec(-5, 3, 0.5, 8.5, 8, 8)
        f = sample_field(RationalFunction([1.5 - 1j, 1], [1]), g)  # zero on the node -1.5 + 1j
        path = tmp_path / "s.csv"
        emit_csv(f, path)
        d = read_csv(path)
        assert d["singular"].sum() == 1
        assert np.isinf(d["abs_delta"][d["singular"] == 1]).all()
        assert "inf" in path.read_text()

    def test_unwritable(self, tmp_path, euler_field):
        with pytest.raises(IoFailure):
            emit_csv(euler_field, tmp_path / "missing" / "f.csv")

    def test_deterministic_across_workers(self, tmp_path):
        g = GridSpec.square((-8, 8, -8, 8), 64)
        emit_csv(sample_field("tau:2", g, workers=1), tmp_path / "a.csv")
        emit_csv(sample_field("tau:2", g, workers=4), tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


class TestSvg:
    def test_structure(self, tmp_path, euler_field):
        path = tmp_path / "f.svg"
        emit_svg(euler_field, [contours(euler_field), contours(euler_field, "abs_R", [1.0])], path)
        root = ET.parse(path).getroot()
        assert root.tag == SVG + "svg" and root.get("version") == "1.1"
        groups = {g.get("id"): g for g in root.iter(SVG + "g") if g.get("id")}
        assert {"residual", "classical"} <= set(groups)
        lines = list(root.iter(SVG + "polyline"))
        assert lines and all(l.get("data-level") for l in lines)
        levels = {float(l.get("data-level")) for l in lines}
        assert 1.0 in levels and 0.05 in levels

    def test_large_residual_left_white(self, tmp_path, euler_field):
        """Coloured cells cover exactly the nodes with |delta| <= 1."""
        path = tmp_path / "f.svg"
        emit_svg(euler_field, [], path, width=320)
        root = ET.parse(path).getroot()
        cell = 320 / 32
        rects = list(next(g for g in root.iter(SVG + "g") if g.get("id") == "residual"))
        covered = sum(float(r.get("width")) / cell for r in rects)
        assert round(covered) == int((euler_field.abs_delta <= 1).sum())
        assert all(r.get("fill") != "#ffffff" for r in rects)

    def test_orderstar_overlay(self, tmp_path, euler_field):
        path = tmp_path / "o.svg"
        emit_svg(euler_field, [], path, overlay="orderstar")
        root = ET.parse(path).getroot()
        assert any(g.get("id") == "orderstar" for g in root.iter(SVG + "g"))

    def test_unwritable(self, tmp_path, euler_field):
        with pytest.raises(IoFailure):
            emit_svg(euler_field, [], tmp_path / "no" / "f.svg")


class TestPresets:
    def test_shipped(self):
        presets = load_presets()
        assert len(presets) >= 20
        for p in presets.values():
            parse_spec(p.method)
            g = p.grid()
            assert g.nx == p.res
            assert p.source in ("abs_delta", "abs_R", "orderstar")

    def test_fig8d(self):
        p = load_presets()["fig8d"]
        assert p.method == "pade:16,16" and p.window == (-30, 30, -30, 30) and p.res == 256

    def test_custom_file(self, tmp_path):
        path = tmp_path / "p.ini"
        path.write_text("[mine]\nmethod = tau:2\nwindow = -1,1,-2,2\nres = 32\n")
        p = load_presets(path)["mine"]
        assert p.window == (-1, 1, -2, 2) and p.source == "abs_delta"

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoFailure):
            load_presets(tmp_path / "none.ini")
