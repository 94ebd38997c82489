import math

import numpy as np
import pytest

from dahlres.backward_error import OrderStar, optimal_delta
from dahlres.field import BLOCK_ROWS, GridSpec, sample_field
from dahlres.methods import parse_spec, resolve_string
from dahlres.ratfun import RationalFunction

EULER_WIN = (-3, 1, -2, 2)


class TestGridSpec:
    def test_cell_centred(self):
        g = GridSpec(-1, 1, -1, 1, 8, 8)
        assert g.re_nodes()[0] == pytest.approx(-0.875)
        assert not np.any(g.mu() == 0)

    def test_shape_and_orientation(self):
        g = GridSpec(0, 4, -1, 1, 8, 10)
        mu = g.mu()
        assert mu.shape == (10, 8)
        assert mu[0, 0].imag < mu[-1, 0].imag
        assert mu[0, 0].real < mu[0, -1].real

    @pytest.mark.parametrize("args", [(1, 0, 0, 1, 8, 8), (0, 1, 1, 1, 8, 8), (0, 1, 0, 1, 7, 8)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            GridSpec(*args)

    def test_node_on_origin_rejected(self):
        # 9 nodes across a symmetric window put the middle node at 0
        with pytest.raises(ValueError):
            GridSpec(-1, 1, -1, 1, 9, 9)

    def test_nearest(self):
        g = GridSpec.square(EULER_WIN, 64)
        row, col = g.nearest(-1.9 + 0j)
        assert abs(g.mu()[row, col] - (-1.9)) <= math.hypot(g.dx, g.dy) / 2


class TestSampleField:
    def test_euler_witness_node(self):
        g = GridSpec.square(EULER_WIN, 64)
        f = sample_field("theta:0", g)
        s = f.sample(*g.nearest(-1.9))
        assert s.classical_inside and s.abs_delta > 1

    def test_midpoint_has_no_singular_nodes(self):
        f = sample_field("theta:0.5", GridSpec.square(EULER_WIN, 64))
        assert not f.singular.any()

    def test_singular_flagged_not_dropped(self):
        g = GridSpec(-5, 3, 0.5, 8.5, 8, 8)  # nodes at -4.5..2.5 by 1..8
        r = RationalFunction([0.5, 1], [1])  # zero at -0.5, between nodes
        r_node = RationalFunction([1.5 - 1j, 1], [1])  # zero at -1.5 + 1j, a node
        f = sample_field(r_node, g)
        assert f.singular.sum() == 1
        row, col = np.argwhere(f.singular)[0]
        assert f.mu[row, col] == -1.5 + 1j
        assert f.abs_delta[row, col] == math.inf
        assert f.abs_delta.size == 64
        assert not sample_field(r, g).singular.any()

    def test_node_matches_pointwise(self):
        g = GridSpec.square((-5, 5, -5, 5), 16)
        f = sample_field("rk:rkf5", g)
        r = resolve_string("rk:rkf5").r
        for row, col in [(0, 0), (7, 3), (15, 15)]:
            s = optimal_delta(g.mu()[row, col], r)
            t = f.sample(row, col)
            assert t.k == s.k and t.delta == s.delta and t.orderstar_class == s.orderstar_class

    def test_accepts_every_method_form(self):
        g = GridSpec.square(EULER_WIN, 8)
        info = resolve_string("theta:0")
        outs = [sample_field(m, g).delta for m in ("theta:0", parse_spec("theta:0"), info, info.r)]
        for o in outs[1:]:
            assert np.array_equal(o, outs[0])

    @pytest.mark.parametrize("workers", [2, 3, 8])
    def test_independent_of_workers(self, workers):
        g = GridSpec(-30, 30, -30, 30, 40, 3 * BLOCK_ROWS + 5)
        a = sample_field("pade:16,16", g, workers=1)
        b = sample_field("pade:16,16", g, workers=workers)
        for name in ("k", "delta", "r", "abs_delta", "classical", "orderstar", "singular"):
            assert np.array_equal(getattr(a, name), getattr(b, name))

    def test_monotone_nesting(self):
        f = sample_field("sdirk3:large", GridSpec.square((-6, 6, -6, 6), 64))
        levels = [0.05 * i for i in range(1, 21)]
        for a, b in zip(levels, levels[1:]):
            inner = f.abs_delta <= a
            assert np.all(f.abs_delta[inner] <= b)

    def test_euler_disk_area(self):
        f = sample_field("theta:0", GridSpec.square(EULER_WIN, 512))
        assert abs(f.area(f.classical) - math.pi) <= 0.01 * math.pi


class TestValues:
    def test_sources(self):
        f = sample_field("theta:0", GridSpec.square(EULER_WIN, 16))
        assert np.array_equal(f.values("abs_delta"), f.abs_delta)
        assert np.allclose(f.values("abs_R"), np.abs(1 + f.mu))
        star = f.values("orderstar")
        assert np.allclose(star, np.abs((1 + f.mu) * np.exp(-f.mu)))
        off = np.abs(star - 1) > 1e-12
        assert np.array_equal(f.orderstar[off], np.where(star[off] > 1, OrderStar.A_plus, OrderStar.A_minus))

    def test_unknown_source(self):
        f = sample_field("theta:0", GridSpec.square(EULER_WIN, 8))
        with pytest.raises(ValueError):
            f.values("phase")
