import cmath
import math

import numpy as np
import pytest

from dahlres import backward_error, oracle
from dahlres.backward_error import optimal_delta, unwinding_k
from dahlres.errors import NoFeasibleControl, ZeroArgument
from dahlres.methods import builtin_specs, resolve, resolve_string
from dahlres.oracle import min_max_control, scan_k, scan_k_array, verify


class TestScanK:
    def test_real_positive(self):
        assert scan_k(0.7, 1.9, 8) == 0

    def test_tie_toward_zero(self):
        assert scan_k(-2, -1, 8) == 0

    def test_pade16(self, frozen):
        r = resolve_string("pade:16,16").r
        assert scan_k(10j, r(10j), 5) == frozen["points"]["pade16@10j"]["k"]

    def test_array_matches_scalar(self):
        rng = np.random.default_rng(5)
        mu = rng.uniform(-20, 20, 300) + 1j * rng.uniform(-20, 20, 300)
        r = resolve_string("pade:4,4").r
        rv = np.array([r(m) for m in mu])
        assert scan_k_array(mu, rv, 8).tolist() == [scan_k(m, v, 8) for m, v in zip(mu, rv)]

    def test_agrees_with_closed_form(self):
        rng = np.random.default_rng(11)
        for info in (resolve(s) for s in builtin_specs()):
            for _ in range(40):
                mu = complex(*rng.uniform(-20, 20, 2))
                s = optimal_delta(mu, info.r)
                if not s.singular:
                    assert scan_k(mu, s.r_value, 8) == unwinding_k(mu, s.r_value) == s.k

    def test_errors(self):
        with pytest.raises(ZeroArgument):
            scan_k(0, 1, 3)
        with pytest.raises(ValueError):
            scan_k(1, 1, 0)


class TestMinMaxControl:
    def test_exact_target(self):
        mu = -1.3 + 4j
        assert min_max_control(mu, cmath.exp(mu)) <= 1e-12

    def test_single_piece_is_closed_form(self):
        r = resolve_string("theta:0").r
        for mu in (-2 + 0.1j, 3j, 1.5 - 7j):
            s = optimal_delta(mu, r)
            assert abs(min_max_control(mu, s.r_value, pieces=1) - s.abs_delta) <= 1e-12

    @pytest.mark.parametrize("name", ["theta:0", "tau:1", "pade:8,8", "rk:rkf4"])
    def test_bound_attained(self, name):
        r = resolve_string(name).r
        rng = np.random.default_rng(2)
        for i in range(6):
            mu = complex(*rng.uniform(-20, 20, 2))
            s = optimal_delta(mu, r)
            if s.singular:
                continue
            got = min_max_control(mu, s.r_value, seed=i)
            assert s.abs_delta - 1e-6 <= got <= s.abs_delta + 1e-6

    def test_random_search_alone_finds_bound(self):
        """Without the constant start the search still reaches |delta| and never beats it."""
        r = resolve_string("rk:rkf5").r
        rng = np.random.default_rng(9)
        for i in range(10):
            mu = complex(*rng.uniform(-20, 20, 2))
            s = optimal_delta(mu, r)
            got = min_max_control(mu, s.r_value, seed=i, constant_start=False)
            assert s.abs_delta - 1e-6 <= got <= s.abs_delta + 1e-6

    def test_deterministic(self):
        a = min_max_control(2 + 3j, 0.5j, seed=4, constant_start=False)
        b = min_max_control(2 + 3j, 0.5j, seed=4, constant_start=False)
        assert a == b

    def test_errors(self):
        with pytest.raises(NoFeasibleControl):
            min_max_control(1.0, 0)
        with pytest.raises(ValueError):
            min_max_control(1.0, 2.0, pieces=65)
        with pytest.raises(ZeroArgument):
            min_max_control(0, 2.0)


class TestVerify:
    def test_passes(self):
        rep = verify(60, seed=3)
        assert rep.passed and rep.checked + rep.skipped == 60
        assert rep.counterexample is None

    def test_detects_tampered_unwinding(self, monkeypatch):
        real = backward_error.unwinding_k
        monkeypatch.setattr(backward_error, "unwinding_k", lambda mu, r: real(mu, r) + 1)
        rep = verify(20, seed=3)
        assert not rep.passed
        assert "scan_k" in rep.counterexample
