import math

import numpy as np
import pytest

from lossdeph.capacity import (
    classify_point,
    coherent_info_two_level,
    max_coherent_info_p,
    ppt_min_eigenvalue,
    ppt_state,
)
from lossdeph.fock import binary_entropy, partial_transpose


class TestCoherentInfo:
    def test_noiseless(self):
        assert coherent_info_two_level(1.0, 0.0, 0.5) == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_point_vanishes(self):
        for p in np.linspace(0.0, 1.0, 11):
            assert abs(coherent_info_two_level(0.5, 0.0, float(p))) <= 1e-12

    def test_pure_loss_binary_entropies(self):
        value = coherent_info_two_level(0.7, 0.0, 0.5)
        assert value == pytest.approx(binary_entropy(0.35) - binary_entropy(0.15), abs=1e-12)
        assert value == pytest.approx(0.324, abs=1e-3)

    def test_rejects_bad_p(self):
        with pytest.raises(ValueError):
            coherent_info_two_level(0.5, 0.1, 1.2)

    def test_continuity_in_p(self):
        lam, gamma = 0.8, 0.2
        grid = np.linspace(0.0, 1.0, 21)
        values = [coherent_info_two_level(lam, gamma, float(p)) for p in grid]
        diffs = np.abs(np.diff(values))
        # slope is log-divergent at the pure-state endpoint p -> 1, so the
        # 0.05-bit sanity bound applies away from it
        assert np.max(diffs[:18]) < 0.05
        assert np.max(diffs) < 0.15


class TestMaxCoherentInfo:
    def test_noiseless(self):
        p_star, ic_star = max_coherent_info_p(1.0, 0.0)
        assert p_star == pytest.approx(0.5, abs=1e-3)
        assert ic_star == pytest.approx(1.0, abs=1e-9)

    def test_positive_near_pure_loss(self):
        _, ic_star = max_coherent_info_p(0.6, 0.01)
        assert ic_star > 1e-3

    def test_nonpositive_in_antidegradable_region(self):
        _, ic_star = max_coherent_info_p(0.4, 0.0)
        assert ic_star <= 1e-12


class TestPpt:
    def test_noiseless_bell(self):
        assert ppt_min_eigenvalue(1.0, 0.0, 0.5) == pytest.approx(-0.5, abs=1e-14)

    def test_constant_channel(self):
        assert ppt_min_eigenvalue(0.0, 0.3, 0.5) == pytest.approx(0.0, abs=1e-14)

    def test_strictly_negative(self):
        for lam in (1e-3, 0.2, 0.9):
            for gamma in (0.0, 1.0, 5.0):
                for n_s in (0.05, 0.5, 0.95):
                    assert ppt_min_eigenvalue(lam, gamma, n_s) < -1e-9

    def test_closed_form_vs_dense(self):
        # the dense cross-check runs inside ppt_min_eigenvalue; verify directly too
        lam, gamma, n_s = 0.37, 0.8, 0.3
        closed = ppt_min_eigenvalue(lam, gamma, n_s)
        dense = float(
            np.linalg.eigvalsh(partial_transpose(ppt_state(lam, gamma, n_s), 1).data)[0]
        )
        assert closed == pytest.approx(dense, abs=1e-12)

    def test_state_is_physical(self):
        rho = ppt_state(0.6, 0.4, 0.5)
        vals = np.linalg.eigvalsh(rho.data)
        assert vals[0] >= -1e-12
        assert np.trace(rho.data) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_bad_ns(self):
        with pytest.raises(ValueError):
            ppt_min_eigenvalue(0.5, 0.1, 0.0)


class TestClassify:
    def test_region_i_red(self):
        verdict = classify_point(0.3, 0.5)
        assert verdict.label == "Red"
        assert verdict.red and not verdict.green

    def test_green_and_crossed_green(self):
        verdict = classify_point(0.9, 0.1)
        assert verdict.green and verdict.crossed_green
        assert verdict.label == "Green"

    def test_region_ii_red(self):
        verdict = classify_point(0.55, 2.0)
        assert verdict.label == "Red"

    def test_crossed_red_beyond_theta_boundary(self):
        # gamma large: theta condition stops slightly below the A-matrix boundary
        verdict = classify_point(0.88, 3.0)
        assert not verdict.red
        assert verdict.crossed_red
        assert verdict.label == "CrossedRed"

    def test_no_red_crossed_green_overlap(self):
        for lam in np.linspace(0.1, 0.9, 9):
            for eg in (0.1, 0.5, 0.9):
                verdict = classify_point(float(lam), -math.log(eg), d=20)
                assert not (verdict.red and verdict.crossed_green)
