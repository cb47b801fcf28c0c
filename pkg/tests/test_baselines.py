"""Comparator statistics: hand examples, dominance relations, oracles."""

import math

import numpy as np
import pytest

from focus_detect.baselines import (
    Cusum,
    Lorden,
    Mmosum,
    Mosum,
    MosumGrid,
    Page,
    PageGrid,
    page_cusum_oracle,
    yu_oracle,
)
from focus_detect.core import HalfCurve
from focus_detect.detectors import Focus, Focus0, Grid, build_geometric_grid


def stats_of(det, xs):
    return [det.step(x).statistic for x in xs]


class TestCusum:
    def test_hand_values(self):
        assert stats_of(Cusum(), [1.0]) == pytest.approx([1.0])
        assert stats_of(Cusum(), [1.0, 1.0])[-1] == pytest.approx(2.0 / math.sqrt(2.0))
        assert stats_of(Cusum(), [0.0] * 5) == [0.0] * 5

    def test_run_matches_steps(self, rng):
        x = rng.standard_normal(100)
        np.testing.assert_allclose(Cusum().run(x), stats_of(Cusum(), x))


class TestMosum:
    def test_hand_values(self):
        assert stats_of(Mosum(2), [1.0, 1.0])[-1] == pytest.approx(2.0 / math.sqrt(2.0))
        assert stats_of(Mosum(1), [3.0, -4.0]) == pytest.approx([3.0, 4.0])
        assert stats_of(Mosum(3), [1.0, -1.0, 0.0])[-1] == 0.0

    def test_zero_before_window_fills(self):
        det = Mosum(5)
        assert stats_of(det, [9.0, 9.0, 9.0, 9.0]) == [0.0] * 4

    def test_window_validation(self):
        with pytest.raises(ValueError):
            Mosum(0)

    def test_run_matches_steps(self, rng):
        x = rng.standard_normal(200)
        np.testing.assert_allclose(Mosum(7).run(x), stats_of(Mosum(7), x))

    def test_grid_is_max_over_members(self, rng):
        x = rng.standard_normal(150)
        grid = MosumGrid([2, 5, 11])
        members = [Mosum(w) for w in (2, 5, 11)]
        for v in x:
            got = grid.step(v).statistic
            expected = max(m.step(v).statistic for m in members)
            assert got == expected


class TestMmosum:
    def test_hand_value(self):
        det = Mmosum(0.5)
        out = stats_of(det, [0.0, 0.0, 2.0, 2.0])
        assert out[-1] == pytest.approx(4.0 / math.sqrt(2.0))

    def test_empty_window_convention(self):
        assert stats_of(Mmosum(0.5), [5.0]) == [0.0]

    def test_zeros(self):
        assert stats_of(Mmosum(0.3), [0.0] * 8) == [0.0] * 8

    def test_proportion_validation(self):
        for bad in (0.0, 1.0, -0.5, 1.5):
            with pytest.raises(ValueError):
                Mmosum(bad)


class TestPage:
    def test_hand_recursion(self):
        assert stats_of(Page(1.0), [1.0, -2.0, 1.0]) == pytest.approx([0.5, 0.0, 0.5])
        assert stats_of(Page(2.0), [2.0, 2.0]) == pytest.approx([2.0, 4.0])

    def test_zero_input_decays_to_zero(self):
        det = Page(1.0)
        out = stats_of(det, [0.0] * 5)
        assert out == [0.0] * 5

    def test_mu1_validation(self):
        with pytest.raises(ValueError):
            Page(0.0)

    def test_reset_times_recorded(self):
        det = Page(1.0)
        det.step(1.0)
        assert det.last_reset == 0
        det.step(-2.0)
        assert det.last_reset == 2

    def test_dominated_by_focus0_everywhere(self, rng):
        x = rng.standard_normal(500)
        x[300:] += 1.0
        for mu1 in (-2.0, -0.5, 0.3, 1.0, 4.0):
            focus0 = Focus0(math.inf)
            page = Page(mu1)
            for v in x:
                f = focus0.step(v).statistic
                p = page.step(v).statistic
                assert f >= p - 1e-12


class TestPageGrid:
    def test_hand_recursion_on_single_point_grid(self):
        grid = Grid(points=np.array([1.0]), ratio=1.0, bounds=(1.0, 1.0))
        assert stats_of(PageGrid(grid), [1.0, -2.0, 1.0]) == pytest.approx([0.5, 1.5, 0.5])

    def test_zeros(self):
        grid = build_geometric_grid(0.5, 2.0, 3)
        assert stats_of(PageGrid(grid), [0.0] * 6) == [0.0] * 6

    def test_never_exceeds_focus0(self, rng):
        x = rng.standard_normal(400)
        x[200:] -= 1.4
        grid = build_geometric_grid(0.1, 10.0, 10)
        stats = PageGrid(grid).run(x)
        exact = Focus0(math.inf).run(x)
        assert np.all(exact >= stats - 1e-12)


class TestLorden:
    def test_resetting_stream_gives_single_term(self):
        # Keep the recursion at zero: x < mu*/2 resets every step.
        det = Lorden(mu_star=1.0)
        xs = [-0.8, 0.3, -0.5, 0.2, -1.0]
        for x in xs:
            out = det.step(x)
            expected = 0.5 * x * x if x > 0 else 0.0
            assert out.statistic == pytest.approx(expected)
            assert det.evaluations_last_step == 1

    def test_matches_window_brute_force_after_reset(self, rng):
        x = rng.standard_normal(120)
        x[60:] += 1.0
        det = Lorden(mu_star=0.5)
        consumed = []
        for v in x:
            last_reset_before = det.last_reset
            consumed.append(v)
            out = det.step(v)
            n = len(consumed)
            brute = 0.0
            for s in range(last_reset_before, n):
                seg = sum(consumed[s:])
                if seg > 0:
                    brute = max(brute, seg * seg / (2.0 * (n - s)))
            assert out.statistic == pytest.approx(brute, abs=1e-9)
            assert det.evaluations_last_step == n - last_reset_before

    def test_small_mu_star_matches_focus0_positive_side(self, rng):
        x = rng.standard_normal(80)
        det = Lorden(mu_star=1e-8)
        up = HalfCurve(clamp_at_zero=True)
        for v in x:
            got = det.step(v).statistic
            up.advance(v)
            assert got == pytest.approx(up.maximize_known().value, abs=1e-9)

    def test_buffer_cap_truncates_and_flags(self):
        det = Lorden(mu_star=0.1, max_buffer=10)
        for v in np.linspace(0.06, 0.3, 50):
            det.step(float(v))
        assert det.truncated
        assert det.evaluations_last_step <= 10

    def test_mu_star_validation(self):
        with pytest.raises(ValueError):
            Lorden(0.0)
        with pytest.raises(ValueError):
            Lorden(-1.0)


class TestPageCusumOracle:
    def test_hand_values(self):
        np.testing.assert_allclose(page_cusum_oracle([1.0, 1.0]), [1.0, math.sqrt(2.0)])
        np.testing.assert_allclose(page_cusum_oracle([0.0] * 4), np.zeros(4))

    def test_half_square_equals_focus0(self, rng):
        x = rng.standard_normal(300)
        x[150:] += 2.0
        np.testing.assert_allclose(
            0.5 * page_cusum_oracle(x) ** 2, Focus0(math.inf).run(x), atol=1e-9
        )


class TestYuOracle:
    def test_hand_values(self):
        np.testing.assert_allclose(yu_oracle([0.0, 0.0, 3.0]), [0.0, 0.0, 3.0])
        np.testing.assert_allclose(yu_oracle([2.5] * 6), np.zeros(6))

    def test_needs_two_observations(self):
        with pytest.raises(ValueError):
            yu_oracle([1.0])

    def test_matches_focus_trace(self, rng):
        x = rng.standard_normal(100)
        x[60:] -= 1.5
        np.testing.assert_allclose(yu_oracle(x), Focus(math.inf).run(x), atol=1e-9)
