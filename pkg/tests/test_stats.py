import numpy as np
import pytest

from synthqc.stats import UndefinedCorrelationError, ci_width, pearson_corr

from oracles import pearson_p_value_mp, t_quantile_mp


class TestPearson:
    def test_perfect_positive(self):
        r, p = pearson_corr([1.0, 2.0, 3.0, 4.0], [1.0, 2.0, 3.0, 4.0])
        assert r == 1.0 and p == 0.0

    def test_perfect_negative_scaled(self):
        r, p = pearson_corr([1.0, 2.0, 3.0], [-2.0, -4.0, -6.0])
        assert r == -1.0 and p == 0.0

    def test_hand_half(self):
        r, _ = pearson_corr([1.0, 2.0, 3.0], [1.0, 3.0, 2.0])
        assert r == pytest.approx(0.5, abs=1e-12)

    def test_constant_input_rejected(self):
        with pytest.raises(UndefinedCorrelationError):
            pearson_corr([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_too_short_rejected(self):
        with pytest.raises(UndefinedCorrelationError):
            pearson_corr([1.0, 2.0], [2.0, 1.0])

    def test_hand_cases_against_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            n = int(rng.integers(3, 40))
            x = rng.normal(size=n)
            y = 0.4 * x + rng.normal(size=n)
            r, p = pearson_corr(x, y)
            # independent manual r
            rx = x - x.mean()
            ry = y - y.mean()
            manual = float((rx * ry).sum() / np.sqrt((rx**2).sum() * (ry**2).sum()))
            assert r == pytest.approx(manual, abs=1e-12)
            assert p == pytest.approx(pearson_p_value_mp(r, n), abs=1e-6)

    def test_affine_invariance(self):
        x = [0.5, 1.0, 4.0, -2.0, 3.5]
        y = [2.0, 0.7, 5.0, 1.0, 2.5]
        r1, p1 = pearson_corr(x, y)
        r2, p2 = pearson_corr(np.array(x) * 7.0 + 3.0, y)
        assert r1 == pytest.approx(r2, abs=1e-12)
        assert p1 == pytest.approx(p2, abs=1e-12)


class TestCiWidth:
    def test_all_equal_is_zero(self):
        assert ci_width([4.2, 4.2, 4.2]) == 0.0

    def test_five_points_unit_sd(self):
        values = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
        values = values / values.std(ddof=1)  # sample sd exactly 1
        expected = 2.0 * t_quantile_mp(0.975, 4) / np.sqrt(5.0)
        assert ci_width(values) == pytest.approx(expected, abs=1e-9)
        assert ci_width(values) == pytest.approx(2.483, abs=1e-3)

    def test_scales_linearly_in_spread(self):
        base = np.array([1.0, 2.0, 3.0, 4.0])
        assert ci_width(base * 3.0) == pytest.approx(3.0 * ci_width(base), abs=1e-12)

    def test_quantile_matches_oracle_across_df(self):
        from scipy import stats as sps

        for df in (1, 2, 5, 30, 200):
            ours = float(sps.t.ppf(0.975, df))
            assert ours == pytest.approx(t_quantile_mp(0.975, df), abs=1e-6)

    def test_single_value_rejected(self):
        with pytest.raises(ValueError):
            ci_width([1.0])
