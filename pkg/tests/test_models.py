"""Laws: survival, quantile, sampling, families."""

import math

import numpy as np
import pytest

from nidiag import (
    AlphaSequence,
    BernoulliParetoMixture,
    Degenerate,
    Empirical,
    ParetoAlpha,
    ScaledPareto,
    TabulatedSurvival,
    load_samples,
    quantile,
    sample,
    scaled_pareto_family,
    survival,
)
from nidiag.models import quantile_array, survival_array

from conftest import oracle_wedge, survival_formula


class TestSurvival:
    def test_scaled_pareto_below_scale(self):
        assert survival(ScaledPareto(2), 1.0) == 1.0

    def test_scaled_pareto_tail(self):
        # P(2Y > 8) = P(Y > 4) = 1/4; cross-checked by Monte Carlo below.
        assert survival(ScaledPareto(2), 8.0) == pytest.approx(0.25, abs=0)

    def test_pareto_alpha_tail(self):
        # Integral of the density (1-a) x^(a-2) over (4, inf) at a = 1/2.
        import mpmath

        direct = float(mpmath.quad(lambda x: 0.5 * x**-1.5, [4, mpmath.inf]))
        assert direct == pytest.approx(0.5, rel=1e-8)
        assert survival(ParetoAlpha(0.5), 4.0) == pytest.approx(0.5, rel=1e-12)

    def test_mixture_plateau_and_tail(self):
        spec = BernoulliParetoMixture(0.3)
        assert survival(spec, 0.0) == pytest.approx(0.3)
        assert survival(spec, 0.999) == pytest.approx(0.3)
        assert survival(spec, 2.0) == pytest.approx(0.15)

    def test_degenerate_right_continuous(self):
        assert survival(Degenerate(5.0), 5.0) == 0.0
        assert survival(Degenerate(5.0), 4.999999) == 1.0

    def test_empirical_strictly_greater(self):
        spec = Empirical(np.array([1.0, 2.0, 2.0, 3.0]))
        assert survival(spec, 2.0) == pytest.approx(0.25)
        assert survival(spec, 1.999) == pytest.approx(0.75)

    def test_tabulated_step(self):
        spec = TabulatedSurvival(np.array([2.0, 4.0]), np.array([0.5, 0.0]))
        assert survival(spec, 1.0) == 1.0  # ahead of the table
        assert survival(spec, 2.0) == 0.5
        assert survival(spec, 3.9) == 0.5
        assert survival(spec, 4.0) == 0.0

    def test_tabulated_linear(self):
        spec = TabulatedSurvival(
            np.array([1.0, 3.0]), np.array([0.8, 0.2]), interpolation="linear"
        )
        assert survival(spec, 0.5) == 1.0
        assert survival(spec, 1.0) == pytest.approx(0.8)
        assert survival(spec, 2.0) == pytest.approx(0.5)
        assert survival(spec, 10.0) == pytest.approx(0.2)

    def test_monotone_and_in_range(self, corpus):
        xs = np.geomspace(1e-3, 1e7, 400)
        for spec in corpus:
            s = survival_array(spec, xs)
            assert np.all(s >= 0) and np.all(s <= 1)
            assert np.all(np.diff(s) <= 1e-15)

    def test_rejects_negative_level(self):
        with pytest.raises(ValueError):
            survival(ScaledPareto(1), -0.5)


class TestQuantile:
    def test_scaled_pareto_median(self):
        assert quantile(ScaledPareto(1), 0.5) == pytest.approx(2.0, rel=1e-14)

    def test_degenerate(self):
        assert quantile(Degenerate(7.0), 0.3) == 7.0
        assert quantile(Degenerate(7.0), 0.0) == 7.0

    def test_pareto_alpha_median(self):
        assert quantile(ParetoAlpha(0.5), 0.5) == pytest.approx(4.0, rel=1e-14)

    def test_mixture_atom_then_jump(self):
        spec = BernoulliParetoMixture(0.5)
        assert quantile(spec, 0.25) == 0.0
        assert quantile(spec, 0.5) == 0.0
        assert quantile(spec, 0.75) == pytest.approx(2.0)

    def test_empirical_order_statistics(self):
        spec = Empirical(np.array([3.0, 1.0, 2.0, 4.0]))
        assert quantile(spec, 0.0) == 1.0
        assert quantile(spec, 0.25) == 1.0
        assert quantile(spec, 0.26) == 2.0
        assert quantile(spec, 0.75) == 3.0
        assert quantile(spec, 0.99) == 4.0

    def test_tabulated_floor_gives_inf(self):
        spec = TabulatedSurvival(np.array([1.0, 2.0]), np.array([0.5, 0.25]))
        assert quantile(spec, 0.7) == 2.0
        assert math.isinf(quantile(spec, 0.9))

    def test_domain_rejected(self):
        for bad in (-0.1, 1.0, 1.5):
            with pytest.raises(ValueError):
                quantile(ScaledPareto(1), bad)

    def test_survival_quantile_consistency(self):
        # S(Q(u)) = 1 - u for the continuous variants.
        us = np.linspace(0.01, 0.99, 57)
        for spec in (ScaledPareto(1), ScaledPareto(7), ParetoAlpha(0.3), ParetoAlpha(0.9)):
            qs = quantile_array(spec, us)
            np.testing.assert_allclose(survival_array(spec, qs), 1.0 - us, atol=1e-10)


class TestSampling:
    def test_degenerate_constant(self):
        assert list(sample(Degenerate(3.0), seed=99, count=4)) == [3.0, 3.0, 3.0, 3.0]

    def test_deterministic_by_seed(self):
        a = sample(ScaledPareto(2), seed=5, count=1000)
        b = sample(ScaledPareto(2), seed=5, count=1000)
        c = sample(ScaledPareto(2), seed=6, count=1000)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_empirical_survival_matches_analytic(self, analytic_corpus):
        # 4 binomial standard errors at 1e5 draws, five probe levels.
        n = 100_000
        for spec in analytic_corpus:
            draws = sample(spec, seed=20260813, count=n)
            for x in (0.5, 2.0, 5.0, 10.0, 100.0):
                s = survival_formula(spec, x)
                se = math.sqrt(s * (1 - s) / n)
                emp = float(np.mean(draws > x))
                assert abs(emp - s) <= 4 * se + 1e-12, (spec, x)

    def test_scaled_pareto_survival_at_ten(self):
        draws = sample(ScaledPareto(1), seed=1, count=100_000)
        emp = float(np.mean(draws > 10.0))
        se = math.sqrt(0.1 * 0.9 / 100_000)
        assert abs(emp - 0.1) <= 4 * se

    def test_capped_mean_matches_closed_form(self):
        draws = sample(ScaledPareto(1), seed=2, count=100_000)
        capped = np.minimum(draws, math.e)
        se = float(np.std(capped, ddof=1) / math.sqrt(capped.size))
        assert abs(float(np.mean(capped)) - 2.0) <= 4 * se

    def test_mixture_indicator_fraction(self):
        draws = sample(BernoulliParetoMixture(0.25), seed=3, count=100_000)
        zero_frac = float(np.mean(draws == 0.0))
        se = math.sqrt(0.75 * 0.25 / 100_000)
        assert abs(zero_frac - 0.75) <= 4 * se

    def test_count_validated(self):
        with pytest.raises(ValueError):
            sample(ScaledPareto(1), seed=0, count=0)


class TestLoadSamples:
    def test_parses_comments_and_blanks(self, tmp_path):
        p = tmp_path / "vals.txt"
        p.write_text("# header\n1.5\n\n2.5  # inline\n0\n", encoding="utf-8")
        spec = load_samples(p)
        assert list(spec.samples) == [0.0, 1.5, 2.5]

    def test_rejects_garbage(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("1.5\noops\n", encoding="utf-8")
        with pytest.raises(ValueError, match="oops"):
            load_samples(p)

    def test_rejects_negative(self, tmp_path):
        p = tmp_path / "neg.txt"
        p.write_text("-1\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_samples(p)

    def test_rejects_empty(self, tmp_path):
        p = tmp_path / "empty.txt"
        p.write_text("# nothing\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_samples(p)


class TestAlphaSequence:
    def test_default_interleaves(self):
        seq = AlphaSequence()
        assert seq.alpha(1) == pytest.approx(0.5)
        assert seq.alpha(2) == pytest.approx(0.5)
        assert seq.alpha(3) == pytest.approx(2.0 / 3.0)
        assert seq.alpha(4) == pytest.approx(1.0 / 3.0)

    def test_window_extremes_approach_limits(self):
        seq = AlphaSequence()
        sups, infs = [], []
        for depth in (16, 256, 4096):
            vals = [seq.alpha(n) for n in range(1, depth + 1)]
            sups.append(max(vals))
            infs.append(min(vals))
        assert sups == sorted(sups) and sups[-1] > 0.99 and all(s < 1 for s in sups)
        assert infs == sorted(infs, reverse=True) and infs[-1] < 0.01 and all(i > 0 for i in infs)

    def test_rejects_out_of_range_rule(self):
        seq = AlphaSequence(rule=lambda n: 1.0)
        with pytest.raises(ValueError):
            seq.alpha(1)


class TestValidation:
    @pytest.mark.parametrize(
        "ctor",
        [
            lambda: ScaledPareto(0),
            lambda: ParetoAlpha(0.0),
            lambda: ParetoAlpha(1.0),
            lambda: BernoulliParetoMixture(0.0),
            lambda: BernoulliParetoMixture(1.2),
            lambda: Degenerate(-1.0),
            lambda: Empirical(np.array([])),
            lambda: Empirical(np.array([-1.0])),
            lambda: TabulatedSurvival(np.array([1.0, 1.0]), np.array([0.5, 0.2])),
            lambda: TabulatedSurvival(np.array([1.0, 2.0]), np.array([0.2, 0.5])),
            lambda: TabulatedSurvival(np.array([1.0]), np.array([0.5]), "cubic"),
        ],
    )
    def test_bad_parameters_rejected(self, ctor):
        with pytest.raises(ValueError):
            ctor()

    def test_family_window_validated(self):
        with pytest.raises(ValueError):
            scaled_pareto_family((0, 10))
        with pytest.raises(ValueError):
            scaled_pareto_family((5, 4))

    def test_family_hooks_match_quadrature(self):
        from nidiag import Quadrature, wedge_mean

        fam = scaled_pareto_family((1, 20))
        for n in (1, 3, 20):
            for a in (0.5, 2.0, 50.0):
                hook = fam.wedge_hook(n, a)
                quad = wedge_mean(fam.spec(n), a, Quadrature()).value
                assert hook == pytest.approx(quad, rel=1e-9, abs=1e-11)

    def test_family_lower_bound_below_members(self):
        fam = scaled_pareto_family((1, 50))
        for a in (0.5, 1.0, 7.0, 1e4):
            lo = fam.inf_wedge_lower.fn(a)
            for n in fam.indices():
                assert lo <= fam.wedge_hook(n, a) + 1e-12

    def test_oracle_wedge_agrees_with_formula_examples(self):
        # Spot-check the longhand survival integral against stated values.
        assert oracle_wedge(ScaledPareto(1), math.e) == pytest.approx(2.0, rel=1e-10)
        assert oracle_wedge(ParetoAlpha(0.5), 4.0) == pytest.approx(3.0, rel=1e-10)
