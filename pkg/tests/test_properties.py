"""Property tests over randomly drawn laws, levels, and breakpoints."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nidiag import (
    BernoulliParetoMixture,
    BreakpointSequence,
    Degenerate,
    Empirical,
    ParetoAlpha,
    PhiFunction,
    PiecewiseLinearG,
    ScaledPareto,
    quantile,
    survival,
)
from nidiag.truncation import (
    lpm_values,
    restricted_values,
    tail_sum_values,
    wedge_values,
)

finite_floats = st.floats(allow_nan=False, allow_infinity=False)

spec_strategy = st.one_of(
    st.integers(1, 500).map(ScaledPareto),
    st.floats(1e-3, 1 - 1e-3).map(ParetoAlpha),
    st.floats(1e-3, 1.0).map(BernoulliParetoMixture),
    st.floats(0.0, 100.0).map(Degenerate),
    st.lists(st.floats(0.0, 1e4), min_size=1, max_size=30).map(
        lambda xs: Empirical(np.asarray(xs))
    ),
)

levels = st.floats(0.0, 1e7)


@settings(max_examples=100, deadline=None)
@given(spec_strategy, levels, levels)
def test_survival_monotone_and_bounded(spec, x, y):
    lo, hi = sorted((x, y))
    s_lo, s_hi = survival(spec, lo), survival(spec, hi)
    assert 0.0 <= s_hi <= s_lo <= 1.0


@settings(max_examples=100, deadline=None)
@given(spec_strategy, st.floats(1e-6, 1 - 1e-6), st.floats(1e-6, 1 - 1e-6))
def test_quantile_monotone(spec, u, v):
    lo, hi = sorted((u, v))
    assert quantile(spec, lo) <= quantile(spec, hi)


@settings(max_examples=80, deadline=None)
@given(
    st.one_of(
        st.integers(1, 100).map(ScaledPareto), st.floats(0.05, 0.95).map(ParetoAlpha)
    ),
    st.floats(1e-4, 1 - 1e-4),
)
def test_survival_inverts_quantile_for_continuous_laws(spec, u):
    assert survival(spec, quantile(spec, u)) == pytest.approx(1.0 - u, abs=1e-10)


@settings(max_examples=80, deadline=None)
@given(spec_strategy, st.floats(1e-3, 1e6), st.floats(1.0, 10.0))
def test_capped_mean_monotone_and_dominates_restricted(spec, a, stretch):
    wa, wb = wedge_values(spec, np.asarray([a, a * stretch]))
    assert wb >= wa - 1e-12
    ra = float(restricted_values(spec, np.asarray([a]))[0])
    assert wa >= ra - 1e-12
    assert wa - ra == pytest.approx(a * survival(spec, a), abs=1e-9 * max(1.0, a))


@settings(max_examples=60, deadline=None)
@given(spec_strategy, st.integers(1, 300))
def test_tail_sums_bracket_capped_means(spec, m):
    sums = tail_sum_values(spec, m)
    wedge_hi = float(wedge_values(spec, np.asarray([m + 1.0]))[0])
    wedge_lo = float(wedge_values(spec, np.asarray([float(m)]))[0])
    assert sums[-1] >= wedge_hi - 1e-9
    assert sums[-1] - sums[0] <= wedge_lo + 1e-9


@settings(max_examples=60, deadline=None)
@given(spec_strategy, st.floats(1e-4, 0.999), st.floats(1e-4, 0.999))
def test_lpm_monotone_and_below_mass_times_quantile(spec, u, v):
    lo, hi = sorted((u, v))
    l_lo, l_hi = lpm_values(spec, np.asarray([lo, hi]))
    assert l_hi >= l_lo - 1e-12
    assert l_hi <= hi * quantile(spec, hi) + 1e-9


breakpoints_strategy = st.lists(st.integers(1, 6), min_size=1, max_size=5).map(
    lambda steps: BreakpointSequence(
        tuple(np.concatenate(([0], np.cumprod([3 + s for s in steps])))[: len(steps) + 1])
    )
)


@settings(max_examples=40, deadline=None)
@given(breakpoints_strategy, st.floats(1e-3, 1e5))
def test_phi_round_trip_and_contraction(bp, x):
    phi = PhiFunction(PiecewiseLinearG(bp))
    y = phi.h(x)
    back = phi.eval(y)
    assert abs(back - x) <= 1e-10 * max(1.0, x)
    if x >= bp.points[1]:
        assert phi.eval(x) <= x + 1e-12


@settings(max_examples=40, deadline=None)
@given(breakpoints_strategy, st.floats(1e-3, 1e4), st.floats(1.01, 10.0))
def test_ramp_strictly_increasing_and_ratio_decreasing(bp, x, stretch):
    g = PiecewiseLinearG(bp)
    y = x * stretch
    gx, gy = g.values(np.asarray([x, y]))
    assert gy > gx
    phi = PhiFunction(PiecewiseLinearG(bp))
    rx = phi.eval(x) / x
    ry = phi.eval(y) / y
    assert ry <= rx + 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 50), st.integers(0, 10**6), st.integers(4, 2000))
def test_sampling_deterministic_and_nonnegative(scale, seed, count):
    from nidiag import sample

    draws = sample(ScaledPareto(scale), seed, count)
    again = sample(ScaledPareto(scale), seed, count)
    assert np.array_equal(draws, again)
    assert np.all(draws >= scale)
