"""Shared corpus and independent oracles.

The oracles here deliberately avoid the library's own evaluation paths:
integrals go through mpmath's tanh-sinh quadrature on the analytic survival
or density formulas written out longhand, and sums are plain Python loops.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from nidiag import (
    BernoulliParetoMixture,
    Degenerate,
    Empirical,
    ParetoAlpha,
    ScaledPareto,
    TabulatedSurvival,
)

ANALYTIC_SPECS = [
    ScaledPareto(1),
    ScaledPareto(2),
    ScaledPareto(5),
    ParetoAlpha(0.1),
    ParetoAlpha(0.5),
    ParetoAlpha(0.9),
    BernoulliParetoMixture(1.0),
    BernoulliParetoMixture(0.5),
    BernoulliParetoMixture(0.25),
    Degenerate(5.0),
    Degenerate(2.5),
]


def build_corpus():
    return ANALYTIC_SPECS + [
        Degenerate(0.0),
        Empirical(np.array([0.0, 0.5, 1.5, 1.5, 2.75, 10.0, 40.0])),
        TabulatedSurvival(
            np.array([0.0, 1.0, 2.0, 8.0]), np.array([1.0, 0.6, 0.25, 0.0]), "step"
        ),
        TabulatedSurvival(
            np.array([0.5, 2.0, 4.0, 16.0]), np.array([1.0, 0.5, 0.2, 0.0]), "linear"
        ),
    ]


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture(scope="session")
def analytic_corpus():
    return list(ANALYTIC_SPECS)


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------


def survival_formula(spec, x: float) -> float:
    """Survival functions written out longhand from the density definitions."""
    if isinstance(spec, ScaledPareto):
        return 1.0 if x < spec.scale else spec.scale / x
    if isinstance(spec, ParetoAlpha):
        return 1.0 if x < 1 else x ** (spec.alpha - 1.0)
    if isinstance(spec, BernoulliParetoMixture):
        return spec.p if x < 1 else spec.p / x
    if isinstance(spec, Degenerate):
        return 1.0 if x < spec.value else 0.0
    raise TypeError(spec)


def oracle_wedge(spec, a: float) -> float:
    """int_0^a S(x) dx via mpmath tanh-sinh quadrature, split at the kink."""
    import mpmath

    if isinstance(spec, Degenerate):
        return min(spec.value, a)
    kink = float(spec.scale) if isinstance(spec, ScaledPareto) else 1.0
    pieces = [0.0] + [k for k in (kink,) if k < a] + [a]
    total = mpmath.mpf(0)
    for lo, hi in zip(pieces, pieces[1:]):
        total += mpmath.quad(lambda x: survival_formula(spec, float(x)), [lo, hi])
    return float(total)


def oracle_lpm(spec, alpha: float) -> float:
    """int_0^alpha Q(u) du via mpmath on the inverted cdf formulas."""
    import mpmath

    if isinstance(spec, Degenerate):
        return spec.value * alpha
    if isinstance(spec, ScaledPareto):
        q = lambda u: spec.scale / (1 - u)  # noqa: E731
        return float(mpmath.quad(lambda u: q(float(u)), [0, alpha]))
    if isinstance(spec, ParetoAlpha):
        q = lambda u: (1 - u) ** (-1.0 / (1.0 - spec.alpha))  # noqa: E731
        return float(mpmath.quad(lambda u: q(float(u)), [0, alpha]))
    if isinstance(spec, BernoulliParetoMixture):
        split = 1.0 - spec.p
        if alpha <= split:
            return 0.0
        q = lambda u: spec.p / (1 - u)  # noqa: E731
        return float(mpmath.quad(lambda u: q(float(u)), [split, alpha]))
    raise TypeError(spec)


def oracle_tail_sum(spec, m: int) -> float:
    """Plain-loop sum of survival values at the integers."""
    return sum(survival_formula(spec, float(n)) for n in range(m + 1))


def brute_force_breakpoints(survival_fn, count: int, limit: int = 10**7) -> list[int]:
    """Reference breakpoint search: naive scan with pure Python sums."""
    out = []
    n_prev = 0
    for j in range(1, count + 1):
        total = 0.0
        n = n_prev
        while True:
            n += 1
            if n > limit:
                raise RuntimeError("oracle limit exceeded")
            total += survival_fn(j * n)
            if total > 1.0 and n > 2 * n_prev and (j > 1 or n > 2):
                break
        out.append(n)
        n_prev = n
    return out
