"""Random-variable laws and indexed families.

Every law is modeled through the distribution of |X| alone and exposed via
three capabilities: the survival function S(x) = P(|X| > x), the generalized
(left-continuous) quantile Q(u) = inf{x : P(|X| <= x) >= u}, and seeded
inverse-transform sampling.  The built-in analytic variants are

* ``ScaledPareto(n)``      -- n * Y with Y of density y^-2 on [1, inf):
  S(x) = 1 for x < n, n/x for x >= n.
* ``ParetoAlpha(alpha)``   -- density (1 - alpha) * x^(alpha - 2) on [1, inf):
  S(x) = 1 for x < 1, x^(alpha - 1) for x >= 1, with alpha in (0, 1).
* ``BernoulliParetoMixture(p)`` -- |X| = B * Y, B ~ Bernoulli(p) independent
  of the unit scaled-Pareto Y: S(x) = p for x in [0, 1), p/x for x >= 1.
* ``Degenerate(c)``        -- point mass at c >= 0.

Two data-driven variants, ``Empirical`` and ``TabulatedSurvival``, let
file-ingested data flow through the same diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Union

import numpy as np

__all__ = [
    "ScaledPareto",
    "ParetoAlpha",
    "BernoulliParetoMixture",
    "Degenerate",
    "Empirical",
    "TabulatedSurvival",
    "RVSpec",
    "AlphaSequence",
    "AnalyticBound",
    "RVFamily",
    "survival",
    "survival_array",
    "quantile",
    "quantile_array",
    "sample",
    "load_samples",
    "scaled_pareto_family",
    "pareto_alpha_family",
    "bernoulli_pareto_family",
    "degenerate_family",
    "empirical_family",
]


@dataclass(frozen=True)
class ScaledPareto:
    """Law of n * Y where Y has density y^-2 on [1, inf)."""

    scale: int

    def __post_init__(self) -> None:
        if not isinstance(self.scale, (int, np.integer)) or self.scale < 1:
            raise ValueError(f"scale must be a positive integer, got {self.scale!r}")


@dataclass(frozen=True)
class ParetoAlpha:
    """Law with density (1 - alpha) * x^(alpha - 2) on [1, inf), alpha in (0, 1)."""

    alpha: float

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")


@dataclass(frozen=True)
class BernoulliParetoMixture:
    """|X| = B * Y with B ~ Bernoulli(p), Y a unit scaled Pareto, p in (0, 1]."""

    p: float

    def __post_init__(self) -> None:
        if not (0.0 < self.p <= 1.0):
            raise ValueError(f"p must lie in (0, 1], got {self.p!r}")


@dataclass(frozen=True)
class Degenerate:
    """Point mass at a nonnegative value."""

    value: float

    def __post_init__(self) -> None:
        if not (self.value >= 0.0 and math.isfinite(self.value)):
            raise ValueError(f"value must be finite and >= 0, got {self.value!r}")


@dataclass(frozen=True, eq=False)
class Empirical:
    """Empirical law of a finite multiset of nonnegative reals."""

    samples: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("samples must be a nonempty 1-d collection")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("samples must be finite and nonnegative")
        object.__setattr__(self, "samples", np.sort(arr))

    @property
    def _cum_lpm(self) -> tuple[np.ndarray, np.ndarray]:
        # Knots of the (piecewise linear) cumulative left partial moment in u.
        n = self.samples.size
        u = np.arange(n + 1) / n
        v = np.concatenate(([0.0], np.cumsum(self.samples) / n))
        return u, v


@dataclass(frozen=True, eq=False)
class TabulatedSurvival:
    """Survival function given as a finite table of (x, S(x)) pairs.

    ``interpolation="step"`` (default) reads the table as a right-continuous
    step function: S(x) = s_i on [x_i, x_{i+1}), 1 before x_0, s_K beyond x_K.
    The step reading puts an atom of mass s_{i-1} - s_i at each x_i (with
    s_{-1} = 1) and keeps the tabulated floor s_K as mass escaping to
    infinity.  ``interpolation="linear"`` joins consecutive points linearly
    instead, keeping the atom at x_0 and the floor.
    """

    xs: np.ndarray
    ss: np.ndarray
    interpolation: str = "step"

    def __post_init__(self) -> None:
        xs = np.asarray(self.xs, dtype=float)
        ss = np.asarray(self.ss, dtype=float)
        if xs.ndim != 1 or xs.size == 0 or xs.shape != ss.shape:
            raise ValueError("xs and ss must be matching nonempty 1-d tables")
        if np.any(xs < 0) or np.any(np.diff(xs) <= 0):
            raise ValueError("xs must be nonnegative and strictly increasing")
        if np.any(ss < 0) or np.any(ss > 1) or np.any(np.diff(ss) > 0):
            raise ValueError("ss must be nonincreasing probabilities")
        if self.interpolation not in ("step", "linear"):
            raise ValueError(f"unknown interpolation {self.interpolation!r}")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ss", ss)

    @property
    def floor(self) -> float:
        return float(self.ss[-1])


RVSpec = Union[
    ScaledPareto,
    ParetoAlpha,
    BernoulliParetoMixture,
    Degenerate,
    Empirical,
    TabulatedSurvival,
]


# ---------------------------------------------------------------------------
# Survival
# ---------------------------------------------------------------------------


def survival_array(spec: RVSpec, x: np.ndarray) -> np.ndarray:
    """Vectorized S(x) = P(|X| > x) for nonnegative levels x."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("survival levels must be nonnegative")
    if isinstance(spec, ScaledPareto):
        n = float(spec.scale)
        return np.where(x < n, 1.0, n / np.maximum(x, n))
    if isinstance(spec, ParetoAlpha):
        return np.where(x < 1.0, 1.0, np.maximum(x, 1.0) ** (spec.alpha - 1.0))
    if isinstance(spec, BernoulliParetoMixture):
        return spec.p * np.where(x < 1.0, 1.0, 1.0 / np.maximum(x, 1.0))
    if isinstance(spec, Degenerate):
        return np.where(x < spec.value, 1.0, 0.0)
    if isinstance(spec, Empirical):
        # Fraction of samples strictly greater than x.
        idx = np.searchsorted(spec.samples, x, side="right")
        return (spec.samples.size - idx) / spec.samples.size
    if isinstance(spec, TabulatedSurvival):
        if spec.interpolation == "step":
            idx = np.searchsorted(spec.xs, x, side="right")
            padded = np.concatenate(([1.0], spec.ss))
            return padded[idx]
        out = np.interp(x, spec.xs, spec.ss, left=1.0, right=spec.floor)
        return np.where(x < spec.xs[0], 1.0, out)
    raise TypeError(f"unknown spec {spec!r}")


def survival(spec: RVSpec, x: float) -> float:
    """S(x) = P(|X| > x); total on x >= 0."""
    return float(survival_array(spec, np.asarray([x]))[0])


# ---------------------------------------------------------------------------
# Quantile
# ---------------------------------------------------------------------------


def quantile_array(spec: RVSpec, u: np.ndarray) -> np.ndarray:
    """Vectorized generalized inverse Q(u) = inf{x : P(|X| <= x) >= u}.

    u = 0 maps to the essential infimum of |X|.  A tabulated survival with a
    positive floor s has Q(u) = inf for u > 1 - s (mass escaping to infinity).
    """
    u = np.asarray(u, dtype=float)
    if np.any(u < 0) or np.any(u >= 1):
        raise ValueError("quantile levels must lie in [0, 1)")
    if isinstance(spec, ScaledPareto):
        return spec.scale / (1.0 - u)
    if isinstance(spec, ParetoAlpha):
        return (1.0 - u) ** (-1.0 / (1.0 - spec.alpha))
    if isinstance(spec, BernoulliParetoMixture):
        return np.where(u <= 1.0 - spec.p, 0.0, spec.p / (1.0 - u))
    if isinstance(spec, Degenerate):
        return np.full(u.shape, spec.value)
    if isinstance(spec, Empirical):
        n = spec.samples.size
        k = np.maximum(np.ceil(u * n - 1e-12).astype(int), 1)
        return spec.samples[np.minimum(k, n) - 1]
    if isinstance(spec, TabulatedSurvival):
        return _tabulated_quantile(spec, u)
    raise TypeError(f"unknown spec {spec!r}")


def _tabulated_quantile(spec: TabulatedSurvival, u: np.ndarray) -> np.ndarray:
    fs = 1.0 - spec.ss  # cdf values at the table knots
    if spec.interpolation == "step":
        idx = np.searchsorted(fs, np.maximum(u, np.finfo(float).tiny), side="left")
        out = np.where(idx < fs.size, spec.xs[np.minimum(idx, fs.size - 1)], np.inf)
        return out
    # Linear mode: atom at x_0 of mass 1 - s_0, linear cdf pieces after it.
    out = np.where(u <= fs[0], spec.xs[0], np.interp(u, fs, spec.xs))
    return np.where(u > fs[-1], np.inf, out)


def quantile(spec: RVSpec, u: float) -> float:
    """Generalized inverse Q(u); rejects u outside [0, 1)."""
    return float(quantile_array(spec, np.asarray([u]))[0])


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def sample(spec: RVSpec, seed: int, count: int) -> np.ndarray:
    """Draw ``count`` values of |X|, deterministic for a fixed seed.

    Inverse-transform sampling throughout; the Bernoulli mixture draws its
    indicator from a separate uniform stream.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    if isinstance(spec, BernoulliParetoMixture):
        keep = rng.random(count) < spec.p
        y = quantile_array(ScaledPareto(1), rng.random(count))
        return np.where(keep, y, 0.0)
    return quantile_array(spec, rng.random(count))


def load_samples(path: str | Path) -> Empirical:
    """Read an empirical law: one nonnegative decimal per line, '#' comments."""
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                x = float(line)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: not a decimal: {line!r}") from exc
            if not (x >= 0 and math.isfinite(x)):
                raise ValueError(f"{path}:{lineno}: value must be finite and >= 0")
            values.append(x)
    if not values:
        raise ValueError(f"{path}: no samples found")
    return Empirical(np.asarray(values))


# ---------------------------------------------------------------------------
# Alpha sequences for the Pareto-alpha family
# ---------------------------------------------------------------------------


def _interleaved_alpha(n: int) -> float:
    # Odd indices climb to 1, even indices descend to 0; neither end attained.
    k = (n + 1) // 2
    if n % 2 == 1:
        return 1.0 - 1.0 / (k + 1)
    return 1.0 / (k + 1)


@dataclass(frozen=True)
class AlphaSequence:
    """Rule n -> alpha_n in (0, 1) indexing a Pareto-alpha family.

    The default interleaved rule alpha_{2k-1} = 1 - 1/(k+1),
    alpha_{2k} = 1/(k+1) approaches sup = 1 and inf = 0 monotonically along
    the odd and even subsequences, attaining neither.
    """

    rule: Callable[[int], float] = _interleaved_alpha

    def alpha(self, n: int) -> float:
        if n < 1:
            raise ValueError("index must be >= 1")
        a = float(self.rule(n))
        if not (0.0 < a < 1.0):
            raise ValueError(f"alpha rule produced {a!r} at index {n}")
        return a


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalyticBound:
    """An analytic bound curve with its declared limit at infinity.

    ``fn`` maps a truncation level to the bound value; ``limit`` is the
    analytically known limit of the bound as the level grows (``math.inf``
    for diverging bounds).  Certified verdicts rest entirely on these
    declarations, never on finitely many numeric evaluations.
    """

    fn: Callable[[float], float]
    limit: float


@dataclass(frozen=True)
class RVFamily:
    """An indexed sequence of laws plus optional analytic knowledge.

    ``index_map`` must be total on the index window.  Lower bounds hold for
    every index n >= 1 (hence for any window infimum); upper bounds bound the
    infimum over the full index set, whose witnessing index may lie outside
    any finite window.  ``survival_monotone`` declares monotonicity of
    S_n(x) in the index n ("nondecreasing" or "nonincreasing"), which pins
    window infima of survival block sums to an endpoint index.
    """

    label: str
    index_map: Callable[[int], RVSpec]
    window: tuple[int, int] = (1, 1000)
    wedge_hook: Callable[[int, float], float] | None = None
    restricted_hook: Callable[[int, float], float] | None = None
    inf_wedge_lower: AnalyticBound | None = None
    inf_wedge_upper: AnalyticBound | None = None
    inf_restricted_lower: AnalyticBound | None = None
    inf_restricted_upper: AnalyticBound | None = None
    inf_beta_lower: AnalyticBound | None = None
    inf_beta_upper: AnalyticBound | None = None
    survival_monotone: str | None = None
    descriptor: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        lo, hi = self.window
        if not (isinstance(lo, int) and isinstance(hi, int) and 1 <= lo <= hi):
            raise ValueError(f"bad index window {self.window!r}")
        if self.survival_monotone not in (None, "nondecreasing", "nonincreasing"):
            raise ValueError(f"bad survival_monotone {self.survival_monotone!r}")

    def spec(self, n: int) -> RVSpec:
        lo, hi = self.window
        if not (lo <= n <= hi):
            raise ValueError(f"index {n} outside window [{lo}, {hi}]")
        return self.index_map(n)

    def indices(self) -> range:
        lo, hi = self.window
        return range(lo, hi + 1)

    def with_window(self, window: tuple[int, int]) -> "RVFamily":
        from dataclasses import replace

        return replace(self, window=window)


def _scaled_pareto_wedge(n: int, a: float) -> float:
    return a if n >= a else n * (1.0 + math.log(a / n))


def _pareto_alpha_wedge(alpha: float, a: float) -> float:
    if a <= 1.0:
        return a
    return math.expm1(alpha * math.log(a)) / alpha + 1.0


def _uni_lower(a: float) -> float:
    # Lower bound min(a, 1 + ln a) on every member's capped mean; valid for
    # both log-growth families.
    return min(a, 1.0 + math.log(a)) if a > 0 else 0.0


def _log_growth_inf(a: float) -> float:
    # Exact infimum over all indices for the two log-growth families.
    return a if a <= 1.0 else 1.0 + math.log(a)


def scaled_pareto_family(window: tuple[int, int] = (1, 1000)) -> RVFamily:
    """Family X_n = n * Y over a unit Pareto base.

    S_n is nondecreasing in n, so window infima of survival sums sit at the
    smallest index.  The capped-mean infimum over all n equals
    min(a, 1 + ln a) exactly, which diverges; the infimum of the restricted
    mean is identically zero (take any index above the truncation level).
    """
    return RVFamily(
        label="scaled-pareto",
        index_map=lambda n: ScaledPareto(n),
        window=window,
        wedge_hook=_scaled_pareto_wedge,
        restricted_hook=lambda n, a: n * math.log(a / n) if a >= n else 0.0,
        inf_wedge_lower=AnalyticBound(_uni_lower, math.inf),
        inf_wedge_upper=AnalyticBound(_log_growth_inf, math.inf),
        inf_restricted_upper=AnalyticBound(lambda a: 0.0, 0.0),
        inf_beta_upper=AnalyticBound(lambda a: 0.0, 0.0),
        survival_monotone="nondecreasing",
        descriptor={"kind": "scaled-pareto", "window": list(window)},
    )


def pareto_alpha_family(
    alpha_seq: AlphaSequence | None = None,
    window: tuple[int, int] = (1, 1000),
) -> RVFamily:
    """Pareto-alpha family whose exponents approach both 0 and 1.

    The analytic bounds assume sup alpha_n = 1 and inf alpha_n = 0 (the
    default interleaved rule guarantees both): the capped-mean infimum over
    all indices is then exactly 1 + ln a for a > 1 while
    inf_n P(|X_n| <= a) = 0 for every a.
    """
    seq = alpha_seq or AlphaSequence()
    return RVFamily(
        label="pareto-alpha",
        index_map=lambda n: ParetoAlpha(seq.alpha(n)),
        window=window,
        wedge_hook=lambda n, a: _pareto_alpha_wedge(seq.alpha(n), a),
        restricted_hook=lambda n, a: (
            (1.0 - seq.alpha(n)) / seq.alpha(n) * math.expm1(seq.alpha(n) * math.log(a))
            if a > 1.0
            else 0.0
        ),
        inf_wedge_lower=AnalyticBound(_uni_lower, math.inf),
        inf_wedge_upper=AnalyticBound(_log_growth_inf, math.inf),
        inf_restricted_upper=AnalyticBound(lambda a: 0.0, 0.0),
        inf_beta_upper=AnalyticBound(lambda a: 0.0, 0.0),
        descriptor={"kind": "pareto-alpha", "window": list(window)},
    )


def bernoulli_pareto_family(window: tuple[int, int] = (1, 1000)) -> RVFamily:
    """Mixture family with p_n = 1/n: every member nonintegrable, yet the
    capped-mean infimum over all n vanishes for each fixed level."""
    return RVFamily(
        label="bernoulli-pareto",
        index_map=lambda n: BernoulliParetoMixture(1.0 / n),
        window=window,
        wedge_hook=lambda n, a: _scaled_pareto_wedge(1, a) / n,
        inf_wedge_upper=AnalyticBound(lambda a: 0.0, 0.0),
        inf_restricted_upper=AnalyticBound(lambda a: 0.0, 0.0),
        inf_beta_lower=AnalyticBound(
            lambda a: max(0.0, 1.0 - 1.0 / a) if a > 0 else 0.0, 1.0
        ),
        inf_beta_upper=AnalyticBound(
            lambda a: max(0.0, 1.0 - 1.0 / a) if a > 0 else 0.0, 1.0
        ),
        survival_monotone="nonincreasing",
        descriptor={"kind": "bernoulli-pareto", "window": list(window)},
    )


def degenerate_family(value: float, window: tuple[int, int] = (1, 1000)) -> RVFamily:
    """Constant family X_n = c: integrable, so nothing diverges."""
    spec = Degenerate(value)
    wedge = lambda n, a: min(value, a)  # noqa: E731
    return RVFamily(
        label="degenerate",
        index_map=lambda n: spec,
        window=window,
        wedge_hook=wedge,
        restricted_hook=lambda n, a: value if a >= value else 0.0,
        inf_wedge_lower=AnalyticBound(lambda a: min(value, a), value),
        inf_wedge_upper=AnalyticBound(lambda a: min(value, a), value),
        inf_restricted_upper=AnalyticBound(
            lambda a: value if a >= value else 0.0, value
        ),
        inf_beta_lower=AnalyticBound(lambda a: 1.0 if a >= value else 0.0, 1.0),
        descriptor={"kind": "degenerate", "value": value, "window": list(window)},
    )


def empirical_family(sample_sets: list[np.ndarray], label: str = "empirical") -> RVFamily:
    """Family built from finite sample sets, one member per set."""
    specs = [Empirical(s) for s in sample_sets]
    means = [float(np.mean(sp.samples)) for sp in specs]
    cap = min(means)
    stacked = specs  # capture for the closures below

    def beta_floor(a: float) -> float:
        return min(1.0 - survival(sp, a) for sp in stacked)

    return RVFamily(
        label=label,
        index_map=lambda n: specs[n - 1],
        window=(1, len(specs)),
        inf_wedge_upper=AnalyticBound(lambda a: cap, cap),
        inf_beta_lower=AnalyticBound(beta_floor, 1.0),
        descriptor={"kind": "empirical", "members": len(specs)},
    )
