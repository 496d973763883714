"""Criterion functionals over truncation grids and index windows.

Infima over the infinite index set cannot be established from finitely many
evaluations, so every curve here is computed over the family's finite index
window, and a verdict is *certified* only through the family's analytic
bounds:

* ``CertifiedDiverges``    a lower bound valid for every index diverges and
  the window values respect it on the grid.
* ``CertifiedBoundedInf``  an upper bound on the full-index infimum has a
  finite limit (or the window values vanish identically).
* ``NumericTrend``         no certificate; report the least-squares slope of
  the curve against the log level over the top decade of the grid.
* ``Inconclusive``         not even a trend (too few grid points).

For the ``beta-positive`` criterion the same statuses read as "limit
certified positive" / "limit certified zero": the underlying curve
inf_n P(|X_n| <= a) is bounded by 1 and never diverges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .models import AnalyticBound, RVFamily, RVSpec, survival_array
from .truncation import (
    lpm_values,
    restricted_values,
    tail_sum_values,
    wedge_values,
)

__all__ = [
    "GridSpec",
    "InfCurve",
    "Verdict",
    "AlphaMReport",
    "inf_wedge_curve",
    "inf_restricted_curve",
    "inf_tailsum_curve",
    "beta_curve",
    "classify",
    "alpha_m_check",
    "adversarial_event_search",
    "escape_probability_curve",
    "ni_evidence",
]

ARGMIN_TIE_TOL = 1e-12
HOOK_RESPECT_TOL = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """A strictly increasing evaluation grid of truncation levels."""

    min: float
    max: float
    points: int
    spacing: str = "logarithmic"

    def __post_init__(self) -> None:
        if not (self.min > 0 and self.max > self.min):
            raise ValueError(f"need 0 < min < max, got [{self.min}, {self.max}]")
        if self.points < 2:
            raise ValueError("points must be >= 2")
        if self.spacing not in ("linear", "logarithmic"):
            raise ValueError(f"unknown spacing {self.spacing!r}")

    def values(self) -> np.ndarray:
        if self.spacing == "linear":
            return np.linspace(self.min, self.max, self.points)
        return np.geomspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class InfCurve:
    """Window infimum of a criterion functional over a level grid.

    ``argmin_index`` records, per level, the smallest window index attaining
    the minimum within a 1e-12 tie tolerance.  ``lower_bound`` and
    ``upper_bound`` are the family's analytic bound curves when present (the
    upper bound constrains the infimum over *all* indices and may therefore
    sit below the window values).
    """

    functional: str
    levels: np.ndarray
    values: np.ndarray
    argmin_index: np.ndarray
    lower_bound: np.ndarray | None = None
    upper_bound: np.ndarray | None = None


@dataclass(frozen=True)
class Verdict:
    criterion: str  # "W-UNI" | "UNI" | "W*-UNI" | "beta-positive" | "NI-single"
    status: str  # "CertifiedDiverges" | "CertifiedBoundedInf" | "NumericTrend" | "Inconclusive"
    evidence: dict


@dataclass(frozen=True)
class AlphaMReport:
    """Search trace for the event-mass criterion.

    For a target M, scans the alpha grid for the smallest mass such that the
    window infimum of LPM_n(alpha) reaches M.  Over events A_n with
    P(A_n) >= alpha the worst restricted mean is exactly LPM_n(alpha), so
    alpha_found witnesses "events of mass alpha force restricted means >= M".
    ``condition_b_alpha`` repeats alpha_found when the family certifies a
    positive lower bound on beta and alpha_found lies below it.
    """

    target: float
    alpha_found: float | None
    inf_lpm_at_alpha: float | None
    alphas: np.ndarray
    inf_lpm: np.ndarray
    argmin_index: np.ndarray
    condition_b_alpha: float | None = None


# ---------------------------------------------------------------------------
# Window matrices and curves
# ---------------------------------------------------------------------------


def _window_matrix(
    family: RVFamily,
    levels: np.ndarray,
    exact: Callable[[RVSpec, np.ndarray], np.ndarray],
    hook: Callable[[int, float], float] | None,
) -> np.ndarray:
    rows = []
    for n in family.indices():
        if hook is not None:
            rows.append(np.asarray([hook(n, float(a)) for a in levels]))
        else:
            rows.append(exact(family.spec(n), levels))
    return np.vstack(rows)


def _min_with_argmin(family: RVFamily, matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    vmin = matrix.min(axis=0)
    # Smallest index attaining the minimum within the tie tolerance.
    first = (matrix <= vmin + ARGMIN_TIE_TOL).argmax(axis=0)
    return vmin, first + family.window[0]

def _bound_array(bound: AnalyticBound | None, levels: np.ndarray) -> np.ndarray | None:
    if bound is None:
        return None
    return np.asarray([bound.fn(float(a)) for a in levels])


def inf_wedge_curve(family: RVFamily, grid: GridSpec) -> InfCurve:
    """Window infimum of the capped mean E(|X_n| /\\ a) per grid level."""
    levels = grid.values()
    matrix = _window_matrix(family, levels, wedge_values, family.wedge_hook)
    values, argmin = _min_with_argmin(family, matrix)
    return InfCurve(
        "wedge",
        levels,
        values,
        argmin,
        _bound_array(family.inf_wedge_lower, levels),
        _bound_array(family.inf_wedge_upper, levels),
    )


def inf_restricted_curve(family: RVFamily, grid: GridSpec) -> InfCurve:
    """Window infimum of the restricted mean E(|X_n| : |X_n| <= a)."""
    levels = grid.values()
    matrix = _window_matrix(family, levels, restricted_values, family.restricted_hook)
    values, argmin = _min_with_argmin(family, matrix)
    return InfCurve(
        "restricted",
        levels,
        values,
        argmin,
        _bound_array(family.inf_restricted_lower, levels),
        _bound_array(family.inf_restricted_upper, levels),
    )


def inf_tailsum_curve(family: RVFamily, m_max: int) -> InfCurve:
    """Window infimum of sum_{n=0}^m S_k(n) for m = 1..m_max."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    levels = np.arange(1, m_max + 1, dtype=float)
    rows = [tail_sum_values(family.spec(k), m_max)[1:] for k in family.indices()]
    matrix = np.vstack(rows)
    values, argmin = _min_with_argmin(family, matrix)
    lower, upper = _tailsum_bounds(family)
    return InfCurve(
        "tail-sum",
        levels,
        values,
        argmin,
        _bound_array(lower, levels),
        _bound_array(upper, levels),
    )


def _tailsum_bounds(family: RVFamily) -> tuple[AnalyticBound | None, AnalyticBound | None]:
    # Index-wise sandwich against the capped mean:
    #   sum_{n=0}^m S(n) >= E(|X| /\ (m+1))   and
    #   sum_{n=0}^m S(n) <= 1 + E(|X| /\ m),
    # so capped-mean bounds transfer to the tail sums with a level shift.
    wl, wu = family.inf_wedge_lower, family.inf_wedge_upper
    lower = AnalyticBound(lambda m, f=wl.fn: f(m + 1.0), wl.limit) if wl else None
    upper = None
    if wu is not None:
        limit = math.inf if math.isinf(wu.limit) else 1.0 + wu.limit
        upper = AnalyticBound(lambda m, f=wu.fn: 1.0 + f(float(m)), limit)
    return lower, upper


def beta_curve(family: RVFamily, grid: GridSpec) -> InfCurve:
    """Window infimum of P(|X_n| <= a); its limit in a is beta."""
    levels = grid.values()
    rows = [1.0 - survival_array(family.spec(n), levels) for n in family.indices()]
    matrix = np.vstack(rows)
    values, argmin = _min_with_argmin(family, matrix)
    return InfCurve(
        "beta",
        levels,
        values,
        argmin,
        _bound_array(family.inf_beta_lower, levels),
        _bound_array(family.inf_beta_upper, levels),
    )


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


def _fit_trend(levels: np.ndarray, values: np.ndarray) -> dict | None:
    mask = levels >= levels[-1] / 10.0
    if int(mask.sum()) < 3:
        return None
    x = np.log(levels[mask])
    slope, intercept = np.polyfit(x, values[mask], 1)
    return {
        "slope_vs_log_level": float(slope),
        "intercept": float(intercept),
        "fit_points": int(mask.sum()),
        "fit_range": [float(levels[mask][0]), float(levels[-1])],
    }


def _limit_json(x: float) -> float | str:
    return "inf" if math.isinf(x) else float(x)


def _curve_verdict(
    criterion: str,
    curve: InfCurve,
    lower: AnalyticBound | None,
    upper: AnalyticBound | None,
) -> Verdict:
    evidence: dict = {"functional": curve.functional, "final_value": float(curve.values[-1])}
    trend = _fit_trend(curve.levels, curve.values)
    if trend is not None:
        evidence["trend"] = trend

    if criterion == "beta-positive":
        if lower is not None and lower.limit > 0:
            evidence["bound"] = {"side": "lower", "limit": _limit_json(lower.limit)}
            return Verdict(criterion, "CertifiedDiverges", evidence)
        if upper is not None and upper.limit == 0.0:
            evidence["bound"] = {"side": "upper", "limit": 0.0}
            return Verdict(criterion, "CertifiedBoundedInf", evidence)
    else:
        if lower is not None and math.isinf(lower.limit):
            respected = curve.lower_bound is None or bool(
                np.all(curve.values >= curve.lower_bound - HOOK_RESPECT_TOL)
            )
            if respected:
                evidence["bound"] = {
                    "side": "lower",
                    "limit": "inf",
                    "respected_on_grid": True,
                }
                return Verdict(criterion, "CertifiedDiverges", evidence)
        if upper is not None and math.isfinite(upper.limit):
            evidence["bound"] = {"side": "upper", "limit": _limit_json(upper.limit)}
            return Verdict(criterion, "CertifiedBoundedInf", evidence)
        if np.all(curve.values == 0.0):
            evidence["bound"] = {"side": "values", "note": "window values identically zero"}
            return Verdict(criterion, "CertifiedBoundedInf", evidence)

    if trend is not None:
        return Verdict(criterion, "NumericTrend", evidence)
    return Verdict(criterion, "Inconclusive", evidence)


def classify(family: RVFamily, grid: GridSpec, m_max: int) -> list[Verdict]:
    """Render one verdict per criterion, each judged independently."""
    wedge = inf_wedge_curve(family, grid)
    restricted = inf_restricted_curve(family, grid)
    tails = inf_tailsum_curve(family, m_max)
    beta = beta_curve(family, grid)
    tail_lower, tail_upper = _tailsum_bounds(family)
    return [
        _curve_verdict("W-UNI", wedge, family.inf_wedge_lower, family.inf_wedge_upper),
        _curve_verdict(
            "UNI", restricted, family.inf_restricted_lower, family.inf_restricted_upper
        ),
        _curve_verdict("W*-UNI", tails, tail_lower, tail_upper),
        _curve_verdict("beta-positive", beta, family.inf_beta_lower, family.inf_beta_upper),
    ]


# ---------------------------------------------------------------------------
# Event-mass criterion
# ---------------------------------------------------------------------------


def alpha_m_check(family: RVFamily, target: float, alpha_grid: GridSpec) -> AlphaMReport:
    """Smallest grid mass alpha with window-infimum LPM at least the target."""
    if not target > 0:
        raise ValueError("target M must be positive")
    if not (0.0 < alpha_grid.min and alpha_grid.max < 1.0):
        raise ValueError("alpha grid must lie inside (0, 1)")
    alphas = alpha_grid.values()
    rows = [lpm_values(family.spec(n), alphas) for n in family.indices()]
    matrix = np.vstack(rows)
    inf_lpm, argmin = _min_with_argmin(family, matrix)
    hits = np.nonzero(inf_lpm >= target)[0]
    if hits.size == 0:
        return AlphaMReport(target, None, None, alphas, inf_lpm, argmin)
    i = int(hits[0])
    alpha_found = float(alphas[i])
    condition_b = None
    bl = family.inf_beta_lower
    if bl is not None and bl.limit > 0 and alpha_found < bl.limit:
        condition_b = alpha_found
    return AlphaMReport(
        target, alpha_found, float(inf_lpm[i]), alphas, inf_lpm, argmin, condition_b
    )


def adversarial_event_search(spec: RVSpec, alpha: float, trials: int, seed: int) -> float:
    """Minimum restricted mean found over random events of mass >= alpha.

    Events are unions of up to four disjoint quantile bands of |X|; the
    restricted mean of a band [u, v] is LPM(v) - LPM(u), evaluated with the
    exact per-variant integral of the quantile function.  The first trial is
    always the canonical left band [0, alpha], which attains the infimum, so
    the search can match LPM(alpha) but never beat it.  All randomness is
    drawn up front from one generator seeded by ``seed``.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    best = float(lpm_values(spec, np.asarray([alpha]))[0])
    extra = trials - 1
    if extra == 0:
        return best
    rng = np.random.default_rng(seed)
    max_bands = 4
    k = rng.integers(1, max_bands + 1, size=extra)
    # Bias the total mass toward alpha, where the minima live.
    mass = alpha + (1.0 - alpha) * rng.random(extra) * rng.random(extra)
    len_w = rng.exponential(size=(extra, max_bands))
    gap_w = rng.exponential(size=(extra, max_bands + 1))
    len_w *= np.arange(max_bands)[None, :] < k[:, None]
    gap_w *= np.arange(max_bands + 1)[None, :] < (k + 1)[:, None]
    lengths = len_w / len_w.sum(axis=1, keepdims=True) * mass[:, None]
    gaps = gap_w / gap_w.sum(axis=1, keepdims=True) * (1.0 - mass)[:, None]
    starts = np.cumsum(gaps[:, :max_bands], axis=1) + np.cumsum(lengths, axis=1) - lengths
    ends = starts + lengths
    cap = np.nextafter(1.0, 0.0)
    restricted = lpm_values(spec, ends.clip(0.0, cap)) - lpm_values(spec, starts.clip(0.0, cap))
    return float(min(best, restricted.sum(axis=1).min()))


# ---------------------------------------------------------------------------
# Escape probe and single-variable evidence
# ---------------------------------------------------------------------------


def escape_probability_curve(
    family: RVFamily, k_grid: GridSpec, threshold: float = 0.99
) -> InfCurve:
    """Escape-to-infinity probe: per level K, the best window survival.

    ``values`` holds max_n S_n(K) over the window and ``argmin_index`` the
    smallest window index with S_n(K) >= threshold (-1 when none reaches
    it).  A family escaping in probability drives the values to 1 at every
    level once the window is deep enough.
    """
    levels = k_grid.values()
    rows = [survival_array(family.spec(n), levels) for n in family.indices()]
    matrix = np.vstack(rows)
    values = matrix.max(axis=0)
    hit = matrix >= threshold
    any_hit = hit.any(axis=0)
    first = hit.argmax(axis=0) + family.window[0]
    argmin = np.where(any_hit, first, -1)
    return InfCurve("escape", levels, values, argmin)


def _mean_abs(spec: RVSpec) -> float:
    # E|X| per variant; infinite exactly for the heavy-tailed laws.
    from .models import (
        BernoulliParetoMixture,
        Degenerate,
        Empirical,
        ParetoAlpha,
        ScaledPareto,
        TabulatedSurvival,
    )

    if isinstance(spec, (ScaledPareto, ParetoAlpha, BernoulliParetoMixture)):
        return math.inf
    if isinstance(spec, Degenerate):
        return spec.value
    if isinstance(spec, Empirical):
        return float(np.mean(spec.samples))
    if isinstance(spec, TabulatedSurvival):
        if spec.floor > 0:
            return math.inf
        return float(wedge_values(spec, np.asarray([float(spec.xs[-1])]))[0])
    raise TypeError(f"unknown spec {spec!r}")


def single_spec_family(spec: RVSpec, label: str = "single") -> RVFamily:
    """Wrap one law as a one-member family with its exact capped-mean bound."""
    mean = _mean_abs(spec)
    bound = AnalyticBound(lambda a: float(wedge_values(spec, np.asarray([a]))[0]), mean)
    return RVFamily(
        label=label,
        index_map=lambda n: spec,
        window=(1, 1),
        inf_wedge_lower=bound,
        inf_wedge_upper=bound,
        descriptor={"kind": "single", "variant": type(spec).__name__},
    )


def ni_evidence(spec: RVSpec, grid: GridSpec, m_max: int) -> Verdict:
    """Single-variable nonintegrability verdict.

    Certified through the exact capped mean (its limit is E|X|, known per
    variant); the evidence also reports the tail-sum growth
    sum_{n=0}^m S(n), whose divergence is the equivalent counting form.
    """
    family = single_spec_family(spec)
    curve = inf_wedge_curve(family, grid)
    verdict = _curve_verdict("NI-single", curve, family.inf_wedge_lower, family.inf_wedge_upper)
    tails = tail_sum_values(spec, m_max)
    m = np.arange(1, m_max + 1, dtype=float)
    tail_trend = _fit_trend(m, tails[1:])
    evidence = dict(verdict.evidence)
    evidence["tail_sum_final"] = float(tails[-1])
    if tail_trend is not None:
        evidence["tail_sum_trend"] = tail_trend
    return Verdict(verdict.criterion, verdict.status, evidence)
