"""Constructive de la Vallee Poussin functions for nonintegrable families.

Given a family whose capped means diverge uniformly, a sequence of integer
breakpoints 0 = n_0 < n_1 < ... < n_K with n_{k+1} > 2 n_k (and n_1 > 2) is
chosen so that each block of survival terms

    inf over window m of  sum_{n = n_{j-1}+1}^{n_j} S_m(j * n)  >  1.

The piecewise-linear ramp g interpolates g(n_k) = k, h(x) = x * g(x) is a
strictly increasing bijection of [0, inf), and phi = h^{-1} is continuous,
strictly increasing, phi(0) = 0, with phi(x)/x = 1/g(phi(x)) decreasing to
zero.  The block condition makes the transformed family's tail sums
sum_{n=1}^{n_k} S_m(n g(n)) exceed k for every window member, which is the
desk-scale certificate that the transformed family still diverges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import RVFamily, RVSpec, survival_array

__all__ = [
    "BreakpointSequence",
    "PiecewiseLinearG",
    "PhiFunction",
    "BreakpointBudgetError",
    "find_breakpoints",
    "g_eval",
    "phi_eval",
    "verify_phi",
    "PhiVerification",
    "corollary_single",
    "breakpoint_rows",
    "phi_table_rows",
]

_SCAN_CHUNK = 8192


class BreakpointBudgetError(Exception):
    """The block-sum search ran out of budget (expected for bounded families).

    Carries the partial breakpoint sequence and the block sums achieved so
    far, including the stalled block's running infimum.
    """

    def __init__(self, partial: tuple[int, ...], block_sums: tuple[float, ...], budget: int):
        self.partial = partial
        self.block_sums = block_sums
        self.budget = budget
        blocks = len(partial) - 1
        super().__init__(
            f"breakpoint search exhausted budget {budget} after {blocks} complete block(s); "
            f"running block sums {tuple(round(s, 6) for s in block_sums)}"
        )


@dataclass(frozen=True)
class BreakpointSequence:
    """0 = n_0 < n_1 < ... < n_K with n_{k+1} > 2 n_k and n_1 > 2."""

    points: tuple[int, ...]

    def __post_init__(self) -> None:
        pts = self.points
        if len(pts) < 2 or pts[0] != 0:
            raise ValueError("need n_0 = 0 and at least one breakpoint")
        if any(not isinstance(p, (int, np.integer)) for p in pts):
            raise ValueError("breakpoints must be integers")
        if pts[1] <= 2:
            raise ValueError("n_1 must exceed 2")
        for a, b in zip(pts, pts[1:]):
            if b <= 2 * a:
                raise ValueError(f"need n_(k+1) > 2 n_k, violated by {a} -> {b}")

    @property
    def count(self) -> int:
        return len(self.points) - 1

    @property
    def last(self) -> int:
        return self.points[-1]


@dataclass(frozen=True)
class PiecewiseLinearG:
    """g(x) = k + (x - n_k) / (n_{k+1} - n_k) on [n_k, n_{k+1}).

    Beyond the last breakpoint the final segment keeps extending, which
    continues g linearly with its last slope.  g(0) = 0, g(n_k) = k, and g is
    continuous and strictly increasing.
    """

    breakpoints: BreakpointSequence

    def values(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise ValueError("g is defined on [0, inf)")
        knots = np.asarray(self.breakpoints.points, dtype=float)
        widths = np.diff(knots)
        idx = np.clip(np.searchsorted(knots, x, side="right") - 1, 0, widths.size - 1)
        return idx + (x - knots[idx]) / widths[idx]

    def h_values(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return x * self.values(x)

    def slopes(self) -> np.ndarray:
        return 1.0 / np.diff(np.asarray(self.breakpoints.points, dtype=float))


def g_eval(g: PiecewiseLinearG, x: float) -> float:
    """Exact piecewise-linear evaluation of g at a single point."""
    return float(g.values(np.asarray([x]))[0])


@dataclass(frozen=True)
class PhiFunction:
    """phi = h^{-1} for h(x) = x g(x), inverted by bracketed bisection.

    The segment containing a target is located by scanning h at the
    breakpoints, then bisected to the relative tolerance; beyond h(n_K) the
    bracket doubles until it straddles the target (such evaluations are
    extrapolations of the finite construction and flagged as such).
    """

    g: PiecewiseLinearG
    rel_tol: float = 1e-12

    def h(self, x: float) -> float:
        return float(self.g.h_values(np.asarray([x]))[0])

    @property
    def domain_end(self) -> float:
        # h at the last breakpoint; larger arguments extrapolate.
        last = float(self.g.breakpoints.last)
        return self.h(last)

    def is_extrapolated(self, y: float) -> bool:
        return y > self.domain_end

    def eval(self, y: float) -> float:
        if y < 0:
            raise ValueError("phi is defined on [0, inf)")
        if y == 0.0:
            return 0.0
        knots = np.asarray(self.g.breakpoints.points, dtype=float)
        h_knots = self.g.h_values(knots)
        if y <= h_knots[-1]:
            i = int(np.searchsorted(h_knots, y, side="left"))
            lo, hi = float(knots[max(i - 1, 0)]), float(knots[i])
        else:
            lo = float(knots[-1])
            hi = max(2.0 * lo, 1.0)
            while self.h(hi) < y:
                lo = hi
                hi *= 2.0
        while hi - lo > self.rel_tol * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            if self.h(mid) < y:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


def phi_eval(phi: PhiFunction, y: float) -> float:
    """Solve x g(x) = y for x >= 0."""
    return phi.eval(y)


# ---------------------------------------------------------------------------
# Breakpoint search
# ---------------------------------------------------------------------------


def _scan_indices(family: RVFamily) -> list[int]:
    lo, hi = family.window
    if family.survival_monotone == "nondecreasing":
        return [lo]  # infimum of every survival sum sits at the smallest index
    if family.survival_monotone == "nonincreasing":
        return [hi]
    return list(range(lo, hi + 1))


def find_breakpoints(
    family: RVFamily, count: int, search_budget: int = 1_000_000
) -> BreakpointSequence:
    """Smallest breakpoints meeting the strict block-sum condition.

    For each j the search takes the first integer end n_j > 2 n_{j-1}
    (and n_1 > 2) whose block sum over the window infimum strictly exceeds
    one; block sums are nondecreasing in the end, so the first strict
    success is the minimum.  The window infimum uses the family's
    monotonicity declaration when present, which pins it to an endpoint
    index and makes the scan exact.  The caller should have weak-divergence
    evidence for the family; without it the search is expected to raise
    ``BreakpointBudgetError`` once ``search_budget`` candidates are consumed.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if search_budget < 3:
        raise ValueError("search_budget must be >= 3")
    specs = [family.spec(m) for m in _scan_indices(family)]
    points = [0]
    achieved: list[float] = []
    for j in range(1, count + 1):
        n_prev = points[-1]
        first_allowed = max(2 * n_prev + 1, 3 if j == 1 else 1)
        sums = np.zeros(len(specs))
        consumed = n_prev
        found = None
        while found is None:
            if consumed >= search_budget:
                raise BreakpointBudgetError(
                    tuple(points), tuple(achieved) + (float(sums.min()),), search_budget
                )
            hi = min(consumed + _SCAN_CHUNK, search_budget)
            cand = np.arange(consumed + 1, hi + 1, dtype=float)
            surv = np.vstack([survival_array(sp, j * cand) for sp in specs])
            cum = sums[:, None] + np.cumsum(surv, axis=1)
            mins = cum.min(axis=0)
            ok = (mins > 1.0) & (cand >= first_allowed)
            idx = np.nonzero(ok)[0]
            if idx.size:
                i = int(idx[0])
                found = int(cand[i])
                achieved.append(float(mins[i]))
            else:
                sums = cum[:, -1]
                consumed = hi
        points.append(found)
    return BreakpointSequence(tuple(points))


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhiVerification:
    """Outcome of checking the transformed family's divergence certificate.

    Two families of inequalities are verified for every window member m and
    every k <= k_max: the per-block construction condition
    sum_{n=n_{k-1}+1}^{n_k} S_m(k n) > 1 (a failure here signals an
    incorrect breakpoint search) and the certificate it implies,
    sum_{n=1}^{n_k} S_m(n g(n)) >= k, whose window infimum is recorded in
    ``certificate``.  ``first_violation`` is the first (m, k) pair failing
    either, scanning members in window order.  ``roundtrip_max_rel_err``
    checks phi(h(n)) = n at every integer up to n_{k_max}, the numeric form
    of the identity P(phi(|X_m|) > n) = P(|X_m| > h(n)) used to transfer
    tail sums.
    """

    ok: bool
    first_violation: tuple[int, int] | None
    certificate: tuple[float, ...]
    roundtrip_max_rel_err: float


def verify_phi(family: RVFamily, phi: PhiFunction, k_max: int) -> PhiVerification:
    bp = phi.g.breakpoints
    if k_max > bp.count:
        raise ValueError(f"k_max {k_max} exceeds breakpoint count {bp.count}")
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    if k_max == 0:
        return PhiVerification(True, None, (), 0.0)
    n_top = bp.points[k_max]
    ns = np.arange(1, n_top + 1, dtype=float)
    thresholds = ns * phi.g.values(ns)  # n g(n) = h(n)
    ends = np.asarray(bp.points[1 : k_max + 1]) - 1  # positions of n_k within ns
    targets = np.arange(1, k_max + 1, dtype=float)

    first_violation = None
    certificate = np.full(k_max, np.inf)
    for m in family.indices():
        spec = family.spec(m)
        cum = np.cumsum(survival_array(spec, thresholds))
        at_ends = cum[ends]
        certificate = np.minimum(certificate, at_ends)
        if first_violation is None:
            bad_k = None
            for k in range(1, k_max + 1):
                lo, hi = bp.points[k - 1], bp.points[k]
                block_ns = np.arange(lo + 1, hi + 1, dtype=float)
                block = float(np.sum(survival_array(spec, k * block_ns)))
                if block <= 1.0 or at_ends[k - 1] < targets[k - 1] - 1e-12:
                    bad_k = k
                    break
            if bad_k is not None:
                first_violation = (m, bad_k)

    rel_err = 0.0
    for n in ns:
        back = phi.eval(float(n * phi.g.values(np.asarray([n]))[0]))
        rel_err = max(rel_err, abs(back - n) / max(1.0, n))
    ok = first_violation is None and rel_err <= 1e-10
    return PhiVerification(ok, first_violation, tuple(float(c) for c in certificate), rel_err)


def corollary_single(spec: RVSpec, count: int, budget: int) -> PhiFunction:
    """Build phi for a single nonintegrable variable.

    Wraps the law as a one-member family and runs the breakpoint search; the
    divergence certificate for the result is available through
    ``verify_phi`` on the same wrapper.  Integrable inputs exhaust the
    budget (``BreakpointBudgetError``).
    """
    from .diagnostics import single_spec_family

    family = single_spec_family(spec)
    bp = find_breakpoints(family, count, budget)
    return PhiFunction(PiecewiseLinearG(bp))


# ---------------------------------------------------------------------------
# Tabulation for serialization
# ---------------------------------------------------------------------------


def breakpoint_rows(phi: PhiFunction) -> list[tuple[int, int, float]]:
    """Rows (k, n_k, g_slope) describing the ramp, one per breakpoint.

    ``g_slope`` is the slope of the segment ending at n_k, so the rows
    together describe every segment of the ramp (the last slope also
    continues beyond n_K).
    """
    bp = phi.g.breakpoints
    slopes = phi.g.slopes()
    return [(k, bp.points[k], float(slopes[k - 1])) for k in range(1, bp.count + 1)]


def phi_table_rows(
    phi: PhiFunction, points: int = 200
) -> list[tuple[float, float, float, float, int]]:
    """Rows (x, g(x), h(x), phi(x), extrapolated) on a log grid.

    The grid spans [0.01, 10 * n_K]; rows with x beyond h(n_K) evaluate phi
    outside the constructed range and carry the extrapolation flag.
    """
    last = float(phi.g.breakpoints.last)
    xs = np.geomspace(0.01, 10.0 * last, points)
    gs = phi.g.values(xs)
    hs = xs * gs
    out = []
    for x, g, h in zip(xs, gs, hs):
        out.append(
            (float(x), float(g), float(h), phi.eval(float(x)), int(phi.is_extrapolated(float(x))))
        )
    return out
