"""Acceptance suite: one test per criterion, each printing a PASS line.

Every tolerance is pinned here, never deferred: formula agreement at 1e-8
relative, sandwich inequalities at 1e-9, oracle floor at 1e-6, phi round
trips at 1e-10 relative, and the stated runtime ceilings.
"""

import json
import math
import time

import numpy as np
import pytest

from nidiag import (
    Degenerate,
    GridSpec,
    PhiFunction,
    PiecewiseLinearG,
    ScaledPareto,
    adversarial_event_search,
    alpha_m_check,
    bernoulli_pareto_family,
    classify,
    corollary_single,
    find_breakpoints,
    inf_restricted_curve,
    inf_wedge_curve,
    left_partial_moment,
    ni_evidence,
    scaled_pareto_family,
    single_spec_family,
    verify_phi,
)
from nidiag.cli import EXIT_OK, main
from nidiag.experiments import (
    DEFAULT_GRID,
    mixture_counterexample_report,
    pareto_alpha_report,
    scaled_pareto_report,
)
from nidiag.truncation import tail_sum_values, wedge_values
from nidiag.vallee_poussin import BreakpointBudgetError

from conftest import brute_force_breakpoints, build_corpus


def report_line(criterion: str, ok: bool) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'}")
    assert ok


def test_c1_scaled_pareto_backend_agreement():
    start = time.perf_counter()
    report = scaled_pareto_report()
    elapsed = time.perf_counter() - start
    rows_ok = all(r.passed for r in report.rows)
    assert len(report.rows) == 5 * 61
    report_line("C1 capped-mean backends (closed/quadrature/MC)", rows_ok and elapsed < 30.0)


def test_c2_scaled_pareto_curves_and_verdicts():
    family = scaled_pareto_family((1, 1000))
    wedge = inf_wedge_curve(family, DEFAULT_GRID)
    restricted = inf_restricted_curve(family, DEFAULT_GRID)

    shallow = restricted.levels <= 1000.0
    restricted_zero = bool(np.all(restricted.values[shallow] == 0.0))

    zone = (1.0 + np.log(wedge.levels)) < wedge.levels
    expected = 1.0 + np.log(wedge.levels[zone])
    wedge_matches = bool(
        np.all(np.abs(wedge.values[zone] - expected) <= 1e-8 * np.maximum(1.0, expected))
    )

    hook = np.minimum(wedge.levels, 1.0 + np.log(wedge.levels))
    hook_matches = bool(np.allclose(wedge.lower_bound, hook, rtol=0, atol=0))
    verdicts = {v.criterion: v.status for v in classify(family, DEFAULT_GRID, 100)}
    certified = verdicts["W-UNI"] == "CertifiedDiverges"
    report_line(
        "C2 scaled-Pareto verdicts (restricted inf 0, wedge inf 1+ln a, certified)",
        restricted_zero and wedge_matches and hook_matches and certified,
    )


def test_c3_pareto_alpha_reproduction():
    report = pareto_alpha_report()
    ok = report.passed and len(report.rows) == 488
    names = {c.name for c in report.checks if c.passed}
    ok = ok and {"wedge-inf-above-1+ln(a)", "wedge-inf-decreases-to-limit", "beta-inf-decreases-to-zero"} <= names
    report_line("C3 Pareto-alpha formulas and window-doubling limits", ok)


def test_c4_tail_sum_sandwich():
    start = time.perf_counter()
    ok = True
    ms = np.arange(1, 1001, dtype=float)
    for spec in build_corpus():
        sums = tail_sum_values(spec, 1000)
        ok = ok and bool(np.all(sums[1:] >= wedge_values(spec, ms + 1.0) - 1e-9))
        ok = ok and bool(np.all(sums[1:] - sums[0] <= wedge_values(spec, ms) + 1e-9))
    elapsed = time.perf_counter() - start
    report_line("C4 tail sums bracket capped means (m <= 1000)", ok and elapsed < 60.0)


def test_c5_event_mass_oracle():
    ok = True
    for i, spec in enumerate(build_corpus()):
        for alpha in (0.1, 0.5, 0.9):
            lpm = left_partial_moment(spec, alpha).value
            if math.isinf(lpm):
                continue
            found = adversarial_event_search(spec, alpha, trials=10_000, seed=1000 + i)
            ok = ok and found >= lpm - 1e-6
            canonical = adversarial_event_search(spec, alpha, trials=1, seed=0)
            ok = ok and abs(canonical - lpm) <= 1e-9 * max(1.0, lpm)

    grid = GridSpec(0.01, 0.99, 99, "linear")
    report = alpha_m_check(scaled_pareto_family((1, 1000)), 2.0, grid)
    threshold = 1.0 - math.exp(-2.0)
    expected = min(a for a in grid.values() if a >= threshold)
    ok = ok and report.alpha_found == pytest.approx(expected)
    report_line("C5 randomized events never beat the left partial moment", ok)


def test_c6_constructive_phi():
    family = scaled_pareto_family((1, 1000))
    oracle = brute_force_breakpoints(lambda x: 1.0 if x < 1 else 1.0 / x, 2)
    assert oracle == [3, 26]
    bp = find_breakpoints(family, count=2)
    ok = bp.points == (0, 3, 26)

    phi = PhiFunction(PiecewiseLinearG(bp))
    verification = verify_phi(family, phi, k_max=2)
    ok = ok and verification.ok

    xs = np.geomspace(1e-2, 260.0, 100)
    ratios = []
    for x in xs:
        y = phi.h(float(x))
        ok = ok and abs(phi.eval(y) - x) <= 1e-10 * max(1.0, x)
        ratios.append(phi.eval(float(x)) / float(x))
    ok = ok and bool(np.all(np.diff(ratios) <= 1e-12))

    single = corollary_single(ScaledPareto(1), count=2, budget=100_000)
    ok = ok and single.g.breakpoints.points == (0, 3, 26)
    cert = verify_phi(single_spec_family(ScaledPareto(1)), single, k_max=2)
    ok = ok and cert.ok
    try:
        corollary_single(Degenerate(5.0), count=2, budget=5000)
        ok = False
    except BreakpointBudgetError:
        pass
    report_line("C6 constructive phi (breakpoints 3 and 26, verified)", ok)


def test_c7_counterexample_family():
    report = mixture_counterexample_report()
    ok = report.passed
    small_grid = GridSpec(1.0, 1e6, 25, "logarithmic")
    for n in (1, 2, 4, 8, 16, 64, 256):
        from nidiag import BernoulliParetoMixture

        verdict = ni_evidence(BernoulliParetoMixture(1.0 / n), small_grid, 1000)
        ok = ok and verdict.status == "CertifiedDiverges"
        ok = ok and verdict.evidence["tail_sum_trend"]["slope_vs_log_level"] > 0
    family_status = {
        v.criterion: v.status for v in classify(bernoulli_pareto_family((1, 1000)), DEFAULT_GRID, 100)
    }
    ok = ok and family_status["W-UNI"] == "CertifiedBoundedInf"
    report_line("C7 memberwise divergence without family divergence", ok)


def test_c8_byte_determinism(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(
        json.dumps({"family": {"kind": "scaled-pareto"}, "index_window": {"min": 1, "max": 200}}),
        encoding="utf-8",
    )
    blobs = []
    for tag in ("1", "2"):
        out, curves = tmp_path / f"r{tag}.json", tmp_path / f"c{tag}.csv"
        assert main(["analyze", "--config", str(cfg), "--out", str(out), "--curves", str(curves)]) == EXIT_OK
        blobs.append((out.read_bytes(), curves.read_bytes()))
    ok = blobs[0] == blobs[1]

    dirs = []
    for tag in ("a", "b"):
        d = tmp_path / f"rep{tag}"
        assert main(["reproduce", "all", "--out", str(d)]) == EXIT_OK
        dirs.append(d)
    names = sorted(p.name for p in dirs[0].iterdir())
    ok = ok and names == sorted(p.name for p in dirs[1].iterdir())
    for name in names:
        ok = ok and (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()
    report_line("C8 byte-identical analyze and reproduce outputs", ok)


def test_c9_full_suite_runtime(tmp_path):
    start = time.perf_counter()
    rc = main(["reproduce", "all", "--out", str(tmp_path / "full")])
    elapsed = time.perf_counter() - start
    report_line("C9 full reproduction suite exits 0 in under 300 s", rc == EXIT_OK and elapsed < 300.0)
