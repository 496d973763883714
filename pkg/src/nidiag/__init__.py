"""Nonintegrability diagnostics for sequences of random variables.

Library surface:

* :mod:`nidiag.models`          laws, families, survival/quantile/sampling
* :mod:`nidiag.truncation`      capped and restricted means, tail sums,
  left partial moments, with closed-form / quadrature / Monte Carlo backends
* :mod:`nidiag.diagnostics`     infimum curves, certified verdicts, the
  event-mass criterion and its randomized oracle
* :mod:`nidiag.vallee_poussin`  the constructive ramp transform phi
* :mod:`nidiag.experiments`     desk-scale reproduction reports
* :mod:`nidiag.cli`             the ``nidiag`` command
"""

from .diagnostics import (
    AlphaMReport,
    GridSpec,
    InfCurve,
    Verdict,
    adversarial_event_search,
    alpha_m_check,
    beta_curve,
    classify,
    escape_probability_curve,
    inf_restricted_curve,
    inf_tailsum_curve,
    inf_wedge_curve,
    ni_evidence,
    single_spec_family,
)
from .models import (
    AlphaSequence,
    AnalyticBound,
    BernoulliParetoMixture,
    Degenerate,
    Empirical,
    ParetoAlpha,
    RVFamily,
    RVSpec,
    ScaledPareto,
    TabulatedSurvival,
    bernoulli_pareto_family,
    degenerate_family,
    empirical_family,
    load_samples,
    pareto_alpha_family,
    quantile,
    sample,
    scaled_pareto_family,
    survival,
)
from .truncation import (
    ClosedForm,
    EstimateWithError,
    MonteCarlo,
    Quadrature,
    TruncationMethod,
    UnsupportedMethodError,
    left_partial_moment,
    restricted_mean,
    tail_sum,
    wedge_mean,
)
from .vallee_poussin import (
    BreakpointBudgetError,
    BreakpointSequence,
    PhiFunction,
    PiecewiseLinearG,
    corollary_single,
    find_breakpoints,
    g_eval,
    phi_eval,
    verify_phi,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaMReport",
    "AlphaSequence",
    "AnalyticBound",
    "BernoulliParetoMixture",
    "BreakpointBudgetError",
    "BreakpointSequence",
    "ClosedForm",
    "Degenerate",
    "Empirical",
    "EstimateWithError",
    "GridSpec",
    "InfCurve",
    "MonteCarlo",
    "ParetoAlpha",
    "PhiFunction",
    "PiecewiseLinearG",
    "Quadrature",
    "RVFamily",
    "RVSpec",
    "ScaledPareto",
    "TabulatedSurvival",
    "TruncationMethod",
    "UnsupportedMethodError",
    "Verdict",
    "adversarial_event_search",
    "alpha_m_check",
    "bernoulli_pareto_family",
    "beta_curve",
    "classify",
    "corollary_single",
    "degenerate_family",
    "empirical_family",
    "escape_probability_curve",
    "find_breakpoints",
    "g_eval",
    "inf_restricted_curve",
    "inf_tailsum_curve",
    "inf_wedge_curve",
    "left_partial_moment",
    "load_samples",
    "ni_evidence",
    "pareto_alpha_family",
    "phi_eval",
    "quantile",
    "restricted_mean",
    "sample",
    "scaled_pareto_family",
    "single_spec_family",
    "survival",
    "tail_sum",
    "verify_phi",
    "wedge_mean",
]
