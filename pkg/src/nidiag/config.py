"""Run configuration: a single JSON document with strict validation.

Defaults are applied only for absent fields; unknown fields are rejected at
every level so typos cannot silently fall back to defaults.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .diagnostics import GridSpec, single_spec_family
from .models import (
    RVFamily,
    TabulatedSurvival,
    bernoulli_pareto_family,
    degenerate_family,
    empirical_family,
    load_samples,
    pareto_alpha_family,
    scaled_pareto_family,
)

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config", "build_family"]

FAMILY_KINDS = (
    "scaled-pareto",
    "pareto-alpha",
    "bernoulli-pareto",
    "degenerate",
    "empirical",
    "tabulated",
)


class ConfigError(Exception):
    """Configuration document rejected; the message names the field."""


@dataclass(frozen=True)
class RunConfig:
    family: dict
    index_window: tuple[int, int]
    a_grid: GridSpec
    m_max: int
    mc_seed: int
    mc_samples: int
    quad_abs: float
    quad_rel: float
    invert_rel: float
    vp_count: int
    vp_budget: int


def _section(doc: dict, key: str, allowed: tuple[str, ...]) -> dict:
    raw = doc.get(key, {})
    if not isinstance(raw, dict):
        raise ConfigError(f"field '{key}' must be an object")
    for k in raw:
        if k not in allowed:
            raise ConfigError(f"unknown field '{key}.{k}'")
    return raw


def _number(section: dict, path: str, key: str, default, *, kind=float, low=None, high=None):
    val = section.get(key, default)
    if kind is int and not isinstance(val, int):
        raise ConfigError(f"field '{path}.{key}' must be an integer")
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise ConfigError(f"field '{path}.{key}' must be a number")
    val = kind(val)
    if not math.isfinite(val):
        raise ConfigError(f"field '{path}.{key}' must be finite")
    if low is not None and val < low:
        raise ConfigError(f"field '{path}.{key}' must be >= {low}, got {val}")
    if high is not None and val > high:
        raise ConfigError(f"field '{path}.{key}' must be <= {high}, got {val}")
    return val


def parse_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    top_allowed = ("family", "index_window", "a_grid", "m_max", "mc", "tolerances", "vp")
    for k in doc:
        if k not in top_allowed:
            raise ConfigError(f"unknown field '{k}'")

    family = doc.get("family", {"kind": "scaled-pareto"})
    if not isinstance(family, dict) or "kind" not in family:
        raise ConfigError("field 'family' must be an object with a 'kind'")
    if family["kind"] not in FAMILY_KINDS:
        raise ConfigError(f"unknown field value 'family.kind' = {family['kind']!r}")

    win = _section(doc, "index_window", ("min", "max"))
    w_lo = _number(win, "index_window", "min", 1, kind=int, low=1)
    w_hi = _number(win, "index_window", "max", 1000, kind=int, low=1)
    if w_hi < w_lo:
        raise ConfigError("field 'index_window.max' must be >= 'index_window.min'")

    gr = _section(doc, "a_grid", ("min", "max", "points", "spacing"))
    g_min = _number(gr, "a_grid", "min", 1.0, low=np.finfo(float).tiny)
    g_max = _number(gr, "a_grid", "max", 1e6)
    g_pts = _number(gr, "a_grid", "points", 61, kind=int, low=2)
    spacing = gr.get("spacing", "logarithmic")
    if spacing not in ("linear", "logarithmic"):
        raise ConfigError(f"field 'a_grid.spacing' must be linear or logarithmic")
    if g_max <= g_min:
        raise ConfigError("field 'a_grid.max' must exceed 'a_grid.min'")

    m_max = _number(doc, "", "m_max", 1000, kind=int, low=1)

    mc = _section(doc, "mc", ("seed", "samples"))
    mc_seed = _number(mc, "mc", "seed", 20260813, kind=int, low=0)
    mc_samples = _number(mc, "mc", "samples", 100_000, kind=int, low=1000)

    tol = _section(doc, "tolerances", ("quad_abs", "quad_rel", "invert_rel"))
    quad_abs = _number(tol, "tolerances", "quad_abs", 1e-12, low=0.0)
    quad_rel = _number(tol, "tolerances", "quad_rel", 1e-10, low=0.0)
    invert_rel = _number(tol, "tolerances", "invert_rel", 1e-12, low=0.0)
    if quad_abs == 0 or quad_rel == 0 or invert_rel == 0:
        raise ConfigError("field 'tolerances' entries must be positive")

    vp = _section(doc, "vp", ("count", "budget"))
    vp_count = _number(vp, "vp", "count", 3, kind=int, low=1)
    vp_budget = _number(vp, "vp", "budget", 1_000_000, kind=int, low=3)

    return RunConfig(
        family=family,
        index_window=(w_lo, w_hi),
        a_grid=GridSpec(g_min, g_max, g_pts, spacing),
        m_max=m_max,
        mc_seed=mc_seed,
        mc_samples=mc_samples,
        quad_abs=quad_abs,
        quad_rel=quad_rel,
        invert_rel=invert_rel,
        vp_count=vp_count,
        vp_budget=vp_budget,
    )


def load_config(path: str | Path) -> RunConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    return parse_config(doc)


def _check_keys(family: dict, allowed: tuple[str, ...]) -> None:
    for k in family:
        if k not in allowed:
            raise ConfigError(f"unknown field 'family.{k}' for kind {family['kind']!r}")


def build_family(config: RunConfig, base_dir: str | Path = ".") -> RVFamily:
    """Instantiate the configured family.

    Data-driven kinds (empirical, tabulated) take their index window from
    the data itself; the indexed kinds use ``index_window``.
    """
    family = config.family
    kind = family["kind"]
    window = config.index_window
    if kind == "scaled-pareto":
        _check_keys(family, ("kind",))
        return scaled_pareto_family(window)
    if kind == "pareto-alpha":
        _check_keys(family, ("kind",))
        return pareto_alpha_family(window=window)
    if kind == "bernoulli-pareto":
        _check_keys(family, ("kind",))
        return bernoulli_pareto_family(window)
    if kind == "degenerate":
        _check_keys(family, ("kind", "value"))
        if "value" not in family:
            raise ConfigError("field 'family.value' required for kind degenerate")
        value = family["value"]
        if not isinstance(value, (int, float)) or isinstance(value, bool) or value < 0:
            raise ConfigError("field 'family.value' must be a nonnegative number")
        return degenerate_family(float(value), window)
    if kind == "empirical":
        _check_keys(family, ("kind", "files"))
        files = family.get("files")
        if not isinstance(files, list) or not files or not all(isinstance(f, str) for f in files):
            raise ConfigError("field 'family.files' must be a nonempty list of paths")
        try:
            sets = [load_samples(Path(base_dir) / f) for f in files]
        except (OSError, ValueError) as exc:
            raise ConfigError(f"field 'family.files': {exc}")
        return empirical_family([s.samples for s in sets])
    if kind == "tabulated":
        _check_keys(family, ("kind", "points", "interpolation"))
        points = family.get("points")
        if not isinstance(points, list) or not points:
            raise ConfigError("field 'family.points' must be a nonempty list of [x, s] pairs")
        try:
            arr = np.asarray(points, dtype=float)
            if arr.ndim != 2 or arr.shape[1] != 2:
                raise ValueError("need [x, s] pairs")
            spec = TabulatedSurvival(arr[:, 0], arr[:, 1], family.get("interpolation", "step"))
        except ValueError as exc:
            raise ConfigError(f"field 'family.points': {exc}")
        return single_spec_family(spec, label="tabulated")
    raise ConfigError(f"unknown field value 'family.kind' = {kind!r}")
