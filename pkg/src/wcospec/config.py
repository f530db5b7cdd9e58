"""Job configuration: strict JSON parsing and descriptor builders.

Every dictionary level has a fixed key set; an unknown key raises
:class:`ConfigError` naming it.

Example::

    {
      "schema": 1,
      "weight": {"type": "polynomial", "coeffs": [2, 1]},
      "map": {"fixed_point": [0, 0], "eta": {"angle": 0.6180339887498949}},
      "space": {"p": 2, "alpha": 0},
      "knobs": {"schedule": [16, 64, 256]}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .bergman import BergmanParams
from .corpus import fat_cantor_mask, open_dense_mask, _arc_mask
from .dynamics import GOLDEN, EllipticAutomorphism, classify_and_conjugate
from .exceptions import NonEllipticError, WcoError
from .hinf import LOG_FLOOR, BoundaryLogModulus, HInfFunction, factor, outer_from_log_modulus

__all__ = ["TASKS", "ConfigError", "JobConfig", "load_config", "parse_config", "build_weight", "build_map", "zero_weight"]

TASKS = ("factor", "radius", "spectrum", "residual", "pseudospec", "birkhoff", "verify-all")
SEEDED_TASKS = ("verify-all",)

TOP_KEYS = {"schema", "task", "weight", "map", "space", "knobs"}
SPACE_KEYS = {"p", "alpha"}
KNOB_KEYS = {
    "M",  # boundary grid size
    "N",  # truncation order
    "Q",  # radial quadrature order
    "schedule",
    "radii",
    "ks",
    "phases",
    "grid",
    "lambda",
    "n",
    "seed",
    "trials",
}
GRID_KEYS = {"radii", "angles", "r_max"}
WEIGHT_KEYS = {
    "polynomial": {"type", "coeffs", "grid_size"},
    "components": {"type", "blaschke_zeros", "singular_atoms", "outer_log_modulus", "continuous"},
}
OUTER_KEYS = {
    "samples": {"kind", "values"},
    "char_fn": {"kind", "set", "height", "M", "arcs", "measure"},
    "closed_form": {"kind", "family", "coeffs", "value", "amplitude", "frequency", "M"},
}
MAP_KEYS = {"fixed_point", "eta", "mobius"}
ETA_KEYS = {"rational", "angle"}
MOBIUS_KEYS = {"lambda_angle", "b", "coeffs"}


class ConfigError(WcoError, ValueError):
    """Invalid job configuration (exit code 3)."""


def _strict(d, allowed, where):
    if not isinstance(d, dict):
        raise ConfigError(f"{where}: expected an object")
    for key in d:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {where}")


def _complex(v, where):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ConfigError(f"{where}: expected a number or [re, im]")


def _pow2(m, where):
    m = int(m)
    if m < 16 or m & (m - 1):
        raise ConfigError(f"{where}: grid size must be a power of two >= 16, got {m}")
    return m


def _outer(desc) -> tuple[BoundaryLogModulus, bool]:
    kind = desc.get("kind") if isinstance(desc, dict) else None
    if kind not in OUTER_KEYS:
        raise ConfigError(f"outer_log_modulus.kind must be one of {sorted(OUTER_KEYS)}")
    _strict(desc, OUTER_KEYS[kind], "outer_log_modulus")
    if kind == "samples":
        vals = np.asarray(desc.get("values", []), dtype=float)
        _pow2(vals.size, "outer_log_modulus.values")
        return BoundaryLogModulus(vals), False
    if kind == "char_fn":
        m = _pow2(desc.get("M", 1 << 16), "outer_log_modulus.M")
        height = float(desc.get("height", 1.0))
        which = desc.get("set", "arcs")
        if which == "open_dense":
            mask = open_dense_mask(m, float(desc.get("measure", 0.5)))
        elif which == "fat_cantor":
            mask = fat_cantor_mask(m)
        elif which == "arcs":
            arcs = np.asarray(desc.get("arcs", []), dtype=float).reshape(-1, 2)
            mask = _arc_mask(m, arcs[:, 0], arcs[:, 1])
        else:
            raise ConfigError(f"char_fn.set must be open_dense, fat_cantor or arcs, got {which!r}")
        return BoundaryLogModulus.indicator(mask, height), False
    m = _pow2(desc.get("M", 4096), "outer_log_modulus.M")
    fam = desc.get("family")
    if fam == "constant":
        return BoundaryLogModulus(np.full(m, float(desc.get("value", 0.0)))), True
    if fam == "cosine":
        a, k = float(desc.get("amplitude", 1.0)), int(desc.get("frequency", 1))
        return BoundaryLogModulus.from_callable(lambda t: a * np.cos(k * t), m), True
    if fam == "log_poly":
        c = [_complex(x, "closed_form.coeffs") for x in desc.get("coeffs", [])]
        if not c:
            raise ConfigError("closed_form.coeffs must be non-empty")
        with np.errstate(divide="ignore"):
            g = BoundaryLogModulus.from_callable(
                lambda t: np.log(np.abs(np.polynomial.polynomial.polyval(np.exp(1j * t), c))), m
            )
        return g, True
    raise ConfigError(f"closed_form.family must be constant, cosine or log_poly, got {fam!r}")


def zero_weight(m: int = 4096) -> HInfFunction:
    """The zero function, represented by boundary data at the log floor."""
    return HInfFunction(outer_log_modulus=BoundaryLogModulus(np.full(m, LOG_FLOOR)))


def build_weight(desc) -> HInfFunction:
    t = desc.get("type") if isinstance(desc, dict) else None
    if t not in WEIGHT_KEYS:
        raise ConfigError(f"weight.type must be one of {sorted(WEIGHT_KEYS)}")
    _strict(desc, WEIGHT_KEYS[t], "weight")
    if t == "polynomial":
        coeffs = [_complex(c, "weight.coeffs") for c in desc.get("coeffs", [])]
        if not coeffs:
            raise ConfigError("weight.coeffs must be non-empty")
        m = _pow2(desc.get("grid_size", 4096), "weight.grid_size")
        if all(c == 0 for c in coeffs):
            return zero_weight(m)
        return factor(coeffs, m)
    zeros = []
    for z in desc.get("blaschke_zeros", []):
        if len(z) != 3:
            raise ConfigError("blaschke_zeros entries are [re, im, multiplicity]")
        zeros.append((complex(float(z[0]), float(z[1])), int(z[2])))
    atoms = []
    for a in desc.get("singular_atoms", []):
        if len(a) != 2:
            raise ConfigError("singular_atoms entries are [theta, mass]")
        atoms.append((float(a[0]), float(a[1])))
    g, cont = _outer(desc.get("outer_log_modulus", {"kind": "closed_form", "family": "constant"}))
    cont = bool(desc.get("continuous", cont))
    try:
        h = outer_from_log_modulus(g)
        return HInfFunction(tuple(zeros), tuple(atoms), g, 1.0, h.log_taylor, cont)
    except WcoError as exc:
        raise ConfigError(str(exc)) from exc


def build_map(desc) -> EllipticAutomorphism:
    if desc is None:
        return EllipticAutomorphism.rotation(GOLDEN)
    _strict(desc, MAP_KEYS, "map")
    if "eta" in desc:
        _strict(desc["eta"], ETA_KEYS, "map.eta")
    if "mobius" in desc:
        _strict(desc["mobius"], MOBIUS_KEYS, "map.mobius")
    return classify_and_conjugate(desc)


@dataclass
class JobConfig:
    task: str
    raw: dict
    weight: HInfFunction | None = None
    map: EllipticAutomorphism | None = None
    space: BergmanParams = field(default_factory=BergmanParams)
    knobs: dict = field(default_factory=dict)


def _check_knobs(knobs):
    _strict(knobs, KNOB_KEYS, "knobs")
    if "grid" in knobs:
        _strict(knobs["grid"], GRID_KEYS, "knobs.grid")
    if "M" in knobs:
        _pow2(knobs["M"], "knobs.M")
    n = knobs.get("N", 200)
    if not 1 <= int(n) <= 512:
        raise ConfigError("knobs.N must lie in [1, 512]")
    for key in ("schedule", "ks"):
        if key in knobs and (not knobs[key] or min(int(x) for x in knobs[key]) < 1):
            raise ConfigError(f"knobs.{key} must be a non-empty list of positive integers")
    if "phases" in knobs and int(knobs["phases"]) < 1:
        raise ConfigError("knobs.phases must be positive")
    if "seed" in knobs and not isinstance(knobs["seed"], int):
        raise ConfigError("knobs.seed must be an integer")


def parse_config(raw: dict, task: str) -> JobConfig:
    """Validate a raw config for ``task``; builds weight and map objects."""
    if task not in TASKS:
        raise ConfigError(f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
    _strict(raw, TOP_KEYS, "config")
    if raw.get("schema") != 1:
        raise ConfigError("config must declare \"schema\": 1")
    if "task" in raw and raw["task"] != task:
        raise ConfigError(f"config task {raw['task']!r} does not match command {task!r}")
    space = raw.get("space", {})
    _strict(space, SPACE_KEYS, "space")
    try:
        params = BergmanParams(float(space.get("p", 2.0)), float(space.get("alpha", 0.0)))
    except WcoError as exc:
        raise ConfigError(str(exc)) from exc
    knobs = raw.get("knobs", {})
    _check_knobs(knobs)
    if task in SEEDED_TASKS and "seed" not in knobs:
        raise ConfigError(f"task {task} samples random inputs; knobs.seed is required")
    weight = None
    if task != "verify-all":
        if "weight" not in raw:
            raise ConfigError("config needs a weight descriptor")
        weight = build_weight(raw["weight"])
    try:
        phi = build_map(raw.get("map"))
    except NonEllipticError:
        raise
    except (WcoError, TypeError, ValueError) as exc:
        raise ConfigError(f"map: {exc}") from exc
    return JobConfig(task, raw, weight, phi, params, knobs)


def load_config(path, task: str) -> JobConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(raw, task)

