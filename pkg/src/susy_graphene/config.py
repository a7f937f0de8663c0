"""Run configuration: JSON schema, validation, bundled figure configs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .fields import Grid
from .model import MORSE, OSCILLATOR, ModelSpec, UnitSystem, bound_state_count

OUTPUT_KINDS = ("potential", "field", "density", "current", "spectrum")
FORMATS = ("csv", "json")

_TOP_KEYS = {"description", "model", "chain", "grid", "outputs", "levels", "format"}
_MODEL_KEYS = {"kind", "omega", "alpha", "d_strength", "k_wave", "units"}
_UNIT_KEYS = {"hbar", "c", "e_charge", "v_fermi"}


class ConfigError(ValueError):
    """Invalid configuration; message carries the source and JSON path."""


def _fail(source: str, path: str, message: str):
    raise ConfigError(f"{source}: {path}: {message}")


def _require_number(source, path, obj, key, positive=False):
    if key not in obj:
        _fail(source, f"{path}.{key}", "missing required field")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(source, f"{path}.{key}", f"expected a number, got {v!r}")
    if positive and v <= 0:
        _fail(source, f"{path}.{key}", f"must be positive, got {v}")
    return float(v)


@dataclass(frozen=True)
class RunConfig:
    model: ModelSpec
    chain: tuple[tuple[float, float], ...]
    grid: Grid
    outputs: tuple[str, ...]
    levels: tuple[int, ...]
    format: str
    description: str = ""
    source: str = "<config>"


def _parse_model(source: str, raw: dict) -> ModelSpec:
    if not isinstance(raw, dict):
        _fail(source, "model", "expected an object")
    unknown = set(raw) - _MODEL_KEYS
    if unknown:
        _fail(source, "model", f"unknown keys {sorted(unknown)}")
    kind = raw.get("kind")
    units = UnitSystem()
    if "units" in raw:
        uraw = raw["units"]
        if not isinstance(uraw, dict) or set(uraw) - _UNIT_KEYS:
            _fail(source, "model.units", f"expected an object with keys {sorted(_UNIT_KEYS)}")
        kwargs = {k: _require_number(source, "model.units", uraw, k, positive=True)
                  for k in uraw}
        units = UnitSystem(**kwargs)
    try:
        if kind == OSCILLATOR:
            return ModelSpec.oscillator(
                omega=_require_number(source, "model", raw, "omega", positive=True),
                k_wave=_require_number(source, "model", raw, "k_wave"),
                units=units)
        if kind == MORSE:
            return ModelSpec.morse(
                alpha=_require_number(source, "model", raw, "alpha", positive=True),
                d_strength=_require_number(source, "model", raw, "d_strength", positive=True),
                k_wave=_require_number(source, "model", raw, "k_wave", positive=True),
                units=units)
    except ValueError as err:
        _fail(source, "model", str(err))
    _fail(source, "model.kind", f"expected 'oscillator' or 'morse', got {kind!r}")


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{source}:{err.lineno}:{err.colno}: {err.msg}") from err
    if not isinstance(raw, dict):
        _fail(source, "$", "top level must be an object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        _fail(source, "$", f"unknown keys {sorted(unknown)}")
    for key in ("model", "chain", "outputs", "levels"):
        if key not in raw:
            _fail(source, "$", f"missing required field {key!r}")

    model = _parse_model(source, raw["model"])

    chain_raw = raw["chain"]
    if not isinstance(chain_raw, list):
        _fail(source, "chain", "expected a list of {epsilon, nu} steps")
    steps = []
    for i, st in enumerate(chain_raw):
        if not isinstance(st, dict) or set(st) - {"epsilon", "nu"}:
            _fail(source, f"chain[{i}]", "expected an object with keys epsilon, nu")
        eps = _require_number(source, f"chain[{i}]", st, "epsilon")
        nu = _require_number(source, f"chain[{i}]", st, "nu")
        if eps > 0.0:
            _fail(source, f"chain[{i}].epsilon", "factorization energies must be <= 0")
        if steps and eps >= steps[-1][0]:
            _fail(source, f"chain[{i}].epsilon",
                  f"must decrease strictly ({eps} not below {steps[-1][0]})")
        if model.kind == MORSE and nu == 0.0:
            _fail(source, f"chain[{i}].nu", "nu = 0 is undefined for the Morse family")
        steps.append((eps, nu))

    if "grid" in raw:
        graw = raw["grid"]
        if not isinstance(graw, dict) or set(graw) - {"x_min", "x_max", "n_points"}:
            _fail(source, "grid", "expected an object with x_min, x_max, n_points")
        x_min = _require_number(source, "grid", graw, "x_min")
        x_max = _require_number(source, "grid", graw, "x_max")
        n_raw = graw.get("n_points")
        if not isinstance(n_raw, int) or isinstance(n_raw, bool):
            _fail(source, "grid.n_points", "expected an integer")
        try:
            grid = Grid(x_min, x_max, n_raw)
        except ValueError as err:
            _fail(source, "grid", str(err))
    else:
        x0, x1 = model.default_range()
        grid = Grid(x0, x1, 1001)

    outputs_raw = raw["outputs"]
    if not isinstance(outputs_raw, list) or not outputs_raw:
        _fail(source, "outputs", "expected a non-empty list")
    seen = []
    for i, name in enumerate(outputs_raw):
        if name not in OUTPUT_KINDS:
            _fail(source, f"outputs[{i}]", f"unknown output {name!r}; "
                  f"choose from {list(OUTPUT_KINDS)}")
        if name not in seen:
            seen.append(name)
    if not steps and ({"density", "current"} & set(seen)):
        _fail(source, "outputs", "density/current need at least one chain step")

    levels_raw = raw["levels"]
    if not isinstance(levels_raw, list) or not levels_raw:
        _fail(source, "levels", "expected a non-empty list of level indices")
    levels = []
    for i, n in enumerate(levels_raw):
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            _fail(source, f"levels[{i}]", f"expected a non-negative integer, got {n!r}")
        levels.append(n)
    if model.kind == MORSE:
        top = bound_state_count(model) + len(steps) - 1
        for i, n in enumerate(levels):
            if n > top:
                _fail(source, f"levels[{i}]",
                      f"level {n} is beyond the bound spectrum (max {top})")

    fmt = raw.get("format", "csv")
    if fmt not in FORMATS:
        _fail(source, "format", f"expected one of {list(FORMATS)}, got {fmt!r}")

    description = raw.get("description", "")
    if not isinstance(description, str):
        _fail(source, "description", "expected a string")

    return RunConfig(model=model, chain=tuple(steps), grid=grid,
                     outputs=tuple(seen), levels=tuple(levels), format=fmt,
                     description=description, source=source)


def load_config(path: str | Path) -> RunConfig:
    p = Path(path)
    return parse_config(p.read_text(), source=p.name)


def bundled_names() -> list[str]:
    root = resources.files("susy_graphene").joinpath("configs")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_bundled(name: str) -> RunConfig:
    fname = name if name.endswith(".json") else name + ".json"
    root = resources.files("susy_graphene").joinpath("configs")
    entry = root.joinpath(fname)
    if not entry.is_file():
        raise ConfigError(f"no bundled config named {name!r}; "
                          f"available: {', '.join(bundled_names())}")
    return parse_config(entry.read_text(), source=fname)


def resolve_config(arg: str) -> RunConfig:
    """A filesystem path if it exists, else a bundled config name."""
    p = Path(arg)
    if p.is_file():
        return load_config(p)
    return load_bundled(arg)
