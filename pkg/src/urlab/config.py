"""Run configuration: one flat JSON file per run, strictly validated."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigParse, ConfigValidate
from .fixtures import lookup

EXPERIMENTS = ("verify", "zero-scan", "mt", "mt-limits", "zeno", "bw")
TOP_LEVEL_KEYS = {"experiment", "hbar", "seed", "dims", "trials", "params", "output", "format"}
MAX_DIM = 200
MAX_SEED = 2**64 - 1

# allowed params per experiment -> validator kind
PARAM_KEYS: dict[str, dict[str, str]] = {
    "verify": {"operators": "pair_or_random", "state": "state"},
    "zero-scan": {"operators": "pair_or_random"},
    "mt": {"operators": "pair_or_random", "state": "state", "include_eigenvectors": "bool"},
    "mt-limits": {"kind": "family_kind", "family": "family", "thetas": "angles", "grid": "grid"},
    "zeno": {
        "fixture": "zeno",
        "operator": "operator",
        "state": "state",
        "total_t": "positive",
        "n_list": "increasing_ints",
        "cutoff": "positive",
    },
    "bw": {
        "fixture": "bw",
        "E0": "finite",
        "Gamma0": "positive",
        "Emin": "finite",
        "lambda_start": "positive",
        "lambda_stop": "positive",
    },
}


@dataclass
class RunConfig:
    experiment: str
    hbar: float = 1.0
    seed: int = 0
    dims: list[int] = field(default_factory=lambda: [2, 3, 4, 5, 6, 7, 8])
    trials: int = 100
    params: dict[str, Any] = field(default_factory=dict)
    output: str | None = None
    format: str = "csv"

    def echo(self) -> dict[str, Any]:
        return asdict(self)


def angle(value) -> float:
    """Radians, either numeric or a string like ``"pi"`` / ``"pi/6"``."""
    if isinstance(value, str):
        v = value.replace(" ", "")
        if v == "pi":
            return math.pi
        if v.startswith("pi/"):
            return math.pi / float(v[3:])
        raise ValueError(f"cannot read angle {value!r}")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"cannot read angle {value!r}")
    return float(value)


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _check_param(experiment: str, key: str, kind: str, value):
    def bad(msg):
        raise ConfigValidate(f"{experiment}.params.{key}: {msg}")

    fixture_kind = {"state": "state", "operator": "operator", "family": "family", "zeno": "zeno", "bw": "bw"}
    if kind in fixture_kind:
        try:
            lookup(str(value), fixture_kind[kind])
        except KeyError:
            bad(f"unknown {kind} fixture {value!r}")
        return value
    if kind == "pair_or_random":
        if value == "random":
            return value
        try:
            lookup(str(value), "pair")
        except KeyError:
            bad(f"unknown operator-pair fixture {value!r}")
        return value
    if kind == "bool":
        if not isinstance(value, bool):
            bad("expected true or false")
        return value
    if kind == "family_kind":
        if value not in ("eta", "lambda"):
            bad("expected 'eta' or 'lambda'")
        return value
    if kind == "angles":
        if not isinstance(value, list) or not value:
            bad("expected a non-empty list of angles")
        try:
            return [angle(v) for v in value]
        except ValueError as exc:
            bad(str(exc))
    if kind == "grid":
        if isinstance(value, dict):
            extra = set(value) - {"start", "stop", "ratio"}
            if extra:
                bad(f"unknown grid keys {sorted(extra)}")
            vals = [value.get(k, d) for k, d in (("start", 1e-1), ("stop", 1e-5), ("ratio", 10.0))]
            if not all(_is_number(v) and v > 0 for v in vals) or vals[1] >= vals[0] or vals[2] <= 1:
                bad("need 0 < stop < start and ratio > 1")
            return value
        if not isinstance(value, list) or not all(_is_number(v) and v > 0 for v in value):
            bad("expected a list of positive numbers or {start, stop, ratio}")
        return value
    if kind == "positive":
        if not _is_number(value) or value <= 0:
            bad("expected a positive number")
        return value
    if kind == "finite":
        if not _is_number(value):
            bad("expected a finite number")
        return value
    if kind == "increasing_ints":
        if (
            not isinstance(value, list)
            or not value
            or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in value)
            or any(b <= a for a, b in zip(value, value[1:]))
        ):
            bad("expected a strictly increasing list of positive integers")
        return value
    raise AssertionError(kind)


def validate(raw: dict[str, Any], experiment: str | None = None) -> RunConfig:
    """Turn a parsed config mapping into a RunConfig, rejecting unknown keys and bad ranges."""
    if not isinstance(raw, dict):
        raise ConfigValidate("config must be a JSON object")
    unknown = set(raw) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigValidate(f"unknown config keys: {sorted(unknown)}")
    exp = raw.get("experiment", experiment)
    if experiment is not None and exp != experiment:
        raise ConfigValidate(f"config is for experiment {exp!r}, not {experiment!r}")
    if exp not in EXPERIMENTS:
        raise ConfigValidate(f"unknown experiment {exp!r}")

    cfg = RunConfig(experiment=exp)
    if "hbar" in raw:
        if not _is_number(raw["hbar"]) or raw["hbar"] <= 0:
            raise ConfigValidate("hbar must be a positive number")
        cfg.hbar = float(raw["hbar"])
    if "seed" in raw:
        s = raw["seed"]
        if not isinstance(s, int) or isinstance(s, bool) or not 0 <= s <= MAX_SEED:
            raise ConfigValidate("seed must be an unsigned 64-bit integer")
        cfg.seed = s
    if "dims" in raw:
        d = raw["dims"]
        if (
            not isinstance(d, list)
            or not d
            or not all(isinstance(x, int) and not isinstance(x, bool) and 2 <= x <= MAX_DIM for x in d)
        ):
            raise ConfigValidate(f"dims must be a non-empty list of integers in [2, {MAX_DIM}]")
        cfg.dims = list(d)
    if "trials" in raw:
        t = raw["trials"]
        if not isinstance(t, int) or isinstance(t, bool) or not 1 <= t <= 10**7:
            raise ConfigValidate("trials must be an integer in [1, 1e7]")
        cfg.trials = t
    if "format" in raw:
        if raw["format"] not in ("csv", "json"):
            raise ConfigValidate("format must be 'csv' or 'json'")
        cfg.format = raw["format"]
    if "output" in raw:
        if not isinstance(raw["output"], str) or not raw["output"]:
            raise ConfigValidate("output must be a non-empty path string")
        cfg.output = raw["output"]

    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise ConfigValidate("params must be an object")
    allowed = PARAM_KEYS[exp]
    unknown = set(params) - set(allowed)
    if unknown:
        raise ConfigValidate(f"unknown params for {exp}: {sorted(unknown)}")
    cfg.params = {k: _check_param(exp, k, allowed[k], v) for k, v in params.items()}

    if exp in ("verify", "mt") and cfg.params.get("operators", "random") != "random":
        if exp == "verify" and "state" not in cfg.params:
            raise ConfigValidate("verify with fixture operators needs params.state")
    if exp == "bw":
        given = {"E0", "Gamma0", "Emin"} & set(cfg.params)
        if given and given != {"E0", "Gamma0", "Emin"}:
            raise ConfigValidate("bw needs all of E0, Gamma0, Emin or none")
        if given and "fixture" in cfg.params:
            raise ConfigValidate("bw takes either a fixture or explicit E0/Gamma0/Emin")
        start = cfg.params.get("lambda_start", 1e3)
        stop = cfg.params.get("lambda_stop", 1e6)
        if stop < 32 * start:
            raise ConfigValidate("lambda_stop must allow at least 6 doublings of lambda_start")
    return cfg


def load(path: str | Path, experiment: str | None = None) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigParse(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParse(f"invalid JSON in {path}: {exc}") from exc
    return validate(raw, experiment)
