"""Scenario configuration files (YAML)."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import yaml

from ..fol import ParseError, Sentence, parse_sentence
from ..market.engine import AgentSpec, FuelPolicy
from ..market.reality import ArithmeticReality, RealityError, ScriptedReality
from .templates import TEMPLATE_PARAMS, TEMPLATES, TemplateError


class ConfigError(ValueError):
    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


@dataclass
class ScenarioConfig:
    name: str
    universe: list[Sentence]
    agents: list[AgentSpec]
    reality: object
    horizon: int
    fuel: FuelPolicy = field(default_factory=FuelPolicy)
    seed: int = 0
    output: Optional[Path] = None
    window: Fraction = Fraction(1, 4)
    source: Optional[Path] = None


_TOP_KEYS = {"name", "universe", "agents", "reality", "horizon", "fuel", "seed", "output",
             "window", "enumerate"}


def rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(f"expected a rational, got {value!r}", where)
    if isinstance(value, float):
        # YAML reads 0.99 as a float; its decimal text is what the author meant
        return Fraction(repr(value))
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"expected a rational such as 3/4, got {value!r}", where) from None


def natural(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ConfigError(f"expected a natural number, got {value!r}", where)
    return value


def sentence(value, where: str) -> Sentence:
    if not isinstance(value, str):
        raise ConfigError(f"expected a sentence string, got {value!r}", where)
    try:
        return parse_sentence(value)
    except ParseError as exc:
        raise ConfigError(str(exc), where) from None


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", str(path)) from None
    cfg = parse_config(text, str(path))
    cfg.source = path
    if cfg.output is not None and not cfg.output.is_absolute():
        cfg.output = path.parent / cfg.output
    return cfg


def parse_config(text: str, where: str = "<config>") -> ScenarioConfig:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        loc = f"{where}:{mark.line + 1}:{mark.column + 1}" if mark else where
        raise ConfigError(f"invalid YAML ({getattr(exc, 'problem', exc)})", loc) from None
    if not isinstance(raw, dict):
        raise ConfigError("top level must be a mapping", where)
    return build_config(raw, where)


def build_config(raw: dict[str, Any], where: str = "<config>") -> ScenarioConfig:
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", where)
    if "horizon" not in raw:
        raise ConfigError("missing 'horizon'", where)
    horizon = natural(raw["horizon"], f"{where}:horizon")
    if horizon < 1:
        raise ConfigError("horizon must be at least 1", f"{where}:horizon")
    universe_raw = raw.get("universe") or []
    if not isinstance(universe_raw, list):
        raise ConfigError("'universe' must be a list of sentences", where)
    universe = [sentence(s, f"{where}:universe[{i}]") for i, s in enumerate(universe_raw)]

    fuel_raw = raw.get("fuel") or {}
    if not isinstance(fuel_raw, dict) or set(fuel_raw) - {"c", "k"}:
        raise ConfigError("'fuel' takes keys c and k", f"{where}:fuel")
    fuel = FuelPolicy(natural(fuel_raw.get("c", 1000), f"{where}:fuel.c"),
                      natural(fuel_raw.get("k", 2), f"{where}:fuel.k"))

    agents = []
    for i, entry in enumerate(raw.get("agents") or []):
        agents.append(build_agent(entry, fuel, f"{where}:agents[{i}]"))
    if "enumerate" in raw:
        agents.extend(enumerate_templates(raw["enumerate"], fuel, f"{where}:enumerate", len(agents)))

    window = rational(raw.get("window", "1/4"), f"{where}:window")
    if not 0 < window <= 1:
        raise ConfigError("window must lie in (0, 1]", f"{where}:window")
    output = raw.get("output")
    return ScenarioConfig(
        name=str(raw.get("name", "scenario")),
        universe=universe,
        agents=agents,
        reality=build_reality(raw.get("reality"), f"{where}:reality"),
        horizon=horizon,
        fuel=fuel,
        seed=natural(raw.get("seed", 0), f"{where}:seed"),
        output=Path(output) if output else None,
        window=window,
    )


def build_reality(raw, where: str):
    raw = raw or {"mode": "arithmetic"}
    if not isinstance(raw, dict):
        raise ConfigError("'reality' must be a mapping", where)
    mode = raw.get("mode", "arithmetic")
    schedule = raw.get("schedule", "cost")
    try:
        base = ArithmeticReality(schedule)
        if mode == "arithmetic":
            return base
        if mode == "scripted":
            script = []
            for i, item in enumerate(raw.get("script") or []):
                loc = f"{where}.script[{i}]"
                if not isinstance(item, (list, tuple)) or len(item) != 3 or not isinstance(item[2], bool):
                    raise ConfigError("script entries are [t, sentence, true|false]", loc)
                script.append((natural(item[0], loc), sentence(item[1], loc), item[2]))
            return ScriptedReality(script, base)
    except RealityError as exc:
        raise ConfigError(str(exc), where) from None
    raise ConfigError(f"unknown reality mode {mode!r}", where)


def build_agent(entry, fuel: FuelPolicy, where: str, index: Optional[int] = None) -> AgentSpec:
    if not isinstance(entry, dict):
        raise ConfigError("agent entry must be a mapping", where)
    template = entry.get("template")
    if template not in TEMPLATES:
        raise ConfigError(f"unknown template {template!r}; choose from {sorted(TEMPLATES)}", where)
    allowed = TEMPLATE_PARAMS[template] | {"template", "name", "endowment", "birthday", "holdings"}
    unknown = set(entry) - allowed
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} for {template}", where)
    kwargs: dict[str, Any] = {}
    for key, value in entry.items():
        if key in ("template", "name", "holdings"):
            continue
        loc = f"{where}.{key}"
        if key == "sentence":
            kwargs[key] = sentence(value, loc)
        elif key in ("alpha", "challenge"):
            kwargs[key] = value
        elif key in ("birthday", "period"):
            kwargs[key] = natural(value, loc)
        else:
            kwargs[key] = rational(value, loc)
    if "sentence" not in kwargs:
        raise ConfigError("missing 'sentence'", where)
    name = str(entry.get("name", f"{template}-{index if index is not None else where}"))
    try:
        spec = TEMPLATES[template](name, fuel=fuel, **kwargs)
    except (TemplateError, ParseError, ValueError) as exc:
        raise ConfigError(str(exc), where) from None
    holdings = entry.get("holdings") or {}
    if not isinstance(holdings, dict):
        raise ConfigError("'holdings' maps Delta0 sentences to quantities", where)
    for text, qty in holdings.items():
        s = sentence(text, f"{where}.holdings")
        if s.prefix:
            raise ConfigError(f"initial holdings must be Delta0 sentences: {text}", f"{where}.holdings")
        spec.holdings[s] = rational(qty, f"{where}.holdings")
    return spec


def enumerate_templates(raw, fuel: FuelPolicy, where: str, offset: int) -> list[AgentSpec]:
    """Expand a template over a parameter grid; the k-th agent (k >= 1) gets ``E / 2**k``."""
    if not isinstance(raw, dict):
        raise ConfigError("'enumerate' must be a mapping", where)
    template = raw.get("template")
    total = rational(raw.get("total_endowment", 0), f"{where}.total_endowment")
    base = dict(raw.get("base") or {})
    grid = raw.get("grid") or {}
    if not isinstance(grid, dict):
        raise ConfigError("'grid' maps parameter names to lists", where)
    combos: list[dict] = [{}]
    for key in sorted(grid):
        values = grid[key]
        if not isinstance(values, list) or not values:
            raise ConfigError(f"grid.{key} must be a nonempty list", where)
        combos = [{**c, key: v} for c in combos for v in values]
    limit = raw.get("count")
    if limit is not None:
        combos = combos[:natural(limit, f"{where}.count")]
    specs = []
    for k, combo in enumerate(combos, start=1):
        entry = {**base, **combo, "template": template, "endowment": str(total / 2 ** k),
                 "name": f"{template}-{k}"}
        entry.setdefault("birthday", k)
        specs.append(build_agent(entry, fuel, f"{where}[{k}]", offset + k))
    return specs
