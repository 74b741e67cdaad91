"""Command line entry point: ``vfmarket run|check|game|gbase``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import yaml

from ..fol import ParseError, canonical_code, classify, parse_sentence
from ..game import playfull
from ..garrabrant import GAgent, GState, PropError, g_run, min_valuation, parse_prop, parse_theorem_stream
from ..kernels import BACKEND
from ..market.engine import InvariantBreach
from ..market.schedule import DemandSchedule
from ..truth import bounded_tarski
from .config import ConfigError, load_config, rational
from .runner import run_scenario
from .templates import TemplateError, instaplayer

EXIT_OK, EXIT_CONFIG, EXIT_BREACH = 0, 1, 2


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.horizon is not None:
        cfg.horizon = args.horizon
    result = run_scenario(cfg)
    out = Path(args.out) if args.out else cfg.output
    if out is not None:
        result.write(out)
        print(f"wrote {out}/prices.csv, audit.log, ledger.txt, report.json")
    rep = result.report()
    for text, info in rep["sentences"].items():
        print(f"{text}: final {info['final_price']} amplitude {info['amplitude']}")
    print(f"conservation {'ok' if rep['conservation_ok'] else 'FAILED'}; injected {rep['injected']}")
    for name, info in rep["agents"].items():
        flag = " EXPLOIT?" if info["exploitation_flag"] else ""
        print(f"  {name}: cash {info['final_cash']} (min {info['min_cash']}, max {info['max_cash']}){flag}")
    return EXIT_OK if rep["conservation_ok"] else EXIT_BREACH


def _cmd_check(args) -> int:
    s = parse_sentence(args.sentence)
    print(f"sentence: {s}")
    print(f"class: {classify(s)}")
    print(f"code: {canonical_code(s)}")
    print(f"bounded({args.bound}): {bounded_tarski(s, args.bound)}")
    return EXIT_OK


def _player_arg(text: str):
    try:
        return instaplayer(text)
    except TemplateError:
        pass
    try:
        parsed = yaml.safe_load(text)
    except yaml.YAMLError:
        parsed = text
    if isinstance(parsed, str) and Path(parsed).is_file():
        parsed = yaml.safe_load(Path(parsed).read_text(encoding="utf-8"))
    return instaplayer(parsed)


def _cmd_game(args) -> int:
    s = parse_sentence(args.sentence)
    alpha, beta = _player_arg(args.alpha), _player_arg(args.beta)
    out = playfull(s, alpha, beta, args.fuel, role_enforce=not args.literal)
    for line in out.lines():
        print(line)
    print(out.summary())
    return EXIT_OK


def _cmd_gbase(args) -> int:
    path = Path(args.config)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(str(exc), str(path)) from None
    if not isinstance(raw, dict) or "horizon" not in raw:
        raise ConfigError("expected a mapping with 'horizon'", str(path))
    where = str(path)
    universe = [parse_prop(s) for s in raw.get("universe") or []]
    thms_raw = raw.get("theorems") or []
    if isinstance(thms_raw, str):
        theorems = parse_theorem_stream((path.parent / thms_raw).read_text(encoding="utf-8"))
    else:
        theorems = sorted(((int(t), parse_prop(f)) for t, f in thms_raw), key=lambda e: e[0])
    agents = []
    for i, entry in enumerate(raw.get("agents") or []):
        loc = f"{where}:agents[{i}]"
        book = {}
        for text, orders in (entry.get("orders") or {}).items():
            book[parse_prop(text)] = DemandSchedule(tuple(
                (rational(limit, loc), rational(qty, loc)) for limit, qty in orders))
        agents.append(GAgent(
            str(entry.get("name", f"g{i}")),
            rational(entry.get("endowment", 0), loc),
            int(entry.get("birthday", 0)),
            (lambda b: (lambda t, s: b.get(s)))(book),
        ))
    state = g_run(GState(universe, agents), int(raw["horizon"]), theorems)
    thms = [f for t, f in theorems if t < state.t]
    summary = {
        "prices": {str(s): str(p) for s, p in state.prices.items()},
        "agents": {a.name: {"accepted": a.accepted, "rejected": a.rejected,
                            "min_valuation": str(min_valuation(a.inventory, thms))}
                   for a in state.agents},
    }
    print(json.dumps(summary, indent=2))
    if any(v["min_valuation"] not in ("None",) and Fraction(v["min_valuation"]) < 0
           for v in summary["agents"].values()):
        return EXIT_BREACH
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vfmarket", description=f"VF-game prediction market simulator ({BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario config")
    r.add_argument("config")
    r.add_argument("--out", help="output directory (overrides the config)")
    r.add_argument("--horizon", type=int, help="override the horizon")
    r.set_defaults(func=_cmd_run)
    c = sub.add_parser("check", help="classify a sentence and evaluate it on a finite window")
    c.add_argument("sentence")
    c.add_argument("--bound", type=int, default=50)
    c.set_defaults(func=_cmd_check)
    g = sub.add_parser("game", help="play a VF game and print its transcript")
    g.add_argument("sentence")
    g.add_argument("--alpha", default="pass", help="pass | diverge | successor | {n,..} | YAML table")
    g.add_argument("--beta", default="pass")
    g.add_argument("--fuel", type=int, default=100)
    g.add_argument("--literal", action="store_true", help="let either player move on any turn")
    g.set_defaults(func=_cmd_game)
    b = sub.add_parser("gbase", help="run the propositional baseline")
    b.add_argument("config")
    b.set_defaults(func=_cmd_gbase)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParseError, PropError, TemplateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantBreach as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        for line in exc.context:
            print(f"  {line}", file=sys.stderr)
        return EXIT_BREACH


if __name__ == "__main__":
    sys.exit(main())
