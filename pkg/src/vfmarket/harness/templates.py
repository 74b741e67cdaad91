"""Built-in agent templates and the declarative instaplayer notation."""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from ..fol import PASS, Sentence, negate, parse_sentence
from ..game import (
    ConstPlayer,
    DivergePlayer,
    InstaPlayer,
    PassPlayer,
    SuccessorChallenger,
    TablePlayer,
)
from ..market.engine import AgentSpec, Context, FuelPolicy
from ..market.schedule import ONE, ZERO, DemandSchedule, frac
from ..truth import construct_player


class TemplateError(ValueError):
    pass


# -- instaplayer notation ------------------------------------------------

_SET = re.compile(r"^\{\s*\d+(\s*,\s*\d+)*\s*\}$")


def instaplayer(spec) -> InstaPlayer:
    """Build an instaplayer from its declarative form.

    Accepted forms: ``"pass"``, ``"diverge"``, ``"successor"``, a witness set
    such as ``"{2}"`` or ``[2, 3]``, or a mapping
    ``{"table": [[sentence, witnesses], ...], "default": <form>}``.
    """
    if isinstance(spec, InstaPlayer):
        return spec
    if spec is None:
        return PassPlayer()
    if isinstance(spec, int) and not isinstance(spec, bool):
        return ConstPlayer([spec])
    if isinstance(spec, (list, tuple)):
        return ConstPlayer([_nat(v) for v in spec])
    if isinstance(spec, str):
        word = spec.strip().lower()
        if word == "pass":
            return PassPlayer()
        if word == "diverge":
            return DivergePlayer()
        if word in ("successor", "successor-challenge", "successor-challenger"):
            return SuccessorChallenger()
        if _SET.match(spec.strip()):
            return ConstPlayer([int(x) for x in spec.strip()[1:-1].split(",")])
        raise TemplateError(f"unknown instaplayer {spec!r}")
    if isinstance(spec, dict):
        unknown = set(spec) - {"table", "default"}
        if unknown:
            raise TemplateError(f"unknown instaplayer keys {sorted(unknown)}")
        table = {}
        for entry in spec.get("table", []):
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise TemplateError("table entries are [sentence, witnesses] pairs")
            sentence, witnesses = entry
            table[parse_sentence(sentence)] = PASS if witnesses == "pass" else _witnesses(witnesses)
        return TablePlayer(table, instaplayer(spec.get("default", "pass")))
    raise TemplateError(f"cannot read instaplayer from {spec!r}")


def _nat(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise TemplateError(f"witnesses must be naturals, got {v!r}")
    return v


def _witnesses(w) -> tuple[int, ...]:
    if isinstance(w, int):
        return (_nat(w),)
    if isinstance(w, str) and _SET.match(w.strip()):
        return tuple(int(x) for x in w.strip()[1:-1].split(","))
    if isinstance(w, (list, tuple)) and w:
        return tuple(_nat(v) for v in w)
    raise TemplateError(f"bad witness set {w!r}")


def market_player(alpha: InstaPlayer, fuel: FuelPolicy):
    """Market player running ``alpha`` on every share labelled ``*``."""
    constructed = construct_player(alpha, clock=fuel.budget, persistent=True)

    def player(ctx: Context, s: Sentence, label: str):
        ctx.fuel.charge(1)
        return constructed(ctx.t, s, label)

    player.constructed = constructed
    return player


# -- templates -----------------------------------------------------------

def threshold_buyer(name: str, sentence: Sentence, buy_below, alpha=None, qty=1, endowment=0,
                    birthday=0, fuel: FuelPolicy | None = None) -> AgentSpec:
    """Buys ``qty`` shares whenever the price is at most ``buy_below`` and plays ``alpha``."""
    fuel = fuel or FuelPolicy()
    limit, qty = frac(buy_below), frac(qty)

    def trader(ctx: Context, s: Sentence) -> Optional[DemandSchedule]:
        ctx.fuel.charge(1)
        return DemandSchedule.buy(qty, limit) if s == sentence else None

    return AgentSpec(name, endowment, birthday, trader, market_player(instaplayer(alpha), fuel), fuel=fuel)


def arbitrageur(name: str, sentence: Sentence, x, eps, qty=1, endowment=0, birthday=0,
                fuel: FuelPolicy | None = None) -> AgentSpec:
    """Long below ``x - eps``, short above ``x + eps``; never plays.

    Going short means selling held shares first and buying the negation for
    the rest, and symmetrically for going long.
    """
    x, eps, qty = frac(x), frac(eps), frac(qty)
    lo, hi = x - eps, x + eps
    if not (ZERO <= lo and hi <= ONE):
        raise TemplateError("arbitrageur band must lie inside [0,1]")
    opposite = negate(sentence)

    def trader(ctx: Context, s: Sentence) -> Optional[DemandSchedule]:
        ctx.fuel.charge(1)
        if s == sentence:
            held = min(ctx.market.holding(sentence), qty)
            orders = [(lo, qty - min(ctx.market.holding(opposite), qty))]
            if held:
                orders.append((hi, -held))
            return DemandSchedule(tuple(orders))
        if s == opposite:
            held = min(ctx.market.holding(opposite), qty)
            orders = [(ONE - hi, qty - min(ctx.market.holding(sentence), qty))]
            if held:
                orders.append((ONE - lo, -held))
            return DemandSchedule(tuple(orders))
        return None

    return AgentSpec(name, endowment, birthday, trader, fuel=fuel or FuelPolicy())


def passive_holder(name: str, sentence: Sentence, quantity, endowment=0, birthday=0,
                   limit=ONE, fuel: FuelPolicy | None = None) -> AgentSpec:
    """Bids for ``quantity`` shares at its birthday only, then sits still."""
    quantity, limit = frac(quantity), frac(limit)

    def trader(ctx: Context, s: Sentence) -> Optional[DemandSchedule]:
        if ctx.t == birthday and s == sentence:
            return DemandSchedule.buy(quantity, limit)
        return None

    return AgentSpec(name, endowment, birthday, trader, fuel=fuel or FuelPolicy())


def adversary(name: str, sentence: Sentence, challenge="successor", buy_below=Fraction(99, 100),
              qty=1, endowment=0, birthday=0, fuel: FuelPolicy | None = None) -> AgentSpec:
    """Takes the falsifier's side of ``sentence`` and answers with ``challenge``."""
    return threshold_buyer(name, negate(sentence), buy_below, challenge, qty, endowment, birthday, fuel)


def oscillator(name: str, sentence: Sentence, qty=1, period=1, endowment=0, birthday=0,
               fuel: FuelPolicy | None = None) -> AgentSpec:
    """Alternates market bids for the sentence and for its negation every ``period`` steps."""
    qty = frac(qty)
    opposite = negate(sentence)
    if period < 1:
        raise TemplateError("period must be positive")

    def trader(ctx: Context, s: Sentence) -> Optional[DemandSchedule]:
        want = sentence if (ctx.t // period) % 2 == 0 else opposite
        return DemandSchedule.buy(qty) if s == want else None

    return AgentSpec(name, endowment, birthday, trader, fuel=fuel or FuelPolicy())


TEMPLATES = {
    "threshold-buyer": threshold_buyer,
    "arbitrageur": arbitrageur,
    "passive-holder": passive_holder,
    "adversary": adversary,
    "oscillator": oscillator,
}

# parameters each template accepts besides name/endowment/birthday/fuel
TEMPLATE_PARAMS = {
    "threshold-buyer": {"sentence", "buy_below", "alpha", "qty"},
    "arbitrageur": {"sentence", "x", "eps", "qty"},
    "passive-holder": {"sentence", "quantity", "limit"},
    "adversary": {"sentence", "challenge", "buy_below", "qty"},
    "oscillator": {"sentence", "qty", "period"},
}

__all__ = ["TEMPLATES", "TEMPLATE_PARAMS", "TemplateError", "adversary", "arbitrageur",
           "instaplayer", "market_player", "oscillator", "passive_holder", "threshold_buyer"]
