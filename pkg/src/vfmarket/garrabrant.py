"""Propositional baseline: PC worlds, plausible valuations and budget-checked trading.

Prime sentences are the atoms ``P1 .. Pn``.  Worlds over the ``k`` primes
mentioned by an inventory and a theorem set are enumerated as bitsets of
length ``2**k``: world ``w`` makes the ``j``-th mentioned prime true iff bit
``j`` of ``w`` is set.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Union

from . import kernels
from .market.schedule import HALF, ZERO, DemandSchedule, equilibrium_price, frac

MAX_PRIMES = 20
CASH = "TOP"


class PropError(ValueError):
    pass


# -- syntax ----------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    index: int

    def __str__(self):
        return f"P{self.index}"


@dataclass(frozen=True)
class PNot:
    arg: "Prop"

    def __str__(self):
        return f"!{self.arg}"


@dataclass(frozen=True)
class PAnd:
    left: "Prop"
    right: "Prop"

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class POr:
    left: "Prop"
    right: "Prop"

    def __str__(self):
        return f"({self.left} | {self.right})"


Prop = Union[Atom, PNot, PAnd, POr]


def neg(p: Prop) -> Prop:
    return p.arg if isinstance(p, PNot) else PNot(p)


_TOKEN = re.compile(r"\s*(?:(P\d+)|(.))")


def parse_prop(text: str) -> Prop:
    """Parse ``P1 .. Pn`` with ``!``, ``&``, ``|`` and parentheses (``!`` > ``&`` > ``|``)."""
    tokens = [(m.group(1) or m.group(2), m.start()) for m in _TOKEN.finditer(text) if (m.group(1) or m.group(2)).strip()]
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        if pos >= len(tokens):
            raise PropError(f"unexpected end of formula {text!r}")
        tok, col = tokens[pos]
        if expected is not None and tok != expected:
            raise PropError(f"expected {expected!r} at column {col + 1}, found {tok!r}")
        pos += 1
        return tok

    def disj():
        node = conj()
        while peek() == "|":
            take()
            node = POr(node, conj())
        return node

    def conj():
        node = unary()
        while peek() == "&":
            take()
            node = PAnd(node, unary())
        return node

    def unary():
        tok = peek()
        if tok == "!":
            take()
            return PNot(unary())
        if tok == "(":
            take()
            node = disj()
            take(")")
            return node
        if tok is not None and tok.startswith("P") and tok[1:].isdigit():
            take()
            if int(tok[1:]) < 1:
                raise PropError("prime indices start at 1")
            return Atom(int(tok[1:]))
        col = tokens[pos][1] + 1 if pos < len(tokens) else len(text) + 1
        raise PropError(f"unexpected {tok!r} at column {col}")

    node = disj()
    if pos != len(tokens):
        raise PropError(f"trailing input at column {tokens[pos][1] + 1}")
    return node


def primes(p: Prop) -> set[int]:
    if isinstance(p, Atom):
        return {p.index}
    if isinstance(p, PNot):
        return primes(p.arg)
    return primes(p.left) | primes(p.right)


def evaluate(p: Prop, world: Mapping[int, bool]) -> bool:
    if isinstance(p, Atom):
        return world[p.index]
    if isinstance(p, PNot):
        return not evaluate(p.arg, world)
    if isinstance(p, PAnd):
        return evaluate(p.left, world) and evaluate(p.right, world)
    return evaluate(p.left, world) or evaluate(p.right, world)


# -- truth tables ----------------------------------------------------------

def _atom_table(j: int, k: int) -> int:
    n = 1 << k
    table = ((1 << (1 << j)) - 1) << (1 << j)  # 2^j zeros then 2^j ones
    length = 1 << (j + 1)
    while length < n:
        table |= table << length
        length *= 2
    return table


def truth_table(p: Prop, index: Mapping[int, int], k: int) -> int:
    full = (1 << (1 << k)) - 1
    if isinstance(p, Atom):
        return _atom_table(index[p.index], k)
    if isinstance(p, PNot):
        return full & ~truth_table(p.arg, index, k)
    left, right = truth_table(p.left, index, k), truth_table(p.right, index, k)
    return left & right if isinstance(p, PAnd) else left | right


def pc_valuations(inv: Mapping, thms: Iterable[Prop] = ()) -> set[Fraction]:
    """Values of the inventory in every world consistent with ``thms``.

    Cash (key ``"TOP"``) counts at face value.  Returns the empty set when
    the theorems are inconsistent.
    """
    thms = list(thms)
    cash = frac(inv.get(CASH, 0))
    stock = [(s, frac(q)) for s, q in inv.items() if s != CASH and frac(q)]
    mentioned = sorted(set().union(*(primes(s) for s, _ in stock), *(primes(t) for t in thms)))
    k = len(mentioned)
    if k > MAX_PRIMES:
        raise PropError(f"{k} primes mentioned; at most {MAX_PRIMES} are supported")
    index = {p: j for j, p in enumerate(mentioned)}
    nworlds = 1 << k
    nbytes = max(1, (nworlds + 7) // 8)
    consistent = (1 << nworlds) - 1
    for t in thms:
        consistent &= truth_table(t, index, k)
    if not consistent:
        return set()
    denom = math.lcm(*(q.denominator for _, q in stock)) if stock else 1
    tables = [truth_table(s, index, k).to_bytes(nbytes, "little") for s, _ in stock]
    weights = [int(q * denom) for _, q in stock]
    sums = kernels.valuation_sums(tables, weights, consistent.to_bytes(nbytes, "little"), nworlds)
    return {cash + Fraction(s, denom) for s in sums}


def min_valuation(inv: Mapping, thms: Iterable[Prop] = ()) -> Optional[Fraction]:
    vals = pc_valuations(inv, thms)
    return min(vals) if vals else None


# -- trading ---------------------------------------------------------------

GTrader = Callable[[int, Prop], Optional[DemandSchedule]]


@dataclass
class GAgent:
    name: str
    endowment: Fraction = ZERO
    birthday: int = 0
    trader: GTrader = lambda t, s: None
    inventory: dict = field(default_factory=dict)
    accepted: int = 0
    rejected: int = 0

    def __post_init__(self):
        self.endowment = frac(self.endowment)


@dataclass
class GState:
    universe: list[Prop]
    agents: list[GAgent]
    t: int = 0
    prices: dict = field(default_factory=dict)
    history: dict = field(default_factory=dict)
    log: list[str] = field(default_factory=list)


def _add(inv: dict, delta: Mapping) -> dict:
    out = dict(inv)
    for key, q in delta.items():
        out[key] = out.get(key, ZERO) + frac(q)
        if not out[key]:
            del out[key]
    return out


def g_inventory_step(state: GState, t: int, trades: Mapping[int, Mapping], thms_t: list[Prop]) -> GState:
    """Endow newborns, cash in proven sentences, then accept or zero each trade."""
    proven = set(thms_t)
    for i, agent in enumerate(state.agents):
        if agent.birthday == t and agent.endowment:
            agent.inventory = _add(agent.inventory, {CASH: agent.endowment})
            state.log.append(f"t={t} agent={i} endow {agent.endowment}")
        for s in [s for s in agent.inventory if s != CASH and s in proven]:
            q = agent.inventory.pop(s)
            agent.inventory = _add(agent.inventory, {CASH: q})
            state.log.append(f"t={t} agent={i} resolve {s} {q}")
        trade = trades.get(i)
        if not trade:
            continue
        candidate = _add(agent.inventory, trade)
        worst = min_valuation(candidate, thms_t)
        if worst is not None and worst >= 0:
            agent.inventory = candidate
            agent.accepted += 1
            state.log.append(f"t={t} agent={i} accept {_fmt_trade(trade)}")
        else:
            agent.rejected += 1
            state.log.append(f"t={t} agent={i} reject {_fmt_trade(trade)}")
    return state


def _fmt_trade(trade: Mapping) -> str:
    return ",".join(f"{k}:{v}" for k, v in trade.items())


def g_equilibrium(traders: Iterable[GTrader], t: int, s: Prop, previous: Fraction = HALF) -> Fraction:
    d_s, d_not = DemandSchedule(), DemandSchedule()
    for tr in traders:
        d_s = d_s + (tr(t, s) or DemandSchedule())
        d_not = d_not + (tr(t, neg(s)) or DemandSchedule())
    return equilibrium_price(d_s, d_not, previous)


def g_run(state: GState, horizon: int, theorems: list[tuple[int, Prop]]) -> GState:
    """Run the baseline market for ``horizon`` steps."""
    for t in range(state.t, state.t + horizon):
        thms_t = [f for when, f in theorems if when <= t]
        live = [(i, a) for i, a in enumerate(state.agents) if a.birthday <= t]
        trades: dict[int, dict] = {}
        for s in state.universe:
            p = g_equilibrium([a.trader for _, a in live], t, s, state.prices.get(s, HALF))
            state.prices[s] = p
            state.history.setdefault(s, []).append((t, p))
            for i, a in live:
                for key, price in ((s, p), (neg(s), 1 - p)):
                    d = a.trader(t, key)
                    q = d.at(price) if d else ZERO
                    if q:
                        trade = trades.setdefault(i, {})
                        trade[key] = trade.get(key, ZERO) + q
                        trade[CASH] = trade.get(CASH, ZERO) - price * q
        g_inventory_step(state, t, trades, thms_t)
        state.t = t + 1
    return state


def parse_theorem_stream(text: str) -> list[tuple[int, Prop]]:
    """Lines ``t<TAB>formula``; blank lines and ``#`` comments are skipped."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, formula = raw.partition("\t")
        if not sep:
            raise PropError(f"line {lineno}: expected 't<TAB>formula'")
        try:
            t = int(head.strip())
        except ValueError:
            raise PropError(f"line {lineno}: bad time {head.strip()!r}") from None
        try:
            out.append((t, parse_prop(formula)))
        except PropError as exc:
            raise PropError(f"line {lineno}: {exc}") from None
    return sorted(out, key=lambda e: e[0])
