"""The market state and its per-step inventory recursion.

One call to :meth:`MarketState.step` runs, in order: endowments, settlement
of revealed sentences, pricing, order execution, moves on existential
holdings and the mirrored moves on their universal counterparts.  Every
inventory change is written to the audit log as one line, so replaying the
log from an empty state reproduces the final inventories.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from ..fol import PASS, Move, Sentence, as_move, canonical_code, is_sigma, negate, play_set
from .ledger import Ledger, Pair, Side
from .partition import LabeledPartition, PartitionError
from .schedule import HALF, ONE, ZERO, DemandSchedule, aggregate, budget_check, equilibrium_price, frac

STAR = "*"
TOP = "TOP"
BOT = "BOT"


class InvariantBreach(RuntimeError):
    """An internal bookkeeping invariant failed; the simulator has a bug."""

    def __init__(self, message: str, context: list[str] | None = None):
        super().__init__(message)
        self.context = context or []


class FuelExhausted(Exception):
    pass


@dataclass(frozen=True)
class FuelPolicy:
    """Per-call budget ``c * max(t,1)**k``."""

    c: int = 1000
    k: int = 2

    def budget(self, t: int) -> int:
        return self.c * max(t, 1) ** self.k

    def __call__(self, t: int) -> int:
        return self.budget(t)


class FuelMeter:
    def __init__(self, budget: int):
        self.budget = budget
        self.used = 0

    def charge(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.budget:
            raise FuelExhausted(f"used {self.used} of {self.budget}")

    @property
    def remaining(self) -> int:
        return max(self.budget - self.used, 0)


Trader = Callable[["Context", Sentence], Optional[DemandSchedule]]
Player = Callable[["Context", Sentence, str], Move]
Labeler = Callable[["Context", Sentence, Fraction], LabeledPartition]


def whole_labeler(ctx: "Context", s: Sentence, qty: Fraction) -> LabeledPartition:
    return LabeledPartition.whole(qty, STAR)


def pass_player(ctx: "Context", s: Sentence, label: str) -> Move:
    return PASS


def null_trader(ctx: "Context", s: Sentence) -> Optional[DemandSchedule]:
    return None


@dataclass
class AgentSpec:
    name: str
    endowment: Fraction = ZERO
    birthday: int = 0
    trader: Trader = null_trader
    player: Player = pass_player
    labeler: Labeler = whole_labeler
    holdings: dict = field(default_factory=dict)  # unpaired Delta0 lots granted at birth
    fuel: FuelPolicy = field(default_factory=FuelPolicy)

    def __post_init__(self):
        self.endowment = frac(self.endowment)
        if self.endowment < 0:
            raise ValueError("endowment must be non-negative")
        for s, q in self.holdings.items():
            if s.prefix:
                raise ValueError(f"initial holdings must be Delta0 sentences: {s}")
            if frac(q) < 0:
                raise ValueError("initial holdings must be non-negative")


@dataclass
class Agent:
    id: int
    spec: AgentSpec
    cash: Fraction = ZERO
    void: Fraction = ZERO
    unpaired: dict = field(default_factory=dict)
    born: bool = False

    @property
    def name(self) -> str:
        return self.spec.name


class MarketView:
    """Read-only window on the market handed to behavioural callbacks."""

    def __init__(self, state: "MarketState", agent: Agent):
        self._state = state
        self._agent = agent

    @property
    def t(self) -> int:
        return self._state.t

    @property
    def cash(self) -> Fraction:
        return self._agent.cash

    def holding(self, s: Sentence) -> Fraction:
        return self._state.holding(self._agent.id, s)

    def holdings(self) -> dict[Sentence, Fraction]:
        return self._state.ledger.holdings(self._agent.id)

    def price(self, s: Sentence) -> Optional[Fraction]:
        return self._state.last_price(s)

    def history(self, s: Sentence) -> list[tuple[int, Fraction]]:
        key = self._state.market_of(s)
        return list(self._state.history.get(key, [])) if key is not None else []


@dataclass
class Context:
    t: int
    agent: int
    fuel: FuelMeter
    market: MarketView


@dataclass
class MarketState:
    universe: list[Sentence]
    agents: list[Agent]
    reality: object
    t: int = 0
    ledger: Ledger = field(default_factory=Ledger)
    prices: dict = field(default_factory=dict)
    history: dict = field(default_factory=dict)
    injected: Fraction = ZERO
    audit: list[str] = field(default_factory=list)
    pending: list = field(default_factory=list)
    check_invariants: bool = True

    @classmethod
    def create(cls, universe, specs: list[AgentSpec], reality, check_invariants=True) -> "MarketState":
        markets: list[Sentence] = []
        for s in universe:
            if s not in markets and negate(s) not in markets:
                markets.append(s)
        agents = [Agent(i, spec) for i, spec in enumerate(specs)]
        return cls(markets, agents, reality, check_invariants=check_invariants)

    # -- queries -----------------------------------------------------------

    def market_of(self, s: Sentence) -> Optional[Sentence]:
        for m in self.universe:
            if s == m or s == negate(m):
                return m
        return None

    def last_price(self, s: Sentence) -> Optional[Fraction]:
        for m in self.universe:
            if s == m:
                return self.prices.get(m)
            if s == negate(m):
                p = self.prices.get(m)
                return None if p is None else ONE - p
        return None

    def holding(self, agent: int, s: Sentence) -> Fraction:
        total = sum((p.qty for p, _ in self.ledger.lots(agent, s)), ZERO)
        return total + self.agents[agent].unpaired.get(s, ZERO)

    def inventory(self, agent: int) -> dict:
        """Full inventory: sentences plus ``TOP`` (cash) and ``BOT`` (void)."""
        a = self.agents[agent]
        inv: dict = dict(self.ledger.holdings(agent))
        for s, q in a.unpaired.items():
            inv[s] = inv.get(s, ZERO) + q
        inv = {s: q for s, q in inv.items() if q}
        inv[TOP] = a.cash
        inv[BOT] = a.void
        return inv

    def live(self) -> list[Agent]:
        return sorted((a for a in self.agents if a.spec.birthday <= self.t),
                      key=lambda a: (a.spec.birthday, a.id))

    def context(self, agent: Agent) -> Context:
        return Context(self.t, agent.id, FuelMeter(agent.spec.fuel.budget(self.t)), MarketView(self, agent))

    # -- audit -------------------------------------------------------------

    def log(self, delta: str, agent: int, key, qty: Fraction, note: str = "") -> None:
        if not qty:
            return
        name = key if isinstance(key, str) else str(key)
        line = f"t={self.t} agent={agent} delta={delta} key={name} qty={qty.numerator}/{qty.denominator}"
        if note:
            line += f" note={note}"
        self.audit.append(line)

    def flag(self, agent: int, message: str) -> None:
        self.audit.append(f"t={self.t} agent={agent} flag={message}")

    # -- the step ----------------------------------------------------------

    def step(self) -> None:
        self.inject_endowments()
        self.settle_revealed()
        orders = self.set_prices()
        self.execute_orders(orders)
        self.apply_sigma_moves()
        self.apply_pi_moves()
        self.ledger.consolidate()
        if self.check_invariants:
            self.verify()
        self.t += 1

    def inject_endowments(self) -> None:
        for a in self.agents:
            if a.born or a.spec.birthday > self.t:
                continue
            a.born = True
            if a.spec.endowment:
                a.cash += a.spec.endowment
                self.injected += a.spec.endowment
                self.log("endow", a.id, TOP, a.spec.endowment)
            for s, q in a.spec.holdings.items():
                q = frac(q)
                if q:
                    a.unpaired[s] = a.unpaired.get(s, ZERO) + q
                    self.log("endow", a.id, s, q)

    def settle_revealed(self) -> None:
        for pair in self.ledger.ordered():
            if pair.q.sentence.prefix:
                continue
            truth = self.reality.value(self.t, pair.q.sentence)
            if truth is None:
                continue
            if self.reality.value(self.t, pair.n.sentence) is not (not truth):
                raise InvariantBreach(f"reality is not negation-consistent on {pair.q.sentence}")
            win, lose = (pair.q, pair.n) if truth else (pair.n, pair.q)
            del self.ledger.pairs[pair.id]
            self.agents[win.owner].cash += pair.escrow
            self.log("D7", win.owner, win.sentence, -pair.qty)
            self.log("D8", win.owner, TOP, pair.escrow)
            self.agents[lose.owner].void += pair.qty
            self.log("D7", lose.owner, lose.sentence, -pair.qty)
            self.log("D8", lose.owner, BOT, pair.qty)
        for a in self.agents:
            for s in list(a.unpaired):
                truth = self.reality.value(self.t, s)
                if truth is None:
                    continue
                q = a.unpaired.pop(s)
                self.log("D7", a.id, s, -q)
                if truth:
                    a.cash += q
                    self.injected += q
                    self.log("D8", a.id, TOP, q, "payout")
                else:
                    a.void += q
                    self.log("D8", a.id, BOT, q)

    def _revealed(self, m: Sentence) -> Optional[bool]:
        return None if m.prefix else self.reality.value(self.t, m)

    def set_prices(self) -> dict:
        """Gather budget-gated orders, then price every market.  Returns the orders."""
        live = self.live()
        orders: dict[int, dict[Sentence, DemandSchedule]] = {}
        for a in live:
            sched: dict[Sentence, DemandSchedule] = {}
            for m in self.universe:
                if self._revealed(m) is not None:
                    continue
                for s in (m, negate(m)):
                    ctx = self.context(a)
                    try:
                        d = a.spec.trader(ctx, s)
                    except FuelExhausted:
                        self.flag(a.id, f"fuel-exhausted trader on {s}")
                        d = None
                    if d:
                        sched[s] = d
            if not sched:
                continue
            tradable = {s: sum((p.qty for p, _ in self.ledger.lots(a.id, s)), ZERO) for s in sched}
            if budget_check(sched, tradable, a.cash):
                orders[a.id] = sched
            else:
                self.flag(a.id, "lambda=0")
        for m in self.universe:
            truth = self._revealed(m)
            if truth is not None:
                p = ONE if truth else ZERO
            else:
                neg = negate(m)
                d_p = aggregate(o[m] for o in orders.values() if m in o)
                d_n = aggregate(o[neg] for o in orders.values() if neg in o)
                p = equilibrium_price(d_p, d_n, self.prices.get(m, HALF))
            self.prices[m] = p
            self.history.setdefault(m, []).append((self.t, p))
        return orders

    # -- execution ---------------------------------------------------------

    def execute_orders(self, orders: dict) -> None:
        rank = {a.id: (a.spec.birthday, a.id) for a in self.agents}
        for m in self.universe:
            if self._revealed(m) is not None:
                continue
            neg = negate(m)
            p = self.prices[m]
            q = ONE - p
            net_p: dict[int, Fraction] = {}
            net_n: dict[int, Fraction] = {}
            for aid in sorted(orders, key=rank.get):
                o = orders[aid]
                if m in o and (v := o[m].at(p)):
                    net_p[aid] = v
                if neg in o and (v := o[neg].at(q)):
                    net_n[aid] = v
            buy_p = {a: v for a, v in net_p.items() if v > 0}
            sell_p = {a: -v for a, v in net_p.items() if v < 0}
            buy_n = {a: v for a, v in net_n.items() if v > 0}
            sell_n = {a: -v for a, v in net_n.items() if v < 0}
            buy_p, sell_p = self._transfer(m, p, buy_p, sell_p)
            buy_n, sell_n = self._transfer(neg, q, buy_n, sell_n)
            self._mint(m, neg, p, buy_p, buy_n)
            self._burn(m, neg, p, sell_p, sell_n)

    @staticmethod
    def _ration(side: dict[int, Fraction], amount: Fraction) -> list[tuple[int, Fraction]]:
        total = sum(side.values(), ZERO)
        if amount <= 0 or total == 0:
            return []
        if amount >= total:
            return list(side.items())
        return [(a, v * amount / total) for a, v in side.items() if v * amount / total]

    @staticmethod
    def _residual(side: dict[int, Fraction], filled: list[tuple[int, Fraction]]) -> dict[int, Fraction]:
        got = dict(filled)
        return {a: v - got.get(a, ZERO) for a, v in side.items() if v - got.get(a, ZERO) > 0}

    @staticmethod
    def _zip(left: list[tuple[int, Fraction]], right: list[tuple[int, Fraction]]):
        """Greedy pairing of two allocations with equal totals."""
        i = j = 0
        lrem = left[0][1] if left else ZERO
        rrem = right[0][1] if right else ZERO
        while i < len(left) and j < len(right):
            y = min(lrem, rrem)
            yield left[i][0], right[j][0], y
            lrem -= y
            rrem -= y
            if lrem == 0:
                i += 1
                lrem = left[i][1] if i < len(left) else ZERO
            if rrem == 0:
                j += 1
                rrem = right[j][1] if j < len(right) else ZERO

    def _take_lot(self, owner: int, s: Sentence, qty: Fraction) -> tuple[Pair, str]:
        pair, which = self.ledger.lots(owner, s)[0]
        return self.ledger.detach(pair, min(qty, pair.qty)), which

    def _transfer(self, s: Sentence, price: Fraction, buys: dict, sells: dict):
        volume = min(sum(buys.values(), ZERO), sum(sells.values(), ZERO))
        if volume <= 0:
            return buys, sells
        fb = self._ration(buys, volume)
        fs = self._ration(sells, volume)
        for buyer, seller, y in self._zip(fb, fs):
            left = y
            while left > 0:
                piece, which = self._take_lot(seller, s, left)
                side = piece.side(which)
                side.owner, side.label = buyer, STAR
                self.ledger.add(piece)
                left -= piece.qty
            cost = price * y
            self.agents[buyer].cash -= cost
            self.agents[seller].cash += cost
            self.log("D1", buyer, s, y)
            self.log("D2", buyer, TOP, -cost)
            self.log("D1", seller, s, -y)
            self.log("D2", seller, TOP, cost)
        return self._residual(buys, fb), self._residual(sells, fs)

    def _mint(self, m: Sentence, neg: Sentence, p: Fraction, buy_p: dict, buy_n: dict) -> None:
        volume = min(sum(buy_p.values(), ZERO), sum(buy_n.values(), ZERO))
        if volume <= 0:
            return
        q = ONE - p
        for a, b, y in self._zip(self._ration(buy_p, volume), self._ration(buy_n, volume)):
            self.ledger.mint(Side(a, STAR, m), Side(b, STAR, neg), y, m, self.t)
            self.agents[a].cash -= p * y
            self.agents[b].cash -= q * y
            self.log("D1", a, m, y)
            self.log("D2", a, TOP, -p * y)
            self.log("D1", b, neg, y)
            self.log("D2", b, TOP, -q * y)

    def _burn(self, m: Sentence, neg: Sentence, p: Fraction, sell_p: dict, sell_n: dict) -> None:
        volume = min(sum(sell_p.values(), ZERO), sum(sell_n.values(), ZERO))
        if volume <= 0:
            return
        q = ONE - p
        # pairs whose P side was sold; their not-P side is still owned
        orphans_n: list[Pair] = []
        for seller, y in self._ration(sell_p, volume):
            left = y
            while left > 0:
                piece, which = self._take_lot(seller, m, left)
                if which == "n":  # orient so that .q is the sold P side
                    piece.q, piece.n = piece.n, piece.q
                orphans_n.append(piece)
                left -= piece.qty
            self.agents[seller].cash += p * y
            self.log("D1", seller, m, -y)
            self.log("D2", seller, TOP, p * y)
        orphans_p: list[Pair] = []
        for seller, y in self._ration(sell_n, volume):
            left = y
            while left > 0:
                # a not-P side left over from a P sale closes both halves at once
                hit = next((o for o in orphans_n if o.n.owner == seller and o.n.sentence == neg
                            and o.qty > 0), None)
                if hit is not None:
                    take = min(left, hit.qty)
                    hit.qty -= take
                    left -= take
                    continue
                piece, which = self._take_lot(seller, neg, left)
                if which == "q":
                    piece.q, piece.n = piece.n, piece.q
                orphans_p.append(piece)
                left -= piece.qty
            self.agents[seller].cash += q * y
            self.log("D1", seller, neg, -y)
            self.log("D2", seller, TOP, q * y)
        keep_n = [(o, o.qty) for o in orphans_n if o.qty > 0]
        keep_p = [(o, o.qty) for o in orphans_p]
        for o_p, o_n, y in self._zip(keep_p, keep_n):
            holder_p, holder_n = o_p.q, o_n.n
            self.ledger.mint(Side(holder_p.owner, holder_p.label, holder_p.sentence),
                             Side(holder_n.owner, holder_n.label, holder_n.sentence), y, m,
                             min(o_p.born, o_n.born))

    # -- moves -------------------------------------------------------------

    def apply_sigma_moves(self) -> None:
        """Existential holders play; their own sides are rewritten now."""
        self.pending = []
        for a in self.live():
            held = self.ledger.holdings(a.id)
            for s in sorted((s for s in held if is_sigma(s)), key=canonical_code):
                self._play_holding(a, s, held[s])

    def _play_holding(self, a: Agent, s: Sentence, qty: Fraction) -> None:
        ctx = self.context(a)
        try:
            part = a.spec.labeler(ctx, s, qty)
        except (FuelExhausted, PartitionError) as exc:
            self.flag(a.id, f"labeler-failed {exc}")
            return
        if part.length() != qty:
            self.flag(a.id, f"labeler-length {part.length()}!={qty} on {s}")
            return
        moves: dict[str, Move] = {}
        for label in part.labels():
            try:
                moves[label] = as_move(a.spec.player(ctx, s, label))
            except FuelExhausted:
                self.flag(a.id, f"fuel-exhausted player on {s}")
                moves[label] = PASS
        if all(mv is PASS for mv in moves.values()):
            return
        lots = [[pair, which, pair.qty] for pair, which in self.ledger.lots(a.id, s)]
        i = 0
        for length, label in part.runs():
            move = moves[label]
            while length > 0:
                pair, which, rest = lots[i]
                y = min(length, rest)
                if move is not PASS:
                    piece = self.ledger.split_off(pair, y) if y < pair.qty else pair
                    self._transform(piece, which, move, label)
                length -= y
                lots[i][2] -= y
                if lots[i][2] == 0:
                    i += 1

    def _transform(self, piece: Pair, which: str, move: Move, label: str) -> None:
        side, other = piece.side(which), piece.other(which)
        new = play_set(side.sentence, move)
        self.log("D3", side.owner, side.sentence, -piece.qty)
        self.log("D4", side.owner, new, piece.qty, f"move={label}")
        side.sentence = new
        side.label = label
        self.pending.append((piece, other, new))

    def apply_pi_moves(self) -> None:
        """The counterpart of every played side follows: its sentence is the dual play."""
        for piece, other, new in self.pending:
            if piece.id not in self.ledger.pairs:
                continue
            dual = negate(new)
            self.log("D5", other.owner, other.sentence, -piece.qty)
            self.log("D6", other.owner, dual, piece.qty)
            other.sentence = dual
        self.pending = []

    # -- invariants --------------------------------------------------------

    def verify(self) -> None:
        cash = sum((a.cash for a in self.agents), ZERO)
        escrow = self.ledger.total_escrow()
        if cash + escrow != self.injected:
            raise InvariantBreach(
                f"conservation: cash {cash} + escrow {escrow} != injected {self.injected}",
                self.audit[-20:])
        for a in self.agents:
            if a.cash < 0:
                raise InvariantBreach(f"agent {a.id} has negative cash {a.cash}", self.audit[-20:])
        for pair in self.ledger.pairs.values():
            if pair.qty <= 0:
                raise InvariantBreach(f"pair {pair.id} has quantity {pair.qty}")
            if pair.n.sentence != negate(pair.q.sentence):
                raise InvariantBreach(f"pair {pair.id} sides are not dual", [pair.line()])

    # -- exports -----------------------------------------------------------

    def price_rows(self) -> list[str]:
        rows = ["t,sentence_code,sentence,price"]
        series = [(t, m, p) for m in self.universe for t, p in self.history.get(m, [])]
        for t, m, p in sorted(series, key=lambda r: (r[0], self.universe.index(r[1]))):
            text = str(m).replace('"', '""')
            rows.append(f'{t},{canonical_code(m)},"{text}",{p.numerator}/{p.denominator}')
        return rows

    def ledger_dump(self) -> list[str]:
        return self.ledger.dump()

    def cash_table(self) -> dict[int, Fraction]:
        return {a.id: a.cash for a in self.agents}


def step(state: MarketState) -> MarketState:
    """Functional form: advance a copy of ``state`` by one step."""
    nxt = copy.deepcopy(state)
    nxt.step()
    return nxt


def replay_audit(lines: list[str]) -> dict[int, dict]:
    """Rebuild every agent's inventory from audit lines."""
    from ..fol import parse_sentence

    inv: dict[int, dict] = {}
    for line in lines:
        fields = dict(part.split("=", 1) for part in _split_fields(line))
        if "delta" not in fields:
            continue
        agent = int(fields["agent"])
        key = fields["key"]
        if key not in (TOP, BOT):
            key = parse_sentence(key)
        num, den = fields["qty"].split("/")
        book = inv.setdefault(agent, {TOP: ZERO, BOT: ZERO})
        book[key] = book.get(key, ZERO) + Fraction(int(num), int(den))
    return {a: {k: v for k, v in book.items() if v or k in (TOP, BOT)} for a, book in inv.items()}


def _split_fields(line: str) -> list[str]:
    # key=<sentence> may contain spaces; it runs until " qty="
    head, _, tail = line.partition(" key=")
    if not tail:
        return [f for f in line.split(" ") if "=" in f]
    key, _, rest = tail.partition(" qty=")
    return head.split(" ") + ["key=" + key] + ["qty=" + rest.split(" ")[0]] + \
        [f for f in rest.split(" ")[1:] if "=" in f]
