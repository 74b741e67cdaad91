"""Escrowed share pairs: every unit of Q outstanding is matched with a unit of not-Q."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from ..fol import Sentence


@dataclass
class Side:
    owner: int
    label: str
    sentence: Sentence

    def text(self) -> str:
        return f"{self.owner}:{self.label}:{self.sentence}"


@dataclass
class Pair:
    id: int
    order: tuple
    q: Side
    n: Side
    qty: Fraction
    market: Sentence  # the universe sentence this pair was minted on
    born: int = 0

    @property
    def escrow(self) -> Fraction:
        return self.qty

    def side(self, which: str) -> Side:
        return self.q if which == "q" else self.n

    def other(self, which: str) -> Side:
        return self.n if which == "q" else self.q

    def line(self) -> str:
        return (f"pair={self.id} born={self.born} qty={_f(self.qty)} escrow={_f(self.escrow)} "
                f"P={self.q.text()} N={self.n.text()}")


def _f(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass
class Ledger:
    pairs: dict[int, Pair] = field(default_factory=dict)
    next_id: int = 0

    def _new(self, order, q, n, qty, market, born) -> Pair:
        pair = Pair(self.next_id, order, q, n, qty, market, born)
        self.next_id += 1
        return pair

    def mint(self, q: Side, n: Side, qty: Fraction, market: Sentence, born: int) -> Pair:
        pair = self._new((self.next_id,), q, n, qty, market, born)
        self.pairs[pair.id] = pair
        return pair

    def add(self, pair: Pair) -> Pair:
        self.pairs[pair.id] = pair
        return pair

    def detach(self, pair: Pair, qty: Fraction) -> Pair:
        """Remove ``qty`` units of ``pair`` from the ledger and return them as a pair."""
        assert 0 < qty <= pair.qty
        if qty == pair.qty:
            del self.pairs[pair.id]
            return pair
        pair.qty -= qty
        return self._new(pair.order + (self.next_id,), Side(pair.q.owner, pair.q.label, pair.q.sentence),
                         Side(pair.n.owner, pair.n.label, pair.n.sentence), qty, pair.market, pair.born)

    def split_off(self, pair: Pair, qty: Fraction) -> Pair:
        """Like :meth:`detach` but the piece stays on the ledger."""
        piece = self.detach(pair, qty)
        self.pairs[piece.id] = piece
        return piece

    def ordered(self) -> list[Pair]:
        return sorted(self.pairs.values(), key=lambda p: p.order)

    def lots(self, owner: int, sentence: Sentence) -> list[tuple[Pair, str]]:
        out = []
        for pair in self.ordered():
            for which in ("q", "n"):
                side = pair.side(which)
                if side.owner == owner and side.sentence == sentence:
                    out.append((pair, which))
        return out

    def holdings(self, owner: int) -> dict[Sentence, Fraction]:
        out: dict[Sentence, Fraction] = {}
        for pair in self.pairs.values():
            for side in (pair.q, pair.n):
                if side.owner == owner:
                    out[side.sentence] = out.get(side.sentence, Fraction(0)) + pair.qty
        return out

    def total_escrow(self) -> Fraction:
        return sum((p.escrow for p in self.pairs.values()), Fraction(0))

    def __iter__(self) -> Iterator[Pair]:
        return iter(self.ordered())

    def __len__(self):
        return len(self.pairs)

    def consolidate(self) -> None:
        """Merge pairs whose two sides agree in owner, label and sentence."""
        keep: dict[tuple, Pair] = {}
        for pair in self.ordered():
            key = (pair.q.owner, pair.q.label, pair.q.sentence, pair.n.owner, pair.n.label,
                   pair.n.sentence, pair.market)
            first = keep.get(key)
            if first is None:
                keep[key] = pair
            else:
                first.qty += pair.qty
                del self.pairs[pair.id]

    def dump(self) -> list[str]:
        return [p.line() for p in self.ordered()]

