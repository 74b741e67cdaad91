"""Step-function demand schedules and the equilibrium price solver.

A schedule is a finite sum of limit orders.  A positive quantity ``q`` at
limit ``L`` buys ``q`` at every price ``p <= L``; a negative one sells
``-q`` at every ``p >= L``.  Net demand is therefore non-increasing and
piecewise constant in ``p``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError(f"use exact rationals, not float {x!r}")
    return Fraction(x)


@dataclass(frozen=True)
class DemandSchedule:
    orders: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        merged: dict[tuple[Fraction, bool], Fraction] = {}
        for limit, qty in self.orders:
            limit, qty = frac(limit), frac(qty)
            if not ZERO <= limit <= ONE:
                raise ValueError(f"limit price {limit} outside [0,1]")
            if qty:
                key = (limit, qty > 0)
                merged[key] = merged.get(key, ZERO) + qty
        object.__setattr__(self, "orders", tuple(
            (limit, qty) for (limit, _), qty in sorted(merged.items()) if qty))

    @classmethod
    def buy(cls, qty, limit=ONE) -> "DemandSchedule":
        return cls(((frac(limit), frac(qty)),))

    @classmethod
    def sell(cls, qty, limit=ZERO) -> "DemandSchedule":
        return cls(((frac(limit), -frac(qty)),))

    def __add__(self, other: "DemandSchedule") -> "DemandSchedule":
        return DemandSchedule(self.orders + other.orders)

    def __bool__(self):
        return bool(self.orders)

    def at(self, p) -> Fraction:
        p = frac(p)
        total = ZERO
        for limit, qty in self.orders:
            if (qty > 0 and p <= limit) or (qty < 0 and p >= limit):
                total += qty
        return total

    def left(self, p) -> Fraction:
        """Limit of the schedule from below ``p``."""
        total = ZERO
        for limit, qty in self.orders:
            if (qty > 0 and p <= limit) or (qty < 0 and limit < p):
                total += qty
        return total

    def right(self, p) -> Fraction:
        total = ZERO
        for limit, qty in self.orders:
            if (qty > 0 and p < limit) or (qty < 0 and p >= limit):
                total += qty
        return total

    def breakpoints(self) -> list[Fraction]:
        return sorted({limit for limit, _ in self.orders})

    def buys(self, p) -> Fraction:
        return sum((q for limit, q in self.orders if q > 0 and p <= limit), ZERO)

    def sells(self, p) -> Fraction:
        return sum((-q for limit, q in self.orders if q < 0 and p >= limit), ZERO)

    def max_sell(self) -> Fraction:
        """``sup_p -tau(p)``: the most this schedule can ever deliver."""
        return max((-v for _, v in self._probe()), default=ZERO)

    def max_spend(self) -> Fraction:
        """``sup_p p*tau(p)``: the most this schedule can ever cost."""
        return max((p * v for p, v in self._probe()), default=ZERO)

    def _probe(self):
        points = {ZERO, ONE, *self.breakpoints()}
        for p in points:
            yield p, self.at(p)
            if p > ZERO:
                yield p, self.left(p)
            if p < ONE:
                yield p, self.right(p)

    def __str__(self):
        parts = [f"{'buy' if q > 0 else 'sell'} {abs(q)} @{'<=' if q > 0 else '>='}{limit}"
                 for limit, q in self.orders]
        return "; ".join(parts) or "none"


EMPTY = DemandSchedule()


def aggregate(schedules: Iterable[DemandSchedule]) -> DemandSchedule:
    orders: list = []
    for s in schedules:
        orders.extend(s.orders)
    return DemandSchedule(tuple(orders))


def excess(d_p: DemandSchedule, d_not: DemandSchedule, p: Fraction) -> Fraction:
    """``f(p) = d_p(p) - d_not(1-p)``."""
    return d_p.at(p) - d_not.at(ONE - p)


def equilibrium_price(d_p: DemandSchedule, d_not: DemandSchedule,
                      previous: Fraction = HALF) -> Fraction:
    """Price where demand for P balances demand for not-P at the complementary price.

    ``f`` is non-increasing and piecewise constant.  Its zero set, when
    nonempty, is an interval and the midpoint of its closure is returned;
    otherwise the point where ``f`` changes sign.  If ``f`` vanishes
    identically the previous price is kept.
    """
    points = sorted({ZERO, ONE, *d_p.breakpoints(), *(ONE - b for b in d_not.breakpoints())})
    # sample every breakpoint and every open gap between consecutive ones
    samples: list[tuple[Fraction, Fraction, Fraction]] = []  # (lo, hi, f) on [lo,hi]
    for i, x in enumerate(points):
        samples.append((x, x, excess(d_p, d_not, x)))
        if i + 1 < len(points):
            y = points[i + 1]
            samples.append((x, y, excess(d_p, d_not, (x + y) / 2)))
    zeros = [(lo, hi) for lo, hi, f in samples if f == 0]
    if len(zeros) == len(samples):
        return frac(previous)
    if zeros:
        return (min(z[0] for z in zeros) + max(z[1] for z in zeros)) / 2
    if all(f > 0 for _, _, f in samples):
        return ONE
    if all(f < 0 for _, _, f in samples):
        return ZERO
    # f skips zero: the crossing is the right end of the last positive piece
    return max(hi for lo, hi, f in samples if f > 0)


def budget_check(orders: Mapping[object, DemandSchedule], holdings: Mapping[object, Fraction],
                 cash: Fraction) -> bool:
    """No short selling and every purchase affordable at its worst-case price."""
    spend = ZERO
    for key, sched in orders.items():
        if sched.max_sell() > holdings.get(key, ZERO):
            return False
        spend += sched.max_spend()
    return spend <= cash


__all__ = ["DemandSchedule", "EMPTY", "HALF", "ONE", "ZERO", "aggregate", "budget_check",
           "equilibrium_price", "excess", "frac"]
