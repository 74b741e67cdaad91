"""Bounded truth oracle and the instaplayer-to-market-player construction."""
from __future__ import annotations

import enum
from typing import Callable, Optional

from . import kernels
from .fol import PASS, Move, Sentence, canonical_code, eval_delta0
from .fol.compile import compile_sentence
from .game import InstaPlayer

STAR = "*"


class ThreeVal(enum.Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


_FROM_KERNEL = {kernels.TRUE: ThreeVal.TRUE, kernels.FALSE: ThreeVal.FALSE,
                kernels.UNKNOWN: ThreeVal.UNKNOWN}


def bounded_tarski(s: Sentence, bound: int) -> ThreeVal:
    """Verdict certified by witnesses and counterexamples up to ``bound``.

    An existential is only confirmed by a witness and a universal only
    refuted by a counterexample; anything else is ``UNKNOWN``.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    if not s.prefix:
        return ThreeVal.TRUE if eval_delta0(s) else ThreeVal.FALSE
    prog = compile_sentence(s)
    return _FROM_KERNEL[kernels.prefix_tarski(*prog.arrays, prog.root, prog.env(), prog.quants, bound)]


def _identity(t: int) -> int:
    return t


class ConstructedPlayer:
    """Market player built from an instaplayer.

    It fires ``alpha(P)`` under label ``*`` at the first step ``t`` with
    ``code(P) <= clock(t)`` and ``cost(alpha, P) <= clock(t)``, and passes
    otherwise.  With ``persistent`` it keeps firing at every later step,
    which lets shares bought after the first slot be played too.
    """

    def __init__(self, alpha: InstaPlayer, clock: Callable[[int], int] = _identity,
                 persistent: bool = False):
        self.alpha = alpha
        self.clock = clock
        self.persistent = persistent
        self._first: dict[Sentence, Optional[int]] = {}

    def fire_time(self, s: Sentence) -> Optional[int]:
        if s in self._first:
            return self._first[s]
        c = self.alpha.cost(s)
        t = None if c is None else self._invert(max(canonical_code(s), c, 1))
        self._first[s] = t
        return t

    def _invert(self, need: int) -> int:
        # least t with clock(t) >= need; clock is non-decreasing and unbounded
        if self.clock(0) >= need:
            return 0
        hi = 1
        while self.clock(hi) < need:
            hi *= 2
        lo = hi // 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.clock(mid) >= need:
                hi = mid
            else:
                lo = mid
        return hi

    def __call__(self, t: int, s: Sentence, label: str = STAR) -> Move:
        first = self.fire_time(s)
        if first is None or label != STAR:
            return PASS
        if t == first or (self.persistent and t > first):
            return self.alpha.move(s)
        return PASS


def construct_player(alpha: InstaPlayer, clock: Callable[[int], int] = _identity,
                     persistent: bool = False) -> ConstructedPlayer:
    return ConstructedPlayer(alpha, clock, persistent)


__all__ = ["STAR", "ConstructedPlayer", "ThreeVal", "bounded_tarski", "construct_player"]
