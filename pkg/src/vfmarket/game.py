"""Verification-Falsification games between two instaplayers.

An instaplayer maps a sentence to a move, or diverges.  Divergence is made
observable through a cost model: :meth:`InstaPlayer.cost` reports how much
fuel a query needs (``None`` means it never halts), and a query only
succeeds when the remaining fuel covers it.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

from .fol import (
    PASS,
    Move,
    Sentence,
    as_move,
    classify,
    eval_delta0,
    format_move,
    is_sigma,
    max_constant,
    play_set,
)


class Role(enum.Enum):
    VERIFIER = "V"
    FALSIFIER = "F"
    RESOLVED = "R"


def turn(s: Sentence) -> Role:
    if not s.prefix:
        return Role.RESOLVED
    return Role.VERIFIER if is_sigma(s) else Role.FALSIFIER


# -- instaplayers ----------------------------------------------------------

class InstaPlayer:
    """Deterministic partial strategy.  Subclasses override ``cost`` and ``move``."""

    def cost(self, s: Sentence) -> Optional[int]:
        return 1

    def move(self, s: Sentence) -> Move:
        raise NotImplementedError

    def run(self, s: Sentence, fuel: int) -> Optional[Move]:
        """The move on ``s`` if it is computable within ``fuel``, else ``None``."""
        c = self.cost(s)
        if c is None or max(c, 1) > fuel:
            return None
        return self.move(s)

    def __call__(self, s: Sentence) -> Move:
        return self.move(s)


class PassPlayer(InstaPlayer):
    def move(self, s):
        return PASS

    def __repr__(self):
        return "PassPlayer()"


class DivergePlayer(InstaPlayer):
    """Never halts on any sentence."""

    def cost(self, s):
        return None

    def move(self, s):
        raise RuntimeError("a diverging player has no move")

    def __repr__(self):
        return "DivergePlayer()"


class ConstPlayer(InstaPlayer):
    """Plays the same witness set on every sentence."""

    def __init__(self, values: Iterable[int]):
        self.witnesses = as_move(tuple(values))

    def move(self, s):
        return self.witnesses

    def __repr__(self):
        return f"ConstPlayer({self.witnesses!r})"


class SuccessorChallenger(InstaPlayer):
    """Answers ``{m+1}`` where ``m`` is the largest constant in the sentence."""

    def cost(self, s):
        return 1 + max_constant(s).bit_length()

    def move(self, s):
        return as_move(max_constant(s) + 1)

    def __repr__(self):
        return "SuccessorChallenger()"


class FunctionPlayer(InstaPlayer):
    def __init__(self, fn: Callable[[Sentence], object], cost: Callable[[Sentence], Optional[int]] | int = 1):
        self.fn = fn
        self._cost = cost

    def cost(self, s):
        return self._cost(s) if callable(self._cost) else self._cost

    def move(self, s):
        return as_move(self.fn(s))


class TablePlayer(InstaPlayer):
    """Lookup table keyed by sentence (up to renaming) with a fallback player."""

    def __init__(self, table: Mapping[Sentence, object], default: InstaPlayer | None = None,
                 entry_cost: int = 1):
        self.table = {s: as_move(m) for s, m in table.items()}
        self.default = default if default is not None else PassPlayer()
        self.entry_cost = entry_cost

    def cost(self, s):
        if s in self.table:
            return self.entry_cost
        return self.default.cost(s)

    def move(self, s):
        if s in self.table:
            return self.table[s]
        return self.default.move(s)

    def __repr__(self):
        return f"TablePlayer({len(self.table)} entries, default={self.default!r})"


# -- playfull --------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    index: int
    sentence: Sentence
    mover: str  # "V" (alpha) or "F" (beta)
    move: Move

    def line(self) -> str:
        return f"t={self.index} mover={self.mover} move={format_move(self.move)} sentence={self.sentence}"


@dataclass(frozen=True)
class GameOutcome:
    resolved: bool
    sentence: Sentence
    truth: Optional[bool]
    transcript: tuple[Step, ...] = field(default=())
    reason: str = ""
    fuel_used: int = 0

    def lines(self) -> list[str]:
        return [st.line() for st in self.transcript]

    def summary(self) -> str:
        if self.resolved:
            return f"Resolved({self.sentence}, {str(self.truth).lower()})"
        return f"Diverged({self.sentence}; {self.reason})"


def playfull(s: Sentence, alpha: InstaPlayer, beta: InstaPlayer, fuel: int,
             role_enforce: bool = True) -> GameOutcome:
    """Alternate ``alpha`` and ``beta`` on ``s`` until a Delta0 sentence is reached.

    ``fuel`` is a budget for the whole game; each query is charged its cost
    (at least 1).  A game ends undecided when a query does not fit the
    remaining fuel or after two consecutive passes.  With ``role_enforce``
    a player asked to move out of role passes without being queried; such
    slots are not written to the transcript.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    cur = s
    remaining = fuel
    steps: list[Step] = []
    passes = 0
    slot = 0

    def outcome(resolved, reason=""):
        truth = eval_delta0(cur) if resolved else None
        return GameOutcome(resolved, cur, truth, tuple(steps), reason, fuel - remaining)

    while True:
        if not cur.prefix:
            return outcome(True)
        player, mover = (alpha, Role.VERIFIER) if slot % 2 == 0 else (beta, Role.FALSIFIER)
        slot += 1
        if role_enforce and turn(cur) is not mover:
            passes += 1
        else:
            c = player.cost(cur)
            if c is None or max(c, 1) > remaining:
                return outcome(False, "fuel exhausted")
            remaining -= max(c, 1)
            move = as_move(player.move(cur))
            steps.append(Step(len(steps), cur, mover.value, move))
            if move is PASS:
                passes += 1
            else:
                passes = 0
                cur = play_set(cur, move)
        if passes >= 2:
            return outcome(False, "stalled")


# -- constructive truth ----------------------------------------------------

class Verdict(enum.Enum):
    SUPPORTED = "Supported"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class CheckResult:
    verdict: Verdict
    refuted_by: Optional[int] = None
    outcomes: tuple[GameOutcome, ...] = ()

    def __str__(self):
        if self.verdict is Verdict.REFUTED:
            return f"Refuted(by adversary {self.refuted_by})"
        return self.verdict.value


def check_alpha_true(s: Sentence, alpha: InstaPlayer, adversaries: list[InstaPlayer],
                     fuel: int) -> CheckResult:
    """Semi-check of alpha-truth against a finite adversary family."""
    outcomes = []
    refuted = None
    for i, beta in enumerate(adversaries):
        out = playfull(s, alpha, beta, fuel, role_enforce=True)
        outcomes.append(out)
        if refuted is None and out.resolved and out.truth is False:
            refuted = i
    if refuted is not None:
        return CheckResult(Verdict.REFUTED, refuted, tuple(outcomes))
    if all(o.resolved and o.truth for o in outcomes):
        return CheckResult(Verdict.SUPPORTED, None, tuple(outcomes))
    return CheckResult(Verdict.INCONCLUSIVE, None, tuple(outcomes))


__all__ = [
    "CheckResult", "ConstPlayer", "DivergePlayer", "FunctionPlayer", "GameOutcome",
    "InstaPlayer", "PassPlayer", "Role", "Step", "SuccessorChallenger", "TablePlayer",
    "Verdict", "check_alpha_true", "classify", "playfull", "turn",
]
