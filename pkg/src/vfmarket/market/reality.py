"""Empirical reality: when the truth of each Delta0 sentence becomes public."""
from __future__ import annotations

from typing import Iterable, Optional

from ..fol import Sentence, canonical_code, eval_cost, eval_delta0, negate


class RealityError(ValueError):
    pass


class ArithmeticReality:
    """Reveals ``eval_delta0(Q)`` from a schedule time onwards.

    ``schedule="cost"`` reveals ``Q`` once ``t`` reaches the work needed to
    evaluate it; ``"code"`` waits for ``min(code(Q), code(not Q))``.  Both
    times are equal for ``Q`` and its negation.
    """

    def __init__(self, schedule: str = "cost", cost_cap: int = 10**6):
        if schedule not in ("cost", "code"):
            raise RealityError(f"unknown schedule {schedule!r}")
        self.schedule = schedule
        self.cost_cap = cost_cap
        self._cache: dict[Sentence, tuple[int, bool]] = {}

    def reveal_time(self, s: Sentence) -> Optional[int]:
        if s.prefix:
            return None
        return self._entry(s)[0]

    def _entry(self, s: Sentence) -> tuple[int, bool]:
        hit = self._cache.get(s)
        if hit is None:
            if self.schedule == "cost":
                when = eval_cost(s, self.cost_cap)
            else:
                when = min(canonical_code(s), canonical_code(negate(s)))
            hit = (when, eval_delta0(s))
            self._cache[s] = hit
        return hit

    def value(self, t: int, s: Sentence) -> Optional[bool]:
        """Truth of ``s`` as known at time ``t``; ``None`` while unrevealed."""
        if s.prefix:
            return None
        when, truth = self._entry(s)
        return truth if when <= t else None


class ScriptedReality:
    """A fixed revelation script, falling back to arithmetic for unscripted sentences."""

    def __init__(self, script: Iterable[tuple[int, Sentence, bool]],
                 fallback: ArithmeticReality | None = None):
        self.fallback = fallback or ArithmeticReality()
        self.script: dict[Sentence, tuple[int, bool]] = {}
        for t, s, truth in script:
            if s.prefix:
                raise RealityError(f"only Delta0 sentences can be revealed: {s}")
            for key, val in ((s, bool(truth)), (negate(s), not truth)):
                prior = self.script.get(key)
                if prior is not None and prior[1] != val:
                    raise RealityError(f"contradictory revelations for {key}")
                when = t if prior is None else min(prior[0], t)
                self.script[key] = (when, val)

    def reveal_time(self, s: Sentence) -> Optional[int]:
        if s in self.script:
            return self.script[s][0]
        return self.fallback.reveal_time(s)

    def value(self, t: int, s: Sentence) -> Optional[bool]:
        hit = self.script.get(s)
        if hit is None:
            return self.fallback.value(t, s)
        return hit[1] if hit[0] <= t else None
