"""Heuristic exploitation flag on a finite cash trajectory."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .schedule import frac


@dataclass(frozen=True)
class ExploitReport:
    minimum: Fraction
    maximum: Fraction
    flagged: bool
    heuristic: bool = True  # a finite series can only suggest unboundedness

    def __str__(self):
        return f"min={self.minimum} max={self.maximum} flagged={self.flagged} (heuristic)"


def detect_exploitation(cash: Sequence, floor=0, growth=None) -> ExploitReport:
    """Flag a series that never dips below ``floor`` yet climbs past ``growth``.

    ``growth`` defaults to ten times the first value (or 10 if that is 0).
    """
    if not cash:
        raise ValueError("cash series is empty")
    series = [frac(x) for x in cash]
    lo, hi = min(series), max(series)
    if growth is None:
        growth = 10 * series[0] if series[0] > 0 else Fraction(10)
    flagged = lo >= frac(floor) and hi > frac(growth) and series[-1] == hi
    return ExploitReport(lo, hi, flagged)
