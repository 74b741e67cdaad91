"""Labelled partitions: disjoint half-open rational intervals tagged with labels."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .schedule import ZERO, frac


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledPartition:
    pieces: tuple[tuple[Fraction, Fraction, str], ...] = ()

    def __post_init__(self):
        pieces = sorted((frac(a), frac(b), str(label)) for a, b, label in self.pieces)
        for a, b, _ in pieces:
            if not a < b:
                raise PartitionError(f"empty or reversed interval [{a},{b})")
        for (_, b0, _), (a1, _, _) in zip(pieces, pieces[1:]):
            if a1 < b0:
                raise PartitionError("intervals overlap")
        object.__setattr__(self, "pieces", tuple(pieces))

    @classmethod
    def whole(cls, qty, label: str = "*") -> "LabeledPartition":
        qty = frac(qty)
        return cls(((ZERO, qty, label),)) if qty > 0 else cls()

    @classmethod
    def split(cls, parts) -> "LabeledPartition":
        """Consecutive pieces from ``[(length, label), ...]`` starting at 0."""
        pieces, at = [], ZERO
        for length, label in parts:
            length = frac(length)
            if length > 0:
                pieces.append((at, at + length, label))
                at += length
        return cls(tuple(pieces))

    def length(self) -> Fraction:
        return sum((b - a for a, b, _ in self.pieces), ZERO)

    def measure(self, label: str) -> Fraction:
        return sum((b - a for a, b, lab in self.pieces if lab == label), ZERO)

    def labels(self) -> list[str]:
        seen: list[str] = []
        for _, _, lab in self.pieces:
            if lab not in seen:
                seen.append(lab)
        return seen

    def runs(self) -> list[tuple[Fraction, str]]:
        """Pieces as ``(length, label)`` in order of position."""
        return [(b - a, lab) for a, b, lab in self.pieces]
