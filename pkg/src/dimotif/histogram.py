"""Motif histogram container shared by the engine, the oracle and reports."""
from __future__ import annotations

from dataclasses import dataclass, field

from .isomorph import MotifId


@dataclass
class Histogram:
    k: int
    counts: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, motif: MotifId) -> int:
        return self.counts.get(motif, 0)

    def __len__(self) -> int:
        return len(self.counts)

    def items(self):
        return sorted(self.counts.items())

    def by_string(self) -> dict[str, int]:
        return {str(m): c for m, c in sorted(self.counts.items())}
