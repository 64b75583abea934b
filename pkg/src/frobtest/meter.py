"""Multiplication accounting in selfridges (mults mod n per log2 n)."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field


class Meter:
    """Passive counter shared by the arithmetic of one test run.

    ``mults`` counts full multiplications mod n.  Jacobi symbols, gcds and
    inversions go to ``aux`` and stay out of the selfridge numerator.
    Code that accepts ``meter=None`` skips the bookkeeping entirely.
    """

    __slots__ = ("mults", "aux")

    def __init__(self):
        self.mults = 0
        self.aux: Counter = Counter()

    def count(self, k: int) -> None:
        self.mults += k

    def note(self, op: str) -> None:
        self.aux[op] += 1

    def report(self, n: int) -> "MeterReport":
        return MeterReport.of(self.mults, dict(self.aux), n)


def log2(n: int) -> float:
    return math.log2(n)


@dataclass(frozen=True)
class MeterReport:
    mults: int
    aux_ops: dict = field(default_factory=dict)
    log2n: float = 1.0
    selfridges: float = 0.0

    @classmethod
    def of(cls, mults: int, aux_ops: dict, n: int) -> "MeterReport":
        lg = log2(n)
        return cls(mults, dict(sorted(aux_ops.items())), lg, mults / lg)

    def as_dict(self) -> dict:
        return {"mults": self.mults, "aux_ops": self.aux_ops,
                "selfridges": self.selfridges}


def metered_run(test, n: int):
    """Run ``test(meter)`` with a fresh meter; return ``(result, MeterReport)``."""
    meter = Meter()
    result = test(meter)
    return result, meter.report(n)


def sprp_budget(n: int) -> float:
    lg = log2(n)
    return lg + 2 * math.log2(lg) + 20


def qft_budget(n: int) -> float:
    lg = log2(n)
    return 3 * lg + 10 * math.log2(lg) + 80
