"""Conjunctive combination of two bbas, with an itemized conflict record."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algebra import FrameMismatchError, SetElement
from .mass import MassFunction, require_closed

__all__ = ["ConflictLedger", "conjunctive_combine"]


@dataclass(frozen=True)
class ConflictLedger:
    """Products ``m1(X) * m2(Y)`` for every pair of focal elements with an
    empty intersection, in the iteration order of the operands."""

    pairs: tuple[tuple[SetElement, SetElement, float], ...] = ()

    @property
    def total(self) -> float:
        return math.fsum(p for _, _, p in self.pairs)

    def __len__(self):
        return len(self.pairs)


def conjunctive_combine(
    m1: MassFunction, m2: MassFunction
) -> tuple[MassFunction, ConflictLedger]:
    """Unnormalized conjunctive rule.

    The result keeps the conflicting mass on the empty set
    (``allow_empty_focal=True``); the ledger lists where it came from.
    """
    if m1.frame != m2.frame:
        raise FrameMismatchError("cannot combine bbas over different frames")
    require_closed(m1)
    require_closed(m2)
    buckets: dict[SetElement, list[float]] = {}
    pairs = []
    for x, mx in m1.items():
        for y, my in m2.items():
            z = x & y
            product = mx * my
            buckets.setdefault(z, []).append(product)
            if not z.bits:
                pairs.append((x, y, product))
    combined = MassFunction(
        m1.frame,
        ((z, math.fsum(parts)) for z, parts in buckets.items()),
        allow_empty_focal=True,
    )
    return combined, ConflictLedger(tuple(pairs))
