"""Prominence ranking of discovered facts.

A fact's prominence is the exact ratio of context size to contextual
skyline size, both including the just-inserted tuple. Ratios are kept as
exact rationals so tie groups compare correctly (5/2 equals 10/4).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from skyfact.lattice import Pattern, encode_key
from skyfact.store import ContextCounter


@dataclass(frozen=True)
class ScoredFact:
    pattern: Pattern
    mask: int
    context_size: int
    skyline_size: int

    @property
    def prominence(self) -> Fraction:
        return Fraction(self.context_size, self.skyline_size)

    def sort_key(self) -> tuple[bytes, int]:
        return (encode_key(self.pattern), self.mask)


def score_facts(
    facts: Iterable[tuple[Pattern, int]],
    counter: ContextCounter,
    skyline_size: Callable[[Pattern, int], int],
) -> list[ScoredFact]:
    """Score each fact of one inserted tuple; counts must already include
    the tuple itself. Returns facts in descending prominence, ties in
    store-key order."""
    scored = []
    for pattern, mask in facts:
        ctx = counter.count(pattern)
        sky = skyline_size(pattern, mask)
        if sky < 1 or ctx < sky:
            raise ValueError(
                f"inconsistent sizes for {pattern}/{mask:#x}: {ctx}/{sky}"
            )
        scored.append(ScoredFact(pattern, mask, ctx, sky))
    scored.sort(key=lambda f: (-f.prominence, f.sort_key()))
    return scored


def prominent_facts(scored: list[ScoredFact], tau: Fraction) -> list[ScoredFact]:
    """The facts attaining the highest prominence, provided it reaches the
    threshold; empty otherwise. Input must be sorted (score_facts order)."""
    if not scored:
        return []
    best = scored[0].prominence
    if best < tau:
        return []
    return [f for f in scored if f.prominence == best]


def top_k_facts(scored: list[ScoredFact], k: int) -> list[ScoredFact]:
    """The k highest-prominence facts regardless of the max-group rule."""
    return scored[: max(k, 0)]
