"""Dominance testing over measure subspaces.

A measure subspace is a non-empty bit set over measure attribute indices.
All comparisons assume measures were normalized to larger-is-better.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, Sequence


class DominanceOutcome(IntEnum):
    DOMINATES = 0
    DOMINATED_BY = 1
    EQUAL = 2
    INCOMPARABLE = 3


@dataclass(frozen=True)
class MeasurePartition:
    """Three-way split of the measure space for a tuple pair (t, u).

    gt/lt/eq are disjoint bitmasks covering all measure attributes:
    gt holds attributes where t > u, lt where t < u, eq where equal.
    """

    gt: int
    lt: int
    eq: int


def partition_measures(t: Sequence[float], u: Sequence[float]) -> MeasurePartition:
    gt = lt = eq = 0
    bit = 1
    for a, b in zip(t, u):
        if a > b:
            gt |= bit
        elif a < b:
            lt |= bit
        else:
            eq |= bit
        bit <<= 1
    return MeasurePartition(gt, lt, eq)


def outcome_in_subspace(p: MeasurePartition, mask: int) -> DominanceOutcome:
    """Dominance outcome of t versus u restricted to the subspace mask."""
    has_gt = bool(p.gt & mask)
    has_lt = bool(p.lt & mask)
    if has_gt and not has_lt:
        return DominanceOutcome.DOMINATES
    if has_lt and not has_gt:
        return DominanceOutcome.DOMINATED_BY
    if not has_gt and not has_lt:
        return DominanceOutcome.EQUAL
    return DominanceOutcome.INCOMPARABLE


def dominates(t: Sequence[float], u: Sequence[float], mask: int) -> DominanceOutcome:
    """Outcome of t versus u on the subspace: strict Pareto dominance.

    DOMINATES iff t >= u on every attribute in the mask and t > u on at
    least one; EQUAL iff componentwise equal; antisymmetric by construction.
    """
    return outcome_in_subspace(partition_measures(t, u), mask)


def dominated_in_subspace(p: MeasurePartition, mask: int) -> bool:
    """True iff t is strictly dominated by u in the subspace.

    Holds iff the mask intersects lt and avoids gt, for p computed
    as partition_measures(t, u).
    """
    return bool(p.lt & mask) and not (p.gt & mask)


def dominates_in_subspace(p: MeasurePartition, mask: int) -> bool:
    """True iff t strictly dominates u in the subspace (mirror test)."""
    return bool(p.gt & mask) and not (p.lt & mask)


def dominated_subspace_masks(p: MeasurePartition, masks: Sequence[int]) -> list[int]:
    """Filter candidate subspace masks to those where t is dominated by u."""
    return [m for m in masks if (p.lt & m) and not (p.gt & m)]


def iter_subspaces(n_measures: int, max_size: int) -> Iterator[int]:
    """All non-empty measure subspace masks with at most max_size attributes,
    in ascending mask order."""
    for mask in range(1, 1 << n_measures):
        if mask.bit_count() <= max_size:
            yield mask


def subspace_names(mask: int, measure_names: Sequence[str]) -> list[str]:
    return [name for i, name in enumerate(measure_names) if mask & (1 << i)]
