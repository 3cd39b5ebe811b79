"""Constraints and the lattice of tuple-satisfied constraints.

A constraint is a conjunctive equality pattern over the dimension
attributes, held as a tuple of interned value codes with 0 marking an
unbound (wildcard) slot. The all-wildcard pattern is the top element.

The constraints satisfied by a tuple form a lattice under subsumption;
traversals enumerate it breadth-first with a deterministic tie-break on
the canonical byte key.
"""

from __future__ import annotations

import struct
from enum import Enum
from itertools import combinations
from typing import Iterable, Sequence

Pattern = tuple[int, ...]


class Subsumption(Enum):
    SUBSUMED = "subsumed"            # strictly more specific
    SUBSUMED_OR_EQUAL = "equal"      # identical patterns
    NEITHER = "neither"


def top(n_dims: int) -> Pattern:
    return (0,) * n_dims


def bound_count(pattern: Pattern) -> int:
    return sum(1 for v in pattern if v)


def bound_mask(pattern: Pattern) -> int:
    mask = 0
    for i, v in enumerate(pattern):
        if v:
            mask |= 1 << i
    return mask


def satisfies(dims: Sequence[int], pattern: Pattern) -> bool:
    """True iff every bound slot matches the tuple's dimension code."""
    return all(p == 0 or p == d for p, d in zip(pattern, dims))


def subsumes(c1: Pattern, c2: Pattern) -> Subsumption:
    """Relate c1 to c2: is c1 subsumed by (more specific than) c2?

    SUBSUMED_OR_EQUAL is reported only for identical patterns; SUBSUMED
    requires c2 to generalize c1 by leaving at least one bound slot open.
    """
    equal = True
    for v1, v2 in zip(c1, c2):
        if v2 == 0:
            if v1 != 0:
                equal = False
        elif v2 != v1:
            return Subsumption.NEITHER
    return Subsumption.SUBSUMED_OR_EQUAL if equal else Subsumption.SUBSUMED


def is_ancestor_or_equal(anc: Pattern, desc: Pattern) -> bool:
    """True iff desc is subsumed by or equal to anc (anc generalizes desc)."""
    return all(a == 0 or a == d for a, d in zip(anc, desc))


# --- canonical byte keys -------------------------------------------------

def encode_key(pattern: Pattern) -> bytes:
    """Fixed-width canonical encoding: one 4-byte big-endian code per
    dimension in schema order, wildcard = 0x00000000. Injective and
    order-stable, so keys sort consistently and double as file names."""
    return struct.pack(f">{len(pattern)}I", *pattern)


def decode_key(key: bytes) -> Pattern:
    if len(key) % 4:
        raise ValueError(f"constraint key length {len(key)} is not a multiple of 4")
    return struct.unpack(f">{len(key) // 4}I", key)


def key_hex(pattern: Pattern) -> str:
    return encode_key(pattern).hex()


# --- the lattice of tuple-satisfied constraints ---------------------------

def enumerate_constraints(dims: Sequence[int], max_bound: int) -> list[Pattern]:
    """Every constraint the tuple satisfies with at most max_bound bound
    slots, breadth-first: non-decreasing bound count starting at the top,
    keys ascending within a level, no duplicates."""
    n = len(dims)
    out: list[Pattern] = []
    for k in range(min(max_bound, n) + 1):
        level = []
        for idxs in combinations(range(n), k):
            pattern = [0] * n
            for i in idxs:
                pattern[i] = dims[i]
            level.append(tuple(pattern))
        level.sort(key=encode_key)
        out.extend(level)
    return out


def parents(pattern: Pattern) -> list[Pattern]:
    """Unbind one bound slot each; empty for the top element."""
    out = []
    for i, v in enumerate(pattern):
        if v:
            parent = list(pattern)
            parent[i] = 0
            out.append(tuple(parent))
    return out


def children(pattern: Pattern, dims: Sequence[int], max_bound: int) -> list[Pattern]:
    """Bind one unbound slot to the tuple's value each, respecting the cap."""
    if bound_count(pattern) + 1 > max_bound:
        return []
    out = []
    for i, v in enumerate(pattern):
        if v == 0:
            child = list(pattern)
            child[i] = dims[i]
            out.append(tuple(child))
    return out


def lattice_bottom(dims: Sequence[int]) -> Pattern:
    return tuple(dims)


def intersection_bottom(t_dims: Sequence[int], u_dims: Sequence[int]) -> Pattern:
    """Bottom of the intersection of two tuple lattices: binds exactly the
    dimensions where both tuples agree; the top element when they share
    no value."""
    return tuple(a if a == b else 0 for a, b in zip(t_dims, u_dims))


def agreement_mask(t_dims: Sequence[int], u_dims: Sequence[int]) -> int:
    mask = 0
    for i, (a, b) in enumerate(zip(t_dims, u_dims)):
        if a == b:
            mask |= 1 << i
    return mask


def masked_pattern(dims: Sequence[int], mask: int) -> Pattern:
    return tuple(d if mask & (1 << i) else 0 for i, d in enumerate(dims))


def submasks(mask: int, max_bits: int | None = None) -> list[int]:
    """All submasks of mask (including 0), optionally capped by popcount."""
    bits = [1 << i for i in range(mask.bit_length()) if mask & (1 << i)]
    out = []
    for k in range(len(bits) + 1):
        if max_bits is not None and k > max_bits:
            break
        for combo in combinations(bits, k):
            m = 0
            for b in combo:
                m |= b
            out.append(m)
    return out


# --- frontier -------------------------------------------------------------

class PartitionError(ValueError):
    """Raised when the in/out node sets of a frontier partition overlap."""


def compute_frontier(l1: Iterable[Pattern], l2: Iterable[Pattern]) -> set[Pattern]:
    """Boundary between the nodes where a tuple fails the contextual
    skyline (l1) and those where it belongs (l2).

    The frontier is the set of maximal l2 nodes, plus any minimal l1 node
    that is fully walled in by l1 (all its parents in l1), borders l2 from
    above, and does not sit above any maximal l2 node. Computed
    definitionally by set scans; this is a verification oracle, not a hot
    path.
    """
    l1 = set(l1)
    l2 = set(l2)
    overlap = l1 & l2
    if overlap:
        raise PartitionError(f"nodes on both sides of the partition: {sorted(overlap)}")

    def strictly_above(a: Pattern, b: Pattern) -> bool:
        return a != b and is_ancestor_or_equal(a, b)

    l2_maxima = {n for n in l2 if not any(strictly_above(m, n) for m in l2)}
    l1_minima = {n for n in l1 if not any(strictly_above(n, m) for m in l1)}

    frontier = set(l2_maxima)
    for n in l1_minima:
        if any(p not in l1 for p in parents(n)):
            continue
        if any(strictly_above(n, m) for m in l2_maxima):
            continue
        if not any(strictly_above(n, m) for m in l2):
            continue
        frontier.add(n)
    return frontier
