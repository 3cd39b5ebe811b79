"""Incremental discovery engines backed by the skyline store.

Four engines share the bucket store but differ in what they materialize
and how they walk the constraint lattice:

* bottom-up: every bucket holds the full contextual skyline; traversal
  climbs from the most specific constraints and stops once pruned.
* top-down: a tuple is stored only at its maximal skyline constraints;
  traversal descends from the unconstrained top and re-homes evicted
  tuples one level down.
* the s-variants first sweep the lattice in the full measure space and
  reuse each comparison's three-way partition to prune constraints in
  every dominated subspace at once.

All four return, per inserted tuple, the set of (constraint, subspace)
pairs under which it enters the contextual skyline.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from itertools import combinations

from skyfact import oracle
from skyfact.dominance import (
    MeasurePartition,
    dominated_in_subspace,
    dominates_in_subspace,
    iter_subspaces,
    partition_measures,
)
from skyfact.lattice import (
    Pattern,
    agreement_mask,
    bound_count,
    bound_mask,
    encode_key,
    enumerate_constraints,
    is_ancestor_or_equal,
)
from skyfact.schema import Schema, TupleRecord
from skyfact.store import BucketEntry, SkylineStore, StoreKey
from skyfact.table import TableBuffer

FactSet = set[tuple[Pattern, int]]


class InvariantViolation(AssertionError):
    """An audit found store contents diverging from a from-scratch recompute."""


@dataclass
class TupleMetrics:
    """Work counters for one insertion.

    ``comparisons`` counts dominance tests made while the tuple's skyline
    membership at the visited constraint was still undetermined;
    maintenance tests (evicting residents below an already-stored
    constraint, or probing at constraints already pruned) are not status
    decisions and are excluded. ``traversed`` counts constraint visits.
    """

    comparisons: int = 0
    traversed: int = 0
    elapsed_s: float = 0.0
    facts: int = 0


@dataclass
class InsertResult:
    facts: FactSet
    metrics: TupleMetrics


class PruneMarks:
    """Pruned region of a tuple's lattice, kept as agreement bitmasks.

    A constraint is pruned iff its bound-dimension mask is a subset of a
    recorded mask; recording the agreement mask of a dominating pair marks
    the whole intersection sublattice in O(1).
    """

    __slots__ = ("_masks",)

    def __init__(self) -> None:
        self._masks: list[int] = []

    def add(self, mask: int) -> None:
        if any((mask & ~m) == 0 for m in self._masks):
            return
        self._masks = [m for m in self._masks if (m & ~mask) != 0]
        self._masks.append(mask)

    def covers(self, bm: int) -> bool:
        return any((bm & ~m) == 0 for m in self._masks)


class StoreEngine:
    """Shared plumbing: schema, caps, subspace sets, store access."""

    name = "store-engine"

    def __init__(
        self,
        schema: Schema,
        table: TableBuffer,
        store: SkylineStore,
        d_hat: int | None = None,
        m_hat: int | None = None,
    ) -> None:
        self.schema = schema
        self.table = table
        self.store = store
        self.d_hat = schema.n_dims if d_hat is None else min(d_hat, schema.n_dims)
        self.m_hat = (
            schema.n_measures if m_hat is None else min(m_hat, schema.n_measures)
        )
        self.reported_masks = list(iter_subspaces(schema.n_measures, self.m_hat))
        self.maintained_masks = list(self.reported_masks)
        self._reported_set = set(self.reported_masks)

    def _dims_of(self, tuple_id: int) -> tuple[int, ...]:
        return self.table.dims_list[self.table.row_of[tuple_id]]

    def insert(self, rec: TupleRecord) -> InsertResult:
        metrics = TupleMetrics()
        start = time.perf_counter()
        facts = self._insert(rec, metrics)
        metrics.elapsed_s = time.perf_counter() - start
        metrics.facts = len(facts)
        return InsertResult(facts, metrics)

    def _insert(self, rec: TupleRecord, metrics: TupleMetrics) -> FactSet:
        raise NotImplementedError

    def skyline_size(self, pattern: Pattern, mask: int) -> int:
        raise NotImplementedError

    def audit(self) -> None:
        raise NotImplementedError

    def _all_satisfied_patterns(self) -> set[Pattern]:
        patterns: set[Pattern] = set()
        for dims in self.table.dims_list:
            patterns.update(enumerate_constraints(dims, self.d_hat))
        return patterns


class BottomUpEngine(StoreEngine):
    """Stores every tuple at every constraint whose contextual skyline
    contains it; per subspace the lattice is climbed breadth-first from
    the most specific constraints."""

    name = "bottom-up"

    def _insert(self, rec: TupleRecord, metrics: TupleMetrics) -> FactSet:
        facts: FactSet = set()
        for mask in self.maintained_masks:
            self._pass(rec, mask, PruneMarks(), facts, metrics)
        return {f for f in facts if f[1] in self._reported_set}

    def _seed_level(self, dims: tuple[int, ...]) -> list[Pattern]:
        k = min(self.d_hat, len(dims))
        level = []
        for idxs in combinations(range(len(dims)), k):
            pattern = [0] * len(dims)
            for i in idxs:
                pattern[i] = dims[i]
            level.append(tuple(pattern))
        level.sort(key=encode_key)
        return level

    def _mark(self, marks: PruneMarks, rec: TupleRecord, uid: int, bm: int) -> None:
        # Everything generalizing the current constraint is pruned.
        marks.add(bm)

    def _on_compare(self, rec: TupleRecord, uid: int, p: MeasurePartition) -> None:
        pass

    def _pass(
        self,
        rec: TupleRecord,
        mask: int,
        marks: PruneMarks,
        facts: FactSet,
        metrics: TupleMetrics,
    ) -> None:
        queue = deque(self._seed_level(rec.dims))
        enqueued = set(queue)
        while queue:
            c = queue.popleft()
            bm = bound_mask(c)
            if marks.covers(bm):
                continue
            metrics.traversed += 1
            key: StoreKey = (c, mask)
            entries = self.store.get(key)
            dominated = False
            kept: list[BucketEntry] = []
            for uid, umeas in entries:
                metrics.comparisons += 1
                p = partition_measures(rec.measures, umeas)
                self._on_compare(rec, uid, p)
                if dominated_in_subspace(p, mask):
                    # A full-skyline bucket cannot also hold residents the
                    # new tuple dominates (transitivity), so nothing needs
                    # eviction here; skip the rest and stop below this branch.
                    dominated = True
                    self._mark(marks, rec, uid, bm)
                    break
                if dominates_in_subspace(p, mask):
                    continue  # evicted
                kept.append((uid, umeas))
            if dominated:
                continue
            kept.append((rec.id, rec.measures))
            self.store.write(key, kept)
            facts.add((c, mask))
            for i, v in enumerate(c):
                if not v:
                    continue
                parent = list(c)
                parent[i] = 0
                pc = tuple(parent)
                if pc not in enqueued and not marks.covers(bound_mask(pc)):
                    enqueued.add(pc)
                    queue.append(pc)

    def skyline_size(self, pattern: Pattern, mask: int) -> int:
        return len(self.store.get((pattern, mask)))

    def audit(self) -> None:
        """Every bucket must equal the contextual skyline recomputed from
        the table, for every satisfied capped constraint and subspace."""
        patterns = self._all_satisfied_patterns()
        for mask in self.maintained_masks:
            for pattern in patterns:
                expect = oracle.skyline_ids(self.table, pattern, mask)
                got = {uid for uid, _ in self.store.get((pattern, mask))}
                if expect != got:
                    raise InvariantViolation(
                        f"bucket {pattern}/{mask:#x}: stored {sorted(got)} "
                        f"!= skyline {sorted(expect)}"
                    )


class SBottomUpEngine(BottomUpEngine):
    """Bottom-up with subspace sharing: a full-space sweep records each
    comparison's partition and pre-prunes every dominated subspace, so the
    per-subspace climbs skip all non-skyline constraints outright."""

    name = "s-bottom-up"

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        full = self.schema.full_measure_mask
        if full not in self.maintained_masks:
            # The sharing sweep runs in the full space even when reported
            # subspaces are capped below it.
            self.maintained_masks.append(full)
        self._sharing: dict[int, PruneMarks] | None = None

    def _insert(self, rec: TupleRecord, metrics: TupleMetrics) -> FactSet:
        facts: FactSet = set()
        full = self.schema.full_measure_mask
        by_mask = {m: PruneMarks() for m in self.maintained_masks}
        self._sharing = by_mask
        self._pass(rec, full, by_mask[full], facts, metrics)
        self._sharing = None
        for mask in self.maintained_masks:
            if mask != full:
                self._pass(rec, mask, by_mask[mask], facts, metrics)
        return {f for f in facts if f[1] in self._reported_set}

    def _mark(self, marks: PruneMarks, rec: TupleRecord, uid: int, bm: int) -> None:
        # The intersection sublattice is pruned in this subspace, not just
        # the part below the current constraint.
        marks.add(agreement_mask(rec.dims, self._dims_of(uid)))

    def _on_compare(self, rec: TupleRecord, uid: int, p: MeasurePartition) -> None:
        if self._sharing is None:
            return
        am = None
        for m, marks in self._sharing.items():
            if dominated_in_subspace(p, m):
                if am is None:
                    am = agreement_mask(rec.dims, self._dims_of(uid))
                marks.add(am)


class TopDownEngine(StoreEngine):
    """Stores a tuple only at its maximal skyline constraints; descends the
    lattice from the top, re-homing evicted residents into children they
    still rule."""

    name = "top-down"

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        # tuple id, subspace mask -> constraints where the tuple is stored
        self.msc: dict[tuple[int, int], set[Pattern]] = {}

    def _insert(self, rec: TupleRecord, metrics: TupleMetrics) -> FactSet:
        facts: FactSet = set()
        lattice = enumerate_constraints(rec.dims, self.d_hat)
        for mask in self.maintained_masks:
            self._pass(rec, mask, lattice, PruneMarks(), facts, metrics,
                       skip_pruned=False, share=None)
        return {f for f in facts if f[1] in self._reported_set}

    def _pass(
        self,
        rec: TupleRecord,
        mask: int,
        lattice: list[Pattern],
        marks: PruneMarks,
        facts: FactSet,
        metrics: TupleMetrics,
        skip_pruned: bool,
        share,
    ) -> None:
        stored_masks: list[int] = []
        for c in lattice:
            bm = bound_mask(c)
            pruned_at_entry = marks.covers(bm)
            if pruned_at_entry and skip_pruned:
                continue
            metrics.traversed += 1
            in_ances = any((sm & ~bm) == 0 for sm in stored_masks)
            undetermined = not pruned_at_entry and not in_ances
            key: StoreKey = (c, mask)
            entries = self.store.get(key)
            kept: list[BucketEntry] = []
            changed = False
            for uid, umeas in entries:
                if undetermined:
                    metrics.comparisons += 1
                p = partition_measures(rec.measures, umeas)
                if share is not None:
                    share(uid, p)
                if dominated_in_subspace(p, mask):
                    # Remaining residents are still examined: another one
                    # may share different dimension values and widen the
                    # pruned region.
                    marks.add(agreement_mask(rec.dims, self._dims_of(uid)))
                    kept.append((uid, umeas))
                elif dominates_in_subspace(p, mask):
                    changed = True
                    self._evict_and_rehome(rec, c, mask, uid, umeas)
                else:
                    kept.append((uid, umeas))
            insert_here = False
            if not marks.covers(bm):
                facts.add((c, mask))
                if not in_ances:
                    insert_here = True
                    kept.append((rec.id, rec.measures))
                    stored_masks.append(bm)
                    self.msc.setdefault((rec.id, mask), set()).add(c)
            if changed or insert_here:
                self.store.write(key, kept)

    def _evict_and_rehome(
        self,
        rec: TupleRecord,
        c: Pattern,
        mask: int,
        uid: int,
        umeas: tuple[float, ...],
    ) -> None:
        """The evicted resident keeps its skyline status in every child
        context it satisfies but the new tuple does not; such a child
        becomes a new maximal constraint unless an existing one covers it."""
        owned = self.msc.setdefault((uid, mask), set())
        owned.discard(c)
        if bound_count(c) + 1 > self.d_hat:
            return
        u_dims = self._dims_of(uid)
        candidates = []
        for i, v in enumerate(c):
            if v == 0 and u_dims[i] != rec.dims[i]:
                child = list(c)
                child[i] = u_dims[i]
                candidates.append(tuple(child))
        candidates.sort(key=encode_key)
        for child in candidates:
            if any(is_ancestor_or_equal(d, child) for d in owned):
                continue
            entries = self.store.get((child, mask))
            entries.append((uid, umeas))
            self.store.write((child, mask), entries)
            owned.add(child)

    def skyline_size(self, pattern: Pattern, mask: int) -> int:
        # Buckets hold only maximal constraints; recompute from the table.
        return oracle.skyline_size(self.table, pattern, mask)

    def audit(self) -> None:
        """A tuple sits in a bucket iff the constraint is one of its maximal
        skyline constraints, recomputed from scratch; the side index must
        mirror the store exactly."""
        for mask in self.maintained_masks:
            for row in range(len(self.table)):
                uid = self.table.ids[row]
                expect = oracle.maximal_skyline_constraints(
                    self.table, row, mask, self.d_hat
                )
                got = self.msc.get((uid, mask), set())
                if expect != got:
                    raise InvariantViolation(
                        f"tuple {uid} mask {mask:#x}: maximal constraints "
                        f"{sorted(got)} != recomputed {sorted(expect)}"
                    )
        mirror: dict[StoreKey, set[int]] = {}
        for (uid, mask), patterns in self.msc.items():
            for p in patterns:
                mirror.setdefault((p, mask), set()).add(uid)
        for key in self.store.keys():
            stored = {uid for uid, _ in self.store.get(key)}
            if stored != mirror.get(key, set()):
                raise InvariantViolation(
                    f"bucket {key[0]}/{key[1]:#x} out of step with the index"
                )
            mirror.pop(key, None)
        leftovers = {k for k, v in mirror.items() if v}
        if leftovers:
            raise InvariantViolation(f"indexed but unstored buckets: {leftovers}")


class STopDownEngine(TopDownEngine):
    """Top-down with subspace sharing: one full-space descent records every
    comparison's partition and marks the pruned constraints of every
    dominated subspace; per-subspace descents then visit only skyline
    constraints."""

    name = "s-top-down"

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        full = self.schema.full_measure_mask
        if full not in self.maintained_masks:
            self.maintained_masks.append(full)

    def _insert(self, rec: TupleRecord, metrics: TupleMetrics) -> FactSet:
        facts: FactSet = set()
        full = self.schema.full_measure_mask
        lattice = enumerate_constraints(rec.dims, self.d_hat)
        by_mask = {m: PruneMarks() for m in self.maintained_masks}

        def share(uid: int, p: MeasurePartition) -> None:
            am = None
            for m, marks in by_mask.items():
                if dominated_in_subspace(p, m):
                    if am is None:
                        am = agreement_mask(rec.dims, self._dims_of(uid))
                    marks.add(am)

        self._pass(rec, full, lattice, by_mask[full], facts, metrics,
                   skip_pruned=False, share=share)
        for mask in self.maintained_masks:
            if mask != full:
                self._pass(rec, mask, lattice, by_mask[mask], facts, metrics,
                           skip_pruned=True, share=None)
        return {f for f in facts if f[1] in self._reported_set}
