"""Baseline engines: exhaustive scan and the two constraint-pruning
baselines that compare the new tuple against the whole table instead of
materialized skylines.

The exhaustive engine is the correctness oracle the rest of the family is
checked against; the baselines prune constraints through the intersection
lattice of every dominating pair, either scanning tuples sequentially or
fetching candidate dominators from a k-d tree one-sided range query.
"""

from __future__ import annotations

import time

from skyfact import oracle
from skyfact.dominance import (
    dominated_in_subspace,
    iter_subspaces,
    partition_measures,
)
from skyfact.engines import FactSet, InsertResult, TupleMetrics
from skyfact.lattice import (
    Pattern,
    agreement_mask,
    enumerate_constraints,
    masked_pattern,
    submasks,
)
from skyfact.schema import Schema, TupleRecord
from skyfact.table import TableBuffer


class TableEngine:
    """Shared base for the storeless engines."""

    name = "table-engine"

    def __init__(
        self,
        schema: Schema,
        table: TableBuffer,
        d_hat: int | None = None,
        m_hat: int | None = None,
    ) -> None:
        self.schema = schema
        self.table = table
        self.d_hat = schema.n_dims if d_hat is None else min(d_hat, schema.n_dims)
        self.m_hat = (
            schema.n_measures if m_hat is None else min(m_hat, schema.n_measures)
        )
        self.reported_masks = list(iter_subspaces(schema.n_measures, self.m_hat))

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
        return oracle.skyline_size(self.table, pattern, mask)

    def audit(self) -> None:
        pass  # nothing materialized, nothing to audit


class BruteForceEngine(TableEngine):
    """Compares the new tuple against every prior tuple, for every
    satisfied constraint, in every subspace. Correct by construction."""

    name = "brute"

    def _insert(self, rec: TupleRecord, metrics: TupleMetrics) -> FactSet:
        n_constraints = len(enumerate_constraints(rec.dims, self.d_hat))
        metrics.traversed += n_constraints * len(self.reported_masks)
        metrics.comparisons += (
            len(self.table) * n_constraints * len(self.reported_masks)
        )
        return oracle.facts_for_tuple(
            self.table, rec, self.d_hat, self.reported_masks
        )


class BaselineSeqEngine(TableEngine):
    """Per subspace: start from all satisfied constraints and delete the
    intersection lattice of every tuple found to dominate the new one."""

    name = "baseline-seq"

    def _insert(self, rec: TupleRecord, metrics: TupleMetrics) -> FactSet:
        facts: FactSet = set()
        patterns = enumerate_constraints(rec.dims, self.d_hat)
        for mask in self.reported_masks:
            metrics.traversed += len(patterns)
            survivors = set(patterns)
            pruned_agreements: set[int] = set()
            for row in range(len(self.table)):
                metrics.comparisons += 1
                p = partition_measures(rec.measures, self.table.meas_list[row])
                if not dominated_in_subspace(p, mask):
                    continue
                am = agreement_mask(rec.dims, self.table.dims_list[row])
                if am in pruned_agreements:
                    continue
                pruned_agreements.add(am)
                for sub in submasks(am, self.d_hat):
                    survivors.discard(masked_pattern(rec.dims, sub))
            facts.update((c, mask) for c in survivors)
        return facts


class KDTree:
    """Point-insertion k-d tree over full-space measure vectors supporting
    one-sided range queries (all masked coordinates >= the probe's).

    Inserts do not rebalance; the tree is a baseline aid, not a hot path.
    """

    class _Node:
        __slots__ = ("point", "tuple_id", "left", "right")

        def __init__(self, point: tuple[float, ...], tuple_id: int) -> None:
            self.point = point
            self.tuple_id = tuple_id
            self.left: KDTree._Node | None = None
            self.right: KDTree._Node | None = None

    def __init__(self, n_axes: int) -> None:
        self.n_axes = n_axes
        self.root: KDTree._Node | None = None

    def insert(self, point: tuple[float, ...], tuple_id: int) -> None:
        if self.root is None:
            self.root = self._Node(point, tuple_id)
            return
        node = self.root
        depth = 0
        while True:
            axis = depth % self.n_axes
            if point[axis] < node.point[axis]:
                if node.left is None:
                    node.left = self._Node(point, tuple_id)
                    return
                node = node.left
            else:
                if node.right is None:
                    node.right = self._Node(point, tuple_id)
                    return
                node = node.right
            depth += 1

    def query_ge(self, probe: tuple[float, ...], mask: int) -> list[int]:
        """Ids of stored points >= the probe on every masked axis;
        unmasked axes are unbounded."""
        axes = [i for i in range(self.n_axes) if mask & (1 << i)]
        out: list[int] = []
        stack = [(self.root, 0)]
        while stack:
            node, depth = stack.pop()
            if node is None:
                continue
            if all(node.point[a] >= probe[a] for a in axes):
                out.append(node.tuple_id)
            axis = depth % self.n_axes
            # Left holds strictly-smaller coordinates on this axis: it can
            # only qualify when the node's value still exceeds the bound.
            if not (mask & (1 << axis)) or node.point[axis] > probe[axis]:
                stack.append((node.left, depth + 1))
            stack.append((node.right, depth + 1))
        return out


class BaselineIdxEngine(TableEngine):
    """BaselineSeq with candidate dominators fetched from the k-d tree
    instead of a sequential scan."""

    name = "baseline-idx"

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self.tree = KDTree(self.schema.n_measures)

    def _insert(self, rec: TupleRecord, metrics: TupleMetrics) -> FactSet:
        facts: FactSet = set()
        patterns = enumerate_constraints(rec.dims, self.d_hat)
        for mask in self.reported_masks:
            metrics.traversed += len(patterns)
            survivors = set(patterns)
            pruned_agreements: set[int] = set()
            for uid in sorted(self.tree.query_ge(rec.measures, mask)):
                metrics.comparisons += 1
                row = self.table.row_of[uid]
                p = partition_measures(rec.measures, self.table.meas_list[row])
                if not dominated_in_subspace(p, mask):
                    continue  # equal on the whole subspace: not a dominator
                am = agreement_mask(rec.dims, self.table.dims_list[row])
                if am in pruned_agreements:
                    continue
                pruned_agreements.add(am)
                for sub in submasks(am, self.d_hat):
                    survivors.discard(masked_pattern(rec.dims, sub))
            facts.update((c, mask) for c in survivors)
        self.tree.insert(rec.measures, rec.id)
        return facts
